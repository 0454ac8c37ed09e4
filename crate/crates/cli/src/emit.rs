//! CSV output. Floats carry 17 significant digits, enough to read every
//! value back bit-exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{ensure, Context, Result};
use mcg_core::{PeriodEstimate, Trajectory};

use crate::sweep::SweepRow;

pub const BIFURCATION_HEADER: &str = "alpha,zmax";
pub const ANALYSIS_HEADER: &str = "alpha,l1,l2,l3,ky_dim,class,period,double_spiral";
pub const TRAJECTORY_HEADER: &str = "t,x,y,z";

/// Scientific notation with 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn write(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))
}

/// One line per `(alpha, z_max)`; a diverged row is a single
/// `alpha,diverged=1` line.
pub fn bifurcation_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(BIFURCATION_HEADER);
    s.push('\n');
    for r in rows {
        if r.diverged {
            writeln!(s, "{},diverged=1", num(r.alpha)).unwrap();
        }
        for &z in &r.z_maxima {
            writeln!(s, "{},{}", num(r.alpha), num(z)).unwrap();
        }
    }
    s
}

fn period_field(p: &Option<PeriodEstimate>) -> String {
    match p {
        Some(PeriodEstimate::Periodic(n)) => n.to_string(),
        Some(PeriodEstimate::Ambiguous { .. }) => "ambiguous".into(),
        Some(PeriodEstimate::Aperiodic { .. }) | None => String::new(),
    }
}

/// One line per alpha; absent analyses leave their fields empty.
pub fn analysis_csv(rows: &[SweepRow]) -> String {
    let mut s = String::from(ANALYSIS_HEADER);
    s.push('\n');
    for r in rows {
        if r.diverged {
            writeln!(s, "{},,,,,diverged,,", num(r.alpha)).unwrap();
            continue;
        }
        let l = match &r.spectrum {
            Some(ls) => ls.exponents.map(num).join(","),
            None => ",,".into(),
        };
        let ky = r.ky_dim.map(num).unwrap_or_default();
        let (class, spiral) = match &r.class {
            Some(c) => (c.kind.label(), u8::from(c.double_spiral).to_string()),
            None => (String::new(), String::new()),
        };
        writeln!(s, "{},{l},{ky},{class},{},{spiral}", num(r.alpha), period_field(&r.period)).unwrap();
    }
    s
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut s = String::with_capacity(96 * (traj.len() + 1));
    s.push_str(TRAJECTORY_HEADER);
    s.push('\n');
    for (t, p) in traj.times().iter().zip(traj.states()) {
        writeln!(s, "{},{},{},{}", num(*t), num(p.x), num(p.y), num(p.z)).unwrap();
    }
    s
}

pub fn write_bifurcation(rows: &[SweepRow], path: &Path) -> Result<()> {
    ensure!(!rows.is_empty(), "no sweep rows to write");
    write(path, &bifurcation_csv(rows))
}

pub fn write_analysis(rows: &[SweepRow], path: &Path) -> Result<()> {
    ensure!(!rows.is_empty(), "no sweep rows to write");
    write(path, &analysis_csv(rows))
}

pub fn write_trajectory(traj: &Trajectory, path: &Path) -> Result<()> {
    ensure!(!traj.is_empty(), "trajectory has no samples");
    write(path, &trajectory_csv(traj))
}

/// Writes `header` and `rows` of numbers.
pub fn write_table(path: &Path, header: &str, rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut s = String::from(header);
    s.push('\n');
    for row in rows {
        s.push_str(&row.into_iter().map(num).collect::<Vec<_>>().join(","));
        s.push('\n');
    }
    write(path, &s)
}
