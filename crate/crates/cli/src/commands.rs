//! Subcommand bodies. Each returns the text it prints to standard output.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use mcg_core::analyze::HALF_SPACE_OCCUPANCY;
use mcg_core::kv::KvDoc;
use mcg_core::{
    analyze_point, fit_thermistor, origin_eigenvalues, EigenReport, PeriodEstimate, PhysicalParams, PointAnalysis,
    Trajectory,
};

use crate::config::{RunConfig, TemperatureGrid};
use crate::emit::{self, num};
use crate::svg::{self, Axes, Series};
use crate::sweep::{run_sweep, AlphaRange, SweepRow, SweepSpec};

/// Most points drawn in one phase portrait.
const MAX_PLOT_POINTS: usize = 20_000;

fn ensure_dir(out: &Path) -> Result<()> {
    fs::create_dir_all(out).with_context(|| format!("cannot create output directory {}", out.display()))
}

fn eigen_lines(s: &mut String, rep: &EigenReport) {
    let [l2, l3] = rep.lambda23;
    writeln!(s, "eigen.lambda1={}", rep.lambda1).unwrap();
    writeln!(s, "eigen.lambda2={l2}").unwrap();
    writeln!(s, "eigen.lambda3={l3}").unwrap();
    writeln!(s, "eigen.discriminant={}", rep.discriminant).unwrap();
    match rep.alpha_star {
        Some(a) => writeln!(s, "eigen.alpha_star={a}").unwrap(),
        None => writeln!(s, "eigen.alpha_star=undefined").unwrap(),
    }
    writeln!(s, "eigen.kind={}", rep.kind).unwrap();
}

fn period_text(p: &Option<PeriodEstimate>) -> String {
    match p {
        Some(PeriodEstimate::Periodic(n)) => n.to_string(),
        Some(PeriodEstimate::Aperiodic { .. }) => "none".into(),
        Some(PeriodEstimate::Ambiguous { counts }) => format!("ambiguous{counts:?}"),
        None => "insufficient-peaks".into(),
    }
}

fn thin(traj: &Trajectory, f: impl Fn(&mcg_core::State) -> (f64, f64)) -> Vec<(f64, f64)> {
    let every = traj.len().div_ceil(MAX_PLOT_POINTS).max(1);
    traj.states().iter().step_by(every).map(f).collect()
}

/// Report for one parameter point.
pub fn simulate_report(cfg: &RunConfig, r: &PointAnalysis) -> String {
    let mut s = String::new();
    if let Some(ph) = &cfg.physical {
        for (k, v) in ph.kv_pairs() {
            writeln!(s, "physical.{k}={v}").unwrap();
        }
        for (k, v) in cfg.params.kv_pairs() {
            writeln!(s, "mapped.{k}={v}").unwrap();
        }
    } else {
        for (k, v) in cfg.params.kv_pairs() {
            writeln!(s, "param.{k}={v}").unwrap();
        }
    }
    eigen_lines(&mut s, &r.eigen);
    let ls = &r.spectrum;
    for (i, l) in ls.exponents.iter().enumerate() {
        writeln!(s, "lce.l{}={l}", i + 1).unwrap();
    }
    writeln!(s, "lce.sum={}", ls.sum()).unwrap();
    writeln!(s, "lce.averaging_time={}", ls.averaging_time).unwrap();
    writeln!(s, "lce.renorm_interval={}", ls.renorm_interval).unwrap();
    writeln!(s, "lce.tail_variation={}", ls.max_tail_variation()).unwrap();
    writeln!(s, "samples={}", r.trajectory.len()).unwrap();
    writeln!(s, "z_maxima={}", r.z_maxima.len()).unwrap();
    writeln!(s, "period={}", period_text(&r.period)).unwrap();
    writeln!(s, "class={}", r.class.kind.label()).unwrap();
    if let Some(g) = &r.geometry {
        writeln!(s, "geometry.mirror_fraction={}", g.mirror_fraction).unwrap();
        writeln!(s, "geometry.occupancy={},{} (min {HALF_SPACE_OCCUPANCY})", g.occupancy[0], g.occupancy[1]).unwrap();
        writeln!(s, "geometry.tall_peak_offset={}", g.tall_peak_offset).unwrap();
    }
    writeln!(s, "double_spiral={} (heuristic thresholds)", u8::from(r.class.double_spiral)).unwrap();
    writeln!(s, "ky_dim={}", r.ky_dim).unwrap();
    s
}

/// Integrates and analyses one point; with `out`, writes the trajectory and
/// phase portraits there.
pub fn simulate(cfg: &RunConfig, out: Option<&Path>) -> Result<String> {
    let r = analyze_point(&cfg.params, cfg.initial, &cfg.integration, &cfg.analysis)
        .with_context(|| format!("analysis at alpha={}", cfg.params.alpha()))?;
    let report = simulate_report(cfg, &r);
    if let Some(out) = out {
        ensure_dir(out)?;
        emit::write_trajectory(&r.trajectory, &out.join("trajectory.csv"))?;
        let title = |proj: &str| format!("Phase portrait {proj}, alpha = {}", cfg.params.alpha());
        svg::write_scatter(
            &thin(&r.trajectory, |p| (p.x, p.y)),
            &Axes::new(title("x-y"), "x", "y"),
            &out.join("phase_xy.svg"),
        )?;
        svg::write_scatter(
            &thin(&r.trajectory, |p| (p.y, p.z)),
            &Axes::new(title("y-z"), "y", "z"),
            &out.join("phase_yz.svg"),
        )?;
        fs::write(out.join("report.txt"), &report).with_context(|| format!("cannot write {}", out.display()))?;
    }
    Ok(report)
}

pub fn sweep_spec(cfg: &RunConfig, range: AlphaRange, workers: usize) -> SweepSpec {
    SweepSpec {
        range,
        base: cfg.params,
        integration: cfg.integration,
        initial: cfg.initial,
        analysis: cfg.analysis,
        analyses: cfg.analyses,
        workers,
    }
}

/// Runs the sweep and writes `bifurcation.csv`, `bifurcation.svg` and, when
/// spectra were computed, `analysis.csv`.
pub fn sweep(spec: &SweepSpec, out: &Path) -> Result<(Vec<SweepRow>, String)> {
    let rows = run_sweep(spec)?;
    ensure_dir(out)?;
    let a = spec.analyses;
    let mut s = String::new();
    if a.maxima {
        let path = out.join("bifurcation.csv");
        emit::write_bifurcation(&rows, &path)?;
        writeln!(s, "bifurcation={}", path.display()).unwrap();
        let points: Vec<(f64, f64)> = rows.iter().flat_map(|r| r.z_maxima.iter().map(move |&z| (r.alpha, z))).collect();
        if !points.is_empty() {
            let axes = Axes::new("Bifurcation diagram: maxima of z", "alpha", "z_max");
            svg::write_scatter(&points, &axes, &out.join("bifurcation.svg"))?;
        }
    }
    if a.lce || a.classify {
        let path = out.join("analysis.csv");
        emit::write_analysis(&rows, &path)?;
        writeln!(s, "analysis={}", path.display()).unwrap();
    }
    writeln!(s, "rows={}", rows.len()).unwrap();
    writeln!(s, "diverged={}", rows.iter().filter(|r| r.diverged).count()).unwrap();
    Ok((rows, s))
}

pub const EIGEN_HEADER: &str = "alpha,lambda1,re_lambda2,im_lambda2,re_lambda3,im_lambda3,discriminant,kind";

/// Table of origin eigenvalues across `range`.
pub fn eigen_table(cfg: &RunConfig, range: AlphaRange) -> Result<String> {
    range.validate()?;
    let mut s = String::from(EIGEN_HEADER);
    s.push('\n');
    let mut star = None;
    for alpha in range.values() {
        let rep = origin_eigenvalues(&cfg.params.with_alpha(alpha)?);
        star = rep.alpha_star;
        let [l2, l3] = rep.lambda23;
        writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            num(alpha),
            num(rep.lambda1),
            num(l2.re),
            num(l2.im),
            num(l3.re),
            num(l3.im),
            num(rep.discriminant),
            rep.kind
        )
        .unwrap();
    }
    match star {
        Some(a) => writeln!(s, "# alpha_star={}", num(a)).unwrap(),
        None => writeln!(s, "# alpha_star=undefined (a + theta = 0)").unwrap(),
    }
    Ok(s)
}

/// Thermistor inputs used by `fit-thermistor`. Only `R0`, `beta`, `T0` and
/// the temperature grid matter; other keys in the file are ignored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermistorConfig {
    pub r0: f64,
    pub beta: f64,
    pub t0: f64,
    pub grid: TemperatureGrid,
}

impl Default for ThermistorConfig {
    fn default() -> Self {
        Self { r0: 60.0, beta: 3000.0, t0: PhysicalParams::DEFAULT_T0, grid: TemperatureGrid::default() }
    }
}

impl ThermistorConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc = KvDoc::parse(text)?;
        let d = Self::default();
        Ok(Self {
            r0: doc.get("R0")?.unwrap_or(d.r0),
            beta: doc.get("beta")?.unwrap_or(d.beta),
            t0: doc.get("T0")?.unwrap_or(d.t0),
            grid: TemperatureGrid {
                t_min: doc.get("t_min")?.unwrap_or(d.grid.t_min),
                t_max: doc.get("t_max")?.unwrap_or(d.grid.t_max),
                points: doc.get("t_points")?.unwrap_or(d.grid.points),
            },
        })
    }

    fn physical(&self, t0: f64) -> PhysicalParams {
        // only R0, beta and T0 enter the resistance characteristics
        PhysicalParams {
            capacitance: 1.0,
            inductance: 1.0,
            r0: self.r0,
            beta: self.beta,
            t0,
            heat_capacitance: 1.0,
            dissipation: 1.0,
            a: 0.0,
            b: 0.0,
        }
    }
}

/// Lower and upper bounds of the expansion temperatures scanned by `fit-thermistor`.
pub const T0_SCAN: (f64, f64, usize) = (250.0, 300.0, 51);

/// R^2 of the Taylor surrogate on the configured grid for each expansion temperature.
pub fn r_squared_scan(cfg: &ThermistorConfig) -> Result<Vec<(f64, f64)>> {
    let (lo, hi, n) = T0_SCAN;
    (0..n)
        .map(|i| {
            let t0 = lo + (hi - lo) * i as f64 / (n - 1) as f64;
            let ph = cfg.physical(t0);
            ph.validate()?;
            let fit = fit_thermistor(&ph, cfg.grid.t_min, cfg.grid.t_max, cfg.grid.points)?;
            Ok((t0, fit.r_squared))
        })
        .collect()
}

/// Compares the exponential characteristic with its Taylor surrogate.
pub fn fit_thermistor_cmd(cfg: &ThermistorConfig, out: Option<&Path>) -> Result<String> {
    let ph = cfg.physical(cfg.t0);
    ph.validate()?;
    let g = cfg.grid;
    let fit = fit_thermistor(&ph, g.t_min, g.t_max, g.points)?;
    let scan = r_squared_scan(cfg)?;
    let best = scan.iter().copied().fold((f64::NAN, f64::NEG_INFINITY), |b, p| if p.1 > b.1 { p } else { b });
    let mut s = String::new();
    writeln!(s, "R0={}", cfg.r0).unwrap();
    writeln!(s, "beta={}", cfg.beta).unwrap();
    writeln!(s, "T0={}", cfg.t0).unwrap();
    writeln!(s, "grid={}..{} ({} points)", g.t_min, g.t_max, g.points).unwrap();
    writeln!(s, "r_squared={}", fit.r_squared).unwrap();
    writeln!(s, "best_T0={}", best.0).unwrap();
    writeln!(s, "best_r_squared={}", best.1).unwrap();
    if let Some(out) = out {
        ensure_dir(out)?;
        let rows = (0..fit.temperatures.len()).map(|i| vec![fit.temperatures[i], fit.exponential[i], fit.taylor[i]]);
        emit::write_table(&out.join("thermistor_fit.csv"), "T,exponential,taylor", rows)?;
        emit::write_table(&out.join("r_squared_vs_t0.csv"), "T0,r_squared", scan.iter().map(|&(a, b)| vec![a, b]))?;
        let exp: Vec<(f64, f64)> = fit.temperatures.iter().copied().zip(fit.exponential.iter().copied()).collect();
        let tay: Vec<(f64, f64)> = fit.temperatures.iter().copied().zip(fit.taylor.iter().copied()).collect();
        let axes = Axes::new(format!("Thermistor resistance, T0 = {} K", cfg.t0), "T (K)", "R (ohm)");
        svg::write_series(
            &[Series { name: "exponential", points: &exp }, Series { name: "Taylor", points: &tay }],
            &axes,
            &out.join("thermistor_fit.svg"),
        )?;
        svg::write_scatter(
            &scan,
            &Axes::new("R^2 of the Taylor surrogate", "T0 (K)", "R^2"),
            &out.join("r_squared_vs_t0.svg"),
        )?;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigen_table_rows() {
        let cfg = RunConfig::default();
        let t = eigen_table(&cfg, AlphaRange { min: 1.0, max: 6.0, step: 5.0 }).unwrap();
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines[0], EIGEN_HEADER);
        assert!(lines[1].ends_with("SaddleFocus"));
        assert!(lines[2].ends_with("SaddleNode"));
        assert!(lines[3].starts_with("# alpha_star=5.42"));
    }

    #[test]
    fn thermistor_defaults_and_scan() {
        let cfg = ThermistorConfig::parse("R0 = 60\nbeta = 3000\nT0 = 270\n").unwrap();
        let text = fit_thermistor_cmd(&cfg, None).unwrap();
        assert!(text.contains("T0=270"));
        let r2: f64 = text.lines().find_map(|l| l.strip_prefix("r_squared=")).unwrap().parse().unwrap();
        assert!(r2 > 0.9);
        let scan = r_squared_scan(&cfg).unwrap();
        assert_eq!(scan.len(), T0_SCAN.2);
    }
}
