use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mcg_cli::commands::sweep_spec;
use mcg_cli::{run_sweep, AlphaRange, Analyses, RunConfig};

const STUDY: &str = "alpha = 0.5\neta = 12.2\na = -6\nb = 3\nmu = 3\ngamma = -2\ntheta = 3\nepsilon = 0.6\n";
const SHORT: &str = "t_end = 300\nt_skip = 100\nlce_transient = 100\nlce_time = 200\n";

fn mcg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcg")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let p = dir.join("run.cfg");
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn missing_key_fails_with_one_line() {
    let dir = tempfile::tempdir().unwrap();
    let no_eta: String = STUDY.lines().filter(|l| !l.starts_with("eta")).map(|l| format!("{l}\n")).collect();
    let cfg = write_config(dir.path(), &no_eta);
    let out = mcg(&["simulate", "--config", &cfg]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.contains("`eta`"), "{err}");
}

#[test]
fn malformed_line_is_located() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{STUDY}h 0.01\n"));
    let err = String::from_utf8(mcg(&["simulate", "--config", &cfg]).stderr).unwrap();
    assert!(err.contains("line 9"), "{err}");
}

#[test]
fn simulate_prints_labelled_report_and_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{STUDY}{SHORT}"));
    let out_dir = dir.path().join("out");
    let out = mcg(&["simulate", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    for key in ["eigen.lambda1=", "eigen.kind=SaddleFocus", "lce.l1=", "class=", "ky_dim=", "double_spiral="] {
        assert!(text.contains(key), "missing {key} in\n{text}");
    }
    for file in ["trajectory.csv", "phase_xy.svg", "phase_yz.svg", "report.txt"] {
        assert!(out_dir.join(file).exists(), "{file}");
    }
}

#[test]
fn physical_config_is_echoed() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!("params = physical\nC = 0.5\nL = 12.2\nR0 = 60\nbeta = 3000\nT0 = 300\nc = 20\ndelta = 12\na = -6\nb = 3\n{SHORT}");
    let cfg = write_config(dir.path(), &body);
    let out = mcg(&["simulate", "--config", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("physical.R0=60\n") && text.contains("physical.beta=3000\n"));
    assert!(text.contains("mapped.theta=3\n") && text.contains("mapped.epsilon=0.6\n"));
    assert!(text.find("mapped.alpha").unwrap() < text.find("lce.l1").unwrap());
}

#[test]
fn sweep_csv_parses_back_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_text = format!("{STUDY}{SHORT}");
    let out_dir = dir.path().join("sweep");
    let out = mcg(&[
        "sweep",
        "--config",
        &write_config(dir.path(), &cfg_text),
        "--out",
        out_dir.to_str().unwrap(),
        "--alpha-min",
        "0.2",
        "--alpha-max",
        "0.6",
        "--alpha-step",
        "0.1",
        "--workers",
        "3",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let cfg = RunConfig::parse(&cfg_text).unwrap();
    let rows = run_sweep(&sweep_spec(&cfg, AlphaRange { min: 0.2, max: 0.6, step: 0.1 }, 1)).unwrap();

    let mut rdr = csv::Reader::from_path(out_dir.join("bifurcation.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["alpha", "zmax"]);
    let parsed: Vec<(f64, f64)> =
        rdr.records().map(|r| r.unwrap()).map(|r| (r[0].parse().unwrap(), r[1].parse().unwrap())).collect();
    let expected: Vec<(f64, f64)> = rows.iter().flat_map(|r| r.z_maxima.iter().map(move |&z| (r.alpha, z))).collect();
    assert_eq!(parsed.len(), expected.len());
    for (p, e) in parsed.iter().zip(&expected) {
        assert_eq!((p.0.to_bits(), p.1.to_bits()), (e.0.to_bits(), e.1.to_bits()));
    }

    let mut rdr = csv::Reader::from_path(out_dir.join("analysis.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["alpha", "l1", "l2", "l3", "ky_dim", "class", "period", "double_spiral"]);
    let recs: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(recs.len(), rows.len());
    for (rec, row) in recs.iter().zip(&rows) {
        assert_eq!(rec[0].parse::<f64>().unwrap().to_bits(), row.alpha.to_bits());
        let ls = row.spectrum.unwrap();
        for k in 0..3 {
            assert_eq!(rec[1 + k].parse::<f64>().unwrap().to_bits(), ls.exponents[k].to_bits());
        }
        assert_eq!(&rec[5], row.class.unwrap().kind.label());
    }
}

#[test]
fn svg_outputs_are_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("svg");
    let cfg = write_config(dir.path(), &format!("{STUDY}{SHORT}analyses = maxima\n"));
    let o = out_dir.to_str().unwrap();
    assert!(mcg(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        o,
        "--alpha-min",
        "0.2",
        "--alpha-max",
        "0.3",
        "--alpha-step",
        "0.05"
    ])
    .status
    .success());
    assert!(mcg(&["simulate", "--config", &cfg, "--out", o]).status.success());
    assert!(mcg(&["fit-thermistor", "--out", o]).status.success());
    let mut seen = 0;
    for entry in fs::read_dir(&out_dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "svg") {
            let text = fs::read_to_string(&path).unwrap();
            let doc = roxmltree::Document::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            assert_eq!(doc.root_element().tag_name().name(), "svg");
            assert!(doc.descendants().any(|n| n.has_tag_name("circle")));
            seen += 1;
        }
    }
    assert_eq!(seen, 5);
}

#[test]
fn sweep_without_out_is_an_error() {
    assert!(!mcg(&["sweep"]).status.success());
}

#[test]
fn empty_range_fails_before_work() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("x");
    let out = mcg(&["sweep", "--out", o.to_str().unwrap(), "--alpha-min", "0.5", "--alpha-max", "0.4"]);
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("alpha_max"));
    assert!(!o.exists());
}

#[test]
fn eigen_subcommand_reports_threshold() {
    let out = mcg(&["eigen", "--alpha-min", "5", "--alpha-max", "6", "--alpha-step", "0.5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with("SaddleFocus")).count(), 1);
    assert_eq!(text.lines().filter(|l| l.ends_with("SaddleNode")).count(), 2);
    assert!(text.contains("# alpha_star=5.42222"));
}

#[test]
fn sweep_rows_do_not_depend_on_workers() {
    let cfg = RunConfig::parse(&format!("{STUDY}{SHORT}")).unwrap();
    let cfg = RunConfig { analyses: Analyses { maxima: true, lce: false, classify: false }, ..cfg };
    let range = AlphaRange { min: 0.1, max: 0.3, step: 0.02 };
    let a = run_sweep(&sweep_spec(&cfg, range, 1)).unwrap();
    let b = run_sweep(&sweep_spec(&cfg, range, 4)).unwrap();
    assert_eq!(a, b);
}
