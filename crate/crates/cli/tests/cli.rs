//! End-to-end tests of the compiled binary: spawn it against temporary
//! configs, check exit codes, and parse the CSV it emits.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run_in(dir: &Path, cfg: Option<&str>, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_susyjc"));
    cmd.args(args);
    if let Some(text) = cfg {
        let path = dir.join("run.cfg");
        std::fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(&path);
    }
    cmd.arg("--output").arg(dir);
    cmd.output().unwrap()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process terminated by signal")
}

struct Csv {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
    comments: Vec<String>,
}

fn read_csv(path: &Path) -> Csv {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let mut rows = Vec::new();
    let mut comments = Vec::new();
    for line in lines {
        if line.starts_with('#') {
            comments.push(line.to_string());
        } else if !line.is_empty() {
            rows.push(line.split(',').map(str::to_string).collect());
        }
    }
    Csv { header, rows, comments }
}

impl Csv {
    fn col(&self, name: &str) -> usize {
        self.header
            .iter()
            .position(|h| h == name)
            .unwrap_or_else(|| panic!("no column {name} in {:?}", self.header))
    }

    fn f64(&self, row: usize, name: &str) -> f64 {
        self.rows[row][self.col(name)].parse().unwrap()
    }
}

#[test]
fn fano_column_is_squared_cosine_for_one_photon() {
    let dir = TempDir::new().unwrap();
    let cfg = "\
model = ajc
field.kind = fock
field.m = 1
theta = 0
n_trunc = 30
lambda = 0.1
omega_a = 1.0
t_max = 30
n_steps = 61
";
    let out = run_in(dir.path(), Some(cfg), &["evolve"]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read_csv(&dir.path().join("evolve.csv"));
    assert_eq!(csv.rows.len(), 61);
    let mut checked = 0;
    for i in 0..csv.rows.len() {
        if csv.f64(i, "mean_n") < 0.05 {
            continue;
        }
        let t = csv.f64(i, "t");
        let expected = (0.1 * t).cos().powi(2);
        assert!(
            (csv.f64(i, "fano") - expected).abs() < 1e-9,
            "fano mismatch at t = {t}"
        );
        checked += 1;
    }
    assert!(checked > 40, "only {checked} rows away from the nodes");
}

#[test]
fn both_paths_agree_on_a_cat_state() {
    let dir = TempDir::new().unwrap();
    let cfg = "\
model = ajc
path = both
omega_a = 2.0
n_trunc = 60
theta = 1.0471975511965976
field.kind = cat
field.alpha = 2.0
t_max = 50
n_steps = 26
moments_k = 1 2 3
";
    let out = run_in(dir.path(), Some(cfg), &["evolve"]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read_csv(&dir.path().join("evolve.csv"));
    assert!(csv.header.iter().any(|h| h == "sigma_z_dense"));
    assert!(csv.header.iter().any(|h| h == "n3"));
    let summary = csv
        .comments
        .iter()
        .find(|c| c.starts_with("# max_deviation = "))
        .expect("deviation summary comment");
    let dev: f64 = summary.trim_start_matches("# max_deviation = ").parse().unwrap();
    assert!(dev < 1e-7, "paths deviate by {dev:.3e}");
}

#[test]
fn zero_horizon_emits_a_single_row() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), Some("t_max = 0\nn_trunc = 40\nfield.alpha = 2\n"), &["evolve"]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read_csv(&dir.path().join("evolve.csv"));
    assert_eq!(csv.rows.len(), 1);
    assert_eq!(csv.f64(0, "t"), 0.0);
}

#[test]
fn singlet_input_exits_3() {
    let dir = TempDir::new().unwrap();
    let cfg = "field.kind = fock\nfield.m = 0\ntheta = 0\nn_trunc = 20\n";
    let out = run_in(dir.path(), Some(cfg), &["evolve"]);
    assert_eq!(exit_code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn displacement_guard_exits_4() {
    let dir = TempDir::new().unwrap();
    let cfg = "\
model = jc
field.kind = fock
field.m = 0
n_trunc = 40
wigner.points = 11
wigner.times = 0
";
    let out = run_in(dir.path(), Some(cfg), &["wigner"]);
    assert_eq!(exit_code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("snapshot 0"), "missing snapshot context: {err}");
}

#[test]
fn config_mistakes_exit_2() {
    let dir = TempDir::new().unwrap();
    for cfg in ["mystery = 1\n", "lambda = 0.1\nlambda = 0.2\n", "lambda = -1\n"] {
        let out = run_in(dir.path(), Some(cfg), &["evolve"]);
        assert_eq!(exit_code(&out), 2, "config {cfg:?}");
    }
    let out = run_in(dir.path(), Some("n_trunc = 40\n"), &["sweep"]);
    assert_eq!(exit_code(&out), 2, "sweep without theta points");
    let out = run_in(dir.path(), Some("mystery = 1\n"), &["evolve"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown key 'mystery'"));
}

#[test]
fn validate_passes_and_negative_control_fails() {
    let dir = TempDir::new().unwrap();
    let base = "\
n_trunc = 8
field.kind = fock
field.m = 1
theta = 1.0
t_max = 20
";
    let out = run_in(dir.path(), Some(base), &["validate"]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_csv(&dir.path().join("validate.csv"));
    assert_eq!(report.rows.len(), 7);
    for row in &report.rows {
        assert_eq!(row.last().unwrap(), "true", "failed check: {row:?}");
    }

    let control = format!("{base}validate.partner_shift = none\n");
    let out = run_in(dir.path(), Some(&control), &["validate"]);
    assert_eq!(exit_code(&out), 5, "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_csv(&dir.path().join("validate.csv"));
    let residual_row = report
        .rows
        .iter()
        .find(|r| r[0] == "intertwining_residual")
        .expect("residual row present");
    assert_eq!(residual_row.last().unwrap(), "false");
}

#[test]
fn wigner_manifest_reports_convention_normalization() {
    let vacuum = "\
model = jc
field.kind = fock
field.m = 0
theta = 0
n_trunc = 60
wigner.re_min = -3
wigner.re_max = 3
wigner.im_min = -3
wigner.im_max = 3
wigner.points = 61
wigner.times = 0
";
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), Some(vacuum), &["wigner"]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = read_csv(&dir.path().join("wigner_manifest.csv"));
    assert_eq!(manifest.rows.len(), 1);
    assert!((manifest.f64(0, "integral") - 0.5).abs() < 2e-3);
    let snapshot = read_csv(&dir.path().join("wigner_00.csv"));
    assert_eq!(snapshot.rows.len(), 61 * 61);

    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), Some(vacuum), &["wigner", "--convention", "standard"]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = read_csv(&dir.path().join("wigner_manifest.csv"));
    assert!((manifest.f64(0, "integral") - 1.0).abs() < 4e-3);
}

#[test]
fn empty_snapshot_list_writes_manifest_only() {
    let dir = TempDir::new().unwrap();
    let out = run_in(dir.path(), Some("n_trunc = 40\nwigner.points = 11\n"), &["wigner"]);
    assert_eq!(exit_code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let manifest = read_csv(&dir.path().join("wigner_manifest.csv"));
    assert!(manifest.rows.is_empty());
    assert!(!dir.path().join("wigner_00.csv").exists());
}

#[test]
fn identical_runs_are_byte_identical() {
    let cfg = "\
n_trunc = 50
field.kind = cat
field.alpha = 2.0
t_max = 12
n_steps = 13
sweep.theta_points = 5
";
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    assert_eq!(exit_code(&run_in(a.path(), Some(cfg), &["evolve"])), 0);
    assert_eq!(exit_code(&run_in(b.path(), Some(cfg), &["evolve"])), 0);
    assert_eq!(
        std::fs::read(a.path().join("evolve.csv")).unwrap(),
        std::fs::read(b.path().join("evolve.csv")).unwrap()
    );

    // Parallel sweep cells must not perturb output order or content.
    assert_eq!(exit_code(&run_in(a.path(), Some(cfg), &["sweep", "--threads", "4"])), 0);
    assert_eq!(exit_code(&run_in(b.path(), Some(cfg), &["sweep", "--threads", "2"])), 0);
    assert_eq!(
        std::fs::read(a.path().join("sweep.csv")).unwrap(),
        std::fs::read(b.path().join("sweep.csv")).unwrap()
    );
}

#[test]
fn sweep_pole_column_matches_evolve() {
    let shared = "\
omega_a = 2.0
n_trunc = 40
field.kind = cat
field.alpha = 2.0
t_max = 10
n_steps = 3
";
    let dir = TempDir::new().unwrap();
    let sweep_cfg = format!("{shared}sweep.theta_points = 3\n");
    assert_eq!(exit_code(&run_in(dir.path(), Some(&sweep_cfg), &["sweep"])), 0);
    let sweep = read_csv(&dir.path().join("sweep.csv"));

    let evolve_cfg = format!("{shared}theta = 0\n");
    assert_eq!(exit_code(&run_in(dir.path(), Some(&evolve_cfg), &["evolve"])), 0);
    let evolve = read_csv(&dir.path().join("evolve.csv"));

    for (i, t) in [(0usize, "0"), (1, "5"), (2, "10")] {
        let _ = t;
        let want_sz = evolve.f64(i, "sigma_z");
        let want_n2 = evolve.f64(i, "n2");
        let t_str = &evolve.rows[i][evolve.col("t")];
        let mut found = 0;
        for row in sweep.rows.iter().filter(|r| {
            r[sweep.col("theta")] == "0.00000000000000e0" && &r[sweep.col("t")] == t_str
        }) {
            let value: f64 = row[sweep.col("value")].parse().unwrap();
            match row[sweep.col("observable")].as_str() {
                "sigma_z" => {
                    assert_eq!(value, want_sz);
                    found += 1;
                }
                "n2" => {
                    assert_eq!(value, want_n2);
                    found += 1;
                }
                _ => {}
            }
        }
        assert_eq!(found, 2, "missing sweep rows for t = {t_str}");
    }
}
