use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdot-turnstile"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &TempDir, text: &str) -> String {
    let path = dir.path().join("run.cfg");
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

fn numbers(csv: &str, name: &str) -> Vec<f64> {
    column(csv, name).iter().map(|s| s.parse().unwrap()).collect()
}

#[test]
fn cascade_correlation_falls_to_a_quarter() {
    let dir = TempDir::new().unwrap();
    let out = run(&["cascade"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("cascade.csv")).unwrap();
    assert!(text.starts_with("gamma_over_Gamma,P1,P2,P3,P11,P12,P13,Pstar12\n"));
    let gamma = numbers(&text, "gamma_over_Gamma");
    let p12 = numbers(&text, "P12");
    assert!((gamma[0] - 1e-2).abs() < 1e-15 && (gamma[gamma.len() - 1] - 1e2).abs() < 1e-10);
    assert!(p12[0] > 0.9, "P12 starts at {}", p12[0]);
    assert!((p12[p12.len() - 1] - 0.25).abs() < 0.01, "P12 ends at {}", p12[p12.len() - 1]);
}

#[test]
fn larger_splitting_gives_the_lower_entropy_curve() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "Delta_values = 0, 0.2, 0.4\nsweep_min = 0.001\nsweep_max = 1\nsweep_steps = 16\n");
    let out = run(&["entangle", "--config", &cfg], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("entangle.csv")).unwrap();
    let modes = column(&text, "mode");
    let deltas = numbers(&text, "Delta_over_Gamma");
    let entropy = numbers(&text, "E");
    for mode in ["unfiltered", "filtered"] {
        let curve = |d: f64| -> Vec<f64> {
            (0..entropy.len())
                .filter(|&i| modes[i] == mode && deltas[i] == d)
                .map(|i| entropy[i])
                .collect()
        };
        let (top, mid, low) = (curve(0.0), curve(0.2), curve(0.4));
        assert_eq!(low.len(), 16);
        for i in 0..16 {
            assert!(top[i] >= mid[i] && mid[i] >= low[i], "{mode} point {i}: {} {} {}", top[i], mid[i], low[i]);
        }
        assert!(low[0] > 0.0);
    }
}

#[test]
fn unknown_key_names_the_nearest_key() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "gamma = 0.01\ntrajectorys = 10\n");
    let out = run(&["cascade", "--config", &cfg], dir.path());
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("`trajectorys`") && err.contains("`trajectories`"), "{err}");
}

#[test]
fn malformed_number_reports_its_line() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "# dot\nV_ee = 4\nV_hh = 6..0\n");
    let out = run(&["spectrum", "--config", &cfg], dir.path());
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3") && err.contains("V_hh"), "{err}");
}

#[test]
fn identical_seed_gives_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let read = |sub: &str, seed: &str| -> Vec<Vec<u8>> {
        let out_dir = dir.path().join(format!("{sub}-{seed}"));
        let out = run(&["simulate", "--seed", seed, "--trajectories", "3000"], &out_dir);
        assert!(out.status.success());
        ["photon_streams.csv", "estimators.csv"]
            .iter()
            .map(|f| fs::read(out_dir.join(f)).unwrap())
            .collect()
    };
    let a = read("a", "11");
    assert_eq!(a, read("b", "11"));
    assert_ne!(a, read("c", "12"));
    let streams = String::from_utf8(a[0].clone()).unwrap();
    assert!(streams.starts_with("trajectory_id,time,transition\n"));
    assert_eq!(streams.lines().count(), 1 + 2 * 3000);
}

#[test]
fn spectrum_and_cavity_tables() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(&dir, "spectrum_points = 101\ntheta_steps = 10\n");
    for sub in ["spectrum", "cavity"] {
        let out = run(&[sub, "--config", &cfg], dir.path());
        assert!(out.status.success(), "{sub}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let spectrum = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(spectrum.lines().count(), 1 + 6 * 101);
    let cavity = fs::read_to_string(dir.path().join("cavity.csv")).unwrap();
    assert_eq!(cavity.lines().count(), 1 + 3 * 10);
    assert!(numbers(&cavity, "theta").iter().all(|&t| t < std::f64::consts::FRAC_PI_2));
}

#[test]
fn subcommand_is_required() {
    let out = Command::new(env!("CARGO_BIN_EXE_qdot-turnstile")).output().unwrap();
    assert!(!out.status.success());
}

const CHECKS: [&str; 20] = [
    "scheme.state_space",
    "scheme.frequency_sum",
    "scheme.frequency_ordering",
    "scheme.charged_doublets",
    "scheme.high_m_dark",
    "thermal.population_sum",
    "thermal.voltage_monotone",
    "thermal.offset_invariance",
    "kinetics.triangle",
    "kinetics.generator",
    "kinetics.pair_plateau",
    "kinetics.interphoton_time",
    "entangle.wootters_vs_closed_form",
    "entangle.density_valid",
    "entangle.entropy_monotone",
    "entangle.polarization_correlation",
    "cavity.density_valid",
    "cavity.normalization",
    "cavity.routes_agree",
    "cli.deterministic_output",
];

#[test]
fn validate_reports_every_check() {
    let dir = TempDir::new().unwrap();
    let out = run(&["validate", "--trajectories", "20000"], dir.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let report = fs::read_to_string(dir.path().join("validate.csv")).unwrap();
    assert_eq!(column(&report, "check"), CHECKS);
    for name in CHECKS {
        assert!(stdout.contains(name), "{name} missing from report");
    }
    let any_failed = column(&report, "status").iter().any(|s| s == "FAIL");
    assert_eq!(out.status.success(), !any_failed);
}

#[test]
fn validate_default_config_succeeds() {
    let dir = TempDir::new().unwrap();
    let out = run(&["validate"], dir.path());
    let stdout = String::from_utf8_lossy(&out.stdout);
    let failing: Vec<&str> = stdout.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert!(out.status.success(), "failing checks:\n{}", failing.join("\n"));
}
