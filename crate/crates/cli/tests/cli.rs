use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

const TOY: &str = r#"
name = "toy"
seed = 1

[weights]
model = "rho"
values = [2.0, 3.0]
k = 1.0
m = 2

[expansion]
ref_set_size = 4
ns = [1, 2, 4]
"#;

const SOLVE: &str = r#"
name = "solve"

[grid]
d = 1
n = 64

[rhs]
kind = "sin"

[weights]
model = "power_law"
c0 = 0.5
theta = 2.0
p = 0.6
xi = 1.0
m = 4
"#;

const RATES_MC: &str = r#"
name = "rates-mc"
seed = 5

[grid]
d = 1
n = 16

[weights]
model = "power_law"
c0 = 0.5
theta = 2.0
p = 1.0
xi = 1.0
m = 2

[expansion]
j = 2
ref_set_size = 8
ns = [2, 4, 8]
estimator = "mc"
samples = 600
"#;

fn run(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("config.toml");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_lnpc"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

fn read(dir: &Path, file: &str) -> String {
    fs::read_to_string(dir.join("out").join(file)).unwrap()
}

#[test]
fn toy_index_set() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), TOY, &["indexset"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let keys: Vec<String> = read(dir.path(), "lambda.csv")
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().to_string())
        .collect();
    assert_eq!(keys, ["", "1:1", "2:1", "1:2"]);
    let report = read(dir.path(), "report.txt");
    assert!(report.contains("indexset.downward_closed: true"));
    assert!(read(dir.path(), "manifest.txt").contains("config_sha256: "));
}

#[test]
fn solve_constant_coefficient() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), SOLVE, &["solve"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let peak = read(dir.path(), "field.csv")
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<f64>().unwrap())
        .fold(f64::MIN, f64::max);
    assert!((peak - 0.0253303).abs() < 1e-7, "{peak}");
}

#[test]
fn identity_battery() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), TOY, &["identity"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "identity.csv");
    let first: Vec<f64> = csv
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .skip(3)
        .take(2)
        .map(|v| v.parse().unwrap())
        .collect();
    assert!((first[0] - 9.0).abs() < 1e-12 && (first[1] - 9.0).abs() < 1e-12);
    assert_eq!(csv.lines().count(), 52);
}

#[test]
fn identity_violation_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = format!("{TOY}\n[identity]\ntol = 1e-300\n");
    let out = run(dir.path(), &cfg, &["identity"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(read(dir.path(), "report.txt").contains("outcome: violation"));
}

#[test]
fn config_errors_exit_3() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), &format!("bogus = 1\n{TOY}"), &["indexset"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    let out = run(dir.path(), &format!("{TOY}\n[grid]\nd = 3\n"), &["indexset"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid.d"));

    let out = run(dir.path(), TOY, &["rates"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weights.model"));
}

#[test]
fn reruns_are_byte_identical() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    for (cmd, cfg, files) in [
        ("indexset", TOY, &["lambda.csv", "report.txt"][..]),
        ("identity", TOY, &["identity.csv", "report.txt"][..]),
        (
            "rates",
            RATES_MC,
            &["lambda.csv", "coeffs.csv", "errors.csv", "report.txt"][..],
        ),
    ] {
        let ra = run(a.path(), cfg, &[cmd, "--jobs", "1"]);
        let rb = run(b.path(), cfg, &[cmd, "--jobs", "3"]);
        assert_eq!(ra.status.code(), Some(0), "{}", String::from_utf8_lossy(&ra.stderr));
        assert_eq!(rb.status.code(), Some(0));
        for f in files {
            assert_eq!(read(a.path(), f), read(b.path(), f), "{cmd}: {f}");
        }
        let strip = |s: String| -> Vec<String> {
            s.lines()
                .filter(|l| !l.starts_with("created_unix") && !l.starts_with("jobs") && !l.starts_with("config_path"))
                .map(String::from)
                .collect()
        };
        assert_eq!(
            strip(read(a.path(), "manifest.txt")),
            strip(read(b.path(), "manifest.txt"))
        );
    }
}

#[test]
fn seed_flag_overrides_config() {
    let dir = TempDir::new().unwrap();
    let out = run(dir.path(), RATES_MC, &["rates", "--seed", "99"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(read(dir.path(), "manifest.txt").contains("seed: 99"));
    let first = read(dir.path(), "coeffs.csv");
    let out = run(dir.path(), RATES_MC, &["rates"]);
    assert_eq!(out.status.code(), Some(0));
    assert_ne!(first, read(dir.path(), "coeffs.csv"));
}
