use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn pasv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pasv"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let f = Fixture {
            dir: tempfile::tempdir().unwrap(),
        };
        f.write("example.json", r#"{"n": 4, "edges": [[1, 2], [3, 2], [3, 4]], "index_base": 1}"#);
        f.write("chain.json", r#"{"players": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]}"#);
        let players: Vec<String> = (0..30).map(|i| format!("\"p{i}\"")).collect();
        f.write("wide.json", &format!(r#"{{"players": [{}]}}"#, players.join(",")));
        f.write("groups.json", r#"{"1": "left", "2": "left", "3": "right", "4": "right"}"#);
        f
    }

    fn write(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, contents).unwrap();
        p
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_string_lossy().into_owned()
    }
}

fn csv_values(path: &Path) -> Vec<(String, f64)> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            (cols[0].to_string(), cols[1].parse().unwrap())
        })
        .collect()
}

#[test]
fn value_exact_example() {
    let f = Fixture::new();
    let out = f.path("values.csv");
    let o = pasv(&[
        "value", "--dag", &f.path("example.json"), "--utility", "elementary:1,3",
        "--estimator", "exact", "--output", &out, "--grouping", &f.path("groups.json"),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let vals = csv_values(Path::new(&out));
    let want = [("1", 0.6), ("2", 0.0), ("3", 0.4), ("4", 0.0)];
    for ((label, v), (wl, wv)) in vals.iter().zip(want) {
        assert_eq!(label, wl);
        assert!((v - wv).abs() < 1e-12);
    }
    assert!(String::from_utf8_lossy(&o.stderr).contains("efficiency"));
    let groups = csv_values(&f.dir.path().join("values.groups.csv"));
    assert_eq!(groups[0].0, "left");
    assert!((groups[0].1 - 0.6).abs() < 1e-12 && (groups[1].1 - 0.4).abs() < 1e-12);
}

#[test]
fn value_json_output() {
    let f = Fixture::new();
    let out = f.path("values.json");
    let o = pasv(&[
        "value", "--dag", &f.path("example.json"), "--utility", "elementary:1,3",
        "--lambda", "4=2", "--output", &out,
    ]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let v = doc["players"][0]["value"].as_f64().unwrap();
    assert!((v - 6.0 / 11.0).abs() < 1e-12);
    assert_eq!(doc["estimator"], "auto");
}

#[test]
fn config_file_and_flag_precedence() {
    let f = Fixture::new();
    let cfg = f.write(
        "run.json",
        &format!(
            r#"{{"dag": {:?}, "utility": "elementary:1,3", "estimator": "exact", "lambda": "4=2"}}"#,
            f.path("example.json")
        ),
    );
    let o = pasv(&["value", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let first: f64 = String::from_utf8_lossy(&o.stdout).lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((first - 6.0 / 11.0).abs() < 1e-12);
    let o = pasv(&["value", "--config", cfg.to_str().unwrap(), "--lambda", "4=1"]);
    let first: f64 = String::from_utf8_lossy(&o.stdout).lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((first - 0.6).abs() < 1e-12);
    let bad = f.write("bad.json", r#"{"dagg": "x"}"#);
    assert_eq!(code(&pasv(&["value", "--config", bad.to_str().unwrap()])), 2);
}

#[test]
fn missing_dag_names_path() {
    let o = pasv(&["value", "--dag", "/nonexistent/dag.json", "--utility", "elementary:1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/dag.json"));
}

#[test]
fn exact_on_wide_antichain_exceeds_cap() {
    let f = Fixture::new();
    let o = pasv(&["value", "--dag", &f.path("wide.json"), "--utility", "elementary:p0", "--estimator", "exact"]);
    assert_eq!(code(&o), 4);
    assert!(!f.dir.path().join("out.csv").exists());
    let o = pasv(&["enumerate", "--dag", &f.path("wide.json")]);
    assert_eq!(code(&o), 4);
}

#[test]
fn failed_runs_leave_no_output() {
    let f = Fixture::new();
    let out = f.path("never.csv");
    let o = pasv(&["value", "--dag", &f.path("wide.json"), "--utility", "elementary:p0", "--estimator", "exact", "--output", &out]);
    assert_eq!(code(&o), 4);
    assert!(!Path::new(&out).exists());
}

#[test]
fn utility_failures_exit_3() {
    let f = Fixture::new();
    let table = f.write("u.csv", "subset,value\n0,0\n");
    let o = pasv(&["value", "--dag", &f.path("example.json"), "--utility", &format!("table:{}", table.display()), "--estimator", "exact"]);
    assert_eq!(code(&o), 3);
    let o = pasv(&["value", "--dag", &f.path("example.json"), "--utility", "external:sh -c exit", "--estimator", "exact"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn external_utility_end_to_end() {
    let f = Fixture::new();
    let script = f.write(
        "card.sh",
        r#"while read -r l; do case "$l" in *'[]'*) echo 0 ;; *) c=$(printf '%s' "$l" | tr -cd , | wc -c); echo $((c + 1)) ;; esac; done"#,
    );
    let o = pasv(&[
        "value", "--dag", &f.path("example.json"), "--estimator", "exact",
        "--utility", &format!("external:sh {}", script.display()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for line in String::from_utf8_lossy(&o.stdout).lines().skip(1) {
        let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }
}

#[test]
fn sweep_example() {
    let f = Fixture::new();
    let out = f.path("sweep.csv");
    let grid = "0.0625,0.125,0.25,0.5,1,2,4,8,16";
    let o = pasv(&[
        "sweep", "--dag", &f.path("example.json"), "--utility", "elementary:1,3", "--target", "1",
        "--grid", grid, "--estimator", "exact", "--output", &out,
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let psi1: Vec<f64> = text
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(1) == Some("1"))
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(psi1.len(), 9);
    assert!(psi1.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(text.lines().count(), 1 + 9 * 4);
}

#[test]
fn sweep_unit_grid_matches_value() {
    let f = Fixture::new();
    let sweep = pasv(&["sweep", "--dag", &f.path("example.json"), "--utility", "elementary:1,3", "--target", "2", "--grid", "1"]);
    let value = pasv(&["value", "--dag", &f.path("example.json"), "--utility", "elementary:1,3"]);
    let sv: Vec<String> = String::from_utf8_lossy(&sweep.stdout).lines().skip(1).map(|l| l.split(',').nth(2).unwrap().to_string()).collect();
    let vv: Vec<String> = String::from_utf8_lossy(&value.stdout).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().to_string()).collect();
    assert_eq!(sv, vv);
}

#[test]
fn sweep_limit_reference() {
    let f = Fixture::new();
    let o = pasv(&["sweep", "--dag", &f.path("example.json"), "--utility", "elementary:2,4", "--target", "4", "--grid", "1,100", "--limit-reference", "maximal"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout).into_owned();
    assert_eq!(text.lines().filter(|l| l.ends_with(",true")).count(), 4);
    let o = pasv(&["sweep", "--dag", &f.path("example.json"), "--utility", "elementary:1", "--target", "1", "--grid", "1", "--limit-reference", "maximal"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a maximal element"));
}

#[test]
fn sample_is_reproducible() {
    let f = Fixture::new();
    let run = |seed: &str, name: &str| {
        let out = f.path(name);
        let o = pasv(&["sample", "--dag", &f.path("example.json"), "--count", "200", "--burn-in", "50", "--thinning", "2", "--seed", seed, "--output", &out]);
        assert_eq!(code(&o), 0);
        fs::read(out).unwrap()
    };
    let a = run("5", "a.jsonl");
    let b = run("5", "b.jsonl");
    let c = run("6", "c.jsonl");
    assert_eq!(a, b);
    assert_ne!(a, c);
    assert_eq!(a.iter().filter(|&&x| x == b'\n').count(), 200);
    assert_eq!(c.iter().filter(|&&x| x == b'\n').count(), 200);

    let o = pasv(&["sample", "--dag", &f.path("chain.json"), "--count", "10"]);
    for line in String::from_utf8_lossy(&o.stdout).lines() {
        assert_eq!(line, "[0,1,2]");
    }
}

#[test]
fn enumerate_counts() {
    let f = Fixture::new();
    let o = pasv(&["enumerate", "--dag", &f.path("example.json")]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "5");
    let o = pasv(&["enumerate", "--dag", &f.path("chain.json")]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "1");
    let o = pasv(&["enumerate", "--dag", &f.path("example.json"), "--list", "--lambda", "4=2"]);
    let total: f64 = String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap()["probability"].as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn limit_check_modes() {
    let f = Fixture::new();
    let o = pasv(&["limit-check", "--dag", &f.path("example.json"), "--mode", "maximal", "--target", "4"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8_lossy(&o.stdout).into_owned();
    assert!(text.contains("verdict converged"));
    let o = pasv(&["limit-check", "--dag", &f.path("example.json"), "--mode", "edges", "--target", "3", "--candidate-edge", "1:3"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("verdict non-equivalent"));
    let o = pasv(&["limit-check", "--dag", &f.path("example.json"), "--mode", "sideways", "--target", "3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn help_and_unknown_flags() {
    let o = pasv(&["value", "--help"]);
    assert_eq!(code(&o), 0);
    let help = String::from_utf8_lossy(&o.stdout).into_owned();
    for flag in ["--dag", "--weights", "--lambda", "--utility", "--estimator", "--seed", "--cap", "--grouping", "--output", "--format", "--config"] {
        assert!(help.contains(flag), "{flag}");
    }
    assert_eq!(code(&pasv(&["value", "--frobnicate"])), 2);
}
