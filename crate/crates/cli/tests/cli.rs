use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn scenario_text(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("../../scenarios/{name}.toml"));
    fs::read_to_string(path).unwrap()
}

/// Writes `text` as `scenario.toml` in a fresh directory.
fn scenario_file(text: &str) -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.toml");
    fs::write(&path, text).unwrap();
    (dir, path)
}

fn diagscale(args: &[&str], scenario: &Path, out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diagscale"))
        .args(args)
        .arg("--scenario")
        .arg(scenario)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn run_ok(cmd: &str, text: &str) -> (TempDir, PathBuf) {
    let (dir, path) = scenario_file(text);
    let out = dir.path().join("out");
    let o = diagscale(&[cmd], &path, &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    (dir, out)
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn headers_are_fixed() {
    let (_d, out) = run_ok("surface", &scenario_text("default"));
    assert_eq!(header(&out.join("surface.csv")), "h,tier,tier_name,L,T,K,C,F,feasible");
    let (_d, out) = run_ok("optimize", &scenario_text("default"));
    assert_eq!(
        header(&out.join("trajectory.csv")),
        "step,h,tier,action,F,F_penalized,shards_moved"
    );
    let (_d, out) = run_ok("compare", &scenario_text("burst"));
    for p in ["diagonal", "h_only", "v_only"] {
        assert_eq!(
            header(&out.join(format!("timeseries_{p}.csv"))),
            "t,h,tier,demand,latency,capacity,cost_rate,action,shards_moved,sla_violation"
        );
    }
    assert_eq!(
        header(&out.join("summary.csv")),
        "policy,p50,p95,p99,total_cost,cost_per_op,actions,rebalances,shards_moved,sla_violation_rate"
    );
}

#[test]
fn outputs_use_unix_newlines_and_copy_the_scenario() {
    let text = scenario_text("sinusoidal");
    let (_d, out) = run_ok("compare", &text);
    assert_eq!(fs::read_to_string(out.join("scenario.toml")).unwrap(), text);
    for entry in fs::read_dir(&out).unwrap() {
        let bytes = fs::read(entry.unwrap().path()).unwrap();
        assert!(!bytes.contains(&b'\r'));
        assert_eq!(bytes.last(), Some(&b'\n'));
    }
}

#[test]
fn surface_covers_the_grid() {
    let (_d, out) = run_ok("surface", &scenario_text("default"));
    let r = rows(&out.join("surface.csv"));
    assert_eq!(r.len() - 1, 12 * 4);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("minimizer.json")).unwrap()).unwrap();
    let m = &json["feasible_minimizer"];
    assert_eq!(m["interior"], true);
    let min_f = r[1..]
        .iter()
        .filter(|row| row[8] == "true")
        .map(|row| row[7].parse::<f64>().unwrap())
        .fold(f64::INFINITY, f64::min);
    assert!((m["F"].as_f64().unwrap() - min_f).abs() < 1e-4 * min_f);
}

#[test]
fn unattainable_sla_gives_null_minimizer() {
    let text = scenario_text("default").replace("l_max = 5.1", "l_max = 0.01");
    let (_d, out) = run_ok("surface", &text);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("minimizer.json")).unwrap()).unwrap();
    assert!(json["feasible_minimizer"].is_null());
    assert_eq!(json["feasible_count"], 0);
}

#[test]
fn sweep_nodes_restricts_the_surface() {
    let text = scenario_text("default").replace(
        "interval_seconds = 5.0",
        "interval_seconds = 5.0\nsweep_nodes = [1, 2, 4, 8]",
    );
    let (_d, out) = run_ok("surface", &text);
    let r = rows(&out.join("surface.csv"));
    assert_eq!(r.len() - 1, 4 * 4);
    assert!(r[1..].iter().all(|row| ["1", "2", "4", "8"].contains(&row[0].as_str())));
}

#[test]
fn trajectory_descends_to_a_hold() {
    let (_d, out) = run_ok("optimize", &scenario_text("default"));
    let r = rows(&out.join("trajectory.csv"));
    let body = &r[1..];
    assert_eq!(body.last().unwrap()[3], "hold");
    assert!(body[..body.len() - 1].iter().all(|row| row[3] != "hold"));
    let f: Vec<f64> = body.iter().map(|row| row[4].parse().unwrap()).collect();
    assert!(f.windows(2).take(body.len() - 2).all(|w| w[1] < w[0]));
    for (i, row) in body.iter().enumerate() {
        assert_eq!(row[0], i.to_string());
    }
}

#[test]
fn timeseries_shards_add_up_to_the_summary() {
    let (_d, out) = run_ok("compare", &scenario_text("burst"));
    let summary = rows(&out.join("summary.csv"));
    for row in &summary[1..] {
        let ts = rows(&out.join(format!("timeseries_{}.csv", row[0])));
        let moved: u64 = ts[1..].iter().map(|r| r[8].parse::<u64>().unwrap()).sum();
        let actions = ts[1..].iter().filter(|r| r[7] != "hold").count();
        assert_eq!(moved.to_string(), row[8], "{}", row[0]);
        assert_eq!(actions.to_string(), row[6], "{}", row[0]);
        assert_eq!(ts.len() - 1, 288);
    }
}

#[test]
fn simulate_runs_the_first_policy_only() {
    let text = scenario_text("burst").replace(
        r#"policies = ["diagonal", "h_only", "v_only"]"#,
        r#"policies = ["h_only"]"#,
    );
    let (_d, out) = run_ok("simulate", &text);
    assert!(out.join("timeseries_h_only.csv").exists());
    assert!(!out.join("timeseries_diagonal.csv").exists());
    assert_eq!(rows(&out.join("summary.csv")).len(), 2);

    let (_d, out) = run_ok("compare", &text);
    let ratios = rows(&out.join("ratios.csv"));
    assert_eq!(ratios[1], ["h_only", "h_only", "1.00000", "1.00000", "1.00000"]);
}

#[test]
fn replayed_trace_reproduces_the_generated_run() {
    let text = scenario_text("sinusoidal");
    let (_d, first) = run_ok("simulate", &text);
    let (dir, path) = scenario_file(&text.replace(
        "interval_seconds = 5.0",
        "interval_seconds = 5.0\ntrace_file = \"replay.csv\"",
    ));
    fs::copy(first.join("trace.csv"), dir.path().join("replay.csv")).unwrap();
    let out = dir.path().join("out");
    assert!(diagscale(&["simulate"], &path, &out).status.success());
    for f in ["timeseries_diagonal.csv", "summary.csv"] {
        assert_eq!(fs::read(first.join(f)).unwrap(), fs::read(out.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn seed_flag_moves_random_bursts() {
    let text = scenario_text("burst").replace("burst_times = [40, 110, 190]", "burst_count = 3");
    let (dir, path) = scenario_file(&text);
    let demand = |seed: &str| {
        let out = dir.path().join(format!("out{seed}"));
        assert!(diagscale(&["simulate", "--seed", seed], &path, &out).status.success());
        fs::read_to_string(out.join("trace.csv")).unwrap()
    };
    assert_eq!(demand("1"), demand("1"));
    assert_ne!(demand("1"), demand("2"));
}

#[test]
fn config_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    for bad in [
        scenario_text("default").replace("alpha = 12.0", "alpha = -1.0"),
        scenario_text("default").replace("seed = 42", "seed = 42\nbogus = 1"),
        scenario_text("default").replace("node_count = 4", "node_count = 40"),
        scenario_text("default").replace("h_max = 12", "h_max = 0"),
        "not toml [".to_string(),
    ] {
        let (_d, path) = scenario_file(&bad);
        let o = diagscale(&["surface"], &path, &dir.path().join("out"));
        assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
    let text = scenario_text("default").replace(r#"policies = ["diagonal", "h_only", "v_only"]"#, "policies = []");
    let (_d, path) = scenario_file(&text);
    assert_eq!(
        diagscale(&["compare"], &path, &dir.path().join("out")).status.code(),
        Some(3)
    );
}

#[test]
fn io_errors_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.toml");
    assert_eq!(
        diagscale(&["surface"], &missing, &dir.path().join("out")).status.code(),
        Some(4)
    );

    let (_d, path) = scenario_file(&scenario_text("default"));
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    assert_eq!(
        diagscale(&["surface"], &path, &blocker.join("out")).status.code(),
        Some(4)
    );
}

#[test]
fn usage_errors_exit_2() {
    let o = Command::new(env!("CARGO_BIN_EXE_diagscale"))
        .arg("teleport")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
