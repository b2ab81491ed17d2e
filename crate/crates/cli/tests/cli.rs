use std::fs;
use std::process::{Command, Output};

fn mcen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcen"))
        .args(args)
        .env_remove("MCEN_GUARD_MAX_TUPLES")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn census_two_by_two() {
    let o = mcen(&["census", "-n", "2", "-H", "1", "-m", "2", "--no-timing"]);
    assert_eq!(
        stdout(&o),
        "{\"n\":2,\"H\":1,\"m\":2,\"variant\":\"all\",\"distinct\":313,\"total_tuples\":6561,\
         \"max_multiplicity\":417,\"argmax_key_hex\":\"020100000000\",\"wall_ms\":0}\n"
    );
}

#[test]
fn construct_all_ones() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("A.json");
    fs::write(&a, "[[1,1],[1,1]]").unwrap();
    let out = stdout(&mcen(&["construct", "--field", "q", "--in", a.to_str().unwrap()]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["b"], serde_json::json!([[0, 1], [0, 1]]));
    assert_eq!(v["trace"]["pivots"], serde_json::json!([0]));
    assert_eq!(v["trace"]["b_prime"], serde_json::json!([[-1, 1], [0, 0]]));
}

#[test]
fn construct_over_prime_field_with_fractions() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("A.json");
    fs::write(&a, r#"[["1/2", 1], [1, 2]]"#).unwrap();
    let out = stdout(&mcen(&["construct", "--field", "5", "--in", a.to_str().unwrap()]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    // 1/2 = 3 in F_5, so the rows are proportional and the rank is 1
    assert_eq!(v["a"], serde_json::json!([[3, 1], [1, 2]]));
    assert_eq!(v["rank"], 1);
}

#[test]
fn fieldcensus_f2() {
    let out = stdout(&mcen(&["fieldcensus", "-q", "2", "-n", "2", "--k1", "1", "--k2", "1"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cardinality"], 10);
    assert_eq!(v["pass"], true);
    assert_eq!(v["rank_counts"], serde_json::json!([1, 9, 6]));
}

#[test]
fn pairs_and_detstats_cross_check() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&mcen(&["pairs", "-n", "1", "-H", "1", "-m", "2"]))).unwrap();
    assert_eq!(v["pairs"], 33);
    let csv = stdout(&mcen(&["detstats", "-n", "2", "-H", "1"]));
    assert!(csv.starts_with("label,count\n"));
    assert!(csv.lines().any(|l| l == "0,33"));
    let ranks = stdout(&mcen(&["rankstats", "-n", "2", "-H", "1"]));
    assert_eq!(ranks, "label,count\n0,1\n1,32\n2,48\n");
}

#[test]
fn solve_and_scalartable() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&mcen(&[
        "solve", "-n", "2", "-H", "1", "-m", "2", "--target", "[[1,0],[0,1]]",
    ])))
    .unwrap();
    assert_eq!(v["count"], 40);
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&mcen(&["scalartable", "-H", "3"]))).unwrap();
    assert_eq!(v["signed"], 13);
}

#[test]
fn decompose_and_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("C.json");
    fs::write(&c, "[[1,2],[2,4]]").unwrap();
    let path = c.to_str().unwrap();
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&mcen(&["decompose", "--in", path, "--k1", "1", "--k2", "2"]))).unwrap();
    assert_eq!(v["rank"], 1);
    fs::write(&c, "[[1,0],[0,1]]").unwrap();
    let o = mcen(&["decompose", "--in", path, "--k1", "1", "--k2", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rank"));
}

#[test]
fn fit_csv_and_plot_data() {
    let dir = tempfile::tempdir().unwrap();
    let dat = dir.path().join("box.dat");
    let csv = stdout(&mcen(&[
        "fit", "--quantity", "box", "-n", "2", "--grid", "2,4,8", "--plot-data", dat.to_str().unwrap(),
    ]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("quantity,m,n,H,count,fitted_slope,theory_exponent,gap"));
    assert_eq!(lines.next(), Some("box,2,2,2,625,3.531069,4,-0.468931"));
    let dat = fs::read_to_string(dat).unwrap();
    assert!(dat.ends_with("2 625\n4 6561\n8 83521\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(mcen(&["census", "-n", "2"]).status.code(), Some(1));
    assert_eq!(mcen(&["nonsense"]).status.code(), Some(1));
    assert_eq!(mcen(&["census", "-n", "2", "-H", "1", "-m", "2", "--variant", "odd"]).status.code(), Some(1));
    let guard = mcen(&["census", "-n", "2", "-H", "50", "-m", "2"]);
    assert_eq!(guard.status.code(), Some(2));
    assert!(guard.stdout.is_empty());
    assert!(String::from_utf8_lossy(&guard.stderr).contains("guard"));
    assert_eq!(mcen(&["--help"]).status.code(), Some(0));
}

#[test]
fn guard_env_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_mcen"))
        .args(["census", "-n", "2", "-H", "1", "-m", "2"])
        .env("MCEN_GUARD_MAX_TUPLES", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = mcen(&["--max-tuples", "100", "census", "-n", "2", "-H", "1", "-m", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn identical_output_for_any_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let run = |w: &str| {
        let map = dir.path().join(format!("map{w}.bin"));
        let out = dir.path().join(format!("out{w}.json"));
        let o = mcen(&[
            "--workers", w, "--no-timing", "--out", out.to_str().unwrap(),
            "census", "-n", "2", "-H", "1", "-m", "3", "--map", map.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
        (fs::read(out).unwrap(), fs::read(map).unwrap())
    };
    assert_eq!(run("1"), run("8"));
    let fit = |w: &str| stdout(&mcen(&["--workers", w, "fit", "--quantity", "det_zero", "-n", "2", "--grid", "2,4,8"]));
    assert_eq!(fit("1"), fit("8"));
}

#[test]
fn fuzz_is_seeded() {
    let run = |seed: &str| stdout(&mcen(&["--seed", seed, "construct", "--fuzz", "200", "-n", "4", "--field", "3"]));
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
    let v: serde_json::Value = serde_json::from_str(&run("5")).unwrap();
    assert_eq!(v["failures"], 0);
}

#[test]
fn argument_file() {
    let dir = tempfile::tempdir().unwrap();
    let args = dir.path().join("c1.args");
    fs::write(&args, "census\n-n\n2\n-H\n1\n-m\n2\n--no-timing\n").unwrap();
    let out = stdout(&mcen(&[&format!("@{}", args.display())]));
    assert!(out.contains("\"distinct\":313"));
}
