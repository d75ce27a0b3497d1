use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn twistchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistchar"))
        .args(args)
        .env_remove("TWISTCHAR_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = twistchar(&full);
    assert!(out.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    serde_json::from_str(&stdout(&out)).unwrap()
}

fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("twistchar-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

fn constant_term(series: &Value) -> Option<String> {
    series["terms"].as_array()?.iter().find_map(|t| {
        let all_zero = t["exp"].as_object()?.values().all(|e| e == "0");
        all_zero.then(|| t["coeff"].as_str().unwrap().to_string())
    })
}

#[test]
fn free_character_json_has_unit_constant_term() {
    let v = json(&["char", "free", "--dim-v", "1", "--q-max", "4", "--z-max", "4", "--u-max", "2"]);
    assert_eq!(constant_term(&v).as_deref(), Some("1"));
    let names: Vec<&str> = v["spec"]["variables"].as_array().unwrap().iter().map(|x| x["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["q1", "q2", "z", "u"]);
}

#[test]
fn potential_character_verifies_against_koszul() {
    let out = twistchar(&["char", "potential", "--degree", "2", "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("verified"));
    // the p-form substitution does not reproduce the product at N = 2
    let bad = twistchar(&["char", "potential", "--degree", "2", "--convention", "p", "--verify"]);
    assert_eq!(bad.status.code(), Some(3));
    let good = twistchar(&["char", "potential", "--degree", "2", "--convention", "z", "--verify"]);
    assert_eq!(good.status.code(), Some(0));
}

#[test]
fn mass_term_leaves_only_the_identity() {
    let v = json(&["jacobi", "--potential", "x^2/2", "--max-weight", "2"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0], serde_json::json!({ "a": 0, "b": 0, "z": 0, "degree": 0, "dim": 1 }));
    let csv = stdout(&twistchar(&["jacobi", "--potential", "x^2/2", "--max-weight", "2", "--format", "csv"]));
    assert_eq!(csv, "a,b,z,degree,dim\n0,0,0,0,1\n");
}

#[test]
fn cubic_jacobi_reports_first_homology() {
    let v = json(&["jacobi", "--potential", "x^3/3", "--max-weight", "1", "--z-max", "3", "--verify"]);
    assert_eq!(v["max_homological_degree"], 1);
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["a"] == 1 && r["b"] == 0 && r["z"] == 3 && r["degree"] == 1));
}

#[test]
fn operator_listing_uses_the_stable_encoding() {
    let text = stdout(&twistchar(&["operators", "enumerate", "--weight", "1,1", "--z-min", "-1", "--z-max", "1", "--u-max", "1", "--verify"]));
    assert!(text.contains("b[1,1;1]"), "{text}");
    assert!(text.contains("g[1,1;1]"), "{text}");
    let v = json(&["operators", "enumerate", "--weight", "1,0", "--z-max", "2", "--u-max", "0"]);
    let ops: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["operator"].as_str().unwrap()).collect();
    assert_eq!(ops, ["g[1,0;1]", "g[1,0;1]*g[0,0;1]"]);
}

#[test]
fn current_bracket_reports_linear_and_central_parts() {
    let v = json(&["current", "bracket", "--algebra", "gl2", "--X", "E", "--Y", "F", "--m", "1,0", "--n", "0,1"]);
    assert!(v.get("linear").is_some() && v.get("central").is_some());
    assert_eq!(v["linear"], serde_json::json!({}));
    let v = json(&["current", "bracket", "--X", "E", "--Y", "F", "--m", "0,1", "--n", "1,1", "--level", "2", "--verify"]);
    assert_eq!(v["linear"], serde_json::json!({ "1,0": "2,0;0,-2" }));
    assert_eq!(v["central"], "0");
    let wrong_size = twistchar(&["current", "bracket", "--algebra", "gl3", "--X", "E", "--Y", "F", "--m", "0,0", "--n", "0,0"]);
    assert_eq!(wrong_size.status.code(), Some(2));
}

#[test]
fn ell3_and_a2_cohomology() {
    let v = json(&[
        "current", "ell3", "--algebra", "gl3", "--a", "omega", "--b", "z1", "--c", "z2",
        "--X", "1,0,0;0,2,0;0,0,0", "--Y", "1,0,0;0,1,0;0,0,0", "--Z", "1,0,0;0,0,0;0,0,3", "--verify",
    ]);
    assert_eq!(v["value"], v["theta"]);
    assert_eq!(v["value"], "1");
    let v = json(&["current", "cohomology", "--max-weight", "2", "--jet", "4", "--verify"]);
    let at = |p1: i64, p2: i64| v["rows"].as_array().unwrap().iter().find(|r| r["p1"] == p1 && r["p2"] == p2).unwrap().clone();
    assert_eq!((at(0, 0)["h0"].clone(), at(0, 0)["h1"].clone()), (1.into(), 0.into()));
    assert_eq!((at(-1, -1)["h0"].clone(), at(-1, -1)["h1"].clone()), (0.into(), 1.into()));
}

#[test]
fn reductions() {
    let v = json(&["reduce", "t2", "--dim-v", "2", "--verify"]);
    assert_eq!(v["terms"].as_array().unwrap().len(), 1);
    assert_eq!(constant_term(&v).as_deref(), Some("1"));
    let out = twistchar(&["reduce", "p1", "--bundle-degree", "2", "--q-max", "4", "--z-max", "4", "--u-max", "2", "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let s = json(&["reduce", "surface", "--genus", "2", "--degree", "5"]);
    assert_eq!((s["h0"].clone(), s["h1"].clone()), (4.into(), 0.into()));
    let ambiguous = twistchar(&["reduce", "surface", "--genus", "2", "--degree", "1"]);
    assert_eq!(ambiguous.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&ambiguous.stderr).contains("cohomology not determined by (g,d)"));
    let bad = twistchar(&["reduce", "surface", "--genus", "2", "--degree", "1", "--h0", "3", "--h1", "0"]);
    assert!(String::from_utf8_lossy(&bad.stderr).contains("inconsistent override"));
    let plane = json(&["reduce", "plane", "--eps-plus", "1", "--eps-minus", "1", "--jets", "3", "--verify"]);
    assert_eq!(plane["total"], 1);
    let dolbeault = json(&["reduce", "plane", "--eps-plus", "1", "--eps-minus", "0", "--jets", "3"]);
    assert_eq!(dolbeault["rows"][0]["cohomology_dim"], 4);
}

#[test]
fn numerics_print_fifteen_significant_digits() {
    let v = json(&["char", "gamma", "--q1", "0.1,0.2", "--q2", "-0.3,0.1", "--z", "0.5,0.2", "--verify"]);
    let re = v["value"]["re"].as_str().unwrap();
    let mantissa = re.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
    assert_eq!(mantissa.len(), 15, "{re}");
    let p = json(&["partition3d", "--tau1", "0.3,1.1", "--tau2", "0.2,0.9", "--a-f", "0.4,0.1", "--verify"]);
    assert_eq!(p["regularized"], false);
    let pole = twistchar(&["char", "gamma", "--q1", "0.1,0", "--q2", "0.2,0", "--z", "1,0"]);
    assert_eq!(pole.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(twistchar(&["char", "nonsense"]).status.code(), Some(2));
    assert_eq!(twistchar(&["char", "free", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(twistchar(&["char", "potential", "--degree", "0"]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["char", "free", "--dim-v", "2", "--q-max", "4", "--z-max", "3", "--u-max", "2", "--format", "json"];
    let one = stdout(&twistchar(&[&args[..], &["--threads", "1"]].concat()));
    let four = stdout(&twistchar(&[&args[..], &["--threads", "4"]].concat()));
    assert_eq!(one, four);
    let seeded = ["char", "gamma", "--q1", "0.1,0.2", "--q2", "0.3,0", "--z", "0.5,0.5", "--verify", "--seed", "7"];
    assert_eq!(stdout(&twistchar(&seeded)), stdout(&twistchar(&seeded)));
}

#[test]
fn cache_reuses_results_with_identical_output() {
    let dir = scratch_dir("cache");
    let d = dir.to_str().unwrap();
    let args = ["jacobi", "--potential", "x^3/3", "--max-weight", "2", "--format", "csv", "--cache-dir", d];
    let first = twistchar(&args);
    assert!(first.status.success());
    let files: Vec<_> = std::fs::read_dir(&dir).unwrap().collect();
    assert_eq!(files.len(), 1);
    let path = files[0].as_ref().unwrap().path();
    let name = path.file_stem().unwrap().to_str().unwrap();
    assert_eq!(name.len(), 64);
    let cached: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cached["potential"], "x^3/3");
    let second = twistchar(&args);
    assert_eq!(first.stdout, second.stdout);
    // a tampered entry is what gets served, proving the second run read the cache
    let mut edited = cached.clone();
    edited["rows"] = serde_json::json!([]);
    std::fs::write(&path, edited.to_string()).unwrap();
    assert_eq!(stdout(&twistchar(&args)), "\n");
    // the environment variable overrides --cache-dir
    let env_dir = scratch_dir("env");
    let out = Command::new(env!("CARGO_BIN_EXE_twistchar"))
        .args(args)
        .env("TWISTCHAR_CACHE", &env_dir)
        .output()
        .unwrap();
    assert_eq!(out.stdout, first.stdout);
    assert_eq!(std::fs::read_dir(&env_dir).unwrap().count(), 1);
    let _ = std::fs::remove_dir_all(&dir);
    let _ = std::fs::remove_dir_all(&env_dir);
}
