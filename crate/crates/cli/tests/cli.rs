use std::path::Path;
use std::process::{Command, Output};

fn hullforge(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hullforge")).args(args).current_dir(dir).env("HULLFORGE_THREADS", "2").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn construct_verify_query_export() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = hullforge(&["construct", "--beta", "0.5", "--depth", "1", "--seed", "4", "--out", "a.json"], d);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("status Complete"));

    let o = hullforge(&["verify", "a.json"], d);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all checks passed"));

    let o = hullforge(&["--format", "json", "verify", "a.json", "--resolution", "0.01"], d);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["exit_code"], 0);

    let o = hullforge(&["query", "a.json", "--point", "0,0,0,0"], d);
    assert!(stdout(&o).contains("covered at level 1"));
    let o = hullforge(&["--format", "json", "query", "a.json", "--point", "1.2,0,0,0"], d);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["covered"], false);

    let o = hullforge(&["export", "a.json", "--mesh", "1,2,2", "--pole", "0,0,0,-1", "--out", "e.csv"], d);
    assert_eq!(o.status.code(), Some(0));
    let rows = std::fs::read_to_string(d.join("e.csv")).unwrap().lines().count();
    assert_eq!(rows, 1 + 1212 * 4);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = hullforge(&["construct", "--beta", "1.5", "--out", "x.json"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("beta"));

    let o = hullforge(&["construct", "--budget-tori", "0", "--out", "b.json"], d);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("torus-budget"));

    std::fs::write(d.join("c.json"), "{\n  \"beta\": 0.5,\n  \"depth\": 1,\n  \"B\": 2.0\n}").unwrap();
    let o = hullforge(&["construct", "--config", "c.json"], d);
    assert_eq!(o.status.code(), Some(1));

    hullforge(&["construct", "--out", "t.json"], d);
    let text = std::fs::read_to_string(d.join("t.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let s = v["tree"]["generations"][0]["tori"][0]["sigma"].as_f64().unwrap();
    v["tree"]["generations"][0]["tori"][0]["sigma"] = serde_json::json!(s * 100.0);
    std::fs::write(d.join("t.json"), serde_json::to_string(&v).unwrap()).unwrap();
    let o = hullforge(&["verify", "t.json"], d);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL") && stdout(&o).contains("witness"));
}
