use std::io::Write;
use std::process::{Command, Output, Stdio};

fn inthull(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_inthull"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut pipe = child.stdin.take().expect("stdin");
    pipe.write_all(stdin.unwrap_or("").as_bytes()).expect("write stdin");
    drop(pipe);
    child.wait_with_output().expect("binary exits")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn family_outputs() {
    let o = inthull(&["family", "vs", "--s", "3"], None);
    assert!(o.status.success());
    assert_eq!(json(&o), serde_json::json!({"type": "knapsack", "a": ["2", "5"], "a0": "23"}));
    let o = inthull(&["family", "pow2", "--n", "3"], None);
    assert_eq!(json(&o), serde_json::json!({"type": "knapsack", "a": ["4", "2", "1"], "a0": "7"}));
    let o = inthull(&["family", "rubin", "--k", "1", "--variant", "index-swapped"], None);
    assert_eq!(json(&o), serde_json::json!({"type": "knapsack", "a": ["1", "2"], "a0": "3"}));
}

#[test]
fn family_errors() {
    assert_eq!(inthull(&["family", "frob"], None).status.code(), Some(2));
    assert_eq!(inthull(&["family", "vs"], None).status.code(), Some(2));
    assert_eq!(inthull(&["family", "vs", "--s", "1"], None).status.code(), Some(2));
    assert_eq!(inthull(&["family", "morgan", "--nu", "16", "--precision", "32"], None).status.code(), Some(2));
}

#[test]
fn ensemble_lines_feed_hull() {
    let o = inthull(&["family", "knapsack-ensemble", "--n", "2", "--gamma", "2"], None);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 4);
    for line in &lines {
        let h = inthull(&["hull"], Some(line));
        assert!(h.status.success(), "{line}");
    }
    let o = inthull(&["family", "congruence-ensemble", "--n", "2", "--delta", "3", "--a0-max", "0"], None);
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn hull_of_pow2() {
    let inst = stdout(&inthull(&["family", "pow2", "--n", "2"], None));
    let o = inthull(&["hull"], Some(&inst));
    assert!(o.status.success());
    assert_eq!(json(&o)["vertex_count"], 4);
}

#[test]
fn hull_edge_cases() {
    let empty = r#"{"type":"system","A":[["2"],["-2"]],"b":["1","-1"]}"#;
    let o = inthull(&["hull"], Some(empty));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["vertices"], serde_json::json!([]));
    assert_eq!(inthull(&["hull"], Some("{not json")).status.code(), Some(2));
    let wide = r#"{"type":"system","A":[["1","0"],["-1","0"],["0","1"],["0","-1"]],"b":["500","500","500","500"]}"#;
    assert_eq!(inthull(&["hull", "--point-cap", "10"], Some(wide)).status.code(), Some(3));
}

#[test]
fn hull_reads_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("vs.json");
    let output = dir.path().join("hull.json");
    std::fs::write(&input, r#"{"type":"knapsack","a":["2","5"],"a0":"23"}"#).unwrap();
    let o = inthull(&["hull", "--input", input.to_str().unwrap(), "--output", output.to_str().unwrap()], None);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(output).unwrap()).unwrap();
    assert_eq!(v["vertex_count"], 6);
}

#[test]
fn bounds_report() {
    let inst = stdout(&inthull(&["family", "pow2", "--n", "2"], None));
    let o = inthull(&["bounds"], Some(&inst));
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let k1 = v["bounds"].as_array().unwrap().iter().find(|b| b["name"] == "knapsack1").expect("knapsack1 present");
    assert!(k1["value"]["value"].as_str().unwrap().starts_with("6.9657"));
    let tri = r#"{"type":"system","A":[["-1","0"],["0","-1"],["1","1"]],"b":["0","0","2"]}"#;
    assert_eq!(inthull(&["bounds"], Some(tri)).status.code(), Some(0));
    assert_eq!(inthull(&["bounds", "--input", "/no/such/file.json"], None).status.code(), Some(2));
}

#[test]
fn census_summary_and_determinism() {
    let o = inthull(&["census", "congruence", "--n", "2", "--delta", "2"], None);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("phi=1.25 "), "{}", stdout(&o));

    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let args = ["census", "congruence", "--n", "2", "--delta", "16", "--sample", "20", "--seed", "9", "--output"];
        let mut args: Vec<&str> = args.to_vec();
        let p = path.to_str().unwrap().to_string();
        args.push(&p);
        assert!(inthull(&args, None).status.success());
        std::fs::read(path).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    assert!(a.starts_with(b"ensemble,n,parameter"));

    let o = inthull(&["census", "congruence", "--n", "6", "--delta", "20"], None);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_filters() {
    let o = inthull(&["verify", "--check", "theorem5"], None);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("theorem5-extremal") && out.contains("theorem5-minimality"));
    assert!(!out.contains("pow2"));
    assert_eq!(inthull(&["verify", "--check", "nope"], None).status.code(), Some(2));
}
