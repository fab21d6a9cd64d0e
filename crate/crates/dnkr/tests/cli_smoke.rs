//! End-to-end checks of the command-line surface.

use std::process::{Command, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dnkr"))
}

#[test]
fn enumerate_single_boxes() {
    let out = bin()
        .args(["enumerate", "crystal", "--n", "4", "--label", "KR:1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let lines: Vec<&str> = std::str::from_utf8(&out.stdout)
        .unwrap()
        .lines()
        .collect();
    assert_eq!(lines.len(), 8);
    assert!(lines.contains(&"[1]"));
    assert!(lines.contains(&"[-4]"));
    // deterministic: lexicographically sorted output
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted);
}

#[test]
fn enumerate_configurations_and_paths_contain_the_example() {
    let cell = [
        "--n",
        "4",
        "--lambda",
        "0,1,0,0",
        "--B",
        "KR:1,KR:1,KR:2,KR:2,KR:2",
    ];
    let out = bin()
        .args(["enumerate", "rc"])
        .args(cell)
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let example = r#""nu":[[{"len":2,"rig":0},{"len":1,"rig":0},{"len":1,"rig":0}],[{"len":2,"rig":0},{"len":2,"rig":0},{"len":1,"rig":1},{"len":1,"rig":1}],[{"len":2,"rig":0},{"len":1,"rig":0}],[{"len":3,"rig":0}]]"#;
    assert!(
        stdout.lines().any(|l| l.contains(example)),
        "worked example configuration listed"
    );
    let out = bin()
        .args(["enumerate", "paths"])
        .args(cell)
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(
        stdout.contains(r#"{"column":[-3],"label":"KR:1"},{"column":[-4],"label":"KR:1"}"#),
        "worked example path listed"
    );
}

#[test]
fn biject_forward_reproduces_the_example() {
    use std::io::Write;
    let rc_json = r#"{
        "nu": [
            [{"len":2,"rig":0},{"len":1,"rig":0},{"len":1,"rig":0}],
            [{"len":2,"rig":0},{"len":2,"rig":0},{"len":1,"rig":1},{"len":1,"rig":1}],
            [{"len":2,"rig":0},{"len":1,"rig":0}],
            [{"len":3,"rig":0}]
        ],
        "lambda": {"lambda": [0,1,0,0]},
        "B": ["KR:1","KR:1","KR:2","KR:2","KR:2"]
    }"#;
    let mut child = bin()
        .args(["biject", "forward", "--n", "4", "--trace"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(rc_json.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let factors = v["factors"].as_array().unwrap();
    let cols: Vec<String> = factors.iter().map(|f| f["column"].to_string()).collect();
    assert_eq!(cols, vec!["[-3]", "[-4]", "[4,3]", "[-1,1]", "[2,1]"]);
    assert!(v.get("trace").is_some());

    // the complemented variant swaps the middle factors
    let mut child = bin()
        .args(["biject", "forward", "--n", "4", "--variant", "tilde"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(rc_json.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cols: Vec<String> = v["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["column"].to_string())
        .collect();
    assert_eq!(cols, vec!["[-3]", "[-4]", "[-1,1]", "[4,3]", "[2,1]"]);
}

#[test]
fn biject_round_trip_through_the_binary() {
    use std::io::Write;
    let path_json = r#"{"factors":[
        {"label":"KR:4","column":[4,3,2,1]},
        {"label":"KR:2","column":[-1,1]}
    ]}"#;
    let mut child = bin()
        .args(["biject", "inverse", "--n", "4"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(path_json.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let rc_text = String::from_utf8(out.stdout).unwrap();
    let mut child = bin()
        .args(["biject", "forward", "--n", "4"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(rc_text.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let w: serde_json::Value = serde_json::from_str(path_json).unwrap();
    assert_eq!(v["factors"], w["factors"]);
}

#[test]
fn verify_exit_codes() {
    let out = bin()
        .args(["verify", "bijection", "--n", "4", "--max-factors", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("PASS"));
    // usage errors exit with code 2
    let out = bin()
        .args(["verify", "nonsense", "--n", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["enumerate", "crystal", "--n", "4", "--label", "bogus"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
