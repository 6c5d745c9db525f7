use std::process::{Command, Output};

fn fibrator(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fibrator")).args(args).output().expect("run fibrator")
}

fn lines(o: &Output) -> Vec<serde_json::Value> {
    String::from_utf8(o.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

#[test]
fn class_listing_ends_with_count() {
    let out = fibrator(&["pairs", "--left", "S3", "--right", "S3", "--fiber", "2", "--classes"]);
    assert!(out.status.success());
    let recs = lines(&out);
    assert_eq!(recs.len(), 48);
    assert_eq!(recs.last().unwrap()["count"], 47);
    let trivial_fiber = lines(&fibrator(&["pairs", "--left", "S3", "--right", "S3", "--fiber", "1", "--classes"]));
    assert_eq!(trivial_fiber.last().unwrap()["count"], 22);
}

#[test]
fn mark_matrix_with_legends() {
    let out = fibrator(&["mark", "--group", "C2", "--fiber", "2", "--functor", "trivial", "--matrix"]);
    assert!(out.status.success());
    let r = &lines(&out)[0];
    assert_eq!(r["matrix"], serde_json::json!([[2, 1, 1], [0, 1, 0], [0, 0, 1]]));
    assert_eq!(r["rows"].as_array().unwrap().len(), 3);
    assert_eq!(r["cols"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_exit_codes() {
    let ok = fibrator(&["verify", "mobius-inverse", "--group", "S3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(lines(&ok).iter().all(|r| r["pass"] == true));
    assert_eq!(fibrator(&["verify", "nope"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(fibrator(&["pairs", "--left", "S3", "--right", "S3", "--bogus"]).status.code(), Some(2));
    assert_eq!(fibrator(&["groups", "--fiber", "x"]).status.code(), Some(2));
    assert_eq!(fibrator(&["groups", "Q17"]).status.code(), Some(2));
    assert_eq!(fibrator(&["plus", "dot", "--group", "C2", "--x", "9", "--y", "0"]).status.code(), Some(2));
    assert_eq!(fibrator(&["eta", "--group", "C2", "--x", "0=1/2"]).status.code(), Some(2));
    assert_eq!(fibrator(&["eta", "--group", "C2", "--x", "0=1/2", "--ring", "q"]).status.code(), Some(0));
}

#[test]
fn nmap_of_indicator() {
    let out = fibrator(&["nmap", "--group", "C2", "--x", "1"]);
    assert_eq!(lines(&out)[0]["elt"], serde_json::json!([[[0], [0], 0, -1], [[0, 1], [0, 0], 0, 2]]));
}

#[test]
fn pretty_output_is_not_json() {
    let out = fibrator(&["mark", "--group", "C2", "--matrix", "--pretty"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("mark matrix of trivial"));
    assert!(text.contains("|   2   1   1"));
}
