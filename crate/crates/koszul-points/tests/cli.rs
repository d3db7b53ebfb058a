use std::path::PathBuf;
use std::process::{Command, Output};

use koszul_points::Report;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koszul-points")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Report) {
    let out = run(args);
    let text = String::from_utf8(out.stdout).unwrap();
    let r: Report = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    assert_eq!(out.status.code(), Some(r.exit_code));
    (r.exit_code, r)
}

#[test]
fn flats_counts() {
    let (code, r) = report(&["flats", &fixture("three_general_p2.json"), "--json"]);
    assert_eq!(code, 0);
    let f = r.flats.unwrap();
    assert_eq!(f.count, 8);
    assert!(f.two_r_condition);

    let (_, r) = report(&["flats", &fixture("rains.json"), "--json"]);
    assert_eq!(r.flats.unwrap().count, 116);

    let (_, r) = report(&["flats", &fixture("collinear_p2.json"), "--json"]);
    let f = r.flats.unwrap();
    assert_eq!(f.count, 5);
    assert!(!f.two_r_condition);
    assert_eq!(f.violating_flat.unwrap().members, vec![0, 1, 2]);
}

#[test]
fn certify_verdicts_and_exit_codes() {
    let (code, r) = report(&["certify", &fixture("rains.json"), "--json"]);
    assert_eq!((code, r.verdict.as_str()), (0, "certified-koszul"));
    assert!(r.oracle.unwrap().diagonal_only);

    let (code, r) = report(&["certify", &fixture("collinear_p2.json"), "--json"]);
    assert_eq!((code, r.verdict.as_str()), (4, "oracle-refuted"));
    let o = r.oracle.unwrap();
    assert_eq!(o.exact_confirmation, Some(true));
    assert!(o.off_diagonal.contains(&[2, 3, 1]));

    let (code, r) = report(&["certify", &fixture("nine_general_p4.json"), "--json"]);
    assert_eq!((code, r.verdict.as_str()), (3, "criterion-inapplicable"));
    assert!(r.oracle.unwrap().diagonal_only);

    let (code, r) = report(&["certify", &fixture("collinear_p2.json"), "--no-oracle", "--budget", "0", "--json"]);
    assert_eq!((code, r.verdict.as_str()), (5, "budget-exhausted"));
}

#[test]
fn input_errors_exit_2() {
    let out = run(&["certify", &fixture("malformed.json")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("malformed.json"), "{err}");

    assert_eq!(run(&["flats", "/nonexistent/config.json"]).status.code(), Some(2));
    assert_eq!(run(&["certify"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "split", "--n", "2", "--a", "5", "--b", "1"]).status.code(), Some(2));
    assert_eq!(run(&["descent", &fixture("rains.json"), "--subset", "0,9"]).status.code(), Some(2));
}

#[test]
fn gen_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("split.json");
    let path = path.to_str().unwrap();
    let out = run(&["gen", "--out", path, "split", "--n", "3", "--a", "3", "--b", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(path).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), written.trim_end());
    let parsed = koszul_points::format::parse_config(&written, "split.json").unwrap();
    assert_eq!(parsed.pretty_json(), written);

    let out = run(&["gen", "--prime", "101", "rains"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let parsed = koszul_points::format::parse_config(&text, "rains").unwrap();
    assert_eq!(parsed.len(), 8);
    assert_eq!(parsed.pretty_json().trim_end(), text.trim_end());
}

#[test]
fn certificate_out_and_recheck() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let cert = cert.to_str().unwrap();
    let (code, _) = report(&["certify", &fixture("rains.json"), "--no-oracle", "--out", cert, "--json"]);
    assert_eq!(code, 0);
    let (code, r) = report(&["certify", &fixture("rains.json"), "--recheck", cert, "--json"]);
    assert_eq!((code, r.verdict.as_str()), (0, "certified-koszul"));

    // a certificate for another configuration is rejected
    assert_eq!(run(&["certify", &fixture("three_general_p2.json"), "--recheck", cert]).status.code(), Some(2));

    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(cert).unwrap()).unwrap();
    let rank = v["steps"][0]["est_rank"].as_u64().unwrap();
    v["steps"][0]["est_rank"] = (rank + 1).into();
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, v.to_string()).unwrap();
    assert_eq!(run(&["certify", &fixture("rains.json"), "--recheck", tampered.to_str().unwrap()]).status.code(), Some(2));

    let (code, r) = report(&["descent", &fixture("rains.json"), "--subset", "0,1,2,3,4,5,6", "--certificate", cert, "--json"]);
    assert_eq!(code, 0);
    assert_eq!(r.descent.unwrap().provenance, "certificate");
}

#[test]
fn descent_evidence() {
    let all = "0,1,2,3,4,5,6,7";
    let (code, r) = report(&["descent", &fixture("rains.json"), "--subset", all, "--json"]);
    assert_eq!(code, 0);
    assert!(r.search.unwrap().found);
    assert!(r.descent.unwrap().koszul_by_descent);

    let (code, r) = report(&["descent", &fixture("rains.json"), "--subset", "1,2,3,4,5,6,7", "--json"]);
    assert_eq!((code, r.verdict.as_str()), (0, "koszul-by-descent"));

    let (code, r) = report(&["descent", &fixture("nine_general_p4.json"), "--subset", "0,1,2,3,4,5,6,7", "--json"]);
    assert_eq!((code, r.verdict.as_str()), (3, "inapplicable"));
    assert!(!r.search.unwrap().found);

    let (code, r) = report(&["descent", &fixture("nine_general_p4.json"), "--subset", "0,1,2,3,4,5,6,7", "--assume-koszul", "--json"]);
    assert_eq!(code, 0);
    assert!(r.search.is_none());
    assert_eq!(r.descent.unwrap().provenance, "asserted");
}

#[test]
fn oracle_on_two_points() {
    let (code, r) = report(&["oracle", &fixture("two_points_p1.json"), "--json"]);
    assert_eq!((code, r.verdict.as_str()), (0, "oracle-consistent"));
    let o = r.oracle.unwrap();
    assert!(o.diagonal_only && o.euler_holds);
    // k[x,y]/(xy): Poincare series (1+t)/(1-t)
    assert_eq!(o.hilbert[..4], [1, 2, 2, 2]);
    assert_eq!((0..=4).map(|i| o.tor[i][i]).collect::<Vec<_>>(), vec![1, 2, 2, 2, 2]);

    let (code, r) = report(&["oracle", &fixture("rains.json"), "--method", "bar", "--imax", "3", "--jmax", "5", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(r.oracle.unwrap().method, "bar");
}

#[test]
fn reports_are_deterministic() {
    let strip = |args: &[&str]| {
        let mut v: serde_json::Value = serde_json::from_slice(&run(args).stdout).unwrap();
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    for args in [
        &["certify", &fixture("rains.json"), "--json"][..],
        &["scan", "--n", "2", "--trials", "5", "--seed", "7", "--json"][..],
    ] {
        assert_eq!(strip(args), strip(args));
    }
}

#[test]
fn text_output_mentions_the_verdict() {
    let out = run(&["certify", &fixture("rains.json")]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict: certified-koszul"), "{text}");
    assert!(text.contains("Tor window"));
}
