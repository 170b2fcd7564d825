use std::fs;
use std::process::{Command, Output};

use congruent_cli::record::CertificateRecord;

fn congruent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_congruent")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn solve_six() {
    let out = congruent(&["solve", "6"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("triangle: a = 3, b = 4, h = 5"), "{}", stdout(&out));
}

#[test]
fn solve_three_is_not_congruent() {
    assert_eq!(code(&congruent(&["solve", "3"])), 2);
}

#[test]
fn solve_rejects_bad_input() {
    for args in [&["solve", "abc"][..], &["solve", "0"], &["solve", "-5"], &["solve"], &["frobnicate"], &["solve", "6", "--methods", "magic"]] {
        assert_eq!(code(&congruent(args)), 3, "{args:?}");
    }
}

#[test]
fn solve_unsolved_within_limits() {
    let out = congruent(&["solve", "79", "--methods", "naive", "--limit", "50"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn solve_seventy_nine_by_eqdesc() {
    let out = congruent(&["solve", "79", "--methods", "eqdesc", "--limit", "200", "--json"]);
    assert_eq!(code(&out), 0);
    let rec = CertificateRecord::parse_line(stdout(&out).trim()).unwrap();
    assert_eq!(rec.method, "eqdesc");
    let w = |k: &str| rec.witnesses.0.iter().find(|(n, _)| n == k).map(|(_, v)| v.clone());
    assert_eq!(w("r").as_deref(), Some("125/1"));
    assert_eq!(w("s").as_deref(), Some("52/1"));
    assert_eq!(rec.triangle.a, "233126551/167973000");
    assert!(rec.verify().unwrap());
}

#[test]
fn tunnell_ranges() {
    let out = congruent(&["tunnell", "--from", "1", "--to", "999"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(text.lines().last(), Some("361 candidates"));
    // One line per squarefree n plus the summary.
    assert_eq!(text.lines().count(), 608 + 1);

    let out = congruent(&["tunnell", "--from", "1", "--to", "99"]);
    assert_eq!(stdout(&out).lines().last(), Some("36 candidates"));
    assert!(stdout(&out).lines().any(|l| l == "3 not congruent"));
    assert!(stdout(&out).lines().any(|l| l == "5 candidate"));

    assert_eq!(code(&congruent(&["tunnell", "--from", "10", "--to", "9"])), 3);
    assert_eq!(code(&congruent(&["tunnell", "--from", "0", "--to", "9"])), 3);
}

#[test]
fn batch_caches_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("certs.jsonl");
    let cache_s = cache.to_str().unwrap();

    let out = congruent(&["batch", "--from", "1", "--to", "40", "--cache", cache_s]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let first = fs::read_to_string(&cache).unwrap();
    let ns: Vec<u64> = first.lines().map(|l| CertificateRecord::parse_line(l).unwrap().n.parse().unwrap()).collect();
    assert_eq!(ns, [5, 6, 7, 13, 14, 15, 21, 22, 23, 29, 30, 31, 34, 37, 38, 39]);
    assert!(stdout(&out).ends_with("16/16 solved (0 from cache)\n"));

    // Warm cache: nothing is recomputed or appended.
    let out = congruent(&["batch", "--from", "1", "--to", "40", "--cache", cache_s]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).ends_with("16/16 solved (16 from cache)\n"));
    assert_eq!(fs::read_to_string(&cache).unwrap(), first);

    // Extending the range only appends the new n.
    let out = congruent(&["batch", "--from", "1", "--to", "50", "--cache", cache_s, "--json"]);
    assert_eq!(code(&out), 0);
    let printed: Vec<String> = stdout(&out).lines().map(|l| CertificateRecord::parse_line(l).unwrap().n).collect();
    assert_eq!(printed.last().map(String::as_str), Some("47"));
    assert_eq!(fs::read_to_string(&cache).unwrap().lines().count(), 16 + 3);

    let out = congruent(&["verify", cache_s]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).ends_with("19/19 records verified\n"));
}

#[test]
fn batch_rejects_unwritable_cache_and_bad_range() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("missing").join("certs.jsonl");
    assert_eq!(code(&congruent(&["batch", "--from", "1", "--to", "10", "--cache", cache.to_str().unwrap()])), 3);
    assert_eq!(code(&congruent(&["batch", "--from", "9", "--to", "1"])), 3);
}

#[test]
fn batch_reports_unsolved() {
    let out = congruent(&["batch", "--from", "78", "--to", "80", "--methods", "naive", "--limit", "100"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("unsolved: 79"), "{}", stdout(&out));
}

#[test]
fn verify_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let good = congruent(&["solve", "6", "--json"]);
    let line = stdout(&good);

    let ok = dir.path().join("ok.jsonl");
    fs::write(&ok, &line).unwrap();
    assert_eq!(code(&congruent(&["verify", ok.to_str().unwrap()])), 0);

    let tampered = dir.path().join("bad.jsonl");
    fs::write(&tampered, format!("{line}{}", line.replace("\"y\":\"36/1\"", "\"y\":\"-35/1\""))).unwrap();
    let out = congruent(&["verify", tampered.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("line 1: n = 6 (pythagorean): ok"));
    assert!(stdout(&out).contains("line 2: n = 6 (pythagorean): FAIL"));

    let empty = dir.path().join("empty.jsonl");
    fs::write(&empty, "").unwrap();
    assert_eq!(code(&congruent(&["verify", empty.to_str().unwrap()])), 0);

    let garbage = dir.path().join("garbage.jsonl");
    fs::write(&garbage, "not json\n").unwrap();
    assert_eq!(code(&congruent(&["verify", garbage.to_str().unwrap()])), 3);

    assert_eq!(code(&congruent(&["verify", dir.path().join("nope").to_str().unwrap()])), 3);
}
