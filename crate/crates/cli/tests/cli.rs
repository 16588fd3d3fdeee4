//! The `wsp` binary: exit codes, output that parses back, and repeatability.

use std::path::PathBuf;
use std::process::Command;

use wsp_core::manipulation::{parse_witness, verify_witness};
use wsp_core::profile::parse_profile;
use wsp_core::Rule;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn wsp(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_wsp")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

#[test]
fn evaluate_reports_winner_or_cycle() {
    let r = wsp(&["evaluate", "--rule", "borda", &fixture("borda_iia.profile")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("winner y"), "{}", r.stdout);

    let r = wsp(&["evaluate", "--rule", "condorcet", &fixture("cycle.profile")]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("no Condorcet winner (cycle)"), "{}", r.stdout);

    let r = wsp(&["--format", "record", "evaluate", "--rule", "plurality", &fixture("near_tie.profile")]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.lines().any(|l| l == "winner=x"), "{}", r.stdout);
}

#[test]
fn margins_on_the_cycle() {
    let r = wsp(&["margins", &fixture("cycle.profile")]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("x over y: 2/3"), "{}", r.stdout);
    assert!(r.stdout.contains("y over x: 1/3"), "{}", r.stdout);
}

#[test]
fn decimal_weights_are_exact() {
    let r = wsp(&["--format", "record", "evaluate", "--rule", "borda", &fixture("two_thirds.profile")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    // 0.6 xyz, 0.3 yzx, 0.1 zxy: x = 1.2 + 0.1, y = 0.6 + 0.6, z = 0.3 + 0.2
    assert!(r.stdout.contains("score.x=13/10"), "{}", r.stdout);
    assert!(r.stdout.contains("score.y=6/5"), "{}", r.stdout);
    assert!(r.stdout.contains("score.z=1/2"), "{}", r.stdout);
}

#[test]
fn audit_exit_code_tracks_violations() {
    let r = wsp(&["audit", "--rule", "borda", &fixture("borda_iia.profile")]);
    assert_eq!(r.code, 1, "{}", r.stdout);
    assert!(r.stdout.contains("iia for borda: violated"), "{}", r.stdout);

    let r = wsp(&["audit", "--rule", "condorcet", "--domain", "full", "--grid", "6"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
}

#[test]
fn manipulation_witness_round_trips() {
    let r = wsp(&["manipulate", "--rule", "plurality", "--epsilon", "1/20", &fixture("near_tie.profile")]);
    assert_eq!(r.code, 1, "{}{}", r.stdout, r.stderr);
    let body: String = r.stdout.lines().skip(2).map(|l| format!("{l}\n")).collect();
    let w = parse_witness(&body).expect("printed witness parses");
    assert_eq!(w.to_string(), body);
    verify_witness(&Rule::Plurality, &w).expect("printed witness re-verifies");
    let original = parse_profile(&std::fs::read_to_string(fixture("near_tie.profile")).unwrap()).unwrap();
    assert!(w.base.same_weights(&original));
}

#[test]
fn no_witness_exits_zero() {
    let r = wsp(&["manipulate", "--rule", "borda", "--epsilon", "1/20", "--domain", "cc", "--grid", "6", "--moves", "40"]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("no witness at this resolution"));

    let r = wsp(&["--format", "record", "manipulate", "--rule", "borda", "--epsilon", "1/50", &fixture("cycle.profile")]);
    assert_eq!(r.code, 2, "cycle has no Borda winner to manipulate away from");
}

#[test]
fn replay_single_case_and_bad_points() {
    let r = wsp(&["replay", "--case", "1.I.1.1.2", "--a", "21/50", "--b", "27/100", "--epsilon", "1/10"]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);

    let r = wsp(&["replay", "--case", "1.I.1.1.2", "--a", "11/20", "--b", "1/4", "--epsilon", "1/10"]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("1-a-b >= b"), "{}", r.stderr);

    let r = wsp(&["replay", "--case", "9.9.9"]);
    assert_eq!(r.code, 2);

    let r = wsp(&["replay", "--case", "2.I.n+1", "--points", "5"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("case 2.I.n+1: pass at 5 points"), "{}", r.stdout);
}

#[test]
fn richness_of_fixture_domains() {
    let r = wsp(&["richness", &fixture("not_rich.domain")]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("not rich (never in the middle: {x})"), "{}", r.stdout);
    let r = wsp(&["richness", &fixture("rich.domain")]);
    assert!(r.stdout.contains(": rich"), "{}", r.stdout);
    let r = wsp(&["richness", "--domain", "cc"]);
    assert!(r.stdout.contains(": rich"), "{}", r.stdout);
}

#[test]
fn malformed_input_exits_two() {
    let bad_sum = fixture("bad_sum.profile");
    let bad_ranking = fixture("bad_ranking.profile");
    let cycle = fixture("cycle.profile");
    let missing = fixture("missing.profile");
    let near_tie = fixture("near_tie.profile");
    let cases: [&[&str]; 6] = [
        &["evaluate", "--rule", "borda", &bad_sum],
        &["evaluate", "--rule", "borda", &bad_ranking],
        &["evaluate", "--rule", "approval", &cycle],
        &["evaluate", "--rule", "borda", &missing],
        &["manipulate", "--rule", "borda", "--epsilon", "0", &near_tie],
        &["frobnicate"],
    ];
    for argv in cases {
        let r = wsp(argv);
        assert_eq!(r.code, 2, "{argv:?}: {}", r.stdout);
        assert!(r.stdout.is_empty(), "{argv:?} wrote to stdout");
        assert!(!r.stderr.is_empty());
    }
}

#[test]
fn help_is_not_an_error() {
    let r = wsp(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("manipulate"));
}

#[test]
fn repeated_runs_are_identical() {
    let cases: [&[&str]; 3] = [
        &["manipulate", "--rule", "plurality", "--epsilon", "1/20", "--domain", "full", "--grid", "8", "--moves", "40"],
        &["audit", "--rule", "borda", "--domain", "star", "--grid", "6"],
        &["replay", "--all", "--points", "3", "--seed", "11"],
    ];
    for args in cases {
        let first = wsp(args);
        let second = wsp(args);
        assert_eq!(first.code, second.code, "{args:?}");
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
}
