use std::io::Write;
use std::process::{Command, Output, Stdio};

use actomega::rewriting::{Run, TuringMachine};

fn actomega(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_actomega")).args(args).output().expect("binary runs")
}

fn actomega_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_actomega"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SUCCESSOR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/successor.tm");

#[test]
fn rank_of_star_sequent() {
    let o = actomega(&["rank", "p* |- p*"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "w*2+2");
}

#[test]
fn decide_alpha0() {
    let o = actomega(&["decide", "--alpha0", "--qf", "x1+1=2", "--assign", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Derivable");
    let o = actomega(&["decide", "--alpha0", "--qf", "x1+1=2", "--assign", "5", "--variant", "minus"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "Underivable");
}

#[test]
fn compiled_successor_reaches_the_machine_output() {
    let tm = TuringMachine::parse(&std::fs::read_to_string(SUCCESSOR).unwrap()).unwrap();
    let Run::Accepted { output: Some(out), .. } = tm.run(&[tm.input[1].clone(), tm.input[1].clone()], 100) else {
        panic!("the machine accepts 11");
    };
    let want: Vec<&str> = ["a_L"].into_iter().chain(out.iter().map(|s| &**s)).chain(["fin"]).collect();

    let rules = actomega(&["tm2sr", SUCCESSOR]);
    assert_eq!(rules.status.code(), Some(0));
    let o = actomega_stdin(&["sr-run", "--input", "11"], &rules.stdout);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "a_L 1 1 a_R");
    let last = text.lines().last().unwrap();
    assert_eq!(last.split("    ").next().unwrap(), want.join(" "));
    assert_eq!(want.join(" "), "a_L 1 1 1 fin");
}

#[test]
fn suites_by_name() {
    for name in ["rank-monotone", "tm-sr"] {
        let o = actomega(&["suite", name]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).starts_with("[PASS]"));
    }
}

#[test]
fn unknown_suite_lists_the_available_ones() {
    let o = actomega(&["suite", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    for name in actomega::suites::names() {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn unknown_verdicts_exit_with_two() {
    let o = actomega(&["search", "!p |- q", "--n-max", "2"]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("Unknown"));
}

#[test]
fn parse_errors_exit_with_one() {
    let o = actomega(&["rank", "p \\ |- q"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn structured_output_round_trips_and_is_deterministic() {
    let args = ["--format", "structured", "decide", "--alpha0", "--qf", "x1 = 3", "--assign", "3", "--trace"];
    let a = actomega(&args);
    let b = actomega(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["format"], "actomega-report");
    assert_eq!(doc["version"], 1);
    assert_eq!(doc["result"]["verdict"], "Derivable");
    let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(again, doc);
    assert!(text.starts_with("{\n  \"format\": \"actomega-report\",\n  \"version\": 1,"));

    let s = actomega(&["--format", "structured", "suite", "der-rank"]);
    let t = actomega(&["--format", "structured", "suite", "der-rank"]);
    assert_eq!(s.stdout, t.stdout);
}

#[test]
fn search_proofs_pass_the_checker() {
    let o = actomega(&["search", "p, p\\q |- q", "--proof"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let proof: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
    let dir = std::env::temp_dir().join(format!("actomega-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("mp.proof");
    std::fs::write(&file, proof).unwrap();
    let path = file.to_str().unwrap();
    let o = actomega(&["check-proof", path]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("valid"));
    let o = actomega(&["basicize", path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("p, p\\q |- q @"));
    std::fs::write(&file, "p |- q @(ax)\n").unwrap();
    assert_eq!(actomega(&["check-proof", path]).status.code(), Some(1));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn encode_refuses_large_expansions() {
    let o = actomega(&["encode", "--alpha0", "--qf", "x1 = 1", "--assign", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = actomega(&["encode", "--alpha0", "--qf", "x1 = 1", "--assign", "1", "--compressed"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("a_L, a_1^{"));
}

#[test]
fn ordinal_verbs() {
    assert_eq!(stdout(&actomega(&["ord", "sum", "w+1", "w"])).trim(), "w*2+1");
    assert_eq!(stdout(&actomega(&["ord", "add", "1", "w"])).trim(), "w");
    assert_eq!(stdout(&actomega(&["ord", "cmp", "w", "5"])).trim(), "w > 5");
    let p = stdout(&actomega(&["ord", "encode", "w^2*3+4"]));
    assert_eq!(stdout(&actomega(&["ord", "decode", p.trim()])).trim(), "w^2*3+4");
}

#[test]
fn derp_on_modus_ponens() {
    let o = actomega(&["derp", "--alpha", "1", "--sequent", "p, p\\q |- q"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("true"));
    let o = actomega(&["derp", "--alpha", "0", "--sequent", "p, p\\q |- q"]);
    assert_eq!(o.status.code(), Some(2));
}
