//! End-to-end tests against the built binary: the selftest criterion,
//! output schemas, and exit-code conventions.

use std::process::{Command, Output};

use serde_json::Value;

fn wrvar() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_wrvar"));
    // Keep the environment from leaking caps into the assertions.
    c.env_remove("WRVAR_ORDER_CAP");
    c
}

fn run(args: &[&str]) -> Output {
    wrvar().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf8 stderr")
}

fn json_stdout(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("stdout is one JSON object")
}

const B1: &str = "C(3^5)^6 x C(3^4)^8 x C(3^3)^aleph0 x C(3^2)^5 x C(3^1)^4 x C5";
const B2: &str = "C(3^5)^6 x C(3^4)^8 x C(3^3)^continuum x C(3^1)^50 x C5";

#[test]
fn criterion_9_selftest_single_invocation() {
    let out = run(&["selftest"]);
    let text = stdout(&out);
    assert!(out.status.success(), "selftest failed:\n{text}");
    for criterion in [1, 2, 5, 7] {
        assert!(
            text.contains(&format!("criterion {criterion} (")),
            "missing criterion {criterion} in:\n{text}"
        );
    }
    assert_eq!(text.matches(": PASS").count(), 4, "expected 4 pass lines:\n{text}");
    assert!(!text.contains("FAIL"), "unexpected failure:\n{text}");
    println!("criterion 9 (selftest single invocation): PASS");
}

#[test]
fn decide_equal_text_and_exit_zero() {
    let out = run(&[
        "decide",
        "--a1",
        "Q8 x M27 x C25",
        "--a2-abstract",
        "--a2-exponent",
        "900",
        "--a2-class",
        "2",
        "--assume-var-equal",
        "--b1",
        B1,
        "--b2",
        B2,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("Equal"), "unexpected verdict:\n{text}");
    assert!(text.contains("B1 = C(3^5)^6 x C(3^4)^8 x C(3^3)^aleph0"));
}

#[test]
fn decide_json_schema_is_stable() {
    let out = run(&[
        "--format",
        "json",
        "decide",
        "--a1",
        "Q8 x M27 x C25",
        "--a2-abstract",
        "--a2-exponent",
        "900",
        "--assume-var-equal",
        "--b1",
        B1,
        "--b2",
        B2,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    let obj = v.as_object().expect("top-level object");
    let mut keys: Vec<&str> = obj.keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        vec!["command", "explanation", "inputs", "verdict", "version", "witness"]
    );
    assert_eq!(v["command"], "decide");
    assert_eq!(v["verdict"], "Equal");
    assert_eq!(v["witness"], Value::Null);
    assert_eq!(v["inputs"]["a1"]["kind"], "concrete");
    assert_eq!(v["inputs"]["a1"]["exponent"], 900);
    assert_eq!(v["inputs"]["a2"]["kind"], "asserted");

    // The two mutated instances report the least witness prime.
    let shrunk = "C(3^5)^6 x C(3^4)^8 x C(3^2)^aleph0 x C(3^1)^4 x C5";
    let out = run(&[
        "--format", "json", "decide", "--a1", "Q8 x M27 x C25", "--a2-abstract",
        "--a2-exponent", "900", "--assume-var-equal", "--b1", B1, "--b2", shrunk,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_stdout(&out);
    assert_eq!(v["verdict"], "NotEqual");
    assert_eq!(v["witness"], 3);
    let explanation = v["explanation"].as_str().unwrap();
    assert!(explanation.contains("3^3") && explanation.contains("3^2"));

    let extra_c5 = "C(3^5)^6 x C(3^4)^8 x C(3^3)^continuum x C(3^1)^50 x C5 x C5";
    let out = run(&[
        "--format", "json", "decide", "--a1", "Q8 x M27 x C25", "--a2-abstract",
        "--a2-exponent", "900", "--assume-var-equal", "--b1", B1, "--b2", extra_c5,
    ]);
    let v = json_stdout(&out);
    assert_eq!(v["verdict"], "NotEqual");
    assert_eq!(v["witness"], 5);
}

#[test]
fn equiv_prints_the_compact_clause() {
    let out = run(&["equiv", "C(3^3)^aleph0", "C(3^2)^aleph0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out).trim(),
        "not equivalent (exponent of first infinite factor: 3^3 vs 3^2)"
    );

    let out = run(&["equiv", "C(3^3)^aleph0 x C(3^1)^5", "C(3^3)^continuum x C(3^2)^7"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "equivalent");
}

#[test]
fn group_info_renders_the_invariant_line() {
    let out = run(&["group", "info", "C2 wr C2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("order 8, exponent 4, class 2, derived length 2"));

    let out = run(&["--format", "json", "group", "info", "C2 wr C3"]);
    let v = json_stdout(&out);
    assert_eq!(v["report"]["order"], 24);
    assert_eq!(v["report"]["nilpotency_class"], Value::Null);
    assert_eq!(v["report"]["derived_length"], 2);
}

#[test]
fn law_commands_round_trip_words() {
    let out = run(&["is-law", "x1^4", "C2 wr C2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("is a law"));

    let out = run(&["is-law", "x1^4", "C2 wr C4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("is not a law"));

    let out = run(&["scan-laws", "C2 wr C2", "C2 wr C4", "--rank", "1", "--max-len", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("discriminating word: x1^4"), "{text}");

    let out = run(&[
        "--format", "json", "scan-laws", "C2 wr C2", "C2 wr C2", "--rank", "1", "--max-len", "3",
    ]);
    let v = json_stdout(&out);
    assert_eq!(v["witness"], Value::Null);
    assert!(v["explanation"]
        .as_str()
        .unwrap()
        .starts_with("no discriminating law within bounds"));
}

#[test]
fn decompose_falls_back_to_the_concrete_engine() {
    let out = run(&["decompose", "C12"]);
    assert_eq!(stdout(&out).trim(), "C(2^2) x C(3^1)");

    // Not symbolically abelian, but concretely it is C2 x C2.
    let out = run(&["decompose", "C2 wr 1 x C2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "C(2^1)^2");

    let out = run(&["decompose", "Q8"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not abelian"), "{}", stderr(&out));
}

#[test]
fn exit_codes_follow_the_convention() {
    // Usage errors: unknown flag, missing required group.
    let out = run(&["decide", "--b1", "C2", "--b2", "C2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["--no-such-flag", "selftest"]);
    assert_eq!(out.status.code(), Some(2));

    // Domain errors: bad syntax, infinite content, precondition failure.
    let out = run(&["decompose", "C("]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("syntax error at byte 2"));

    let out = run(&["group", "info", "C(3^3)^aleph0 wr C2"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&[
        "decide", "--a1", "C2", "--a2", "C2", "--b1", "C3", "--b2", "C3", "--assume-var-equal",
    ]);
    assert_eq!(out.status.code(), Some(1), "B-primes not dividing the exponent of A");
    assert!(stdout(&out).contains("precondition violated"));

    // Success paths exit 0 even for a NotEqual verdict.
    let out = run(&[
        "decide", "--a1", "C6", "--a2", "C6", "--b1", "C2", "--b2", "C(2^1)^2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("NotEqual at p = 2"));
}

#[test]
fn json_errors_are_structured() {
    let out = run(&["--format", "json", "decompose", "C("]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_stdout(&out);
    assert_eq!(v["error"]["kind"], "syntax");
    assert_eq!(v["error"]["location"], 2);
    assert!(v["error"]["message"].as_str().unwrap().contains("expected"));

    let out = run(&["--format", "json", "decompose", "C(4^2)"]);
    let v = json_stdout(&out);
    assert_eq!(v["error"]["kind"], "not-prime");
}

#[test]
fn order_cap_env_and_flag() {
    let out = wrvar()
        .env("WRVAR_ORDER_CAP", "10")
        .args(["group", "info", "C2 wr C4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cap"), "{}", stderr(&out));

    // An explicit flag overrides the environment.
    let out = wrvar()
        .env("WRVAR_ORDER_CAP", "10")
        .args(["--order-cap", "100", "group", "info", "C2 wr C4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
