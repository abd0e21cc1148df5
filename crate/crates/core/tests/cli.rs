use std::io::Write;
use std::process::{Command, Output, Stdio};

fn cli() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ltl-tasks"));
    c.env_remove("LTL2A_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    cli().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn progress_prints_the_residual() {
    let o = run(&["progress", "F (R & F G)", "R"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "F G");
    let o = run(&["progress", "!a U b", "a"]);
    assert_eq!(stdout(&o).trim(), "false");
}

#[test]
fn progress_reads_assignments_from_stdin() {
    let mut child = cli()
        .args(["progress", "F (a & F b)"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"a\nb\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim().lines().last(), Some("true"));
}

#[test]
fn check_reports_every_case() {
    let o = run(&["check", "--cases", "300", "--workers", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "300/300 pass");
}

#[test]
fn the_invocation_is_echoed_to_stderr() {
    let o = run(&["--seed", "9", "count", "--preset", "letterworld-avoid"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("# ltl-tasks --seed 9 count"), "{err}");
}

#[test]
fn exit_codes_separate_usage_and_domain_errors() {
    assert_eq!(run(&["progress", "F (", "a"]).status.code(), Some(1));
    assert_eq!(run(&["count", "--preset", "nope"]).status.code(), Some(1));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["sample", "-n", "many"]).status.code(), Some(2));
}

#[test]
fn seed_comes_from_flag_or_environment() {
    let flag = run(&["--seed", "5", "sample", "-n", "3"]);
    let env = cli()
        .env("LTL2A_SEED", "5")
        .args(["sample", "-n", "3"])
        .output()
        .unwrap();
    assert_eq!(stdout(&flag), stdout(&env));
    assert_ne!(
        stdout(&flag),
        stdout(&run(&["--seed", "6", "sample", "-n", "3"]))
    );
}

#[test]
fn out_writes_the_payload_to_a_file() {
    let path = std::env::temp_dir().join(format!("ltl-tasks-cli-{}.json", std::process::id()));
    let o = run(&[
        "--json",
        "--out",
        path.to_str().unwrap(),
        "count",
        "--preset",
        "letterworld-avoid",
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["count"], "510287712");
}

#[test]
fn solve_csv_has_the_documented_columns() {
    let o = run(&["solve", "--env", "lockedrooms", "--tasks", "F G", "--csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("index,env_state,task,terminal,value,action")
    );
    assert!(lines.count() > 10);
}
