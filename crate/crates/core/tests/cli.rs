use std::io::Write;
use std::process::{Command, Output, Stdio};

fn exprtrie(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_exprtrie"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn pattern_file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const RULES: &str = "\
# f p T and f q F
p ; (app (app (var f) (var p)) (var T)) => r1
q ; (app (app (var f) (var q)) (var F)) => r2
";

#[test]
fn match_reports_bindings() {
    let f = pattern_file(RULES);
    let path = f.path().to_str().unwrap();
    let o = exprtrie(&["match", path, "(app (app (var f) (var e)) (var T))"], "");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "r1 { p=(var e) }\n");
}

#[test]
fn match_reads_targets_from_stdin() {
    let f = pattern_file(RULES);
    let path = f.path().to_str().unwrap();
    let input = "(app (app (var f) (var e)) (var F))\n\n(var nothing)\n";
    let o = exprtrie(&["match", path], input);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "r2 { q=(var e) }\nno match\n");
}

#[test]
fn empty_pattern_file_matches_nothing() {
    let f = pattern_file("");
    let path = f.path().to_str().unwrap();
    let o = exprtrie(&["match", path, "(var a)", "(lam x (var x))"], "");
    assert_eq!(stdout(&o), "no match\nno match\n");
}

#[test]
fn overlapping_patterns_in_stable_order() {
    let f = pattern_file(
        "x ; (app (var f) (var x)) => general\n ; (app (var f) (var a)) => exact\nh y ; (app (var h) (var y)) => any_app\n",
    );
    let path = f.path().to_str().unwrap();
    let a = exprtrie(&["match", path, "(app (var f) (var a))"], "");
    let b = exprtrie(&["match", path, "(app (var f) (var a))"], "");
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(
        stdout(&a),
        "exact { }\ngeneral { x=(var a) }\nany_app { h=(var f), y=(var a) }\n"
    );
}

#[test]
fn parse_errors_exit_2_with_position() {
    let f = pattern_file("# ok\np ; (app (var f) (var p) => r\n");
    let path = f.path().to_str().unwrap();
    let o = exprtrie(&["match", path, "(var a)"], "");
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains(&format!("{path}:2:")), "{err}");

    let f = pattern_file(RULES);
    let o = exprtrie(&["match", f.path().to_str().unwrap(), "(var"], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_fold_rows() {
    let o = exprtrie(
        &[
            "bench",
            "--suite",
            "fold",
            "--impl",
            "all",
            "--map-size",
            "100",
            "--expr-size",
            "10",
            "--seed",
            "1",
            "--reps",
            "3",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "suite,impl,M,E,seed,reps,total_ns,per_op_ns,node_count"
    );
    assert_eq!(lines.len(), 4);
    for (line, imp) in lines[1..].iter().zip(["TM", "OM", "HM"]) {
        assert!(
            line.starts_with(&format!("fold,{imp},100,10,1,3,")),
            "{line}"
        );
    }
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("sum=4950"), "{err}");
}

#[test]
fn bench_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let o = exprtrie(
        &[
            "bench",
            "--suite",
            "space_app1",
            "--impl",
            "tm",
            "--map-size",
            "50",
            "--expr-size",
            "10",
            "--reps",
            "3",
            "--prefix-len",
            "5",
            "--out",
            out.to_str().unwrap(),
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(!text.lines().nth(1).unwrap().ends_with(','));
}

#[test]
fn bench_rejects_bad_flags() {
    let o = exprtrie(&["bench", "--suite", "nosuch"], "");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr)
        .unwrap()
        .contains("Usage: exprtrie bench"));
    let o = exprtrie(&["bench", "--impl", "xx"], "");
    assert_eq!(o.status.code(), Some(2));
    let o = exprtrie(&["bench", "--map-size", "ten"], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn selftest_passes_and_catches_a_fault() {
    let o = exprtrie(&["selftest"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("500 trials passed"));

    let o = exprtrie(&["selftest", "--trials", "0"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 trials passed"));

    let o = exprtrie(&["selftest", "--inject-fault"], "");
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAILED"));
    assert!(out.contains("target: ("), "{out}");
}

#[test]
fn output_is_reproducible() {
    let a = exprtrie(&["selftest", "--trials", "50", "--seed", "9"], "");
    let b = exprtrie(&["selftest", "--trials", "50", "--seed", "9"], "");
    assert_eq!(a.stdout, b.stdout);
}
