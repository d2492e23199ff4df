//! CLI contract: exit codes are stable (0 ok / 1 rejected / 2 unknown /
//! 64 usage / 65 parse), output is deterministic in declaration order,
//! and --trace output replays step by step.

use dr_core::cli;

fn corpus(name: &str) -> String {
    format!("{}/corpus/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(&args, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write_temp(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(format!("dr-cli-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn check_prints_verdicts_in_declaration_order() {
    let (code, out, _) = run(&["check", &corpus("prelude.dr")]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines,
        vec![
            "String: ok",
            "Int: ok",
            "Bool: ok",
            "Maybe: ok",
            "Set: ok",
            "HTML: ok",
            "Mk: ok",
            "F: ok",
            "T: ok",
        ]
    );
}

#[test]
fn every_corpus_file_checks_as_expected() {
    for (file, want) in [
        ("prelude.dr", 0),
        ("phantom.dr", 0),
        ("discern_ok.dr", 0),
        ("discern_bad.dr", 1),
        ("case_demo.dr", 0),
        ("gadt.dr", 0),
        ("nonterm.dr", 0),
    ] {
        let (code, out, err) = run(&["check", &corpus(file)]);
        assert_eq!(code, want, "{file}: {out}{err}");
    }
}

#[test]
fn check_rejects_bad_signatures() {
    let (code, out, _) = run(&["check", &corpus("discern_bad.dr")]);
    assert_eq!(code, 1);
    assert!(out.contains("D: error"), "{out}");

    let dup = write_temp("dup.dr", "const Int : Type @ []\nconst Int : Type @ []\n");
    let (code, _, err) = run(&["check", &dup]);
    assert_eq!(code, 1);
    assert!(err.contains("duplicate declaration"), "{err}");
}

#[test]
fn parse_errors_exit_65_with_position() {
    let bad = write_temp("parse.dr", "const : :");
    let (code, _, err) = run(&["check", &bad]);
    assert_eq!(code, 65);
    assert!(err.contains("parse error at 1:"), "{err}");

    let (code, _, err) = run(&["eval", &corpus("prelude.dr"), "--role", "nom", "-e", "(("]);
    assert_eq!(code, 65);
    assert!(err.contains("parse error"), "{err}");
}

#[test]
fn usage_errors_exit_64() {
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 64);
    let (code, _, _) = run(&["eval", &corpus("prelude.dr"), "--role", "phantom", "-e", "HTML"]);
    assert_eq!(code, 64);
    let (code, _, _) = run(&["eval"]);
    assert_eq!(code, 64);
}

#[test]
fn missing_file_exits_66() {
    let (code, _, err) = run(&["check", "/nonexistent/nothing.dr"]);
    assert_eq!(code, 66);
    assert!(err.contains("cannot read"), "{err}");
}

#[test]
fn eval_examples() {
    let p = corpus("prelude.dr");
    let (code, out, _) = run(&["eval", &p, "--role", "rep", "-e", "HTML"]);
    assert_eq!((code, out.trim()), (0, "String"));

    let (code, out, _) = run(&["eval", &p, "--role", "nom", "-e", "T @nom Int"]);
    assert_eq!((code, out.trim()), (0, "T @nom Int"));

    let (code, out, _) = run(&["eval", &p, "--role", "nom", "-e", "F @nom Int"]);
    assert_eq!((code, out.trim()), (0, "Maybe @rep Int"));

    // ill-typed input is rejected before evaluation
    let (code, _, err) = run(&["eval", &p, "--role", "nom", "-e", "Set @rep Int"]);
    assert_eq!(code, 1);
    assert!(err.contains("flag"), "{err}");
}

#[test]
fn eval_fuel_exhaustion_exits_2() {
    let (code, _, err) = run(&[
        "eval",
        &corpus("nonterm.dr"),
        "--role",
        "nom",
        "--fuel",
        "25",
        "-e",
        "Loop",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("fuel exhausted after 25 steps"), "{err}");
}

#[test]
fn equal_examples() {
    let p = corpus("prelude.dr");
    for (role, a, b, want_code, want_out) in [
        ("rep", "T @nom Int", "Maybe @rep Int", 0, "equal"),
        ("nom", "T @nom Int", "F @nom Int", 1, "not-equal"),
        ("rep", "Set @nom HTML", "Set @nom String", 1, "not-equal"),
    ] {
        let (code, out, _) = run(&["equal", &p, "--role", role, a, b]);
        assert_eq!((code, out.trim()), (want_code, want_out));
    }

    let (code, out, _) = run(&[
        "equal",
        &corpus("nonterm.dr"),
        "--role",
        "nom",
        "--fuel",
        "10",
        "Loop",
        "Unit",
    ]);
    assert_eq!((code, out.trim()), (2, "unknown (fuel)"));
}

#[test]
fn roles_examples() {
    let p = corpus("prelude.dr");
    let (code, out, _) = run(&["roles", &p, "Maybe"]);
    assert_eq!((code, out.trim()), (0, "[rep]"));
    let (code, out, _) = run(&["roles", &p, "Set"]);
    assert_eq!((code, out.trim()), (0, "[nom]"));
    let (code, out, _) = run(&["roles", &p, "Maybe @rep Int"]);
    assert_eq!((code, out.trim()), (0, "[]"));
    let (code, out, _) = run(&["roles", &p, "\\+(x:Type) -> x"]);
    assert_eq!((code, out.trim()), (0, "not a constant-headed path"));
}

/// Feeding each printed trace intermediate back into eval with fuel 1
/// reproduces the next line.
#[test]
fn trace_output_replays() {
    for (file, role, expr) in [
        ("prelude.dr", "rep", "T @nom Int"),
        ("case_demo.dr", "nom", "UnMaybe"),
        ("phantom.dr", "rep", "F @rep Int"),
    ] {
        let p = corpus(file);
        let (code, out, _) = run(&["eval", &p, "--role", role, "--trace", "-e", expr]);
        assert_eq!(code, 0, "{out}");
        let mut lines: Vec<&str> = out.lines().collect();
        // last line repeats the final term
        let final_term = lines.pop().unwrap();
        let terms: Vec<String> = lines
            .iter()
            .map(|l| match l.split_once("]-> ") {
                Some((_, t)) => t.to_string(),
                None => l.to_string(),
            })
            .collect();
        assert_eq!(terms.last().unwrap(), final_term);
        for pair in terms.windows(2) {
            let (code, out, err) =
                run(&["eval", &p, "--role", role, "--fuel", "1", "-e", &pair[0]]);
            assert!(code == 0 || code == 2, "{err}");
            assert_eq!(
                out.trim(),
                pair[1],
                "replaying `{}` with fuel 1 did not reproduce the next line",
                pair[0]
            );
        }
    }
}
