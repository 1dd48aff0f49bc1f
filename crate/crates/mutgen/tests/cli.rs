//! End-to-end tests of the mutgen binary: output shapes, exit codes,
//! determinism, and error reporting.

use mutgen::reader::read_all;
use mutgen::sexpr::SExpr;
use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn mutgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mutgen")).args(args).output().expect("binary runs")
}

fn stdout_forms(out: &Output) -> Vec<SExpr> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    read_all(&text).unwrap_or_else(|e| panic!("output must re-read: {e}\n{text}"))
}

fn golden_forms(name: &str) -> Vec<SExpr> {
    read_all(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap()
}

#[test]
fn parse_prints_the_clique_summary() {
    let out = mutgen(&["parse", "--input", &fixture("subst_term_defines.lisp")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("clique subst-term (2 functions)"), "{text}");
    assert!(text.contains("flag macro: defthm-subst-term-flag"), "{text}");
    assert!(
        text.contains("subst-term (x : pseudo-termp, alist : pseudo-term-substp) -> (subst)"),
        "{text}"
    );
}

#[test]
fn make_flag_output_matches_the_golden_forms() {
    let out = mutgen(&["make-flag", "--input", &fixture("subst_term.lisp")]);
    assert!(out.status.success());
    assert_eq!(stdout_forms(&out), golden_forms("subst_term_flag_golden.lisp"));
}

#[test]
fn check_equiv_reports_all_trials_passing() {
    let out = mutgen(&[
        "check-equiv",
        "--input",
        &fixture("subst_term.lisp"),
        "--trials",
        "1000",
        "--seed",
        "0",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "1000/1000 passed\n");
}

#[test]
fn dmgen_expands_to_the_golden_defret_mutual() {
    let out = mutgen(&["dmgen", "--input", &fixture("fgl_mini.lisp")]);
    assert!(out.status.success());
    assert_eq!(stdout_forms(&out), golden_forms("fgl_mini_defret_mutual_golden.lisp"));
}

#[test]
fn expand_stages_are_all_addressable() {
    let input = fixture("fgl_mini.lisp");
    for (stage, head) in [
        ("dmgen", "defret-mutual-generate"),
        ("defret-mutual", "defret-mutual"),
        ("flag-defthm", "defthm-fgl-mini-flag"),
        ("events", "defthm"),
    ] {
        let out = mutgen(&["expand", "--input", &input, "--stage", stage]);
        assert!(out.status.success(), "stage {stage}");
        let forms = stdout_forms(&out);
        assert!(forms[0].head_is(head), "stage {stage} starts with {head}");
    }
    let out = mutgen(&["expand", "--input", &input, "--stage", "events"]);
    assert_eq!(stdout_forms(&out).len(), 3, "lemma plus two corollaries");
}

#[test]
fn expand_finds_a_defret_mutual_inside_a_defines_post_section() {
    let out = mutgen(&["expand", "--input", &fixture("subst_term_defines.lisp")]);
    assert!(out.status.success());
    assert_eq!(stdout_forms(&out), golden_forms("subst_term_defines_events_golden.lisp"));
    // Starting from a hand-written defret-mutual there is no dmgen stage.
    let out =
        mutgen(&["expand", "--input", &fixture("subst_term_defines.lisp"), "--stage", "dmgen"]);
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn wrap_encapsulate_localizes_the_lemma() {
    let out = mutgen(&["expand", "--input", &fixture("fgl_mini.lisp"), "--wrap-encapsulate"]);
    assert!(out.status.success());
    let forms = stdout_forms(&out);
    assert_eq!(forms.len(), 1);
    let items = forms[0].as_list().unwrap();
    assert!(forms[0].head_is("encapsulate"));
    assert!(items[2].head_is("local"));
    assert!(items[3].head_is("defthm"));
}

#[test]
fn scaffold_sk_matches_the_golden_file() {
    let out = mutgen(&["scaffold-sk", "--input", &fixture("remove_return_last_scaffold.lisp")]);
    assert!(out.status.success());
    assert_eq!(stdout_forms(&out), golden_forms("sk_scaffold_golden.lisp"));
}

#[test]
fn compact_format_puts_each_form_on_one_line() {
    let out = mutgen(&["make-flag", "--input", &fixture("subst_term.lisp"), "--format", "compact"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let nonempty: Vec<&str> = text.lines().filter(|l| !l.is_empty()).collect();
    assert_eq!(nonempty.len(), 2);
    assert!(nonempty[0].starts_with("(defun subst-term-flag"));
}

#[test]
fn output_flag_writes_the_file_and_runs_are_byte_identical() {
    let dir = std::env::temp_dir().join(format!("mutgen-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path: PathBuf = dir.join("events.lisp");
    let run = || {
        let out = mutgen(&[
            "expand",
            "--input",
            &fixture("bfrs_ok.lisp"),
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        std::fs::read(&path).unwrap()
    };
    let first = run();
    let second = run();
    assert!(!first.is_empty());
    assert_eq!(first, second);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn errors_carry_file_line_and_column() {
    let dir = std::env::temp_dir().join(format!("mutgen-err-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();

    let unbalanced = dir.join("unbalanced.lisp");
    std::fs::write(&unbalanced, "(defun f (x)\n  (cons x\n").unwrap();
    let out = mutgen(&["parse", "--input", unbalanced.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("unbalanced.lisp:2:3"), "{msg}");

    let bad_arity = dir.join("bad_arity.lisp");
    std::fs::write(&bad_arity, ";; leading comment\n(mutual-recursion (defun f (x y) (f x)))\n")
        .unwrap();
    let out = mutgen(&["parse", "--input", bad_arity.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("bad_arity.lisp:2:1"), "{msg}");
    assert!(msg.contains("expected 2"), "{msg}");

    let out =
        mutgen(&["parse", "--input", &fixture("subst_term.lisp"), "--clique", "missing-clique"]);
    assert_eq!(out.status.code(), Some(1));

    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_equiv_exits_2_when_trials_cannot_pass() {
    let dir = std::env::temp_dir().join(format!("mutgen-fail-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("uninterpretable.lisp");
    // The body calls a function the oracle does not know, so every trial
    // reports an evaluation failure rather than crashing.
    std::fs::write(&path, "(mutual-recursion (defun f (x) (mystery-helper x)))\n").unwrap();
    let out = mutgen(&["check-equiv", "--input", path.to_str().unwrap(), "--trials", "50"]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("0/50 passed"), "{text}");
    assert!(text.contains("unknown function"), "{text}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn clique_selection_defaults_to_the_last_definition() {
    let dir = std::env::temp_dir().join(format!("mutgen-sel-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("two_cliques.lisp");
    std::fs::write(
        &path,
        "(mutual-recursion (defun first-fn (x) (first-fn x)))\n\
         (mutual-recursion (defun second-fn (y) (second-fn y)))\n",
    )
    .unwrap();
    let out = mutgen(&["parse", "--input", path.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("clique second-fn"), "{text}");
    let out = mutgen(&["parse", "--input", path.to_str().unwrap(), "--clique", "first-fn"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("clique first-fn"), "{text}");
    std::fs::remove_dir_all(&dir).unwrap();
}
