//! Cross-module checks over the committed fixture corpus: every file
//! reads, reprints to an equal structure, and the pipeline invariants hold
//! on the real inputs.

use mutgen::clique::{parse_clique, CliqueDef};
use mutgen::dmgen::{self, Action, Condition, Rule};
use mutgen::expand::{build_rule_list, full_expand, parse_dmgen_form};
use mutgen::reader::{read_all, read_one};
use mutgen::sexpr::{SExpr, Symbol};
use std::collections::BTreeSet;

const FIXTURES: &[&str] = &[
    "subst_term.lisp",
    "subst_term_flag_golden.lisp",
    "subst_term_flag_events_golden.lisp",
    "subst_term_make_flag.lisp",
    "subst_term_defines.lisp",
    "subst_term_defines_events_golden.lisp",
    "remove_return_last.lisp",
    "remove_return_last_scaffold.lisp",
    "sk_scaffold_golden.lisp",
    "fgl_mini.lisp",
    "fgl_mini_defret_mutual_golden.lisp",
    "fgl_mini_defthms_golden.lisp",
    "bfrs_ok.lisp",
    "bfrs_ok_shells_golden.lisp",
    "custom_induction_scheme.lisp",
    "scratch_isomorphic_expansions.lisp",
];

fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn fixture_forms(name: &str) -> Vec<SExpr> {
    read_all(&fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn first_clique(name: &str) -> CliqueDef {
    let forms = fixture_forms(name);
    let form =
        forms.iter().find(|f| f.head_is("mutual-recursion") || f.head_is("defines")).unwrap();
    parse_clique(form).unwrap()
}

#[test]
fn every_fixture_reads_and_reprints_to_an_equal_structure() {
    for name in FIXTURES {
        let forms = fixture_forms(name);
        assert!(!forms.is_empty(), "{name} is empty");
        for form in &forms {
            let reread = read_one(&form.to_canonical_string())
                .unwrap_or_else(|e| panic!("{name}: reprint does not read back: {e}"));
            assert_eq!(&reread, form, "{name}: reprint changed the structure");
        }
    }
}

#[test]
fn clique_normalization_of_the_committed_definitions() {
    let subst = first_clique("subst_term.lisp");
    assert_eq!(subst.name, Symbol::new("subst-term"));
    let names: Vec<&str> = subst.functions.iter().map(|f| f.name.text()).collect();
    assert_eq!(names, vec!["subst-term", "subst-termlist"]);
    for f in &subst.functions {
        let formals: Vec<&str> = f.formals.iter().map(|p| p.name.text()).collect();
        assert_eq!(formals, vec!["x", "alist"]);
        assert_eq!(f.returns.len(), 1);
        assert!(f.returns[0].name.text().ends_with("-result"));
    }

    let rrl = first_clique("remove_return_last.lisp");
    let names: Vec<&str> = rrl.functions.iter().map(|f| f.name.text()).collect();
    assert_eq!(names, vec!["remove-return-last-term", "remove-return-last-termlist"]);
    assert_eq!(rrl.functions[0].formals.len(), 1);

    let defines = first_clique("subst_term_defines.lisp");
    for f in &defines.functions {
        assert_eq!(f.returns.len(), 1);
        assert_eq!(f.returns[0].name, Symbol::new("subst"));
        assert_eq!(f.formals[1].type_pred.as_ref().unwrap(), &Symbol::new("pseudo-term-substp"));
    }
    // Normalization is idempotent on the typed clique too.
    let again = parse_clique(&defines.to_defines_form()).unwrap();
    assert_eq!(defines, again);
}

#[test]
fn rule_order_determinism_on_disjoint_fields_and_conclusion_order() {
    let clique = first_clique("fgl_mini.lisp");
    let f = clique.find_function(&Symbol::new("fgl-interp-test")).unwrap();
    let hyp_rule = Rule {
        condition: Condition::True,
        actions: vec![Action::AddHyp(read_one("(ok interp-st)").unwrap())],
    };
    let binding_rule = Rule {
        condition: Condition::True,
        actions: vec![Action::AddBindings(vec![read_one("(?lm (lm interp-st))").unwrap()])],
    };
    let concl_rule = |t: &str| Rule {
        condition: Condition::True,
        actions: vec![Action::AddConcl(read_one(t).unwrap())],
    };
    let render = |rules: &[Rule]| {
        let shell = dmgen::apply_rules(rules, f, &Symbol::new("thm-of-<fn>")).unwrap();
        dmgen::render_defret(&shell, f).unwrap()
    };

    // Disjoint fields: order does not matter.
    let a = render(&[hyp_rule.clone(), binding_rule.clone(), concl_rule("(p xbfr)")]);
    let b = render(&[binding_rule, concl_rule("(p xbfr)"), hyp_rule]);
    assert_eq!(a, b);

    // Conclusion-producing rules: order permutes the conclusions.
    let ab = render(&[concl_rule("(p xbfr)"), concl_rule("(q new-state)")]);
    let ba = render(&[concl_rule("(q new-state)"), concl_rule("(p xbfr)")]);
    let body = |d: &SExpr| d.as_list().unwrap()[2].clone();
    assert_eq!(body(&ab), read_one("(and (p xbfr) (q new-state))").unwrap());
    assert_eq!(body(&ba), read_one("(and (q new-state) (p xbfr))").unwrap());
}

#[test]
fn abbreviations_match_hand_written_rules() {
    let clique = first_clique("bfrs_ok.lisp");
    let abbreviated = dmgen::expand_formal_hyps(
        &read_one(
            "((interp-st (interp-st-bfrs-ok interp-st))
              ((interp-st-bfr-p x) (lbfr-p x)))",
        )
        .unwrap(),
    )
    .unwrap();
    let hand_written = dmgen::parse_rules(
        &read_one(
            "(((:has-formal :name interp-st) (:add-hyp (interp-st-bfrs-ok interp-st)))
              (t (:each-formal :type interp-st-bfr-p :var x :action (:add-hyp (lbfr-p x)))))",
        )
        .unwrap(),
    )
    .unwrap();
    for f in &clique.functions {
        let base = Symbol::new("thm-of-<fn>");
        let via_abbrev = dmgen::apply_rules(&abbreviated, f, &base).unwrap();
        let via_rules = dmgen::apply_rules(&hand_written, f, &base).unwrap();
        assert_eq!(via_abbrev, via_rules, "shells for {}", f.name);
    }
}

/// Variable leaves of a theorem body: symbols outside quote and outside
/// function position, minus `t` and keyword constants.
fn free_vars(term: &SExpr, acc: &mut BTreeSet<String>) {
    match term {
        SExpr::Symbol(s) => {
            if s != "t" && !s.is_keyword() {
                acc.insert(s.text().to_ascii_lowercase());
            }
        }
        SExpr::List(v) if !v.is_empty() => {
            if v[0].is_sym("quote") {
                return;
            }
            let args = if v[0].as_symbol().is_some() { &v[1..] } else { &v[..] };
            for a in args {
                free_vars(a, acc);
            }
        }
        _ => {}
    }
}

#[test]
fn rendered_theorem_variables_come_from_the_signature_or_bindings() {
    for file in ["fgl_mini.lisp", "bfrs_ok.lisp"] {
        let forms = fixture_forms(file);
        let clique = first_clique(file);
        let form = parse_dmgen_form(&forms[1]).unwrap();
        let rules = build_rule_list(&form).unwrap();
        for f in &clique.functions {
            let shell = dmgen::apply_rules(&rules, f, &form.name).unwrap();
            let Some(defret) = dmgen::render_defret(&shell, f) else { continue };
            let body = &defret.as_list().unwrap()[2];

            let mut allowed = BTreeSet::new();
            for p in &f.formals {
                allowed.insert(p.name.text().to_ascii_lowercase());
            }
            for r in &f.returns {
                allowed.insert(r.name.text().to_ascii_lowercase());
            }
            for binder in &shell.bindings {
                if let Some(name) =
                    binder.as_list().and_then(|b| b.first()).and_then(|x| x.as_symbol())
                {
                    let text = name.text().trim_start_matches('?').to_ascii_lowercase();
                    allowed.insert(text);
                }
            }

            let mut seen = BTreeSet::new();
            free_vars(body, &mut seen);
            for var in &seen {
                let plain = var.trim_start_matches('?').to_string();
                assert!(
                    allowed.contains(&plain),
                    "{file}/{}: variable `{var}` is not a formal, return, or binding",
                    f.name
                );
            }
        }
    }
}

#[test]
fn stage_targets_agree_across_the_whole_pipeline() {
    let forms = fixture_forms("fgl_mini.lisp");
    let clique = first_clique("fgl_mini.lisp");
    let exp = full_expand(&forms[1], &clique).unwrap();

    let targets_of = |form: &SExpr, head: &str, key: &str| -> Vec<String> {
        form.as_list()
            .unwrap()
            .iter()
            .filter(|x| x.head_is(head))
            .map(|x| {
                let items = x.as_list().unwrap();
                let at = items.iter().position(|k| k.is_sym(key)).unwrap();
                items[at + 1].to_compact_string()
            })
            .collect()
    };
    let defret_targets = targets_of(&exp.defret_mutual, "defret", ":fn");
    let defthm_targets = targets_of(&exp.flag_defthm, "defthm", ":flag");
    assert_eq!(defret_targets, defthm_targets);
    // Corollaries (all events after the lemma) line up with the same set.
    assert_eq!(exp.events.len() - 1, defret_targets.len());
}
