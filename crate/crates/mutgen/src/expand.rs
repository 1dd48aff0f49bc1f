//! Staged expansion: a `defret-mutual-generate` form becomes a
//! `defret-mutual` bundle, which becomes a flag-defthm macro invocation
//! whose theorems carry the `b*` return-value bindings, which finally
//! becomes the flat event list (inductive lemma plus per-function
//! corollaries). Also generates the `defun-sk` quantifier scaffold used
//! when an induction needs specialized substitutions.

use crate::clique::{CliqueDef, CliqueError, FunctionDef};
use crate::dmgen::{self, DmgenError, Rule};
use crate::flag::{self, FlagClique, FlagError};
use crate::reader;
use crate::sexpr::{SExpr, Symbol};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ExpandError {
    #[error(transparent)]
    Dmgen(#[from] DmgenError),
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Clique(#[from] CliqueError),
    #[error("every function was skipped; the bundle would prove nothing")]
    AllFunctionsSkipped,
    #[error("malformed {context}: {detail}")]
    Malformed { context: &'static str, detail: String },
    #[error("unknown keyword `{0}`")]
    UnknownKeyword(Symbol),
    #[error("form targets clique `{form}` but `{clique}` was selected")]
    WrongClique { form: Symbol, clique: Symbol },
    #[error("two defret forms target function `{0}`")]
    DuplicateFnTarget(Symbol),
    #[error("quantified variable `{var}` does not occur in the body for `{function}`")]
    QuantifiedVarNotFree { var: Symbol, function: Symbol },
    #[error("quantified variable `{var}` is a formal of `{function}`")]
    QuantifiedVarIsFormal { var: Symbol, function: Symbol },
}

fn malformed(context: &'static str, detail: impl Into<String>) -> ExpandError {
    ExpandError::Malformed { context, detail: detail.into() }
}

/// A parsed `defret-mutual-generate` form.
#[derive(Debug, Clone)]
pub struct DmgenForm {
    pub name: Symbol,
    pub formal_hyps: Option<SExpr>,
    pub return_concls: Option<SExpr>,
    pub function_keys: Option<SExpr>,
    pub rules: Option<SExpr>,
    pub hints: Option<SExpr>,
    pub no_induction_hint: bool,
    pub mutual_recursion: Option<Symbol>,
}

pub fn parse_dmgen_form(form: &SExpr) -> Result<DmgenForm, ExpandError> {
    let items = form
        .as_list()
        .filter(|v| v.first().is_some_and(|h| h.is_sym("defret-mutual-generate")))
        .ok_or_else(|| malformed("defret-mutual-generate", "wrong head"))?;
    let name = items
        .get(1)
        .and_then(|n| n.as_symbol())
        .ok_or_else(|| malformed("defret-mutual-generate", "missing name symbol"))?
        .clone();
    let mut out = DmgenForm {
        name,
        formal_hyps: None,
        return_concls: None,
        function_keys: None,
        rules: None,
        hints: None,
        no_induction_hint: false,
        mutual_recursion: None,
    };
    let mut rest = items[2..].iter();
    while let Some(item) = rest.next() {
        let key = item.as_symbol().filter(|s| s.is_keyword()).ok_or_else(|| {
            malformed(
                "defret-mutual-generate",
                format!("expected a keyword, found `{}`", item.to_compact_string()),
            )
        })?;
        let value = rest.next().ok_or_else(|| {
            malformed("defret-mutual-generate", format!("keyword `{key}` has no value"))
        })?;
        if key == ":formal-hyps" {
            out.formal_hyps = Some(value.clone());
        } else if key == ":return-concls" {
            out.return_concls = Some(value.clone());
        } else if key == ":function-keys" {
            out.function_keys = Some(value.clone());
        } else if key == ":rules" {
            out.rules = Some(value.clone());
        } else if key == ":hints" {
            out.hints = Some(value.clone());
        } else if key == ":no-induction-hint" {
            out.no_induction_hint = !value.is_nil();
        } else if key == ":mutual-recursion" {
            let sym = value.as_symbol().ok_or_else(|| {
                malformed("defret-mutual-generate", ":mutual-recursion wants a symbol")
            })?;
            out.mutual_recursion = Some(sym.clone());
        } else {
            return Err(ExpandError::UnknownKeyword(key.clone()));
        }
    }
    Ok(out)
}

/// Normalized rendering of the form, with the clique name resolved.
pub fn render_dmgen_form(form: &DmgenForm, clique_name: &Symbol) -> SExpr {
    let mut items = vec![SExpr::sym("defret-mutual-generate"), SExpr::Symbol(form.name.clone())];
    let mut kw = |key: &str, value: &Option<SExpr>| {
        if let Some(v) = value {
            items.push(SExpr::sym(key));
            items.push(v.clone());
        }
    };
    kw(":formal-hyps", &form.formal_hyps);
    kw(":return-concls", &form.return_concls);
    kw(":rules", &form.rules);
    kw(":function-keys", &form.function_keys);
    kw(":hints", &form.hints);
    if form.no_induction_hint {
        items.push(SExpr::sym(":no-induction-hint"));
        items.push(SExpr::t());
    }
    items.push(SExpr::sym(":mutual-recursion"));
    items.push(SExpr::Symbol(clique_name.clone()));
    SExpr::list(items)
}

/// The complete rule list, in the order the abbreviations appear in the
/// form: `:formal-hyps`, then `:return-concls`, then `:rules`, then
/// `:function-keys`.
pub fn build_rule_list(form: &DmgenForm) -> Result<Vec<Rule>, DmgenError> {
    let mut rules = Vec::new();
    if let Some(spec) = &form.formal_hyps {
        rules.extend(dmgen::expand_formal_hyps(spec)?);
    }
    if let Some(spec) = &form.return_concls {
        rules.extend(dmgen::expand_return_concls(spec)?);
    }
    if let Some(spec) = &form.rules {
        rules.extend(dmgen::parse_rules(spec)?);
    }
    if let Some(spec) = &form.function_keys {
        rules.extend(dmgen::expand_function_keys(spec)?);
    }
    Ok(rules)
}

pub fn dmgen_expand(form: &DmgenForm, clique: &CliqueDef) -> Result<SExpr, ExpandError> {
    dmgen_expand_with_warnings(form, clique, &mut Vec::new())
}

/// Apply the form's rules to every clique function in definition order and
/// assemble the surviving defrets into a `defret-mutual`.
pub fn dmgen_expand_with_warnings(
    form: &DmgenForm,
    clique: &CliqueDef,
    warnings: &mut Vec<String>,
) -> Result<SExpr, ExpandError> {
    if let Some(target) = &form.mutual_recursion {
        if target != &clique.name {
            return Err(ExpandError::WrongClique {
                form: target.clone(),
                clique: clique.name.clone(),
            });
        }
    }
    let rules = build_rule_list(form)?;
    let mut defrets = Vec::new();
    for f in &clique.functions {
        let shell = dmgen::apply_rules(&rules, f, &form.name)?;
        if let Some(defret) = dmgen::render_defret(&shell, f) {
            defrets.push(defret);
        }
    }
    if defrets.is_empty() {
        return Err(ExpandError::AllFunctionsSkipped);
    }
    if defrets.len() > 1 && !form.name.text().to_ascii_lowercase().contains("<fn>") {
        warnings.push(format!(
            "theorem name `{}` has no <fn> placeholder; {} theorems will share it",
            form.name,
            defrets.len()
        ));
    }
    let mut out = vec![SExpr::sym("defret-mutual"), SExpr::Symbol(form.name.clone())];
    out.extend(defrets);
    if let Some(h) = &form.hints {
        out.push(SExpr::sym(":hints"));
        out.push(h.clone());
    }
    out.push(SExpr::sym(":mutual-recursion"));
    out.push(SExpr::Symbol(clique.name.clone()));
    Ok(SExpr::list(out))
}

struct DefretParts {
    name: Symbol,
    body: SExpr,
    keywords: Vec<(Symbol, SExpr)>,
    fn_target: Symbol,
}

fn parse_defret(defret: &SExpr) -> Result<DefretParts, ExpandError> {
    let items = defret
        .as_list()
        .filter(|v| v.first().is_some_and(|h| h.is_sym("defret")))
        .ok_or_else(|| malformed("defret", "wrong head"))?;
    if items.len() < 3 {
        return Err(malformed("defret", "needs a name and a body"));
    }
    let name =
        items[1].as_symbol().ok_or_else(|| malformed("defret", "name must be a symbol"))?.clone();
    let body = items[2].clone();
    let mut keywords = Vec::new();
    let mut fn_target = None;
    let mut rest = items[3..].iter();
    while let Some(item) = rest.next() {
        let key = item.as_symbol().filter(|s| s.is_keyword()).ok_or_else(|| {
            malformed("defret", format!("expected a keyword, found `{}`", item.to_compact_string()))
        })?;
        let value = rest
            .next()
            .ok_or_else(|| malformed("defret", format!("keyword `{key}` has no value")))?;
        if key == ":fn" {
            let sym = value.as_symbol().ok_or_else(|| malformed("defret", ":fn wants a symbol"))?;
            fn_target = Some(sym.clone());
        } else {
            keywords.push((key.clone(), value.clone()));
        }
    }
    let fn_target = fn_target.ok_or_else(|| malformed("defret", "missing the :fn keyword"))?;
    Ok(DefretParts { name, body, keywords, fn_target })
}

/// The name of the `:fn` target of a defret form.
pub fn defret_fn_target(defret: &SExpr) -> Result<Symbol, ExpandError> {
    Ok(parse_defret(defret)?.fn_target)
}

/// Expand one defret into a defthm by binding the function's named returns
/// to the call of the function on its formals. The binder names carry the
/// `?` ignorable marker; an existing `b*` body gets the return binder
/// prepended rather than nested.
pub fn defret_expand(defret: &SExpr, f: &FunctionDef) -> Result<SExpr, ExpandError> {
    let parts = parse_defret(defret)?;
    if parts.fn_target != f.name {
        return Err(ExpandError::Malformed {
            context: "defret",
            detail: format!("`:fn {}` does not match function `{}`", parts.fn_target, f.name),
        });
    }
    let name = dmgen::subst_fn_template(&parts.name, &f.name);

    let mut call = vec![SExpr::Symbol(f.name.clone())];
    call.extend(f.formals.iter().map(|p| SExpr::Symbol(p.name.clone())));
    let call = SExpr::list(call);
    let ignorable = |n: &Symbol| SExpr::sym(format!("?{n}"));
    let binder_pattern = if f.returns.len() == 1 {
        ignorable(&f.returns[0].name)
    } else {
        let mut mv = vec![SExpr::sym("mv")];
        mv.extend(f.returns.iter().map(|r| ignorable(&r.name)));
        SExpr::list(mv)
    };
    let return_binder = SExpr::list(vec![binder_pattern, call]);

    let body = match parts.body.as_list() {
        Some([head, binders, rest @ ..]) if head.is_sym("b*") => {
            let mut new_binders = vec![return_binder];
            new_binders.extend(
                binders
                    .as_list()
                    .ok_or_else(|| malformed("defret", "b* bindings must be a list"))?
                    .iter()
                    .cloned(),
            );
            let mut out = vec![head.clone(), SExpr::list(new_binders)];
            out.extend(rest.iter().cloned());
            SExpr::list(out)
        }
        _ => SExpr::list(vec![
            SExpr::sym("b*"),
            SExpr::list(vec![return_binder]),
            parts.body.clone(),
        ]),
    };

    let mut out = vec![SExpr::sym("defthm"), SExpr::Symbol(name), body];
    for (key, value) in &parts.keywords {
        out.push(SExpr::Symbol(key.clone()));
        out.push(value.clone());
    }
    out.push(SExpr::sym(":flag"));
    out.push(SExpr::Symbol(f.name.clone()));
    Ok(SExpr::list(out))
}

/// Expand a `defret-mutual` into the clique's flag-defthm macro call.
/// Functions with no defret simply do not appear; the flag-defthm layer
/// gives them `t` branches.
pub fn defret_mutual_expand(form: &SExpr, clique: &CliqueDef) -> Result<SExpr, ExpandError> {
    let items = form
        .as_list()
        .filter(|v| v.first().is_some_and(|h| h.is_sym("defret-mutual")))
        .ok_or_else(|| malformed("defret-mutual", "wrong head"))?;
    let name = items
        .get(1)
        .and_then(|n| n.as_symbol())
        .ok_or_else(|| malformed("defret-mutual", "missing name symbol"))?;
    let mut defrets = Vec::new();
    let mut hints = None;
    let mut rest = items[2..].iter();
    while let Some(item) = rest.next() {
        if let Some(key) = item.as_symbol().filter(|s| s.is_keyword()) {
            let value = rest.next().ok_or_else(|| {
                malformed("defret-mutual", format!("keyword `{key}` has no value"))
            })?;
            if key == ":hints" {
                hints = Some(value.clone());
            } else if key == ":mutual-recursion" {
                let target = value.as_symbol().ok_or_else(|| {
                    malformed("defret-mutual", ":mutual-recursion wants a symbol")
                })?;
                if target != &clique.name {
                    return Err(ExpandError::WrongClique {
                        form: target.clone(),
                        clique: clique.name.clone(),
                    });
                }
            } else {
                return Err(ExpandError::UnknownKeyword(key.clone()));
            }
            continue;
        }
        defrets.push(item);
    }

    let mut seen: Vec<Symbol> = Vec::new();
    let mut defthms = Vec::new();
    for defret in defrets {
        let target = defret_fn_target(defret)?;
        if seen.contains(&target) {
            return Err(ExpandError::DuplicateFnTarget(target));
        }
        let f = clique.find_function(&target)?;
        defthms.push(defret_expand(defret, f)?);
        seen.push(target);
    }

    let mut out = vec![SExpr::Symbol(clique.flag_macro_name()), SExpr::Symbol(name.clone())];
    out.extend(defthms);
    if let Some(h) = hints {
        out.push(SExpr::sym(":hints"));
        out.push(h);
    }
    Ok(SExpr::list(out))
}

/// All stages of one expansion, addressable individually.
#[derive(Debug, Clone)]
pub struct Expansion {
    /// Normalized echo of the generate form; absent when the pipeline
    /// started from a hand-written `defret-mutual`.
    pub dmgen: Option<SExpr>,
    pub defret_mutual: SExpr,
    pub flag_defthm: SExpr,
    pub events: Vec<SExpr>,
    pub warnings: Vec<String>,
}

/// Run every stage, starting from either a `defret-mutual-generate` or a
/// hand-written `defret-mutual` form.
pub fn full_expand(source: &SExpr, clique: &CliqueDef) -> Result<Expansion, ExpandError> {
    let mut warnings = Vec::new();
    let mut no_induction_hint = false;
    let (dmgen_stage, defret_mutual) = if source.head_is("defret-mutual-generate") {
        let form = parse_dmgen_form(source)?;
        no_induction_hint = form.no_induction_hint;
        let dm = dmgen_expand_with_warnings(&form, clique, &mut warnings)?;
        (Some(render_dmgen_form(&form, &clique.name)), dm)
    } else if source.head_is("defret-mutual") {
        (None, source.clone())
    } else {
        return Err(malformed(
            "expansion source",
            format!(
                "expected defret-mutual-generate or defret-mutual, found `{}`",
                source.to_compact_string()
            ),
        ));
    };

    let flag_defthm = defret_mutual_expand(&defret_mutual, clique)?;
    let invocation = flag::parse_flag_defthm_invocation(&flag_defthm)?;
    let fc = FlagClique::with_default_names(clique)?;
    let stem = invocation.name.clone().unwrap_or_else(|| clique.flag_macro_name());
    let stem = dmgen::subst_fn_template(&stem, &clique.name);
    let lemma_name = Symbol::new(format!("{stem}-lemma"));
    let events = flag::make_flag_defthm_opts(
        &fc,
        &invocation.specs,
        &lemma_name,
        invocation.hints.as_ref(),
        !no_induction_hint,
    )?;
    Ok(Expansion { dmgen: dmgen_stage, defret_mutual, flag_defthm, events, warnings })
}

/// Wrap an event list in `(encapsulate nil ...)` with the first event (the
/// inductive lemma) local.
pub fn wrap_encapsulate(events: &[SExpr]) -> SExpr {
    let mut out = vec![SExpr::sym("encapsulate"), SExpr::nil()];
    for (i, e) in events.iter().enumerate() {
        if i == 0 {
            out.push(SExpr::list(vec![SExpr::sym("local"), e.clone()]));
        } else {
            out.push(e.clone());
        }
    }
    SExpr::list(out)
}

/// One entry of a quantifier-scaffold request.
#[derive(Debug, Clone)]
pub struct SkEntry {
    pub function: Symbol,
    pub body: SExpr,
    pub quantified_vars: Vec<Symbol>,
    pub final_thm_name: Symbol,
}

#[derive(Debug, Clone)]
pub struct SkScaffoldSpec {
    pub entries: Vec<SkEntry>,
}

/// Parse `(sk-scaffold (fn :quantify (v...) :body term [:name thm]) ...)`.
pub fn parse_sk_scaffold_spec(form: &SExpr) -> Result<SkScaffoldSpec, ExpandError> {
    let items = form
        .as_list()
        .filter(|v| v.first().is_some_and(|h| h.is_sym("sk-scaffold")))
        .ok_or_else(|| malformed("sk-scaffold", "wrong head"))?;
    let mut entries = Vec::new();
    for entry in &items[1..] {
        let parts =
            entry.as_list().ok_or_else(|| malformed("sk-scaffold", "entry must be a list"))?;
        let function = parts
            .first()
            .and_then(|n| n.as_symbol())
            .ok_or_else(|| malformed("sk-scaffold", "entry must start with a function name"))?
            .clone();
        let mut quantified_vars = Vec::new();
        let mut body = None;
        let mut name = None;
        let mut rest = parts[1..].iter();
        while let Some(item) = rest.next() {
            let key = item
                .as_symbol()
                .filter(|s| s.is_keyword())
                .ok_or_else(|| malformed("sk-scaffold", "entry options must be keywords"))?;
            let value = rest
                .next()
                .ok_or_else(|| malformed("sk-scaffold", format!("keyword `{key}` has no value")))?;
            if key == ":quantify" {
                let vars = value
                    .as_list()
                    .ok_or_else(|| malformed("sk-scaffold", ":quantify wants a list"))?;
                for v in vars {
                    quantified_vars.push(
                        v.as_symbol()
                            .ok_or_else(|| {
                                malformed("sk-scaffold", "quantified vars must be symbols")
                            })?
                            .clone(),
                    );
                }
            } else if key == ":body" {
                body = Some(value.clone());
            } else if key == ":name" {
                name = Some(
                    value
                        .as_symbol()
                        .ok_or_else(|| malformed("sk-scaffold", ":name wants a symbol"))?
                        .clone(),
                );
            } else {
                return Err(ExpandError::UnknownKeyword(key.clone()));
            }
        }
        let body = body.ok_or_else(|| malformed("sk-scaffold", "entry is missing :body"))?;
        if quantified_vars.is_empty() {
            return Err(malformed("sk-scaffold", "entry needs at least one quantified variable"));
        }
        let final_thm_name = name.unwrap_or_else(|| Symbol::new(format!("{function}-correct")));
        entries.push(SkEntry { function, body, quantified_vars, final_thm_name });
    }
    Ok(SkScaffoldSpec { entries })
}

fn occurs_outside_quote(term: &SExpr, var: &Symbol) -> bool {
    match term {
        SExpr::Symbol(s) => s == var,
        SExpr::List(v) => {
            if v.first().is_some_and(|h| h.is_sym("quote")) {
                return false;
            }
            v.iter().any(|x| occurs_outside_quote(x, var))
        }
        _ => false,
    }
}

/// Generate the quantifier-function scaffold: one `defun-sk` per entry, a
/// single flag-defthm bundle proving each quantified condition by flag
/// induction (with the stable-under-simplification expand hint), and the
/// plain final theorems derived by `:use` of the lemmas.
pub fn generate_sk_scaffold(
    clique: &CliqueDef,
    spec: &SkScaffoldSpec,
) -> Result<Vec<SExpr>, ExpandError> {
    let expand_hint =
        reader::read_one("(and stable-under-simplificationp `(:expand (,(car (last clause)))))")
            .expect("constant hint text");

    let mut sk_events = Vec::new();
    let mut lemma_defthms = Vec::new();
    let mut final_thms = Vec::new();
    for entry in &spec.entries {
        let f = clique.find_function(&entry.function)?;
        for var in &entry.quantified_vars {
            if f.formals.iter().any(|p| &p.name == var) {
                return Err(ExpandError::QuantifiedVarIsFormal {
                    var: var.clone(),
                    function: f.name.clone(),
                });
            }
            if !occurs_outside_quote(&entry.body, var) {
                return Err(ExpandError::QuantifiedVarNotFree {
                    var: var.clone(),
                    function: f.name.clone(),
                });
            }
        }

        let sk_name = Symbol::new(format!("{}-correct-cond", f.name));
        let sk_args: Vec<SExpr> = f
            .formals
            .iter()
            .filter(|p| !entry.quantified_vars.contains(&p.name))
            .map(|p| SExpr::Symbol(p.name.clone()))
            .collect();
        let forall_vars = if entry.quantified_vars.len() == 1 {
            SExpr::Symbol(entry.quantified_vars[0].clone())
        } else {
            SExpr::list(entry.quantified_vars.iter().map(|v| SExpr::Symbol(v.clone())).collect())
        };
        sk_events.push(SExpr::list(vec![
            SExpr::sym("defun-sk"),
            SExpr::Symbol(sk_name.clone()),
            SExpr::list(sk_args.clone()),
            SExpr::list(vec![SExpr::sym("forall"), forall_vars, entry.body.clone()]),
            SExpr::sym(":rewrite"),
            SExpr::sym(":direct"),
        ]));

        let lemma_name = Symbol::new(format!("{}-lemma", entry.final_thm_name));
        let mut cond_call = vec![SExpr::Symbol(sk_name)];
        cond_call.extend(sk_args);
        lemma_defthms.push(SExpr::list(vec![
            SExpr::sym("defthm"),
            SExpr::Symbol(lemma_name.clone()),
            SExpr::list(cond_call),
            SExpr::sym(":hints"),
            SExpr::list(vec![expand_hint.clone()]),
            SExpr::sym(":flag"),
            SExpr::Symbol(f.name.clone()),
            SExpr::sym(":rule-classes"),
            SExpr::nil(),
        ]));

        final_thms.push(SExpr::list(vec![
            SExpr::sym("defthm"),
            SExpr::Symbol(entry.final_thm_name.clone()),
            entry.body.clone(),
            SExpr::sym(":hints"),
            SExpr::list(vec![SExpr::list(vec![
                SExpr::string("goal"),
                SExpr::sym(":use"),
                SExpr::Symbol(lemma_name),
            ])]),
        ]));
    }

    let mut bundle = vec![SExpr::Symbol(clique.flag_macro_name())];
    bundle.extend(lemma_defthms);

    let mut events = sk_events;
    events.push(SExpr::list(bundle));
    events.extend(final_thms);
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clique::parse_clique;
    use crate::reader::read_one;

    fn clique(text: &str) -> CliqueDef {
        parse_clique(&read_one(text).unwrap()).unwrap()
    }

    fn subst_defines() -> CliqueDef {
        clique(
            "(defines subst-term
               (define subst-term ((x pseudo-termp) (alist pseudo-term-substp))
                 :returns (subst)
                 (cond ((not x) nil)
                       ((symbolp x) (cdr (assoc-equal x alist)))
                       ((atom x) nil)
                       ((eq (car x) 'quote) x)
                       (t (cons (car x) (subst-termlist (cdr x) alist)))))
               (define subst-termlist ((x pseudo-term-listp) (alist pseudo-term-substp))
                 :returns (subst)
                 (if (atom x)
                     nil
                   (cons (subst-term (car x) alist)
                         (subst-termlist (cdr x) alist)))))",
        )
    }

    #[test]
    fn defret_expand_single_return_binds_with_ignorable_marker() {
        let c = subst_defines();
        let defret = read_one(
            "(defret ev-term-of-subst-term
               (equal (ev-term subst env) (ev-term x (ev-alist alist env)))
               :fn subst-term)",
        )
        .unwrap();
        let got = defret_expand(&defret, &c.functions[0]).unwrap();
        let expected = read_one(
            "(defthm ev-term-of-subst-term
               (b* ((?subst (subst-term x alist)))
                 (equal (ev-term subst env) (ev-term x (ev-alist alist env))))
               :flag subst-term)",
        )
        .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn defret_expand_prepends_to_an_existing_b_star() {
        let c = clique(
            "(defines f
               (define f ((x)) :returns (mv (a) (b))
                 (if (atom x) (mv x x) (f (car x)))))",
        );
        let defret = read_one(
            "(defret p-of-<fn>
               (b* ((?lm (logicman x))) (p a lm))
               :fn f)",
        )
        .unwrap();
        let got = defret_expand(&defret, &c.functions[0]).unwrap();
        let expected = read_one(
            "(defthm p-of-f
               (b* (((mv ?a ?b) (f x))
                    (?lm (logicman x)))
                 (p a lm))
               :flag f)",
        )
        .unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn defret_expand_requires_the_fn_keyword() {
        let c = subst_defines();
        let defret = read_one("(defret thm (p subst))").unwrap();
        assert!(defret_expand(&defret, &c.functions[0]).is_err());
    }

    #[test]
    fn function_keys_attach_only_to_their_function() {
        let c = subst_defines();
        let form = parse_dmgen_form(
            &read_one(
                "(defret-mutual-generate true-listp-of-<fn>
                   :return-concls ((subst (true-listp subst)))
                   :function-keys ((subst-termlist :rule-classes :type-prescription))
                   :mutual-recursion subst-term)",
            )
            .unwrap(),
        )
        .unwrap();
        let dm = dmgen_expand(&form, &c).unwrap();
        let items = dm.as_list().unwrap();
        let first = items[2].to_compact_string();
        let second = items[3].to_compact_string();
        assert!(!first.contains(":rule-classes"), "{first}");
        assert!(second.contains(":rule-classes :type-prescription"), "{second}");
    }

    #[test]
    fn all_skipped_is_an_error() {
        let c = subst_defines();
        let form = parse_dmgen_form(
            &read_one(
                "(defret-mutual-generate nothing-of-<fn>
                   :return-concls ((no-such-return (p no-such-return)))
                   :mutual-recursion subst-term)",
            )
            .unwrap(),
        )
        .unwrap();
        assert!(matches!(dmgen_expand(&form, &c), Err(ExpandError::AllFunctionsSkipped)));
    }

    #[test]
    fn verbatim_name_warns_when_shared() {
        let c = subst_defines();
        let form = parse_dmgen_form(
            &read_one(
                "(defret-mutual-generate shared-name
                   :return-concls ((subst (true-listp subst)))
                   :mutual-recursion subst-term)",
            )
            .unwrap(),
        )
        .unwrap();
        let mut warnings = Vec::new();
        dmgen_expand_with_warnings(&form, &c, &mut warnings).unwrap();
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn unknown_generate_keyword_is_rejected() {
        let form = read_one("(defret-mutual-generate n :frobnicate x)").unwrap();
        assert!(matches!(parse_dmgen_form(&form), Err(ExpandError::UnknownKeyword(_))));
    }

    #[test]
    fn no_induction_hint_drops_the_induct_goal_hint() {
        let c = subst_defines();
        let with = read_one(
            "(defret-mutual-generate listp-of-<fn>
               :return-concls ((subst (true-listp subst)))
               :mutual-recursion subst-term)",
        )
        .unwrap();
        let lemma = full_expand(&with, &c).unwrap().events.remove(0);
        assert!(lemma.to_compact_string().contains(":induct"));

        let without = read_one(
            "(defret-mutual-generate listp-of-<fn>
               :return-concls ((subst (true-listp subst)))
               :no-induction-hint t
               :mutual-recursion subst-term)",
        )
        .unwrap();
        let lemma = full_expand(&without, &c).unwrap().events.remove(0);
        let text = lemma.to_compact_string();
        assert!(!text.contains(":induct"), "{text}");
        assert!(!text.contains(":hints"), "empty hints are omitted: {text}");
    }

    #[test]
    fn full_expand_from_hand_written_defret_mutual() {
        let c = subst_defines();
        let dm = read_one(
            "(defret-mutual ev-term-of-subst-term
               (defret ev-term-of-subst-term
                 (equal (ev-term subst env) (ev-term x (ev-alist alist env)))
                 :fn subst-term)
               (defret ev-termlist-of-subst-termlist
                 (equal (ev-termlist subst env) (ev-termlist x (ev-alist alist env)))
                 :fn subst-termlist))",
        )
        .unwrap();
        let exp = full_expand(&dm, &c).unwrap();
        assert!(exp.dmgen.is_none());
        assert!(exp.flag_defthm.head_is("defthm-subst-term-flag"));
        assert_eq!(exp.events.len(), 3);
        let lemma = exp.events[0].as_list().unwrap();
        assert_eq!(lemma[1], SExpr::sym("ev-term-of-subst-term-lemma"));
        // Stage targets agree: defrets, defthms, and corollaries line up.
        let corollary_names: Vec<String> =
            exp.events[1..].iter().map(|e| e.as_list().unwrap()[1].to_compact_string()).collect();
        assert_eq!(corollary_names, vec!["ev-term-of-subst-term", "ev-termlist-of-subst-termlist"]);
    }

    #[test]
    fn duplicate_fn_targets_rejected() {
        let c = subst_defines();
        let dm = read_one(
            "(defret-mutual n
               (defret a (p subst) :fn subst-term)
               (defret b (q subst) :fn subst-term))",
        )
        .unwrap();
        assert!(matches!(defret_mutual_expand(&dm, &c), Err(ExpandError::DuplicateFnTarget(_))));
    }

    #[test]
    fn scaffold_errors() {
        let c = clique("(mutual-recursion (defun f (x) x))");
        let entry = |var: &str, body: &str| SkScaffoldSpec {
            entries: vec![SkEntry {
                function: Symbol::new("f"),
                body: read_one(body).unwrap(),
                quantified_vars: vec![Symbol::new(var)],
                final_thm_name: Symbol::new("f-correct"),
            }],
        };
        assert!(matches!(
            generate_sk_scaffold(&c, &entry("env", "(equal (ev (f x) other) (ev x other))")),
            Err(ExpandError::QuantifiedVarNotFree { .. })
        ));
        assert!(matches!(
            generate_sk_scaffold(&c, &entry("x", "(equal (ev (f x) x) x)")),
            Err(ExpandError::QuantifiedVarIsFormal { .. })
        ));
    }

    #[test]
    fn scaffold_single_function() {
        let c = clique("(mutual-recursion (defun f (x) x))");
        let spec = SkScaffoldSpec {
            entries: vec![SkEntry {
                function: Symbol::new("f"),
                body: read_one("(equal (ev (f x) env) (ev x env))").unwrap(),
                quantified_vars: vec![Symbol::new("env")],
                final_thm_name: Symbol::new("f-correct"),
            }],
        };
        let events = generate_sk_scaffold(&c, &spec).unwrap();
        assert_eq!(events.len(), 3);
        assert!(events[0].head_is("defun-sk"));
        assert!(events[1].head_is("defthm-f-flag"));
        assert!(events[2].head_is("defthm"));
    }

    #[test]
    fn encapsulate_makes_the_first_event_local() {
        let events = vec![read_one("(defthm lem t)").unwrap(), read_one("(defthm cor t)").unwrap()];
        let wrapped = wrap_encapsulate(&events);
        assert_eq!(
            wrapped,
            read_one("(encapsulate nil (local (defthm lem t)) (defthm cor t))").unwrap()
        );
    }
}
