//! The flag-function transformation.
//!
//! A clique of mutually recursive functions becomes a single function with
//! an extra flag argument saying which member to emulate; recursive calls
//! are rewritten to pass the callee's name as the flag. On top of that sits
//! the flag-defthm expansion: one case-split lemma proved by induction on
//! the flag function, plus one corollary per function obtained by
//! instantiating the flag.

use crate::clique::{map_member_calls, CliqueDef, CliqueError, Formal};
use crate::sexpr::{SExpr, Symbol};
use std::convert::Infallible;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum FlagError {
    #[error("flag parameter `{param}` collides with formal `{param}`")]
    FlagParamCollision { param: Symbol },
    #[error("clique has no functions")]
    EmptyClique,
    #[error("theorem spec targets unknown function `{0}`")]
    UnknownSpecFunction(Symbol),
    #[error("two theorem specs target function `{0}`")]
    DuplicateSpec(Symbol),
    #[error("theorem spec for `{0}` has an empty body but is not marked :skip")]
    EmptySpecBody(Symbol),
    #[error("malformed flag-defthm invocation: {0}")]
    MalformedInvocation(String),
    #[error(transparent)]
    Clique(#[from] CliqueError),
}

/// A clique together with its synthesized flag function.
#[derive(Debug, Clone)]
pub struct FlagClique {
    pub source: CliqueDef,
    pub flag_fn_name: Symbol,
    pub flag_param: Symbol,
    pub union_formals: Vec<Formal>,
    pub flag_values: Vec<Symbol>,
    pub flag_fn_def: SExpr,
    pub equivalence_thm: SExpr,
}

/// One theorem of a flag-defthm bundle: the statement to prove for one
/// particular flag value.
#[derive(Debug, Clone, PartialEq)]
pub struct ThmSpec {
    pub thm_name: Symbol,
    pub flag_value: Symbol,
    pub body: SExpr,
    pub rule_classes: Option<SExpr>,
    pub hints: Option<SExpr>,
    pub skip: bool,
}

fn quote(x: SExpr) -> SExpr {
    SExpr::list(vec![SExpr::sym("quote"), x])
}

impl FlagClique {
    /// Conventional naming: flag function `<clique>-flag`, parameter `flag`.
    pub fn with_default_names(clique: &CliqueDef) -> Result<FlagClique, FlagError> {
        make_flag_function(
            clique,
            &Symbol::new(format!("{}-flag", clique.name)),
            &Symbol::new("flag"),
        )
    }
}

/// Union of formal names in first-appearance order. Unlike the strict
/// [`CliqueDef::formals_union`], a type disagreement keeps the first type
/// seen: the synthesized flag function is an untyped `defun`, so only the
/// names matter here, and cliques genuinely do type a shared formal
/// differently per function (a term/termlist pair typically does).
fn union_formals_lenient(clique: &CliqueDef) -> Vec<Formal> {
    let mut union: Vec<Formal> = Vec::new();
    for f in &clique.functions {
        for formal in &f.formals {
            match union.iter_mut().find(|u| u.name == formal.name) {
                None => union.push(formal.clone()),
                Some(u) => {
                    if u.type_pred.is_none() {
                        u.type_pred = formal.type_pred.clone();
                    }
                }
            }
        }
    }
    union
}

/// Synthesize the flag function for `clique`. Each recursive call
/// `(fi a1 .. ak)` becomes `(<flag-fn> 'fi u1 .. um)` over the union
/// formals, where a union formal that is not a formal of the callee passes
/// through unchanged, keeping the flag function a faithful emulator.
pub fn make_flag_function(
    clique: &CliqueDef,
    flag_fn_name: &Symbol,
    flag_param: &Symbol,
) -> Result<FlagClique, FlagError> {
    if clique.functions.is_empty() {
        return Err(FlagError::EmptyClique);
    }
    let union_formals = union_formals_lenient(clique);
    if union_formals.iter().any(|f| &f.name == flag_param) {
        return Err(FlagError::FlagParamCollision { param: flag_param.clone() });
    }

    let is_member = |s: &Symbol| clique.is_member(s);
    let mut case_form = vec![SExpr::sym("case"), SExpr::Symbol(flag_param.clone())];
    let last = clique.functions.len() - 1;
    for (i, f) in clique.functions.iter().enumerate() {
        let rewritten = map_member_calls(&f.body, &is_member, &mut |callee, args| {
            let def = clique.find_function(callee).expect("member");
            let mut call =
                vec![SExpr::Symbol(flag_fn_name.clone()), quote(SExpr::Symbol(callee.clone()))];
            for u in &union_formals {
                match def.formals.iter().position(|p| p.name == u.name) {
                    Some(pos) => call.push(args[pos].clone()),
                    None => call.push(SExpr::Symbol(u.name.clone())),
                }
            }
            Ok::<SExpr, Infallible>(SExpr::list(call))
        });
        let rewritten = match rewritten {
            Ok(x) => x,
            Err(e) => match e {},
        };
        let key = if i == last { SExpr::t() } else { SExpr::Symbol(f.name.clone()) };
        case_form.push(SExpr::list(vec![key, rewritten]));
    }

    let mut params = vec![SExpr::Symbol(flag_param.clone())];
    params.extend(union_formals.iter().map(|f| SExpr::Symbol(f.name.clone())));
    let flag_fn_def = SExpr::list(vec![
        SExpr::sym("defun"),
        SExpr::Symbol(flag_fn_name.clone()),
        SExpr::list(params),
        SExpr::list(case_form),
    ]);

    let mut fc = FlagClique {
        source: clique.clone(),
        flag_fn_name: flag_fn_name.clone(),
        flag_param: flag_param.clone(),
        union_formals,
        flag_values: clique.functions.iter().map(|f| f.name.clone()).collect(),
        flag_fn_def,
        equivalence_thm: SExpr::nil(),
    };
    fc.equivalence_thm = make_equivalence_theorem(&fc);
    Ok(fc)
}

fn flag_call(fc: &FlagClique) -> SExpr {
    let mut call =
        vec![SExpr::Symbol(fc.flag_fn_name.clone()), SExpr::Symbol(fc.flag_param.clone())];
    call.extend(fc.union_formals.iter().map(|f| SExpr::Symbol(f.name.clone())));
    SExpr::list(call)
}

/// Dispatch on the flag, with the last branch keyed `t`.
fn case_over_functions(fc: &FlagClique, mut body_for: impl FnMut(usize) -> SExpr) -> SExpr {
    let mut case_form = vec![SExpr::sym("case"), SExpr::Symbol(fc.flag_param.clone())];
    let last = fc.source.functions.len() - 1;
    for (i, f) in fc.source.functions.iter().enumerate() {
        let key = if i == last { SExpr::t() } else { SExpr::Symbol(f.name.clone()) };
        case_form.push(SExpr::list(vec![key, body_for(i)]));
    }
    SExpr::list(case_form)
}

/// The statement that the flag function equals each clique function when
/// dispatched by the flag.
pub fn make_equivalence_theorem(fc: &FlagClique) -> SExpr {
    let name = Symbol::new(format!("{}-equals-{}", fc.flag_fn_name, fc.source.name));
    let dispatch = case_over_functions(fc, |i| {
        let f = &fc.source.functions[i];
        let mut call = vec![SExpr::Symbol(f.name.clone())];
        call.extend(f.formals.iter().map(|p| SExpr::Symbol(p.name.clone())));
        SExpr::list(call)
    });
    SExpr::list(vec![
        SExpr::sym("defthm"),
        SExpr::Symbol(name),
        SExpr::list(vec![SExpr::sym("equal"), flag_call(fc), dispatch]),
    ])
}

/// Expand a flag-defthm bundle: the case-split lemma (proved by inducting
/// on the flag function, `:rule-classes nil`) followed by one corollary per
/// non-skip spec, instantiating the lemma at that spec's flag value.
/// Functions with no spec, or a `:skip` spec, get a `t` branch.
pub fn make_flag_defthm(
    fc: &FlagClique,
    specs: &[ThmSpec],
    lemma_name: &Symbol,
    hints: Option<&SExpr>,
) -> Result<Vec<SExpr>, FlagError> {
    make_flag_defthm_opts(fc, specs, lemma_name, hints, true)
}

/// As [`make_flag_defthm`], optionally omitting the `:induct` goal hint.
pub fn make_flag_defthm_opts(
    fc: &FlagClique,
    specs: &[ThmSpec],
    lemma_name: &Symbol,
    hints: Option<&SExpr>,
    induction_hint: bool,
) -> Result<Vec<SExpr>, FlagError> {
    for (i, s) in specs.iter().enumerate() {
        if !fc.source.is_member(&s.flag_value) {
            return Err(FlagError::UnknownSpecFunction(s.flag_value.clone()));
        }
        if specs[..i].iter().any(|p| p.flag_value == s.flag_value) {
            return Err(FlagError::DuplicateSpec(s.flag_value.clone()));
        }
        if !s.skip && s.body.is_nil() {
            return Err(FlagError::EmptySpecBody(s.flag_value.clone()));
        }
    }

    let spec_for = |name: &Symbol| specs.iter().find(|s| &s.flag_value == name);
    let lemma_body = case_over_functions(fc, |i| {
        let f = &fc.source.functions[i];
        match spec_for(&f.name) {
            Some(s) if !s.skip => s.body.clone(),
            _ => SExpr::t(),
        }
    });

    let mut hint_list = Vec::new();
    if induction_hint {
        hint_list.push(SExpr::list(vec![
            SExpr::string("goal"),
            SExpr::sym(":induct"),
            flag_call(fc),
        ]));
    }
    if let Some(extra) = hints {
        match extra.as_list() {
            Some(items) => hint_list.extend(items.iter().cloned()),
            None => hint_list.push(extra.clone()),
        }
    }
    // Per-spec hints guide the inductive proof, so they ride on the lemma.
    for s in specs {
        if let Some(h) = &s.hints {
            match h.as_list() {
                Some(items) => hint_list.extend(items.iter().cloned()),
                None => hint_list.push(h.clone()),
            }
        }
    }

    let mut lemma =
        vec![SExpr::sym("defthm"), SExpr::Symbol(lemma_name.clone()), lemma_body];
    if !hint_list.is_empty() {
        lemma.push(SExpr::sym(":hints"));
        lemma.push(SExpr::list(hint_list));
    }
    lemma.push(SExpr::sym(":rule-classes"));
    lemma.push(SExpr::nil());
    let lemma = SExpr::list(lemma);

    let mut events = vec![lemma];
    for s in specs.iter().filter(|s| !s.skip) {
        let instance = SExpr::list(vec![
            SExpr::sym(":instance"),
            SExpr::Symbol(lemma_name.clone()),
            SExpr::list(vec![
                SExpr::Symbol(fc.flag_param.clone()),
                quote(SExpr::Symbol(s.flag_value.clone())),
            ]),
        ]);
        let goal_hint = SExpr::list(vec![
            SExpr::string("goal"),
            SExpr::sym(":use"),
            SExpr::list(vec![instance]),
        ]);
        let mut thm = vec![
            SExpr::sym("defthm"),
            SExpr::Symbol(s.thm_name.clone()),
            s.body.clone(),
            SExpr::sym(":hints"),
            SExpr::list(vec![goal_hint]),
        ];
        if let Some(rc) = &s.rule_classes {
            thm.push(SExpr::sym(":rule-classes"));
            thm.push(rc.clone());
        }
        events.push(SExpr::list(thm));
    }
    Ok(events)
}

/// A parsed flag-defthm macro call: optional bundle name, the theorem
/// specs, and bundle-level hints.
#[derive(Debug, Clone)]
pub struct FlagDefthmInvocation {
    pub name: Option<Symbol>,
    pub specs: Vec<ThmSpec>,
    pub hints: Option<SExpr>,
}

/// Parse `(defthm-<...>-flag [name] (defthm ...) ... [:hints h])`.
pub fn parse_flag_defthm_invocation(form: &SExpr) -> Result<FlagDefthmInvocation, FlagError> {
    let bad = |msg: String| FlagError::MalformedInvocation(msg);
    let items = form.as_list().ok_or_else(|| bad("not a list".into()))?;
    if items.is_empty() || items[0].as_symbol().is_none() {
        return Err(bad("missing macro head".into()));
    }
    let mut inv = FlagDefthmInvocation { name: None, specs: Vec::new(), hints: None };
    let mut rest = items[1..].iter().peekable();
    if let Some(SExpr::Symbol(s)) = rest.peek().copied() {
        if !s.is_keyword() {
            inv.name = Some(s.clone());
            rest.next();
        }
    }
    while let Some(item) = rest.next() {
        if let Some(s) = item.as_symbol() {
            if s.is_keyword() {
                let value =
                    rest.next().ok_or_else(|| bad(format!("keyword `{s}` has no value")))?;
                if s == ":hints" {
                    inv.hints = Some(value.clone());
                } else {
                    return Err(bad(format!("unsupported bundle keyword `{s}`")));
                }
                continue;
            }
        }
        if !item.head_is("defthm") {
            return Err(bad(format!(
                "expected a defthm form, found `{}`",
                item.to_compact_string()
            )));
        }
        inv.specs.push(parse_thm_spec(item)?);
    }
    Ok(inv)
}

fn parse_thm_spec(form: &SExpr) -> Result<ThmSpec, FlagError> {
    let bad = |msg: String| FlagError::MalformedInvocation(msg);
    let items = form.as_list().unwrap();
    if items.len() < 3 {
        return Err(bad("defthm needs a name and a body".into()));
    }
    let thm_name =
        items[1].as_symbol().ok_or_else(|| bad("defthm name must be a symbol".into()))?.clone();
    let body = items[2].clone();
    let mut spec = ThmSpec {
        thm_name,
        flag_value: Symbol::new(""),
        body,
        rule_classes: None,
        hints: None,
        skip: false,
    };
    let mut flag = None;
    let mut rest = items[3..].iter();
    while let Some(item) = rest.next() {
        let key = item.as_symbol().filter(|s| s.is_keyword()).ok_or_else(|| {
            bad(format!("expected a keyword, found `{}`", item.to_compact_string()))
        })?;
        let value = rest.next().ok_or_else(|| bad(format!("keyword `{key}` has no value")))?;
        if key == ":flag" {
            flag = Some(
                value
                    .as_symbol()
                    .ok_or_else(|| bad(":flag value must be a symbol".into()))?
                    .clone(),
            );
        } else if key == ":rule-classes" {
            spec.rule_classes = Some(value.clone());
        } else if key == ":hints" {
            spec.hints = Some(value.clone());
        } else if key == ":skip" {
            spec.skip = !value.is_nil();
        } else {
            return Err(bad(format!("unsupported defthm keyword `{key}`")));
        }
    }
    spec.flag_value =
        flag.ok_or_else(|| bad(format!("defthm `{}` is missing its :flag", spec.thm_name)))?;
    Ok(spec)
}
