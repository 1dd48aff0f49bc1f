//! Normalized representation of a mutually recursive clique.
//!
//! Both `mutual-recursion`/`defun` and `defines`/`define` surface forms
//! normalize into the same [`CliqueDef`] structure: every function carries
//! named (optionally typed) formals and named (optionally typed) returns.
//! A plain `defun` gets one anonymous return named `<fn>-result` so the
//! return-binding machinery downstream is uniform.

use crate::sexpr::{SExpr, Symbol};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum CliqueError {
    #[error("expected a mutual-recursion or defines form, found `{0}`")]
    UnrecognizedHead(String),
    #[error("duplicate function name `{0}` in clique")]
    DuplicateFunction(Symbol),
    #[error("duplicate formal `{formal}` in function `{function}`")]
    DuplicateFormal { function: Symbol, formal: Symbol },
    #[error("duplicate return name `{name}` in function `{function}`")]
    DuplicateReturn { function: Symbol, name: Symbol },
    #[error("call to `{callee}` in `{function}` has {found} argument(s), expected {expected}")]
    ArityMismatch { function: Symbol, callee: Symbol, expected: usize, found: usize },
    #[error("formal `{formal}` declared with conflicting types `{first}` and `{second}`")]
    ConflictingFormalType { formal: Symbol, first: Symbol, second: Symbol },
    #[error("unknown function `{0}`")]
    UnknownFunction(Symbol),
    #[error("malformed {context}: {detail}")]
    Malformed { context: &'static str, detail: String },
}

fn malformed(context: &'static str, detail: impl Into<String>) -> CliqueError {
    CliqueError::Malformed { context, detail: detail.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formal {
    pub name: Symbol,
    pub type_pred: Option<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReturnSpec {
    pub name: Symbol,
    pub type_pred: Option<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: Symbol,
    pub formals: Vec<Formal>,
    pub returns: Vec<ReturnSpec>,
    pub body: SExpr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueDef {
    pub name: Symbol,
    pub functions: Vec<FunctionDef>,
}

impl CliqueDef {
    /// Name of the theorem macro the flag transformation introduces.
    pub fn flag_macro_name(&self) -> Symbol {
        Symbol::new(format!("defthm-{}-flag", self.name))
    }

    pub fn find_function(&self, name: &Symbol) -> Result<&FunctionDef, CliqueError> {
        self.functions
            .iter()
            .find(|f| &f.name == name)
            .ok_or_else(|| CliqueError::UnknownFunction(name.clone()))
    }

    pub fn is_member(&self, name: &Symbol) -> bool {
        self.functions.iter().any(|f| &f.name == name)
    }

    /// Union of all formals, ordered by first appearance scanning the clique
    /// in definition order. A formal typed in one function and untyped in
    /// another keeps the first type seen; two different explicit types are
    /// an error.
    pub fn formals_union(&self) -> Result<Vec<Formal>, CliqueError> {
        let mut union: Vec<Formal> = Vec::new();
        for f in &self.functions {
            for formal in &f.formals {
                match union.iter_mut().find(|u| u.name == formal.name) {
                    None => union.push(formal.clone()),
                    Some(u) => match (&u.type_pred, &formal.type_pred) {
                        (None, Some(p)) => u.type_pred = Some(p.clone()),
                        (Some(a), Some(b)) if a != b => {
                            return Err(CliqueError::ConflictingFormalType {
                                formal: formal.name.clone(),
                                first: a.clone(),
                                second: b.clone(),
                            })
                        }
                        _ => {}
                    },
                }
            }
        }
        Ok(union)
    }

    /// Re-serialize as a `defines` form. Parsing the result yields an equal
    /// clique, which is the normalization-idempotence check.
    pub fn to_defines_form(&self) -> SExpr {
        let mut items = vec![SExpr::sym("defines"), SExpr::Symbol(self.name.clone())];
        for f in &self.functions {
            let formals = f
                .formals
                .iter()
                .map(|fm| match &fm.type_pred {
                    None => SExpr::Symbol(fm.name.clone()),
                    Some(p) => {
                        SExpr::list(vec![SExpr::Symbol(fm.name.clone()), SExpr::Symbol(p.clone())])
                    }
                })
                .collect();
            let ret_entry = |r: &ReturnSpec| {
                let mut e = vec![SExpr::Symbol(r.name.clone())];
                if let Some(p) = &r.type_pred {
                    e.push(SExpr::Symbol(p.clone()));
                }
                SExpr::list(e)
            };
            let returns = if f.returns.len() == 1 {
                ret_entry(&f.returns[0])
            } else {
                let mut e = vec![SExpr::sym("mv")];
                e.extend(f.returns.iter().map(ret_entry));
                SExpr::list(e)
            };
            items.push(SExpr::list(vec![
                SExpr::sym("define"),
                SExpr::Symbol(f.name.clone()),
                SExpr::list(formals),
                SExpr::sym(":returns"),
                returns,
                f.body.clone(),
            ]));
        }
        SExpr::list(items)
    }
}

/// Parse a `mutual-recursion` or `defines` form into a [`CliqueDef`].
pub fn parse_clique(form: &SExpr) -> Result<CliqueDef, CliqueError> {
    let items = form.as_list().ok_or_else(|| malformed("clique form", "not a list"))?;
    let head = items
        .first()
        .and_then(|h| h.as_symbol())
        .ok_or_else(|| malformed("clique form", "missing head symbol"))?;

    let clique = if head == "mutual-recursion" {
        let mut functions = Vec::new();
        for sub in &items[1..] {
            functions.push(parse_defun(sub)?);
        }
        let name = functions
            .first()
            .map(|f| f.name.clone())
            .ok_or_else(|| malformed("mutual-recursion", "no defun forms"))?;
        CliqueDef { name, functions }
    } else if head == "defines" {
        let name = items
            .get(1)
            .and_then(|n| n.as_symbol())
            .ok_or_else(|| malformed("defines", "missing clique name"))?
            .clone();
        let mut functions = Vec::new();
        let mut rest = items[2..].iter();
        while let Some(item) = rest.next() {
            if item.is_sym("///") {
                break; // post events are not part of the definitions
            }
            if let Some(s) = item.as_symbol() {
                if s.is_keyword() {
                    rest.next(); // defines-level option, skipped with its value
                    continue;
                }
            }
            if matches!(item, SExpr::Str(_)) {
                continue;
            }
            if item.head_is("define") {
                functions.push(parse_define(item)?);
            } else {
                return Err(malformed(
                    "defines",
                    format!("unexpected element `{}`", item.to_compact_string()),
                ));
            }
        }
        if functions.is_empty() {
            return Err(malformed("defines", "no define forms"));
        }
        CliqueDef { name, functions }
    } else {
        return Err(CliqueError::UnrecognizedHead(head.text().to_string()));
    };

    for (i, f) in clique.functions.iter().enumerate() {
        if clique.functions[..i].iter().any(|g| g.name == f.name) {
            return Err(CliqueError::DuplicateFunction(f.name.clone()));
        }
    }
    validate_call_arities(&clique)?;
    Ok(clique)
}

fn expect_symbol<'a>(x: &'a SExpr, context: &'static str) -> Result<&'a Symbol, CliqueError> {
    x.as_symbol().ok_or_else(|| {
        malformed(context, format!("expected a symbol, found `{}`", x.to_compact_string()))
    })
}

fn parse_defun(form: &SExpr) -> Result<FunctionDef, CliqueError> {
    if !form.head_is("defun") {
        return Err(malformed(
            "mutual-recursion",
            format!("expected a defun form, found `{}`", form.to_compact_string()),
        ));
    }
    let items = form.as_list().unwrap();
    if items.len() < 4 {
        return Err(malformed("defun", "needs a name, a formal list, and a body"));
    }
    let name = expect_symbol(&items[1], "defun name")?.clone();
    let formals = parse_formal_list(&items[2], &name, false)?;
    // Doc strings and declare forms sit between the formals and the body.
    for x in &items[3..items.len() - 1] {
        let ok = matches!(x, SExpr::Str(_)) || x.head_is("declare");
        if !ok {
            return Err(malformed(
                "defun",
                format!("unexpected form before body: `{}`", x.to_compact_string()),
            ));
        }
    }
    let body = items.last().unwrap().clone();
    let returns = vec![ReturnSpec { name: Symbol::new(format!("{name}-result")), type_pred: None }];
    Ok(FunctionDef { name, formals, returns, body })
}

fn parse_define(form: &SExpr) -> Result<FunctionDef, CliqueError> {
    let items = form.as_list().unwrap();
    if items.len() < 3 {
        return Err(malformed("define", "needs a name and a formal list"));
    }
    let name = expect_symbol(&items[1], "define name")?.clone();
    let formals = parse_formal_list(&items[2], &name, true)?;
    let mut returns = None;
    let mut body_forms: Vec<&SExpr> = Vec::new();
    let mut rest = items[3..].iter();
    while let Some(item) = rest.next() {
        if item.is_sym("///") {
            break;
        }
        if let Some(s) = item.as_symbol() {
            if s.is_keyword() {
                let value = rest
                    .next()
                    .ok_or_else(|| malformed("define", format!("keyword `{s}` has no value")))?;
                if s == ":returns" {
                    returns = Some(parse_returns(value, &name)?);
                }
                continue;
            }
        }
        if matches!(item, SExpr::Str(_)) || item.head_is("declare") {
            continue;
        }
        body_forms.push(item);
    }
    let body = body_forms
        .last()
        .ok_or_else(|| malformed("define", format!("function `{name}` has no body")))?;
    let returns = returns.unwrap_or_else(|| {
        vec![ReturnSpec { name: Symbol::new(format!("{name}-result")), type_pred: None }]
    });
    for (i, r) in returns.iter().enumerate() {
        if returns[..i].iter().any(|q| q.name == r.name) {
            return Err(CliqueError::DuplicateReturn {
                function: name.clone(),
                name: r.name.clone(),
            });
        }
    }
    Ok(FunctionDef { name, formals, returns, body: (*body).clone() })
}

fn parse_formal_list(
    form: &SExpr,
    function: &Symbol,
    allow_types: bool,
) -> Result<Vec<Formal>, CliqueError> {
    let items = form.as_list().ok_or_else(|| malformed("formal list", "not a list"))?;
    let mut formals = Vec::new();
    for item in items {
        let formal = match item {
            SExpr::Symbol(s) if !s.is_keyword() => Formal { name: s.clone(), type_pred: None },
            SExpr::List(v) if allow_types && !v.is_empty() => {
                let name = expect_symbol(&v[0], "formal name")?.clone();
                let type_pred = v.get(1).and_then(|p| p.as_symbol()).cloned();
                Formal { name, type_pred }
            }
            _ => {
                return Err(malformed(
                    "formal list",
                    format!("bad formal `{}`", item.to_compact_string()),
                ))
            }
        };
        if formals.iter().any(|f: &Formal| f.name == formal.name) {
            return Err(CliqueError::DuplicateFormal {
                function: function.clone(),
                formal: formal.name,
            });
        }
        formals.push(formal);
    }
    Ok(formals)
}

fn parse_return_entry(x: &SExpr) -> Result<ReturnSpec, CliqueError> {
    match x {
        SExpr::Symbol(s) => Ok(ReturnSpec { name: s.clone(), type_pred: None }),
        SExpr::List(v) if !v.is_empty() => {
            let name = expect_symbol(&v[0], "return name")?.clone();
            let type_pred = v.get(1).and_then(|p| p.as_symbol()).cloned();
            Ok(ReturnSpec { name, type_pred })
        }
        _ => Err(malformed(":returns", format!("bad entry `{}`", x.to_compact_string()))),
    }
}

fn parse_returns(form: &SExpr, function: &Symbol) -> Result<Vec<ReturnSpec>, CliqueError> {
    match form {
        SExpr::Symbol(_) => Ok(vec![parse_return_entry(form)?]),
        SExpr::List(v) if v.first().is_some_and(|h| h.is_sym("mv")) => {
            if v.len() < 2 {
                return Err(malformed(":returns", format!("empty mv in `{function}`")));
            }
            v[1..].iter().map(parse_return_entry).collect()
        }
        SExpr::List(v) if !v.is_empty() => Ok(vec![parse_return_entry(form)?]),
        _ => Err(malformed(":returns", format!("bad :returns in `{function}`"))),
    }
}

fn validate_call_arities(clique: &CliqueDef) -> Result<(), CliqueError> {
    for f in &clique.functions {
        let is_member = |s: &Symbol| clique.is_member(s);
        map_member_calls(&f.body, &is_member, &mut |callee, args| {
            let def = clique.find_function(callee).expect("member");
            if args.len() != def.formals.len() {
                return Err(CliqueError::ArityMismatch {
                    function: f.name.clone(),
                    callee: callee.clone(),
                    expected: def.formals.len(),
                    found: args.len(),
                });
            }
            let mut call = vec![SExpr::Symbol(callee.clone())];
            call.extend(args);
            Ok(SExpr::list(call))
        })?;
    }
    Ok(())
}

/// Rewrite applied at a member call site: receives the callee name and the
/// already rewritten arguments.
pub type CallRewrite<'a, E> = dyn FnMut(&Symbol, Vec<SExpr>) -> Result<SExpr, E> + 'a;

/// Rebuild `term` with `f` applied at every call to a clique member, walking
/// arguments first so nested (reflexive) calls are rewritten inside out.
/// Binding positions are left alone: `quote` bodies, `case` branch keys,
/// `let`/`b*` binder patterns, `mv-let` variable lists, and `lambda` formal
/// lists are not treated as calls.
pub fn map_member_calls<E>(
    term: &SExpr,
    is_member: &dyn Fn(&Symbol) -> bool,
    f: &mut CallRewrite<'_, E>,
) -> Result<SExpr, E> {
    let SExpr::List(items) = term else { return Ok(term.clone()) };
    if items.is_empty() {
        return Ok(term.clone());
    }
    let map_slice = |slice: &[SExpr], f: &mut CallRewrite<'_, E>| -> Result<Vec<SExpr>, E> {
        slice.iter().map(|x| map_member_calls(x, is_member, f)).collect()
    };
    if let Some(head) = items[0].as_symbol() {
        if head == "quote" {
            return Ok(term.clone());
        }
        if head == "case" {
            let mut out = vec![items[0].clone()];
            if let Some(scrutinee) = items.get(1) {
                out.push(map_member_calls(scrutinee, is_member, f)?);
            }
            for branch in items.iter().skip(2) {
                match branch.as_list() {
                    Some(b) if !b.is_empty() => {
                        let mut nb = vec![b[0].clone()]; // key is not a call
                        nb.extend(map_slice(&b[1..], f)?);
                        out.push(SExpr::list(nb));
                    }
                    _ => out.push(branch.clone()),
                }
            }
            return Ok(SExpr::list(out));
        }
        if head == "let" || head == "let*" || head == "b*" {
            let mut out = vec![items[0].clone()];
            if let Some(binders) = items.get(1) {
                match binders.as_list() {
                    Some(bs) => {
                        let mut nbs = Vec::new();
                        for b in bs {
                            match b.as_list() {
                                Some(pair) if !pair.is_empty() => {
                                    let mut nb = vec![pair[0].clone()]; // pattern
                                    nb.extend(map_slice(&pair[1..], f)?);
                                    nbs.push(SExpr::list(nb));
                                }
                                _ => nbs.push(b.clone()),
                            }
                        }
                        out.push(SExpr::list(nbs));
                    }
                    None => out.push(binders.clone()),
                }
            }
            out.extend(map_slice(&items[2.min(items.len())..], f)?);
            return Ok(SExpr::list(out));
        }
        if head == "mv-let" || head == "lambda" {
            let mut out = vec![items[0].clone()];
            if let Some(vars) = items.get(1) {
                out.push(vars.clone());
            }
            out.extend(map_slice(&items[2.min(items.len())..], f)?);
            return Ok(SExpr::list(out));
        }
        let args = map_slice(&items[1..], f)?;
        if is_member(head) {
            return f(head, args);
        }
        let mut out = vec![items[0].clone()];
        out.extend(args);
        return Ok(SExpr::list(out));
    }
    // Head is itself a form, e.g. ((lambda (vars) body) args...).
    Ok(SExpr::list(map_slice(items, f)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reader::read_one;

    fn subst_clique() -> CliqueDef {
        let text = "(mutual-recursion
           (defun subst-term (x alist)
             (cond ((not x) nil)
                   ((symbolp x) (cdr (assoc-equal x alist)))
                   ((atom x) nil)
                   ((eq (car x) 'quote) x)
                   (t (cons (car x) (subst-termlist (cdr x) alist)))))
           (defun subst-termlist (x alist)
             (if (atom x)
                 nil
               (cons (subst-term (car x) alist)
                     (subst-termlist (cdr x) alist)))))";
        parse_clique(&read_one(text).unwrap()).unwrap()
    }

    #[test]
    fn parses_mutual_recursion() {
        let c = subst_clique();
        assert_eq!(c.name, Symbol::new("subst-term"));
        assert_eq!(c.functions.len(), 2);
        let f = &c.functions[0];
        assert_eq!(f.formals.len(), 2);
        assert!(f.formals.iter().all(|fm| fm.type_pred.is_none()));
        assert_eq!(f.returns.len(), 1);
        assert_eq!(f.returns[0].name, Symbol::new("subst-term-result"));
        assert_eq!(c.flag_macro_name(), Symbol::new("defthm-subst-term-flag"));
    }

    #[test]
    fn parses_defines_with_types_and_mv_returns() {
        let text = "(defines f
           (define f ((x natp)) :returns (mv (a natp) (b)) (if (atom x) (mv 0 x) (f (car x)))))";
        let c = parse_clique(&read_one(text).unwrap()).unwrap();
        let f = &c.functions[0];
        assert_eq!(f.formals[0].type_pred.as_ref().unwrap(), &Symbol::new("natp"));
        assert_eq!(f.returns.len(), 2);
        assert_eq!(f.returns[0].type_pred.as_ref().unwrap(), &Symbol::new("natp"));
        assert!(f.returns[1].type_pred.is_none());
    }

    #[test]
    fn formals_union_orders_by_first_appearance() {
        let text = "(mutual-recursion
           (defun f (a b) (g b a))
           (defun g (b c) (f b c)))";
        let c = parse_clique(&read_one(text).unwrap()).unwrap();
        let names: Vec<String> =
            c.formals_union().unwrap().iter().map(|f| f.name.text().to_string()).collect();
        assert_eq!(names, vec!["a", "b", "c"]);

        let single = "(mutual-recursion (defun f (x) x))";
        let c = parse_clique(&read_one(single).unwrap()).unwrap();
        assert_eq!(c.formals_union().unwrap().len(), 1);
    }

    #[test]
    fn formals_union_conflicting_types_is_an_error() {
        let text = "(defines f
           (define f ((x natp)) :returns (r) (g x))
           (define g ((x symbolp)) :returns (r) (f x)))";
        let c = parse_clique(&read_one(text).unwrap()).unwrap();
        assert!(matches!(c.formals_union(), Err(CliqueError::ConflictingFormalType { .. })));
    }

    #[test]
    fn find_function_is_case_insensitive() {
        let c = subst_clique();
        assert!(c.find_function(&Symbol::new("SUBST-TERM")).is_ok());
        assert!(matches!(
            c.find_function(&Symbol::new("nope")),
            Err(CliqueError::UnknownFunction(_))
        ));
    }

    #[test]
    fn arity_mismatch_rejected_at_parse_time() {
        let text = "(mutual-recursion (defun f (x y) (f x)))";
        assert!(matches!(
            parse_clique(&read_one(text).unwrap()),
            Err(CliqueError::ArityMismatch { expected: 2, found: 1, .. })
        ));
    }

    #[test]
    fn calls_under_quote_are_not_calls() {
        let text = "(mutual-recursion (defun f (x) (cons 'f '(f 1 2 3))))";
        assert!(parse_clique(&read_one(text).unwrap()).is_ok());
    }

    #[test]
    fn duplicate_definitions_rejected() {
        let dup_fn = "(mutual-recursion (defun f (x) x) (defun F (y) y))";
        assert!(matches!(
            parse_clique(&read_one(dup_fn).unwrap()),
            Err(CliqueError::DuplicateFunction(_))
        ));
        let dup_formal = "(mutual-recursion (defun f (x X) x))";
        assert!(matches!(
            parse_clique(&read_one(dup_formal).unwrap()),
            Err(CliqueError::DuplicateFormal { .. })
        ));
    }

    #[test]
    fn normalization_round_trips_through_defines() {
        let c = subst_clique();
        let again = parse_clique(&c.to_defines_form()).unwrap();
        assert_eq!(c, again);
    }
}
