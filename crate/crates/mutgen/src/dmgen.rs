//! Condition/action rule engine for generating one theorem per clique
//! function.
//!
//! Rules are applied in order to each function's signature. Their actions
//! update a [`TheoremShell`] — name template, top hypotheses,
//! hyp/conclusion stack, `b*` bindings, keywords — and a `defret` form is
//! rendered from the final shell unless it has no conclusions, in which
//! case the function is skipped.

use crate::clique::FunctionDef;
use crate::sexpr::{SExpr, Symbol};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum DmgenError {
    #[error(":pop-hyp with no hypothesis pushed")]
    UnbalancedPop,
    #[error("rule has no actions")]
    EmptyActions,
    #[error("malformed condition `{0}`")]
    MalformedCondition(String),
    #[error("malformed action `{0}`")]
    MalformedAction(String),
    #[error("inner action of :each-formal/:each-return must be :add-hyp, :push-hyp, :pop-hyp, or :add-concl, found `{0}`")]
    DisallowedInnerAction(String),
    #[error("malformed {keyword} entry `{entry}`")]
    MalformedEntry { keyword: &'static str, entry: String },
    #[error("{keyword} entry for `{function}` has an odd keyword/value tail")]
    OddKeywordTail { keyword: &'static str, function: Symbol },
}

/// Boolean test over a function signature.
#[derive(Debug, Clone, PartialEq)]
pub enum Condition {
    True,
    False,
    FnName(Symbol),
    HasFormal { name: Option<Symbol>, type_pred: Option<Symbol> },
    HasReturn { name: Option<Symbol>, type_pred: Option<Symbol> },
    And(Vec<Condition>),
    Or(Vec<Condition>),
    Not(Box<Condition>),
}

/// The action kinds `:each-formal`/`:each-return` may repeat.
#[derive(Debug, Clone, PartialEq)]
pub enum ItemAction {
    AddHyp(SExpr),
    AddConcl(SExpr),
    PushHyp(SExpr),
    PopHyp,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    AddHyp(SExpr),
    AddConcl(SExpr),
    AddBindings(Vec<SExpr>),
    PushHyp(SExpr),
    PopHyp,
    EachFormal { type_pred: Symbol, var: Symbol, action: ItemAction },
    EachReturn { type_pred: Symbol, var: Symbol, action: ItemAction },
    AddKeyword { key: Symbol, value: SExpr },
    SetThmname(Symbol),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub condition: Condition,
    pub actions: Vec<Action>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StackEntry {
    Push(SExpr),
    Pop,
    Concl(SExpr),
}

/// The structure a `defret` is rendered from.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremShell {
    pub name_template: Symbol,
    pub top_hyps: Vec<SExpr>,
    pub stack: Vec<StackEntry>,
    pub bindings: Vec<SExpr>,
    pub keywords: Vec<(Symbol, SExpr)>,
}

impl TheoremShell {
    pub fn empty(name_template: Symbol) -> TheoremShell {
        TheoremShell {
            name_template,
            top_hyps: Vec::new(),
            stack: Vec::new(),
            bindings: Vec::new(),
            keywords: Vec::new(),
        }
    }

    /// The conclusions in stack order, ignoring hypothesis scoping.
    pub fn conclusions(&self) -> Vec<&SExpr> {
        self.stack
            .iter()
            .filter_map(|e| match e {
                StackEntry::Concl(c) => Some(c),
                _ => None,
            })
            .collect()
    }
}

pub fn eval_condition(c: &Condition, f: &FunctionDef) -> bool {
    match c {
        Condition::True => true,
        Condition::False => false,
        Condition::FnName(n) => &f.name == n,
        Condition::HasFormal { name, type_pred } => f.formals.iter().any(|fm| {
            name.as_ref().is_none_or(|n| &fm.name == n)
                && type_pred.as_ref().is_none_or(|t| fm.type_pred.as_ref() == Some(t))
        }),
        Condition::HasReturn { name, type_pred } => f.returns.iter().any(|r| {
            name.as_ref().is_none_or(|n| &r.name == n)
                && type_pred.as_ref().is_none_or(|t| r.type_pred.as_ref() == Some(t))
        }),
        Condition::And(cs) => cs.iter().all(|c| eval_condition(c, f)),
        Condition::Or(cs) => cs.iter().any(|c| eval_condition(c, f)),
        Condition::Not(c) => !eval_condition(c, f),
    }
}

/// Replace every symbol equal to `var` in `term` by `replacement`.
fn subst_symbol(term: &SExpr, var: &Symbol, replacement: &Symbol) -> SExpr {
    match term {
        SExpr::Symbol(s) if s == var => SExpr::Symbol(replacement.clone()),
        SExpr::List(v) => {
            SExpr::List(v.iter().map(|x| subst_symbol(x, var, replacement)).collect())
        }
        _ => term.clone(),
    }
}

/// Replace every case-insensitive occurrence of `<fn>` in `template` by the
/// function name.
pub fn subst_fn_template(template: &Symbol, fn_name: &Symbol) -> Symbol {
    let text = template.text();
    let lower = text.to_ascii_lowercase();
    let mut out = String::new();
    let mut i = 0;
    while let Some(j) = lower[i..].find("<fn>") {
        let at = i + j;
        out.push_str(&text[i..at]);
        out.push_str(fn_name.text());
        i = at + 4;
    }
    out.push_str(&text[i..]);
    Symbol::new(out)
}

/// `<fn>` substitution inside a keyword value: applies only to symbols
/// whose text contains the placeholder.
fn subst_fn_template_tree(value: &SExpr, fn_name: &Symbol) -> SExpr {
    match value {
        SExpr::Symbol(s) if s.text().to_ascii_lowercase().contains("<fn>") => {
            SExpr::Symbol(subst_fn_template(s, fn_name))
        }
        SExpr::List(v) => {
            SExpr::List(v.iter().map(|x| subst_fn_template_tree(x, fn_name)).collect())
        }
        _ => value.clone(),
    }
}

struct ShellBuilder {
    shell: TheoremShell,
    active_pushes: usize,
}

impl ShellBuilder {
    fn apply_item(
        &mut self,
        action: &ItemAction,
        subst: Option<(&Symbol, &Symbol)>,
    ) -> Result<(), DmgenError> {
        let instantiate = |term: &SExpr| match subst {
            Some((var, name)) => subst_symbol(term, var, name),
            None => term.clone(),
        };
        match action {
            ItemAction::AddHyp(t) => self.shell.top_hyps.push(instantiate(t)),
            ItemAction::AddConcl(t) => self.shell.stack.push(StackEntry::Concl(instantiate(t))),
            ItemAction::PushHyp(t) => {
                self.shell.stack.push(StackEntry::Push(instantiate(t)));
                self.active_pushes += 1;
            }
            ItemAction::PopHyp => {
                if self.active_pushes == 0 {
                    return Err(DmgenError::UnbalancedPop);
                }
                self.active_pushes -= 1;
                self.shell.stack.push(StackEntry::Pop);
            }
        }
        Ok(())
    }
}

/// Apply `rules` in order to one function, starting from the empty shell.
pub fn apply_rules(
    rules: &[Rule],
    f: &FunctionDef,
    base_name: &Symbol,
) -> Result<TheoremShell, DmgenError> {
    let mut b = ShellBuilder { shell: TheoremShell::empty(base_name.clone()), active_pushes: 0 };
    for rule in rules {
        if !eval_condition(&rule.condition, f) {
            continue;
        }
        for action in &rule.actions {
            match action {
                Action::AddHyp(t) => b.apply_item(&ItemAction::AddHyp(t.clone()), None)?,
                Action::AddConcl(t) => b.apply_item(&ItemAction::AddConcl(t.clone()), None)?,
                Action::PushHyp(t) => b.apply_item(&ItemAction::PushHyp(t.clone()), None)?,
                Action::PopHyp => b.apply_item(&ItemAction::PopHyp, None)?,
                Action::AddBindings(bs) => b.shell.bindings.extend(bs.iter().cloned()),
                Action::AddKeyword { key, value } => {
                    match b.shell.keywords.iter_mut().find(|(k, _)| k == key) {
                        Some(entry) => entry.1 = value.clone(),
                        None => b.shell.keywords.push((key.clone(), value.clone())),
                    }
                }
                Action::SetThmname(template) => b.shell.name_template = template.clone(),
                Action::EachFormal { type_pred, var, action } => {
                    for formal in &f.formals {
                        if formal.type_pred.as_ref() == Some(type_pred) {
                            b.apply_item(action, Some((var, &formal.name)))?;
                        }
                    }
                }
                Action::EachReturn { type_pred, var, action } => {
                    for ret in &f.returns {
                        if ret.type_pred.as_ref() == Some(type_pred) {
                            b.apply_item(action, Some((var, &ret.name)))?;
                        }
                    }
                }
            }
        }
    }
    Ok(b.shell)
}

fn conjoin(mut terms: Vec<SExpr>) -> SExpr {
    match terms.len() {
        0 => SExpr::t(),
        1 => terms.pop().unwrap(),
        _ => {
            let mut v = vec![SExpr::sym("and")];
            v.extend(terms);
            SExpr::list(v)
        }
    }
}

fn implies(hyps: Vec<SExpr>, concl: SExpr) -> SExpr {
    if hyps.is_empty() {
        concl
    } else {
        SExpr::list(vec![SExpr::sym("implies"), conjoin(hyps), concl])
    }
}

/// Render the shell's hyp/conclusion stack into a theorem body, or nothing
/// when there are no conclusions (the skip rule). Each conclusion is
/// guarded by the hypotheses pushed and not yet popped at its position;
/// consecutive conclusions under the same hypotheses are grouped.
pub fn render_body(shell: &TheoremShell) -> Option<SExpr> {
    let mut active: Vec<SExpr> = Vec::new();
    let mut groups: Vec<(Vec<SExpr>, Vec<SExpr>)> = Vec::new();
    for entry in &shell.stack {
        match entry {
            StackEntry::Push(h) => active.push(h.clone()),
            StackEntry::Pop => {
                active.pop();
            }
            StackEntry::Concl(c) => match groups.last_mut() {
                Some((hyps, concls)) if *hyps == active => concls.push(c.clone()),
                _ => groups.push((active.clone(), vec![c.clone()])),
            },
        }
    }
    if groups.is_empty() {
        return None;
    }
    let rendered: Vec<SExpr> =
        groups.into_iter().map(|(hyps, concls)| implies(hyps, conjoin(concls))).collect();
    Some(implies(shell.top_hyps.clone(), conjoin(rendered)))
}

/// Render a `defret` form for one function, or nothing when the shell has
/// no conclusions. `<fn>` is substituted in the theorem name and inside
/// keyword values.
pub fn render_defret(shell: &TheoremShell, f: &FunctionDef) -> Option<SExpr> {
    let body = render_body(shell)?;
    let name = subst_fn_template(&shell.name_template, &f.name);
    let body = if shell.bindings.is_empty() {
        body
    } else {
        SExpr::list(vec![SExpr::sym("b*"), SExpr::list(shell.bindings.clone()), body])
    };
    let mut out = vec![SExpr::sym("defret"), SExpr::Symbol(name), body];
    for (key, value) in &shell.keywords {
        out.push(SExpr::Symbol(key.clone()));
        out.push(subst_fn_template_tree(value, &f.name));
    }
    out.push(SExpr::sym(":fn"));
    out.push(SExpr::Symbol(f.name.clone()));
    Some(SExpr::list(out))
}

fn expect_list<'a>(x: &'a SExpr, keyword: &'static str) -> Result<&'a [SExpr], DmgenError> {
    x.as_list().ok_or_else(|| DmgenError::MalformedEntry { keyword, entry: x.to_compact_string() })
}

/// Shared shape of `:formal-hyps` and `:return-concls`: each entry either
/// names a signature item and adds a term, or gives a `(type var)` pattern
/// that repeats the term for every item of that type.
fn expand_signature_spec(
    spec: &SExpr,
    keyword: &'static str,
    by_name: impl Fn(Symbol, Option<Symbol>) -> Condition,
    each: impl Fn(Symbol, Symbol, SExpr) -> Action,
    add: impl Fn(SExpr) -> Action,
) -> Result<Vec<Rule>, DmgenError> {
    let entries = expect_list(spec, keyword)?;
    let mut rules = Vec::new();
    for entry in entries {
        let bad = || DmgenError::MalformedEntry { keyword, entry: entry.to_compact_string() };
        let items = expect_list(entry, keyword)?;
        match items {
            // (name term [:type type])
            [SExpr::Symbol(name), term] => rules.push(Rule {
                condition: by_name(name.clone(), None),
                actions: vec![add(term.clone())],
            }),
            [SExpr::Symbol(name), term, kw, ty] if kw.is_sym(":type") => {
                let ty = ty.as_symbol().ok_or_else(bad)?;
                rules.push(Rule {
                    condition: by_name(name.clone(), Some(ty.clone())),
                    actions: vec![add(term.clone())],
                });
            }
            // ((type var) term)
            [SExpr::List(pattern), term] => match pattern.as_slice() {
                [SExpr::Symbol(ty), SExpr::Symbol(var)] => rules.push(Rule {
                    condition: Condition::True,
                    actions: vec![each(ty.clone(), var.clone(), term.clone())],
                }),
                _ => return Err(bad()),
            },
            _ => return Err(bad()),
        }
    }
    Ok(rules)
}

/// `:formal-hyps` abbreviation: hypotheses keyed on formal names or types.
pub fn expand_formal_hyps(spec: &SExpr) -> Result<Vec<Rule>, DmgenError> {
    expand_signature_spec(
        spec,
        ":formal-hyps",
        |name, type_pred| Condition::HasFormal { name: Some(name), type_pred },
        |ty, var, term| Action::EachFormal { type_pred: ty, var, action: ItemAction::AddHyp(term) },
        Action::AddHyp,
    )
}

/// `:return-concls` abbreviation: conclusions keyed on return names or
/// types.
pub fn expand_return_concls(spec: &SExpr) -> Result<Vec<Rule>, DmgenError> {
    expand_signature_spec(
        spec,
        ":return-concls",
        |name, type_pred| Condition::HasReturn { name: Some(name), type_pred },
        |ty, var, term| Action::EachReturn {
            type_pred: ty,
            var,
            action: ItemAction::AddConcl(term),
        },
        Action::AddConcl,
    )
}

/// `:function-keys` abbreviation: per-function theorem keywords.
pub fn expand_function_keys(spec: &SExpr) -> Result<Vec<Rule>, DmgenError> {
    let entries = expect_list(spec, ":function-keys")?;
    let mut rules = Vec::new();
    for entry in entries {
        let items = expect_list(entry, ":function-keys")?;
        let name = items.first().and_then(|n| n.as_symbol()).ok_or_else(|| {
            DmgenError::MalformedEntry {
                keyword: ":function-keys",
                entry: entry.to_compact_string(),
            }
        })?;
        let tail = &items[1..];
        if tail.len() % 2 != 0 {
            return Err(DmgenError::OddKeywordTail {
                keyword: ":function-keys",
                function: name.clone(),
            });
        }
        let mut actions = Vec::new();
        for pair in tail.chunks(2) {
            let key = pair[0].as_symbol().filter(|s| s.is_keyword()).ok_or_else(|| {
                DmgenError::MalformedEntry {
                    keyword: ":function-keys",
                    entry: entry.to_compact_string(),
                }
            })?;
            actions.push(Action::AddKeyword { key: key.clone(), value: pair[1].clone() });
        }
        if actions.is_empty() {
            return Err(DmgenError::EmptyActions);
        }
        rules.push(Rule { condition: Condition::FnName(name.clone()), actions });
    }
    Ok(rules)
}

/// Parse a `:rules` argument: a list of `(condition action...)` forms.
pub fn parse_rules(spec: &SExpr) -> Result<Vec<Rule>, DmgenError> {
    let entries = expect_list(spec, ":rules")?;
    let mut rules = Vec::new();
    for entry in entries {
        let items = expect_list(entry, ":rules")?;
        if items.is_empty() {
            return Err(DmgenError::MalformedCondition("()".into()));
        }
        let condition = parse_condition(&items[0])?;
        if items.len() < 2 {
            return Err(DmgenError::EmptyActions);
        }
        let actions = items[1..].iter().map(parse_action).collect::<Result<_, _>>()?;
        rules.push(Rule { condition, actions });
    }
    Ok(rules)
}

pub fn parse_condition(x: &SExpr) -> Result<Condition, DmgenError> {
    if x.is_sym("t") {
        return Ok(Condition::True);
    }
    if x.is_nil() {
        return Ok(Condition::False);
    }
    let bad = || DmgenError::MalformedCondition(x.to_compact_string());
    let items = x.as_list().ok_or_else(bad)?;
    let head = items[0].as_symbol().ok_or_else(bad)?;
    if head == ":fnname" {
        return match &items[1..] {
            [SExpr::Symbol(n)] => Ok(Condition::FnName(n.clone())),
            _ => Err(bad()),
        };
    }
    if head == ":has-formal" || head == ":has-return" {
        let mut name = None;
        let mut type_pred = None;
        let mut rest = items[1..].iter();
        while let Some(k) = rest.next() {
            let v = rest.next().and_then(|v| v.as_symbol()).ok_or_else(bad)?;
            if k.is_sym(":name") {
                name = Some(v.clone());
            } else if k.is_sym(":type") {
                type_pred = Some(v.clone());
            } else {
                return Err(bad());
            }
        }
        if name.is_none() && type_pred.is_none() {
            return Err(bad());
        }
        return Ok(if head == ":has-formal" {
            Condition::HasFormal { name, type_pred }
        } else {
            Condition::HasReturn { name, type_pred }
        });
    }
    if head == "and" || head == "or" {
        let sub: Vec<Condition> =
            items[1..].iter().map(parse_condition).collect::<Result<_, _>>()?;
        return Ok(if head == "and" { Condition::And(sub) } else { Condition::Or(sub) });
    }
    if head == "not" {
        return match &items[1..] {
            [inner] => Ok(Condition::Not(Box::new(parse_condition(inner)?))),
            _ => Err(bad()),
        };
    }
    Err(bad())
}

fn parse_item_action(x: &SExpr) -> Result<ItemAction, DmgenError> {
    let bad = || DmgenError::DisallowedInnerAction(x.to_compact_string());
    let items = x.as_list().ok_or_else(bad)?;
    let head = items.first().and_then(|h| h.as_symbol()).ok_or_else(bad)?;
    match (head.text().to_ascii_lowercase().as_str(), &items[1..]) {
        (":add-hyp", [term]) => Ok(ItemAction::AddHyp(term.clone())),
        (":add-concl", [term]) => Ok(ItemAction::AddConcl(term.clone())),
        (":push-hyp", [term]) => Ok(ItemAction::PushHyp(term.clone())),
        (":pop-hyp", []) => Ok(ItemAction::PopHyp),
        _ => Err(bad()),
    }
}

pub fn parse_action(x: &SExpr) -> Result<Action, DmgenError> {
    let bad = || DmgenError::MalformedAction(x.to_compact_string());
    let items = x.as_list().ok_or_else(bad)?;
    let head = items.first().and_then(|h| h.as_symbol()).ok_or_else(bad)?;
    let rest = &items[1..];
    if head == ":add-hyp" {
        return match rest {
            [term] => Ok(Action::AddHyp(term.clone())),
            _ => Err(bad()),
        };
    }
    if head == ":add-concl" {
        return match rest {
            [term] => Ok(Action::AddConcl(term.clone())),
            _ => Err(bad()),
        };
    }
    if head == ":push-hyp" {
        return match rest {
            [term] => Ok(Action::PushHyp(term.clone())),
            _ => Err(bad()),
        };
    }
    if head == ":pop-hyp" {
        return match rest {
            [] => Ok(Action::PopHyp),
            _ => Err(bad()),
        };
    }
    if head == ":add-bindings" {
        return match rest {
            [SExpr::List(bs)] => Ok(Action::AddBindings(bs.clone())),
            _ => Err(bad()),
        };
    }
    if head == ":add-keyword" {
        return match rest {
            [SExpr::Symbol(key), value] if key.is_keyword() => {
                Ok(Action::AddKeyword { key: key.clone(), value: value.clone() })
            }
            _ => Err(bad()),
        };
    }
    if head == ":set-thmname" {
        return match rest {
            [SExpr::Symbol(template)] => Ok(Action::SetThmname(template.clone())),
            _ => Err(bad()),
        };
    }
    if head == ":each-formal" || head == ":each-return" {
        let mut ty = None;
        let mut var = None;
        let mut action = None;
        let mut it = rest.iter();
        while let Some(k) = it.next() {
            let v = it.next().ok_or_else(bad)?;
            if k.is_sym(":type") {
                ty = Some(v.as_symbol().ok_or_else(bad)?.clone());
            } else if k.is_sym(":var") {
                var = Some(v.as_symbol().ok_or_else(bad)?.clone());
            } else if k.is_sym(":action") {
                action = Some(parse_item_action(v)?);
            } else {
                return Err(bad());
            }
        }
        let (Some(type_pred), Some(var), Some(action)) = (ty, var, action) else {
            return Err(bad());
        };
        return Ok(if head == ":each-formal" {
            Action::EachFormal { type_pred, var, action }
        } else {
            Action::EachReturn { type_pred, var, action }
        });
    }
    Err(bad())
}
