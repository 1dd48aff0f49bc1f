//! Call-by-value interpreter for the mini-language, used as the semantic
//! oracle when fuzzing the flag transformation.
//!
//! The value universe is `SExpr` itself. `car`/`cdr` of a non-cons give
//! `nil` (the default-value convention the sample cliques rely on), `case`
//! compares against implicitly quoted keys, and multiple values are plain
//! lists. A call budget caps user-function applications so no input can
//! diverge.

use crate::clique::{CliqueDef, Formal, FunctionDef, ReturnSpec};
use crate::flag::FlagClique;
use crate::sexpr::{SExpr, Symbol};
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(Symbol),
    #[error("unknown function `{0}`")]
    UnknownFunction(Symbol),
    #[error("call to `{function}` has {found} argument(s), expected {expected}")]
    ArityMismatch { function: Symbol, expected: usize, found: usize },
    #[error("evaluation budget exhausted")]
    BudgetExhausted,
    #[error("cons with a non-list tail is not representable")]
    ImproperCons,
    #[error("malformed form: {0}")]
    Malformed(String),
}

/// Ordered bindings; lookup finds the most recent one.
#[derive(Debug, Clone, Default)]
pub struct Env {
    bindings: Vec<(Symbol, SExpr)>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Symbol, SExpr)>) -> Env {
        Env { bindings: pairs.into_iter().collect() }
    }

    pub fn bind(&mut self, name: Symbol, value: SExpr) {
        self.bindings.push((name, value));
    }

    pub fn lookup(&self, name: &Symbol) -> Option<&SExpr> {
        self.bindings.iter().rev().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

/// Caps the number of user-function applications in one evaluation.
#[derive(Debug, Clone, Copy)]
pub struct EvalBudget {
    pub max_calls: u64,
}

impl Default for EvalBudget {
    fn default() -> EvalBudget {
        EvalBudget { max_calls: 100_000 }
    }
}

pub fn eval_term(
    clique: &CliqueDef,
    extra_defs: &[FunctionDef],
    term: &SExpr,
    env: &Env,
    budget: EvalBudget,
) -> Result<SExpr, EvalError> {
    let mut ev = Evaluator { clique, extra_defs, calls_left: budget.max_calls };
    ev.eval(term, env)
}

struct Evaluator<'a> {
    clique: &'a CliqueDef,
    extra_defs: &'a [FunctionDef],
    calls_left: u64,
}

fn truthy(x: &SExpr) -> bool {
    !x.is_nil()
}

fn bool_val(b: bool) -> SExpr {
    if b {
        SExpr::t()
    } else {
        SExpr::nil()
    }
}

fn car(x: &SExpr) -> SExpr {
    match x.as_list().and_then(|v| v.first()) {
        Some(h) => h.clone(),
        None => SExpr::nil(),
    }
}

fn cdr(x: &SExpr) -> SExpr {
    match x.as_list() {
        Some(v) if !v.is_empty() => SExpr::List(v[1..].to_vec()),
        _ => SExpr::nil(),
    }
}

/// `c[ad]{1,4}r` names: the letters nearest the `r` apply first.
fn cxr_path(name: &str) -> Option<Vec<char>> {
    let lower = name.to_ascii_lowercase();
    let inner = lower.strip_prefix('c')?.strip_suffix('r')?;
    if inner.is_empty() || inner.len() > 4 || !inner.chars().all(|c| c == 'a' || c == 'd') {
        return None;
    }
    Some(inner.chars().collect())
}

/// Binder names may carry the `?` ignorable marker; the binding strips it.
fn binding_name(s: &Symbol) -> Symbol {
    match s.text().strip_prefix('?') {
        Some(rest) if !rest.is_empty() => Symbol::new(rest),
        _ => s.clone(),
    }
}

impl<'a> Evaluator<'a> {
    fn find_function(&self, name: &Symbol) -> Option<&'a FunctionDef> {
        self.clique.functions.iter().chain(self.extra_defs.iter()).find(|f| &f.name == name)
    }

    /// Trampolined evaluation: tail positions (branch bodies, binding-form
    /// bodies, user-function bodies) update `term`/`env` and loop instead
    /// of recursing, so deep recursion in evaluated code runs into the call
    /// budget rather than the host stack. Only argument evaluation recurses,
    /// which is bounded by the depth of the term itself.
    fn eval(&mut self, term: &SExpr, env: &Env) -> Result<SExpr, EvalError> {
        let mut term = term.clone();
        let mut env = env.clone();
        loop {
            let items = match term {
                SExpr::Int(_) | SExpr::Str(_) => return Ok(term),
                SExpr::Symbol(ref s) => {
                    return if s == "t" || s.is_keyword() {
                        Ok(term.clone())
                    } else {
                        env.lookup(s).cloned().ok_or_else(|| EvalError::UnboundVariable(s.clone()))
                    }
                }
                SExpr::List(items) => {
                    if items.is_empty() {
                        return Ok(SExpr::nil());
                    }
                    items
                }
            };

            // (seq-prefix, tail): evaluate the prefix for effect, then loop
            // on the tail.
            let into_body =
                |this: &mut Self, body: &[SExpr], env: &Env| -> Result<SExpr, EvalError> {
                    for t in &body[..body.len() - 1] {
                        this.eval(t, env)?;
                    }
                    Ok(body.last().unwrap().clone())
                };

            if let Some(inner) = items[0].as_list() {
                // ((lambda (vars) body...) args...)
                if !items[0].head_is("lambda") {
                    return Err(EvalError::Malformed(format!(
                        "cannot apply `{}`",
                        items[0].to_compact_string()
                    )));
                }
                if inner.len() < 3 {
                    return Err(EvalError::Malformed("lambda needs formals and a body".into()));
                }
                let vars = inner[1]
                    .as_list()
                    .ok_or_else(|| EvalError::Malformed("lambda formals must be a list".into()))?;
                let args = &items[1..];
                if vars.len() != args.len() {
                    return Err(EvalError::ArityMismatch {
                        function: Symbol::new("lambda"),
                        expected: vars.len(),
                        found: args.len(),
                    });
                }
                let mut inner_env = Env::new();
                for (v, a) in vars.iter().zip(args) {
                    let name = v.as_symbol().ok_or_else(|| {
                        EvalError::Malformed("lambda formal must be a symbol".into())
                    })?;
                    let value = self.eval(a, &env)?;
                    inner_env.bind(binding_name(name), value);
                }
                term = into_body(self, &inner[2..], &inner_env)?;
                env = inner_env;
                continue;
            }

            let head = items[0]
                .as_symbol()
                .ok_or_else(|| EvalError::Malformed("application head must be a symbol".into()))?
                .clone();
            let args = &items[1..];

            if head == "quote" {
                return match args {
                    [x] => Ok(x.clone()),
                    _ => Err(EvalError::Malformed("quote expects one argument".into())),
                };
            }
            if head == "if" {
                if args.len() != 2 && args.len() != 3 {
                    return Err(EvalError::Malformed("if expects 2 or 3 arguments".into()));
                }
                let test = self.eval(&args[0], &env)?;
                if truthy(&test) {
                    term = args[1].clone();
                } else if let Some(else_branch) = args.get(2) {
                    term = else_branch.clone();
                } else {
                    return Ok(SExpr::nil());
                }
                continue;
            }
            if head == "cond" {
                let mut chosen = None;
                for branch in args {
                    let b = branch.as_list().filter(|b| !b.is_empty()).ok_or_else(|| {
                        EvalError::Malformed("cond branch must be a non-empty list".into())
                    })?;
                    let test = self.eval(&b[0], &env)?;
                    if truthy(&test) {
                        if b.len() == 1 {
                            return Ok(test);
                        }
                        chosen = Some(b);
                        break;
                    }
                }
                match chosen {
                    None => return Ok(SExpr::nil()),
                    Some(b) => {
                        term = into_body(self, &b[1..], &env)?;
                        continue;
                    }
                }
            }
            if head == "case" {
                if args.is_empty() {
                    return Err(EvalError::Malformed("case expects a scrutinee".into()));
                }
                let scrutinee = self.eval(&args[0], &env)?;
                let mut chosen = None;
                for branch in &args[1..] {
                    let b = branch.as_list().filter(|b| !b.is_empty()).ok_or_else(|| {
                        EvalError::Malformed("case branch must be a non-empty list".into())
                    })?;
                    let matches = match &b[0] {
                        key if key.is_sym("t") || key.is_sym("otherwise") => true,
                        SExpr::List(keys) if !keys.is_empty() => keys.contains(&scrutinee),
                        key => key == &scrutinee,
                    };
                    if matches {
                        chosen = Some(b);
                        break;
                    }
                }
                match chosen {
                    None => return Ok(SExpr::nil()),
                    Some(b) if b.len() == 1 => return Ok(SExpr::nil()),
                    Some(b) => {
                        term = into_body(self, &b[1..], &env)?;
                        continue;
                    }
                }
            }
            if head == "and" {
                match args {
                    [] => return Ok(SExpr::t()),
                    [prefix @ .., last] => {
                        for a in prefix {
                            if !truthy(&self.eval(a, &env)?) {
                                return Ok(SExpr::nil());
                            }
                        }
                        term = last.clone();
                        continue;
                    }
                }
            }
            if head == "or" {
                match args {
                    [] => return Ok(SExpr::nil()),
                    [prefix @ .., last] => {
                        let mut found = None;
                        for a in prefix {
                            let v = self.eval(a, &env)?;
                            if truthy(&v) {
                                found = Some(v);
                                break;
                            }
                        }
                        match found {
                            Some(v) => return Ok(v),
                            None => {
                                term = last.clone();
                                continue;
                            }
                        }
                    }
                }
            }
            if head == "let" {
                let (binders, body) = match args {
                    [binders, body @ ..] if !body.is_empty() => (binders, body),
                    _ => {
                        return Err(EvalError::Malformed("let expects bindings and a body".into()))
                    }
                };
                let mut new_env = env.clone();
                for binder in binders
                    .as_list()
                    .ok_or_else(|| EvalError::Malformed("let bindings must be a list".into()))?
                {
                    match binder.as_list() {
                        Some([name, value]) => {
                            let name = name.as_symbol().ok_or_else(|| {
                                EvalError::Malformed("let variable must be a symbol".into())
                            })?;
                            // Parallel binding: values see the outer env.
                            let v = self.eval(value, &env)?;
                            new_env.bind(binding_name(name), v);
                        }
                        _ => {
                            return Err(EvalError::Malformed(
                                "let binding must be (var value)".into(),
                            ))
                        }
                    }
                }
                term = into_body(self, body, &new_env)?;
                env = new_env;
                continue;
            }
            if head == "mv-let" {
                let (vars, value, body) = match args {
                    [vars, value, body @ ..] if !body.is_empty() => (vars, value, body),
                    _ => {
                        return Err(EvalError::Malformed(
                            "mv-let expects vars, a value, and a body".into(),
                        ))
                    }
                };
                let vars = vars
                    .as_list()
                    .ok_or_else(|| EvalError::Malformed("mv-let vars must be a list".into()))?;
                let value = self.eval(value, &env)?;
                let mut new_env = env.clone();
                self.destructure_mv(vars, &value, &mut new_env)?;
                term = into_body(self, body, &new_env)?;
                env = new_env;
                continue;
            }
            if head == "b*" {
                let (binders, body) = match args {
                    [binders, body @ ..] if !body.is_empty() => (binders, body),
                    _ => return Err(EvalError::Malformed("b* expects bindings and a body".into())),
                };
                let binders = binders
                    .as_list()
                    .ok_or_else(|| EvalError::Malformed("b* bindings must be a list".into()))?;
                let mut new_env = env.clone();
                for binder in binders {
                    let b = binder.as_list().filter(|b| b.len() == 2).ok_or_else(|| {
                        EvalError::Malformed("b* binder must be (pattern value)".into())
                    })?;
                    let value = self.eval(&b[1], &new_env)?;
                    match &b[0] {
                        SExpr::Symbol(s) if s == "-" => {}
                        SExpr::Symbol(s) => new_env.bind(binding_name(s), value),
                        SExpr::List(pat) if pat.first().is_some_and(|h| h.is_sym("mv")) => {
                            self.destructure_mv(&pat[1..], &value, &mut new_env)?;
                        }
                        other => {
                            return Err(EvalError::Malformed(format!(
                                "unsupported b* binder `{}`",
                                other.to_compact_string()
                            )))
                        }
                    }
                }
                term = into_body(self, body, &new_env)?;
                env = new_env;
                continue;
            }

            // Strict application from here on.
            let mut values = Vec::with_capacity(args.len());
            for a in args {
                values.push(self.eval(a, &env)?);
            }
            match self.apply_builtin(&head, &mut values)? {
                Some(result) => return Ok(result),
                None => {
                    let def = self
                        .find_function(&head)
                        .ok_or_else(|| EvalError::UnknownFunction(head.clone()))?;
                    if values.len() != def.formals.len() {
                        return Err(EvalError::ArityMismatch {
                            function: head.clone(),
                            expected: def.formals.len(),
                            found: values.len(),
                        });
                    }
                    if self.calls_left == 0 {
                        return Err(EvalError::BudgetExhausted);
                    }
                    self.calls_left -= 1;
                    env = Env::from_pairs(def.formals.iter().map(|f| f.name.clone()).zip(values));
                    term = def.body.clone();
                }
            }
        }
    }

    fn destructure_mv(
        &self,
        vars: &[SExpr],
        value: &SExpr,
        env: &mut Env,
    ) -> Result<(), EvalError> {
        let vals = value.as_list().filter(|v| v.len() == vars.len()).ok_or_else(|| {
            EvalError::Malformed(format!(
                "expected {} values, got `{}`",
                vars.len(),
                value.to_compact_string()
            ))
        })?;
        for (v, val) in vars.iter().zip(vals) {
            let name = v
                .as_symbol()
                .ok_or_else(|| EvalError::Malformed("mv variable must be a symbol".into()))?;
            env.bind(binding_name(name), val.clone());
        }
        Ok(())
    }

    /// Apply a built-in, or return `None` for a user-function name.
    fn apply_builtin(
        &mut self,
        name: &Symbol,
        args: &mut Vec<SExpr>,
    ) -> Result<Option<SExpr>, EvalError> {
        let arity = |n: usize, args: &[SExpr]| -> Result<(), EvalError> {
            if args.len() != n {
                Err(EvalError::ArityMismatch {
                    function: name.clone(),
                    expected: n,
                    found: args.len(),
                })
            } else {
                Ok(())
            }
        };

        if name == "cons" {
            arity(2, args)?;
            return match &args[1] {
                SExpr::List(tail) => {
                    let mut v = Vec::with_capacity(tail.len() + 1);
                    v.push(args[0].clone());
                    v.extend(tail.iter().cloned());
                    Ok(Some(SExpr::List(v)))
                }
                _ => Err(EvalError::ImproperCons),
            };
        }
        if name == "car" {
            arity(1, args)?;
            return Ok(Some(car(&args[0])));
        }
        if name == "cdr" {
            arity(1, args)?;
            return Ok(Some(cdr(&args[0])));
        }
        if let Some(path) = cxr_path(name.text()) {
            arity(1, args)?;
            let mut v = args[0].clone();
            for c in path.into_iter().rev() {
                v = if c == 'a' { car(&v) } else { cdr(&v) };
            }
            return Ok(Some(v));
        }
        if name == "atom" {
            arity(1, args)?;
            return Ok(Some(bool_val(!matches!(&args[0], SExpr::List(v) if !v.is_empty()))));
        }
        if name == "consp" {
            arity(1, args)?;
            return Ok(Some(bool_val(matches!(&args[0], SExpr::List(v) if !v.is_empty()))));
        }
        if name == "null" || name == "endp" {
            arity(1, args)?;
            return Ok(Some(bool_val(args[0].is_nil())));
        }
        if name == "symbolp" {
            arity(1, args)?;
            // nil is a symbol even though it is also the empty list.
            return Ok(Some(bool_val(matches!(&args[0], SExpr::Symbol(_)) || args[0].is_nil())));
        }
        if name == "eq" || name == "eql" || name == "equal" {
            arity(2, args)?;
            return Ok(Some(bool_val(args[0] == args[1])));
        }
        if name == "not" {
            arity(1, args)?;
            return Ok(Some(bool_val(!truthy(&args[0]))));
        }
        if name == "assoc-equal" || name == "assoc" {
            arity(2, args)?;
            if let Some(entries) = args[1].as_list() {
                for e in entries {
                    if car(e) == args[0] {
                        return Ok(Some(e.clone()));
                    }
                }
            }
            return Ok(Some(SExpr::nil()));
        }
        if name == "list" || name == "mv" {
            return Ok(Some(SExpr::List(std::mem::take(args))));
        }
        if name == "append" {
            let mut result = SExpr::nil();
            for a in std::mem::take(args).into_iter().rev() {
                result = match a {
                    SExpr::List(v) if v.is_empty() => result,
                    SExpr::List(v) => match result {
                        SExpr::List(tail) => {
                            let mut out = v;
                            out.extend(tail);
                            SExpr::List(out)
                        }
                        _ => return Err(EvalError::ImproperCons),
                    },
                    // An atom ends the walk of the front list, so it only
                    // survives as the rightmost argument.
                    atom => {
                        if result.is_nil() {
                            atom
                        } else {
                            result
                        }
                    }
                };
            }
            return Ok(Some(result));
        }
        Ok(None)
    }
}

/// Deterministic splittable PRNG (splitmix64). Hand-rolled so that frozen
/// test fixtures cannot drift with a dependency upgrade.
#[derive(Debug, Clone)]
pub struct Prng(u64);

impl Prng {
    pub fn new(seed: u64) -> Prng {
        Prng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }
}

const TERM_VARS: [&str; 3] = ["x", "y", "z"];

fn gen_constant(rng: &mut Prng) -> SExpr {
    match rng.below(4) {
        0 => SExpr::int(rng.below(10) as i64),
        1 => SExpr::int(-(rng.below(10) as i64)),
        2 => SExpr::sym(["a", "b", "c"][rng.below(3) as usize]),
        _ => SExpr::nil(),
    }
}

fn quote(x: SExpr) -> SExpr {
    SExpr::list(vec![SExpr::sym("quote"), x])
}

fn gen_term_inner(rng: &mut Prng, depth: u32) -> SExpr {
    if depth == 0 {
        return if rng.below(2) == 0 {
            SExpr::sym(TERM_VARS[rng.below(3) as usize])
        } else {
            quote(gen_constant(rng))
        };
    }
    match rng.below(8) {
        0 => SExpr::sym(TERM_VARS[rng.below(3) as usize]),
        1 => quote(gen_constant(rng)),
        2..=5 => {
            let head = if rng.below(2) == 0 { "f" } else { "g" };
            let argc = 1 + rng.below(3) as usize;
            let mut v = vec![SExpr::sym(head)];
            for _ in 0..argc {
                v.push(gen_term_inner(rng, depth - 1));
            }
            SExpr::list(v)
        }
        _ => {
            let nvars = 1 + rng.below(2) as usize;
            let vars: Vec<SExpr> = TERM_VARS[..nvars].iter().map(|v| SExpr::sym(*v)).collect();
            let body = gen_term_inner(rng, depth - 1);
            let lambda = SExpr::list(vec![SExpr::sym("lambda"), SExpr::list(vars), body]);
            let mut call = vec![lambda];
            for _ in 0..nvars {
                call.push(gen_term_inner(rng, depth - 1));
            }
            SExpr::list(call)
        }
    }
}

/// Deterministic pseudo-random pseudo-term over variables `x`,`y`,`z`.
pub fn gen_random_term(seed: u64, depth: u32) -> SExpr {
    gen_term_inner(&mut Prng::new(seed), depth)
}

/// Default per-formal argument generator: formals that look like
/// substitution alists (named `alist` or typed `*substp`) get an
/// association list from variables to quoted constants, everything else
/// gets a random term.
pub fn default_argument(formal: &Formal, rng: &mut Prng) -> SExpr {
    let alist_like = formal.name == "alist"
        || formal
            .type_pred
            .as_ref()
            .is_some_and(|p| p.text().to_ascii_lowercase().ends_with("substp"));
    if alist_like {
        let mut entries = Vec::new();
        for v in TERM_VARS {
            if rng.below(4) < 3 {
                entries.push(SExpr::list(vec![
                    SExpr::sym(v),
                    SExpr::sym("quote"),
                    gen_constant(rng),
                ]));
            }
        }
        SExpr::List(entries)
    } else {
        let depth = rng.below(4) as u32;
        gen_term_inner(rng, depth)
    }
}

#[derive(Debug, Clone)]
pub struct EquivFailure {
    pub trial: u32,
    pub function: Symbol,
    pub inputs: Vec<(Symbol, SExpr)>,
    pub direct: Result<SExpr, String>,
    pub flagged: Result<SExpr, String>,
}

#[derive(Debug, Clone)]
pub struct EquivReport {
    pub trials: u32,
    pub failures: Vec<EquivFailure>,
}

impl EquivReport {
    pub fn passes(&self) -> u32 {
        self.trials - self.failures.len() as u32
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl FlagClique {
    /// View the synthesized flag function as an ordinary definition so the
    /// evaluator can run it.
    pub fn as_function_def(&self) -> FunctionDef {
        let mut formals = vec![Formal { name: self.flag_param.clone(), type_pred: None }];
        formals.extend(self.union_formals.iter().cloned());
        let body = self
            .flag_fn_def
            .as_list()
            .and_then(|v| v.last())
            .cloned()
            .expect("flag function definition has a body");
        FunctionDef {
            name: self.flag_fn_name.clone(),
            formals,
            returns: vec![ReturnSpec {
                name: Symbol::new(format!("{}-result", self.flag_fn_name)),
                type_pred: None,
            }],
            body,
        }
    }
}

/// Fuzz the equivalence between each clique function and the flag function
/// dispatched to it. Every trial picks a function, generates values for the
/// union formals, and evaluates both sides; any mismatch or evaluation
/// error is reported as a failure with its inputs.
pub fn check_flag_equivalence(
    clique: &CliqueDef,
    fc: &FlagClique,
    trials: u32,
    seed: u64,
) -> EquivReport {
    check_flag_equivalence_with(clique, fc, trials, seed, &mut default_argument)
}

/// As [`check_flag_equivalence`] with a custom per-formal generator hook.
pub fn check_flag_equivalence_with(
    clique: &CliqueDef,
    fc: &FlagClique,
    trials: u32,
    seed: u64,
    generate: &mut dyn FnMut(&Formal, &mut Prng) -> SExpr,
) -> EquivReport {
    let mut rng = Prng::new(seed);
    let flag_def = fc.as_function_def();
    let extra = [flag_def];
    let mut report = EquivReport { trials, failures: Vec::new() };

    for trial in 0..trials {
        let f = &clique.functions[rng.below(clique.functions.len() as u64) as usize];
        let values: Vec<(Symbol, SExpr)> =
            fc.union_formals.iter().map(|u| (u.name.clone(), generate(u, &mut rng))).collect();

        let mut direct = vec![SExpr::Symbol(f.name.clone())];
        for p in &f.formals {
            let v = values.iter().find(|(n, _)| n == &p.name).expect("union covers formals");
            direct.push(quote(v.1.clone()));
        }
        let direct = SExpr::list(direct);

        let mut flagged =
            vec![SExpr::Symbol(fc.flag_fn_name.clone()), quote(SExpr::Symbol(f.name.clone()))];
        for (_, v) in &values {
            flagged.push(quote(v.clone()));
        }
        let flagged = SExpr::list(flagged);

        let env = Env::new();
        let run = |term: &SExpr| {
            eval_term(clique, &extra, term, &env, EvalBudget::default()).map_err(|e| e.to_string())
        };
        let direct_res = run(&direct);
        let flagged_res = run(&flagged);
        let ok = matches!((&direct_res, &flagged_res), (Ok(a), Ok(b)) if a == b);
        if !ok {
            report.failures.push(EquivFailure {
                trial,
                function: f.name.clone(),
                inputs: values,
                direct: direct_res,
                flagged: flagged_res,
            });
        }
    }
    report
}
