//! mutgen: flag functions and theorem-form generation for mutually
//! recursive cliques.
//!
//! The library reads clique definitions in an S-expression mini-language,
//! synthesizes the flag function and its equivalence statement, expands
//! `defret`-style return bindings, runs the `defret-mutual-generate` rule
//! engine, and provides an embedded interpreter used to fuzz the flag
//! transformation against the original clique.

pub mod clique;
pub mod dmgen;
pub mod eval;
pub mod expand;
pub mod flag;
pub mod reader;
pub mod sexpr;

pub use clique::{parse_clique, CliqueDef, CliqueError, Formal, FunctionDef, ReturnSpec};
pub use dmgen::{apply_rules, render_defret, Condition, Rule, TheoremShell};
pub use eval::{check_flag_equivalence, eval_term, Env, EquivReport, EvalBudget, EvalError};
pub use expand::{defret_expand, dmgen_expand, full_expand, Expansion};
pub use flag::{make_flag_defthm, make_flag_function, FlagClique, ThmSpec};
pub use reader::{read_all, read_one, ReadError};
pub use sexpr::{SExpr, Symbol};
