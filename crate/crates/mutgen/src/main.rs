//! mutgen command-line front end: batch parsing, flag synthesis,
//! equivalence fuzzing, dmgen expansion, and scaffold generation over
//! S-expression input files.

use clap::{Args, Parser, Subcommand, ValueEnum};
use mutgen::clique::{parse_clique, CliqueDef};
use mutgen::eval::check_flag_equivalence;
use mutgen::expand::{full_expand, generate_sk_scaffold, parse_sk_scaffold_spec, wrap_encapsulate};
use mutgen::flag::FlagClique;
use mutgen::reader::{read_all_located, Located};
use mutgen::sexpr::{SExpr, Symbol};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mutgen",
    version,
    about = "Flag functions and theorem-form generation for mutually recursive cliques"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the normalized clique summary (functions, formals, returns)
    Parse(CommonArgs),
    /// Print the synthesized flag function and its equivalence theorem
    MakeFlag(CommonArgs),
    /// Fuzz the flag function against the clique; nonzero exit on mismatch
    CheckEquiv {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of random trials
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
        trials: u32,
        /// PRNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Expand a defret-mutual-generate form into its defret-mutual
    Dmgen(CommonArgs),
    /// Run the staged expansion and print the requested stage
    Expand {
        #[command(flatten)]
        common: CommonArgs,
        /// Which stage to print
        #[arg(long, value_enum, default_value_t = Stage::Events)]
        stage: Stage,
        /// Wrap the final events in an encapsulate with the lemma local
        #[arg(long)]
        wrap_encapsulate: bool,
    },
    /// Generate the defun-sk quantifier scaffold from an sk-scaffold form
    ScaffoldSk(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Input file of S-expression forms
    #[arg(long)]
    input: PathBuf,
    /// Output file (default: standard output)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Clique to operate on (default: the last one defined in the file)
    #[arg(long)]
    clique: Option<String>,
    /// Output layout
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum Stage {
    Dmgen,
    DefretMutual,
    FlagDefthm,
    Events,
}

#[derive(Copy, Clone, PartialEq, ValueEnum)]
enum Format {
    Pretty,
    Compact,
}

struct UserError(String);

type CliResult<T> = Result<T, UserError>;

fn at(path: &Path, line: usize, col: usize, msg: impl std::fmt::Display) -> UserError {
    UserError(format!("{}:{line}:{col}: {msg}", path.display()))
}

/// Everything the commands pull out of one input file.
struct Input {
    cliques: Vec<Located<CliqueDef>>,
    /// defret-mutual-generate and defret-mutual forms, in file order,
    /// including ones found in a defines form's `///` section.
    expansion_sources: Vec<Located<SExpr>>,
    scaffolds: Vec<Located<SExpr>>,
}

fn scan_input(path: &Path) -> CliResult<Input> {
    let text =
        std::fs::read_to_string(path).map_err(|e| UserError(format!("{}: {e}", path.display())))?;
    let forms = read_all_located(&text).map_err(|e| at(path, e.line, e.col, e.kind))?;
    let mut input =
        Input { cliques: Vec::new(), expansion_sources: Vec::new(), scaffolds: Vec::new() };
    for form in forms {
        let Some(head) = form.value.head_symbol() else { continue };
        if head == "mutual-recursion" || head == "defines" {
            let is_defines = head == "defines";
            let clique = parse_clique(&form.value).map_err(|e| at(path, form.line, form.col, e))?;
            if is_defines {
                // Post-events live after the /// marker; pick up any
                // expansion forms written there.
                let items = form.value.as_list().unwrap();
                if let Some(split) = items.iter().position(|x| x.is_sym("///")) {
                    for post in &items[split + 1..] {
                        if post.head_is("defret-mutual-generate") || post.head_is("defret-mutual") {
                            input.expansion_sources.push(Located {
                                value: post.clone(),
                                line: form.line,
                                col: form.col,
                            });
                        } else if post.head_is("sk-scaffold") {
                            input.scaffolds.push(Located {
                                value: post.clone(),
                                line: form.line,
                                col: form.col,
                            });
                        }
                    }
                }
            }
            input.cliques.push(Located { value: clique, line: form.line, col: form.col });
        } else if head == "defret-mutual-generate" || head == "defret-mutual" {
            input.expansion_sources.push(form);
        } else if head == "sk-scaffold" {
            input.scaffolds.push(form);
        }
        // Other toplevel forms (defthm, defevaluator, plain defun, ...) are
        // not ours to process.
    }
    Ok(input)
}

impl Input {
    fn clique_by_name(&self, name: &Symbol) -> Option<&Located<CliqueDef>> {
        self.cliques.iter().find(|c| &c.value.name == name)
    }

    /// `--clique` selection, defaulting to the last clique in the file.
    fn select_clique(
        &self,
        path: &Path,
        chosen: &Option<String>,
    ) -> CliResult<&Located<CliqueDef>> {
        match chosen {
            Some(name) => self
                .clique_by_name(&Symbol::new(name.clone()))
                .ok_or_else(|| UserError(format!("{}: no clique named `{name}`", path.display()))),
            None => self.cliques.last().ok_or_else(|| {
                UserError(format!("{}: no clique definitions found", path.display()))
            }),
        }
    }
}

/// A form's `:mutual-recursion` target, when it names one.
fn target_clique_name(form: &SExpr) -> Option<Symbol> {
    let items = form.as_list()?;
    let mut it = items.iter();
    while let Some(x) = it.next() {
        if x.is_sym(":mutual-recursion") {
            return it.next().and_then(|v| v.as_symbol()).cloned();
        }
    }
    None
}

fn render_form(form: &SExpr, format: Format) -> String {
    match format {
        Format::Pretty => form.to_canonical_string(),
        Format::Compact => form.to_compact_string(),
    }
}

fn render_forms(forms: &[SExpr], format: Format) -> String {
    let mut out = String::new();
    for (i, f) in forms.iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        out.push_str(&render_form(f, format));
    }
    out.push('\n');
    out
}

fn write_output(output: &Option<PathBuf>, text: &str) -> CliResult<()> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| UserError(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn signature_item(name: &Symbol, type_pred: &Option<Symbol>) -> String {
    match type_pred {
        Some(p) => format!("{name} : {p}"),
        None => name.to_string(),
    }
}

fn cmd_parse(common: &CommonArgs) -> CliResult<ExitCode> {
    let input = scan_input(&common.input)?;
    let clique = &input.select_clique(&common.input, &common.clique)?.value;
    let mut out = String::new();
    let _ = writeln!(out, "clique {} ({} functions)", clique.name, clique.functions.len());
    let _ = writeln!(out, "  flag macro: {}", clique.flag_macro_name());
    for f in &clique.functions {
        let formals: Vec<String> =
            f.formals.iter().map(|p| signature_item(&p.name, &p.type_pred)).collect();
        let returns: Vec<String> =
            f.returns.iter().map(|r| signature_item(&r.name, &r.type_pred)).collect();
        let returns = if returns.len() == 1 {
            format!("({})", returns[0])
        } else {
            format!("(mv {})", returns.join(" "))
        };
        let _ = writeln!(out, "  {} ({}) -> {}", f.name, formals.join(", "), returns);
    }
    write_output(&common.output, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn default_flag_clique(path: &Path, located: &Located<CliqueDef>) -> CliResult<FlagClique> {
    FlagClique::with_default_names(&located.value)
        .map_err(|e| at(path, located.line, located.col, e))
}

fn cmd_make_flag(common: &CommonArgs) -> CliResult<ExitCode> {
    let input = scan_input(&common.input)?;
    let located = input.select_clique(&common.input, &common.clique)?;
    let fc = default_flag_clique(&common.input, located)?;
    let text = render_forms(&[fc.flag_fn_def.clone(), fc.equivalence_thm.clone()], common.format);
    write_output(&common.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_check_equiv(common: &CommonArgs, trials: u32, seed: u64) -> CliResult<ExitCode> {
    let input = scan_input(&common.input)?;
    let located = input.select_clique(&common.input, &common.clique)?;
    let fc = default_flag_clique(&common.input, located)?;
    let report = check_flag_equivalence(&located.value, &fc, trials, seed);
    let mut out = String::new();
    let _ = writeln!(out, "{}/{} passed", report.passes(), report.trials);
    for failure in &report.failures {
        let _ = writeln!(out, "trial {} on {}:", failure.trial, failure.function);
        for (name, value) in &failure.inputs {
            let _ = writeln!(out, "  {name} = {}", value.to_compact_string());
        }
        let show = |r: &Result<SExpr, String>| match r {
            Ok(v) => v.to_compact_string(),
            Err(e) => format!("error: {e}"),
        };
        let _ = writeln!(out, "  direct:  {}", show(&failure.direct));
        let _ = writeln!(out, "  flagged: {}", show(&failure.flagged));
    }
    write_output(&common.output, &out)?;
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

/// The expansion source a command operates on: the last
/// defret-mutual-generate (or defret-mutual) form, with its clique resolved
/// from its own :mutual-recursion target when present.
fn pick_expansion<'a>(
    input: &'a Input,
    common: &CommonArgs,
    require_dmgen: bool,
) -> CliResult<(&'a Located<SExpr>, &'a Located<CliqueDef>)> {
    let path = &common.input;
    let source = input
        .expansion_sources
        .iter()
        .rfind(|f| !require_dmgen || f.value.head_is("defret-mutual-generate"))
        .ok_or_else(|| {
            UserError(format!(
                "{}: no {} form found",
                path.display(),
                if require_dmgen {
                    "defret-mutual-generate"
                } else {
                    "defret-mutual-generate or defret-mutual"
                }
            ))
        })?;
    let clique = match target_clique_name(&source.value) {
        Some(name) => input.clique_by_name(&name).ok_or_else(|| {
            at(path, source.line, source.col, format!("no clique named `{name}`"))
        })?,
        None => input.select_clique(path, &common.clique)?,
    };
    Ok((source, clique))
}

fn cmd_expand(common: &CommonArgs, stage: Stage, wrap: bool) -> CliResult<ExitCode> {
    let input = scan_input(&common.input)?;
    let (source, clique) = pick_expansion(&input, common, stage == Stage::Dmgen)?;
    let expansion = full_expand(&source.value, &clique.value)
        .map_err(|e| at(&common.input, source.line, source.col, e))?;
    for w in &expansion.warnings {
        eprintln!("mutgen: warning: {w}");
    }
    let text = match stage {
        Stage::Dmgen => {
            let form = expansion.dmgen.as_ref().expect("dmgen source was required");
            render_forms(std::slice::from_ref(form), common.format)
        }
        Stage::DefretMutual => {
            render_forms(std::slice::from_ref(&expansion.defret_mutual), common.format)
        }
        Stage::FlagDefthm => {
            render_forms(std::slice::from_ref(&expansion.flag_defthm), common.format)
        }
        Stage::Events => {
            if wrap {
                render_forms(&[wrap_encapsulate(&expansion.events)], common.format)
            } else {
                render_forms(&expansion.events, common.format)
            }
        }
    };
    write_output(&common.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_dmgen(common: &CommonArgs) -> CliResult<ExitCode> {
    let input = scan_input(&common.input)?;
    let (source, clique) = pick_expansion(&input, common, true)?;
    let expansion = full_expand(&source.value, &clique.value)
        .map_err(|e| at(&common.input, source.line, source.col, e))?;
    for w in &expansion.warnings {
        eprintln!("mutgen: warning: {w}");
    }
    let text = render_forms(std::slice::from_ref(&expansion.defret_mutual), common.format);
    write_output(&common.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_scaffold_sk(common: &CommonArgs) -> CliResult<ExitCode> {
    let input = scan_input(&common.input)?;
    let source = input.scaffolds.last().ok_or_else(|| {
        UserError(format!("{}: no sk-scaffold form found", common.input.display()))
    })?;
    let spec = parse_sk_scaffold_spec(&source.value)
        .map_err(|e| at(&common.input, source.line, source.col, e))?;
    let clique = input.select_clique(&common.input, &common.clique)?;
    let events = generate_sk_scaffold(&clique.value, &spec)
        .map_err(|e| at(&common.input, source.line, source.col, e))?;
    let text = render_forms(&events, common.format);
    write_output(&common.output, &text)?;
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match &cli.command {
        Command::Parse(common) => cmd_parse(common),
        Command::MakeFlag(common) => cmd_make_flag(common),
        Command::CheckEquiv { common, trials, seed } => cmd_check_equiv(common, *trials, *seed),
        Command::Dmgen(common) => cmd_dmgen(common),
        Command::Expand { common, stage, wrap_encapsulate } => {
            cmd_expand(common, *stage, *wrap_encapsulate)
        }
        Command::ScaffoldSk(common) => cmd_scaffold_sk(common),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(UserError(msg)) => {
            eprintln!("mutgen: {msg}");
            ExitCode::from(1)
        }
    }
}
