//! wrvar: decide when two regular wreath products generate the same
//! variety of groups, decompose bounded abelian groups into primary
//! form, and probe small concrete groups for laws.

mod expr;
mod selftest;

use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use expr::{EvalError, GroupExpr, SyntaxError};
use wrvar_core::abelian::{
    ComponentMismatch, DecompositionError, GroupMismatch, PrimaryFactor, Side,
};
use wrvar_core::cardinal::Cardinal;
use wrvar_core::decider::{decide, DescriptorError, NilpotentDescriptor, Outcome};
use wrvar_core::group::{GroupBudget, GroupError, Nilpotency, Solubility};
use wrvar_core::laws::{is_law_with, scan_discriminating_with, LawBudget, LawError, Word, WordError};
use wrvar_core::BoundedAbelian;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "wrvar",
    version,
    about = "Variety comparison for wreath products of nilpotent-by-abelian pairs",
    disable_help_subcommand = true
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest group order the concrete engine will build.
    #[arg(long, global = true, env = "WRVAR_ORDER_CAP", value_name = "N")]
    order_cap: Option<u64>,
    /// Largest order for which multiplication tables are materialized.
    #[arg(long, global = true, value_name = "N")]
    table_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Primary decomposition of an abelian group expression.
    Decompose {
        /// Group expression, e.g. "C12 x C(3^3)^aleph0".
        expr: String,
    },
    /// Equivalence of two bounded abelian groups, componentwise.
    Equiv {
        left: String,
        right: String,
    },
    /// Decide whether A1 Wr B1 and A2 Wr B2 generate the same variety.
    Decide(DecideArgs),
    /// Inspect a concrete group.
    Group {
        #[command(subcommand)]
        sub: GroupCmd,
    },
    /// Check whether a word is a law of a concrete group.
    IsLaw {
        /// Word over x1, x2, ..., e.g. "x1^2 x2^-1 x1^-1".
        word: String,
        /// Group expression to evaluate the word in.
        expr: String,
        /// Evaluation budget override.
        #[arg(long, value_name = "N")]
        budget: Option<u64>,
    },
    /// Search for a word that is a law of exactly one of two groups.
    ScanLaws {
        left: String,
        right: String,
        /// Number of variables to scan over.
        #[arg(long, default_value_t = 2, value_name = "R")]
        rank: u32,
        /// Longest reduced word length to scan.
        #[arg(long, default_value_t = 6, value_name = "L")]
        max_len: u32,
        /// Evaluation budget override.
        #[arg(long, value_name = "N")]
        budget: Option<u64>,
    },
    /// Run the built-in verification checks.
    Selftest,
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Order, exponent, nilpotency class, and derived length.
    Info { expr: String },
}

#[derive(Args)]
#[command(group(ArgGroup::new("active1").required(true).args(["a1", "a1_abstract"])))]
#[command(group(ArgGroup::new("active2").required(true).args(["a2", "a2_abstract"])))]
struct DecideArgs {
    /// Concrete expression for the active group A1.
    #[arg(long, value_name = "EXPR")]
    a1: Option<String>,
    /// Describe A1 abstractly instead of concretely.
    #[arg(long, requires = "a1_exponent")]
    a1_abstract: bool,
    /// Exponent of the abstract A1.
    #[arg(long, value_name = "N", requires = "a1_abstract")]
    a1_exponent: Option<u64>,
    /// Nilpotency class of the abstract A1.
    #[arg(long, value_name = "C", requires = "a1_abstract")]
    a1_class: Option<u32>,
    /// Concrete expression for the active group A2.
    #[arg(long, value_name = "EXPR")]
    a2: Option<String>,
    /// Describe A2 abstractly instead of concretely.
    #[arg(long, requires = "a2_exponent")]
    a2_abstract: bool,
    /// Exponent of the abstract A2.
    #[arg(long, value_name = "N", requires = "a2_abstract")]
    a2_exponent: Option<u64>,
    /// Nilpotency class of the abstract A2.
    #[arg(long, value_name = "C", requires = "a2_abstract")]
    a2_class: Option<u32>,
    /// Passive abelian group B1.
    #[arg(long, value_name = "EXPR")]
    b1: String,
    /// Passive abelian group B2.
    #[arg(long, value_name = "EXPR")]
    b2: String,
    /// Assert var(A1) = var(A2) where it cannot be probed from concrete
    /// groups.
    #[arg(long)]
    assume_var_equal: bool,
}

/// A failed command: a stable error kind, a message, and for syntax
/// errors the byte offset.
struct CliError {
    kind: &'static str,
    message: String,
    location: Option<usize>,
}

impl From<SyntaxError> for CliError {
    fn from(e: SyntaxError) -> Self {
        CliError { kind: "syntax", message: e.to_string(), location: Some(e.position) }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        let kind = match &e {
            EvalError::NotAbelian { .. } => "not-abelian",
            EvalError::ZeroOrder => "invalid-order",
            EvalError::Infinite { .. } => "infinite-cardinal",
            EvalError::Overflow { .. } => "overflow",
            EvalError::Decomposition(DecompositionError::NotPrime(_)) => "not-prime",
            EvalError::Decomposition(_) => "decomposition",
            EvalError::Group(GroupError::CapExceeded { .. }) => "cap-exceeded",
            EvalError::Group(_) => "group",
        };
        CliError { kind, message: e.to_string(), location: None }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        let kind = match &e {
            GroupError::CapExceeded { .. } => "cap-exceeded",
            GroupError::NotAbelian(_) => "not-abelian",
            _ => "group",
        };
        CliError { kind, message: e.to_string(), location: None }
    }
}

impl From<DecompositionError> for CliError {
    fn from(e: DecompositionError) -> Self {
        let kind = match &e {
            DecompositionError::NotPrime(_) => "not-prime",
            _ => "decomposition",
        };
        CliError { kind, message: e.to_string(), location: None }
    }
}

impl From<DescriptorError> for CliError {
    fn from(e: DescriptorError) -> Self {
        CliError { kind: "active-operand", message: e.to_string(), location: None }
    }
}

impl From<WordError> for CliError {
    fn from(e: WordError) -> Self {
        CliError { kind: "word", message: e.to_string(), location: None }
    }
}

impl From<LawError> for CliError {
    fn from(e: LawError) -> Self {
        CliError { kind: "budget", message: e.to_string(), location: None }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let format = cli.format;
    let command_name = command_name(&cli.command);
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            match format {
                Format::Text => eprintln!("error[{}]: {}", e.kind, e.message),
                Format::Json => println!(
                    "{}",
                    json!({
                        "command": command_name,
                        "error": {
                            "kind": e.kind,
                            "message": e.message,
                            "location": e.location,
                        },
                        "version": VERSION,
                    })
                ),
            }
            ExitCode::from(1)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Decompose { .. } => "decompose",
        Command::Equiv { .. } => "equiv",
        Command::Decide(_) => "decide",
        Command::Group { .. } => "group info",
        Command::IsLaw { .. } => "is-law",
        Command::ScanLaws { .. } => "scan-laws",
        Command::Selftest => "selftest",
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let budget = GroupBudget {
        order_cap: cli.order_cap.map(u128::from).unwrap_or(GroupBudget::default().order_cap),
        table_cap: cli.table_cap.unwrap_or(GroupBudget::default().table_cap),
    };
    let format = cli.format;
    match cli.command {
        Command::Decompose { expr } => decompose(format, &budget, &expr),
        Command::Equiv { left, right } => equiv(format, &budget, &left, &right),
        Command::Decide(args) => run_decide(format, &budget, &args),
        Command::Group { sub: GroupCmd::Info { expr } } => group_info(format, &budget, &expr),
        Command::IsLaw { word, expr, budget: evals } => {
            is_law_cmd(format, &budget, &word, &expr, evals)
        }
        Command::ScanLaws { left, right, rank, max_len, budget: evals } => {
            scan_laws(format, &budget, &left, &right, rank, max_len, evals)
        }
        Command::Selftest => run_selftest(format),
    }
}

fn emit(format: Format, text: String, payload: Value) {
    match format {
        Format::Text => println!("{text}"),
        Format::Json => println!("{payload}"),
    }
}

/// Evaluates an expression as a bounded abelian group, falling back to
/// the concrete engine and its order-statistics decomposition when the
/// expression is not symbolically abelian (e.g. a wreath of trivial
/// groups, or a concrete product given by atoms).
fn abelian_operand(
    ast: &GroupExpr,
    budget: &GroupBudget,
) -> Result<BoundedAbelian, CliError> {
    match ast.to_abelian() {
        Ok(d) => Ok(d),
        Err(EvalError::NotAbelian { .. }) => {
            let g = ast.to_concrete(budget)?;
            Ok(g.abelian_decomposition()?)
        }
        Err(e) => Err(e.into()),
    }
}

fn components_json(d: &BoundedAbelian) -> Value {
    let components: Vec<Value> = d
        .components()
        .map(|c| {
            let factors: Vec<Value> = c
                .factors()
                .iter()
                .map(|f| {
                    json!({
                        "power": f.exp_power,
                        "multiplicity": f.multiplicity.to_string(),
                    })
                })
                .collect();
            json!({ "prime": c.prime(), "factors": factors })
        })
        .collect();
    Value::Array(components)
}

fn decompose(format: Format, budget: &GroupBudget, raw: &str) -> Result<u8, CliError> {
    let ast = expr::parse(raw)?;
    let rendering = ast.to_string();
    let decomposition = abelian_operand(&ast, budget)?;
    let explanation = format!("{rendering} decomposes as {decomposition}");
    emit(
        format,
        decomposition.to_string(),
        json!({
            "command": "decompose",
            "inputs": { "expr": rendering },
            "report": {
                "normal_form": decomposition.to_string(),
                "components": components_json(&decomposition),
            },
            "witness": Value::Null,
            "explanation": explanation,
            "version": VERSION,
        }),
    );
    Ok(0)
}

fn side_word(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn factor_clause(prime: u64, f: &PrimaryFactor) -> String {
    let mut s = format!("C({prime}^{})", f.exp_power);
    if f.multiplicity != Cardinal::Finite(1) {
        s.push('^');
        s.push_str(&f.multiplicity.to_string());
    }
    s
}

fn opt_factor_clause(prime: u64, f: &Option<PrimaryFactor>) -> String {
    match f {
        Some(f) => factor_clause(prime, f),
        None => "nothing".to_string(),
    }
}

/// Compact clause naming the first structural difference, used in the
/// `equiv` output: e.g. "exponent of first infinite factor: 3^3 vs 3^2".
fn mismatch_clause(m: &GroupMismatch) -> String {
    match m {
        GroupMismatch::PresentOnly { prime, side } => {
            format!("prime {prime} occurs only in the {} operand", side_word(*side))
        }
        GroupMismatch::Component { prime, mismatch } => component_clause(*prime, mismatch),
    }
}

fn component_clause(p: u64, m: &ComponentMismatch) -> String {
    match m {
        ComponentMismatch::FiniteVsInfinite { finite } => format!(
            "the {} operand's {p}-component is finite, the other is infinite",
            side_word(*finite)
        ),
        ComponentMismatch::FirstInfinitePosition { left, right } => format!(
            "first infinite factor at position {} vs {}",
            left + 1,
            right + 1
        ),
        ComponentMismatch::HeadFactor { index, left, right } => format!(
            "head factor {}: {} vs {}",
            index + 1,
            factor_clause(p, left),
            factor_clause(p, right)
        ),
        ComponentMismatch::FirstInfiniteExponent { left_power, right_power } => format!(
            "exponent of first infinite factor: {p}^{left_power} vs {p}^{right_power}"
        ),
        ComponentMismatch::FiniteFactor { index, left, right } => format!(
            "factor {}: {} vs {}",
            index + 1,
            opt_factor_clause(p, left),
            opt_factor_clause(p, right)
        ),
    }
}

fn equiv(format: Format, budget: &GroupBudget, left: &str, right: &str) -> Result<u8, CliError> {
    let l = abelian_operand(&expr::parse(left)?, budget)?;
    let r = abelian_operand(&expr::parse(right)?, budget)?;
    let (text, verdict, witness) = match l.first_mismatch(&r) {
        None => (
            "equivalent".to_string(),
            "equivalent",
            Value::Null,
        ),
        Some(m) => {
            let clause = mismatch_clause(&m);
            (
                format!("not equivalent ({clause})"),
                "not equivalent",
                json!({ "prime": m.prime(), "clause": clause }),
            )
        }
    };
    let explanation = text.clone();
    emit(
        format,
        text,
        json!({
            "command": "equiv",
            "inputs": { "left": l.to_string(), "right": r.to_string() },
            "verdict": verdict,
            "witness": witness,
            "explanation": explanation,
            "version": VERSION,
        }),
    );
    Ok(0)
}

/// Builds one active-side descriptor from either a concrete expression
/// or the abstract flags, plus its JSON echo for the `inputs` object.
fn active_descriptor(
    expr_raw: &Option<String>,
    exponent: Option<u64>,
    class: Option<u32>,
    budget: &GroupBudget,
) -> Result<(NilpotentDescriptor, Value), CliError> {
    if let Some(raw) = expr_raw {
        let ast = expr::parse(raw)?;
        let g = ast.to_concrete(budget)?;
        let order = g.order();
        let d = NilpotentDescriptor::from_group(g)?;
        let echo = json!({
            "kind": "concrete",
            "expr": ast.to_string(),
            "order": order,
            "exponent": d.exponent(),
            "class": d.nilpotency_class(),
        });
        Ok((d, echo))
    } else {
        let exponent = exponent.expect("clap requires an exponent with the abstract flag");
        let d = NilpotentDescriptor::asserted(exponent, class)?;
        let echo = json!({ "kind": "asserted", "exponent": exponent, "class": class });
        Ok((d, echo))
    }
}

fn run_decide(format: Format, budget: &GroupBudget, args: &DecideArgs) -> Result<u8, CliError> {
    let (a1, a1_echo) = active_descriptor(&args.a1, args.a1_exponent, args.a1_class, budget)?;
    let (a2, a2_echo) = active_descriptor(&args.a2, args.a2_exponent, args.a2_class, budget)?;
    let b1 = abelian_operand(&expr::parse(&args.b1)?, budget)?;
    let b2 = abelian_operand(&expr::parse(&args.b2)?, budget)?;

    let verdict = decide(&a1, &a2, &b1, &b2, args.assume_var_equal);
    let (name, witness, code) = match &verdict.outcome {
        Outcome::Equal => ("Equal", Value::Null, 0u8),
        Outcome::NotEqual { witness_prime } => ("NotEqual", json!(witness_prime), 0),
        Outcome::PreconditionViolation(_) => ("PreconditionViolation", Value::Null, 1),
    };
    let text = format!(
        "{}\nB1 = {}\nB2 = {}",
        verdict.explanation, verdict.passive_left, verdict.passive_right
    );
    emit(
        format,
        text,
        json!({
            "command": "decide",
            "inputs": {
                "a1": a1_echo,
                "a2": a2_echo,
                "b1": verdict.passive_left,
                "b2": verdict.passive_right,
                "assume_var_equal": args.assume_var_equal,
            },
            "verdict": name,
            "witness": witness,
            "explanation": verdict.explanation,
            "version": VERSION,
        }),
    );
    Ok(code)
}

fn class_phrase(n: Nilpotency) -> String {
    match n {
        Nilpotency::Class(c) => format!("class {c}"),
        Nilpotency::NotNilpotent => "not nilpotent".to_string(),
    }
}

fn solubility_phrase(s: Solubility) -> String {
    match s {
        Solubility::DerivedLength(d) => format!("derived length {d}"),
        Solubility::NotSoluble => "not soluble".to_string(),
    }
}

fn group_info(format: Format, budget: &GroupBudget, raw: &str) -> Result<u8, CliError> {
    let ast = expr::parse(raw)?;
    let g = ast.to_concrete(budget)?;
    let inv = *g.invariants();
    let line = format!(
        "order {}, exponent {}, {}, {}",
        inv.order,
        inv.exponent,
        class_phrase(inv.nilpotency_class),
        solubility_phrase(inv.derived_length)
    );
    let class = match inv.nilpotency_class {
        Nilpotency::Class(c) => json!(c),
        Nilpotency::NotNilpotent => Value::Null,
    };
    let derived = match inv.derived_length {
        Solubility::DerivedLength(d) => json!(d),
        Solubility::NotSoluble => Value::Null,
    };
    emit(
        format,
        format!("group: {}\n{}", g.label(), line),
        json!({
            "command": "group info",
            "inputs": { "expr": ast.to_string() },
            "report": {
                "group": g.label(),
                "order": inv.order,
                "exponent": inv.exponent,
                "abelian": inv.is_abelian,
                "nilpotency_class": class,
                "derived_length": derived,
            },
            "witness": Value::Null,
            "explanation": line,
            "version": VERSION,
        }),
    );
    Ok(0)
}

fn law_budget(evals: Option<u64>) -> LawBudget {
    match evals {
        Some(max_evaluations) => LawBudget { max_evaluations },
        None => LawBudget::default(),
    }
}

fn is_law_cmd(
    format: Format,
    budget: &GroupBudget,
    word_raw: &str,
    expr_raw: &str,
    evals: Option<u64>,
) -> Result<u8, CliError> {
    let word: Word = word_raw.parse()?;
    let ast = expr::parse(expr_raw)?;
    let g = ast.to_concrete(budget)?;
    let holds = is_law_with(&g, &word, &law_budget(evals))?;
    let text = if holds {
        format!("{} is a law of {}", word, g.label())
    } else {
        format!("{} is not a law of {}", word, g.label())
    };
    emit(
        format,
        text.clone(),
        json!({
            "command": "is-law",
            "inputs": { "word": word.to_string(), "expr": ast.to_string() },
            "verdict": holds,
            "witness": Value::Null,
            "explanation": text,
            "version": VERSION,
        }),
    );
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn scan_laws(
    format: Format,
    budget: &GroupBudget,
    left: &str,
    right: &str,
    rank: u32,
    max_len: u32,
    evals: Option<u64>,
) -> Result<u8, CliError> {
    let l_ast = expr::parse(left)?;
    let r_ast = expr::parse(right)?;
    let l = l_ast.to_concrete(budget)?;
    let r = r_ast.to_concrete(budget)?;
    let report = scan_discriminating_with(&l, &r, rank, max_len, &law_budget(evals))?;
    let stats = format!(
        "checked {} words with {} evaluations",
        report.words_checked, report.evaluations
    );
    let (headline, witness) = match &report.discriminating {
        Some(d) => (
            format!(
                "discriminating word: {} (a law of {} only)",
                d.word,
                match d.law_of {
                    Side::Left => l.label(),
                    Side::Right => r.label(),
                }
            ),
            json!({ "word": d.word.to_string(), "law_of": side_word(d.law_of) }),
        ),
        None => (
            format!("no discriminating law within bounds (rank {rank}, length {max_len})"),
            Value::Null,
        ),
    };
    emit(
        format,
        format!("{headline}\n{stats}"),
        json!({
            "command": "scan-laws",
            "inputs": { "left": l_ast.to_string(), "right": r_ast.to_string() },
            "report": {
                "rank": report.rank,
                "max_len": report.max_len,
                "words_checked": report.words_checked,
                "evaluations": report.evaluations,
            },
            "witness": witness,
            "explanation": headline,
            "version": VERSION,
        }),
    );
    Ok(0)
}

fn run_selftest(format: Format) -> Result<u8, CliError> {
    let checks = selftest::run_all();
    let all_pass = checks.iter().all(|c| c.result.is_ok());
    match format {
        Format::Text => {
            for check in &checks {
                match &check.result {
                    Ok(()) => println!("{}: PASS", check.name),
                    Err(e) => println!("{}: FAIL: {e}", check.name),
                }
            }
        }
        Format::Json => {
            let report: Vec<Value> = checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name,
                        "pass": c.result.is_ok(),
                        "detail": c.result.as_ref().err(),
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "command": "selftest",
                    "inputs": {},
                    "report": report,
                    "witness": Value::Null,
                    "explanation": if all_pass {
                        "all built-in checks pass"
                    } else {
                        "at least one built-in check failed"
                    },
                    "version": VERSION,
                })
            );
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}
