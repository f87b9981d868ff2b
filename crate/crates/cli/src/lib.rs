//! Command-line front end. [`run`] does all the work and returns the exit
//! code together with everything that would be printed, so tests can drive
//! it without spawning a process.
//!
//! Exit codes: 0 when every certificate passes, 1 when a certificate fails,
//! 2 on usage or input errors.

use std::collections::BTreeMap;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

use milnor_core::hopf::verify_hopf_triviality;
use milnor_core::lie::degree_five::{
    appendix_rhs_report, basis_commutators, expansion_matrix, parse_tree, render_combination,
    INDICES,
};
use milnor_core::lie::{
    appendix_identities, build_expansion_matrix, permutations, to_basis, verify_lemma_w,
    LemmaReport,
};
use milnor_core::magnus::expand_named;
use milnor_core::obstruction::system::parse_assignment;
use milnor_core::obstruction::{
    evaluate, integer_search, paper_system, square_grid, transcription_check, verify_family,
    SysVariable,
};
use milnor_core::word::expr_to_word;
use milnor_core::{parse_expr, Alphabet, Error, Generator, VariableSet};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Alphabet for `reduce` when `--vars` is not given.
pub const DEFAULT_ALPHABET: [&str; 9] = ["m1", "m2", "m3", "m4", "m5", "m6", "a", "b", "c"];

#[derive(Parser, Debug)]
#[command(
    name = "milnor",
    version,
    about = "Exact commutator calculus and band-sum obstructions"
)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Magnus expansion of an expression.
    Magnus {
        expr: String,
        /// Comma-separated generators; `m4` becomes `x4`.
        #[arg(long)]
        vars: String,
    },
    /// Free reduction of an expression.
    Reduce {
        expr: String,
        #[arg(long)]
        vars: Option<String>,
    },
    /// Multilinear bracket computations in degree five.
    Lie {
        #[command(subcommand)]
        command: LieCommand,
    },
    /// Run a verification suite.
    Verify {
        suite: Suite,
        /// Grid size per parameter for family verification.
        #[arg(long, default_value_t = 13)]
        grid: u32,
    },
    /// The band-sum equation system.
    System {
        #[command(subcommand)]
        command: SystemCommand,
    },
}

#[derive(Subcommand, Debug)]
enum LieCommand {
    /// Coordinates over the right-normed basis ending in m6.
    ToBasis { expr: String },
}

#[derive(Subcommand, Debug)]
enum SystemCommand {
    /// Bounded integer search.
    Search {
        /// Largest absolute value tried for each variable
        #[arg(long)]
        bound: i64,
        /// Comma-separated row labels, e.g. `2,3`.
        #[arg(long)]
        subsystem: Option<String>,
    },
    /// Residuals of an assignment file.
    Eval {
        #[arg(long)]
        assign: std::path::PathBuf,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Suite {
    Lemma41,
    Spanning,
    Appendix,
    Hopf,
    Transcription,
    Families,
    Search,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Error => "error",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Error => 2,
        }
    }

    fn of(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// A computed result next to the value it is meant to reproduce.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    pub result: Value,
    pub expected: Value,
    pub text: Vec<String>,
    pub timing_ms: u128,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "version": VERSION,
            "verdict": self.verdict.as_str(),
            "result": self.result,
            "expected": self.expected,
            "timing_ms": self.timing_ms as u64,
        })
    }
}

/// Outcome of one invocation.
#[derive(Debug, Clone)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Section {
    verdict: Verdict,
    result: Value,
    expected: Value,
    text: Vec<String>,
}

fn section(pass: bool, result: Value, expected: Value, text: Vec<String>) -> Section {
    Section {
        verdict: Verdict::of(pass),
        result,
        expected,
        text,
    }
}

fn info(result: Value, text: Vec<String>) -> Section {
    section(true, result, Value::Null, text)
}

pub fn run<I, S>(argv: I) -> Output
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let msg = e.render().to_string();
            return if code == 0 {
                Output {
                    code,
                    stdout: msg,
                    stderr: String::new(),
                }
            } else {
                Output {
                    code,
                    stdout: String::new(),
                    stderr: msg,
                }
            };
        }
    };
    let name = command_name(&cli.command);
    let start = Instant::now();
    let outcome = dispatch(&cli.command);
    let timing_ms = start.elapsed().as_millis();
    let report = match outcome {
        Ok(s) => Report {
            command: name,
            verdict: s.verdict,
            result: s.result,
            expected: s.expected,
            text: s.text,
            timing_ms,
        },
        Err(e) => Report {
            command: name,
            verdict: Verdict::Error,
            result: json!({ "error": e.to_string() }),
            expected: Value::Null,
            text: vec![format!("error: {e}")],
            timing_ms,
        },
    };
    let code = report.verdict.exit_code();
    if cli.json {
        let mut stdout = serde_json::to_string_pretty(&report.to_json()).unwrap();
        stdout.push('\n');
        Output {
            code,
            stdout,
            stderr: String::new(),
        }
    } else if report.verdict == Verdict::Error {
        Output {
            code,
            stdout: String::new(),
            stderr: report.text.join("\n") + "\n",
        }
    } else {
        Output {
            code,
            stdout: report.text.join("\n") + "\n",
            stderr: String::new(),
        }
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::Magnus { .. } => "magnus".into(),
        Command::Reduce { .. } => "reduce".into(),
        Command::Lie { .. } => "lie to-basis".into(),
        Command::Verify { suite, .. } => {
            format!("verify {}", suite.to_possible_value().unwrap().get_name())
        }
        Command::System {
            command: SystemCommand::Search { .. },
        } => "system search".into(),
        Command::System {
            command: SystemCommand::Eval { .. },
        } => "system eval".into(),
    }
}

fn dispatch(c: &Command) -> Result<Section, Error> {
    match c {
        Command::Magnus { expr, vars } => magnus(expr, vars),
        Command::Reduce { expr, vars } => reduce(expr, vars.as_deref()),
        Command::Lie {
            command: LieCommand::ToBasis { expr },
        } => lie_to_basis(expr),
        Command::Verify { suite, grid } => verify(*suite, *grid),
        Command::System {
            command: SystemCommand::Search { bound, subsystem },
        } => system_search(*bound, subsystem.as_deref()),
        Command::System {
            command: SystemCommand::Eval { assign },
        } => system_eval(assign),
    }
}

fn split_list(list: &str) -> Vec<String> {
    list.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn magnus(expr: &str, vars: &str) -> Result<Section, Error> {
    let alphabet = Alphabet::new(split_list(vars))?;
    let e = parse_expr(expr, &alphabet)?;
    let gens: Vec<Generator> = alphabet.generators().collect();
    let vs = VariableSet::by_name(&alphabet, &gens)?;
    let m = expand_named(&expr_to_word(&e), &vs, &alphabet)?;
    let variables: BTreeMap<String, String> = gens
        .iter()
        .map(|g| {
            (
                alphabet.name(*g).to_string(),
                format!("x{}", vs.variable(*g).unwrap()),
            )
        })
        .collect();
    Ok(info(
        json!({ "expansion": m.to_string(), "terms": m.len(), "variables": variables }),
        vec![m.to_string()],
    ))
}

fn reduce(expr: &str, vars: Option<&str>) -> Result<Section, Error> {
    let alphabet = match vars {
        Some(v) => Alphabet::new(split_list(v))?,
        None => Alphabet::new(DEFAULT_ALPHABET)?,
    };
    let e = parse_expr(expr, &alphabet)?;
    let w = expr_to_word(&e);
    let shown = w.display(&alphabet).to_string();
    Ok(info(
        json!({ "word": shown, "length": w.len() }),
        vec![shown],
    ))
}

fn lie_to_basis(expr: &str) -> Result<Section, Error> {
    let t = parse_tree(expr)?;
    let coeffs = to_basis(&t)?;
    let rendered = render_combination(&coeffs);
    let basis = basis_commutators();
    let terms: Vec<Value> = coeffs
        .iter()
        .zip(&basis)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, b)| json!({ "coefficient": c.to_string(), "basis": b.to_string() }))
        .collect();
    Ok(info(
        json!({ "tree": t.to_string(), "combination": rendered, "terms": terms }),
        vec![format!("{t} = {rendered}")],
    ))
}

fn lemma_value(r: &LemmaReport) -> Value {
    let kernel: Value = if r.kernel_is_all_ones {
        json!("all-ones")
    } else {
        Value::Array(
            r.kernel
                .iter()
                .map(|v| Value::Array(v.iter().map(|c| json!(c.to_string())).collect()))
                .collect(),
        )
    };
    json!({ "rank": r.rank, "kernel_dim": r.kernel_dim, "kernel": kernel })
}

fn verify_lemma41() -> Section {
    let r = verify_lemma_w();
    let rhs = appendix_rhs_report();
    let mut result = lemma_value(&r);
    result["rewritten_rhs"] = lemma_value(&rhs);
    section(
        r.passes(),
        result,
        json!({ "rank": 14, "kernel_dim": 1, "kernel": "all-ones" }),
        vec![
            format!(
                "U generators: rank {}, left kernel dimension {}, kernel {}",
                r.rank,
                r.kernel_dim,
                if r.kernel_is_all_ones {
                    "all-ones".to_string()
                } else {
                    format!("{:?}", r.kernel.len())
                }
            ),
            format!(
                "rewritten right-hand sides: rank {}, left kernel dimension {}, all-ones {}",
                rhs.rank, rhs.kernel_dim, rhs.kernel_is_all_ones
            ),
            "expected: rank 14, left kernel spanned by the all-ones vector".into(),
        ],
    )
}

fn verify_spanning() -> Section {
    let cols = permutations(&INDICES);
    let basis = expansion_matrix(&basis_commutators(), &cols).rank();
    let full = build_expansion_matrix(&INDICES).rank();
    let small: Vec<usize> = (2..=4u32)
        .map(|d| build_expansion_matrix(&(1..=d).collect::<Vec<_>>()).rank())
        .collect();
    section(
        basis == 24 && full == 24 && small == [1, 2, 6],
        json!({ "basis_rank": basis, "full_rank": full, "small_degree_ranks": small }),
        json!({ "basis_rank": 24, "full_rank": 24, "small_degree_ranks": [1, 2, 6] }),
        vec![
            format!("basis rank {basis}, full 120-row rank {full}"),
            format!("ranks in degrees 2, 3, 4: {small:?}"),
        ],
    )
}

fn verify_appendix() -> Section {
    let ids = appendix_identities();
    let mut holding = Vec::new();
    let mut failing = Vec::new();
    let mut undetected = Vec::new();
    let mut mutations = 0;
    for (k, id) in ids.iter().enumerate() {
        if id.holds().unwrap_or(false) {
            holding.push(k + 1);
        } else {
            failing.push(k + 1);
        }
        for i in 0..id.rhs.len() {
            mutations += 1;
            if id.with_sign_flipped(i).holds().unwrap_or(false) {
                undetected.push(json!([k + 1, i]));
            }
        }
    }
    let mut text = vec![
        format!("identities holding: {holding:?}"),
        format!("identities failing: {failing:?}"),
        format!(
            "{mutations} single-sign mutations, {} undetected",
            undetected.len()
        ),
    ];
    let mut coords = Vec::new();
    for k in &failing {
        let id = &ids[k - 1];
        if let Ok(c) = to_basis(&id.lhs) {
            let s = render_combination(&c);
            text.push(format!("({k}) {} = {s}", id.lhs));
            coords.push(json!({ "identity": k, "lhs": id.lhs.to_string(), "computed": s }));
        }
    }
    section(
        failing.is_empty() && undetected.is_empty(),
        json!({
            "holding": holding,
            "failing": failing,
            "mutations": mutations,
            "undetected_mutations": undetected,
            "failing_lhs_in_basis": coords,
        }),
        json!({ "holding": (1..=15).collect::<Vec<_>>(), "undetected_mutations": [] }),
        text,
    )
}

fn verify_hopf() -> Result<Section, Error> {
    let r = verify_hopf_triviality()?;
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "pass": c.pass, "detail": c.detail }))
        .collect();
    let mut text = vec![
        format!("substituted word: {}", r.substituted_word),
        format!("Magnus expansion: {}", r.expansion),
    ];
    for c in &r.checks {
        text.push(format!(
            "[{}] {}: {}",
            if c.pass { "pass" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    let twisted: Vec<Value> = r
        .twisted_solutions
        .iter()
        .map(|t| json!([t.0, t.1, t.2]))
        .collect();
    Ok(section(
        r.passes(),
        json!({
            "substituted_word": r.substituted_word,
            "expansion": r.expansion,
            "unsubstituted_lcs_degree": r.unsubstituted_lcs.to_string(),
            "checks": checks,
            "twisted_solutions": twisted,
        }),
        json!({ "expansion": "1", "unsubstituted_lcs_degree": "3" }),
        text,
    ))
}

fn verify_transcription() -> Result<Section, Error> {
    let r = transcription_check()?;
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|c| json!({ "label": c.label, "agrees": c.agrees, "note": c.note }))
        .collect();
    let mut text = vec![format!(
        "{} rows compared, {} agree",
        r.rows.len(),
        r.rows.iter().filter(|c| c.agrees).count()
    )];
    for c in r.rows.iter().filter(|c| c.note.is_some()) {
        text.push(format!("({}) {}", c.label, c.note.as_deref().unwrap()));
    }
    Ok(section(
        r.all_agree(),
        json!({ "rows": rows, "flagged": r.flagged() }),
        json!({ "all_agree": true }),
        text,
    ))
}

fn verify_families(grid: u32) -> Result<Section, Error> {
    let points = square_grid(grid);
    let mut all = true;
    let mut fams = Vec::new();
    let mut text = Vec::new();
    for id in 1..=3 {
        let r = verify_family(id, &points)?;
        all &= r.certified();
        let closed: Vec<Value> = r
            .closed_form
            .iter()
            .map(|(n, ok)| json!({ "fact": n, "holds": ok }))
            .collect();
        fams.push(json!({
            "id": id,
            "points": r.points,
            "nonzero_residuals": r.failures.len(),
            "certificate_grid": r.certificate,
            "closed_form": closed,
        }));
        text.push(format!(
            "family {id}: {} points, {} nonzero residuals, {}",
            r.points,
            r.failures.len(),
            if r.certificate {
                "degree-bound certificate"
            } else {
                "grid too small for a certificate"
            }
        ));
        for (n, ok) in &r.closed_form {
            text.push(format!("  {n}: {ok}"));
        }
    }
    Ok(section(
        all,
        json!({ "grid": grid, "families": fams }),
        json!({ "nonzero_residuals": 0, "certificate_grid": true }),
        text,
    ))
}

fn search_section(bound: i64, labels: Option<Vec<u8>>) -> Result<Section, Error> {
    if bound < 1 {
        return Err(Error::Malformed("--bound must be at least 1".into()));
    }
    let full = paper_system();
    let sys = match &labels {
        Some(l) => full.select(l)?,
        None => full,
    };
    let r = integer_search(&sys, bound)?;
    let names: Vec<String> = r.variables.iter().map(|v| v.name()).collect();
    let sols: Vec<Value> = r
        .solutions
        .iter()
        .map(|s| {
            Value::Object(
                names
                    .iter()
                    .cloned()
                    .zip(s.iter().map(|x| json!(x)))
                    .collect(),
            )
        })
        .collect();
    let mut text = if r.solutions.is_empty() {
        vec![format!("no integer solutions with |v| ≤ {bound}")]
    } else {
        vec![format!(
            "{} integer solutions with |v| ≤ {bound}",
            r.solutions.len()
        )]
    };
    const SHOWN: usize = 20;
    for s in r.solutions.iter().take(SHOWN) {
        text.push(
            names
                .iter()
                .zip(s)
                .map(|(n, x)| format!("{n}={x}"))
                .collect::<Vec<_>>()
                .join(", "),
        );
    }
    if r.solutions.len() > SHOWN {
        text.push(format!("... {} more", r.solutions.len() - SHOWN));
    }
    // Only the full system carries a claim; subsystems are informational.
    let pass = labels.is_some() || r.solutions.is_empty();
    let expected = if labels.is_none() {
        json!({ "solutions": [] })
    } else {
        Value::Null
    };
    Ok(section(
        pass,
        json!({
            "bound": bound,
            "rows": sys.rows.iter().map(|r| r.label).collect::<Vec<_>>(),
            "variables": names,
            "count": r.solutions.len(),
            "solutions": sols,
            "nodes": r.nodes,
        }),
        expected,
        text,
    ))
}

fn verify(suite: Suite, grid: u32) -> Result<Section, Error> {
    if grid == 0 {
        return Err(Error::InvalidGrid("--grid must be positive".into()));
    }
    match suite {
        Suite::Lemma41 => Ok(verify_lemma41()),
        Suite::Spanning => Ok(verify_spanning()),
        Suite::Appendix => Ok(verify_appendix()),
        Suite::Hopf => verify_hopf(),
        Suite::Transcription => verify_transcription(),
        Suite::Families => verify_families(grid),
        Suite::Search => search_section(5, None),
        Suite::All => {
            let parts: Vec<(&str, Section)> = vec![
                ("lemma41", verify_lemma41()),
                ("spanning", verify_spanning()),
                ("appendix", verify_appendix()),
                ("hopf", verify_hopf()?),
                ("transcription", verify_transcription()?),
                ("families", verify_families(grid)?),
                ("search", search_section(5, None)?),
            ];
            let pass = parts.iter().all(|(_, s)| s.verdict == Verdict::Pass);
            let mut result = serde_json::Map::new();
            let mut expected = serde_json::Map::new();
            let mut text = Vec::new();
            for (name, s) in parts {
                text.push(format!("== {name}: {}", s.verdict.as_str()));
                text.extend(s.text.into_iter().map(|l| format!("   {l}")));
                result.insert(
                    name.into(),
                    json!({ "verdict": s.verdict.as_str(), "result": s.result }),
                );
                expected.insert(name.into(), s.expected);
            }
            Ok(section(
                pass,
                Value::Object(result),
                Value::Object(expected),
                text,
            ))
        }
    }
}

fn system_search(bound: i64, subsystem: Option<&str>) -> Result<Section, Error> {
    let labels = subsystem
        .map(|s| {
            split_list(s)
                .iter()
                .map(|l| {
                    l.trim_matches(|c| c == '(' || c == ')')
                        .parse::<u8>()
                        .map_err(|_| Error::Malformed(format!("bad row label `{l}`")))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;
    search_section(bound, labels)
}

fn system_eval(path: &std::path::Path) -> Result<Section, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Malformed(format!("cannot read {}: {e}", path.display())))?;
    let assignment = parse_assignment(&text)?;
    if let Some(v) = SysVariable::ALL
        .iter()
        .find(|v| !assignment.contains_key(v))
    {
        return Err(Error::Malformed(format!("assignment has no value for {v}")));
    }
    let sys = paper_system();
    let residuals = evaluate(&sys, |v| assignment[&v].clone());
    let rows: Vec<Value> = sys
        .rows
        .iter()
        .zip(&residuals)
        .map(|(r, x)| json!({ "label": r.label, "residual": x.to_string() }))
        .collect();
    let nonzero: Vec<u8> = sys
        .rows
        .iter()
        .zip(&residuals)
        .filter(|(_, x)| !x.is_zero())
        .map(|(r, _)| r.label)
        .collect();
    let mut text: Vec<String> = sys
        .rows
        .iter()
        .zip(&residuals)
        .map(|(r, x)| format!("({}) residual {x}", r.label))
        .collect();
    text.push(if nonzero.is_empty() {
        "all residuals zero".into()
    } else {
        format!("nonzero residuals in rows {nonzero:?}")
    });
    Ok(section(
        nonzero.is_empty(),
        json!({ "residuals": rows, "nonzero_rows": nonzero }),
        json!({ "nonzero_rows": [] }),
        text,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Output {
        run(std::iter::once("milnor").chain(args.iter().copied()))
    }

    #[test]
    fn magnus_example() {
        let o = run_args(&["magnus", "[m1,m2]", "--vars", "m1,m2"]);
        assert_eq!(o.code, 0);
        assert_eq!(o.stdout.trim(), "1 + x1x2 - x2x1");
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["frobnicate"]).code, 2);
        assert_eq!(run_args(&["magnus", "[m1,", "--vars", "m1"]).code, 2);
        assert_eq!(run_args(&["magnus", "[m1,m9]", "--vars", "m1,m2"]).code, 2);
    }

    #[test]
    fn help_exits_zero() {
        let o = run_args(&["--help"]);
        assert_eq!(o.code, 0);
        assert!(o.stdout.contains("verify"));
    }
}
