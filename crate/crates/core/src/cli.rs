//! Command-line front end. Every command produces a [`Report`]; commands that
//! build something also produce a JSON artifact, written to `--out` or to
//! stdout (the report then moves to stderr).
//!
//! Exit codes: 0 pass, 1 fail, 2 usage/parse/I-O error, 3 internal error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::expansion::{s_expand, zero_reduce};
use crate::formats::{self, Decomposition};
use crate::multialgebra::{MultiAlgebra, SplitCheck, SubspaceSplit};
use crate::rational;
use crate::realization::{extract_constants, verify_identity};
use crate::resonance::{
    check_reduction_partition, check_resonance, closure_sets, reduce_resonant, resonant_subalgebra,
    search_resonant, ClosureStructure, ProductWitness, SearchLimits,
};
use crate::semigroup::{gen_se, AxiomViolation, Semigroup};

#[derive(Debug, Parser)]
#[command(name = "multibracket", version, about = "Exact tools for n-bracket algebras and their semigroup expansions")]
pub struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the produced file here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel checks.
    #[arg(long, global = true, value_name = "K")]
    pub threads: Option<usize>,
    /// Seed for sampled identity verification.
    #[arg(long, global = true, value_name = "U64", default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check closure, commutativity and associativity of a semigroup table.
    ValidateSemigroup { semigroup: PathBuf },
    /// Write the S_E^(N) semigroup.
    GenSe { n: usize },
    /// Check the generalized Jacobi identity of an algebra.
    CheckGji { algebra: PathBuf },
    /// Check that the span of --v0 closes under the bracket.
    CheckSub {
        algebra: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        v0: Vec<usize>,
    },
    /// Check the reduction condition [V1, V0, ..., V0] in V1 for the --v0 split.
    CheckReduction {
        algebra: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        v0: Vec<usize>,
    },
    /// Write the reduced algebra on --v0.
    Reduce {
        algebra: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        v0: Vec<usize>,
    },
    /// Write the S-expansion of an algebra by a semigroup.
    Expand { algebra: PathBuf, semigroup: PathBuf },
    /// Write the 0_S-reduction of an expanded algebra.
    ZeroReduce {
        expanded: PathBuf,
        /// Semigroup the algebra was expanded with.
        #[arg(long)]
        semigroup: PathBuf,
    },
    /// Write the structure constants of the n-bracket of a matrix representation.
    Extract {
        rep: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Verify the nested-bracket identity on a matrix representation.
    VerifyIdentity {
        rep: PathBuf,
        #[arg(long)]
        n: usize,
        /// Number of sampled tuples; 0 checks every tuple.
        #[arg(long, default_value_t = 0)]
        trials: usize,
    },
    /// Resonant decompositions, subalgebras and their reductions.
    #[command(subcommand)]
    Resonance(ResonanceCommand),
}

#[derive(Debug, Subcommand)]
pub enum ResonanceCommand {
    /// Check that the subsets are in resonance with the subspaces.
    Check { algebra: PathBuf, semigroup: PathBuf, decomposition: PathBuf },
    /// Write the resonant subalgebra.
    Build { algebra: PathBuf, semigroup: PathBuf, decomposition: PathBuf },
    /// Write the reduced algebra of the resonant subalgebra given by "hat".
    Reduce { algebra: PathBuf, semigroup: PathBuf, decomposition: PathBuf },
    /// Enumerate resonant subset decompositions for the given subspaces.
    Search {
        algebra: PathBuf,
        semigroup: PathBuf,
        decomposition: PathBuf,
        #[arg(long)]
        max_results: Option<usize>,
        #[arg(long)]
        max_nodes: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub tuples_checked: u64,
    pub permutations_evaluated: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms_evaluated: Option<u64>,
    pub wall_time_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub message: String,
    pub witnesses: Vec<Value>,
    pub stats: Stats,
}

struct Outcome {
    status: Status,
    message: String,
    witnesses: Vec<Value>,
    stats: Stats,
    artifact: Option<String>,
}

impl Outcome {
    fn pass(message: impl Into<String>) -> Self {
        Self {
            status: Status::Pass,
            message: message.into(),
            witnesses: Vec::new(),
            stats: Stats::default(),
            artifact: None,
        }
    }

    fn verdict(ok: bool, message: impl Into<String>, witnesses: Vec<Value>) -> Self {
        Self {
            status: if ok { Status::Pass } else { Status::Fail },
            witnesses,
            ..Self::pass(message)
        }
    }

    fn with_artifact(mut self, text: String) -> Self {
        self.artifact = Some(text);
        self
    }

    fn with_stats(mut self, stats: Stats) -> Self {
        self.stats = stats;
        self
    }
}

/// A command error: either a failed check (exit 1) or bad input (exit 2).
fn from_error(e: Error) -> Outcome {
    let detail = e.to_string();
    let (status, witness) = match &e {
        Error::NotReducible { lower, upper, value } => {
            (Status::Fail, json!({"kind": "NotReducible", "lower": lower, "upper": upper, "value": value}))
        }
        Error::Closure(tuple) => (Status::Fail, json!({"kind": "Closure", "tuple": tuple})),
        Error::Rank { rank, count } => {
            (Status::Fail, json!({"kind": "Rank", "rank": rank, "count": count}))
        }
        Error::NotResonant(msg) => (Status::Fail, json!({"kind": "NotResonant", "detail": msg})),
        Error::NoZeroElement => (Status::Fail, json!({"kind": "NoZeroElement"})),
        _ => (Status::Error, Value::Null),
    };
    Outcome {
        status,
        message: detail,
        witnesses: if witness.is_null() { Vec::new() } else { vec![witness] },
        stats: Stats::default(),
        artifact: None,
    }
}

fn read(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| Outcome {
        status: Status::Error,
        ..Outcome::pass(format!("cannot read {}: {e}", path.display()))
    })
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> crate::Result<T>) -> Result<T, Outcome> {
    let text = read(path)?;
    parse(&text).map_err(|e| {
        let mut o = from_error(e);
        o.message = format!("{}: {}", path.display(), o.message);
        o
    })
}

fn saturate(x: u128) -> u64 {
    u64::try_from(x).unwrap_or(u64::MAX)
}

fn axiom_witness(v: &AxiomViolation) -> Value {
    match v {
        AxiomViolation::NotClosed { row, col, value } => {
            json!({"kind": "NotClosed", "row": row, "col": col, "value": value})
        }
        AxiomViolation::NotCommutative { a, b } => json!({"kind": "NotCommutative", "a": a, "b": b}),
        AxiomViolation::NotAssociative { a, b, c } => {
            json!({"kind": "NotAssociative", "a": a, "b": b, "c": c})
        }
    }
}

fn split_witnesses(check: &SplitCheck) -> Vec<Value> {
    check
        .witnesses
        .iter()
        .map(|w| json!({"lower": w.lower, "upper": w.upper, "value": rational::format(&w.value)}))
        .collect()
}

fn product_witness(w: &ProductWitness, labels: &[String], s: &Semigroup) -> Value {
    json!({
        "parts": w.parts.iter().map(|&p| &labels[p]).collect::<Vec<_>>(),
        "factors": w.factors.iter().map(|&e| s.label(e)).collect::<Vec<_>>(),
        "product": s.label(w.product),
        "missing_from": labels[w.missing_from],
    })
}

fn validate_semigroup(path: &Path) -> Result<Outcome, Outcome> {
    let file = load(path, formats::parse_semigroup_file)?;
    let m = file.labels.len() as u64;
    let stats = Stats { tuples_checked: m * m * m, ..Stats::default() };
    match formats::semigroup_from_file(file) {
        Ok(s) => {
            let zero = s.zero_element().map_or("none".to_string(), |z| s.label(z).to_string());
            Ok(Outcome::pass(format!("valid Abelian semigroup of order {}, zero element: {zero}", s.order()))
                .with_stats(stats))
        }
        Err(Error::InvalidSemigroup(violations)) => Ok(Outcome::verdict(
            false,
            format!("{} axiom violation(s)", violations.len()),
            violations.iter().map(axiom_witness).collect(),
        )
        .with_stats(stats)),
        Err(e) => Err(from_error(e)),
    }
}

fn check_gji(path: &Path) -> Result<Outcome, Outcome> {
    let a = load(path, formats::algebra_from_json)?;
    let report = a.check_gji().map_err(from_error)?;
    let witnesses = report
        .violations
        .iter()
        .map(|v| json!({"tuple": v.tuple, "upper": v.upper, "residual": rational::format(&v.residual)}))
        .collect();
    let message = format!(
        "order {}, dimension {}: {} tuples, {} violations",
        a.order(),
        a.dim(),
        report.tuples_checked,
        report.violations.len()
    );
    Ok(Outcome::verdict(report.passes(), message, witnesses).with_stats(Stats {
        tuples_checked: saturate(report.tuples_checked),
        terms_evaluated: Some(report.terms_evaluated),
        ..Stats::default()
    }))
}

fn split_of(a: &MultiAlgebra, v0: &[usize]) -> Result<SubspaceSplit, Outcome> {
    SubspaceSplit::from_v0(a.dim(), v0.iter().copied()).map_err(from_error)
}

fn check_split(path: &Path, v0: &[usize], sub: bool) -> Result<Outcome, Outcome> {
    let a = load(path, formats::algebra_from_json)?;
    let split = split_of(&a, v0)?;
    let check = if sub { a.check_submultialgebra(&split) } else { a.check_reduction_condition(&split) };
    let (holds, breaks) = if sub {
        ("v0 closes under the bracket", "leave v0")
    } else {
        ("[V1, V0, ..., V0] lies in V1", "map [V1, V0, ..., V0] into v0")
    };
    let message = if check.holds {
        holds.to_string()
    } else {
        format!("{} constant(s) {breaks}", check.witnesses.len())
    };
    Ok(Outcome::verdict(check.holds, message, split_witnesses(&check)))
}

fn reduce(path: &Path, v0: &[usize]) -> Result<Outcome, Outcome> {
    let a = load(path, formats::algebra_from_json)?;
    let split = split_of(&a, v0)?;
    let check = a.check_reduction_condition(&split);
    if !check.holds {
        let message = format!("{} constant(s) cross back into v0", check.witnesses.len());
        return Ok(Outcome::verdict(false, message, split_witnesses(&check)));
    }
    let r = a.reduced(&split).map_err(from_error)?;
    Ok(Outcome::pass(format!("reduced algebra of dimension {}", r.dim()))
        .with_artifact(formats::algebra_to_json(&r)))
}

fn expand(algebra: &Path, semigroup: &Path) -> Result<Outcome, Outcome> {
    let a = load(algebra, formats::algebra_from_json)?;
    let s = load(semigroup, formats::semigroup_from_json)?;
    let e = s_expand(&a, &s);
    Ok(Outcome::pass(format!(
        "expanded algebra of dimension {} ({} constants)",
        e.algebra().dim(),
        e.algebra().tensor().len()
    ))
    .with_artifact(formats::expanded_to_json(&e)))
}

fn zero_reduce_cmd(expanded: &Path, semigroup: &Path) -> Result<Outcome, Outcome> {
    let s = load(semigroup, formats::semigroup_from_json)?;
    let e = load(expanded, |t| formats::expanded_from_json(t, &s))?;
    let r = zero_reduce(&e).map_err(from_error)?;
    Ok(Outcome::pass(format!("0_S-reduced algebra of dimension {}", r.algebra().dim()))
        .with_artifact(formats::expanded_to_json(&r)))
}

fn extract(rep: &Path, n: usize) -> Result<Outcome, Outcome> {
    let rep = load(rep, formats::rep_from_json)?;
    let a = extract_constants(&rep, n).map_err(from_error)?;
    Ok(Outcome::pass(format!("extracted {} constants of the {n}-bracket", a.tensor().len()))
        .with_artifact(formats::algebra_to_json(&a)))
}

fn verify(rep: &Path, n: usize, trials: usize, seed: u64) -> Result<Outcome, Outcome> {
    let rep = load(rep, formats::rep_from_json)?;
    let report = verify_identity(&rep, n, trials, seed).map_err(from_error)?;
    let witnesses = report.violations.iter().map(|t| json!({"tuple": t})).collect();
    let message = format!(
        "n={n}, factor {}: {} tuples checked, {} violations",
        report.factor,
        report.tuples_checked,
        report.violations.len()
    );
    Ok(Outcome::verdict(report.passes(), message, witnesses).with_stats(Stats {
        tuples_checked: report.tuples_checked as u64,
        permutations_evaluated: saturate(report.permutations_evaluated),
        ..Stats::default()
    }))
}

struct ResonanceInputs {
    algebra: MultiAlgebra,
    semigroup: Semigroup,
    decomposition: Decomposition,
    closure: ClosureStructure,
}

fn resonance_inputs(algebra: &Path, semigroup: &Path, decomposition: &Path) -> Result<ResonanceInputs, Outcome> {
    let a = load(algebra, formats::algebra_from_json)?;
    let s = load(semigroup, formats::semigroup_from_json)?;
    let d = load(decomposition, |t| formats::decomposition_from_json(t, a.dim(), &s))?;
    let minimal = closure_sets(&a, &d.subspaces).map_err(from_error)?;
    let closure = match &d.closure {
        Some(declared) if !declared.covers(&minimal) => {
            return Err(from_error(Error::Decomposition(
                "declared closure sets miss brackets the algebra actually has".into(),
            )));
        }
        Some(declared) => declared.clone(),
        None => minimal,
    };
    Ok(ResonanceInputs { algebra: a, semigroup: s, decomposition: d, closure })
}

fn resonance(cmd: &ResonanceCommand) -> Result<Outcome, Outcome> {
    let (algebra, semigroup, decomposition) = match cmd {
        ResonanceCommand::Check { algebra, semigroup, decomposition }
        | ResonanceCommand::Build { algebra, semigroup, decomposition }
        | ResonanceCommand::Reduce { algebra, semigroup, decomposition }
        | ResonanceCommand::Search { algebra, semigroup, decomposition, .. } => (algebra, semigroup, decomposition),
    };
    let inputs = resonance_inputs(algebra, semigroup, decomposition)?;
    let labels = inputs.decomposition.subspaces.labels().to_vec();
    let s = &inputs.semigroup;

    if let ResonanceCommand::Search { max_results, max_nodes, .. } = cmd {
        let mut limits = SearchLimits { max_results: *max_results, ..SearchLimits::default() };
        if max_nodes.is_some() {
            limits.max_nodes = *max_nodes;
        }
        let out = search_resonant(s, &inputs.closure, labels.len(), limits).map_err(from_error)?;
        let found: Vec<_> = out
            .decompositions
            .iter()
            .map(|sd| {
                formats::decomposition_to_file(&Decomposition {
                    subspaces: inputs.decomposition.subspaces.clone(),
                    subsets: Some(sd.clone()),
                    partition: None,
                    closure: None,
                })
            })
            .collect();
        let artifact = formats::to_json(&json!({
            "complete": out.complete,
            "nodes": out.nodes,
            "decompositions": found,
        }));
        let scope = if out.complete { "exhaustive" } else { "partial, limit reached" };
        let message = format!("{} resonant decomposition(s) ({scope}, {} nodes)", found.len(), out.nodes);
        let witnesses = if found.is_empty() {
            vec![json!({"kind": "NoResonantDecomposition", "complete": out.complete})]
        } else {
            Vec::new()
        };
        return Ok(Outcome::verdict(!found.is_empty(), message, witnesses)
            .with_artifact(artifact)
            .with_stats(Stats { tuples_checked: out.nodes, ..Stats::default() }));
    }

    let sd = inputs
        .decomposition
        .subsets
        .as_ref()
        .ok_or_else(|| from_error(Error::Parse("decomposition has no \"subsets\"".into())))?;
    let check = check_resonance(s, sd, &inputs.closure).map_err(from_error)?;
    if !check.holds {
        let witnesses = check.witnesses.iter().map(|w| product_witness(w, &labels, s)).collect();
        let message = format!("{} product(s) break resonance", check.witnesses.len());
        return Ok(Outcome::verdict(false, message, witnesses));
    }
    if let ResonanceCommand::Check { .. } = cmd {
        return Ok(Outcome::pass("subsets are in resonance with the subspaces"));
    }

    let r = resonant_subalgebra(&inputs.algebra, s, &inputs.decomposition.subspaces, sd).map_err(from_error)?;
    if let ResonanceCommand::Build { .. } = cmd {
        return Ok(Outcome::pass(format!("resonant subalgebra of dimension {}", r.algebra().dim()))
            .with_artifact(formats::expanded_to_json(&r)));
    }

    let rp = inputs
        .decomposition
        .partition
        .as_ref()
        .ok_or_else(|| from_error(Error::Parse("decomposition has no \"hat\"".into())))?;
    let pc = check_reduction_partition(s, rp, &inputs.closure).map_err(from_error)?;
    if !pc.holds {
        let mut witnesses: Vec<Value> = pc
            .overlapping_parts
            .iter()
            .map(|&p| json!({"kind": "Overlap", "part": labels[p]}))
            .collect();
        witnesses.extend(pc.witnesses.iter().map(|w| product_witness(w, &labels, s)));
        return Ok(Outcome::verdict(false, "hat/check partition fails", witnesses));
    }
    let reduced = reduce_resonant(&r, &inputs.decomposition.subspaces, &inputs.closure, rp).map_err(from_error)?;
    Ok(Outcome::pass(format!("reduced resonant algebra of dimension {}", reduced.algebra().dim()))
        .with_artifact(formats::expanded_to_json(&reduced)))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::ValidateSemigroup { .. } => "validate-semigroup",
        Command::GenSe { .. } => "gen-se",
        Command::CheckGji { .. } => "check-gji",
        Command::CheckSub { .. } => "check-sub",
        Command::CheckReduction { .. } => "check-reduction",
        Command::Reduce { .. } => "reduce",
        Command::Expand { .. } => "expand",
        Command::ZeroReduce { .. } => "zero-reduce",
        Command::Extract { .. } => "extract",
        Command::VerifyIdentity { .. } => "verify-identity",
        Command::Resonance(ResonanceCommand::Check { .. }) => "resonance check",
        Command::Resonance(ResonanceCommand::Build { .. }) => "resonance build",
        Command::Resonance(ResonanceCommand::Reduce { .. }) => "resonance reduce",
        Command::Resonance(ResonanceCommand::Search { .. }) => "resonance search",
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::ValidateSemigroup { semigroup } => validate_semigroup(semigroup),
        Command::GenSe { n } => {
            let s = gen_se(*n);
            Ok(Outcome::pass(format!("S_E^({n}) with {} elements", s.order()))
                .with_artifact(formats::semigroup_to_json(&s)))
        }
        Command::CheckGji { algebra } => check_gji(algebra),
        Command::CheckSub { algebra, v0 } => check_split(algebra, v0, true),
        Command::CheckReduction { algebra, v0 } => check_split(algebra, v0, false),
        Command::Reduce { algebra, v0 } => reduce(algebra, v0),
        Command::Expand { algebra, semigroup } => expand(algebra, semigroup),
        Command::ZeroReduce { expanded, semigroup } => zero_reduce_cmd(expanded, semigroup),
        Command::Extract { rep, n } => extract(rep, *n),
        Command::VerifyIdentity { rep, n, trials } => verify(rep, *n, *trials, cli.seed),
        Command::Resonance(cmd) => resonance(cmd),
    };
    result.unwrap_or_else(|o| o)
}

fn render_human(report: &Report) -> String {
    let tag = match report.status {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Error => "ERROR",
    };
    let mut out = format!("{tag} {}: {}\n", report.command, report.message);
    const SHOWN: usize = 10;
    for w in report.witnesses.iter().take(SHOWN) {
        out.push_str(&format!("  witness: {w}\n"));
    }
    if report.witnesses.len() > SHOWN {
        out.push_str(&format!("  ... {} more\n", report.witnesses.len() - SHOWN));
    }
    out
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return e.exit_code();
        }
    };
    if let Some(k) = cli.threads {
        // a pool already built by an earlier call in this process is reused
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }

    let start = Instant::now();
    let mut outcome = dispatch(&cli);
    let mut artifact_on_stdout = false;
    if let Some(text) = outcome.artifact.take() {
        match &cli.out {
            Some(path) => {
                if let Err(e) = fs::write(path, text) {
                    outcome = Outcome {
                        status: Status::Error,
                        ..Outcome::pass(format!("cannot write {}: {e}", path.display()))
                    };
                }
            }
            None => {
                let _ = stdout.write_all(text.as_bytes());
                artifact_on_stdout = true;
            }
        }
    }
    let mut stats = outcome.stats;
    stats.wall_time_ms = start.elapsed().as_millis() as u64;
    let report = Report {
        command: command_name(&cli.command).to_string(),
        status: outcome.status,
        message: outcome.message,
        witnesses: outcome.witnesses,
        stats,
    };
    let text = if cli.json { formats::to_json(&report) } else { render_human(&report) };
    let _ = if artifact_on_stdout || report.status == Status::Error && !cli.json {
        stderr.write_all(text.as_bytes())
    } else {
        stdout.write_all(text.as_bytes())
    };
    report.status.exit_code()
}

