//! Command-line front end for `mapr`.
//!
//! Exit codes: `0` success or property holds, `1` infeasible or violated,
//! `2` usage or input error.

mod report;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mapr::apportionment::{largest_remainder, QuotaKind};
use mapr::axioms::{
    check_non_reversal, check_quota, house_monotonicity_probe, population_monotonicity_probe, shrink_share,
    HouseReading, ProbeOutcome,
};
use mapr::format::{parse_instance, to_json_string};
use mapr::generators::{catalog, from_perfect_code, from_x3c, random_instance, RandomOptions};
use mapr::rational;
use mapr::solvers::{
    brute_force, local_search, optimal_allocations, perfect_committee, solve_buckets_optimal, solve_full_supply,
    LocalSearchParams, PerfectOutcome, SolverConfig,
};
use mapr::transform::{to_binary, verify_transform_identities};
use mapr::{Committee, Execution, Instance, LossKind};
use serde::Serialize;
use thiserror::Error;

use report::{
    names, representation, ApportionReport, AxiomReport, Finding, LossTriple, SolveReport, TraceOut, TransformReport,
    SCHEMA_VERSION,
};

#[derive(Debug, Error)]
enum Failure {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] mapr::Error),
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
}

/// Whether a command produced a positive or a negative answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Positive,
    Negative,
}

#[derive(Debug, Parser)]
#[command(name = "mapr", version, about = "Multi-attribute proportional committee selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a committee for an instance file
    Solve(SolveArgs),
    /// Largest-remainder seat allocation for one attribute
    Apportion(ApportionArgs),
    /// Audit an apportionment property on the optimal committees
    Axioms(AxiomArgs),
    /// Write an instance file: x3c, perfectcode, random or paper:<name>
    Gen(GenArgs),
    /// Binary-domain transform of an instance
    Transform(TransformArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Loss {
    L1,
    L1max,
    Lmax,
}

impl From<Loss> for LossKind {
    fn from(l: Loss) -> Self {
        match l {
            Loss::L1 => LossKind::L1,
            Loss::L1max => LossKind::L1Max,
            Loss::Lmax => LossKind::LMax,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Brute,
    Fs,
    Local,
    Buckets,
    Perfect,
}

#[derive(Debug, Args)]
struct Limits {
    /// Maximum optimal committees enumerated
    #[arg(long, default_value_t = 10_000)]
    limit: usize,
    /// Maximum committees or search nodes
    #[arg(long, default_value_t = 50_000_000)]
    budget: u64,
    /// Run solvers on one thread
    #[arg(long)]
    sequential: bool,
}

impl Limits {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            execution: if self.sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            },
            node_budget: self.budget,
            enumeration_limit: self.limit,
        }
    }
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Instance file, `-` for standard input
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = Loss::L1)]
    loss: Loss,
    #[arg(long, value_enum, default_value_t = Algo::Brute)]
    algo: Algo,
    /// Swap radius of local search
    #[arg(short = 'l', long = "l", default_value_t = 1)]
    radius: usize,
    /// Seed for the random starting committee of local search
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Start local search from these candidates
    #[arg(long, value_delimiter = ',')]
    initial: Option<Vec<String>>,
    /// Stop local search after this many accepted swaps
    #[arg(long)]
    max_iter: Option<u64>,
    /// List every optimal committee (brute force)
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Quota {
    Hare,
    Droop,
    Hb,
    Imperiali,
}

impl From<Quota> for QuotaKind {
    fn from(q: Quota) -> Self {
        match q {
            Quota::Hare => QuotaKind::Hare,
            Quota::Droop => QuotaKind::Droop,
            Quota::Hb => QuotaKind::HagenbachBischoff,
            Quota::Imperiali => QuotaKind::Imperiali,
        }
    }
}

#[derive(Debug, Args)]
struct ApportionArgs {
    /// Votes or shares, comma-separated (`3`, `0.25`, `1/7`)
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<String>,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Quota::Hare)]
    quota: Quota,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Check {
    Nonreversal,
    Quota,
    Popmono,
    Housemono,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Reading {
    Seats,
    Fractions,
}

#[derive(Debug, Args)]
struct AxiomArgs {
    /// Instance file, `-` for standard input
    file: PathBuf,
    #[arg(long, value_enum)]
    check: Check,
    #[arg(long, value_enum, default_value_t = Loss::L1)]
    loss: Loss,
    /// Attribute probed by popmono
    #[arg(long)]
    attribute: Option<String>,
    /// Value probed by popmono
    #[arg(long)]
    value: Option<String>,
    /// Lowered share of the probed value; other shares keep their ratios
    #[arg(long)]
    share: Option<String>,
    /// Take the lowered target from this instance file instead of --share
    #[arg(long)]
    rho_file: Option<PathBuf>,
    /// Larger committee size for housemono (default k + 1)
    #[arg(long)]
    k_larger: Option<usize>,
    #[arg(long, value_enum, default_value_t = Reading::Seats)]
    reading: Reading,
    #[command(flatten)]
    limits: Limits,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// x3c, perfectcode, random or paper:<name>
    kind: String,
    /// X3C universe size (multiple of 3)
    #[arg(long)]
    universe: Option<usize>,
    /// X3C sets of 1-based elements, e.g. `1,2,3;4,5,6`
    #[arg(long)]
    sets: Option<String>,
    /// Graph size for perfectcode
    #[arg(long)]
    vertices: Option<usize>,
    /// 1-based edges, e.g. `1-2,2-3`
    #[arg(long, default_value = "")]
    edges: String,
    /// Committee or code size
    #[arg(long)]
    k: Option<usize>,
    /// Domain sizes of the random attributes, e.g. `2,3,2`
    #[arg(long, value_delimiter = ',')]
    domains: Option<Vec<usize>>,
    /// Candidate count for random instances
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include k copies of every value vector
    #[arg(long)]
    fs: bool,
    /// Round the target to a natural one
    #[arg(long, conflicts_with = "non_natural")]
    natural: bool,
    /// Ask for a target that is not forced to be natural
    #[arg(long)]
    non_natural: bool,
    /// Make c1..ck a perfect committee
    #[arg(long)]
    plant: bool,
    /// Use the catalog entry's alternate target
    #[arg(long)]
    alternate: bool,
}

#[derive(Debug, Args)]
struct TransformArgs {
    /// Instance file, `-` for standard input
    file: PathBuf,
    /// Report the loss identities for these candidates instead of writing
    /// the binary instance
    #[arg(long, value_delimiter = ',')]
    committee: Option<Vec<String>>,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(Verdict::Positive) => 0,
        Ok(Verdict::Negative) => 1,
        Err(Failure::Write(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 2,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<Verdict, Failure> {
    match command {
        Command::Solve(a) => solve(a, out),
        Command::Apportion(a) => apportion(a, out),
        Command::Axioms(a) => axioms(a, out),
        Command::Gen(a) => generate(a, out),
        Command::Transform(a) => transform(a, out),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let result = if path == Path::new("-") || path == Path::new("/dev/stdin") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    result.map_err(|source| Failure::Read {
        path: path.display().to_string(),
        source,
    })?;
    Ok(text)
}

fn load(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read_text(path)?)
        .map_err(|e| match e {
            mapr::Error::Parse { location, message } => mapr::Error::Parse {
                location: format!("{}: {location}", path.display()),
                message,
            },
            other => other,
        })
        .map_err(Failure::from)
}

fn emit(out: &mut dyn Write, value: &impl Serialize) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("reports always serialize");
    writeln!(out, "{text}")?;
    Ok(())
}

fn committee_by_names(instance: &Instance, list: &[String]) -> Result<Committee, Failure> {
    let members = list
        .iter()
        .map(|n| {
            instance
                .db()
                .candidate_index(n.trim())
                .ok_or_else(|| Failure::Usage(format!("unknown candidate `{n}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Committee::new(members)?)
}

fn solve(a: SolveArgs, out: &mut dyn Write) -> Result<Verdict, Failure> {
    let instance = load(&a.file)?;
    let kind = LossKind::from(a.loss);
    let config = a.limits.config();
    if a.all && a.algo != Algo::Brute {
        return Err(Failure::Usage("--all needs --algo brute".into()));
    }
    let report = match a.algo {
        Algo::Brute => brute_force(&instance, kind, a.all, &config)?,
        Algo::Fs => solve_full_supply(&instance, kind)?,
        Algo::Buckets => solve_buckets_optimal(&instance, kind, &config)?,
        Algo::Local => {
            let mut params = LocalSearchParams::new(a.radius, a.seed);
            params.max_iter = a.max_iter;
            if let Some(list) = &a.initial {
                params = params.with_initial(committee_by_names(&instance, list)?);
            }
            local_search(&instance, kind, &params, &config)?
        }
        Algo::Perfect => match perfect_committee(&instance, &config)? {
            PerfectOutcome::Feasible { report, .. } => report,
            PerfectOutcome::Infeasible { nodes } => {
                let trace = mapr::solvers::Trace {
                    nodes,
                    ..Default::default()
                };
                emit(
                    out,
                    &SolveReport {
                        schema_version: SCHEMA_VERSION,
                        command: "solve",
                        algorithm: "perfect",
                        loss_kind: kind.as_str(),
                        status: "infeasible",
                        loss: None,
                        committee: None,
                        optima: None,
                        truncated: false,
                        representation: None,
                        trace: TraceOut::new(&instance, &trace),
                        seed: None,
                    },
                )?;
                return Ok(Verdict::Negative);
            }
        },
    };
    let status = match a.algo {
        Algo::Local if report.truncated => "stopped",
        Algo::Local => "local_optimum",
        Algo::Perfect => "feasible",
        _ => "optimal",
    };
    let committee = report.committee();
    emit(
        out,
        &SolveReport {
            schema_version: SCHEMA_VERSION,
            command: "solve",
            algorithm: report.algorithm.as_str(),
            loss_kind: report.kind.as_str(),
            status,
            loss: Some(rational::format(&report.loss)),
            committee: Some(names(&instance, committee)),
            optima: a
                .all
                .then(|| report.committees.iter().map(|c| names(&instance, c)).collect()),
            truncated: report.truncated,
            representation: Some(representation(&instance, committee)?),
            trace: TraceOut::new(&instance, &report.trace),
            seed: report.seed,
        },
    )?;
    Ok(Verdict::Positive)
}

fn apportion(a: ApportionArgs, out: &mut dyn Write) -> Result<Verdict, Failure> {
    let weights = a
        .weights
        .iter()
        .map(|w| rational::parse(w))
        .collect::<mapr::Result<Vec<_>>>()?;
    let quota = QuotaKind::from(a.quota);
    let result = largest_remainder(&weights, a.k, quota)?;
    emit(
        out,
        &ApportionReport {
            schema_version: SCHEMA_VERSION,
            command: "apportion",
            quota: quota.as_str(),
            k: a.k,
            seats: result.canonical.seats().to_vec(),
            tied: result.all_tied.iter().map(|s| s.seats().to_vec()).collect(),
            ideal: result.ideal.iter().map(rational::format).collect(),
        },
    )?;
    Ok(Verdict::Positive)
}

fn axioms(a: AxiomArgs, out: &mut dyn Write) -> Result<Verdict, Failure> {
    let instance = load(&a.file)?;
    let kind = LossKind::from(a.loss);
    let config = a.limits.config();
    let schema = instance.schema();
    let (check, holds, optima_checked, violations) = match a.check {
        Check::Nonreversal | Check::Quota => {
            let (_, table, allocations) = optimal_allocations(&instance, kind, &config)?;
            let mut violations = Vec::new();
            for alloc in &allocations {
                let committee = table.committee(alloc)?;
                let r = instance.representation(&committee)?;
                let details: Vec<String> = match a.check {
                    Check::Nonreversal => check_non_reversal(&r, instance.target())?
                        .iter()
                        .map(|v| {
                            let attr = schema.attribute(v.attribute);
                            format!(
                                "{}: `{}` has the larger target but fewer seats than `{}`",
                                attr.name(),
                                attr.values()[v.higher],
                                attr.values()[v.lower]
                            )
                        })
                        .collect(),
                    _ => check_quota(&r, instance.target(), instance.k())?
                        .iter()
                        .map(|v| {
                            let attr = schema.attribute(v.attribute);
                            format!(
                                "{}={}: {} seats outside [{}, {}]",
                                attr.name(),
                                attr.values()[v.value],
                                v.seats,
                                v.floor,
                                v.ceil
                            )
                        })
                        .collect(),
                };
                if !details.is_empty() {
                    violations.push(Finding {
                        committee: names(&instance, &committee),
                        details,
                    });
                }
            }
            let check = if matches!(a.check, Check::Quota) {
                "quota"
            } else {
                "nonreversal"
            };
            (check, violations.is_empty(), Some(allocations.len()), violations)
        }
        Check::Popmono => {
            let attr_name = a
                .attribute
                .as_deref()
                .ok_or_else(|| Failure::Usage("popmono needs --attribute".into()))?;
            let i = schema
                .attribute_index(attr_name)
                .ok_or_else(|| Failure::Usage(format!("unknown attribute `{attr_name}`")))?;
            let label = a
                .value
                .as_deref()
                .ok_or_else(|| Failure::Usage("popmono needs --value".into()))?;
            let j = schema
                .attribute(i)
                .value_index(label)
                .ok_or_else(|| Failure::Usage(format!("unknown value `{label}` of `{attr_name}`")))?;
            let rho = match (&a.share, &a.rho_file) {
                (Some(share), None) => shrink_share(instance.target(), i, j, &rational::parse(share)?)?,
                (None, Some(path)) => load(path)?.target().clone(),
                _ => {
                    return Err(Failure::Usage(
                        "popmono needs exactly one of --share and --rho-file".into(),
                    ))
                }
            };
            let outcome = population_monotonicity_probe(&instance, instance.target(), &rho, i, j, kind, &config)?;
            let violations = match outcome {
                ProbeOutcome::Holds => Vec::new(),
                ProbeOutcome::Violated(w) => vec![Finding {
                    committee: names(&instance, &w.committee),
                    details: vec![format!(
                        "{attr_name}={label}: {} seats under the original target, every optimum for the lowered target has at least {}",
                        w.seats, w.min_seats_rho
                    )],
                }],
            };
            ("popmono", violations.is_empty(), None, violations)
        }
        Check::Housemono => {
            let k = instance.k();
            let larger = a.k_larger.unwrap_or(k + 1);
            let reading = match a.reading {
                Reading::Seats => HouseReading::Seats,
                Reading::Fractions => HouseReading::Fractions,
            };
            let outcome = house_monotonicity_probe(&instance, k, larger, kind, reading, &config)?;
            let violations = match outcome {
                ProbeOutcome::Holds => Vec::new(),
                ProbeOutcome::Violated(w) => vec![Finding {
                    committee: names(&instance, &w.committee),
                    details: vec![format!(
                        "seats {:?} at k = {} are not covered by any optimum at k = {}",
                        w.seats, w.k, w.k_larger
                    )],
                }],
            };
            ("housemono", violations.is_empty(), None, violations)
        }
    };
    emit(
        out,
        &AxiomReport {
            schema_version: SCHEMA_VERSION,
            command: "axioms",
            check,
            loss_kind: kind.as_str(),
            holds,
            optima_checked,
            violations,
        },
    )?;
    Ok(if holds { Verdict::Positive } else { Verdict::Negative })
}

fn one_based(text: &str, what: &str) -> Result<usize, Failure> {
    match text.trim().parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n - 1),
        _ => Err(Failure::Usage(format!("`{text}` is not a 1-based {what}"))),
    }
}

fn need<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("gen {kind} needs --{flag}")))
}

fn generate(a: GenArgs, out: &mut dyn Write) -> Result<Verdict, Failure> {
    let instance = match a.kind.as_str() {
        "x3c" => {
            let universe = need(a.universe, "universe", "x3c")?;
            let text = need(a.sets.as_deref(), "sets", "x3c")?;
            let sets = text
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    let elems = s
                        .split(',')
                        .map(|e| one_based(e, "element"))
                        .collect::<Result<Vec<_>, _>>()?;
                    <[usize; 3]>::try_from(elems)
                        .map_err(|_| Failure::Usage(format!("set `{s}` does not have three elements")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            from_x3c(universe, &sets)?
        }
        "perfectcode" => {
            let vertices = need(a.vertices, "vertices", "perfectcode")?;
            let k = need(a.k, "k", "perfectcode")?;
            let edges = a
                .edges
                .split(',')
                .filter(|e| !e.trim().is_empty())
                .map(|e| {
                    let (u, v) = e
                        .split_once('-')
                        .ok_or_else(|| Failure::Usage(format!("edge `{e}` is not `u-v`")))?;
                    Ok((one_based(u, "vertex")?, one_based(v, "vertex")?))
                })
                .collect::<Result<Vec<_>, Failure>>()?;
            from_perfect_code(vertices, &edges, k)?
        }
        "random" => {
            let domains = need(a.domains, "domains", "random")?;
            let options = RandomOptions {
                ensure_fs: a.fs,
                natural_targets: if a.natural {
                    Some(true)
                } else if a.non_natural {
                    Some(false)
                } else {
                    None
                },
                plant_perfect: a.plant,
            };
            random_instance(
                &domains,
                need(a.m, "m", "random")?,
                need(a.k, "k", "random")?,
                a.seed,
                options,
            )?
        }
        other => {
            let name = other
                .strip_prefix("paper:")
                .ok_or_else(|| Failure::Usage(format!("unknown generator `{other}`")))?;
            let entry = catalog::get(name).ok_or_else(|| {
                Failure::Usage(format!(
                    "unknown catalog entry `{name}`; known: {}",
                    catalog::NAMES.join(", ")
                ))
            })?;
            let mut instance = entry.instance;
            if a.alternate {
                let alt = entry
                    .alternate_target
                    .ok_or_else(|| Failure::Usage(format!("`{name}` has no alternate target")))?;
                instance = instance.with_target(alt)?;
            }
            if let Some(k) = a.k {
                instance = instance.with_k(k)?;
            }
            instance
        }
    };
    out.write_all(to_json_string(&instance).as_bytes())?;
    Ok(Verdict::Positive)
}

fn transform(a: TransformArgs, out: &mut dyn Write) -> Result<Verdict, Failure> {
    let instance = load(&a.file)?;
    match &a.committee {
        None => {
            let (binary, _) = to_binary(&instance)?;
            out.write_all(to_json_string(&binary).as_bytes())?;
        }
        Some(list) => {
            let committee = committee_by_names(&instance, list)?;
            let ids = verify_transform_identities(&instance, &committee)?;
            emit(
                out,
                &TransformReport {
                    schema_version: SCHEMA_VERSION,
                    command: "transform",
                    committee: names(&instance, &committee),
                    original: LossTriple::new(&ids.original),
                    transformed: LossTriple::new(&ids.transformed),
                    l1_ratio: rational::format(&ids.l1_ratio),
                    l1max_ratio: rational::format(&ids.l1max_ratio),
                    lmax_equal: ids.max_equal,
                },
            )?;
        }
    }
    Ok(Verdict::Positive)
}
