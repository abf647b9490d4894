use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use matchtor_core::certificates::{
    bd_table_cells, build_gamma, build_gamma_prime, feasible_bd_cells, reproduce_bd_tables, reproduce_table1,
    verify_corollary_les, verify_eq1_splitting, verify_gamma_lift, verify_gamma_prime, verify_mod_p_pattern,
    verify_pair_les, verify_splitting, verify_vanishing, CertificateReport, Status,
};
use matchtor_core::graph::write_faces;
use matchtor_core::homology::{
    betti_mod_p, class_order, homology_free, homology_in_degree, homology_presented, Coefficients, DegreeHomology,
    HomologyOptions, HomologySummary,
};
use matchtor_core::young::{orbit_decompose, quotient_complex, OrbitCounts, YoungAction};
use matchtor_core::{Blocks, ChainVector, ComplexSpec, CoreError, DegreeVector, FaceTable, FreeChainComplex};
use matchtor_linalg::{AbelianGroupDescriptor, Limits};
use serde::Serialize;
use serde_json::{json, Value};

const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Core(CoreError::InvalidInput(_) | CoreError::ParallelEdge(_)) => 2,
            CliError::Core(CoreError::ResourceLimit(_)) => 3,
            _ => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

#[derive(Parser)]
#[command(name = "matchtor", version, about = "Homology of matching complexes and bounded-degree graph complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunOptions,
}

#[derive(Args)]
struct RunOptions {
    /// Abort exact elimination once a matrix holds more nonzero entries.
    #[arg(long, global = true, value_name = "K", value_parser = clap::value_parser!(u64).range(1..))]
    max_entries: Option<u64>,
    /// Abort exact elimination after this many minutes.
    #[arg(long, global = true, value_name = "M")]
    max_minutes: Option<f64>,
    /// Worker threads (computations are deterministic for any value).
    #[arg(long, global = true, value_name = "T", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,
    /// Write the machine-readable JSON document here.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Primes for modular passes, comma separated.
    #[arg(long, global = true, value_delimiter = ',', value_name = "P,...")]
    primes: Vec<u64>,
    /// Record elapsed times in the machine document.
    #[arg(long, global = true)]
    timings: bool,
}

impl RunOptions {
    fn homology_options(&self) -> CliResult<HomologyOptions> {
        let deadline = match self.max_minutes {
            Some(m) if !(m > 0.0 && m.is_finite()) => return usage("--max-minutes must be positive"),
            Some(m) => Some(Instant::now() + Duration::from_secs_f64(m * 60.0)),
            None => None,
        };
        Ok(HomologyOptions {
            limits: Limits {
                max_entries: self.max_entries.map(|k| k as usize),
                deadline,
            },
            check_primes: self.primes.clone(),
        })
    }
}

#[derive(Args, Clone, Default)]
struct ComplexArgs {
    /// Matching complex on N vertices (with --lambda: its quotient by a Young group).
    #[arg(long, value_name = "N")]
    matching: Option<usize>,
    /// Bounded-degree complex on n vertices, degrees from --lambda.
    #[arg(long, value_name = "n")]
    bounded: Option<usize>,
    /// Matching complex on N vertices without the edge (N-1)-N.
    #[arg(long, value_name = "N")]
    minus_edge: Option<usize>,
    /// Matchings injective under block contraction (needs --blocks or --lambda).
    #[arg(long)]
    gamma: bool,
    /// Matchings with a parallel pair, relative (needs --blocks or --lambda).
    #[arg(long)]
    delta: bool,
    /// Degree vector or block sizes, e.g. 2^6,1^2.
    #[arg(long, value_name = "SPEC")]
    lambda: Option<String>,
    /// Blocks: "interleaved" or explicit lists such as 1,8/2,9.
    #[arg(long, value_name = "SPEC")]
    blocks: Option<String>,
}

enum Target {
    Free(ComplexSpec),
    Quotient(Blocks),
}

impl ComplexArgs {
    fn lambda(&self) -> CliResult<Option<DegreeVector>> {
        self.lambda.as_deref().map(DegreeVector::from_str).transpose().map_err(CliError::from)
    }

    fn blocks(&self) -> CliResult<Blocks> {
        let lambda = self.lambda()?;
        let need = || CliError::Usage("--lambda is required".into());
        Ok(match self.blocks.as_deref() {
            Some("interleaved") => Blocks::interleaved(&lambda.ok_or_else(need)?)?,
            Some(s) => s.parse()?,
            None => Blocks::consecutive(&lambda.ok_or_else(need)?)?,
        })
    }

    fn target(&self) -> CliResult<Target> {
        let chosen = [self.matching.is_some(), self.bounded.is_some(), self.minus_edge.is_some(), self.gamma, self.delta]
            .iter()
            .filter(|x| **x)
            .count();
        if chosen != 1 {
            return usage("choose exactly one of --matching, --bounded, --minus-edge, --gamma, --delta");
        }
        let spec = if let Some(n) = self.matching {
            if self.lambda.is_some() || self.blocks.is_some() {
                let blocks = self.blocks()?;
                if blocks.total() != n {
                    return usage(format!("blocks cover {} vertices, not {n}", blocks.total()));
                }
                return Ok(Target::Quotient(blocks));
            }
            ComplexSpec::Matching(n)
        } else if let Some(n) = self.bounded {
            let lambda = self.lambda()?.ok_or_else(|| CliError::Usage("--bounded needs --lambda".into()))?;
            if lambda.n() != n {
                return usage(format!("lambda {lambda} has {} entries, not {n}", lambda.n()));
            }
            ComplexSpec::Bounded(lambda)
        } else if let Some(n) = self.minus_edge {
            ComplexSpec::MatchingMinusEdge(n)
        } else if self.gamma {
            ComplexSpec::Gamma(self.blocks()?)
        } else {
            ComplexSpec::Delta(self.blocks()?)
        };
        spec.validate()?;
        Ok(Target::Free(spec))
    }

    fn free_spec(&self) -> CliResult<ComplexSpec> {
        match self.target()? {
            Target::Free(s) => Ok(s),
            Target::Quotient(_) => usage("this command takes a complex, not a quotient"),
        }
    }

    fn quotient(&self) -> CliResult<(usize, DegreeVector)> {
        match (self.matching, self.lambda()?) {
            (Some(n), Some(l)) if self.blocks.is_none() => {
                if l.total() != n {
                    return usage(format!("lambda {l} does not sum to {n}"));
                }
                Ok((n, l))
            }
            _ => usage("expected --matching N --lambda SPEC"),
        }
    }
}

/// `a..b`, `a..=b` (both inclusive) or a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct NRange {
    lo: usize,
    hi: usize,
}

impl FromStr for NRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| format!("bad range {s:?}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
            None => (num(s)?, num(s)?),
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(NRange { lo, hi })
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the faces of a complex.
    Build {
        #[command(flatten)]
        complex: ComplexArgs,
        /// Print only this dimension, one face per line.
        #[arg(long, value_name = "d", allow_negative_numbers = true)]
        dim: Option<isize>,
    },
    /// Orbit counts of a Young-group action on a matching complex.
    Quotient {
        #[command(flatten)]
        complex: ComplexArgs,
        /// Also list the orbits in this degree.
        #[arg(long, value_name = "d", allow_negative_numbers = true)]
        dim: Option<isize>,
    },
    /// Reduced homology of a complex or quotient.
    Homology {
        #[command(flatten)]
        complex: ComplexArgs,
        /// Coefficients in the field with p elements.
        #[arg(long = "mod", value_name = "p")]
        modulus: Option<u64>,
        /// Only this degree.
        #[arg(long, value_name = "d", allow_negative_numbers = true)]
        dim: Option<isize>,
    },
    /// Run a named certificate.
    Verify {
        #[command(subcommand)]
        check: Check,
    },
    /// Chain files for the built-in cycles, and class orders of chain files.
    Report {
        #[command(subcommand)]
        what: ReportCommand,
    },
}

#[derive(Subcommand)]
enum Check {
    /// The order-five cycle on bounded(7;2^7).
    GammaPrime,
    /// Its lift to matching(14).
    GammaLift,
    /// Tabulated homology of matching(n).
    #[command(alias = "table1")]
    MatchingTable {
        #[arg(long, default_value = "3..10")]
        n: NRange,
    },
    /// H~_d(M_n) = H~_d(M_n \ e) + H~_(d-1)(M_(n-2)).
    #[command(alias = "eq1")]
    EdgeSplitting {
        #[arg(long, default_value = "3..9")]
        n: NRange,
        #[arg(long, value_name = "d")]
        dim: Option<isize>,
    },
    /// Exactness of the pair sequence for (M_n, M_n \ e).
    PairLes {
        #[arg(long, default_value = "3..9")]
        n: NRange,
        #[arg(long, value_name = "d", allow_negative_numbers = true)]
        dim: Option<isize>,
    },
    /// Exactness of the sequence of C^G -> C -> C/G.
    CorollaryLes {
        #[command(flatten)]
        complex: ComplexArgs,
        #[arg(long, value_name = "d", allow_negative_numbers = true)]
        dim: Option<isize>,
    },
    /// Gamma/delta splitting of a quotient.
    Splitting {
        #[command(flatten)]
        complex: ComplexArgs,
    },
    /// Tabulated torsion of bounded-degree complexes.
    BdTables {
        /// Include cells beyond the default work budget.
        #[arg(long)]
        all: bool,
    },
    /// Homology of matching(n) vanishes outside the expected degrees.
    Vanishing {
        #[arg(long, default_value = "3..10")]
        n: NRange,
    },
    /// Mod-p Betti numbers fit a single torsion group in one degree.
    ModP {
        #[command(flatten)]
        complex: ComplexArgs,
        #[arg(long, value_name = "d")]
        dim: isize,
        #[arg(long, value_name = "GROUP")]
        torsion: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum BuiltinChain {
    GammaPrime,
    Gamma,
}

#[derive(Subcommand)]
enum ReportCommand {
    /// Print a built-in cycle as a chain file.
    Chain {
        #[arg(value_enum)]
        which: BuiltinChain,
    },
    /// Cycle status and class order of a chain file.
    Class {
        #[arg(long, value_name = "FILE")]
        chain: PathBuf,
        #[command(flatten)]
        complex: ComplexArgs,
    },
}

struct Outcome {
    command: &'static str,
    status: &'static str,
    code: u8,
    text: String,
    result: Value,
}

impl Outcome {
    fn ok(command: &'static str, text: String, result: Value) -> Self {
        Outcome {
            command,
            status: "ok",
            code: 0,
            text,
            result,
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn build(complex: &ComplexArgs, dim: Option<isize>) -> CliResult<Outcome> {
    let spec = complex.free_spec()?;
    let table = FaceTable::build(&spec)?;
    let mut text = Vec::new();
    let mut result = json!({ "complex": spec.id(), "face_counts": table.counts() });
    match dim {
        Some(d) => {
            let faces: Vec<String> = table.faces(d).iter().map(ToString::to_string).collect();
            for f in &faces {
                writeln!(text, "{f}")?;
            }
            result["dim"] = json!(d);
            result["faces"] = json!(faces);
        }
        None => {
            let dims: Vec<isize> = (-1..=table.top_dim()).collect();
            write_faces(&table, &dims, &mut text)?;
        }
    }
    Ok(Outcome::ok("build", String::from_utf8(text).expect("utf-8"), result))
}

fn counts_text(counts: &[OrbitCounts]) -> String {
    let mut s = String::from("degree  free  order_two  gamma  delta\n");
    for c in counts {
        s += &format!("{:>6}  {:>4}  {:>9}  {:>5}  {:>5}\n", c.degree, c.free, c.order_two, c.gamma, c.delta);
    }
    s
}

fn quotient(complex: &ComplexArgs, dim: Option<isize>) -> CliResult<Outcome> {
    let Target::Quotient(blocks) = complex.target()? else {
        return usage("quotient needs --matching N with --lambda or --blocks");
    };
    let spec = ComplexSpec::Matching(blocks.total());
    let c = FreeChainComplex::build(&spec)?;
    let action = YoungAction::new(blocks.clone());
    let q = quotient_complex(&c, &action)?;
    let counts = q.summary();
    let mut text = format!("quotient of {} by the Young group of {}\n", spec.id(), blocks);
    text += &counts_text(&counts);
    let mut result = json!({
        "complex": spec.id(),
        "blocks": blocks.to_string(),
        "group_order": action.group_order().to_string(),
        "orbit_counts": to_value(&counts),
    });
    if let Some(d) = dim {
        let orbits = orbit_decompose(&c, &action, d)?;
        let rows: Vec<Value> = orbits
            .iter()
            .map(|o| {
                json!({
                    "representative": o.representative.to_string(),
                    "kind": to_value(&o.kind),
                    "part": to_value(&o.part),
                    "size": o.size,
                })
            })
            .collect();
        for o in &orbits {
            text += &format!("{}\t{:?}\t{:?}\t{}\n", o.representative, o.kind, o.part, o.size);
        }
        result["dim"] = json!(d);
        result["orbits"] = json!(rows);
    }
    Ok(Outcome::ok("quotient", text, result))
}

fn restrict(h: HomologySummary, dim: Option<isize>) -> HomologySummary {
    match dim {
        Some(d) => HomologySummary {
            degrees: vec![DegreeHomology {
                degree: d,
                group: h.group(d),
            }],
            ..h
        },
        None => h,
    }
}

fn homology(complex: &ComplexArgs, modulus: Option<u64>, dim: Option<isize>, run: &RunOptions) -> CliResult<Outcome> {
    let opts = run.homology_options()?;
    let summary = match complex.target()? {
        Target::Quotient(blocks) => {
            if modulus.is_some() {
                return usage("--mod is not supported for quotients");
            }
            let spec = ComplexSpec::Matching(blocks.total());
            let c = FreeChainComplex::build(&spec)?;
            let q = quotient_complex(&c, &YoungAction::new(blocks.clone()))?;
            restrict(homology_presented(&q, &format!("{}/S({blocks})", spec.id()), &opts)?, dim)
        }
        Target::Free(spec) => {
            let c = FreeChainComplex::build(&spec)?;
            let computed = match (modulus, dim) {
                (Some(p), _) => betti_mod_p(&c, p, &opts).map(|h| restrict(h, dim)),
                (None, Some(d)) => {
                    let start = Instant::now();
                    homology_in_degree(&c, d, &opts).map(|group| HomologySummary {
                        complex: spec.id(),
                        coefficients: Coefficients::Integers,
                        degrees: vec![DegreeHomology { degree: d, group }],
                        elapsed: start.elapsed(),
                    })
                }
                (None, None) => homology_free(&c, &opts),
            };
            match computed {
                Err(CoreError::ResourceLimit(m)) if modulus.is_none() => return partial_homology(&c, &m, run, dim),
                other => other?,
            }
        }
    };
    let mut out = Outcome::ok("homology", summary.to_string(), to_value(&summary));
    if run.timings {
        out.result["elapsed_seconds"] = json!(summary.elapsed.as_secs_f64());
    }
    Ok(out)
}

/// Exact elimination hit a cap: report field ranks instead, never as a
/// verified result.
fn partial_homology(c: &FreeChainComplex, reason: &str, run: &RunOptions, dim: Option<isize>) -> CliResult<Outcome> {
    let primes = if run.primes.is_empty() { vec![2] } else { run.primes.clone() };
    let opts = HomologyOptions {
        limits: Limits {
            max_entries: run.max_entries.map(|k| k as usize),
            deadline: None,
        },
        check_primes: Vec::new(),
    };
    let mut text = format!("exact computation aborted ({reason}); partial mod-p results:\n");
    let mut partial = Vec::new();
    for p in primes {
        match betti_mod_p(c, p, &opts) {
            Ok(h) => {
                let h = restrict(h, dim);
                text += &h.to_string();
                partial.push(to_value(&h));
            }
            Err(e) => text += &format!("  F{p}: {e}\n"),
        }
    }
    Ok(Outcome {
        command: "homology",
        status: "resource_limit",
        code: 3,
        text,
        result: json!({ "complex": c.spec().id(), "reason": reason, "partial_mod_p": partial }),
    })
}

fn range_reports(n: NRange, f: impl Fn(usize) -> CertificateReport) -> Vec<CertificateReport> {
    (n.lo..=n.hi).map(f).collect()
}

fn verify(check: &Check, run: &RunOptions) -> CliResult<Outcome> {
    let opts = run.homology_options()?;
    let reports: Vec<CertificateReport> = match check {
        Check::GammaPrime => vec![verify_gamma_prime(&opts)],
        Check::GammaLift => vec![verify_gamma_lift()],
        Check::MatchingTable { n } => vec![reproduce_table1(n.lo, n.hi, &opts)],
        Check::EdgeSplitting { n, dim } => range_reports(*n, |k| verify_eq1_splitting(k, *dim, &opts)),
        Check::PairLes { n, dim } => {
            let mut out = Vec::new();
            for k in n.lo..=n.hi {
                match dim {
                    Some(d) => out.push(verify_pair_les(k, *d, &opts)),
                    None => {
                        let top = (k / 2) as isize - 1;
                        out.extend((0..=top + 1).map(|d| verify_pair_les(k, d, &opts)));
                    }
                }
            }
            out
        }
        Check::CorollaryLes { complex, dim } => {
            let (n, lambda) = complex.quotient()?;
            match dim {
                Some(d) => vec![verify_corollary_les(n, &lambda, *d, &opts)],
                None => {
                    let top = (n / 2) as isize - 1;
                    (-1..=top + 1).map(|d| verify_corollary_les(n, &lambda, d, &opts)).collect()
                }
            }
        }
        Check::Splitting { complex } => {
            let (n, lambda) = complex.quotient()?;
            vec![verify_splitting(n, &lambda, &opts)]
        }
        Check::BdTables { all } => {
            let cells = if *all { bd_table_cells() } else { feasible_bd_cells() };
            vec![reproduce_bd_tables(&cells, &opts)]
        }
        Check::Vanishing { n } => vec![verify_vanishing(n.lo, n.hi, &opts)],
        Check::ModP { complex, dim, torsion } => {
            let spec = complex.free_spec()?;
            let torsion: AbelianGroupDescriptor = torsion
                .parse()
                .map_err(|e| CliError::Usage(format!("bad group {torsion:?}: {e}")))?;
            let primes = if run.primes.is_empty() { vec![2, 3, 5] } else { run.primes.clone() };
            let opts = HomologyOptions {
                check_primes: Vec::new(),
                ..opts
            };
            vec![verify_mod_p_pattern(&spec, *dim, &torsion, &primes, &opts)]
        }
    };
    let failed = reports.iter().any(|r| r.status == Status::Fail);
    let skipped = reports.iter().any(|r| r.status == Status::Skipped);
    let (status, code) = if failed {
        ("fail", 1)
    } else if skipped {
        ("skipped", 3)
    } else {
        ("ok", 0)
    };
    let text: String = reports.iter().map(ToString::to_string).collect();
    let mut result = json!({ "reports": to_value(&reports) });
    if run.timings {
        result["elapsed_seconds"] = json!(reports.iter().map(|r| r.elapsed.as_secs_f64()).collect::<Vec<_>>());
    }
    Ok(Outcome {
        command: "verify",
        status,
        code,
        text,
        result,
    })
}

fn report(what: &ReportCommand, run: &RunOptions) -> CliResult<Outcome> {
    match what {
        ReportCommand::Chain { which } => {
            let (name, c) = match which {
                BuiltinChain::GammaPrime => ("gamma-prime", build_gamma_prime()),
                BuiltinChain::Gamma => ("gamma", build_gamma()),
            };
            let text = c.to_string();
            Ok(Outcome::ok("report", text.clone(), json!({ "chain": name, "terms": c.len(), "file": text })))
        }
        ReportCommand::Class { chain, complex } => {
            let spec = complex.free_spec()?;
            let z: ChainVector = fs::read_to_string(chain)?.parse()?;
            let c = FreeChainComplex::build(&spec)?;
            c.chain_to_dense(&z)?;
            let cycle = c.chain_boundary(&z).is_zero();
            let mut text = format!("chain of degree {} with {} terms in {}\ncycle: {cycle}\n", z.degree(), z.len(), spec.id());
            let mut result = json!({ "complex": spec.id(), "degree": z.degree(), "terms": z.len(), "cycle": cycle });
            if !cycle {
                return Ok(Outcome {
                    command: "report",
                    status: "fail",
                    code: 1,
                    text,
                    result,
                });
            }
            let order = class_order(&z, &c, &run.homology_options()?)?;
            let order = order.map_or_else(|| "infinite".to_string(), |o| o.to_string());
            text += &format!("order: {order}\n");
            result["order"] = json!(order);
            Ok(Outcome::ok("report", text, result))
        }
    }
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Build { complex, dim } => build(complex, *dim),
        Command::Quotient { complex, dim } => quotient(complex, *dim),
        Command::Homology { complex, modulus, dim } => homology(complex, *modulus, *dim, &cli.run),
        Command::Verify { check } => verify(check, &cli.run),
        Command::Report { what } => report(what, &cli.run),
    }
}

fn document(outcome: &Outcome) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool": "matchtor",
        "command": outcome.command,
        "status": outcome.status,
        "result": outcome.result,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            if code != 3 {
                return ExitCode::from(code);
            }
            Outcome {
                command: "error",
                status: "resource_limit",
                code,
                text: String::new(),
                result: json!({ "reason": e.to_string() }),
            }
        }
    };
    print!("{}", outcome.text);
    if let Some(path) = &cli.run.out {
        let mut body = serde_json::to_string_pretty(&document(&outcome)).expect("serializable");
        body.push('\n');
        if let Err(e) = fs::write(path, body) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    ExitCode::from(outcome.code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!("3..10".parse::<NRange>().unwrap(), NRange { lo: 3, hi: 10 });
        assert_eq!("3..=10".parse::<NRange>().unwrap(), NRange { lo: 3, hi: 10 });
        assert_eq!("7".parse::<NRange>().unwrap(), NRange { lo: 7, hi: 7 });
        assert!("9..3".parse::<NRange>().is_err());
        assert!("x".parse::<NRange>().is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
