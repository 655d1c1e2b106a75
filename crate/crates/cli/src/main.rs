//! `sse`: generate graphs, compute spectra, expansion profiles and norms, and
//! run the theorem verifiers from the command line.

mod output;
mod source;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use sse_core::expansion::{sse_profile_heuristic, sse_profile_with_budget, DEFAULT_ENUMERATION_BUDGET};
use sse_core::rounding::{round_witness, sweep_high, DEFAULT_HIGH_EXPANSION_C};
use sse_core::spectral::{pq_norm_lower, two_to_inf_norm, Exponent};
use sse_core::theorems::{
    default_pairs, main_theorem_battery, run_main_sweep, verify_duality, verify_easy_direction, verify_high_expansion,
    verify_lemma_inner_product, verify_main, verify_projector_subspace, Instance, Report, SweepConfig, VerifyConfig,
};
use sse_core::FamilySpec;

use output::{exit_code, summarize, Format, Sink};
use source::GraphSource;

#[derive(Parser)]
#[command(name = "sse", version, about = "Small-set expansion and top-eigenspace norms of regular graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format of the report.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Seed for every randomized search (and for random_regular graphs).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads; results do not depend on it.
    #[arg(long, global = true, env = "SSE_THREADS")]
    threads: Option<usize>,

    /// Write `runtime_ms` as 0 so repeated runs are byte-identical.
    #[arg(long, global = true)]
    omit_timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a family graph as an edge list.
    Gen(GenArgs),
    /// Spectrum and eigenspace projector facts.
    Analyze(AnalyzeArgs),
    /// Bounds on the p → q norm of an eigenspace projector.
    Norm(NormArgs),
    /// The expansion profile Φ(δ).
    Profile(ProfileArgs),
    /// Round a witness vector into a vertex set by a level-set sweep.
    Round(RoundArgs),
    /// Run one verifier.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Run the main-theorem verifier over the built-in family battery.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    source: GraphSource,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Eigenvalue threshold of the projector.
    #[arg(long, value_parser = parse_real)]
    lambda: f64,
}

#[derive(Args)]
struct NormArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, value_parser = parse_real)]
    lambda: f64,
    #[arg(long, value_parser = parse_exponent)]
    p: Exponent,
    #[arg(long, value_parser = parse_exponent)]
    q: Exponent,
    #[arg(long, default_value_t = 16)]
    restarts: usize,
}

#[derive(Args)]
struct ProfileArgs {
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, value_parser = parse_real)]
    delta: f64,
    /// Largest number of subset visits allowed for exact enumeration.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u128,
    /// Use the seeded local search with this many random starts instead (an upper bound).
    #[arg(long, value_name = "STARTS")]
    heuristic: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RoundMode {
    /// Normalize to unit ℓ1 mass and sweep w² with density cap 4δ.
    Witness,
    /// Sweep (Aw + w)² with density cap δ.
    High,
}

#[derive(Args)]
struct RoundArgs {
    #[command(flatten)]
    source: GraphSource,
    /// JSON array of numbers, or an object with a `witness` array (as written by `sse norm`).
    #[arg(long, value_name = "PATH")]
    witness: PathBuf,
    #[arg(long, value_parser = parse_real)]
    delta: f64,
    #[arg(long, value_parser = parse_real)]
    eps: Option<f64>,
    #[arg(long, value_enum, default_value_t = RoundMode::Witness)]
    mode: RoundMode,
    #[arg(long, default_value_t = DEFAULT_HIGH_EXPANSION_C)]
    c: f64,
}

#[derive(Args, Clone)]
struct SearchArgs {
    /// Random restarts per norm lower bound.
    #[arg(long, default_value_t = 16)]
    restarts: usize,
    /// Subset-enumeration budget for exact hypotheses.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u128,
    /// Random starts of the heuristic run before enumeration.
    #[arg(long, default_value_t = 200)]
    heuristic_budget: usize,
    /// `C` in the high-expansion hypothesis Φ(δ) > 1 − Cε².
    #[arg(long, default_value_t = DEFAULT_HIGH_EXPANSION_C)]
    c: f64,
}

impl SearchArgs {
    fn config(&self, seed: u64) -> VerifyConfig {
        VerifyConfig {
            seed,
            restarts: self.restarts,
            heuristic_budget: self.heuristic_budget,
            enumeration_budget: self.budget,
            high_c: self.c,
            ..VerifyConfig::default()
        }
    }
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Φ̄(S) ≤ ‖P_ε‖_{p→q} μ(S)^{1/p−1/q} + ε for every enumerated S.
    Easy {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_parser = parse_real)]
        eps: f64,
        #[arg(long, value_parser = parse_exponent, default_value = "2")]
        p: Exponent,
        #[arg(long, value_parser = parse_exponent, default_value = "inf")]
        q: Exponent,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Φ(4δ) ≥ 2√ε implies ‖P_{1−ε}‖_{p→q} < 1/√δ.
    Main {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_parser = parse_real)]
        delta: f64,
        #[arg(long, value_parser = parse_real)]
        eps: f64,
        /// Comma-separated `p:q` pairs, e.g. `2:4,2:inf`.
        #[arg(long, value_parser = parse_pairs, default_value = "2:4,2:inf")]
        pairs: Pairs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Φ(δ) > 1 − Cε² implies ‖P_{√ε}‖_{p→q} < 1/√δ.
    High {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_parser = parse_real)]
        delta: f64,
        #[arg(long, value_parser = parse_real)]
        eps: f64,
        #[arg(long, value_parser = parse_pairs, default_value = "2:4,2:inf")]
        pairs: Pairs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// ‖M‖_{p→q} = ‖Mᵀ‖_{q*→p*} for the projector P_λ (or the walk operator without --lambda).
    Duality {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_parser = parse_real)]
        lambda: Option<f64>,
        #[arg(long, value_parser = parse_exponent)]
        p: Exponent,
        #[arg(long, value_parser = parse_exponent)]
        q: Exponent,
        #[arg(long, default_value_t = 200)]
        restarts: usize,
    },
    /// The inner-product and projector-versus-subspace lemmas at threshold λ.
    Lemmas {
        #[command(flatten)]
        source: GraphSource,
        #[arg(long, value_parser = parse_real)]
        lambda: f64,
        #[arg(long, value_parser = parse_exponent, default_value = "2")]
        p: Exponent,
        #[arg(long, value_parser = parse_exponent, default_value = "inf")]
        q: Exponent,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 16)]
        restarts: usize,
    },
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep this graph only instead of the built-in battery.
    #[command(flatten)]
    source: GraphSource,
    #[arg(long, value_parser = parse_real, value_delimiter = ',', default_value = "1/32,1/16,1/8")]
    deltas: Vec<f64>,
    #[arg(long, value_parser = parse_real, value_delimiter = ',', default_value = "0.05,0.1,0.2")]
    epsilons: Vec<f64>,
    /// Pairs with 2 ≤ p < q go to the main verifier; any other pair is a duality check on P_{1−ε}.
    #[arg(long, value_parser = parse_pairs)]
    pairs: Option<Pairs>,
    #[command(flatten)]
    search: SearchArgs,
}

type Pairs = Vec<(Exponent, Exponent)>;

fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let x = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
            let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
            a / b
        }
        None => s.parse().map_err(|e| format!("{e}"))?,
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{s}` is not a finite number"))
    }
}

fn parse_exponent(s: &str) -> Result<Exponent, String> {
    s.parse().map_err(|e: sse_core::Error| e.to_string())
}

fn parse_pairs(s: &str) -> Result<Pairs, String> {
    s.split(',')
        .map(|pair| {
            let (p, q) = pair.split_once(':').ok_or_else(|| format!("`{pair}` is not of the form p:q"))?;
            Ok((parse_exponent(p)?, parse_exponent(q)?))
        })
        .collect()
}

fn read_witness(path: &PathBuf) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let array = match &value {
        Value::Array(_) => &value,
        Value::Object(map) => map.get("witness").context("witness object has no `witness` field")?,
        _ => bail!("witness must be a JSON array or an object with a `witness` array"),
    };
    serde_json::from_value(array.clone()).context("witness entries must be numbers")
}

#[derive(Serialize)]
struct Analysis<'a> {
    graph: &'a str,
    n: usize,
    d: usize,
    eigenvalues: &'a [f64],
    lambda: f64,
    dimension: usize,
    max_diagonal: f64,
    two_to_inf: f64,
}

macro_rules! say {
    ($sink:expr, $($arg:tt)*) => {
        $sink.say(format_args!("{}\n", format_args!($($arg)*)))
    };
}

fn run(cli: Cli) -> Result<i32> {
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().context("configuring worker threads")?;
    }
    let sink = Sink { format: cli.format, out: cli.out.clone(), omit_timing: cli.omit_timing };
    let seed = cli.seed;
    match cli.command {
        Command::Gen(a) => {
            let (label, g) = a.source.load(seed)?;
            let text = g.write_edge_list();
            say!(sink, "{label}: n = {}, d = {}, edges = {}", g.n(), g.d(), g.m());
            sink.write(text)?;
            Ok(0)
        }
        Command::Analyze(a) => {
            let inst = a.source.instance(seed)?;
            let proj = inst.projector(a.lambda);
            let max_diagonal = proj.diagonal().into_iter().fold(0.0, f64::max);
            let report = Analysis {
                graph: &inst.label,
                n: inst.graph.n(),
                d: inst.graph.d(),
                eigenvalues: &inst.spectrum.eigenvalues,
                lambda: a.lambda,
                dimension: proj.dimension(),
                max_diagonal,
                two_to_inf: two_to_inf_norm(&proj),
            };
            say!(sink, "{}: n = {}, d = {}", report.graph, report.n, report.d);
            say!(sink, "  lambda        {}", report.lambda);
            say!(sink, "  dim(V_lambda) {}", report.dimension);
            say!(sink, "  max_diagonal  {}", report.max_diagonal);
            say!(sink, "  two_to_inf    {}", report.two_to_inf);
            sink.emit(&report)?;
            Ok(0)
        }
        Command::Norm(a) => {
            let inst = a.source.instance(seed)?;
            let proj = inst.projector(a.lambda);
            let est = pq_norm_lower(&proj, a.p, a.q, a.restarts, seed)?.with_upper(&proj);
            say!(sink, "{} lambda = {}: ||P||_{{{} -> {}}}", inst.label, a.lambda, a.p, a.q);
            say!(sink, "  lower         {} ({})", est.lower, est.lower_method);
            match (est.upper, &est.upper_method) {
                (Some(u), Some(m)) => say!(sink, "  upper         {u} ({m})"),
                _ => say!(sink, "  upper         -"),
            }
            sink.emit(&est)?;
            Ok(0)
        }
        Command::Profile(a) => {
            let (label, g) = a.source.load(seed)?;
            let prof = match a.heuristic {
                Some(starts) => sse_profile_heuristic(&g, a.delta, starts, seed)?,
                None => sse_profile_with_budget(&g, a.delta, a.budget)?,
            };
            say!(sink, "{label}: Phi({}) = {} via {}", a.delta, prof.value, prof.witness);
            say!(sink, "  sets_examined {}", prof.sets_examined);
            sink.emit(&prof)?;
            Ok(0)
        }
        Command::Round(a) => {
            let (label, g) = a.source.load(seed)?;
            let w = read_witness(&a.witness)?;
            let result = match a.mode {
                RoundMode::Witness => {
                    let eps = a.eps.context("--eps is required with --mode witness")?;
                    round_witness(&g, &w, a.delta, eps)?
                }
                RoundMode::High => sweep_high(&g, &w, a.delta, a.c)?,
            };
            match (&result.set, result.phi, result.mu) {
                (Some(set), Some(phi), Some(mu)) => {
                    say!(sink, "{label}: S = {set}, Phi = {phi}, mu = {mu}");
                }
                _ => say!(sink, "{label}: no level set within the density cap"),
            }
            say!(sink, "  bound         {}", result.bound);
            if let (Some(t), Some(c)) = (result.target, result.certified) {
                say!(sink, "  target        {t} (certified: {c})");
            }
            sink.emit(&result)?;
            Ok(0)
        }
        Command::Verify(v) => {
            let reports = verify(v, seed)?;
            finish(&sink, &reports)
        }
        Command::Sweep(a) => {
            let reports = sweep(a, seed)?;
            let count = |v: sse_core::theorems::Verdict| reports.iter().filter(|r| r.verdict == v).count();
            use sse_core::theorems::Verdict::*;
            say!(sink, 
                "{} reports: {} holds, {} hypothesis_not_satisfied, {} inconclusive, {} violated",
                reports.len(),
                count(Holds),
                count(HypothesisNotSatisfied),
                count(Inconclusive),
                count(Violated)
            );
            for r in reports.iter().filter(|r| matches!(r.verdict, Violated | Inconclusive)) {
                sink.say(format_args!("{}", summarize(r)));
            }
            sink.emit_reports(&reports)?;
            Ok(exit_code(&reports))
        }
    }
}

fn finish(sink: &Sink, reports: &[Report]) -> Result<i32> {
    for r in reports {
        sink.say(format_args!("{}", summarize(r)));
    }
    sink.emit_reports(reports)?;
    Ok(exit_code(reports))
}

fn verify(cmd: VerifyCommand, seed: u64) -> Result<Vec<Report>> {
    Ok(match cmd {
        VerifyCommand::Easy { source, eps, p, q, search } => {
            vec![verify_easy_direction(&source.instance(seed)?, eps, p, q, &search.config(seed))?]
        }
        VerifyCommand::Main { source, delta, eps, pairs, search } => {
            vec![verify_main(&source.instance(seed)?, delta, eps, &pairs, &search.config(seed))?]
        }
        VerifyCommand::High { source, delta, eps, pairs, search } => {
            vec![verify_high_expansion(&source.instance(seed)?, delta, eps, &pairs, &search.config(seed))?]
        }
        VerifyCommand::Duality { source, lambda, p, q, restarts } => {
            let inst = source.instance(seed)?;
            let m = match lambda {
                Some(l) => inst.projector(l).matrix().clone(),
                None => inst.adjacency.matrix().clone(),
            };
            let mut r = verify_duality(&m, p, q, restarts, seed)?;
            r.inputs.graph = Some(inst.label.clone());
            r.inputs.lambda = lambda;
            vec![r]
        }
        VerifyCommand::Lemmas { source, lambda, p, q, trials, restarts } => {
            let inst = source.instance(seed)?;
            vec![
                verify_lemma_inner_product(&inst, lambda, trials, seed)?,
                verify_projector_subspace(&inst, lambda, p, q, trials, seed, restarts)?,
            ]
        }
    })
}

fn sweep(a: SweepArgs, seed: u64) -> Result<Vec<Report>> {
    let pairs = a.pairs.unwrap_or_else(default_pairs);
    let (main_pairs, dual_pairs): (Pairs, Pairs) =
        pairs.into_iter().partition(|&(p, q)| p.value() >= 2.0 && p < q);
    let specs: Vec<FamilySpec> = if a.source.is_given() {
        if a.source.graph.is_some() {
            bail!("sweep takes --family only; use `verify main` for an edge-list file");
        }
        vec![a.source.spec(seed)?]
    } else {
        main_theorem_battery()
    };
    let verify = a.search.config(seed);
    let mut reports = Vec::new();
    if !main_pairs.is_empty() {
        let cfg = SweepConfig { deltas: a.deltas.clone(), epsilons: a.epsilons.clone(), pairs: main_pairs, verify: verify.clone() };
        reports = run_main_sweep(&specs, &cfg)?;
    }
    for spec in &specs {
        if dual_pairs.is_empty() {
            break;
        }
        let inst = Instance::from_spec(spec)?;
        for &eps in &a.epsilons {
            let proj = inst.projector(1.0 - eps);
            for &(p, q) in &dual_pairs {
                let mut r = verify_duality(proj.matrix(), p, q, verify.restarts, seed)?;
                r.inputs.graph = Some(inst.label.clone());
                r.inputs.epsilon = Some(eps);
                r.inputs.lambda = Some(1.0 - eps);
                reports.push(r);
            }
        }
    }
    Ok(reports)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
