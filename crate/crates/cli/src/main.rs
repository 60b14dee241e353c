//! `inthull`: integer hulls, bound reports, instance families and censuses.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use inthull::arith::{Int, Rat, Real};
use inthull::bounds::phi_delta_lower_bound;
use inthull::census::{
    bound_report, mean_congruence_vertex_count, mean_knapsack_vertex_count, psi_phi_comparison, render_records,
    Census, CensusError, Format, ReportOptions,
};
use inthull::checks::Suite;
use inthull::families::{
    ensemble_instances, morgan_family, power_of_two_knapsack, rubin_instance, vs_extremal_instance, EnsembleInstance,
    EnsembleKind, EnsembleMode, EnsembleSpec, RubinVariant,
};
use inthull::hull::{instance_hull, DEFAULT_CAP};
use inthull::model::Instance;

mod error;

use error::CliError;

#[derive(Parser)]
#[command(name = "inthull", version, about = "Exact integer hulls and vertex-count bounds")]
struct Cli {
    /// Worker threads for parallel steps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Caps {
    /// Limit on lattice columns scanned by the hull engine.
    #[arg(long, default_value_t = DEFAULT_CAP, value_parser = positive_usize)]
    point_cap: usize,
}

#[derive(Args)]
struct Io {
    /// Instance JSON file; `-` or absent reads standard input.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Vertices of the integer hull of one instance.
    Hull {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        caps: Caps,
    },
    /// Every applicable vertex-count bound, checked against the exact count.
    Bounds {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        caps: Caps,
    },
    /// Emit instances of a named family as JSON, one per line.
    Family(FamilyArgs),
    /// Mean vertex counts over an ensemble.
    Census(CensusArgs),
    /// Run the acceptance checks.
    Verify {
        /// Only run checks whose name starts with this prefix.
        #[arg(long)]
        check: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    Rubin,
    Vs,
    Pow2,
    Morgan,
    CongruenceEnsemble,
    KnapsackEnsemble,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(value_enum)]
    family: FamilyName,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    nu: Option<Int>,
    #[arg(long)]
    delta: Option<u64>,
    #[arg(long)]
    gamma: Option<u64>,
    /// Rubin formula reading: as-printed or index-swapped.
    #[arg(long, default_value = "index-swapped")]
    variant: RubinVariant,
    /// Bits of precision for the Morgan coefficients.
    #[arg(long, default_value_t = 64, value_parser = precision_bits)]
    precision: u32,
    /// Skip ensemble instances with right-hand side above this value.
    #[arg(long)]
    a0_max: Option<Int>,
    #[command(flatten)]
    sampling: Sampling,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Sampling {
    /// Draw this many ensemble instances instead of enumerating all.
    #[arg(long, value_parser = positive_u64)]
    sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CensusKind {
    Congruence,
    Knapsack,
    /// Both means on the matching ensembles, with their difference.
    PsiPhi,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct CensusArgs {
    #[arg(value_enum)]
    kind: CensusKind,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long)]
    delta: Option<u64>,
    #[arg(long)]
    gamma: Option<u64>,
    #[command(flatten)]
    sampling: Sampling,
    #[command(flatten)]
    caps: Caps,
    /// Bits of precision behind the decimal means in the summary line.
    #[arg(long, default_value_t = 128, value_parser = precision_bits)]
    precision: u32,
    /// Write per-instance records here.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn positive_u64(s: &str) -> Result<u64, String> {
    positive_usize(s).map(|v| v as u64)
}

fn precision_bits(s: &str) -> Result<u32, String> {
    match s.parse::<u32>() {
        Ok(p) if p >= 64 => Ok(p),
        Ok(_) => Err("precision must be at least 64 bits".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn read_instance(path: Option<&Path>) -> Result<Instance, CliError> {
    let text = match path {
        None => read_stdin()?,
        Some(p) if p.as_os_str() == "-" => read_stdin()?,
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?,
    };
    Instance::from_json(&text).map_err(|e| CliError::Input(e.to_string()))
}

fn read_stdin() -> Result<String, CliError> {
    let mut s = String::new();
    std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
    Ok(s)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_hull(io: &Io, caps: &Caps) -> Result<(), CliError> {
    let inst = read_instance(io.input.as_deref())?;
    let hull = instance_hull(&inst, caps.point_cap)?;
    emit(&pretty(&hull), io.output.as_deref())
}

fn cmd_bounds(io: &Io, caps: &Caps) -> Result<(), CliError> {
    let inst = read_instance(io.input.as_deref())?;
    let report = bound_report(&inst, &ReportOptions { cap: caps.point_cap })?;
    emit(&pretty(&report), io.output.as_deref())?;
    let violations: Vec<String> = report.violations().map(|b| b.bound.name.clone()).collect();
    if violations.is_empty() && report.mcmullen_holds != Some(false) {
        Ok(())
    } else {
        let mut names = violations;
        if report.mcmullen_holds == Some(false) {
            names.push("mcmullen".into());
        }
        Err(CliError::Violation(names.join(", ")))
    }
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("family {family} needs --{flag}")))
}

fn mode(s: &Sampling) -> EnsembleMode {
    match s.sample {
        Some(size) => EnsembleMode::Sampled { size, seed: s.seed },
        None => EnsembleMode::Exhaustive,
    }
}

fn cmd_family(f: &FamilyArgs) -> Result<(), CliError> {
    let one = |i: Instance| format!("{}\n", i.to_json());
    let text = match f.family {
        FamilyName::Rubin => one(Instance::Knapsack(rubin_instance(need(f.k, "k", "rubin")?, f.variant)?)),
        FamilyName::Vs => one(Instance::Knapsack(vs_extremal_instance(need(f.s, "s", "vs")?)?)),
        FamilyName::Pow2 => {
            let n = need(f.n, "n", "pow2")?;
            let n = u32::try_from(n).map_err(|_| CliError::Input(format!("--n {n} is too large")))?;
            one(Instance::Knapsack(power_of_two_knapsack(n)?))
        }
        FamilyName::Morgan => one(Instance::System(morgan_family(&need(f.nu.clone(), "nu", "morgan")?, f.precision)?)),
        FamilyName::CongruenceEnsemble | FamilyName::KnapsackEnsemble => {
            let (kind, parameter) = match f.family {
                FamilyName::CongruenceEnsemble => (EnsembleKind::Congruence, need(f.delta, "delta", "congruence-ensemble")?),
                _ => (EnsembleKind::Knapsack, need(f.gamma, "gamma", "knapsack-ensemble")?),
            };
            let spec = EnsembleSpec { kind, n: need(f.n, "n", "ensemble")?, parameter, mode: mode(&f.sampling) };
            let mut out = String::new();
            for inst in ensemble_instances(&spec)? {
                if f.a0_max.as_ref().is_some_and(|m| inst.parts().1 > m) {
                    continue;
                }
                let inst = match inst {
                    EnsembleInstance::Congruence(c) => Instance::Congruence(c),
                    EnsembleInstance::Knapsack(k) => Instance::Knapsack(k),
                };
                out.push_str(&one(inst));
            }
            out
        }
    };
    emit(&text, f.output.as_deref())
}

fn write_records(c: &CensusArgs, census: &Census) -> Result<(), CliError> {
    if let Some(path) = &c.output {
        let format = match c.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        };
        emit(&render_records(&census.records, format)?, Some(path))?;
    }
    Ok(())
}

fn decimal(q: &Rat, precision: u32) -> String {
    // about 0.3 decimal digits per bit
    let digits = (precision as usize * 3) / 10;
    Real::from_rat(q, precision).to_decimal(digits)
}

fn cmd_census(c: &CensusArgs) -> Result<(), CliError> {
    let m = mode(&c.sampling);
    match c.kind {
        CensusKind::Congruence => {
            let delta = need(c.delta, "delta", "congruence census")?;
            let census = mean_congruence_vertex_count(c.n, delta, m, c.caps.point_cap)?;
            write_records(c, &census)?;
            let lb = phi_delta_lower_bound(c.n, &Int::from(delta)).map_err(CensusError::from)?;
            let bound = if lb.vacuous { "vacuous".to_string() } else { lb.value.to_decimal(12) };
            let holds = lb.vacuous || census.mean.0 >= lb.value.to_rat();
            println!(
                "phi={} instances={} lower_bound={} holds={}",
                decimal(&census.mean.0, c.precision),
                census.records.len(),
                bound,
                holds
            );
            if !holds {
                return Err(CliError::Violation("phi lower bound".into()));
            }
        }
        CensusKind::Knapsack => {
            let gamma = need(c.gamma, "gamma", "knapsack census")?;
            let census = mean_knapsack_vertex_count(c.n, gamma, m, c.caps.point_cap)?;
            write_records(c, &census)?;
            println!("psi={} instances={}", decimal(&census.mean.0, c.precision), census.records.len());
        }
        CensusKind::PsiPhi => {
            let gamma = need(c.gamma, "gamma", "psi-phi census")?;
            let r = psi_phi_comparison(c.n, gamma, c.caps.point_cap)?;
            println!(
                "psi={} phi={} difference={} instances={} failures={}",
                decimal(&r.psi.0, c.precision),
                decimal(&r.phi.0, c.precision),
                decimal(&r.difference.0, c.precision),
                r.instances,
                r.failures.len()
            );
        }
    }
    Ok(())
}

fn cmd_verify(check: Option<&str>) -> Result<(), CliError> {
    let outcomes = Suite::new().run(check, |o| println!("{o}")).map_err(|e| CliError::Input(e.to_string()))?;
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.name).collect();
    println!("{} passed, {} failed", outcomes.len() - failed.len(), failed.len());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Violation(failed.join(", ")))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    match &cli.command {
        Command::Hull { io, caps } => cmd_hull(io, caps),
        Command::Bounds { io, caps } => cmd_bounds(io, caps),
        Command::Family(f) => cmd_family(f),
        Command::Census(c) => cmd_census(c),
        Command::Verify { check } => cmd_verify(check.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("inthull: {e}");
            ExitCode::from(e.code())
        }
    }
}
