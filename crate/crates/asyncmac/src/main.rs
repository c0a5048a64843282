//! Command-line front end: construct, analyze and repair parity-check
//! matrices, and run PUPE sweeps. Machine output (alist, CSV) goes to
//! stdout or --out; progress and diagnostics go to stderr.
//!
//! Exit codes: 0 ok, 1 usage error, 2 analysis found defects,
//! 3 repair infeasible.

use asyncmac::alist::{pcm_from_alist, pcm_to_alist};
use asyncmac::aubac::{estimate_pupe, PupeParams, TauPolicy};
use asyncmac::ensemble::{catalog_by_name, DegreeDistribution};
use asyncmac::experiment::{
    prepare_code, sweep_n, sweep_tau, to_csv, RemovalMode, SweepConfig, SweepResult,
};
use asyncmac::stopset::{
    distance_report, find_4set_delay, has_deg1_stopping_set, remove_4sets,
    remove_deg1_stopping_sets, RemovalCaps, RemovalStatus,
};
use asyncmac::construct::Method;
use asyncmac::Pcm;
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_USAGE: u8 = 1;
const EXIT_DEFECTS: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "asyncmac",
    version,
    about = "LDPC codes without small stopping sets for the two-user asynchronous adder channel"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct EnsembleArgs {
    /// Catalog ensemble name (ens1, ens2, ens3)
    #[arg(long, conflicts_with = "spec")]
    ensemble: Option<String>,
    /// Inline distribution, e.g. "L1:0.41,L2:0.59;R4:0.87,R10:0.13"
    #[arg(long)]
    spec: Option<String>,
}

impl EnsembleArgs {
    fn resolve(&self) -> Result<(DegreeDistribution, String), String> {
        match (&self.ensemble, &self.spec) {
            (Some(name), None) => catalog_by_name(name)
                .map(|e| (e.dist.clone(), name.clone()))
                .ok_or_else(|| format!("unknown ensemble {name:?}")),
            (None, Some(spec)) => DegreeDistribution::parse_spec(spec)
                .map(|d| (d, spec.clone()))
                .map_err(|e| e.to_string()),
            _ => Err("exactly one of --ensemble or --spec is required".into()),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a parity-check matrix and write it as alist
    Construct {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Block length
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_method, default_value = "even-rcc")]
        method: Method,
        /// Post-construction repair: none | 4set | deg1
        #[arg(long, value_parser = parse_mode, default_value = "4set")]
        mode: RemovalMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output path (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report degree-one VN structure and stopping-set defects of an alist
    Analyze {
        input: PathBuf,
        /// Also peel every delay for degree-one stopping sets
        #[arg(long)]
        full: bool,
    },
    /// Permute columns of an existing alist to remove stopping sets
    Repair {
        input: PathBuf,
        /// 4set | deg1
        #[arg(long, value_parser = parse_mode, default_value = "4set")]
        mode: RemovalMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PUPE vs delay at fixed block length, CSV on stdout or --out
    SweepTau {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[arg(long)]
        n: usize,
        /// Comma-separated delays (default: 1..=tau-max)
        #[arg(long)]
        tau: Option<String>,
        #[arg(long, default_value_t = 20)]
        tau_max: usize,
        #[arg(long, value_parser = parse_method, default_value = "even-rcc")]
        method: Method,
        #[arg(long, value_parser = parse_mode, default_value = "none")]
        mode: RemovalMode,
        #[arg(long, default_value_t = 20)]
        codes: usize,
        /// Transmissions per (code, delay)
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// PUPE vs block length with uniform delay in [1, tau-max]
    SweepN {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Comma-separated block lengths
        #[arg(long)]
        n: String,
        #[arg(long, default_value_t = 50)]
        tau_max: usize,
        #[arg(long, value_parser = parse_method, default_value = "even-rcc")]
        method: Method,
        #[arg(long, value_parser = parse_mode, default_value = "none")]
        mode: RemovalMode,
        #[arg(long, default_value_t = 20)]
        codes: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate PUPE of an existing alist at one delay
    Pupe {
        input: PathBuf,
        #[arg(long)]
        tau: usize,
        #[arg(long, default_value_t = 10000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: asyncmac::Error| e.to_string())
}

fn parse_mode(s: &str) -> Result<RemovalMode, String> {
    s.parse().map_err(|e: asyncmac::Error| e.to_string())
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("bad integer {t:?}")))
        .collect()
}

fn read_pcm(path: &Path) -> Result<Pcm, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    pcm_from_alist(&text).map_err(|e| e.to_string())
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, content).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn emit_sweep(out: &Option<PathBuf>, result: &SweepResult) -> Result<(), String> {
    emit(out, &to_csv(result))
}

fn init_threads() {
    if let Ok(v) = std::env::var("ASYNCMAC_THREADS") {
        if let Ok(threads) = v.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
        } else {
            eprintln!("warning: ignoring unparsable ASYNCMAC_THREADS={v:?}");
        }
    }
}

fn run(cmd: Cmd) -> Result<u8, String> {
    match cmd {
        Cmd::Construct { ensemble, n, method, mode, seed, out } => {
            let (dist, label) = ensemble.resolve()?;
            let code =
                prepare_code(&dist, n, method, mode, seed).map_err(|e| e.to_string())?;
            eprintln!(
                "constructed {}x{} method={} mode={} seed={seed} sha256={}",
                code.pcm.num_rows(),
                code.pcm.num_cols(),
                method.name(),
                mode.name(),
                code.alist_sha256
            );
            let _ = label;
            if code.fallback {
                eprintln!("repair hit its iteration cap; emitting best attempt");
                emit(&out, &pcm_to_alist(&code.pcm))?;
                return Ok(EXIT_INFEASIBLE);
            }
            emit(&out, &pcm_to_alist(&code.pcm))?;
            Ok(0)
        }
        Cmd::Analyze { input, full } => {
            let pcm = read_pcm(&input)?;
            let report = distance_report(&pcm);
            let deg1_total: usize = report.locations().iter().map(Vec::len).sum();
            println!("shape: {}x{}", pcm.num_rows(), pcm.num_cols());
            println!("edges: {}", pcm.num_edges());
            println!("deg1_vns: {deg1_total}");
            println!("distance_multiset_size: {}", report.total_size());
            println!("duplicate_distances: {:?}", report.duplicate_distances());
            let mut defects = false;
            match find_4set_delay(&pcm) {
                Some(w) => {
                    defects = true;
                    println!(
                        "4set: tau={} distance={} user1={:?} user2={:?}",
                        w.tau, w.distance, w.user1_pair, w.user2_pair
                    );
                }
                None => println!("4set: none"),
            }
            if full {
                let bad: Vec<usize> = (1..pcm.num_cols())
                    .filter(|&tau| has_deg1_stopping_set(&pcm, tau).unwrap_or(true))
                    .collect();
                defects |= !bad.is_empty();
                println!("deg1_stopping_set_delays: {bad:?}");
            }
            Ok(if defects { EXIT_DEFECTS } else { 0 })
        }
        Cmd::Repair { input, mode, seed, out } => {
            let pcm = read_pcm(&input)?;
            let caps = RemovalCaps::default();
            let outcome = match mode {
                RemovalMode::None => {
                    return Err("repair mode must be 4set or deg1".into());
                }
                RemovalMode::FourSet => remove_4sets(&pcm, seed, &caps),
                RemovalMode::Deg1 => remove_deg1_stopping_sets(&pcm, seed, &caps),
            }
            .map_err(|e| e.to_string())?;
            if outcome.status != RemovalStatus::Success {
                eprintln!("repair infeasible within caps (mode={})", mode.name());
                return Ok(EXIT_INFEASIBLE);
            }
            eprintln!(
                "repaired in {} pass(es); permutation is identity: {}",
                outcome.iterations,
                outcome.permutation.is_identity()
            );
            emit(&out, &pcm_to_alist(&outcome.pcm))?;
            Ok(0)
        }
        Cmd::SweepTau {
            ensemble,
            n,
            tau,
            tau_max,
            method,
            mode,
            codes,
            trials,
            seed,
            out,
        } => {
            let (dist, label) = ensemble.resolve()?;
            let taus = match tau {
                Some(list) => parse_usize_list(&list)?,
                None => (1..=tau_max).collect(),
            };
            let cfg =
                SweepConfig { dist, label, method, removal: mode, codes, trials, seed };
            eprintln!(
                "sweep-tau: n={n} points={} codes={codes} trials={trials}",
                taus.len()
            );
            let result = sweep_tau(&cfg, n, &taus).map_err(|e| e.to_string())?;
            emit_sweep(&out, &result)?;
            Ok(0)
        }
        Cmd::SweepN { ensemble, n, tau_max, method, mode, codes, trials, seed, out } => {
            let (dist, label) = ensemble.resolve()?;
            let ns = parse_usize_list(&n)?;
            let cfg =
                SweepConfig { dist, label, method, removal: mode, codes, trials, seed };
            eprintln!("sweep-n: points={} codes={codes} trials={trials}", ns.len());
            let result = sweep_n(&cfg, &ns, tau_max).map_err(|e| e.to_string())?;
            emit_sweep(&out, &result)?;
            Ok(0)
        }
        Cmd::Pupe { input, tau, trials, seed } => {
            let pcm = read_pcm(&input)?;
            let est = estimate_pupe(
                &pcm,
                &PupeParams { trials, seed, tau: TauPolicy::Fixed(tau) },
            )
            .map_err(|e| e.to_string())?;
            println!(
                "tau={tau} pupe={:.6e} ci95=[{:.6e},{:.6e}] user_errors={} transmissions={}",
                est.pupe,
                est.ci_low,
                est.ci_high,
                est.user_errors,
                2 * est.trials
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version are not usage errors
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
