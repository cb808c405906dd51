//! `qpb`: purity-based bounds on entanglement and coherence.
//!
//! Subcommands evaluate the analytic bounds directly (`bounds`), sweep
//! the built-in state families under a protocol (`sweep`, with `shadow`,
//! `collective`, and `tomo` as fixed-protocol shorthands), or scan the
//! depolarizing-noise response (`noise-sweep`). All outputs are CSV and
//! byte-reproducible for a fixed seed. `QPB_THREADS` caps the worker
//! pool.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use purity_bounds::bounds::{coherence_bounds, coherent_info_bounds, multi_info_bounds};
use purity_bounds::collective::DiagonalMode;
use purity_bounds::shadow::DiagonalEstimator;
use purity_bounds::states::StateFamily;
use purity_bounds::sweep::{
    emit_csv, emit_noise_csv, parse_angle, parse_grid, parse_subsystem, run_noise_sweep,
    run_sweep, theta_grid, Protocol, SweepConfig,
};

#[derive(Parser)]
#[command(
    name = "qpb",
    version,
    about = "Bound coherent information and coherence from purities; simulate the purity-detection protocols"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate bounds from explicitly provided purities
    Bounds(BoundsArgs),
    /// Sweep a state family over θ under a selectable protocol
    Sweep(ProtocolSweepArgs),
    /// Shadow-estimation sweep (sweep with the shadow protocol)
    Shadow(SweepArgs),
    /// Two-copy Bell-measurement sweep (collective protocol)
    Collective(SweepArgs),
    /// Pauli-tomography sweep (tomography protocol)
    Tomo(SweepArgs),
    /// Exact noise response of the GHZ family over a depolarizing grid
    NoiseSweep(NoiseArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    /// Biased four-qubit GHZ state
    Ghz,
    /// Two-qubit product state |ψθ⟩|ψθ⟩
    Psi2,
    /// Two-qubit maximally entangled pair
    Bell,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProtocolArg {
    Exact,
    Shadow,
    Collective,
    Tomography,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagEstimatorArg {
    /// Σ dᵢ² of the mean shadow
    Plugin,
    /// Pair U-statistic over distinct snapshots
    Unbiased,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiagModeArg {
    /// Family-specific Bell formula for |ψθ⟩|ψθ⟩
    Paper,
    /// Φ-block formula, exact for arbitrary states
    General,
}

#[derive(Args)]
struct SweepArgs {
    /// State family to sweep
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Angle grid start:end:count (endpoints accept pi expressions)
    #[arg(long)]
    thetas: Option<String>,
    /// Single angle (e.g. `pi/4`, `3pi/20`, `0.6`)
    #[arg(long, conflicts_with = "thetas")]
    theta: Option<String>,
    /// Subsystem B as labels (e.g. `1`, `1,1p`, `1,1p,2`); repeatable
    #[arg(long = "subsystem")]
    subsystems: Vec<String>,
    /// Shadow: snapshots per repeat; collective: BSM shots; tomo: total budget
    #[arg(long)]
    shots: Option<u64>,
    /// Independent repetitions per θ (mean ± sd reported)
    #[arg(long)]
    repeats: Option<u32>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Depolarizing weight mixed into every prepared state
    #[arg(long, default_value_t = 0.0)]
    noise_p: f64,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write every snapshot of every shadow collection to this path
    #[arg(long)]
    dump_shadows: Option<PathBuf>,
    /// Write every sampled Bell count table to this path
    #[arg(long)]
    dump_counts: Option<PathBuf>,
    /// Diagonal-purity estimator for the shadow protocol
    #[arg(long, value_enum, default_value = "plugin")]
    diag_estimator: DiagEstimatorArg,
    /// Diagonal-purity formula for the collective protocol
    #[arg(long, value_enum, default_value = "paper")]
    diag_mode: DiagModeArg,
}

#[derive(Args)]
struct ProtocolSweepArgs {
    #[arg(long, value_enum, default_value = "exact")]
    protocol: ProtocolArg,
    #[command(flatten)]
    sweep: SweepArgs,
}

#[derive(Args)]
struct NoiseArgs {
    /// Bias angle of the coherent-information rows
    #[arg(long, default_value = "pi/4")]
    theta: String,
    /// Depolarizing grid start:end:count
    #[arg(long, default_value = "0:0.1:21")]
    noise_grid: String,
    /// Subsystem B labels; repeatable (default: 1 | 1,1p | 1,1p,2)
    #[arg(long = "subsystem")]
    subsystems: Vec<String>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Purity of the global state
    #[arg(long)]
    p_global: Option<f64>,
    /// Purity of the marginal on B (enables the coherent-info bound)
    #[arg(long, requires = "p_global", requires = "d_total", requires = "d_b")]
    p_marginal: Option<f64>,
    /// Purity of the dephased state (enables the coherence bound)
    #[arg(long, requires = "p_global", requires = "d_total")]
    p_diag: Option<f64>,
    /// Marginal purities as `p:d,p:d,...` (enables the multi-info bound)
    #[arg(long, requires = "p_global", requires = "d_total")]
    marginals: Option<String>,
    /// Dimension of the global Hilbert space
    #[arg(long)]
    d_total: Option<usize>,
    /// Dimension of subsystem B
    #[arg(long)]
    d_b: Option<usize>,
    /// Output CSV path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => {
            let mut f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            f.write_all(bytes)?;
        }
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn build_config(args: &SweepArgs, protocol: Protocol) -> Result<SweepConfig> {
    let family_arg = args.family.unwrap_or(match protocol {
        Protocol::Collective => FamilyArg::Psi2,
        _ => FamilyArg::Ghz,
    });
    let family = match family_arg {
        FamilyArg::Ghz => StateFamily::GhzTheta,
        FamilyArg::Psi2 => StateFamily::ProductPsi2,
        FamilyArg::Bell => StateFamily::BellPair,
    };
    let qubits = match family {
        StateFamily::GhzTheta => 4,
        _ => 2,
    };

    let mut cfg = SweepConfig::new(family, protocol);
    cfg.seed = args.seed;
    cfg.noise_p = args.noise_p;
    if let Some(expr) = &args.theta {
        cfg.thetas = vec![parse_angle(expr)?];
    } else if let Some(grid) = &args.thetas {
        cfg.thetas = parse_grid(grid)?;
    } else {
        cfg.thetas = theta_grid(11);
    }
    if let Some(shots) = args.shots {
        cfg.shots = shots;
    }
    if let Some(repeats) = args.repeats {
        cfg.repeats = repeats;
    }
    cfg.subsystems = if args.subsystems.is_empty() {
        match (qubits, protocol) {
            (4, _) => vec![vec![0]],
            (2, _) => vec![vec![1]],
            _ => vec![vec![0]],
        }
    } else {
        args.subsystems
            .iter()
            .map(|s| Ok(parse_subsystem(s, qubits)?))
            .collect::<Result<Vec<_>>>()?
    };
    cfg.diag_estimator = match args.diag_estimator {
        DiagEstimatorArg::Plugin => DiagonalEstimator::PlugIn,
        DiagEstimatorArg::Unbiased => DiagonalEstimator::Unbiased,
    };
    cfg.diag_mode = match args.diag_mode {
        DiagModeArg::Paper => DiagonalMode::PaperFamily,
        DiagModeArg::General => DiagonalMode::General,
    };
    if args.dump_shadows.is_some() {
        if protocol != Protocol::Shadow {
            bail!("--dump-shadows only applies to the shadow protocol");
        }
        cfg.collect_shadow_dump = true;
    }
    if args.dump_counts.is_some() {
        if protocol != Protocol::Collective {
            bail!("--dump-counts only applies to the collective protocol");
        }
        cfg.collect_counts_dump = true;
    }
    Ok(cfg)
}

fn run_sweep_command(args: &SweepArgs, protocol: Protocol) -> Result<()> {
    let cfg = build_config(args, protocol)?;
    let output = run_sweep(&cfg)?;
    let mut buf = Vec::new();
    emit_csv(&output.rows, &mut buf)?;
    write_output(args.out.as_deref(), &buf)?;
    if let (Some(path), Some(dump)) = (&args.dump_shadows, &output.shadow_dump) {
        write_output(Some(path), dump.as_bytes())?;
    }
    if let (Some(path), Some(dump)) = (&args.dump_counts, &output.counts_dump) {
        write_output(Some(path), dump.as_bytes())?;
    }
    Ok(())
}

fn run_noise_command(args: &NoiseArgs) -> Result<()> {
    let theta = parse_angle(&args.theta)?;
    let grid = parse_grid(&args.noise_grid)?;
    let subsystems = if args.subsystems.is_empty() {
        vec![vec![0], vec![0, 1], vec![0, 1, 2]]
    } else {
        args.subsystems
            .iter()
            .map(|s| Ok(parse_subsystem(s, 4)?))
            .collect::<Result<Vec<_>>>()?
    };
    let rows = run_noise_sweep(&grid, theta, &subsystems)?;
    let mut buf = Vec::new();
    emit_noise_csv(&rows, &mut buf)?;
    write_output(args.out.as_deref(), &buf)
}

fn run_bounds_command(args: &BoundsArgs) -> Result<()> {
    let mut lines = String::from("quantity,lower,upper,epsilon,clamped\n");
    let mut any = false;
    let fmt_row = |name: &str, r: &purity_bounds::bounds::BoundsReport| {
        format!(
            "{name},{:.6},{:.6},{:.6},{}\n",
            r.lower,
            r.upper,
            r.tightness_epsilon,
            if r.clamped { 1 } else { 0 }
        )
    };

    if let Some(p_marginal) = args.p_marginal {
        let (pg, dt, db) = (
            args.p_global.expect("enforced by clap"),
            args.d_total.expect("enforced by clap"),
            args.d_b.expect("enforced by clap"),
        );
        let r = coherent_info_bounds(pg, p_marginal, dt, db)?;
        lines.push_str(&fmt_row("coherent_info", &r));
        any = true;
    }
    if let Some(p_diag) = args.p_diag {
        let (pg, dt) = (
            args.p_global.expect("enforced by clap"),
            args.d_total.expect("enforced by clap"),
        );
        let r = coherence_bounds(pg, p_diag, dt)?;
        lines.push_str(&fmt_row("coherence", &r));
        any = true;
    }
    if let Some(spec) = &args.marginals {
        let (pg, dt) = (
            args.p_global.expect("enforced by clap"),
            args.d_total.expect("enforced by clap"),
        );
        let marginals = parse_marginals(spec)?;
        let r = multi_info_bounds(&marginals, pg, dt)?;
        lines.push_str(&fmt_row("multi_info", &r));
        any = true;
    }
    if !any {
        bail!("nothing to evaluate: pass --p-marginal, --p-diag, or --marginals");
    }
    write_output(args.out.as_deref(), lines.as_bytes())
}

fn parse_marginals(spec: &str) -> Result<Vec<(f64, usize)>> {
    spec.split(',')
        .map(|pair| {
            let (p, d) = pair
                .split_once(':')
                .with_context(|| format!("marginal '{pair}' must look like purity:dim"))?;
            Ok((
                p.trim().parse().context("bad marginal purity")?,
                d.trim().parse().context("bad marginal dim")?,
            ))
        })
        .collect()
}

fn configure_threads() -> Result<()> {
    if let Ok(value) = std::env::var("QPB_THREADS") {
        let threads: usize = value
            .parse()
            .with_context(|| format!("QPB_THREADS='{value}' is not a thread count"))?;
        if threads == 0 {
            bail!("QPB_THREADS must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .context("initializing the worker pool")?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| match &cli.command {
        Command::Bounds(args) => run_bounds_command(args),
        Command::Sweep(args) => run_sweep_command(
            &args.sweep,
            match args.protocol {
                ProtocolArg::Exact => Protocol::Exact,
                ProtocolArg::Shadow => Protocol::Shadow,
                ProtocolArg::Collective => Protocol::Collective,
                ProtocolArg::Tomography => Protocol::Tomography,
            },
        ),
        Command::Shadow(args) => run_sweep_command(args, Protocol::Shadow),
        Command::Collective(args) => run_sweep_command(args, Protocol::Collective),
        Command::Tomo(args) => run_sweep_command(args, Protocol::Tomography),
        Command::NoiseSweep(args) => run_noise_command(args),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
