//! Experiment driver: θ-sweeps of the state families under each
//! protocol, noise sweeps, and deterministic CSV emission.
//!
//! Sweep points and repeats execute independently (in parallel when the
//! `parallel` feature is on); row order and all reductions are fixed by
//! (θ index, subsystem index, repeat index), so output bytes depend only
//! on the configuration and seed.

use std::f64::consts::PI;

use crate::bounds::{coherence_bounds, coherent_info_bounds, BoundsReport};
use crate::collective::{
    bell_probabilities, diagonal_purity_from_counts, marginal_purity_from_counts,
    purity_from_counts, sample_counts, DiagonalMode,
};
use crate::exec::map_collect;
use crate::linalg::{diagonal_purity, partial_trace, purity, DensityMatrix};
use crate::rng::{child_seed, StreamRng};
use crate::shadow::{estimate_diagonal_purity, estimate_purity, sample_collection, DiagonalEstimator};
use crate::states::{c_re_exact, coherent_info_exact, depolarize, ghz_theta, StateFamily, StateSpec};
use crate::tomography::{reconstruct, simulate_pauli_dataset};
use crate::{Error, Result};

/// How estimator columns of a sweep are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    /// Purities computed exactly from the simulated state.
    Exact,
    /// Randomized-measurement (classical shadow) estimates.
    Shadow,
    /// Two-copy Bell-measurement estimates (two-qubit states only).
    Collective,
    /// Pauli tomography, linear inversion, physical projection.
    Tomography,
}

impl Protocol {
    pub fn as_str(&self) -> &'static str {
        match self {
            Protocol::Exact => "exact",
            Protocol::Shadow => "shadow",
            Protocol::Collective => "collective",
            Protocol::Tomography => "tomography",
        }
    }
}

/// Full description of one sweep run.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub family: StateFamily,
    pub thetas: Vec<f64>,
    pub protocol: Protocol,
    /// Shadow: snapshots per repeat. Collective: BSM shots per repeat.
    /// Tomography: total budget, split evenly over the 3ⁿ settings.
    pub shots: u64,
    pub repeats: u32,
    pub seed: u64,
    /// Qubit-index subsystems (strictly increasing, proper subsets).
    pub subsystems: Vec<Vec<usize>>,
    pub noise_p: f64,
    pub diag_estimator: DiagonalEstimator,
    pub diag_mode: DiagonalMode,
    pub collect_shadow_dump: bool,
    pub collect_counts_dump: bool,
}

impl SweepConfig {
    pub fn new(family: StateFamily, protocol: Protocol) -> Self {
        SweepConfig {
            family,
            thetas: theta_grid(11),
            protocol,
            shots: match protocol {
                Protocol::Collective => 100_000,
                _ => 20_000,
            },
            repeats: match protocol {
                Protocol::Exact => 1,
                _ => 10,
            },
            seed: 1,
            subsystems: vec![vec![0]],
            noise_p: 0.0,
            diag_estimator: DiagonalEstimator::PlugIn,
            diag_mode: DiagonalMode::PaperFamily,
            collect_shadow_dump: false,
            collect_counts_dump: false,
        }
    }
}

/// The paper-style grid: `count` evenly spaced angles over [0, π/2].
pub fn theta_grid(count: usize) -> Vec<f64> {
    linspace(0.0, PI / 2.0, count)
}

fn linspace(start: f64, end: f64, count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![start];
    }
    (0..count)
        .map(|i| start + (end - start) * i as f64 / (count - 1) as f64)
        .collect()
}

/// One output row: estimator columns plus exact reference columns for
/// one (θ, subsystem) cell, aggregated over repeats (mean, with sample
/// standard deviation in the `_err` columns).
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub theta: f64,
    pub protocol: Protocol,
    pub subsystem: String,
    pub p_global: f64,
    pub p_marginal: f64,
    pub p_diag: f64,
    pub l_e: f64,
    pub u_e: f64,
    pub i_exact: f64,
    pub l_c: f64,
    pub u_c: f64,
    pub cre_exact: f64,
    pub p_global_err: f64,
    pub p_marginal_err: f64,
    pub p_diag_err: f64,
    pub clamped: bool,
}

/// Rows plus any dumps the configuration asked to collect.
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub shadow_dump: Option<String>,
    pub counts_dump: Option<String>,
}

/// Mean and spread of a repeated estimate. `sd` is the sample standard
/// deviation of individual repeats; `sd_of_mean` divides by √R. The CSV
/// `_err` columns carry `sd`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepeatStats {
    pub mean: f64,
    pub sd: f64,
    pub sd_of_mean: f64,
}

pub fn repeat_stats(values: &[f64]) -> RepeatStats {
    let n = values.len();
    assert!(n >= 1);
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return RepeatStats {
            mean,
            sd: 0.0,
            sd_of_mean: 0.0,
        };
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    RepeatStats {
        mean,
        sd,
        sd_of_mean: sd / (n as f64).sqrt(),
    }
}

struct JobEstimates {
    p_global: f64,
    p_marginals: Vec<f64>,
    p_diag: f64,
    shadow_dump: Option<String>,
    counts_dump: Option<String>,
}

fn validate(cfg: &SweepConfig, n: usize) -> Result<()> {
    if cfg.thetas.is_empty() {
        return Err(Error::BadConfig("empty theta grid".into()));
    }
    if cfg.repeats < 1 {
        return Err(Error::BadConfig("repeats must be at least 1".into()));
    }
    if cfg.subsystems.is_empty() {
        return Err(Error::BadConfig("no subsystem specified".into()));
    }
    for sub in &cfg.subsystems {
        crate::linalg::check_subset(sub, n)?;
        if sub.len() >= n {
            return Err(Error::BadConfig(
                "subsystem must be a proper subset of the register".into(),
            ));
        }
    }
    match cfg.protocol {
        Protocol::Shadow => {
            if cfg.shots < 2 {
                return Err(Error::BadConfig(
                    "shadow estimation needs at least 2 snapshots".into(),
                ));
            }
        }
        Protocol::Collective => {
            if n != 2 {
                return Err(Error::BadConfig(
                    "collective protocol requires a two-qubit state".into(),
                ));
            }
            if cfg.subsystems.iter().any(|s| s != &[1]) {
                return Err(Error::BadConfig(
                    "collective protocol measures subsystem {2} only".into(),
                ));
            }
            if cfg.shots == 0 {
                return Err(Error::ZeroShots);
            }
        }
        Protocol::Tomography => {
            if cfg.shots == 0 {
                return Err(Error::ZeroShots);
            }
        }
        Protocol::Exact => {}
    }
    Ok(())
}

fn run_job(
    cfg: &SweepConfig,
    state: &DensityMatrix,
    theta: f64,
    job_seed: u64,
) -> Result<JobEstimates> {
    let n = state.qubit_count()?;
    match cfg.protocol {
        Protocol::Exact => Ok(JobEstimates {
            p_global: purity(state),
            p_marginals: cfg
                .subsystems
                .iter()
                .map(|sub| partial_trace(state, sub).map(|r| purity(&r)))
                .collect::<Result<Vec<_>>>()?,
            p_diag: diagonal_purity(state),
            shadow_dump: None,
            counts_dump: None,
        }),
        Protocol::Shadow => {
            let collection = sample_collection(state, cfg.shots as usize, job_seed)?;
            let full: Vec<usize> = (0..n).collect();
            let p_global = estimate_purity(&collection, &full)?;
            let p_marginals = cfg
                .subsystems
                .iter()
                .map(|sub| estimate_purity(&collection, sub))
                .collect::<Result<Vec<_>>>()?;
            let p_diag = estimate_diagonal_purity(&collection, cfg.diag_estimator)?;
            let shadow_dump = if cfg.collect_shadow_dump {
                let mut buf = Vec::new();
                collection.dump(&mut buf).expect("write to Vec");
                Some(String::from_utf8(buf).expect("ascii dump"))
            } else {
                None
            };
            Ok(JobEstimates {
                p_global,
                p_marginals,
                p_diag,
                shadow_dump,
                counts_dump: None,
            })
        }
        Protocol::Collective => {
            let probs = bell_probabilities(state, state)?;
            let mut rng = StreamRng::new(job_seed);
            let table = sample_counts(&probs, cfg.shots, &mut rng)?;
            let counts_dump = if cfg.collect_counts_dump {
                let mut buf = Vec::new();
                crate::collective::dump_counts(&table, job_seed, theta, &mut buf)
                    .expect("write to Vec");
                Some(String::from_utf8(buf).expect("ascii dump"))
            } else {
                None
            };
            Ok(JobEstimates {
                p_global: purity_from_counts(&table),
                p_marginals: vec![marginal_purity_from_counts(&table); cfg.subsystems.len()],
                p_diag: diagonal_purity_from_counts(&table, cfg.diag_mode),
                shadow_dump: None,
                counts_dump,
            })
        }
        Protocol::Tomography => {
            let settings = 3u64.pow(n as u32);
            let per_setting = (cfg.shots / settings).max(1);
            let data = simulate_pauli_dataset(state, per_setting, job_seed)?;
            let rho_hat = reconstruct(&data)?;
            Ok(JobEstimates {
                p_global: purity(&rho_hat),
                p_marginals: cfg
                    .subsystems
                    .iter()
                    .map(|sub| partial_trace(&rho_hat, sub).map(|r| purity(&r)))
                    .collect::<Result<Vec<_>>>()?,
                p_diag: diagonal_purity(&rho_hat),
                shadow_dump: None,
                counts_dump: None,
            })
        }
    }
}

/// Run the sweep: one row per (θ, subsystem), estimator columns averaged
/// over repeats, exact reference columns from the simulated state.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    let states: Vec<DensityMatrix> = cfg
        .thetas
        .iter()
        .map(|&theta| {
            StateSpec {
                family: cfg.family.clone(),
                theta,
                noise_p: cfg.noise_p,
            }
            .build()
        })
        .collect::<Result<Vec<_>>>()?;
    let n = states[0].qubit_count()?;
    validate(cfg, n)?;

    let repeats = match cfg.protocol {
        Protocol::Exact => 1usize,
        _ => cfg.repeats as usize,
    };
    let jobs = cfg.thetas.len() * repeats;
    let results: Vec<Result<JobEstimates>> = map_collect(jobs, |job| {
        let t_idx = job / repeats;
        let rep = job % repeats;
        let job_seed = child_seed(child_seed(cfg.seed, t_idx as u64), rep as u64);
        run_job(cfg, &states[t_idx], cfg.thetas[t_idx], job_seed)
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;

    let d_total = 1usize << n;
    let mut rows = Vec::with_capacity(cfg.thetas.len() * cfg.subsystems.len());
    for (t_idx, &theta) in cfg.thetas.iter().enumerate() {
        let state = &states[t_idx];
        let cre = c_re_exact(state);
        let reps = &results[t_idx * repeats..(t_idx + 1) * repeats];
        for (s_idx, sub) in cfg.subsystems.iter().enumerate() {
            let d_b = 1usize << sub.len();
            let i_exact = coherent_info_exact(state, sub)?;

            let global = repeat_stats(&reps.iter().map(|r| r.p_global).collect::<Vec<_>>());
            let marginal =
                repeat_stats(&reps.iter().map(|r| r.p_marginals[s_idx]).collect::<Vec<_>>());
            let diag = repeat_stats(&reps.iter().map(|r| r.p_diag).collect::<Vec<_>>());

            // Bounds are evaluated per repetition and averaged; the
            // repeat-level reports also carry the clamp flags.
            let mut le = Vec::with_capacity(reps.len());
            let mut ue = Vec::with_capacity(reps.len());
            let mut lc = Vec::with_capacity(reps.len());
            let mut uc = Vec::with_capacity(reps.len());
            let mut clamped = false;
            for r in reps {
                let e: BoundsReport =
                    coherent_info_bounds(r.p_global, r.p_marginals[s_idx], d_total, d_b)?;
                let c: BoundsReport = coherence_bounds(r.p_global, r.p_diag, d_total)?;
                le.push(e.lower);
                ue.push(e.upper);
                lc.push(c.lower);
                uc.push(c.upper);
                clamped = clamped || e.clamped || c.clamped;
            }

            rows.push(SweepRow {
                theta,
                protocol: cfg.protocol,
                subsystem: subsystem_label(sub, n),
                p_global: global.mean,
                p_marginal: marginal.mean,
                p_diag: diag.mean,
                l_e: repeat_stats(&le).mean,
                u_e: repeat_stats(&ue).mean,
                i_exact,
                l_c: repeat_stats(&lc).mean,
                u_c: repeat_stats(&uc).mean,
                cre_exact: cre,
                p_global_err: global.sd,
                p_marginal_err: marginal.sd,
                p_diag_err: diag.sd,
                clamped,
            });
        }
    }

    let join_dumps = |pick: fn(&JobEstimates) -> Option<&String>| -> Option<String> {
        let parts: Vec<&String> = results.iter().filter_map(pick).collect();
        if parts.is_empty() {
            None
        } else {
            Some(parts.iter().map(|s| s.as_str()).collect::<Vec<_>>().concat())
        }
    };
    Ok(SweepOutput {
        rows,
        shadow_dump: join_dumps(|r| r.shadow_dump.as_ref()),
        counts_dump: join_dumps(|r| r.counts_dump.as_ref()),
    })
}

/// One row of a noise sweep (always exact).
#[derive(Debug, Clone)]
pub struct NoiseSweepRow {
    pub p: f64,
    pub theta: f64,
    pub subsystem: String,
    pub p_global: f64,
    pub p_marginal: f64,
    pub p_diag: f64,
    pub l_e: f64,
    pub u_e: f64,
    pub i_exact: f64,
    pub l_c: f64,
    pub u_c: f64,
    pub cre_exact: f64,
}

/// θ values the coherence part of the noise sweep always evaluates.
pub const NOISE_SWEEP_CRE_THETAS: [f64; 3] = [PI / 20.0, 3.0 * PI / 20.0, 5.0 * PI / 20.0];

/// Exact quantities of depolarized GHZ states over a noise grid.
///
/// For every p: one row per requested subsystem at the given θ, then one
/// row per θ in [`NOISE_SWEEP_CRE_THETAS`] with subsystem {1}, tracking
/// how the coherence decay rate changes with the bias angle.
pub fn run_noise_sweep(
    p_grid: &[f64],
    theta: f64,
    subsystems: &[Vec<usize>],
) -> Result<Vec<NoiseSweepRow>> {
    if p_grid.is_empty() || subsystems.is_empty() {
        return Err(Error::BadConfig("empty noise grid or subsystem list".into()));
    }
    for &p in p_grid {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityOutOfRange(p));
        }
    }
    let cases: Vec<(f64, Vec<usize>)> = subsystems
        .iter()
        .map(|sub| (theta, sub.clone()))
        .chain(NOISE_SWEEP_CRE_THETAS.iter().map(|&t| (t, vec![0])))
        .collect();

    let jobs = p_grid.len() * cases.len();
    let rows: Vec<Result<NoiseSweepRow>> = map_collect(jobs, |job| {
        let p = p_grid[job / cases.len()];
        let (theta_c, sub) = &cases[job % cases.len()];
        let state = depolarize(&ghz_theta(*theta_c)?, p)?;
        let p_global = purity(&state);
        let p_marginal = purity(&partial_trace(&state, sub)?);
        let p_diag = diagonal_purity(&state);
        let d_total = 16;
        let d_b = 1usize << sub.len();
        let e = coherent_info_bounds(p_global, p_marginal, d_total, d_b)?;
        let c = coherence_bounds(p_global, p_diag, d_total)?;
        Ok(NoiseSweepRow {
            p,
            theta: *theta_c,
            subsystem: subsystem_label(sub, 4),
            p_global,
            p_marginal,
            p_diag,
            l_e: e.lower,
            u_e: e.upper,
            i_exact: coherent_info_exact(&state, sub)?,
            l_c: c.lower,
            u_c: c.upper,
            cre_exact: c_re_exact(&state),
        })
    });
    rows.into_iter().collect()
}

pub const SWEEP_CSV_HEADER: &str = "theta,protocol,subsystem,P_global,P_marginal,P_diag,l_e,u_e,\
i_exact,l_c,u_c,cre_exact,P_global_err,P_marginal_err,P_diag_err,clamped";

pub const NOISE_CSV_HEADER: &str =
    "p,theta,subsystem,P_global,P_marginal,P_diag,l_e,u_e,i_exact,l_c,u_c,cre_exact";

fn fmt(x: f64) -> String {
    let s = format!("{x:.6}");
    // Values rounding to zero print without a stray sign.
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') {
        format!("\"{s}\"")
    } else {
        s.to_string()
    }
}

/// Write sweep rows with the fixed header; floats carry six decimals and
/// the byte output is a pure function of the rows.
pub fn emit_csv(rows: &[SweepRow], w: &mut impl std::io::Write) -> std::io::Result<()> {
    writeln!(w, "{SWEEP_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt(r.theta),
            r.protocol.as_str(),
            csv_field(&r.subsystem),
            fmt(r.p_global),
            fmt(r.p_marginal),
            fmt(r.p_diag),
            fmt(r.l_e),
            fmt(r.u_e),
            fmt(r.i_exact),
            fmt(r.l_c),
            fmt(r.u_c),
            fmt(r.cre_exact),
            fmt(r.p_global_err),
            fmt(r.p_marginal_err),
            fmt(r.p_diag_err),
            if r.clamped { 1 } else { 0 },
        )?;
    }
    Ok(())
}

pub fn emit_noise_csv(rows: &[NoiseSweepRow], w: &mut impl std::io::Write) -> std::io::Result<()> {
    writeln!(w, "{NOISE_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt(r.p),
            fmt(r.theta),
            csv_field(&r.subsystem),
            fmt(r.p_global),
            fmt(r.p_marginal),
            fmt(r.p_diag),
            fmt(r.l_e),
            fmt(r.u_e),
            fmt(r.i_exact),
            fmt(r.l_c),
            fmt(r.u_c),
            fmt(r.cre_exact),
        )?;
    }
    Ok(())
}

/// Parse an angle: plain literals plus `pi` expressions (`pi/4`,
/// `3pi/20`, `3*pi/20`).
pub fn parse_angle(expr: &str) -> Result<f64> {
    let s = expr.trim();
    let bad = || Error::BadConfig(format!("cannot parse angle '{expr}'"));
    if let Some(pos) = s.find("pi") {
        let coef_str = s[..pos].trim().trim_end_matches('*').trim();
        let coef: f64 = if coef_str.is_empty() {
            1.0
        } else {
            coef_str.parse().map_err(|_| bad())?
        };
        let rest = s[pos + 2..].trim();
        let denom: f64 = if rest.is_empty() {
            1.0
        } else if let Some(d) = rest.strip_prefix('/') {
            d.trim().parse().map_err(|_| bad())?
        } else {
            return Err(bad());
        };
        if denom == 0.0 {
            return Err(bad());
        }
        Ok(coef * PI / denom)
    } else {
        s.parse().map_err(|_| bad())
    }
}

/// Parse `start:end:count` into an inclusive grid; endpoints may be
/// angle expressions.
pub fn parse_grid(expr: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = expr.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::BadConfig(format!(
            "grid '{expr}' must look like start:end:count"
        )));
    }
    let start = parse_angle(parts[0])?;
    let end = parse_angle(parts[1])?;
    let count: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::BadConfig(format!("bad grid count in '{expr}'")))?;
    if count < 1 {
        return Err(Error::BadConfig("grid count must be at least 1".into()));
    }
    Ok(linspace(start, end, count))
}

/// Parse a subsystem spec like `1`, `1,1p`, `1,1p,2` into qubit indices.
///
/// Labels are 1-based photon positions; a trailing `p` (or `′`/`'`)
/// selects the path qubit of that photon on the four-qubit register.
pub fn parse_subsystem(spec: &str, n: usize) -> Result<Vec<usize>> {
    let mut indices = Vec::new();
    for token in spec.split(',') {
        let t = token.trim();
        if t.is_empty() {
            return Err(Error::BadSubsystem);
        }
        let (digits, primed) = if let Some(stripped) = t
            .strip_suffix('p')
            .or_else(|| t.strip_suffix('\''))
            .or_else(|| t.strip_suffix('′'))
        {
            (stripped, true)
        } else {
            (t, false)
        };
        let pos: usize = digits.parse().map_err(|_| Error::BadSubsystem)?;
        if pos == 0 {
            return Err(Error::BadSubsystem);
        }
        let index = if n == 4 {
            // Register order (1, 1', 2, 2').
            (pos - 1) * 2 + usize::from(primed)
        } else {
            if primed {
                return Err(Error::BadSubsystem);
            }
            pos - 1
        };
        if index >= n {
            return Err(Error::QubitOutOfRange { index, qubits: n });
        }
        indices.push(index);
    }
    indices.sort_unstable();
    indices.dedup();
    Ok(indices)
}

/// Inverse of [`parse_subsystem`]: comma-joined labels.
pub fn subsystem_label(indices: &[usize], n: usize) -> String {
    let labels: Vec<String> = indices
        .iter()
        .map(|&q| {
            if n == 4 {
                format!("{}{}", q / 2 + 1, if q % 2 == 1 { "p" } else { "" })
            } else {
                format!("{}", q + 1)
            }
        })
        .collect();
    labels.join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn angle_parsing() {
        assert_eq!(parse_angle("0").unwrap(), 0.0);
        assert!((parse_angle("pi").unwrap() - PI).abs() < 1e-15);
        assert!((parse_angle("pi/4").unwrap() - PI / 4.0).abs() < 1e-15);
        assert!((parse_angle("3pi/20").unwrap() - 3.0 * PI / 20.0).abs() < 1e-15);
        assert!((parse_angle("3*pi/20").unwrap() - 3.0 * PI / 20.0).abs() < 1e-15);
        assert!((parse_angle("0.25").unwrap() - 0.25).abs() < 1e-15);
        assert!(parse_angle("pie").is_err());
        assert!(parse_angle("pi/0").is_err());
        assert!(parse_angle("").is_err());
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0:pi/2:11").unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert!((g[10] - PI / 2.0).abs() < 1e-15);
        assert!((g[1] - PI / 20.0).abs() < 1e-15);
        assert_eq!(parse_grid("0.5:0.5:1").unwrap(), vec![0.5]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn subsystem_parsing_four_qubits() {
        assert_eq!(parse_subsystem("1", 4).unwrap(), vec![0]);
        assert_eq!(parse_subsystem("1,1p", 4).unwrap(), vec![0, 1]);
        assert_eq!(parse_subsystem("1,1p,2", 4).unwrap(), vec![0, 1, 2]);
        assert_eq!(parse_subsystem("2p", 4).unwrap(), vec![3]);
        assert_eq!(parse_subsystem("1'", 4).unwrap(), vec![1]);
        assert!(parse_subsystem("3", 4).is_err());
        assert!(parse_subsystem("", 4).is_err());
    }

    #[test]
    fn subsystem_parsing_two_qubits() {
        assert_eq!(parse_subsystem("2", 2).unwrap(), vec![1]);
        assert!(parse_subsystem("1p", 2).is_err());
    }

    #[test]
    fn subsystem_labels_round_trip() {
        for spec in ["1", "1,1p", "1,1p,2", "2,2p"] {
            let idx = parse_subsystem(spec, 4).unwrap();
            assert_eq!(subsystem_label(&idx, 4), spec);
        }
        assert_eq!(subsystem_label(&[1], 2), "2");
    }

    #[test]
    fn exact_ghz_sweep_hits_the_tight_point() {
        let mut cfg = SweepConfig::new(StateFamily::GhzTheta, Protocol::Exact);
        cfg.thetas = vec![FRAC_PI_4];
        cfg.subsystems = vec![vec![0]];
        let out = run_sweep(&cfg).unwrap();
        assert_eq!(out.rows.len(), 1);
        let row = &out.rows[0];
        assert!((row.l_e - 1.0).abs() < 1e-9);
        assert!((row.u_e - 1.0).abs() < 1e-9);
        assert!((row.i_exact - 1.0).abs() < 1e-9);
        assert!(!row.clamped);
        assert_eq!(row.subsystem, "1");
    }

    #[test]
    fn exact_psi2_sweep_upper_bound_is_zero() {
        let mut cfg = SweepConfig::new(StateFamily::ProductPsi2, Protocol::Exact);
        cfg.subsystems = vec![vec![1]];
        let out = run_sweep(&cfg).unwrap();
        assert_eq!(out.rows.len(), 11);
        for row in &out.rows {
            assert!(row.u_e.abs() < 1e-9, "u_e = {} at theta {}", row.u_e, row.theta);
            assert!(row.l_e <= 1e-9);
            assert!(row.i_exact >= row.l_e - 1e-9 && row.i_exact <= row.u_e + 1e-9);
        }

        // Any white noise pushes u_e strictly negative on this family:
        // the states carry no distillable entanglement.
        cfg.noise_p = 0.05;
        let out = run_sweep(&cfg).unwrap();
        for row in &out.rows {
            assert!(row.u_e < 0.0, "u_e = {} at theta {}", row.u_e, row.theta);
        }
    }

    #[test]
    fn exact_rows_sandwich_exact_quantities() {
        let mut cfg = SweepConfig::new(StateFamily::GhzTheta, Protocol::Exact);
        cfg.noise_p = 0.05;
        cfg.subsystems = vec![vec![0], vec![0, 1], vec![0, 1, 2]];
        let out = run_sweep(&cfg).unwrap();
        assert_eq!(out.rows.len(), 33);
        for row in &out.rows {
            assert!(row.i_exact >= row.l_e - 1e-9 && row.i_exact <= row.u_e + 1e-9);
            assert!(row.cre_exact >= row.l_c - 1e-9 && row.cre_exact <= row.u_c + 1e-9);
            assert!(row.l_c >= 0.0 && row.l_c <= row.u_c + 1e-12);
        }
    }

    #[test]
    fn sweep_rows_and_csv_are_deterministic() {
        let mut cfg = SweepConfig::new(StateFamily::GhzTheta, Protocol::Shadow);
        cfg.thetas = vec![FRAC_PI_4];
        cfg.shots = 400;
        cfg.repeats = 3;
        cfg.seed = 9;
        let mut bufs = Vec::new();
        for _ in 0..2 {
            let out = run_sweep(&cfg).unwrap();
            let mut buf = Vec::new();
            emit_csv(&out.rows, &mut buf).unwrap();
            bufs.push(buf);
        }
        assert_eq!(bufs[0], bufs[1]);
    }

    #[test]
    fn csv_shape_and_header() {
        let mut cfg = SweepConfig::new(StateFamily::GhzTheta, Protocol::Exact);
        cfg.subsystems = vec![vec![0, 1]];
        let out = run_sweep(&cfg).unwrap();
        let mut buf = Vec::new();
        emit_csv(&out.rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert_eq!(lines.len(), 12);
        // Subsystem labels containing commas are quoted.
        assert!(lines[1].contains("\"1,1p\""));

        let empty: Vec<SweepRow> = Vec::new();
        let mut buf = Vec::new();
        emit_csv(&empty, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{SWEEP_CSV_HEADER}\n"));
    }

    #[test]
    fn shadow_dump_is_collected_in_order() {
        let mut cfg = SweepConfig::new(StateFamily::GhzTheta, Protocol::Shadow);
        cfg.thetas = vec![0.0, FRAC_PI_4];
        cfg.shots = 5;
        cfg.repeats = 2;
        cfg.collect_shadow_dump = true;
        let out = run_sweep(&cfg).unwrap();
        let dump = out.shadow_dump.unwrap();
        let headers: Vec<&str> = dump.lines().filter(|l| l.starts_with('#')).collect();
        assert_eq!(headers.len(), 4);
        assert!(headers.iter().all(|h| h.contains("n=4 M=5")));
    }

    #[test]
    fn collective_sweep_on_psi2() {
        let mut cfg = SweepConfig::new(StateFamily::ProductPsi2, Protocol::Collective);
        cfg.thetas = vec![PI / 8.0];
        cfg.subsystems = vec![vec![1]];
        cfg.shots = 20_000;
        cfg.repeats = 2;
        let out = run_sweep(&cfg).unwrap();
        let row = &out.rows[0];
        assert!((row.p_global - 1.0).abs() < 0.05);
        assert!((row.p_marginal - 1.0).abs() < 0.05);
        assert!((row.p_diag - 0.5625).abs() < 0.05);

        cfg.subsystems = vec![vec![0]];
        assert!(matches!(run_sweep(&cfg), Err(Error::BadConfig(_))));
    }

    #[test]
    fn collective_rejects_four_qubit_family() {
        let cfg = SweepConfig::new(StateFamily::GhzTheta, Protocol::Collective);
        assert!(run_sweep(&cfg).is_err());
    }

    #[test]
    fn noise_sweep_rows_and_orderings() {
        let grid: Vec<f64> = (0..21).map(|i| 0.1 * i as f64 / 20.0).collect();
        let subsystems = vec![vec![0], vec![0, 1], vec![0, 1, 2]];
        let rows = run_noise_sweep(&grid, FRAC_PI_4, &subsystems).unwrap();
        assert_eq!(rows.len(), grid.len() * 6);

        // p = 0: ideal GHZ gives I(A⟩B) = 1 for every cut.
        for row in rows.iter().take(3) {
            assert!((row.i_exact - 1.0).abs() < 1e-9);
        }
        assert!(run_noise_sweep(&[1.5], FRAC_PI_4, &subsystems).is_err());
    }

    #[test]
    fn repeat_stats_basics() {
        let s = repeat_stats(&[2.0]);
        assert_eq!((s.mean, s.sd, s.sd_of_mean), (2.0, 0.0, 0.0));
        let s = repeat_stats(&[1.0, 3.0]);
        assert!((s.mean - 2.0).abs() < 1e-15);
        assert!((s.sd - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((s.sd_of_mean - 1.0).abs() < 1e-12);
    }
}
