//! Two-copy Bell-state-measurement purity detection.
//!
//! Two copies of a two-qubit state are interleaved so that qubit 1 pairs
//! with its copy 1′ and qubit 2 with 2′; a Bell-state measurement on
//! each pair realizes the swap test. The joint outcome frequencies p_ij
//! over (Ψ⁺, Ψ⁻, Φ⁺, Φ⁻) recover the global, marginal, and diagonal
//! purities as short signed sums: the swap operator weights every Bell
//! cell +1 except the antisymmetric Ψ⁻.

use num_complex::Complex64;

use crate::linalg::{permute_qubits, trace_product, ComplexMatrix, DensityMatrix};
use crate::rng::StreamRng;
use crate::{Error, Result};

/// Bell outcome index order used everywhere: (Ψ⁺, Ψ⁻, Φ⁺, Φ⁻).
pub const PSI_PLUS: usize = 0;
pub const PSI_MINUS: usize = 1;
pub const PHI_PLUS: usize = 2;
pub const PHI_MINUS: usize = 3;

/// Joint statistics of the two Bell-state measurements.
///
/// `probs[i][j]` is p_ij for outcome i on pair (1,1′) and j on (2,2′).
/// Exact tables carry `shots = 0`; sampled tables carry counts with
/// `probs` their normalized frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct BellOutcomeTable {
    pub probs: [[f64; 4]; 4],
    pub counts: [[u64; 4]; 4],
    pub shots: u64,
}

fn bell_state(index: usize) -> Vec<Complex64> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |x: f64| Complex64::new(x, 0.0);
    match index {
        PSI_PLUS => vec![c(0.0), c(h), c(h), c(0.0)],
        PSI_MINUS => vec![c(0.0), c(h), c(-h), c(0.0)],
        PHI_PLUS => vec![c(h), c(0.0), c(0.0), c(h)],
        PHI_MINUS => vec![c(h), c(0.0), c(0.0), c(-h)],
        _ => unreachable!(),
    }
}

/// Exact joint Bell-measurement distribution on ρ ⊗ ρ_copy.
///
/// The four-qubit product initially carries order (1, 2, 1′, 2′); an
/// explicit tensor-factor permutation moves it to the measured pairing
/// (1, 1′, 2, 2′) before projecting.
pub fn bell_probabilities(
    rho: &DensityMatrix,
    rho_copy: &DensityMatrix,
) -> Result<BellOutcomeTable> {
    for state in [rho, rho_copy] {
        if state.dim() != 4 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                actual: state.dim(),
            });
        }
    }
    let joint = rho.matrix().kron(rho_copy.matrix());
    let paired = permute_qubits(&joint, &[0, 2, 1, 3]);

    let projectors: Vec<ComplexMatrix> =
        (0..4).map(|i| ComplexMatrix::outer(&bell_state(i))).collect();
    let mut probs = [[0.0; 4]; 4];
    let mut total = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            let proj = projectors[i].kron(&projectors[j]);
            let p = trace_product(&proj, &paired).re.max(0.0);
            probs[i][j] = p;
            total += p;
        }
    }
    debug_assert!((total - 1.0).abs() < 1e-12, "Σ p_ij = {total}");
    Ok(BellOutcomeTable {
        probs,
        counts: [[0; 4]; 4],
        shots: 0,
    })
}

/// Multinomial draw over the 16 cells; the returned table's `probs` are
/// the observed frequencies.
pub fn sample_counts(
    probs: &BellOutcomeTable,
    shots: u64,
    rng: &mut StreamRng,
) -> Result<BellOutcomeTable> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let flat: Vec<f64> = probs
        .probs
        .iter()
        .flat_map(|row| row.iter().copied())
        .collect();
    let mut counts = [[0u64; 4]; 4];
    for _ in 0..shots {
        let cell = rng.next_categorical(&flat);
        counts[cell / 4][cell % 4] += 1;
    }
    let mut freqs = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            freqs[i][j] = counts[i][j] as f64 / shots as f64;
        }
    }
    Ok(BellOutcomeTable {
        probs: freqs,
        counts,
        shots,
    })
}

/// Global purity: 1 − 2(p₁₂ + p₃₂ + p₄₂ + p₂₁ + p₂₃ + p₂₄) — i.e. twice
/// the probability of exactly one Ψ⁻ outcome, subtracted from one.
pub fn purity_from_counts(t: &BellOutcomeTable) -> f64 {
    let p = &t.probs;
    1.0 - 2.0
        * (p[PSI_PLUS][PSI_MINUS]
            + p[PHI_PLUS][PSI_MINUS]
            + p[PHI_MINUS][PSI_MINUS]
            + p[PSI_MINUS][PSI_PLUS]
            + p[PSI_MINUS][PHI_PLUS]
            + p[PSI_MINUS][PHI_MINUS])
}

/// Marginal purity of qubit 2: 1 − 2(p₁₂ + p₂₂ + p₃₂ + p₄₂), the swap
/// test on the second pair alone.
pub fn marginal_purity_from_counts(t: &BellOutcomeTable) -> f64 {
    let p = &t.probs;
    1.0 - 2.0
        * (p[PSI_PLUS][PSI_MINUS]
            + p[PSI_MINUS][PSI_MINUS]
            + p[PHI_PLUS][PSI_MINUS]
            + p[PHI_MINUS][PSI_MINUS])
}

/// Which diagonal-purity formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalMode {
    /// 1 − 2p₃₃ + 2p₄₄ − p₁₁. Exact on the |ψ_θ⟩|ψ_θ⟩ family only.
    PaperFamily,
    /// p₃₃ + p₃₄ + p₄₃ + p₄₄: both pairs in the Φ block, which projects
    /// each (q, q′) pair onto |00⟩⟨00| + |11⟩⟨11|. Exact for any state.
    General,
}

/// Purity of the dephased state from the Bell table.
pub fn diagonal_purity_from_counts(t: &BellOutcomeTable, mode: DiagonalMode) -> f64 {
    let p = &t.probs;
    match mode {
        DiagonalMode::PaperFamily => {
            1.0 - 2.0 * p[PHI_PLUS][PHI_PLUS] + 2.0 * p[PHI_MINUS][PHI_MINUS]
                - p[PSI_PLUS][PSI_PLUS]
        }
        DiagonalMode::General => {
            p[PHI_PLUS][PHI_PLUS]
                + p[PHI_PLUS][PHI_MINUS]
                + p[PHI_MINUS][PHI_PLUS]
                + p[PHI_MINUS][PHI_MINUS]
        }
    }
}

/// Serialize the 4×4 count table as CSV rows under a
/// `# shots=<int> seed=<u64> theta=<real>` header.
pub fn dump_counts(
    t: &BellOutcomeTable,
    seed: u64,
    theta: f64,
    w: &mut impl std::io::Write,
) -> std::io::Result<()> {
    writeln!(w, "# shots={} seed={} theta={:.6}", t.shots, seed, theta)?;
    for row in &t.counts {
        writeln!(w, "{},{},{},{}", row[0], row[1], row[2], row[3])?;
    }
    Ok(())
}
