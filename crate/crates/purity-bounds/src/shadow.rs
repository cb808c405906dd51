//! Randomized-measurement (classical shadow) purity estimation.
//!
//! Each run applies an independent uniformly random single-qubit
//! Clifford to every qubit, measures in the computational basis, and
//! records `(clifford indices, outcome bits)`. The per-run state
//! estimator is ⊗ₙ(3Uₙ†|bₙ⟩⟨bₙ|Uₙ − I); purities come from the
//! U-statistic over distinct snapshot pairs, evaluated in O(M) through
//! the sum-matrix identity.

use num_complex::Complex64;

use crate::exec::{map_collect, pairwise_reduce};
use crate::linalg::{apply_single_qubit, check_subset, ComplexMatrix, DensityMatrix};
use crate::rng::StreamRng;
use crate::{Error, Result};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub(crate) fn hadamard() -> ComplexMatrix {
    let h = FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 0)] = Complex64::new(h, 0.0);
    m[(0, 1)] = Complex64::new(h, 0.0);
    m[(1, 0)] = Complex64::new(h, 0.0);
    m[(1, 1)] = Complex64::new(-h, 0.0);
    m
}

pub(crate) fn phase_gate() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    m[(0, 0)] = Complex64::new(1.0, 0.0);
    m[(1, 1)] = Complex64::new(0.0, 1.0);
    m
}

/// Snap to the exact value grid populated by canonical Clifford entries
/// and their pairwise products: {0, ±1/2, ±1/√2, ±1} per component.
fn snap(z: Complex64) -> Complex64 {
    const GRID: [f64; 7] = [0.0, 0.5, -0.5, FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 1.0, -1.0];
    let snap1 = |x: f64| {
        for &g in &GRID {
            if (x - g).abs() < 1e-9 {
                return g;
            }
        }
        x
    };
    Complex64::new(snap1(z.re), snap1(z.im))
}

/// Rescale so the first nonzero entry is real positive, then snap.
fn phase_canonical(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = m.clone();
    for i in 0..2 {
        for j in 0..2 {
            let z = out[(i, j)];
            if z.norm() > 1e-9 {
                let phase = z.conj() / z.norm();
                for a in 0..2 {
                    for b in 0..2 {
                        let v = out[(a, b)] * phase;
                        out[(a, b)] = snap(v);
                    }
                }
                return out;
            }
        }
    }
    out
}

fn canonical_key(m: &ComplexMatrix) -> [i64; 8] {
    let q = |x: f64| (x * 1e9).round() as i64;
    let mut key = [0i64; 8];
    for i in 0..2 {
        for j in 0..2 {
            key[2 * (2 * i + j)] = q(m[(i, j)].re);
            key[2 * (2 * i + j) + 1] = q(m[(i, j)].im);
        }
    }
    key
}

/// The 24 single-qubit Cliffords, phase-canonical, in a fixed order with
/// the identity at index 0.
#[derive(Debug, Clone)]
pub struct CliffordTable {
    unitaries: Vec<ComplexMatrix>,
}

impl CliffordTable {
    /// Close {H, S} under composition; order by descending lexicographic
    /// comparison of the canonicalized entries, which puts the identity
    /// first.
    pub fn new() -> Self {
        let generators = [hadamard(), phase_gate()];
        let identity = phase_canonical(&ComplexMatrix::identity(2));
        let mut elements: Vec<(ComplexMatrix, [i64; 8])> = Vec::new();
        let mut frontier = vec![identity.clone()];
        elements.push((identity.clone(), canonical_key(&identity)));
        while let Some(u) = frontier.pop() {
            for g in &generators {
                let v = phase_canonical(&u.mul(g));
                let key = canonical_key(&v);
                if !elements.iter().any(|(_, k)| *k == key) {
                    elements.push((v.clone(), key));
                    frontier.push(v);
                }
            }
        }
        elements.sort_by_key(|e| std::cmp::Reverse(e.1));
        CliffordTable {
            unitaries: elements.into_iter().map(|(m, _)| m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.unitaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.unitaries.is_empty()
    }

    pub fn get(&self, index: usize) -> &ComplexMatrix {
        &self.unitaries[index]
    }

    /// Index of the canonicalized form of `u`, if present.
    pub fn index_of(&self, u: &ComplexMatrix) -> Option<usize> {
        let key = canonical_key(&phase_canonical(u));
        self.unitaries.iter().position(|m| canonical_key(m) == key)
    }
}

impl Default for CliffordTable {
    fn default() -> Self {
        Self::new()
    }
}

/// One randomized-measurement run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShadowSnapshot {
    /// Per-qubit Clifford table indices (0–23).
    pub cliffords: Vec<u8>,
    /// Per-qubit measured bits.
    pub outcomes: Vec<u8>,
}

/// A batch of snapshots of one state, tagged with the seed that
/// generated it.
#[derive(Debug, Clone)]
pub struct ShadowCollection {
    n: usize,
    seed: u64,
    snapshots: Vec<ShadowSnapshot>,
}

impl ShadowCollection {
    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }

    pub fn snapshots(&self) -> &[ShadowSnapshot] {
        &self.snapshots
    }

    /// One line per snapshot, `m,c_1,…,c_n,b_1,…,b_n`, preceded by a
    /// `# seed=<u64> n=<int> M=<int>` header.
    pub fn dump(&self, w: &mut impl std::io::Write) -> std::io::Result<()> {
        writeln!(w, "# seed={} n={} M={}", self.seed, self.n, self.len())?;
        for (m, snap) in self.snapshots.iter().enumerate() {
            let cs: Vec<String> = snap.cliffords.iter().map(|c| c.to_string()).collect();
            let bs: Vec<String> = snap.outcomes.iter().map(|b| b.to_string()).collect();
            writeln!(w, "{},{},{}", m, cs.join(","), bs.join(","))?;
        }
        Ok(())
    }
}

/// Outcome distribution of measuring (⊗U)ρ(⊗U)† in the computational
/// basis.
pub fn born_probabilities(
    rho: &DensityMatrix,
    cliffords: &[usize],
    table: &CliffordTable,
) -> Result<Vec<f64>> {
    let n = rho.qubit_count()?;
    if cliffords.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: cliffords.len(),
        });
    }
    let mut rotated = rho.matrix().clone();
    for (q, &c) in cliffords.iter().enumerate() {
        apply_single_qubit(&mut rotated, table.get(c), q);
    }
    let probs: Vec<f64> = rotated.diagonal().iter().map(|&p| p.max(0.0)).collect();
    let total: f64 = probs.iter().sum();
    debug_assert!((total - 1.0).abs() < 1e-10, "born sum = {total}");
    Ok(probs)
}

/// Draw one snapshot: uniform i.i.d. Clifford per qubit, then the
/// outcome bit string from the Born rule.
pub fn sample_snapshot(
    rho: &DensityMatrix,
    table: &CliffordTable,
    rng: &mut StreamRng,
) -> Result<ShadowSnapshot> {
    let n = rho.qubit_count()?;
    let cliffords: Vec<usize> = (0..n).map(|_| rng.next_index(table.len())).collect();
    let probs = born_probabilities(rho, &cliffords, table)?;
    let outcome = rng.next_categorical(&probs);
    Ok(ShadowSnapshot {
        cliffords: cliffords.iter().map(|&c| c as u8).collect(),
        outcomes: (0..n).map(|q| ((outcome >> (n - 1 - q)) & 1) as u8).collect(),
    })
}

/// Sample M snapshots; snapshot m draws from the child stream
/// `(seed, m)`, so the collection is reproducible under any scheduling.
pub fn sample_collection(rho: &DensityMatrix, m: usize, seed: u64) -> Result<ShadowCollection> {
    if m == 0 {
        return Err(Error::TooFewSnapshots { needed: 1, got: 0 });
    }
    let n = rho.qubit_count()?;
    let table = CliffordTable::new();
    let snapshots: Vec<Result<ShadowSnapshot>> = map_collect(m, |i| {
        let mut rng = StreamRng::child(seed, i as u64);
        sample_snapshot(rho, &table, &mut rng)
    });
    let snapshots = snapshots.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ShadowCollection { n, seed, snapshots })
}

/// 3U†|b⟩⟨b|U − I for one qubit. Entries land on an exact value grid, so
/// snapshot traces are exactly one.
fn snapshot_factor(table: &CliffordTable, clifford: u8, bit: u8) -> ComplexMatrix {
    let u = table.get(clifford as usize);
    let b = bit as usize;
    // Row b of U, conjugated, is U†|b⟩.
    let w = [u[(b, 0)].conj(), u[(b, 1)].conj()];
    let mut f = ComplexMatrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            let outer = snap(w[i] * w[j].conj());
            f[(i, j)] = outer * 3.0;
        }
        f[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    f
}

/// Snapshot estimator restricted to a qubit subset:
/// ⊗_{q∈subset}(3U_q†|b_q⟩⟨b_q|U_q − I).
pub fn snapshot_matrix(
    snapshot: &ShadowSnapshot,
    subset: &[usize],
    table: &CliffordTable,
) -> Result<ComplexMatrix> {
    check_subset(subset, snapshot.cliffords.len())?;
    let mut m: Option<ComplexMatrix> = None;
    for &q in subset {
        let f = snapshot_factor(table, snapshot.cliffords[q], snapshot.outcomes[q]);
        m = Some(match m {
            None => f,
            Some(acc) => acc.kron(&f),
        });
    }
    Ok(m.expect("subset nonempty"))
}

/// Unbiased purity estimator over a qubit subset:
/// (1/(M(M−1))) Σ_{m≠m′} Tr[ρ̂_B^(m) ρ̂_B^(m′)].
///
/// Evaluated as (Tr(S²) − M·5^|B|)/(M(M−1)) with S = Σ_m ρ̂_B^(m), using
/// Tr[(ρ̂^(m))²] = 5^|B| exactly. The raw value may leave [1/d, 1]; it is
/// not sanitized here.
pub fn estimate_purity(collection: &ShadowCollection, subset: &[usize]) -> Result<f64> {
    let m = collection.len();
    if m < 2 {
        return Err(Error::TooFewSnapshots { needed: 2, got: m });
    }
    check_subset(subset, collection.n)?;
    let table = CliffordTable::new();
    let sum = pairwise_reduce(
        0,
        m,
        &|i| {
            snapshot_matrix(&collection.snapshots[i], subset, &table)
                .expect("subset validated above")
        },
        &|mut a: ComplexMatrix, b: ComplexMatrix| {
            a.add_assign(&b);
            a
        },
    );
    // S is a sum of Hermitian factors, so Tr(S²) = Σ |S_ij|².
    let d = sum.dim();
    let mut tr_s2 = 0.0;
    for i in 0..d {
        for j in 0..d {
            tr_s2 += sum[(i, j)].norm_sqr();
        }
    }
    let mf = m as f64;
    let self_terms = mf * 5f64.powi(subset.len() as i32);
    Ok((tr_s2 - self_terms) / (mf * (mf - 1.0)))
}

/// (1/M) Σ_m ρ̂^(m): the unbiased state estimator.
pub fn mean_shadow(collection: &ShadowCollection) -> ComplexMatrix {
    let m = collection.len();
    assert!(m >= 1);
    let table = CliffordTable::new();
    let full: Vec<usize> = (0..collection.n).collect();
    let sum = pairwise_reduce(
        0,
        m,
        &|i| snapshot_matrix(&collection.snapshots[i], &full, &table).expect("full subset valid"),
        &|mut a: ComplexMatrix, b: ComplexMatrix| {
            a.add_assign(&b);
            a
        },
    );
    sum.scale(1.0 / m as f64)
}

/// How to turn snapshot diagonals into a diagonal-purity estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagonalEstimator {
    /// Σᵢ dᵢ² of the mean shadow. Biased at finite M by O(1/M).
    PlugIn,
    /// Pair U-statistic over distinct snapshots; unbiased.
    Unbiased,
}

fn snapshot_diagonal(snapshot: &ShadowSnapshot, table: &CliffordTable) -> Vec<f64> {
    let n = snapshot.cliffords.len();
    let d = 1usize << n;
    let factors: Vec<[f64; 2]> = (0..n)
        .map(|q| {
            let f = snapshot_factor(table, snapshot.cliffords[q], snapshot.outcomes[q]);
            [f[(0, 0)].re, f[(1, 1)].re]
        })
        .collect();
    (0..d)
        .map(|i| {
            (0..n)
                .map(|q| factors[q][(i >> (n - 1 - q)) & 1])
                .product()
        })
        .collect()
}

/// Estimate Σᵢ dᵢ² of the dephased state from snapshot diagonals.
pub fn estimate_diagonal_purity(
    collection: &ShadowCollection,
    mode: DiagonalEstimator,
) -> Result<f64> {
    let m = collection.len();
    let needed = match mode {
        DiagonalEstimator::PlugIn => 1,
        DiagonalEstimator::Unbiased => 2,
    };
    if m < needed {
        return Err(Error::TooFewSnapshots { needed, got: m });
    }
    let table = CliffordTable::new();
    let d = 1usize << collection.n;
    // Accumulate D_i = Σ_m diag_m[i] and Q_i = Σ_m diag_m[i]².
    let (sums, squares) = pairwise_reduce(
        0,
        m,
        &|i| {
            let diag = snapshot_diagonal(&collection.snapshots[i], &table);
            let sq: Vec<f64> = diag.iter().map(|x| x * x).collect();
            (diag, sq)
        },
        &|(mut da, mut qa): (Vec<f64>, Vec<f64>), (db, qb)| {
            for i in 0..da.len() {
                da[i] += db[i];
                qa[i] += qb[i];
            }
            (da, qa)
        },
    );
    debug_assert_eq!(sums.len(), d);
    let mf = m as f64;
    Ok(match mode {
        DiagonalEstimator::PlugIn => sums.iter().map(|&s| (s / mf) * (s / mf)).sum(),
        DiagonalEstimator::Unbiased => {
            let paired: f64 = sums
                .iter()
                .zip(&squares)
                .map(|(&s, &q)| s * s - q)
                .sum();
            paired / (mf * (mf - 1.0))
        }
    })
}
