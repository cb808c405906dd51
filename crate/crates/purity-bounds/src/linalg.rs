//! Dense complex linear algebra for small Hermitian operators.
//!
//! Everything here targets registers of at most six qubits (dim ≤ 64),
//! so the implementations favor clarity over asymptotics: dense
//! row-major storage, naive products, and a cyclic-Jacobi eigensolver.

use num_complex::Complex64;

use crate::{Error, Result};

/// Max |m - m†| allowed for a [`DensityMatrix`].
pub const DENSITY_HERMITICITY_TOL: f64 = 1e-10;
/// Max |Tr(m) - 1| allowed for a [`DensityMatrix`].
pub const DENSITY_TRACE_TOL: f64 = 1e-10;
/// Most negative eigenvalue allowed for a [`DensityMatrix`].
pub const DENSITY_PSD_TOL: f64 = -1e-9;
/// Max |m - m†| the eigensolver accepts.
pub const EIGEN_INPUT_TOL: f64 = 1e-9;
/// Eigenvalues below this are treated as exact zeros in entropies.
pub const ENTROPY_ZERO_CLAMP: f64 = 1e-15;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-14;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "dim must be positive");
        ComplexMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    /// Build from rows of `(re, im)` pairs; rows must be square.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "row {i} has wrong length");
            for (j, &z) in row.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    /// Projector |v⟩⟨v| onto an (unnormalized is rejected) state vector.
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)].re).collect()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        m
    }

    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        m
    }

    pub fn scale(&self, f: f64) -> Self {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a *= f;
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut m = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    m[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        m
    }

    /// Kronecker product: `(i⊗k, j⊗l)` entry is `a[i,j]·b[k,l]`.
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let mut m = Self::zeros(da * db);
        for i in 0..da {
            for j in 0..da {
                let aij = self[(i, j)];
                for k in 0..db {
                    for l in 0..db {
                        m[(i * db + k, j * db + l)] = aij * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max |m[i,j] - conj(m[j,i])|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn hermitian_part(&self) -> Self {
        let mut m = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        m
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Tr(a·b) without forming the product.
pub fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert_eq!(a.dim(), b.dim());
    let d = a.dim();
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            s += a[(i, j)] * b[(j, i)];
        }
    }
    s
}

/// Real eigenvalues in non-increasing order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
        Spectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Σ λ².
    pub fn purity(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum()
    }

    /// Shannon entropy in bits with the 0·log 0 := 0 convention; values
    /// are clamped into [0, 1] first.
    pub fn entropy_bits(&self) -> f64 {
        self.values
            .iter()
            .map(|&x| {
                let p = x.clamp(0.0, 1.0);
                if p <= ENTROPY_ZERO_CLAMP {
                    0.0
                } else {
                    -p * p.log2()
                }
            })
            .sum()
    }
}

/// Validated quantum state: Hermitian, unit trace, positive semidefinite.
///
/// The dimension is arbitrary (≥ 1); qubit-indexed operations such as
/// [`partial_trace`] additionally require dim = 2ⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dev = matrix.hermiticity_deviation();
        if dev > DENSITY_HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                dim: matrix.dim(),
                deviation: dev,
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TRACE_TOL || tr.im.abs() > DENSITY_TRACE_TOL {
            return Err(Error::NotDensity(format!("trace = {tr}, expected 1")));
        }
        let spec = hermitian_eigenvalues(&matrix)?;
        let min = spec.values().last().copied().unwrap_or(0.0);
        if min < DENSITY_PSD_TOL {
            return Err(Error::NotDensity(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix { matrix })
    }

    /// For results that are valid by construction (partial traces,
    /// dephasing, convex mixtures of valid states).
    pub(crate) fn trusted(matrix: ComplexMatrix) -> Self {
        debug_assert!(matrix.hermiticity_deviation() <= DENSITY_HERMITICITY_TOL);
        debug_assert!((matrix.trace().re - 1.0).abs() <= DENSITY_TRACE_TOL);
        DensityMatrix { matrix }
    }

    /// |ψ⟩⟨ψ| from amplitudes; the vector is normalized first.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq <= 0.0 {
            return Err(Error::ZeroMatrix);
        }
        let norm = norm_sq.sqrt();
        let v: Vec<Complex64> = amplitudes.iter().map(|z| z / norm).collect();
        Ok(DensityMatrix {
            matrix: ComplexMatrix::outer(&v),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::from_diag(&vec![1.0 / dim as f64; dim]),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Number of qubits when dim = 2ⁿ.
    pub fn qubit_count(&self) -> Result<usize> {
        let d = self.dim();
        if d.is_power_of_two() && d >= 2 {
            Ok(d.trailing_zeros() as usize)
        } else {
            Err(Error::NotQubitSized { dim: d })
        }
    }
}

#[inline]
fn qubit_bit(index: usize, qubit: usize, n: usize) -> usize {
    // Qubit 0 is the leftmost tensor factor, i.e. the most significant
    // bit of the basis label.
    (index >> (n - 1 - qubit)) & 1
}

pub(crate) fn check_subset(keep: &[usize], n: usize) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::BadSubsystem);
    }
    for w in keep.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::BadSubsystem);
        }
    }
    if let Some(&max) = keep.last() {
        if max >= n {
            return Err(Error::QubitOutOfRange {
                index: max,
                qubits: n,
            });
        }
    }
    Ok(())
}

/// Reduced state on the listed qubits; all others are traced out.
///
/// `keep` must be nonempty, strictly increasing, and within range.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let n = rho.qubit_count()?;
    check_subset(keep, n)?;
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let k = keep.len();
    let dk = 1usize << k;
    let dt = 1usize << traced.len();

    // Precompute bit placements into the full index.
    let place = |qubits: &[usize], bits: usize| -> usize {
        let mut idx = 0usize;
        for (pos, &q) in qubits.iter().enumerate() {
            let b = (bits >> (qubits.len() - 1 - pos)) & 1;
            idx |= b << (n - 1 - q);
        }
        idx
    };
    let keep_idx: Vec<usize> = (0..dk).map(|r| place(keep, r)).collect();
    let tr_idx: Vec<usize> = (0..dt).map(|e| place(&traced, e)).collect();

    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(dk);
    for r in 0..dk {
        for c in 0..dk {
            let mut s = Complex64::new(0.0, 0.0);
            for &e in &tr_idx {
                s += m[(keep_idx[r] | e, keep_idx[c] | e)];
            }
            out[(r, c)] = s;
        }
    }
    Ok(DensityMatrix::trusted(out))
}

/// Kill all off-diagonal entries (dephasing in the reference basis).
pub fn dephase(rho: &DensityMatrix) -> DensityMatrix {
    let d = rho.dim();
    let mut out = ComplexMatrix::zeros(d);
    for i in 0..d {
        out[(i, i)] = Complex64::new(rho.matrix()[(i, i)].re, 0.0);
    }
    DensityMatrix::trusted(out)
}

/// Tr(ρ²) as a real number.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let s = trace_product(rho.matrix(), rho.matrix());
    debug_assert!(s.im.abs() < 1e-12);
    s.re
}

/// Σᵢ ρᵢᵢ², the purity of the dephased state.
pub fn diagonal_purity(rho: &DensityMatrix) -> f64 {
    rho.matrix().diagonal().iter().map(|d| d * d).sum()
}

/// Eigenvalues of a Hermitian matrix, non-increasing.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Spectrum> {
    Ok(hermitian_eigensystem(m)?.0)
}

/// Full eigendecomposition; eigenvector `k` is column `k` of the
/// returned matrix, matching the sorted eigenvalue order.
pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<(Spectrum, ComplexMatrix)> {
    let dev = m.hermiticity_deviation();
    if dev > EIGEN_INPUT_TOL {
        return Err(Error::NotHermitian {
            dim: m.dim(),
            deviation: dev,
        });
    }
    let d = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(d);
    let scale = a.frobenius_norm();
    if scale > 0.0 {
        let target = JACOBI_REL_TOL * scale;
        for _ in 0..JACOBI_MAX_SWEEPS {
            if a.off_diagonal_norm() < target {
                break;
            }
            for p in 0..d {
                for q in p + 1..d {
                    jacobi_rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    let diag: Vec<f64> = (0..d).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("finite").then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vecs = ComplexMatrix::zeros(d);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..d {
            vecs[(row, new_col)] = v[(row, old_col)];
        }
    }
    Ok((Spectrum { values }, vecs))
}

/// One cyclic-Jacobi step: a unitary plane rotation in (p, q) chosen to
/// annihilate a[p,q], accumulated into the eigenvector matrix.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r; // e^{iφ}
    let zeta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * r);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Plane unitary W restricted to (p, q):
    //   [ c            s           ]
    //   [ -s·conj(ph)  c·conj(ph)  ]
    let w_qp = -s * phase.conj();
    let w_qq = c * phase.conj();

    let d = a.dim();
    // A ← A·W (columns p, q).
    for i in 0..d {
        let (aip, aiq) = (a[(i, p)], a[(i, q)]);
        a[(i, p)] = aip * c + aiq * w_qp;
        a[(i, q)] = aip * s + aiq * w_qq;
    }
    // A ← W†·A (rows p, q).
    for j in 0..d {
        let (apj, aqj) = (a[(p, j)], a[(q, j)]);
        a[(p, j)] = apj * c + aqj * w_qp.conj();
        a[(q, j)] = apj * s + aqj * w_qq.conj();
    }
    // Rounding cleanup: the rotation zeroes (p,q) analytically.
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    // V ← V·W.
    for i in 0..d {
        let (vip, viq) = (v[(i, p)], v[(i, q)]);
        v[(i, p)] = vip * c + viq * w_qp;
        v[(i, q)] = vip * s + viq * w_qq;
    }
}

/// S(ρ) = −Tr(ρ log₂ ρ) in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    hermitian_eigenvalues(rho.matrix())
        .expect("density matrices are Hermitian by construction")
        .entropy_bits()
}

/// Project a Hermitian matrix onto the density-matrix set by eigenvalue
/// clipping: negatives are zeroed with the deficit spread uniformly over
/// the remaining positive eigenvalues (repeated until feasible), and the
/// trace renormalized.
pub fn project_to_density(m: &ComplexMatrix) -> Result<DensityMatrix> {
    let (spec, vecs) = hermitian_eigensystem(m)?;
    let mut vals: Vec<f64> = spec.values().to_vec();
    loop {
        let deficit: f64 = vals.iter().filter(|&&x| x < 0.0).sum();
        for x in vals.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        if deficit == 0.0 {
            break;
        }
        let npos = vals.iter().filter(|&&x| x > 0.0).count();
        if npos == 0 {
            return Err(Error::ZeroMatrix);
        }
        let share = deficit / npos as f64;
        for x in vals.iter_mut() {
            if *x > 0.0 {
                *x += share;
            }
        }
    }
    let tr: f64 = vals.iter().sum();
    if tr <= 0.0 {
        return Err(Error::ZeroMatrix);
    }
    for x in vals.iter_mut() {
        *x /= tr;
    }

    let d = m.dim();
    let mut out = ComplexMatrix::zeros(d);
    for (k, &lam) in vals.iter().enumerate() {
        if lam == 0.0 {
            continue;
        }
        for i in 0..d {
            let vi = vecs[(i, k)];
            for j in 0..d {
                out[(i, j)] += lam * vi * vecs[(j, k)].conj();
            }
        }
    }
    DensityMatrix::new(out)
}

/// Conjugate an n-qubit operator by a unitary on one qubit:
/// m ← (I ⊗ u ⊗ I) m (I ⊗ u ⊗ I)†.
pub fn apply_single_qubit(m: &mut ComplexMatrix, u: &ComplexMatrix, qubit: usize) {
    assert_eq!(u.dim(), 2);
    let d = m.dim();
    debug_assert!(d.is_power_of_two());
    let n = d.trailing_zeros() as usize;
    assert!(qubit < n);
    let stride = 1usize << (n - 1 - qubit);
    let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);

    for base in 0..d {
        if base & stride != 0 {
            continue;
        }
        let (i0, i1) = (base, base | stride);
        for j in 0..d {
            let (r0, r1) = (m[(i0, j)], m[(i1, j)]);
            m[(i0, j)] = u00 * r0 + u01 * r1;
            m[(i1, j)] = u10 * r0 + u11 * r1;
        }
    }
    for base in 0..d {
        if base & stride != 0 {
            continue;
        }
        let (j0, j1) = (base, base | stride);
        for i in 0..d {
            let (c0, c1) = (m[(i, j0)], m[(i, j1)]);
            m[(i, j0)] = c0 * u00.conj() + c1 * u01.conj();
            m[(i, j1)] = c0 * u10.conj() + c1 * u11.conj();
        }
    }
}

/// Reorder tensor factors: `perm[new_position] = old_position`.
pub fn permute_qubits(m: &ComplexMatrix, perm: &[usize]) -> ComplexMatrix {
    let d = m.dim();
    let n = d.trailing_zeros() as usize;
    assert_eq!(1usize << n, d);
    assert_eq!(perm.len(), n);
    let map: Vec<usize> = (0..d)
        .map(|idx| {
            let mut out = 0usize;
            for (new_pos, &old_pos) in perm.iter().enumerate() {
                out |= qubit_bit(idx, old_pos, n) << (n - 1 - new_pos);
            }
            out
        })
        .collect();
    let mut out = ComplexMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    out
}
