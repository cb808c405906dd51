//! Helpers shared by the integration suites.

use num_complex::Complex64;
use purity_bounds::linalg::{ComplexMatrix, DensityMatrix};
use purity_bounds::rng::StreamRng;

/// Ginibre-random density matrix: G with i.i.d. complex normal entries,
/// normalized GG†/Tr(GG†). Full rank with probability one.
pub fn random_density(dim: usize, rng: &mut StreamRng) -> DensityMatrix {
    let mut g = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = Complex64::new(rng.next_normal(), rng.next_normal());
        }
    }
    let gg = g.mul(&g.adjoint());
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale(1.0 / tr)).expect("Ginibre construction is a valid state")
}

/// H(p) in bits.
#[allow(dead_code)]
pub fn binary_entropy(p: f64) -> f64 {
    let mut h = 0.0;
    for q in [p, 1.0 - p] {
        if q > 1e-15 {
            h -= q * q.log2();
        }
    }
    h
}
