//! Full Pauli tomography baseline: simulate all 3ⁿ local measurement
//! settings, reconstruct by linear inversion over the 4ⁿ Pauli strings,
//! and project the (generally non-physical) result onto the density set.

use num_complex::Complex64;

use crate::exec::map_collect;
use crate::linalg::{
    apply_single_qubit, project_to_density, ComplexMatrix, DensityMatrix,
};
use crate::rng::StreamRng;
use crate::shadow::{hadamard, phase_gate};
use crate::{Error, Result};

/// Measurement basis for one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    X,
    Y,
    Z,
}

/// Complete local-Pauli dataset: an outcome histogram for each of the 3ⁿ
/// basis settings, all with the same shot count.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliDataset {
    n: usize,
    shots_per_setting: u64,
    /// counts[setting][outcome]; settings in lexicographic X<Y<Z order
    /// with qubit 0 the most significant digit.
    counts: Vec<Vec<u64>>,
}

impl PauliDataset {
    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn shots_per_setting(&self) -> u64 {
        self.shots_per_setting
    }

    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }
}

/// Basis letters of setting `index` (ternary digits, qubit 0 first).
pub fn setting_basis(index: usize, n: usize) -> Vec<Basis> {
    (0..n)
        .map(|q| {
            let digit = index / 3usize.pow((n - 1 - q) as u32) % 3;
            match digit {
                0 => Basis::X,
                1 => Basis::Y,
                _ => Basis::Z,
            }
        })
        .collect()
}

fn basis_rotation(basis: Basis) -> Option<ComplexMatrix> {
    match basis {
        Basis::X => Some(hadamard()),
        Basis::Y => Some(hadamard().mul(&phase_gate().adjoint())),
        Basis::Z => None,
    }
}

fn setting_probs(rho: &DensityMatrix, setting: usize, n: usize) -> Vec<f64> {
    let mut rotated = rho.matrix().clone();
    for (q, &basis) in setting_basis(setting, n).iter().enumerate() {
        if let Some(v) = basis_rotation(basis) {
            apply_single_qubit(&mut rotated, &v, q);
        }
    }
    rotated.diagonal().iter().map(|&p| p.max(0.0)).collect()
}

/// Exact outcome distribution of every setting.
pub fn setting_distributions(rho: &DensityMatrix) -> Result<Vec<Vec<f64>>> {
    let n = rho.qubit_count()?;
    let settings = 3usize.pow(n as u32);
    Ok(map_collect(settings, |s| setting_probs(rho, s, n)))
}

/// Born-rule sampling of all settings; setting `s` draws from the child
/// stream `(seed, s)`.
pub fn simulate_pauli_dataset(
    rho: &DensityMatrix,
    shots_per_setting: u64,
    seed: u64,
) -> Result<PauliDataset> {
    if shots_per_setting == 0 {
        return Err(Error::ZeroShots);
    }
    let n = rho.qubit_count()?;
    let settings = 3usize.pow(n as u32);
    let d = 1usize << n;
    let counts = map_collect(settings, |s| {
        let probs = setting_probs(rho, s, n);
        let mut rng = StreamRng::child(seed, s as u64);
        let mut hist = vec![0u64; d];
        for _ in 0..shots_per_setting {
            hist[rng.next_categorical(&probs)] += 1;
        }
        hist
    });
    Ok(PauliDataset {
        n,
        shots_per_setting,
        counts,
    })
}

fn pauli_matrix(letter: usize) -> ComplexMatrix {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    match letter {
        0 => ComplexMatrix::identity(2),
        1 => ComplexMatrix::from_rows(&[vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]]),
        2 => ComplexMatrix::from_rows(&[vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]]),
        _ => ComplexMatrix::from_rows(&[vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.), c(-1., 0.)]]),
    }
}

fn string_letters(string: usize, n: usize) -> Vec<usize> {
    (0..n)
        .map(|q| string / 4usize.pow((n - 1 - q) as u32) % 4)
        .collect()
}

/// Settings whose letters match the string on its support.
fn compatible_settings(letters: &[usize], n: usize) -> Vec<usize> {
    let free: Vec<usize> = (0..n).filter(|&q| letters[q] == 0).collect();
    let combos = 3usize.pow(free.len() as u32);
    (0..combos)
        .map(|mut combo| {
            let mut setting = 0usize;
            for (q, &letter) in letters.iter().enumerate() {
                let digit = if letter == 0 {
                    let d = combo % 3;
                    combo /= 3;
                    d
                } else {
                    letter - 1
                };
                setting += digit * 3usize.pow((n - 1 - q) as u32);
            }
            setting
        })
        .collect()
}

/// ρ̂ = (1/2ⁿ) Σ_P ⟨P⟩·P from per-setting outcome distributions, with
/// each Pauli expectation averaged uniformly over all compatible
/// settings. Exact distributions invert exactly; sampled frequencies
/// generally produce a non-positive matrix.
pub fn invert_distributions(n: usize, dists: &[Vec<f64>]) -> Result<ComplexMatrix> {
    let settings = 3usize.pow(n as u32);
    let d = 1usize << n;
    if dists.len() != settings {
        return Err(Error::DimensionMismatch {
            expected: settings,
            actual: dists.len(),
        });
    }
    for dist in dists {
        if dist.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: dist.len(),
            });
        }
    }

    let mut rho = ComplexMatrix::zeros(d);
    for string in 0..4usize.pow(n as u32) {
        let letters = string_letters(string, n);
        let expectation = if letters.iter().all(|&l| l == 0) {
            1.0
        } else {
            let compat = compatible_settings(&letters, n);
            let mut acc = 0.0;
            for &s in &compat {
                let mut e = 0.0;
                for (b, &f) in dists[s].iter().enumerate() {
                    let mut parity = 0u32;
                    for (q, &letter) in letters.iter().enumerate() {
                        if letter != 0 {
                            parity ^= ((b >> (n - 1 - q)) & 1) as u32;
                        }
                    }
                    e += if parity == 0 { f } else { -f };
                }
                acc += e;
            }
            acc / compat.len() as f64
        };

        let mut p: Option<ComplexMatrix> = None;
        for &l in &letters {
            let factor = pauli_matrix(l);
            p = Some(match p {
                None => factor,
                Some(acc) => acc.kron(&factor),
            });
        }
        rho.add_assign(&p.expect("n >= 1").scale(expectation / d as f64));
    }
    Ok(rho)
}

/// Linear inversion of a sampled dataset (frequencies = counts/shots).
pub fn linear_inversion(data: &PauliDataset) -> Result<ComplexMatrix> {
    let shots = data.shots_per_setting as f64;
    let dists: Vec<Vec<f64>> = data
        .counts
        .iter()
        .map(|hist| hist.iter().map(|&c| c as f64 / shots).collect())
        .collect();
    invert_distributions(data.n, &dists)
}

/// Linear inversion followed by projection onto the physical set.
pub fn reconstruct(data: &PauliDataset) -> Result<DensityMatrix> {
    project_to_density(&linear_inversion(data)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigenvalues, purity, trace_product};
    use crate::rng::StreamRng;
    use crate::states::{ghz_theta, product_psi2};
    use std::f64::consts::FRAC_PI_4;

    fn random_density(dim: usize, rng: &mut StreamRng) -> DensityMatrix {
        let mut g = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                g[(i, j)] = Complex64::new(rng.next_normal(), rng.next_normal());
            }
        }
        let gg = g.mul(&g.adjoint());
        let tr = gg.trace().re;
        DensityMatrix::new(gg.scale(1.0 / tr)).unwrap()
    }

    #[test]
    fn setting_enumeration_is_lexicographic() {
        assert_eq!(setting_basis(0, 2), vec![Basis::X, Basis::X]);
        assert_eq!(setting_basis(1, 2), vec![Basis::X, Basis::Y]);
        assert_eq!(setting_basis(5, 2), vec![Basis::Y, Basis::Z]);
        assert_eq!(setting_basis(8, 2), vec![Basis::Z, Basis::Z]);
    }

    #[test]
    fn z_measurement_of_zero_state_is_deterministic() {
        let zero = DensityMatrix::from_pure(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        let data = simulate_pauli_dataset(&zero, 200, 1).unwrap();
        // Setting 2 is Z for a single qubit.
        assert_eq!(data.counts()[2][0], 200);
        assert_eq!(data.counts()[2][1], 0);
    }

    #[test]
    fn x_measurement_of_plus_state_is_deterministic() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus =
            DensityMatrix::from_pure(&[Complex64::new(h, 0.0), Complex64::new(h, 0.0)]).unwrap();
        let data = simulate_pauli_dataset(&plus, 200, 1).unwrap();
        // Setting 0 is X; outcome 0 is the +1 eigenstate.
        assert_eq!(data.counts()[0][0], 200);
    }

    #[test]
    fn mixed_state_is_unbiased_within_5_sigma() {
        let mixed = DensityMatrix::maximally_mixed(2);
        let shots = 10_000u64;
        let data = simulate_pauli_dataset(&mixed, shots, 7).unwrap();
        // 5σ for Binomial(1e4, 1/2) is ±250.
        for setting in 0..3 {
            let ones = data.counts()[setting][1] as f64;
            assert!((ones - 5_000.0).abs() < 250.0);
        }
    }

    #[test]
    fn per_setting_counts_sum_to_shots() {
        let rho = product_psi2(0.4).unwrap();
        let data = simulate_pauli_dataset(&rho, 333, 3).unwrap();
        assert_eq!(data.counts().len(), 9);
        for hist in data.counts() {
            assert_eq!(hist.iter().sum::<u64>(), 333);
        }
    }

    #[test]
    fn exact_distributions_invert_exactly() {
        let mut rng = StreamRng::new(2);
        for dim in [2usize, 4] {
            for _ in 0..25 {
                let rho = random_density(dim, &mut rng);
                let n = rho.qubit_count().unwrap();
                let dists = setting_distributions(&rho).unwrap();
                let inverted = invert_distributions(n, &dists).unwrap();
                assert!(
                    inverted.max_abs_diff(rho.matrix()) < 1e-12,
                    "inversion identity failed at dim {dim}"
                );
            }
        }
    }

    #[test]
    fn sampled_inversion_can_be_non_psd() {
        // Rank-deficient truth plus finite shots leaves negative
        // eigenvalues in the raw inversion.
        let ghz = ghz_theta(FRAC_PI_4).unwrap();
        let data = simulate_pauli_dataset(&ghz, 100, 11).unwrap();
        let raw = linear_inversion(&data).unwrap();
        let min = hermitian_eigenvalues(&raw)
            .unwrap()
            .values()
            .last()
            .copied()
            .unwrap();
        assert!(min < -1e-4, "expected a clearly negative eigenvalue, got {min}");
    }

    #[test]
    fn reconstruction_is_physical_and_accurate() {
        let ghz = ghz_theta(FRAC_PI_4).unwrap();
        let data = simulate_pauli_dataset(&ghz, 1000, 5).unwrap();
        let rho = reconstruct(&data).unwrap();
        assert!(purity(&rho) <= 1.0 + 1e-9);
        let fidelity = trace_product(rho.matrix(), ghz.matrix()).re;
        assert!(fidelity >= 0.98, "fidelity = {fidelity}");
    }

    #[test]
    fn exact_data_reconstructs_input() {
        let rho = product_psi2(0.7).unwrap();
        let dists = setting_distributions(&rho).unwrap();
        let inverted = invert_distributions(2, &dists).unwrap();
        let projected = project_to_density(&inverted).unwrap();
        assert!(projected.matrix().max_abs_diff(rho.matrix()) < 1e-9);
    }

    #[test]
    fn incomplete_dataset_is_rejected() {
        assert!(invert_distributions(2, &[vec![1.0, 0.0, 0.0, 0.0]]).is_err());
    }
}
