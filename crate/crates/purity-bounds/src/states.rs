//! State families, the depolarizing channel, and exact reference values.
//!
//! Basis convention: the photonic labels H/h map to |0⟩ and V/v to |1⟩,
//! with register order (1, 1′, 2, 2′) for the four-qubit family.

use num_complex::Complex64;

use crate::linalg::{dephase, partial_trace, von_neumann_entropy, DensityMatrix};
use crate::{Error, Result};

/// Built-in state families.
#[derive(Debug, Clone, PartialEq)]
pub enum StateFamily {
    /// cosθ|0000⟩ + sinθ|1111⟩ on four qubits.
    GhzTheta,
    /// (cosθ|0⟩ + sinθ|1⟩)^⊗2 on two qubits.
    ProductPsi2,
    /// (|00⟩ + |11⟩)/√2 on two qubits; θ is ignored.
    BellPair,
    /// Caller-supplied state.
    Custom(DensityMatrix),
}

/// A family member at angle θ, optionally mixed with white noise.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpec {
    pub family: StateFamily,
    pub theta: f64,
    pub noise_p: f64,
}

impl StateSpec {
    pub fn build(&self) -> Result<DensityMatrix> {
        let pure = match &self.family {
            StateFamily::GhzTheta => ghz_theta(self.theta)?,
            StateFamily::ProductPsi2 => product_psi2(self.theta)?,
            StateFamily::BellPair => bell_pair(),
            StateFamily::Custom(rho) => rho.clone(),
        };
        depolarize(&pure, self.noise_p)
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&theta) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    Ok(())
}

/// Biased four-qubit GHZ state cosθ|0000⟩ + sinθ|1111⟩.
pub fn ghz_theta(theta: f64) -> Result<DensityMatrix> {
    check_theta(theta)?;
    let mut amp = vec![Complex64::new(0.0, 0.0); 16];
    amp[0] = Complex64::new(theta.cos(), 0.0);
    amp[15] = Complex64::new(theta.sin(), 0.0);
    DensityMatrix::from_pure(&amp)
}

/// Two-qubit product state |ψ_θ⟩|ψ_θ⟩ with |ψ_θ⟩ = cosθ|0⟩ + sinθ|1⟩.
pub fn product_psi2(theta: f64) -> Result<DensityMatrix> {
    check_theta(theta)?;
    let (c, s) = (theta.cos(), theta.sin());
    let amp: Vec<Complex64> = [c * c, c * s, s * c, s * s]
        .iter()
        .map(|&x| Complex64::new(x, 0.0))
        .collect();
    DensityMatrix::from_pure(&amp)
}

/// Maximally entangled pair (|00⟩ + |11⟩)/√2.
pub fn bell_pair() -> DensityMatrix {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let amp = [
        Complex64::new(a, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(a, 0.0),
    ];
    DensityMatrix::from_pure(&amp).expect("normalized")
}

/// White-noise mixture (1−p)ρ + p·I/d.
pub fn depolarize(rho: &DensityMatrix, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    if p == 0.0 {
        return Ok(rho.clone());
    }
    let d = rho.dim();
    let mut m = rho.matrix().scale(1.0 - p);
    for i in 0..d {
        m[(i, i)] += Complex64::new(p / d as f64, 0.0);
    }
    Ok(DensityMatrix::trusted(m))
}

/// Exact coherent information I(A⟩B) = S(ρ_B) − S(ρ) for the bipartition
/// defined by the qubit set `b` (strictly increasing, proper nonempty
/// subset).
pub fn coherent_info_exact(rho: &DensityMatrix, b: &[usize]) -> Result<f64> {
    let n = rho.qubit_count()?;
    if b.len() >= n {
        return Err(Error::BadSubsystem);
    }
    let rho_b = partial_trace(rho, b)?;
    Ok(von_neumann_entropy(&rho_b) - von_neumann_entropy(rho))
}

/// Exact relative entropy of coherence C_RE = S(ρ_d) − S(ρ).
pub fn c_re_exact(rho: &DensityMatrix) -> f64 {
    let diag = dephase(rho);
    (von_neumann_entropy(&diag) - von_neumann_entropy(rho)).max(0.0)
}
