//! Extremal entropy spectra at fixed purity and the derived bounds.
//!
//! At fixed purity P and dimension d, the von Neumann entropy is
//! maximized by a spectrum with one large eigenvalue and the rest equal,
//! and minimized by a spectrum with k−1 equal eigenvalues, one smaller
//! value α, and zeros, where k is the integer with 1/k ≤ P < 1/(k−1).
//! Those two closed forms give computable two-sided bounds on every
//! entropy difference of the form S(σ) − S(ρ) once the purities of σ and
//! ρ are known: coherent information, relative entropy of coherence, and
//! multi-information.

use crate::linalg::Spectrum;
use crate::{Error, Result};

/// Clamping beyond this is surfaced as a flag: larger excursions mean
/// the estimator left the physical range by more than float noise.
pub const CLAMP_FLAG_TOL: f64 = 1e-6;

/// Which extremum of the entropy a spectrum realizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtremalKind {
    /// One eigenvalue above 1/d, the remaining d−1 all equal.
    MaxEntropy,
    /// k−1 equal eigenvalues, one eigenvalue `alpha`, the rest zero.
    MinEntropy { k: usize, alpha: f64 },
}

/// Eigenvalue vector extremizing the entropy at fixed purity.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremalSpectrum {
    pub kind: ExtremalKind,
    pub dim: usize,
    pub purity: f64,
    values: Spectrum,
}

impl ExtremalSpectrum {
    pub fn values(&self) -> &Spectrum {
        &self.values
    }

    pub fn entropy_bits(&self) -> f64 {
        self.values.entropy_bits()
    }
}

/// Purity clamped into [1/dim, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SanitizedPurity {
    pub value: f64,
    /// Set when the clamp moved the value by more than [`CLAMP_FLAG_TOL`].
    pub clamped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundQuantity {
    CoherentInfo,
    Coherence,
    MultiInfo,
}

/// Lower/upper bound pair for one quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub quantity: BoundQuantity,
    pub lower: f64,
    pub upper: f64,
    /// Distance of the relevant purity from its tight-case value: zero
    /// together with a pure global state collapses the two bounds.
    pub tightness_epsilon: f64,
    /// True when any input purity was clamped beyond [`CLAMP_FLAG_TOL`].
    pub clamped: bool,
}

/// Clamp a raw (possibly estimated) purity into [1/dim, 1].
pub fn sanitize_purity(raw: f64, dim: usize) -> Result<SanitizedPurity> {
    if raw.is_nan() {
        return Err(Error::NanPurity);
    }
    if dim < 2 {
        return Err(Error::DimTooSmall(dim));
    }
    let value = raw.clamp(1.0 / dim as f64, 1.0);
    Ok(SanitizedPurity {
        value,
        clamped: (raw - value).abs() > CLAMP_FLAG_TOL,
    })
}

fn check_purity_range(purity: f64, dim: usize) -> Result<f64> {
    if purity.is_nan() {
        return Err(Error::NanPurity);
    }
    let low = 1.0 / dim as f64;
    // Only float dust may sit outside the closed interval.
    if purity < low - 1e-9 || purity > 1.0 + 1e-9 {
        return Err(Error::PurityOutOfRange { purity, low, dim });
    }
    Ok(purity.clamp(low, 1.0))
}

/// The unique integer k with 1/k ≤ P < 1/(k−1); k = 1 iff P = 1.
pub fn k_index(purity: f64, dim: usize) -> Result<usize> {
    if dim < 2 {
        return Err(Error::DimTooSmall(dim));
    }
    let p = check_purity_range(purity, dim)?;
    for k in 1..=dim {
        if p >= 1.0 / k as f64 {
            return Ok(k);
        }
    }
    Ok(dim)
}

/// Entropy-maximizing spectrum at fixed purity.
pub fn max_entropy_spectrum(purity: f64, dim: usize) -> Result<ExtremalSpectrum> {
    if dim < 2 {
        return Err(Error::DimTooSmall(dim));
    }
    let p = check_purity_range(purity, dim)?;
    let d = dim as f64;
    let lambda1 = 1.0 / d + ((d - 1.0) / d * (p - 1.0 / d).max(0.0)).sqrt();
    let rest = (1.0 - lambda1) / (d - 1.0);
    let mut values = vec![rest; dim];
    values[0] = lambda1;
    Ok(ExtremalSpectrum {
        kind: ExtremalKind::MaxEntropy,
        dim,
        purity: p,
        values: Spectrum::new(values),
    })
}

/// Entropy-minimizing spectrum at fixed purity.
pub fn min_entropy_spectrum(purity: f64, dim: usize) -> Result<ExtremalSpectrum> {
    if dim < 2 {
        return Err(Error::DimTooSmall(dim));
    }
    let p = check_purity_range(purity, dim)?;
    let k = k_index(p, dim)?;
    let mut values = vec![0.0; dim];
    let alpha = if k == 1 {
        values[0] = 1.0;
        1.0
    } else {
        let kf = k as f64;
        let alpha = 1.0 / kf - ((1.0 - 1.0 / kf) * (p - 1.0 / kf).max(0.0)).sqrt();
        let head = (1.0 - alpha) / (kf - 1.0);
        for v in values.iter_mut().take(k - 1) {
            *v = head;
        }
        values[k - 1] = alpha;
        alpha
    };
    Ok(ExtremalSpectrum {
        kind: ExtremalKind::MinEntropy { k, alpha },
        dim,
        purity: p,
        values: Spectrum::new(values),
    })
}

/// Largest entropy compatible with the given purity, in bits.
pub fn s_max(purity: f64, dim: usize) -> Result<f64> {
    Ok(max_entropy_spectrum(purity, dim)?.entropy_bits())
}

/// Smallest entropy compatible with the given purity, in bits.
pub fn s_min(purity: f64, dim: usize) -> Result<f64> {
    Ok(min_entropy_spectrum(purity, dim)?.entropy_bits())
}

/// Two-sided bounds on the coherent information I(A⟩B) from the global
/// purity of ρ_AB and the marginal purity of ρ_B.
///
/// Inputs are sanitized first; raw unbiased estimates may sit slightly
/// outside the physical range.
pub fn coherent_info_bounds(
    p_global: f64,
    p_marginal: f64,
    d_total: usize,
    d_b: usize,
) -> Result<BoundsReport> {
    if d_b < 2 || d_total < 2 {
        return Err(Error::DimTooSmall(d_b.min(d_total)));
    }
    if !d_total.is_multiple_of(d_b) || d_b > d_total {
        return Err(Error::IncompatibleDims { d_sub: d_b, d_total });
    }
    let pg = sanitize_purity(p_global, d_total)?;
    let pb = sanitize_purity(p_marginal, d_b)?;
    let lower = s_min(pb.value, d_b)? - s_max(pg.value, d_total)?;
    let upper = s_max(pb.value, d_b)? - s_min(pg.value, d_total)?;
    Ok(BoundsReport {
        quantity: BoundQuantity::CoherentInfo,
        lower,
        upper,
        tightness_epsilon: pb.value - 1.0 / d_b as f64,
        clamped: pg.clamped || pb.clamped,
    })
}

/// Two-sided bounds on the relative entropy of coherence from the state
/// purity and the purity of its dephased (diagonal) version.
///
/// The lower bound is floored at zero since the quantity is nonnegative.
/// The upper bound is likewise floored: it can only go negative when the
/// two estimated purities are mutually inconsistent (dephasing cannot
/// increase purity), and a negative upper bound on a nonnegative
/// quantity carries no information beyond zero.
pub fn coherence_bounds(p_state: f64, p_diag: f64, dim: usize) -> Result<BoundsReport> {
    if dim < 2 {
        return Err(Error::DimTooSmall(dim));
    }
    let ps = sanitize_purity(p_state, dim)?;
    let pd = sanitize_purity(p_diag, dim)?;
    let lower = (s_min(pd.value, dim)? - s_max(ps.value, dim)?).max(0.0);
    let upper = (s_max(pd.value, dim)? - s_min(ps.value, dim)?).max(0.0);
    Ok(BoundsReport {
        quantity: BoundQuantity::Coherence,
        lower,
        upper,
        tightness_epsilon: pd.value - 1.0 / dim as f64,
        clamped: ps.clamped || pd.clamped,
    })
}

/// Bounds on the multi-information Σᵢ S(ρ_{Aᵢ}) − S(ρ) from the marginal
/// purities `(purity, dim)` and the global purity.
///
/// The tightness figure generalizes the bipartite one: the sum of each
/// marginal's distance from maximal mixedness.
pub fn multi_info_bounds(
    marginals: &[(f64, usize)],
    p_global: f64,
    d_total: usize,
) -> Result<BoundsReport> {
    if d_total < 2 {
        return Err(Error::DimTooSmall(d_total));
    }
    if marginals.is_empty() {
        return Err(Error::BadSubsystem);
    }
    let product: usize = marginals.iter().map(|&(_, d)| d).product();
    if product != d_total {
        return Err(Error::MarginalDimMismatch { product, d_total });
    }
    let pg = sanitize_purity(p_global, d_total)?;
    let mut lower = -s_max(pg.value, d_total)?;
    let mut upper = -s_min(pg.value, d_total)?;
    let mut epsilon = 0.0;
    let mut clamped = pg.clamped;
    for &(p_i, d_i) in marginals {
        let pi = sanitize_purity(p_i, d_i)?;
        lower += s_min(pi.value, d_i)?;
        upper += s_max(pi.value, d_i)?;
        epsilon += pi.value - 1.0 / d_i as f64;
        clamped = clamped || pi.clamped;
    }
    Ok(BoundsReport {
        quantity: BoundQuantity::MultiInfo,
        lower,
        upper,
        tightness_epsilon: epsilon,
        clamped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TAU: f64 = 1e-10;

    #[test]
    fn sanitize_clamps_and_flags() {
        let s = sanitize_purity(1.013, 16).unwrap();
        assert_eq!(s.value, 1.0);
        assert!(s.clamped);

        let s = sanitize_purity(0.5, 2).unwrap();
        assert_eq!(s.value, 0.5);
        assert!(!s.clamped);

        let s = sanitize_purity(0.01, 16).unwrap();
        assert_eq!(s.value, 0.0625);
        assert!(s.clamped);

        assert!(matches!(sanitize_purity(f64::NAN, 4), Err(Error::NanPurity)));
    }

    #[test]
    fn sanitize_does_not_flag_float_dust() {
        let s = sanitize_purity(1.0 + 1e-12, 4).unwrap();
        assert_eq!(s.value, 1.0);
        assert!(!s.clamped);
    }

    #[test]
    fn k_index_examples() {
        assert_eq!(k_index(1.0, 8).unwrap(), 1);
        assert_eq!(k_index(1.0 / 8.0, 8).unwrap(), 8);
        assert_eq!(k_index(0.4, 3).unwrap(), 3);
        // Boundary convention: P = 1/k belongs to k.
        assert_eq!(k_index(0.5, 4).unwrap(), 2);
        assert!(k_index(0.05, 4).is_err());
    }

    #[test]
    fn max_spectrum_examples() {
        let uniform = max_entropy_spectrum(0.25, 4).unwrap();
        for &v in uniform.values().values() {
            assert!((v - 0.25).abs() < TAU);
        }

        let s = max_entropy_spectrum(0.4, 3).unwrap();
        let expect_l1 = 1.0 / 3.0 + (2.0 / 3.0_f64 * (0.4 - 1.0 / 3.0)).sqrt();
        assert!((s.values().values()[0] - expect_l1).abs() < TAU);
        assert!((s.values().values()[0] - 0.5442).abs() < 5e-5);
        assert!((s.values().values()[1] - 0.2279).abs() < 5e-5);
        assert!((s.values().values()[1] - s.values().values()[2]).abs() < TAU);
        assert!((s.values().purity() - 0.4).abs() < 1e-10);

        let s = max_entropy_spectrum(0.5, 4).unwrap();
        assert!((s.values().values()[0] - 0.6830127018922193).abs() < TAU);
        assert!((s.values().values()[1] - 0.1056624327025936).abs() < TAU);
        assert!(matches!(s.kind, ExtremalKind::MaxEntropy));
        assert!(max_entropy_spectrum(0.5, 1).is_err());
    }

    #[test]
    fn min_spectrum_examples() {
        let s = min_entropy_spectrum(0.5, 4).unwrap();
        assert_eq!(s.values().values(), &[0.5, 0.5, 0.0, 0.0]);
        assert!(matches!(s.kind, ExtremalKind::MinEntropy { k: 2, .. }));

        let s = min_entropy_spectrum(0.4, 3).unwrap();
        let alpha = 1.0 / 3.0 - (2.0 / 3.0_f64 * (0.4 - 1.0 / 3.0)).sqrt();
        match s.kind {
            ExtremalKind::MinEntropy { k, alpha: a } => {
                assert_eq!(k, 3);
                assert!((a - alpha).abs() < TAU);
            }
            _ => panic!("wrong kind"),
        }
        assert!((s.values().values()[0] - 0.438742588672270).abs() < 1e-10);
        assert!((s.values().values()[2] - 0.1225148226554601).abs() < 1e-10);
        assert!((s.values().purity() - 0.4).abs() < 1e-10);

        let s = min_entropy_spectrum(1.0, 16).unwrap();
        assert!((s.values().values()[0] - 1.0).abs() < TAU);
        assert!(s.values().values()[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn spectrum_normalization_invariants() {
        for dim in [2usize, 3, 4, 8, 16] {
            for i in 0..50 {
                let p = 1.0 / dim as f64 + (1.0 - 1.0 / dim as f64) * i as f64 / 49.0;
                for spec in [
                    max_entropy_spectrum(p, dim).unwrap(),
                    min_entropy_spectrum(p, dim).unwrap(),
                ] {
                    let sum: f64 = spec.values().values().iter().sum();
                    assert!((sum - 1.0).abs() < 1e-12, "sum={sum} p={p} d={dim}");
                    assert!((spec.values().purity() - p).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn entropy_extremes() {
        assert!((s_max(0.25, 4).unwrap() - 2.0).abs() < TAU);
        assert!(s_min(1.0, 4).unwrap().abs() < TAU);
        // Uniform-over-k boundary: P = 1/k gives exactly log2 k.
        assert!((s_min(0.25, 16).unwrap() - 2.0).abs() < TAU);
        assert!((s_max(0.5, 16).unwrap() - 2.0382769589176672).abs() < 1e-10);
        assert!((s_max(0.5, 4).unwrap() - 1.4034880984237583).abs() < 1e-10);
    }

    #[test]
    fn min_entropy_is_continuous_at_k_boundaries() {
        for dim in [4usize, 16] {
            for k in 2..=dim {
                let boundary = 1.0 / k as f64;
                for p in [boundary - 1e-9, boundary, boundary + 1e-9] {
                    if p < 1.0 / dim as f64 {
                        continue;
                    }
                    let s = s_min(p, dim).unwrap();
                    assert!(
                        (s - (k as f64).log2()).abs() < 1e-6,
                        "s_min({p},{dim}) = {s}, expected log2({k})"
                    );
                }
            }
        }
    }

    #[test]
    fn monotone_in_purity() {
        let dim = 16;
        let grid = 10_000;
        let mut prev_max = f64::INFINITY;
        let mut prev_min = f64::INFINITY;
        for i in 0..=grid {
            let p = 1.0 / dim as f64 + (1.0 - 1.0 / dim as f64) * i as f64 / grid as f64;
            let hi = s_max(p, dim).unwrap();
            let lo = s_min(p, dim).unwrap();
            assert!(hi <= prev_max + 1e-12);
            assert!(lo <= prev_min + 1e-12);
            assert!(lo <= hi + 1e-12);
            prev_max = hi;
            prev_min = lo;
        }
    }

    #[test]
    fn coherent_info_bounds_examples() {
        let b = coherent_info_bounds(1.0, 0.5, 16, 2).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-9);
        assert!((b.upper - 1.0).abs() < 1e-9);
        assert!(b.tightness_epsilon.abs() < 1e-12);
        assert!(!b.clamped);

        let b = coherent_info_bounds(1.0, 1.0, 4, 2).unwrap();
        assert!(b.lower.abs() < 1e-9 && b.upper.abs() < 1e-9);

        let b = coherent_info_bounds(0.0625, 0.5, 16, 2).unwrap();
        assert!((b.lower + 3.0).abs() < 1e-9);
        assert!((b.upper + 3.0).abs() < 1e-9);

        assert!(coherent_info_bounds(1.0, 1.0, 16, 3).is_err());
    }

    #[test]
    fn coherence_bounds_examples() {
        let b = coherence_bounds(1.0, 0.25, 4).unwrap();
        assert!((b.lower - 2.0).abs() < 1e-9);
        assert!((b.upper - 2.0).abs() < 1e-9);
        assert!(b.tightness_epsilon.abs() < 1e-12);

        let b = coherence_bounds(1.0, 0.5, 16).unwrap();
        assert!((b.lower - 1.0).abs() < 1e-9);
        assert!((b.upper - 2.0382769589176672).abs() < 1e-9);

        let b = coherence_bounds(0.25, 0.25, 4).unwrap();
        assert!(b.lower.abs() < 1e-9 && b.upper.abs() < 1e-9);

        assert!(coherence_bounds(1.0, 1.0, 1).is_err());
    }

    #[test]
    fn coherence_lower_bound_is_floored() {
        // Mixed state with diagonal-dominant purity: raw l_c < 0.
        let b = coherence_bounds(0.3, 0.27, 4).unwrap();
        assert!(b.lower >= 0.0);
        assert!(b.lower <= b.upper);
    }

    #[test]
    fn multi_info_bounds_examples() {
        let b = multi_info_bounds(&[(0.5, 2); 4], 1.0, 16).unwrap();
        assert!((b.lower - 4.0).abs() < 1e-9);
        assert!((b.upper - 4.0).abs() < 1e-9);
        assert!(b.tightness_epsilon.abs() < 1e-12);

        let b = multi_info_bounds(&[(1.0, 8)], 1.0, 8).unwrap();
        assert!(b.lower.abs() < 1e-9 && b.upper.abs() < 1e-9);

        let b = multi_info_bounds(&[(1.0, 2), (1.0, 2)], 1.0, 4).unwrap();
        assert!(b.lower.abs() < 1e-9 && b.upper.abs() < 1e-9);

        assert!(multi_info_bounds(&[(0.5, 2)], 1.0, 16).is_err());
    }

    // The published lower/upper bound expressions are written directly
    // in terms of extremal eigenvalues; the composed s_min/s_max route
    // must agree with the literal expressions term by term.
    mod literal_forms {
        use super::*;

        fn zlog(x: f64) -> f64 {
            if x <= 1e-15 {
                0.0
            } else {
                x.log2()
            }
        }

        fn literal_min_entropy(p: f64, d: usize) -> f64 {
            let spec = min_entropy_spectrum(p, d).unwrap();
            let (k, alpha) = match spec.kind {
                ExtremalKind::MinEntropy { k, alpha } => (k, alpha),
                _ => unreachable!(),
            };
            let lambda1 = if k == 1 {
                1.0
            } else {
                (1.0 - alpha) / (k as f64 - 1.0)
            };
            // -(1-α)·log λ₁ - α·log α, written as in the bound formulas.
            (alpha - 1.0) * zlog(lambda1) - alpha * zlog(alpha)
        }

        fn literal_max_entropy(p: f64, d: usize) -> f64 {
            let spec = max_entropy_spectrum(p, d).unwrap();
            let l1 = spec.values().values()[0];
            -(1.0 - l1) * zlog((1.0 - l1) / (d as f64 - 1.0)) - l1 * zlog(l1)
        }

        #[test]
        fn composed_route_matches_literal_expressions() {
            for d_total in [4usize, 16] {
                for d_b in [2usize, 4] {
                    for i in 0..=20 {
                        for j in 0..=20 {
                            let pg = 1.0 / d_total as f64
                                + (1.0 - 1.0 / d_total as f64) * i as f64 / 20.0;
                            let pb =
                                1.0 / d_b as f64 + (1.0 - 1.0 / d_b as f64) * j as f64 / 20.0;
                            let b = coherent_info_bounds(pg, pb, d_total, d_b).unwrap();
                            let lit_lower =
                                literal_min_entropy(pb, d_b) - literal_max_entropy(pg, d_total);
                            let lit_upper =
                                literal_max_entropy(pb, d_b) - literal_min_entropy(pg, d_total);
                            assert!((b.lower - lit_lower).abs() < 1e-12);
                            assert!((b.upper - lit_upper).abs() < 1e-12);
                        }
                    }
                }
            }
        }
    }
}
