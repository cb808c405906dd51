//! Counter-based splittable random streams.
//!
//! Every Monte Carlo unit of work (a shadow snapshot, a repeat, a sweep
//! point) draws from its own stream derived from `(seed, index)`, so
//! sampling is reproducible regardless of execution order or thread
//! count. The generator is SplitMix64: a 64-bit counter pushed through a
//! full-avalanche mix on every draw.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive the seed of child stream `index` from a parent seed.
///
/// Distinct `(seed, index)` pairs map to statistically independent
/// streams; derivation is pure, so workers can be spawned in any order.
#[inline]
pub fn child_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct StreamRng {
    state: u64,
    spare_normal: Option<f64>,
}

impl StreamRng {
    pub fn new(seed: u64) -> Self {
        StreamRng {
            state: seed,
            spare_normal: None,
        }
    }

    /// Stream for child `index` of `seed`; shorthand for
    /// `StreamRng::new(child_seed(seed, index))`.
    pub fn child(seed: u64, index: u64) -> Self {
        StreamRng::new(child_seed(seed, index))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform in [0, 1) with 53-bit resolution.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in [0, n). Widening-multiply map; the residual
    /// bias of n/2^64 is far below anything the statistical suites can
    /// resolve.
    #[inline]
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Standard normal via Box-Muller; the paired deviate is cached.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        // 1 - u keeps the log argument strictly positive.
        let u = 1.0 - self.next_f64();
        let v = self.next_f64();
        let r = (-2.0 * u.ln()).sqrt();
        let phi = 2.0 * std::f64::consts::PI * v;
        self.spare_normal = Some(r * phi.sin());
        r * phi.cos()
    }

    /// Draw an index from a probability vector (cumulative walk).
    ///
    /// `probs` must be near-normalized; the final cell absorbs rounding.
    pub fn next_categorical(&mut self, probs: &[f64]) -> usize {
        let u = self.next_f64();
        let mut acc = 0.0;
        for (i, &p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        probs.len() - 1
    }
}
