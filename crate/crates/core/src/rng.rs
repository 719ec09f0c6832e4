//! Keyed random streams.
//!
//! Every random quantity in the crate is addressed by a key
//! `(root seed, stream tag, index...)`. The key is folded through the
//! SplitMix64 finalizer into a 64-bit stream seed, and the stream itself is a
//! Xoshiro256++ generator seeded from that value. Draw `i` of a Monte Carlo run
//! therefore depends only on `(seed, i)`, and paired simulations that address
//! the same keys see the same numbers (common random numbers).

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// Stream tags. The numeric values are part of the reproducibility contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum StreamTag {
    Calibration = 0x01,
    Births = 0x02,
    EntrantAttributes = 0x03,
    DriftShock = 0x04,
    Skills = 0x05,
    Replication = 0x06,
    Scenario = 0x07,
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a stream seed from a root seed, a tag and a sequence of indices.
pub fn derive_seed(root: u64, tag: StreamTag, indices: &[u64]) -> u64 {
    let mut h = mix64(root ^ mix64(tag as u64));
    for &i in indices {
        h = mix64(h ^ i);
    }
    h
}

pub fn stream(root: u64, tag: StreamTag, indices: &[u64]) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(derive_seed(root, tag, indices))
}

/// Uniform on `[0, 1)` with 53 bits of precision.
pub fn unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen::<f64>()
}

/// Uniform on the closed interval `[lo, hi]`; `lo == hi` returns `lo`.
pub fn uniform_closed<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if lo == hi {
        return lo;
    }
    // 2^53 - 1 as denominator puts both end points in the support.
    let u = (rng.next_u64() >> 11) as f64 / ((1u64 << 53) - 1) as f64;
    lo + u * (hi - lo)
}

/// Standard normal draw by the Box-Muller transform.
pub fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1 = 1.0 - unit(rng); // (0, 1]
    let u2 = unit(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Largest Poisson mean accepted by [`poisson_inverse`].
pub const MAX_POISSON_MEAN: f64 = 500.0;

/// Poisson quantile function evaluated at `u` by sequential search.
///
/// For a fixed `u` the result is non-decreasing in `mean`, which keeps birth
/// counts coupled across scenarios that only differ in entry intensity.
pub fn poisson_inverse(mean: f64, u: f64) -> u64 {
    debug_assert!((0.0..=MAX_POISSON_MEAN).contains(&mean));
    if mean <= 0.0 {
        return 0;
    }
    let mut k = 0u64;
    let mut p = (-mean).exp();
    let mut cdf = p;
    while u > cdf {
        k += 1;
        p *= mean / k as f64;
        let next = cdf + p;
        if next == cdf {
            // Tail exhausted in floating point.
            break;
        }
        cdf = next;
    }
    k
}
