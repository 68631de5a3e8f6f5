//! Deterministic, seed-partitioned sampling of filtration regions.
//!
//! Unbounded regions are sampled with the dominant radius log-uniform in
//! [R, 1e6·R] and angles uniform: the log-uniform spread reaches the
//! asymptotic regime where the Böttcher products bite, the seed partitioning
//! keeps parallel sweeps reproducible.

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 step, used to derive independent per-task seeds.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(seed, index))
}

pub const RADIAL_SPAN: f64 = 1e6;

/// Radius log-uniform in [r, span·r].
pub fn log_uniform_radius(rng: &mut ChaCha8Rng, r: f64, span: f64) -> f64 {
    let u: f64 = rng.gen();
    (r.ln() + u * span.ln()).exp()
}

pub fn unit_angle(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen();
    (u - 0.5) * std::f64::consts::TAU
}

pub fn polar(rng: &mut ChaCha8Rng, modulus: f64) -> Complex64 {
    Complex64::from_polar(modulus, unit_angle(rng))
}

/// Point of the modified sector V_i^R(ε): |z_i| log-uniform past R+ε, the
/// other coordinates uniform below |z_i| - ε.
pub fn sample_sector(
    rng: &mut ChaCha8Rng,
    k: usize,
    i: usize,
    r: f64,
    eps: f64,
) -> Vec<Complex64> {
    let rho = log_uniform_radius(rng, (r + eps) * 1.01, RADIAL_SPAN);
    let mut z = Vec::with_capacity(k);
    for j in 0..k {
        if j == i {
            z.push(polar(rng, rho));
        } else {
            let u: f64 = rng.gen();
            z.push(polar(rng, u * (rho - eps) * 0.999));
        }
    }
    z
}

/// Point with a prescribed dominant coordinate: |dominant| = ρ log-uniform
/// in [floor·1.01, span], |other| = frac·ρ.
pub fn sample_dominated_pair(
    rng: &mut ChaCha8Rng,
    floor: f64,
    frac_lo: f64,
    frac_hi: f64,
) -> (f64, Complex64, Complex64) {
    let rho = log_uniform_radius(rng, floor * 1.01, RADIAL_SPAN);
    let u: f64 = rng.gen();
    let frac = frac_lo + u * (frac_hi - frac_lo);
    let dom = polar(rng, rho);
    let other = polar(rng, frac * rho);
    (rho, dom, other)
}
