//! Böttcher coordinates by telescoping products, in log space.
//!
//! The depth-n approximant is κ·coord_n^{1/D_n} with D_n the family's
//! normalization (d^n for shifts and fibered products, d̃·d^{n-1} for affine
//! skew products) and κ = B^{-d/(pref(d-1))} built from the leading constant
//! B of the one-block recurrence coord_{n+1} = B·coord_n^d·(1+ρ_n).
//!
//! Products are accumulated as sums of logs. The argument is carried as a
//! continuous lift along the orbit (never wrapped); each factor re-anchors
//! inside D(1;1), where the principal branch is the right one. The summable
//! constant part of the series is completed in closed form, so the reported
//! value converges at the double-exponential rate of the corrections rather
//! than the 1/d^n rate of the constant tail.

use num::complex::Complex64;

use crate::error::{CoreError, Result};
use crate::green::EscapeSystem;
use crate::maps::Direction;

/// A Böttcher value with its branch certificate and truncation diagnostics.
#[derive(Debug, Clone)]
pub struct BoettcherValue {
    /// Depth actually reached (requested unless the log range ran out).
    pub depth: usize,
    /// Complex log of the tail-completed value.
    pub log_value: Complex64,
    /// Complex log of the raw depth-n partial product κ·coord_n^{1/D_n}.
    pub raw_log: Complex64,
    /// Every telescoping correction stayed in D(1;1). Violations abort the
    /// computation, so a returned value always certifies true.
    pub branch_ok: bool,
    /// Largest |ρ| seen among the corrections.
    pub max_correction: f64,
    /// Geometric tail estimate from the observed last factor (reported, not
    /// guaranteed outside the certified regime).
    pub trunc_estimate: f64,
    /// 2π-wrap count of the first lifted step; fixes the branch of the
    /// functional-equation constant for the affine skew family.
    pub wrap_count: i64,
}

impl BoettcherValue {
    pub fn value(&self) -> crate::algebra::LogComplex {
        crate::algebra::LogComplex::new(self.log_value.re, self.log_value.im)
    }

    pub fn modulus_log(&self) -> f64 {
        self.log_value.re
    }
}

struct Telescope {
    /// lifted log of the distinguished coordinate
    lift: Complex64,
    /// principal log of the leading constant B
    c: Complex64,
    d: f64,
    max_correction: f64,
    last_factor: f64,
    wrap_count: i64,
}

/// Compute the telescoping Böttcher value at `depth` blocks.
///
/// Preconditions: the start point must lie in the escape region matching
/// `dir` at radius `r` (stricter sector margins are the caller's business;
/// the per-factor branch certificate is what actually protects the roots).
pub fn boettcher<S: EscapeSystem>(
    sys: &S,
    start: &S::State,
    dir: Direction,
    depth: usize,
    r: f64,
) -> Result<BoettcherValue> {
    if !sys.in_escape_region(start, dir, r) {
        return Err(CoreError::SectorViolation(format!(
            "Böttcher telescoping needs a V_R^{} start point",
            if dir == Direction::Forward { "+" } else { "-" }
        )));
    }
    let d = sys.degree();
    let d_i = d as i32;
    let b = sys.bott_leading_constant(dir);
    let coord0 = sys.bott_coordinate(start, dir);
    let mut tel = Telescope {
        lift: Complex64::new(coord0.logmod, coord0.arg),
        c: Complex64::new(b.norm().ln(), b.arg()),
        d,
        max_correction: 0.0,
        last_factor: 0.0,
        wrap_count: 0,
    };
    let mut state = start.clone();
    let mut coord = coord0;
    let mut reached = 0usize;
    for n in 0..depth {
        if tel.lift.re.abs() * d > 1e290 {
            break;
        }
        let next_state = sys.block_step(&state, dir)?;
        let next_coord = sys.bott_coordinate(&next_state, dir);
        // 1 + ρ = coord_{n+1} / (B · coord_n^d), principal representative
        let den = crate::algebra::LogComplex::from_complex(b).mul(coord.powi(d_i));
        let ratio_log = next_coord.div(den);
        let ratio = ratio_log
            .to_complex()
            .ok_or(CoreError::BranchViolation { factor: n })?;
        let rho = (ratio - Complex64::new(1.0, 0.0)).norm();
        if !(rho < 1.0) {
            return Err(CoreError::BranchViolation { factor: n });
        }
        tel.max_correction = tel.max_correction.max(rho);
        let lg = Complex64::new(ratio.norm().ln(), ratio.arg());
        tel.last_factor = lg.norm();
        let new_lift = tel.c + tel.lift * tel.d + lg;
        if n == 0 {
            // branch index e₀ = (principal log of coord_1 - its lift)/2πi:
            // the image orbit anchors at the principal log, so this is the
            // twist the functional-equation constant picks up
            let wraps = (next_coord.arg - new_lift.im) / std::f64::consts::TAU;
            tel.wrap_count = wraps.round() as i64;
        }
        tel.lift = new_lift;
        state = next_state;
        coord = next_coord;
        reached = n + 1;
    }
    let pref = sys.norm_prefactor();
    let dn = sys.bott_norm(reached.max(1));
    let x = d / (pref * (d - 1.0));
    let raw_log = tel.lift / dn - tel.c * x;
    // closed-form completion of the constant tail Σ_{j>=n} C/D_{j+1}
    let tail_factor = d / (pref * d.powi(reached.max(1) as i32) * (d - 1.0));
    let log_value = raw_log + tel.c * tail_factor;
    // geometric tail of the correction series, from the last observed factor
    let trunc_estimate = tel.last_factor * tail_factor;
    Ok(BoettcherValue {
        depth: reached,
        log_value,
        raw_log,
        branch_ok: true,
        max_correction: tel.max_correction,
        trunc_estimate,
        wrap_count: tel.wrap_count,
    })
}

/// The functional-equation constant κ with the branch the telescoping
/// construction actually picks (a d̃-th root of unity times the principal
/// value; trivial for the families whose normalization matches the degree).
pub fn functional_constant<S: EscapeSystem>(sys: &S, dir: Direction, wrap_count: i64) -> Complex64 {
    let b = sys.bott_leading_constant(dir);
    let d = sys.degree();
    let pref = sys.norm_prefactor();
    let c = Complex64::new(b.norm().ln(), b.arg());
    let twist = Complex64::new(0.0, std::f64::consts::TAU * wrap_count as f64);
    ((c + twist) * (d / pref)).exp()
}

/// Relative residual of φ(map(P)) = κ·φ(P)^D at matched truncation depths
/// (depth n at the image against depth n+1 at the point, which is the pairing
/// under which the telescoping partial products satisfy the identity exactly).
pub fn functional_residual<S: EscapeSystem>(
    sys: &S,
    start: &S::State,
    dir: Direction,
    depth: usize,
    r: f64,
) -> Result<f64> {
    let image = sys.block_step(start, dir)?;
    if !sys.in_escape_region(&image, dir, r) {
        return Err(CoreError::SectorViolation(
            "image left the region; increase R".into(),
        ));
    }
    let lhs = boettcher(sys, &image, dir, depth, r)?;
    let rhs = boettcher(sys, start, dir, depth + 1, r)?;
    let kappa = functional_constant(sys, dir, rhs.wrap_count);
    let kappa_log = Complex64::new(kappa.norm().ln(), kappa.arg());
    let d = sys.degree();
    let res = lhs.log_value - (rhs.log_value * d + kappa_log);
    // both sides are O(1) logs; |e^res - 1| is the relative residual
    Ok((res.exp() - Complex64::new(1.0, 0.0)).norm())
}

/// Same-depth functional mismatch |φ_n(map(P))/(κ·φ_n(P)^D) - 1| using the
/// raw partial products on both sides. Unlike the matched-depth pairing this
/// does not telescope away: the leftover is (Log B + Log(1+ρ_n))/D_{n+1}, so
/// the sequence decays like C/d^n — the observable the Cauchy-rate
/// diagnostics fit.
pub fn same_depth_residual<S: EscapeSystem>(
    sys: &S,
    start: &S::State,
    dir: Direction,
    depth: usize,
    r: f64,
) -> Result<Vec<f64>> {
    let image = sys.block_step(start, dir)?;
    if !sys.in_escape_region(&image, dir, r) {
        return Err(CoreError::SectorViolation(
            "image left the region; increase R".into(),
        ));
    }
    let d = sys.degree();
    let mut out = Vec::with_capacity(depth);
    for n in 1..=depth {
        let lhs = boettcher(sys, &image, dir, n, r)?;
        let rhs = boettcher(sys, start, dir, n, r)?;
        let kappa = functional_constant(sys, dir, rhs.wrap_count);
        let kappa_log = Complex64::new(kappa.norm().ln(), kappa.arg());
        let res = lhs.raw_log - (rhs.raw_log * d + kappa_log);
        out.push((res.exp() - Complex64::new(1.0, 0.0)).norm());
    }
    Ok(out)
}

/// Matched-depth Green–Böttcher discrepancies |G_n - log|φ_n| - const| for
/// n = 1..depth. The constant is (d/(pref(d-1)))·log|B|; at matched depth
/// the two sides are the same log read through two accumulation paths, so
/// the sequence sits at rounding level and shrinks with the normalization.
pub fn green_crosscheck<S: EscapeSystem>(
    sys: &S,
    start: &S::State,
    dir: Direction,
    depth: usize,
    r: f64,
) -> Result<Vec<f64>> {
    if !sys.in_escape_region(start, dir, r) {
        return Err(CoreError::SectorViolation(
            "Green–Böttcher crosscheck needs a region point".into(),
        ));
    }
    let d = sys.degree();
    let pref = sys.norm_prefactor();
    let x = d / (pref * (d - 1.0));
    let b_logmod = sys.bott_leading_constant(dir).norm().ln();
    let mut out = Vec::with_capacity(depth);
    let mut state = start.clone();
    for n in 1..=depth {
        state = sys.block_step(&state, dir)?;
        let g = sys.sup_log_norm(&state).max(0.0) / (pref * d.powi(n as i32 - 1));
        let phi = boettcher(sys, start, dir, n, r)?;
        let diff = (g - phi.raw_log.re - x * b_logmod).abs();
        out.push(diff);
        if sys.sup_log_norm(&state) > 1e290 {
            break;
        }
    }
    Ok(out)
}

/// |φ/target - 1| where target is the distinguished coordinate of the start
/// point: the asymptotics φ ~ z_i (shift) and φ ~ y / φ ~ x (skew families
/// with matching degree normalization).
pub fn asymptotic_deviation<S: EscapeSystem>(
    sys: &S,
    start: &S::State,
    dir: Direction,
    depth: usize,
    r: f64,
) -> Result<f64> {
    let phi = boettcher(sys, start, dir, depth, r)?;
    let coord = sys.bott_coordinate(start, dir);
    let target_log = Complex64::new(coord.logmod, coord.arg);
    let ratio = (phi.log_value - target_log).exp();
    Ok((ratio - Complex64::new(1.0, 0.0)).norm())
}
