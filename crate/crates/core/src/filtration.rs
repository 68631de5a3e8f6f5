//! Filtration regions, modified sectors, constructive invariance thresholds
//! and sampled invariance reports.
//!
//! All membership tests keep the strict inequalities of the definitions
//! strict, with exact floating comparison: the regions are open, and a
//! boundary tie classifies as `Unclassified` rather than being force-assigned.

use num::complex::Complex64;
use rand::Rng;

use crate::algebra::sup_norm;
use crate::error::{CoreError, Result};
use crate::maps::fibered::{FiberedSkewHenon, FiberedState};
use crate::maps::shift::ShiftLikeMap;
use crate::maps::skew::{SkewHenonMap, SkewState};
use crate::maps::Direction;
use crate::sample;

/// Outcome of classifying a point against the shift filtration at radius R.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftRegion {
    /// All coordinates ≤ R.
    Ball,
    /// Coordinate i strictly dominates every other coordinate and R.
    Dominant(usize),
    /// Outside the ball but without a strict dominant coordinate.
    Unclassified,
}

/// Classify against V_R / V_R^i; total and deterministic.
pub fn classify_shift(z: &[Complex64], r: f64) -> ShiftRegion {
    classify_shift_logs(
        &z.iter().map(|c| c.norm().ln()).collect::<Vec<_>>(),
        r.ln(),
    )
}

/// Same test on log-moduli (usable past f64 overflow).
pub fn classify_shift_logs(logs: &[f64], ln_r: f64) -> ShiftRegion {
    if logs.iter().all(|&l| l <= ln_r) {
        return ShiftRegion::Ball;
    }
    let (mut arg_max, mut best) = (0usize, f64::NEG_INFINITY);
    for (i, &l) in logs.iter().enumerate() {
        if l > best {
            best = l;
            arg_max = i;
        }
    }
    let strict = logs
        .iter()
        .enumerate()
        .all(|(j, &l)| j == arg_max || best > l);
    if strict && best > ln_r {
        ShiftRegion::Dominant(arg_max)
    } else {
        ShiftRegion::Unclassified
    }
}

/// Side of the filtration a dominant index belongs to: indices above k-ν
/// form V_R^+, the rest V_R^-.
pub fn shift_side(map: &ShiftLikeMap, region: ShiftRegion) -> Option<Direction> {
    match region {
        ShiftRegion::Dominant(i) if i >= map.dim() - map.nu() => Some(Direction::Forward),
        ShiftRegion::Dominant(_) => Some(Direction::Inverse),
        _ => None,
    }
}

/// Membership in the modified sector V_i^R(ε): |z_i| > max(|z_j| + ε, R).
pub fn in_sector(z: &[Complex64], i: usize, r: f64, eps: f64) -> bool {
    debug_assert!(eps > 0.0);
    let zi = z[i].norm();
    if !(zi > r) {
        return false;
    }
    z.iter()
        .enumerate()
        .all(|(j, c)| j == i || zi > c.norm() + eps)
}

/// Sector membership on log-moduli.
pub fn in_sector_logs(logs: &[f64], i: usize, ln_r: f64, eps: f64) -> bool {
    let li = logs[i];
    if !(li > ln_r) {
        return false;
    }
    logs.iter().enumerate().all(|(j, &l)| {
        if j == i {
            return true;
        }
        // |z_i| > |z_j| + ε  ⇔  l_i > l_j + ln(1 + ε e^{-l_j})
        if l == f64::NEG_INFINITY {
            return li > eps.ln();
        }
        let bump = (eps * (-l).exp()).ln_1p();
        li > l + bump
    })
}

/// Skew filtration outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkewRegion {
    /// Fiber pair inside the polydisk of radius R (the base coordinate is
    /// unconstrained: points of K^± may drift in λ).
    FiberBall,
    Plus,
    Minus,
    Unclassified,
}

/// The |c|-trichotomy of the skew filtration. Comparisons against 1 are
/// exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseCase {
    Expanding,
    Contracting,
    Unimodular,
}

pub fn base_case(c: Complex64) -> BaseCase {
    let m = c.norm();
    if m > 1.0 {
        BaseCase::Expanding
    } else if m < 1.0 {
        BaseCase::Contracting
    } else {
        BaseCase::Unimodular
    }
}

/// Classify (λ,x,y) against V_R^± for the given skew map; the region shapes
/// branch on |c| exactly as the three cases require.
pub fn classify_skew(p: [Complex64; 3], r: f64, map: &SkewHenonMap) -> SkewRegion {
    let ll = if p[0].norm() == 0.0 {
        f64::NEG_INFINITY
    } else {
        p[0].norm().ln()
    };
    classify_skew_logs(
        ll,
        nz_ln(p[1].norm()),
        nz_ln(p[2].norm()),
        r.ln(),
        map.degree_tilde(),
        base_case(map.c()),
    )
}

fn nz_ln(m: f64) -> f64 {
    if m == 0.0 {
        f64::NEG_INFINITY
    } else {
        m.ln()
    }
}

pub fn classify_skew_logs(
    ln_lam: f64,
    ln_x: f64,
    ln_y: f64,
    ln_r: f64,
    d_tilde: u32,
    case: BaseCase,
) -> SkewRegion {
    let cap = (d_tilde as f64 + 1.0) * ln_lam; // log |λ|^{d̃+1}
    let plus = match case {
        BaseCase::Expanding | BaseCase::Unimodular => ln_y > ln_r && ln_y > ln_x && ln_y > cap,
        BaseCase::Contracting => ln_y > ln_r && ln_y > ln_x && ln_lam < 0.0,
    };
    if plus {
        return SkewRegion::Plus;
    }
    let minus = match case {
        BaseCase::Expanding => ln_x > ln_r && ln_x > ln_y && ln_lam < 0.0,
        BaseCase::Contracting | BaseCase::Unimodular => ln_x > ln_r && ln_x > ln_y && ln_x > cap,
    };
    if minus {
        return SkewRegion::Minus;
    }
    if ln_x <= ln_r && ln_y <= ln_r {
        return SkewRegion::FiberBall;
    }
    SkewRegion::Unclassified
}

pub fn classify_skew_state(s: &SkewState, r: f64, map: &SkewHenonMap) -> SkewRegion {
    let ll = if s.lambda.norm() == 0.0 {
        f64::NEG_INFINITY
    } else {
        s.lambda.norm().ln()
    };
    classify_skew_logs(
        ll,
        s.x.abs_log(),
        s.y.abs_log(),
        r.ln(),
        map.degree_tilde(),
        base_case(map.c()),
    )
}

/// Uniform filtration of the fibered family: V^+ = {|x| < |y|, |y| > R},
/// V^- mirrored, V_R the closed polydisk.
pub fn classify_fibered(s: &FiberedState, r: f64) -> SkewRegion {
    let lx = s.x.abs_log();
    let ly = s.y.abs_log();
    let ln_r = r.ln();
    if ly > ln_r && lx < ly {
        SkewRegion::Plus
    } else if lx > ln_r && ly < lx {
        SkewRegion::Minus
    } else if lx <= ln_r && ly <= ln_r {
        SkewRegion::FiberBall
    } else {
        SkewRegion::Unclassified
    }
}

// ---------------------------------------------------------------------------
// Constructive thresholds
// ---------------------------------------------------------------------------

/// Thresholds making the modified sectors invariant for a pair of
/// shift-like maps of the same type.
#[derive(Debug, Clone, Copy)]
pub struct ShiftThresholds {
    pub r0: f64,
    pub eps0: f64,
    /// The leading-coefficient bracketing slack (half the smaller leading
    /// coefficient modulus).
    pub eps: f64,
    /// M = max(|a|, |b|, 1).
    pub m: f64,
}

/// Concrete (R₀, ε₀) for the sector-invariance lemma, from closed-form
/// sufficient conditions on the coefficient magnitudes:
///   (i)  two-sided leading-term brackets hold past R(ε),
///   (ii) (R₀+ε₀)^d - R₀^d > 2 R₀ M · max bracket reciprocal,
///   (iii) 2 ε R₀^d > M ε₀,
/// with ε fixed at half the smaller leading-coefficient modulus. Thresholds
/// always exist; the search is a monotone doubling.
pub fn estimate_thresholds(s: &ShiftLikeMap, t: &ShiftLikeMap) -> Result<ShiftThresholds> {
    if s.dim() != t.dim() || s.nu() != t.nu() {
        return Err(CoreError::Precondition(
            "threshold estimation needs maps of equal dimension and type".into(),
        ));
    }
    let cp = s.p().leading().norm();
    let cq = t.p().leading().norm();
    let eps = 0.5 * cp.min(cq);
    let m = s.a().norm().max(t.a().norm()).max(1.0);
    let d = s.degree().min(t.degree()) as f64;

    let bracket_radius = |p: &crate::algebra::unipoly::UniPoly| -> f64 {
        let lower = p.lower_abs_sum();
        if lower == 0.0 {
            return 1.0;
        }
        let s = lower / eps;
        let mut r = 1.0_f64;
        for i in 0..p.degree() {
            r = r.max(s.powf(1.0 / (p.degree() - i) as f64));
        }
        r
    };

    let max_bracket = (cp - eps).recip().max((cq - eps).recip());
    let mut r0 = bracket_radius(s.p()).max(bracket_radius(t.p())).max(1.0);
    loop {
        // smallest ε₀ satisfying (ii) at R₀, with 5% headroom and a floor of 1
        let eps0 = ((r0.powf(d) + 2.0 * r0 * m * max_bracket).powf(1.0 / d) - r0)
            .max(1.0)
            * 1.05;
        let cond3 = 2.0 * eps * r0.powf(d) > m * eps0;
        if cond3 {
            return Ok(ShiftThresholds { r0, eps0, eps, m });
        }
        r0 *= 2.0;
        if !r0.is_finite() {
            return Err(CoreError::Precondition("threshold search diverged".into()));
        }
    }
}

/// How λ is constrained inside a skew region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LambdaMode {
    /// |λ|^{d̃+1} below the dominant coordinate.
    Cap,
    /// |λ| < 1.
    UnitDisk,
}

fn lambda_mode(case: BaseCase, dir: Direction) -> LambdaMode {
    match (case, dir) {
        (BaseCase::Expanding, Direction::Forward) => LambdaMode::Cap,
        (BaseCase::Expanding, Direction::Inverse) => LambdaMode::UnitDisk,
        (BaseCase::Contracting, Direction::Forward) => LambdaMode::UnitDisk,
        (BaseCase::Contracting, Direction::Inverse) => LambdaMode::Cap,
        (BaseCase::Unimodular, _) => LambdaMode::Cap,
    }
}

/// R₀(δ) making V_R^+ forward-invariant (resp. V_R^- backward-invariant)
/// for all R ≥ R₀, with the two-sided growth bracket |c_H| ∓ δ; constants
/// come from coefficient-magnitude sums of the symbolic fiber, never from
/// data.
pub fn estimate_skew_radius(h: &SkewHenonMap, delta: f64, dir: Direction) -> Result<f64> {
    let (d, d_tilde, c_h, c_hp) = h.structure_constants();
    let c_eff = match dir {
        Direction::Forward => c_h.norm(),
        Direction::Inverse => c_hp.norm(),
    };
    let h_cap = c_eff.min(1.0);
    if !(delta > 0.0 && delta < h_cap) {
        return Err(CoreError::Precondition(format!(
            "delta must lie in (0, {h_cap}), got {delta}"
        )));
    }
    let mode = lambda_mode(base_case(h.c()), dir);
    let q = h.fiber_coeff_bounds(dir);
    let co = h.fiber_codominant_bounds(dir);
    let d = d as f64;
    let dt1 = d_tilde as f64 + 1.0;

    // λ-degree exponent transfer: inside a capped region |λ|_+^l <= |dom|^{l/(d̃+1)}
    let exp_of = |l: u32| -> Result<f64> {
        match mode {
            LambdaMode::UnitDisk => Ok(0.0),
            LambdaMode::Cap => {
                let e = l as f64 / dt1;
                if e >= 1.0 {
                    Err(CoreError::Precondition(format!(
                        "coefficient λ-degree {l} exceeds d̃; the capped-region bound does not close"
                    )))
                } else {
                    Ok(e)
                }
            }
        }
    };

    // (1) |q| < δ|dom|^d
    let e_q = exp_of(q.lambda_degree)?;
    let r1 = (q.terms as f64 * q.m / delta).powf(1.0 / (1.0 - e_q));
    // (2) (c_eff - δ) R^{d-1} > 1
    let r2 = (1.0 / (c_eff - delta)).powf(1.0 / (d - 1.0));
    // (3) codominant coordinate stays below the dominant image
    let co_poly = match dir {
        Direction::Forward => &h.fiber_symbolic(Direction::Forward)[1],
        Direction::Inverse => &h.fiber_symbolic(Direction::Inverse)[2],
    };
    let co_deg = co_poly
        .terms()
        .map(|(m, _)| m[1] + m[2])
        .max()
        .unwrap_or(0) as f64;
    let e_co = exp_of(co.lambda_degree)?;
    let gap = d - co_deg - e_co;
    if gap <= 0.0 {
        return Err(CoreError::Precondition(
            "codominant coordinate grows as fast as the dominant one".into(),
        ));
    }
    let r3 = (co.terms as f64 * co.m / (c_eff - delta)).powf(1.0 / gap);
    // (4) λ growth under the map stays below the cap
    let r4 = match (base_case(h.c()), dir) {
        (BaseCase::Expanding, Direction::Forward) => {
            (h.c().norm().powf(dt1) / (c_eff - delta)).powf(1.0 / (d - 1.0))
        }
        (BaseCase::Contracting, Direction::Inverse) => {
            (h.c().norm().recip().powf(dt1) / (c_eff - delta)).powf(1.0 / (d - 1.0))
        }
        _ => 1.0,
    };

    Ok(r1.max(r2).max(r3).max(r4).max(1.0) * (1.0 + 1e-9))
}

/// Uniform threshold for the fibered family (coefficients bounded over the
/// whole circle, so one radius works for every fiber).
pub fn estimate_fibered_radius(h: &FiberedSkewHenon, delta: f64, dir: Direction) -> Result<f64> {
    let c_eff = match dir {
        Direction::Forward => h.c_h().norm(),
        Direction::Inverse => h.c_h_prime().norm(),
    };
    let h_cap = c_eff.min(1.0);
    if !(delta > 0.0 && delta < h_cap) {
        return Err(CoreError::Precondition(format!(
            "delta must lie in (0, {h_cap}), got {delta}"
        )));
    }
    let d = h.degree() as f64;
    let q = h.fiber_coeff_bounds(dir);
    let co = h.fiber_codominant_bounds(dir);
    let co_poly = match dir {
        Direction::Forward => &h.fiber_symbolic(Direction::Forward)[1],
        Direction::Inverse => &h.fiber_symbolic(Direction::Inverse)[2],
    };
    let co_deg = co_poly
        .terms()
        .map(|(m, _)| m[1] + m[2])
        .max()
        .unwrap_or(0) as f64;
    let r1 = q.terms as f64 * q.m / delta;
    let r2 = (1.0 / (c_eff - delta)).powf(1.0 / (d - 1.0));
    let gap = d - co_deg;
    if gap <= 0.0 {
        return Err(CoreError::Precondition(
            "codominant coordinate grows as fast as the dominant one".into(),
        ));
    }
    let r3 = (co.terms as f64 * co.m / (c_eff - delta)).powf(1.0 / gap);
    Ok(r1.max(r2).max(r3).max(1.0) * (1.0 + 1e-9))
}

// ---------------------------------------------------------------------------
// Sampled invariance reports
// ---------------------------------------------------------------------------

/// Which iterate an invariance check applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IterateSpec {
    /// S^ν on a plus-sector.
    ShiftBlockPlus,
    /// S^{-(k-ν)} on a minus-sector.
    ShiftBlockMinus,
    /// One application of the map (H on V^+).
    MapForward,
    /// One application of the inverse (H^{-1} on V^-).
    MapInverse,
}

/// Result of a sampled invariance check. Violations are data, not errors.
#[derive(Debug, Clone)]
pub struct InvarianceReport {
    pub samples: usize,
    pub violations: Vec<String>,
    /// Minimum post-image slack of the defining inequalities, in log units.
    pub min_slack: f64,
    pub label: String,
}

impl InvarianceReport {
    pub fn invariant(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, slack: f64, witness: impl FnOnce() -> String) {
        if slack < self.min_slack {
            self.min_slack = slack;
        }
        if slack <= 0.0 && self.violations.len() < 10 {
            self.violations.push(witness());
        } else if slack <= 0.0 {
            // count silently past the first ten witnesses
            self.violations.push(String::new());
        }
    }

    pub fn render(&self) -> String {
        let mut out = format!(
            "{}: samples={} violations={} min_slack={:.6e}\n",
            self.label,
            self.samples,
            self.violations.len(),
            self.min_slack
        );
        for w in self.violations.iter().filter(|w| !w.is_empty()).take(10) {
            out.push_str("  witness: ");
            out.push_str(w);
            out.push('\n');
        }
        out
    }
}

/// Sampled invariance of a modified sector under the shift block iterate.
pub fn check_shift_sector_invariance(
    map: &ShiftLikeMap,
    i: usize,
    r: f64,
    eps0: f64,
    samples: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    let plus = i >= map.dim() - map.nu();
    let spec = if plus {
        IterateSpec::ShiftBlockPlus
    } else {
        IterateSpec::ShiftBlockMinus
    };
    let mut report = InvarianceReport {
        samples,
        violations: Vec::new(),
        min_slack: f64::INFINITY,
        label: format!("sector V_{}^R(eps0) under {:?} (R={r:.3e})", i + 1, spec),
    };
    let dir = if plus {
        Direction::Forward
    } else {
        Direction::Inverse
    };
    for n in 0..samples {
        let mut rng = sample::rng_for(seed, n as u64);
        let z = sample::sample_sector(&mut rng, map.dim(), i, r, eps0);
        debug_assert!(in_sector(&z, i, r, eps0));
        let state: Vec<_> = z
            .iter()
            .map(|&c| crate::algebra::logcomplex::Cx::from_complex(c))
            .collect();
        let image = map.block_cx(&state, dir)?;
        let logs: Vec<f64> = image.iter().map(|c| c.abs_log()).collect();
        // slack: min over the defining inequalities of V_i^R(ε₀)
        let li = logs[i];
        let mut slack = li - r.ln();
        for (j, &l) in logs.iter().enumerate() {
            if j != i {
                let bump = if l == f64::NEG_INFINITY {
                    eps0.ln()
                } else {
                    l + (eps0 * (-l).exp()).ln_1p()
                };
                slack = slack.min(li - bump);
            }
        }
        report.record(slack, || format!("z={z:?}"));
    }
    Ok(report)
}

/// Sampled invariance of V_R^+ under H (or V_R^- under H^{-1}).
pub fn check_skew_invariance(
    map: &SkewHenonMap,
    dir: Direction,
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    let case = base_case(map.c());
    let mode = lambda_mode(case, dir);
    let dt1 = map.degree_tilde() as f64 + 1.0;
    let mut report = InvarianceReport {
        samples,
        violations: Vec::new(),
        min_slack: f64::INFINITY,
        label: format!(
            "skew V^{} under {:?} (|c|={:.3}, R={r:.3e})",
            if dir == Direction::Forward { "+" } else { "-" },
            dir,
            map.c().norm()
        ),
    };
    for n in 0..samples {
        let mut rng = sample::rng_for(seed, n as u64);
        let (rho, dom, other) = sample::sample_dominated_pair(&mut rng, r, 0.0, 0.999);
        let u: f64 = rng.gen();
        let lam = match mode {
            LambdaMode::UnitDisk => sample::polar(&mut rng, u * 0.999),
            LambdaMode::Cap => {
                let cap = rho.powf(1.0 / dt1);
                sample::polar(&mut rng, u * cap * 0.999)
            }
        };
        let state = match dir {
            Direction::Forward => SkewState::from_point([lam, other, dom]),
            Direction::Inverse => SkewState::from_point([lam, dom, other]),
        };
        let start_region = classify_skew_state(&state, r, map);
        debug_assert_eq!(
            start_region,
            if dir == Direction::Forward {
                SkewRegion::Plus
            } else {
                SkewRegion::Minus
            }
        );
        let image = map.apply(state, dir)?;
        let slack = skew_membership_slack(&image, r, map, dir);
        report.record(slack, || format!("lambda={lam} sample#{n}"));
    }
    Ok(report)
}

/// Log-space slack of V^± membership (min over the defining inequalities).
pub fn skew_membership_slack(s: &SkewState, r: f64, map: &SkewHenonMap, dir: Direction) -> f64 {
    let case = base_case(map.c());
    let mode = lambda_mode(case, dir);
    let dt1 = map.degree_tilde() as f64 + 1.0;
    let ln_lam = if s.lambda.norm() == 0.0 {
        f64::NEG_INFINITY
    } else {
        s.lambda.norm().ln()
    };
    let (ln_dom, ln_other) = match dir {
        Direction::Forward => (s.y.abs_log(), s.x.abs_log()),
        Direction::Inverse => (s.x.abs_log(), s.y.abs_log()),
    };
    let mut slack = (ln_dom - r.ln()).min(ln_dom - ln_other);
    match mode {
        LambdaMode::Cap => {
            if ln_lam != f64::NEG_INFINITY {
                slack = slack.min(ln_dom - dt1 * ln_lam);
            }
        }
        LambdaMode::UnitDisk => slack = slack.min(-ln_lam),
    }
    slack
}

/// Sampled invariance of the uniform fibered filtration.
pub fn check_fibered_invariance(
    map: &FiberedSkewHenon,
    dir: Direction,
    r: f64,
    samples: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    let mut report = InvarianceReport {
        samples,
        violations: Vec::new(),
        min_slack: f64::INFINITY,
        label: format!("fibered V^{} (R={r:.3e})", if dir == Direction::Forward { "+" } else { "-" }),
    };
    for n in 0..samples {
        let mut rng = sample::rng_for(seed, n as u64);
        let (_, dom, other) = sample::sample_dominated_pair(&mut rng, r, 0.0, 0.999);
        let t: f64 = rng.gen();
        let state = match dir {
            Direction::Forward => FiberedState::new(t, other, dom),
            Direction::Inverse => FiberedState::new(t, dom, other),
        };
        let image = map.apply(state, dir)?;
        let (ln_dom, ln_other) = match dir {
            Direction::Forward => (image.y.abs_log(), image.x.abs_log()),
            Direction::Inverse => (image.x.abs_log(), image.y.abs_log()),
        };
        let slack = (ln_dom - r.ln()).min(ln_dom - ln_other);
        report.record(slack, || format!("t={t} sample#{n}"));
    }
    Ok(report)
}

/// Convenience: the image of a vector point under the rotation-free
/// helpers above, for tests that need plain complex data.
pub fn shift_point_norm(z: &[Complex64]) -> f64 {
    sup_norm(z)
}
