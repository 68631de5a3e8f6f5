//! The aggregated verification suite behind `polyauto verify`: every
//! numerical identity and estimate the library exposes, run against one map
//! (or a pair) with deterministic seeding, reported one pass/fail line per
//! invariant family.

use num::complex::Complex64;
use rand::Rng;

use polyauto_core::algebra::multipoly::{compose_maps, identity_map, map_degree};
use polyauto_core::boettcher::{functional_residual, green_crosscheck};
use polyauto_core::filtration::{
    check_fibered_invariance, check_shift_sector_invariance, check_skew_invariance,
    estimate_fibered_radius, estimate_skew_radius, estimate_thresholds,
};
use polyauto_core::green::{
    functional_identity_residual, projective_ratios, verify_growth_bracket, FiberedSystem,
    ShiftSystem, SkewSystem,
};
use polyauto_core::maps::{DiagonalMap, Direction};
use polyauto_core::rigidity::{check_coefficient_relations, verify_commutation};
use polyauto_core::sample;

use crate::io::AnyMap;
use crate::render::RunConfig;

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct SuiteReport {
    pub lines: Vec<CheckLine>,
}

impl SuiteReport {
    pub fn push(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.lines.push(CheckLine {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.pass)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(&format!(
                "{} {} — {}\n",
                if l.pass { "PASS" } else { "FAIL" },
                l.name,
                l.detail
            ));
        }
        out.push_str(&format!(
            "{}/{} checks passed\n",
            self.lines.iter().filter(|l| l.pass).count(),
            self.lines.len()
        ));
        out
    }
}

// ---------------------------------------------------------------------------
// Deterministic region samplers shared with the acceptance suite
// ---------------------------------------------------------------------------

/// Random points of the ball ‖z‖ ≤ scale.
pub fn ball_points(k: usize, count: usize, seed: u64, scale: f64) -> Vec<Vec<Complex64>> {
    (0..count)
        .map(|i| {
            let mut rng = sample::rng_for(seed, i as u64);
            (0..k)
                .map(|_| {
                    let m: f64 = rng.gen();
                    sample::polar(&mut rng, m * scale)
                })
                .collect()
        })
        .collect()
}

/// V_R^± points of a skew map (dominant fiber coordinate between `lo` and
/// `hi` times the sampled radius, λ inside the case-appropriate constraint).
pub fn skew_region_points(
    map: &polyauto_core::maps::SkewHenonMap,
    dir: Direction,
    r: f64,
    count: usize,
    seed: u64,
    dominance: (f64, f64),
) -> Vec<[Complex64; 3]> {
    use polyauto_core::filtration::{base_case, BaseCase};
    let dt1 = map.degree_tilde() as f64 + 1.0;
    let unit_disk = matches!(
        (base_case(map.c()), dir),
        (BaseCase::Expanding, Direction::Inverse) | (BaseCase::Contracting, Direction::Forward)
    );
    (0..count)
        .map(|i| {
            let mut rng = sample::rng_for(seed, i as u64);
            let (rho, dom, other) = sample::sample_dominated_pair(&mut rng, r, dominance.0, dominance.1);
            let u: f64 = rng.gen();
            let lam_mod = if unit_disk {
                0.1 + 0.8 * u
            } else {
                (0.1 + 0.8 * u) * rho.powf(1.0 / dt1)
            };
            let lam = sample::polar(&mut rng, lam_mod);
            match dir {
                Direction::Forward => [lam, other, dom],
                Direction::Inverse => [lam, dom, other],
            }
        })
        .collect()
}

/// Sector points of a shift map (V_i^R(ε)).
pub fn shift_sector_points(
    k: usize,
    sector: usize,
    r: f64,
    eps: f64,
    count: usize,
    seed: u64,
) -> Vec<Vec<Complex64>> {
    (0..count)
        .map(|i| {
            let mut rng = sample::rng_for(seed, i as u64);
            sample::sample_sector(&mut rng, k, sector, r, eps)
        })
        .collect()
}

/// V^± fiber points of a fibered map, with random base angle.
pub fn fibered_region_points(
    dir: Direction,
    r: f64,
    count: usize,
    seed: u64,
) -> Vec<(f64, Complex64, Complex64)> {
    (0..count)
        .map(|i| {
            let mut rng = sample::rng_for(seed, i as u64);
            let (_, dom, other) = sample::sample_dominated_pair(&mut rng, r, 0.3, 0.9);
            let t: f64 = rng.gen();
            match dir {
                Direction::Forward => (t, other, dom),
                Direction::Inverse => (t, dom, other),
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Per-family check bundles
// ---------------------------------------------------------------------------

/// Backward-error-style round-trip measure: the inverse reconstructs the
/// point from the image, so the resolvable scale is set by the larger of the
/// point and its image.
fn max_rel_err(points: impl Iterator<Item = (Vec<Complex64>, Vec<Complex64>, f64)>) -> f64 {
    let mut worst = 0.0_f64;
    for (a, b, image_norm) in points {
        for (x, y) in a.iter().zip(&b) {
            let scale = x.norm().max(1.0).max(image_norm);
            worst = worst.max((x - y).norm() / scale);
        }
    }
    worst
}

fn check_shift(report: &mut SuiteReport, name: &str, s: &polyauto_core::maps::ShiftLikeMap, cfg: &RunConfig) {
    // inverse round-trip
    let pts = ball_points(s.dim(), 1000, cfg.seed, 10.0);
    let worst = max_rel_err(pts.into_iter().map(|z| {
        let fwd = s.apply(&z, Direction::Forward).expect("dim ok");
        let back = s.apply(&fwd, Direction::Inverse).expect("dim ok");
        let image_norm = fwd.iter().map(|c| c.norm()).fold(0.0, f64::max);
        (z, back, image_norm)
    }));
    report.push(
        format!("{name}/round-trip"),
        worst <= 1e-12,
        format!("max relative error {worst:.3e} over 1000 points"),
    );

    // exact symbolic inverse up to two iterates
    let mut sym_ok = true;
    for n in 1..=2 {
        let f = s.iterate_polys(n, 1 << 24).expect("budget");
        let g = s.iterate_polys(-n, 1 << 24).expect("budget");
        sym_ok &= compose_maps(&f, &g).expect("arity") == identity_map(s.dim());
    }
    report.push(
        format!("{name}/symbolic-inverse"),
        sym_ok,
        "map∘map⁻¹ = id exactly for n ≤ 2",
    );

    // sector invariance at estimated thresholds
    let th = estimate_thresholds(s, s).expect("same type");
    let mut ok = true;
    let mut min_slack = f64::INFINITY;
    for i in 0..s.dim() {
        let rep = check_shift_sector_invariance(s, i, th.r0, th.eps0, 1000, cfg.seed)
            .expect("sampling");
        ok &= rep.invariant();
        min_slack = min_slack.min(rep.min_slack);
    }
    report.push(
        format!("{name}/sector-invariance"),
        ok,
        format!("R0={:.3e} eps0={:.3e} min_slack={min_slack:.3e}", th.r0, th.eps0),
    );

    // Green normalization identity
    let sys = ShiftSystem::plus(s);
    let mut worst = 0.0_f64;
    for z in ball_points(s.dim(), 100, cfg.seed ^ 0x51, 5.0) {
        let start = sys.start(&z);
        for n in 1..=4 {
            if let Ok(r) = functional_identity_residual(&sys, &start, Direction::Forward, n) {
                worst = worst.max(r);
            }
        }
    }
    report.push(
        format!("{name}/green-identity"),
        worst <= 1e-10,
        format!("max |G_n∘S^ν - d·G_(n+1)| = {worst:.3e}"),
    );

    // Böttcher functional equation + crosscheck on sector points
    let mut worst_res = 0.0_f64;
    let mut worst_cross = 0.0_f64;
    let sector_pts = shift_sector_points(s.dim(), s.dim() - 1, th.r0, th.eps0, 20, cfg.seed ^ 0x7);
    for z in sector_pts {
        let start = sys.start(&z);
        if let Ok(r) = functional_residual(&sys, &start, Direction::Forward, cfg.depth, th.r0) {
            worst_res = worst_res.max(r);
        }
        if let Ok(seq) = green_crosscheck(&sys, &start, Direction::Forward, cfg.depth, th.r0) {
            worst_cross = worst_cross.max(*seq.last().unwrap_or(&0.0));
        }
    }
    report.push(
        format!("{name}/boettcher-residual"),
        worst_res <= 1e-8,
        format!("max relative residual {worst_res:.3e} at depth {}", cfg.depth),
    );
    report.push(
        format!("{name}/green-boettcher"),
        worst_cross <= 1e-6,
        format!("max matched-depth discrepancy {worst_cross:.3e}"),
    );

    // iterates commute symbolically
    let a = s.iterate_polys(1, 1 << 24).expect("budget");
    let b = s.iterate_polys(2, 1 << 24).expect("budget");
    let cert = verify_commutation(&a, &b, &DiagonalMap::identity(s.dim()), true).expect("arity");
    report.push(
        format!("{name}/self-commutation"),
        cert.verdict.is_equal(),
        "S and S² commute exactly with identity diagonal",
    );
}

fn check_skew(report: &mut SuiteReport, name: &str, h: &polyauto_core::maps::SkewHenonMap, cfg: &RunConfig) {
    let (d, d_tilde, c_h, c_hp) = h.structure_constants();

    // inverse round-trip
    let pts = ball_points(3, 1000, cfg.seed, 10.0);
    let worst = max_rel_err(pts.into_iter().map(|z| {
        let p = [z[0], z[1], z[2]];
        let fwd = h.apply_point(p, Direction::Forward).expect("in range");
        let back = h.apply_point(fwd, Direction::Inverse).expect("in range");
        let image_norm = fwd.iter().map(|c| c.norm()).fold(0.0, f64::max);
        (p.to_vec(), back.to_vec(), image_norm)
    }));
    report.push(
        format!("{name}/round-trip"),
        worst <= 1e-12,
        format!("max relative error {worst:.3e} over 1000 points"),
    );

    // composing H^n with H^{-n} passes through degree (d̃ d^{n-1})² before
    // the cancellation; keep the n = 2 check to maps where that stays small
    let sym_depth = if (d_tilde as u64 * d as u64).pow(2) <= 400 { 2 } else { 1 };
    let mut sym_ok = true;
    for n in 1..=sym_depth {
        let f = h.iterate_polys(n, 1 << 24).expect("budget");
        let g = h.iterate_polys(-n, 1 << 24).expect("budget");
        sym_ok &= compose_maps(&f, &g).expect("arity") == identity_map(3);
    }
    report.push(
        format!("{name}/symbolic-inverse"),
        sym_ok,
        format!("map∘map⁻¹ = id exactly for n ≤ {sym_depth}"),
    );

    // degree law deg(H^n) = d̃·d^(n-1)
    let h2 = h.iterate_polys(2, 1 << 24).expect("budget");
    let law = map_degree(&h2) == d_tilde * d;
    report.push(
        format!("{name}/degree-law"),
        law,
        format!("deg(H²) = {} (expect {})", map_degree(&h2), d_tilde * d),
    );

    // filtration invariance in both directions
    let delta_f = 0.5 * c_h.norm().min(1.0);
    let delta_b = 0.5 * c_hp.norm().min(1.0);
    let mut inv_ok = true;
    let mut detail = String::new();
    for (dir, delta) in [(Direction::Forward, delta_f), (Direction::Inverse, delta_b)] {
        match estimate_skew_radius(h, delta, dir) {
            Ok(r0) => {
                let rep = check_skew_invariance(h, dir, r0, 1000, cfg.seed).expect("sampling");
                inv_ok &= rep.invariant();
                detail.push_str(&format!("{dir:?}: R0={r0:.3e} slack={:.3e}; ", rep.min_slack));
            }
            Err(e) => {
                inv_ok = false;
                detail.push_str(&format!("{dir:?}: {e}; "));
            }
        }
    }
    report.push(format!("{name}/filtration-invariance"), inv_ok, detail);

    // Green identity
    let sys = SkewSystem::new(h);
    let mut worst = 0.0_f64;
    for z in ball_points(3, 100, cfg.seed ^ 0x51, 5.0) {
        let start = sys.start([z[0], z[1], z[2]]);
        for n in 1..=4 {
            if let Ok(r) = functional_identity_residual(&sys, &start, Direction::Forward, n) {
                worst = worst.max(r);
            }
        }
    }
    report.push(
        format!("{name}/green-identity"),
        worst <= 1e-10,
        format!("max |G_n∘H - d·G_(n+1)| = {worst:.3e}"),
    );

    // growth brackets both sides
    let mut bracket_ok = true;
    let mut margin = f64::INFINITY;
    for (dir, delta) in [(Direction::Forward, delta_f), (Direction::Inverse, delta_b)] {
        if let Ok(r0) = estimate_skew_radius(h, delta, dir) {
            for p in skew_region_points(h, dir, r0, 50, cfg.seed ^ 0x3, (0.0, 0.9)) {
                let start = sys.start(p);
                match verify_growth_bracket(&sys, &start, dir, delta, r0, 20) {
                    Ok(rep) => {
                        bracket_ok &= rep.holds;
                        margin = margin.min(rep.min_margin);
                    }
                    Err(_) => bracket_ok = false,
                }
            }
        }
    }
    report.push(
        format!("{name}/growth-bracket"),
        bracket_ok,
        format!("two-sided estimate holds, min log-margin {margin:.3e}"),
    );

    // Böttcher residuals and the Green crosscheck
    let r_plus = estimate_skew_radius(h, delta_f, Direction::Forward)
        .unwrap_or(cfg.r)
        .max(cfg.r);
    let mut worst_res = 0.0_f64;
    let mut worst_cross = 0.0_f64;
    for p in skew_region_points(h, Direction::Forward, r_plus, 20, cfg.seed ^ 0x9, (0.2, 0.9)) {
        let start = sys.start(p);
        if let Ok(r) = functional_residual(&sys, &start, Direction::Forward, cfg.depth, r_plus) {
            worst_res = worst_res.max(r);
        }
        if let Ok(seq) = green_crosscheck(&sys, &start, Direction::Forward, cfg.depth, r_plus) {
            worst_cross = worst_cross.max(*seq.last().unwrap_or(&0.0));
        }
    }
    report.push(
        format!("{name}/boettcher-residual"),
        worst_res <= 1e-8,
        format!("max relative residual {worst_res:.3e} at depth {}", cfg.depth),
    );
    report.push(
        format!("{name}/green-boettcher"),
        worst_cross <= 1e-6,
        format!("max matched-depth discrepancy {worst_cross:.3e}"),
    );

    // projective ratios
    let mut ratio_ok = true;
    for p in skew_region_points(h, Direction::Forward, r_plus, 30, cfg.seed ^ 0x11, (0.5, 0.95)) {
        if let Ok((coord, lam)) = projective_ratios(h, p, Direction::Forward, 6) {
            ratio_ok &= coord.last().map_or(false, |&r| r <= 1e-6);
            ratio_ok &= polyauto_core::green::strictly_decreasing_to_zero(&coord);
            ratio_ok &= lam.last().map_or(false, |&r| r <= 1e-6);
        } else {
            ratio_ok = false;
        }
    }
    report.push(
        format!("{name}/projective-ratios"),
        ratio_ok,
        "|x_n/y_n| and |c^n λ|^(d̃+1)/|y_n| decay below 1e-6 within 6 steps",
    );

    // iterates commute symbolically (degree-budgeted: the comparison passes
    // through degree d̃²·d)
    if (d_tilde as u64).pow(2) * d as u64 <= 60 {
        let a = h.iterate_polys(1, 1 << 24).expect("budget");
        let b = h.iterate_polys(2, 1 << 24).expect("budget");
        let cert = verify_commutation(&a, &b, &DiagonalMap::identity(3), true).expect("arity");
        report.push(
            format!("{name}/self-commutation"),
            cert.verdict.is_equal(),
            "H and H² commute exactly with identity diagonal",
        );
    }
}

fn check_fibered(
    report: &mut SuiteReport,
    name: &str,
    h: &polyauto_core::maps::FiberedSkewHenon,
    cfg: &RunConfig,
) {
    // round-trip through the rotation and fiber
    let sys = FiberedSystem::new(h);
    let mut worst = 0.0_f64;
    for (i, z) in ball_points(2, 1000, cfg.seed, 10.0).into_iter().enumerate() {
        let mut rng = sample::rng_for(cfg.seed ^ 0xABC, i as u64);
        let t: f64 = rng.gen();
        let start = sys.start(t, z[0], z[1]);
        let fwd = h.apply(start, Direction::Forward).expect("fiber");
        let back = h.apply(fwd, Direction::Inverse).expect("fiber");
        let dx = (back.x.to_complex().unwrap() - z[0]).norm() / z[0].norm().max(1.0);
        let dy = (back.y.to_complex().unwrap() - z[1]).norm() / z[1].norm().max(1.0);
        let dt = (back.t - t).abs();
        worst = worst.max(dx).max(dy).max(dt);
    }
    report.push(
        format!("{name}/round-trip"),
        worst <= 1e-12,
        format!("max relative error {worst:.3e} over 1000 points"),
    );

    // fiber-level exact inverse (λ symbolic)
    let fwd = h.fiber_symbolic(Direction::Forward);
    let inv = h.fiber_symbolic(Direction::Inverse);
    let sym_ok = compose_maps(fwd, inv).expect("arity") == identity_map(3)
        && compose_maps(inv, fwd).expect("arity") == identity_map(3);
    report.push(
        format!("{name}/symbolic-inverse"),
        sym_ok,
        "H_λ∘H_λ⁻¹ = id exactly with λ symbolic",
    );

    // uniform filtration invariance
    let delta_f = 0.5 * h.c_h().norm().min(1.0);
    let delta_b = 0.5 * h.c_h_prime().norm().min(1.0);
    let mut inv_ok = true;
    let mut detail = String::new();
    for (dir, delta) in [(Direction::Forward, delta_f), (Direction::Inverse, delta_b)] {
        match estimate_fibered_radius(h, delta, dir) {
            Ok(r0) => {
                let rep = check_fibered_invariance(h, dir, r0, 1000, cfg.seed).expect("sampling");
                inv_ok &= rep.invariant();
                detail.push_str(&format!("{dir:?}: R0={r0:.3e} slack={:.3e}; ", rep.min_slack));
            }
            Err(e) => {
                inv_ok = false;
                detail.push_str(&format!("{dir:?}: {e}; "));
            }
        }
    }
    report.push(format!("{name}/filtration-invariance"), inv_ok, detail);

    // Green identity along fibers
    let mut worst = 0.0_f64;
    for (i, z) in ball_points(2, 100, cfg.seed ^ 0x51, 5.0).into_iter().enumerate() {
        let mut rng = sample::rng_for(cfg.seed ^ 0xDEF, i as u64);
        let t: f64 = rng.gen();
        let start = sys.start(t, z[0], z[1]);
        for n in 1..=4 {
            if let Ok(r) = functional_identity_residual(&sys, &start, Direction::Forward, n) {
                worst = worst.max(r);
            }
        }
    }
    report.push(
        format!("{name}/green-identity"),
        worst <= 1e-10,
        format!("max |G_n∘H_λ - d·G_(n+1)| = {worst:.3e}"),
    );

    // Böttcher residual + crosscheck
    let r0 = estimate_fibered_radius(h, delta_f, Direction::Forward)
        .unwrap_or(cfg.r)
        .max(cfg.r);
    let mut worst_res = 0.0_f64;
    let mut worst_cross = 0.0_f64;
    for (t, x, y) in fibered_region_points(Direction::Forward, r0, 20, cfg.seed ^ 0x9) {
        let start = sys.start(t, x, y);
        if let Ok(r) = functional_residual(&sys, &start, Direction::Forward, cfg.depth, r0) {
            worst_res = worst_res.max(r);
        }
        if let Ok(seq) = green_crosscheck(&sys, &start, Direction::Forward, cfg.depth, r0) {
            worst_cross = worst_cross.max(*seq.last().unwrap_or(&0.0));
        }
    }
    report.push(
        format!("{name}/boettcher-residual"),
        worst_res <= 1e-8,
        format!("max relative residual {worst_res:.3e} at depth {}", cfg.depth),
    );
    report.push(
        format!("{name}/green-boettcher"),
        worst_cross <= 1e-6,
        format!("max matched-depth discrepancy {worst_cross:.3e}"),
    );
}

/// Run every applicable check; pair checks run when two maps are given and
/// compatible.
pub fn run_verification_suite(maps: &[(String, AnyMap)], cfg: &RunConfig) -> SuiteReport {
    let mut report = SuiteReport::default();
    for (name, map) in maps {
        match map {
            AnyMap::Shift(s) => check_shift(&mut report, name, s, cfg),
            AnyMap::SkewAffine(h) => check_skew(&mut report, name, h, cfg),
            AnyMap::SkewCircle(h) => check_fibered(&mut report, name, h, cfg),
        }
    }
    if maps.len() == 2 {
        if let (AnyMap::Shift(s), AnyMap::Shift(t)) = (&maps[0].1, &maps[1].1) {
            if s.dim() == t.dim() && s.nu() == t.nu() {
                match check_coefficient_relations(s, t) {
                    Ok(rep) => report.push("pair/coefficient-relations", rep.all_pass(), rep.render()),
                    Err(e) => report.push("pair/coefficient-relations", false, e.to_string()),
                }
            }
        }
    }
    report
}
