//! Deterministic slice rendering: per-pixel classification/Green values to
//! 16-bit PGM (P5, maxval 65535, big-endian) plus a CSV with full
//! round-trip decimal formatting.

use num::complex::Complex64;
use rayon::prelude::*;

use polyauto_core::green::{
    classify_orbit, green_value, FiberedSystem, OrbitClass, ShiftSystem, SkewSystem,
};
use polyauto_core::maps::Direction;
use polyauto_core::slice::{dof_to_complex, PointLayout, SliceSpec};
use polyauto_core::Result;

use crate::io::AnyMap;

/// Run parameters; the seed fixes every stochastic choice (rendering itself
/// is deterministic per pixel, the seed feeds sampled verifications).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub r: f64,
    pub n: usize,
    pub depth: usize,
    pub tol: f64,
    pub seed: u64,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            r: 10.0,
            n: 200,
            depth: 8,
            tol: 1e-12,
            seed: 1,
            threads: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Green,
    Class,
    EscapeIndex,
}

impl Quantity {
    pub fn parse(s: &str) -> Option<Quantity> {
        match s {
            "green" => Some(Quantity::Green),
            "class" => Some(Quantity::Class),
            "escape-index" => Some(Quantity::EscapeIndex),
            _ => None,
        }
    }
}

pub fn layout_of(map: &AnyMap) -> PointLayout {
    match map {
        AnyMap::Shift(s) => PointLayout::Complex(s.dim()),
        AnyMap::SkewAffine(_) => PointLayout::Complex(3),
        AnyMap::SkewCircle(_) => PointLayout::CircleFibered,
    }
}

/// Classification and Green value of one ambient point given as a flat dof
/// vector.
pub fn eval_point(
    map: &AnyMap,
    dof: &[f64],
    dir: Direction,
    cfg: &RunConfig,
) -> Result<(OrbitClass, f64)> {
    let est = green_estimate(map, dof, dir, cfg)?;
    Ok((est.class, est.value))
}

/// Orbit classification only (no Green refinement).
pub fn classify_point(
    map: &AnyMap,
    dof: &[f64],
    dir: Direction,
    cfg: &RunConfig,
) -> Result<OrbitClass> {
    match map {
        AnyMap::Shift(s) => {
            let z = dof_to_complex(dof);
            let sys = match dir {
                Direction::Forward => ShiftSystem::plus(s),
                Direction::Inverse => ShiftSystem::minus(s),
            };
            Ok(classify_orbit(&sys, &sys.start(&z), dir, cfg.r, cfg.n)?.class)
        }
        AnyMap::SkewAffine(h) => {
            let z = dof_to_complex(dof);
            let sys = SkewSystem::new(h);
            Ok(classify_orbit(&sys, &sys.start([z[0], z[1], z[2]]), dir, cfg.r, cfg.n)?.class)
        }
        AnyMap::SkewCircle(h) => {
            let sys = FiberedSystem::new(h);
            let start = sys.start(
                dof[0],
                Complex64::new(dof[1], dof[2]),
                Complex64::new(dof[3], dof[4]),
            );
            Ok(classify_orbit(&sys, &start, dir, cfg.r, cfg.n)?.class)
        }
    }
}

#[derive(Debug, Clone)]
pub struct PixelData {
    pub class: OrbitClass,
    pub green: f64,
}

/// Evaluate every pixel of the slice, in parallel over a pool of
/// `cfg.threads` workers; output order is pixel order regardless of thread
/// count.
pub fn eval_slice(
    map: &AnyMap,
    slice: &SliceSpec,
    dir: Direction,
    cfg: &RunConfig,
) -> Result<Vec<PixelData>> {
    let layout = layout_of(map);
    let w = slice.width();
    let h = slice.height();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.max(1))
        .build()
        .expect("thread pool");
    let results: Result<Vec<PixelData>> = pool.install(|| {
        (0..w * h)
            .into_par_iter()
            .map(|idx| {
                // row-major with the top row at the maximum of axis 2
                let row = idx / w;
                let col = idx % w;
                let j = h - 1 - row;
                let dof = slice.point(col, j, layout);
                let (class, green) = eval_point(map, &dof, dir, cfg)?;
                Ok(PixelData { class, green })
            })
            .collect()
    });
    results
}

fn class_code(c: OrbitClass) -> f64 {
    match c {
        OrbitClass::Bounded(_) => 0.0,
        OrbitClass::Undetermined(_) => 1.0,
        OrbitClass::Escaping(_) => 2.0,
    }
}

fn quantity_value(p: &PixelData, q: Quantity, horizon: usize) -> f64 {
    match q {
        Quantity::Green => p.green,
        Quantity::Class => class_code(p.class),
        Quantity::EscapeIndex => match p.class {
            OrbitClass::Escaping(n) => n as f64,
            _ => horizon as f64,
        },
    }
}

#[derive(Debug, Clone)]
pub struct RenderOutput {
    pub pgm: Vec<u8>,
    pub csv: String,
    pub q_max: f64,
}

/// Render the slice: pixel = round(clamp(q/q_max, 0, 1)·65535), q_max taken
/// over the grid and written to the CSV header.
pub fn render_slice(
    map: &AnyMap,
    slice: &SliceSpec,
    dir: Direction,
    cfg: &RunConfig,
    quantity: Quantity,
) -> Result<RenderOutput> {
    let pixels = eval_slice(map, slice, dir, cfg)?;
    let w = slice.width();
    let h = slice.height();
    let values: Vec<f64> = pixels
        .iter()
        .map(|p| quantity_value(p, quantity, cfg.n))
        .collect();
    let q_max = values.iter().cloned().fold(0.0_f64, f64::max);
    let denom = if q_max > 0.0 { q_max } else { 1.0 };

    let mut pgm = format!("P5\n{w} {h}\n65535\n").into_bytes();
    for v in &values {
        let t = (v / denom).clamp(0.0, 1.0);
        let px = (t * 65535.0).round() as u16;
        pgm.extend_from_slice(&px.to_be_bytes());
    }

    let mut csv = format!("# q_max={q_max}\naxis1,axis2,class,escape_index,G\n");
    for (idx, p) in pixels.iter().enumerate() {
        let row = idx / w;
        let col = idx % w;
        let j = h - 1 - row;
        let a1 = slice.axes[0].value(col);
        let a2 = slice.axes[1].value(j);
        let esc = match p.class {
            OrbitClass::Escaping(n) => n.to_string(),
            _ => String::new(),
        };
        csv.push_str(&format!("{a1},{a2},{},{esc},{}\n", p.class.tag(), p.green));
    }
    Ok(RenderOutput { pgm, csv, q_max })
}

/// Grid-sweep CSV with full ambient coordinates: one row per point with
/// (coordinates…, class tag, escape index, G value, increments exhausted).
pub fn green_sweep_csv(
    map: &AnyMap,
    slice: &SliceSpec,
    dir: Direction,
    cfg: &RunConfig,
) -> Result<String> {
    let layout = layout_of(map);
    let dof_len = layout.dof();
    let mut header: Vec<String> = (0..dof_len).map(|i| format!("c{i}")).collect();
    header.extend(["class", "escape_index", "G", "increments_exhausted"].map(String::from));
    let mut csv = header.join(",");
    csv.push('\n');
    for j in (0..slice.height()).rev() {
        for i in 0..slice.width() {
            let dof = slice.point(i, j, layout);
            let est = green_estimate(map, &dof, dir, cfg)?;
            let esc = match est.class {
                OrbitClass::Escaping(n) => n.to_string(),
                _ => String::new(),
            };
            let coords: Vec<String> = dof.iter().map(|v| format!("{v}")).collect();
            csv.push_str(&format!(
                "{},{},{esc},{},{}\n",
                coords.join(","),
                est.class.tag(),
                est.value,
                est.exhausted
            ));
        }
    }
    Ok(csv)
}

/// Full Green estimate of one ambient point.
pub fn green_estimate(
    map: &AnyMap,
    dof: &[f64],
    dir: Direction,
    cfg: &RunConfig,
) -> Result<polyauto_core::green::GreenEstimate> {
    match map {
        AnyMap::Shift(s) => {
            let z = dof_to_complex(dof);
            let sys = match dir {
                Direction::Forward => ShiftSystem::plus(s),
                Direction::Inverse => ShiftSystem::minus(s),
            };
            green_value(&sys, &sys.start(&z), dir, cfg.r, cfg.n, cfg.depth, cfg.tol)
        }
        AnyMap::SkewAffine(h) => {
            let z = dof_to_complex(dof);
            let sys = SkewSystem::new(h);
            green_value(&sys, &sys.start([z[0], z[1], z[2]]), dir, cfg.r, cfg.n, cfg.depth, cfg.tol)
        }
        AnyMap::SkewCircle(h) => {
            let sys = FiberedSystem::new(h);
            let start = sys.start(
                dof[0],
                Complex64::new(dof[1], dof[2]),
                Complex64::new(dof[3], dof[4]),
            );
            green_value(&sys, &start, dir, cfg.r, cfg.n, cfg.depth, cfg.tol)
        }
    }
}
