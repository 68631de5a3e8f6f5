use num::complex::Complex64;
use polyauto_cli::io::{load_map, AnyMap};
use polyauto_cli::suite::skew_region_points;
use polyauto_core::boettcher::{boettcher, functional_constant, functional_residual};
use polyauto_core::filtration::estimate_skew_radius;
use polyauto_core::green::{EscapeSystem, SkewSystem};
use polyauto_core::maps::Direction;

fn main() {
    let map = load_map("crates/cli/maps/skew_dtilde3.json").unwrap();
    let AnyMap::SkewAffine(h) = map else { panic!() };
    let sys = SkewSystem::new(&h);
    let delta = 0.5 * h.c_h().norm().min(1.0);
    let r0 = estimate_skew_radius(&h, delta, Direction::Forward).unwrap().max(10.0);
    for p in skew_region_points(&h, Direction::Forward, r0, 10, 9, (0.2, 0.9)) {
        let start = sys.start(p);
        let res = functional_residual(&sys, &start, Direction::Forward, 6, r0).unwrap();
        if res > 1e-8 {
            println!("FAILING point lam={} y={}", p[0], p[2]);
            let image = sys.block_step(&start, Direction::Forward).unwrap();
            let lhs = boettcher(&sys, &image, Direction::Forward, 6, r0).unwrap();
            let rhs = boettcher(&sys, &start, Direction::Forward, 7, r0).unwrap();
            println!("lhs wraps={} rhs wraps={}", lhs.wrap_count, rhs.wrap_count);
            println!("lhs log={:?}", lhs.log_value);
            println!("rhs log={:?}", rhs.log_value);
            let d = sys.degree();
            for m in -3i64..=3 {
                let kappa = functional_constant(&sys, Direction::Forward, m);
                let kl = Complex64::new(kappa.norm().ln(), kappa.arg());
                let res_log = lhs.log_value - (rhs.log_value * d + kl);
                let r = (res_log.exp() - Complex64::new(1.0, 0.0)).norm();
                println!("  m={m}: residual {r:.3e}");
            }
            break;
        } else {
            println!("ok point res={res:.3e}");
        }
    }
}
