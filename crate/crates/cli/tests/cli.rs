//! Behavioral tests of the CLI surface: every subcommand once, schema
//! round-trips, and the documented flag contracts.

use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_polyauto")
}

fn map_path(name: &str) -> String {
    format!("{}/maps/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(bin()).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn classify_point() {
    let (code, out, err) = run(&[
        "classify",
        "--map",
        &map_path("skew_basic"),
        "--point",
        "[[0,0],[0,0],[10,0]]",
        "--r",
        "5",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("Escaping(0)"), "{out}");
}

#[test]
fn green_point_and_sweep() {
    let (code, out, err) = run(&[
        "green",
        "--map",
        &map_path("skew_basic"),
        "--point",
        "[[0,0],[0,0],[10,0]]",
        "--r",
        "5",
        "--depth",
        "2",
        "--tol",
        "0",
    ]);
    assert_eq!(code, 0, "{err}");
    // G2 = ln(9990)/4
    let want = 9990f64.ln() / 4.0;
    assert!(out.contains(&format!("G={want}")), "{out}");

    let tmp = std::env::temp_dir().join(format!("polyauto-sweep-{}.csv", std::process::id()));
    let (code, _, err) = run(&[
        "green",
        "--map",
        &map_path("skew_basic"),
        "--slice",
        r#"{"axes":[{"coord":2,"part":"re","min":-2,"max":2,"res":4},{"coord":2,"part":"im","min":-2,"max":2,"res":4}]}"#,
        "--out",
        tmp.to_str().unwrap(),
        "--r",
        "5",
    ]);
    assert_eq!(code, 0, "{err}");
    let csv = std::fs::read_to_string(&tmp).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "c0,c1,c2,c3,c4,c5,class,escape_index,G,increments_exhausted"
    );
    assert_eq!(lines.count(), 16);
    std::fs::remove_file(&tmp).ok();
}

#[test]
fn orbit_listing() {
    let (code, out, err) = run(&[
        "orbit",
        "--map",
        &map_path("shift_basic"),
        "--point",
        "[[0,0],[0,0],[10,0]]",
        "--r",
        "5",
        "--n",
        "3",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("class=Escaping(0)"), "{out}");
    assert!(out.contains("n=0"), "{out}");
}

#[test]
fn boettcher_value() {
    let (code, out, err) = run(&[
        "boettcher",
        "--map",
        &map_path("skew_basic"),
        "--point",
        "[[0,0],[0,0],[10,0]]",
        "--r",
        "5",
        "--depth",
        "8",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("log|phi|="), "{out}");
    assert!(out.contains("functional_residual="), "{out}");
}

#[test]
fn thresholds_all_families() {
    for name in ["shift_basic", "skew_basic", "fibered_golden"] {
        let (code, out, err) = run(&["thresholds", "--map", &map_path(name)]);
        assert_eq!(code, 0, "{name}: {err}");
        assert!(out.contains("R0="), "{name}: {out}");
    }
}

#[test]
fn rigidity_self_check() {
    let (code, out, err) = run(&["rigidity", "--map", &map_path("skew_basic")]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("ExactEqual"), "{out}");
    assert!(out.contains("class agreement"), "{out}");
}

#[test]
fn rigidity_negative_pair_reports_sweep() {
    let (_, out, _) = run(&[
        "rigidity",
        "--map",
        &map_path("shift_basic"),
        "--map2",
        &map_path("shift_affine"),
    ]);
    assert!(out.contains("solve_diagonal(S^m, T^m): none"), "{out}");
    assert!(out.contains("0 of 1728 candidates verify"), "{out}");
}

#[test]
fn verify_exit_one_on_failing_pair() {
    // the leading-coefficient relations fail for this constructed pair
    let tmp = std::env::temp_dir().join(format!("polyauto-pair-{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let p4 = tmp.join("p4.json");
    let q8 = tmp.join("q8.json");
    std::fs::write(
        &p4,
        r#"{"family":"shift","k":3,"nu":1,"a":[1,0],"p":[[0,0],[0,0],[4,0]]}"#,
    )
    .unwrap();
    std::fs::write(
        &q8,
        r#"{"family":"shift","k":3,"nu":1,"a":[1,0],"p":[[0,0],[0,0],[0,0],[8,0]]}"#,
    )
    .unwrap();
    let (code, out, _) = run(&[
        "verify",
        "--map",
        p4.to_str().unwrap(),
        "--map2",
        q8.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("FAIL pair/coefficient-relations"), "{out}");
    std::fs::remove_dir_all(&tmp).ok();
}

#[test]
fn schema_round_trip_through_files() {
    use polyauto_cli::io::{load_map, save_map, to_raw};
    let tmp = std::env::temp_dir().join(format!("polyauto-rt-{}.json", std::process::id()));
    for name in ["shift_nu2", "skew_rich", "fibered_golden"] {
        let m = load_map(map_path(name)).unwrap();
        save_map(&m, &tmp).unwrap();
        let again = load_map(&tmp).unwrap();
        assert_eq!(to_raw(&m), to_raw(&again), "{name}");
    }
    std::fs::remove_file(&tmp).ok();
}

#[test]
fn render_writes_pgm_header() {
    let tmp = std::env::temp_dir().join(format!("polyauto-r16-{}", std::process::id()));
    let (code, _, err) = run(&[
        "render",
        "--map",
        &map_path("skew_basic"),
        "--slice",
        r#"{"axes":[{"coord":2,"part":"re","min":-3,"max":3,"res":16},{"coord":2,"part":"im","min":-3,"max":3,"res":16}]}"#,
        "--quantity",
        "escape-index",
        "--out",
        tmp.to_str().unwrap(),
        "--r",
        "5",
    ]);
    assert_eq!(code, 0, "{err}");
    let pgm = std::fs::read(format!("{}.pgm", tmp.display())).unwrap();
    assert!(pgm.starts_with(b"P5\n16 16\n65535\n"));
    assert_eq!(pgm.len(), b"P5\n16 16\n65535\n".len() + 16 * 16 * 2);
    std::fs::remove_file(format!("{}.pgm", tmp.display())).ok();
    std::fs::remove_file(format!("{}.csv", tmp.display())).ok();
}

#[test]
fn fibered_point_syntax() {
    let (code, out, err) = run(&[
        "classify",
        "--map",
        &map_path("fibered_golden"),
        "--point",
        "[0.3,[0,0],[12,0]]",
        "--r",
        "5",
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("Escaping(0)"), "{out}");
}
