//! Regenerates `fixtures/regression.txt` from the brute-force oracles.
//! Development tool: refuses to touch the file unless
//! `HARVESTKIT_WRITE_FIXTURES=1` is set, so ordinary runs stay read-only.

use harvestkit::experiment::dispersion_sensitivity;
use harvestkit::medium::{reduce, rubidium_preset, DimensionlessPoint};
use harvestkit::response::{g1, g2, Smearing};
use harvestkit::specfun::{
    bessel_j0, double_time_integral_oracle, trapezoid_radial_oracle, QuadratureSpec,
};
use harvestkit_cli::output::format_f64;
use harvestkit_cli::validate::fixture_digest;
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() {
    let spec = QuadratureSpec::default();
    let s = 0.125;
    let u_max = spec.u_max(s);
    let ft2 = |u: f64| (-(s * u) * (s * u)).exp();
    let n = 1_000_000;

    let mut lines: Vec<String> = Vec::new();

    // element fixtures from the fixed-grid radial trapezoid
    let l_aa = trapezoid_radial_oracle(
        |u| {
            let amp = g1(1.0, u);
            Complex64::new(ft2(u) * amp * amp, 0.0)
        },
        u_max,
        n,
    ) / (4.0 * PI);
    lines.push(format!(
        "element l_aa 1.0 0.0 0.125 0.0 linear gaussian {} {}",
        format_f64(l_aa.re),
        format_f64(0.0)
    ));
    let l_ab = trapezoid_radial_oracle(
        |u| {
            let amp = g1(1.0, u);
            Complex64::new(ft2(u) * bessel_j0(2.0 * u) * amp * amp, 0.0)
        },
        u_max,
        n,
    ) / (4.0 * PI);
    lines.push(format!(
        "element l_ab 1.0 2.0 0.125 0.0 linear gaussian {} {}",
        format_f64(l_ab.re),
        format_f64(0.0)
    ));
    for b in [1.0, 2.0] {
        let m = -trapezoid_radial_oracle(|u| ft2(u) * bessel_j0(b * u) * g2(1.0, u), u_max, n)
            / (4.0 * PI);
        lines.push(format!(
            "element m 1.0 {b:.1} 0.125 0.0 linear gaussian {} {}",
            format_f64(m.re),
            format_f64(m.im)
        ));
    }

    // frozen output of the deterministic time-domain oracle
    let oracle = double_time_integral_oracle(1.0, 1.0, 2000).unwrap();
    lines.push(format!(
        "g2_oracle 1.0 1.0 2000 {} {}",
        format_f64(oracle.re),
        format_f64(oracle.im)
    ));

    // dispersion suppression at the Rubidium point
    let preset = rubidium_preset();
    let rubidium = reduce(&preset.medium(), &preset.detector_defaults()).unwrap();
    let point =
        DimensionlessPoint::new(1.0, 1.0, rubidium.s, rubidium.delta, rubidium.branch).unwrap();
    let tight = QuadratureSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-16,
        max_subdivisions: 4000,
        ..QuadratureSpec::default()
    };
    let ds = dispersion_sensitivity(&point, Smearing::Gaussian, &tight).unwrap();
    lines.push(format!(
        "dispersion 1.0 1.0 {} {} {}",
        format_f64(rubidium.s),
        format_f64(rubidium.delta),
        format_f64(ds.rel_diff)
    ));

    let mut text = String::new();
    text.push_str("# harvestkit regression fixtures v1\n");
    text.push_str(
        "# element rows: fixed-grid radial trapezoid oracle, 1000000 intervals, u_max = 10/s\n",
    );
    text.push_str("# g2_oracle rows: cumulative-trapezoid time-domain oracle at the stated n\n");
    text.push_str("# dispersion rows: adaptive quadrature at rel_tol 1e-12\n");
    text.push_str(&format!("# sha256: {}\n", fixture_digest(&lines)));
    for line in &lines {
        text.push_str(line);
        text.push('\n');
    }

    if std::env::var_os("HARVESTKIT_WRITE_FIXTURES").is_some_and(|v| v == "1") {
        std::fs::create_dir_all("fixtures").expect("create fixtures dir");
        std::fs::write("fixtures/regression.txt", &text).expect("write fixtures");
        eprintln!("wrote fixtures/regression.txt");
    } else {
        print!("{text}");
        eprintln!("(dry run; set HARVESTKIT_WRITE_FIXTURES=1 to write)");
    }
}
