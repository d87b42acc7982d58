//! Bit-stable tabular and JSON output.
//!
//! Every numeric cell is written with 17 significant decimal digits in
//! scientific notation, enough to round-trip any f64, locale-independent
//! by construction. Map files are CSV with LF line endings, header row
//! first, rows in row-major order (gap outer, separation inner); the
//! exact header line doubles as the map schema signature
//! ([`MAP_HEADER`]). JSON outputs carry explicit schema strings.

use harvestkit::entanglement::HarvestPoint;
use harvestkit::experiment::SweepResult;
use serde_json::{json, Value};

use crate::config::RunConfig;

pub const POINT_SCHEMA: &str = "harvestkit/point/v1";
pub const OPTIMIZE_SCHEMA: &str = "harvestkit/optimize/v1";
/// Fixed column set of a map file; parsers should treat this exact line
/// as the format version.
pub const MAP_HEADER: &str =
    "a,b,N_over_lambda2T2,concurrence,log10_concurrence,I_min,causal_class,quad_error,status";

/// 17-significant-digit scientific form, the fixed cell format of every
/// table.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON object for one evaluated point. `negativity` and the derived
/// entries carry the `lambda^2` factor; the `per_lambda2_t2` entries are
/// the raw coefficients.
pub fn point_json(cfg: &RunConfig, hp: &HarvestPoint) -> Value {
    let lambda2 = cfg.coupling * cfg.coupling;
    let negativity = lambda2 * hp.negativity;
    let zero = negativity == 0.0;
    let concurrence = 2.0 * negativity;
    let si = cfg.si.as_ref().map(|si| {
        json!({
            "sound_speed": si.medium.sound_speed,
            "dispersion_strength": si.medium.dispersion_strength,
            "pulse_width": si.pulse_width,
            "spot_size": si.spot_size,
            "gap": si.gap,
            "separation": si.separation,
        })
    });
    json!({
        "schema": POINT_SCHEMA,
        "preset": cfg.preset_name,
        "point": {
            "a": hp.a,
            "b": hp.b,
            "s": hp.s,
            "delta": hp.delta,
            "branch": hp.branch.name(),
            "smearing": hp.smearing.name(),
        },
        "si": si,
        "lambda": cfg.coupling,
        "elements_per_lambda2_t2": {
            "l_aa": hp.elements.l_aa,
            "l_bb": hp.elements.l_bb,
            "l_ab_re": hp.elements.l_ab.re,
            "l_ab_im": hp.elements.l_ab.im,
            "m_re": hp.elements.m.re,
            "m_im": hp.elements.m.im,
        },
        "negativity_per_lambda2_t2": hp.negativity,
        "negativity": negativity,
        "concurrence": concurrence,
        "log10_concurrence": match hp.log10_concurrence {
            Some(v) if !zero => Value::from(v + lambda2.log10()),
            _ => Value::Null,
        },
        "zero": zero,
        "inseparability_min": 1.0 + lambda2 * (hp.inseparability_min - 1.0),
        "causal_class": hp.causal_class.name(),
        "diagnostics": {
            "quad_error": hp.diagnostics.quad_error,
            "subdivisions": hp.diagnostics.subdivisions,
        },
    })
}

/// CSV text of a sweep, schema-tagged, suitable for byte-for-byte
/// comparison across runs and thread counts.
pub fn map_csv(result: &SweepResult) -> String {
    let mut out = String::with_capacity(result.cells.len() * 160);
    out.push_str(MAP_HEADER);
    out.push('\n');
    for cell in &result.cells {
        out.push_str(&format_f64(cell.a));
        out.push(',');
        out.push_str(&format_f64(cell.b));
        match &cell.outcome {
            Ok(hp) => {
                out.push(',');
                out.push_str(&format_f64(hp.negativity));
                out.push(',');
                out.push_str(&format_f64(hp.concurrence));
                out.push(',');
                if let Some(log) = hp.log10_concurrence {
                    out.push_str(&format_f64(log));
                }
                out.push(',');
                out.push_str(&format_f64(hp.inseparability_min));
                out.push(',');
                out.push_str(hp.causal_class.name());
                out.push(',');
                out.push_str(&format_f64(hp.diagnostics.quad_error));
                out.push_str(",ok\n");
            }
            Err(e) => {
                out.push_str(",,,,,,");
                out.push_str(error_tag(e));
                out.push('\n');
            }
        }
    }
    out
}

pub fn error_tag(e: &harvestkit::Error) -> &'static str {
    match e {
        harvestkit::Error::Domain(_) => "domain_error",
        harvestkit::Error::Convergence { .. } => "convergence_error",
        harvestkit::Error::Perturbativity { .. } => "perturbativity_error",
        harvestkit::Error::IdenticalDetector { .. } => "identical_detector_error",
        harvestkit::Error::Infeasible { .. } => "infeasible",
    }
}
