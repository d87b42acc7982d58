//! Command implementations. Exit codes: 0 success (a zero negativity is a
//! success), 2 configuration error, 3 convergence failure, 4 validation
//! failure.

use std::path::Path;

use harvestkit::experiment::{
    evaluate_point, optimize_negativity, sweep, Constraint, OptimizeConfig,
};
use harvestkit::medium::{crossover_scale, reduce, rubidium_preset};
use serde_json::json;

use crate::config::RunConfig;
use crate::output::{error_tag, format_f64, map_csv, point_json, OPTIMIZE_SCHEMA};
use crate::validate;

pub fn exit_code_for(e: &harvestkit::Error) -> u8 {
    match e {
        harvestkit::Error::Convergence { .. } => 3,
        _ => 2,
    }
}

fn emit(value: &serde_json::Value, out: Option<&Path>) -> Result<(), String> {
    let text = format!("{value:#}\n");
    print!("{text}");
    if let Some(path) = out {
        std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

pub fn cmd_point(cfg: &RunConfig, out: Option<&Path>) -> Result<u8, String> {
    let point = cfg.point().map_err(|e| e.to_string())?;
    match evaluate_point(&point, cfg.smearing, &cfg.quad) {
        Ok(hp) => {
            emit(&point_json(cfg, &hp), out)?;
            Ok(0)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(exit_code_for(&e))
        }
    }
}

pub fn cmd_map(cfg: &RunConfig, out: &Path) -> Result<u8, String> {
    let grid = cfg.grid_spec().map_err(|e| e.to_string())?;
    let result = sweep(&grid).map_err(|e| e.to_string())?;
    let csv = map_csv(&result);
    std::fs::write(out, &csv).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
    let failures = result
        .cells
        .iter()
        .filter(|cell| cell.outcome.is_err())
        .count();
    let zeros = result
        .cells
        .iter()
        .filter(|cell| {
            cell.outcome
                .as_ref()
                .map(|hp| hp.negativity == 0.0)
                .unwrap_or(false)
        })
        .count();
    println!(
        "map: {} x {} cells -> {} ({} zero, {} failed)",
        result.a_values.len(),
        result.b_values.len(),
        out.display(),
        zeros,
        failures
    );
    if failures > 0 {
        for cell in result.cells.iter().filter(|c| c.outcome.is_err()) {
            if let Err(e) = &cell.outcome {
                eprintln!("cell (a={}, b={}): {}", cell.a, cell.b, error_tag(e));
            }
        }
        return Ok(3);
    }
    Ok(0)
}

pub fn cmd_optimize(cfg: &RunConfig, out: Option<&Path>, seed: u64) -> Result<u8, String> {
    let opt = OptimizeConfig {
        bounds: cfg.optimize_bounds,
        constraint: cfg.constraint,
        budget: cfg.budget,
        seed,
        s: cfg.s,
        delta: cfg.delta,
        branch: cfg.branch,
        smearing: cfg.smearing,
        quad: cfg.quad.clone(),
    };
    match optimize_negativity(&opt) {
        Ok(best) => {
            let mut value = point_json(cfg, &best);
            value["schema"] = OPTIMIZE_SCHEMA.into();
            value["optimizer"] = json!({
                "budget": cfg.budget,
                "seed": seed,
                "constraint": match cfg.constraint {
                    Constraint::None => "none",
                    Constraint::Spacelike => "spacelike",
                },
                "infeasible": false,
            });
            emit(&value, out)?;
            Ok(0)
        }
        Err(harvestkit::Error::Infeasible {
            best_inseparability,
            best_point: (a, b, s),
        }) => {
            let value = json!({
                "schema": OPTIMIZE_SCHEMA,
                "optimizer": {
                    "budget": cfg.budget,
                    "seed": seed,
                    "constraint": match cfg.constraint {
                        Constraint::None => "none",
                        Constraint::Spacelike => "spacelike",
                    },
                    "infeasible": true,
                },
                "best_inseparability_min": best_inseparability,
                "best_point": {"a": a, "b": b, "s": s},
            });
            emit(&value, out)?;
            Ok(0)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(exit_code_for(&e))
        }
    }
}

pub fn cmd_preset(name: &str) -> Result<u8, String> {
    if name != "rubidium" {
        eprintln!("error: unknown preset '{name}' (available: rubidium)");
        return Ok(2);
    }
    let preset = rubidium_preset();
    let medium = preset.medium();
    let detector = preset.detector_defaults();
    let point = reduce(&medium, &detector).map_err(|e| e.to_string())?;
    let ct = medium.sound_speed * preset.pulse_width;
    let boundary = harvestkit::experiment::causal_boundary(point.s);
    println!("preset = rubidium");
    println!("healing_length_m = {}", format_f64(preset.healing_length));
    println!("sound_speed_m_per_s = {}", format_f64(preset.sound_speed));
    println!("spot_size_m = {}", format_f64(preset.spot_size));
    println!("pulse_width_s = {}", format_f64(preset.pulse_width));
    println!("extent_m = {}", format_f64(preset.extent));
    println!(
        "dispersion_strength_m2_per_s = {}",
        format_f64(medium.dispersion_strength)
    );
    println!(
        "crossover_wavenumber_per_m = {}",
        format_f64(crossover_scale(&medium).map_err(|e| e.to_string())?)
    );
    println!("sound_travel_distance_m = {}", format_f64(ct));
    println!("s = {}", format_f64(point.s));
    println!("delta = {}", format_f64(point.delta));
    println!(
        "sigma_over_xi = {}",
        format_f64(preset.spot_size / preset.healing_length)
    );
    println!("b_boundary = {}", format_f64(boundary));
    println!("dx_boundary_m = {}", format_f64(boundary * ct));
    Ok(0)
}

pub fn cmd_validate(fixtures_dir: &Path) -> Result<u8, String> {
    let started = std::time::Instant::now();
    let checks = match validate::run_all(fixtures_dir) {
        Ok(checks) => checks,
        Err(message) => {
            eprintln!("validation could not complete: {message}");
            return Ok(4);
        }
    };
    let width = checks
        .iter()
        .map(|c| c.label.len())
        .max()
        .unwrap_or(10)
        .max(10);
    println!(
        "{:<width$}  {:>13}  {:>13}  {:>9}  result",
        "check", "deviation", "tolerance", ""
    );
    let mut failures = 0;
    for check in &checks {
        if !check.pass {
            failures += 1;
        }
        println!(
            "{:<width$}  {:>13.4e}  {:>13.4e}  {:>9}  {}",
            check.label,
            check.deviation,
            check.tolerance,
            "",
            if check.pass { "ok" } else { "FAIL" }
        );
    }
    println!(
        "{} checks, {} failures ({:.1} s)",
        checks.len(),
        failures,
        started.elapsed().as_secs_f64()
    );
    Ok(if failures == 0 { 0 } else { 4 })
}
