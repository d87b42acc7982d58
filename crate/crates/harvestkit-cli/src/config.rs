//! Run configuration: a flat `key = value` file with `[section]` headers,
//! parseable without any ecosystem dependency.
//!
//! SI and dimensionless inputs are strict alternatives: supplying both
//! members of a pair (`omega`/`a`, `dx`/`b`, `sigma`/`s`, `xi`/`epsilon`/
//! `delta`) is a configuration error, never a precedence rule. A preset
//! provides defaults that explicit keys may override.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use harvestkit::experiment::{Axis, AxisScale, Constraint, GridSpec, OptimizeBounds};
use harvestkit::medium::{rubidium_preset, BecPreset, Branch, DimensionlessPoint, MediumParams};
use harvestkit::response::Smearing;
use harvestkit::specfun::QuadratureSpec;

/// A configuration failure; maps to exit code 2.
#[derive(Debug, Clone)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "configuration error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

type ConfigResult<T> = Result<T, ConfigError>;

fn err<T>(msg: impl Into<String>) -> ConfigResult<T> {
    Err(ConfigError(msg.into()))
}

/// Parsed but unresolved configuration: sections of key/value pairs in
/// canonical (sorted) order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl RawConfig {
    pub fn parse(text: &str) -> ConfigResult<Self> {
        let mut sections: BTreeMap<String, BTreeMap<String, String>> = BTreeMap::new();
        let mut current: Option<String> = None;
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = match raw_line.find('#') {
                Some(idx) => &raw_line[..idx],
                None => raw_line,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let Some(name) = name.strip_suffix(']') else {
                    return err(format!("line {}: unterminated section header", lineno + 1));
                };
                let name = name.trim().to_ascii_lowercase();
                if name.is_empty() {
                    return err(format!("line {}: empty section name", lineno + 1));
                }
                sections.entry(name.clone()).or_default();
                current = Some(name);
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return err(format!("line {}: expected 'key = value'", lineno + 1));
            };
            let Some(section) = current.as_ref() else {
                return err(format!(
                    "line {}: key '{}' appears before any [section]",
                    lineno + 1,
                    key.trim()
                ));
            };
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim().to_string();
            if key.is_empty() || value.is_empty() {
                return err(format!("line {}: empty key or value", lineno + 1));
            }
            let entries = sections.get_mut(section).expect("section exists");
            if entries.insert(key.clone(), value).is_some() {
                return err(format!(
                    "line {}: duplicate key '{key}' in section [{section}]",
                    lineno + 1
                ));
            }
        }
        Ok(RawConfig { sections })
    }

    /// Canonical text form: sections and keys sorted, one `key = value`
    /// per line. `parse` of the output reproduces `self`.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (section, entries) in &self.sections {
            let _ = writeln!(out, "[{section}]");
            for (key, value) in entries {
                let _ = writeln!(out, "{key} = {value}");
            }
            out.push('\n');
        }
        out
    }

    fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.sections
            .get(section)
            .and_then(|entries| entries.get(key))
            .map(String::as_str)
    }

    fn f64(&self, section: &str, key: &str) -> ConfigResult<Option<f64>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(text) => match text.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(Some(v)),
                _ => err(format!(
                    "[{section}] {key} = '{text}' is not a finite number"
                )),
            },
        }
    }

    fn usize(&self, section: &str, key: &str) -> ConfigResult<Option<usize>> {
        match self.get(section, key) {
            None => Ok(None),
            Some(text) => text
                .parse::<usize>()
                .map(Some)
                .map_err(|_| ConfigError(format!("[{section}] {key} = '{text}' is not a count"))),
        }
    }

    fn known_keys(&self) -> ConfigResult<()> {
        const KNOWN: &[(&str, &[&str])] = &[
            (
                "medium",
                &["preset", "c", "xi", "epsilon", "delta", "branch"],
            ),
            (
                "detector",
                &[
                    "a", "omega", "b", "dx", "s", "sigma", "t", "lambda", "smearing",
                ],
            ),
            (
                "quadrature",
                &["rel_tol", "abs_tol", "max_subdivisions", "uv_cutoff_factor"],
            ),
            (
                "grid",
                &[
                    "a_min", "a_max", "n_a", "a_scale", "b_min", "b_max", "n_b", "b_scale",
                ],
            ),
            (
                "optimize",
                &[
                    "a_min",
                    "a_max",
                    "b_min",
                    "b_max",
                    "s_min",
                    "s_max",
                    "constraint",
                    "budget",
                ],
            ),
        ];
        for (section, entries) in &self.sections {
            let Some((_, keys)) = KNOWN.iter().find(|(name, _)| name == section) else {
                return err(format!("unknown section [{section}]"));
            };
            for key in entries.keys() {
                if !keys.contains(&key.as_str()) {
                    return err(format!("unknown key '{key}' in section [{section}]"));
                }
            }
        }
        Ok(())
    }
}

/// Echo of the SI quantities a run was specified with, when available.
#[derive(Debug, Clone, Copy)]
pub struct SiContext {
    pub medium: MediumParams,
    pub pulse_width: f64,
    pub gap: Option<f64>,
    pub separation: Option<f64>,
    pub spot_size: f64,
}

/// Fully resolved run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub raw: RawConfig,
    pub preset_name: Option<String>,
    /// Gap and separation resolved for the `point` command; grid commands
    /// supply their own axes.
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub s: f64,
    pub delta: f64,
    pub branch: Branch,
    pub smearing: Smearing,
    pub coupling: f64,
    pub quad: QuadratureSpec,
    pub si: Option<SiContext>,
    pub grid: (Axis, Axis),
    pub optimize_bounds: OptimizeBounds,
    pub constraint: Constraint,
    pub budget: usize,
}

fn lookup_preset(name: &str) -> ConfigResult<BecPreset> {
    match name {
        "rubidium" => Ok(rubidium_preset()),
        other => err(format!("unknown preset '{other}' (available: rubidium)")),
    }
}

/// Exactly-one-of check over a group of alternative keys; returns the key
/// that was supplied, if any.
fn exclusive<'k>(
    raw: &RawConfig,
    section: &str,
    keys: &[&'k str],
) -> ConfigResult<Option<&'k str>> {
    let present: Vec<&str> = keys
        .iter()
        .copied()
        .filter(|key| raw.get(section, key).is_some())
        .collect();
    match present.len() {
        0 => Ok(None),
        1 => Ok(Some(
            keys.iter().copied().find(|k| *k == present[0]).unwrap(),
        )),
        _ => err(format!(
            "[{section}] keys {present:?} are alternatives; supply exactly one"
        )),
    }
}

impl RunConfig {
    pub fn from_text(text: &str) -> ConfigResult<Self> {
        let raw = RawConfig::parse(text)?;
        RunConfig::resolve(raw)
    }

    fn resolve(raw: RawConfig) -> ConfigResult<Self> {
        raw.known_keys()?;

        let preset_name = raw.get("medium", "preset").map(str::to_string);
        let preset = preset_name.as_deref().map(lookup_preset).transpose()?;

        // medium: sound speed and the dispersion alternative
        let c = match raw.f64("medium", "c")? {
            Some(v) => Some(v),
            None => preset.map(|p| p.sound_speed),
        };
        let dispersion_key = exclusive(&raw, "medium", &["xi", "epsilon", "delta"])?;
        let branch = match raw.get("medium", "branch") {
            Some(text) => Branch::from_str(text).map_err(|e| ConfigError(e.to_string()))?,
            None => {
                if preset.is_some() || dispersion_key.is_some() {
                    Branch::Bogoliubov
                } else {
                    Branch::Linear
                }
            }
        };

        // detector scales
        let pulse_width = match raw.f64("detector", "t")? {
            Some(v) if v > 0.0 => Some(v),
            Some(v) => return err(format!("[detector] t = {v} must be positive")),
            None => preset.map(|p| p.pulse_width),
        };
        let need_scales = |what: &str| -> ConfigError {
            ConfigError(format!(
                "{what} requires the SI scales c and t (give them explicitly or via a preset)"
            ))
        };
        let ct = match (c, pulse_width) {
            (Some(c), Some(t)) => Some(c * t),
            _ => None,
        };

        // spot size: sigma (SI) or s (dimensionless); preset default
        let s = match exclusive(&raw, "detector", &["sigma", "s"])? {
            Some("sigma") => {
                let sigma = raw.f64("detector", "sigma")?.unwrap();
                sigma / ct.ok_or_else(|| need_scales("[detector] sigma"))?
            }
            Some("s") => raw.f64("detector", "s")?.unwrap(),
            _ => match (preset, ct) {
                (Some(p), Some(ct)) => p.spot_size / ct,
                _ => return err("spot size missing: give [detector] s or sigma (or a preset)"),
            },
        };
        if !(s > 0.0) {
            return err(format!("spot size s = {s} must be positive"));
        }

        // dispersion strength
        let delta = match dispersion_key {
            Some("delta") => raw.f64("medium", "delta")?.unwrap(),
            Some(key) => {
                let epsilon = match key {
                    "xi" => {
                        let xi = raw.f64("medium", "xi")?.unwrap();
                        let c = c.ok_or_else(|| need_scales("[medium] xi"))?;
                        c * xi / std::f64::consts::SQRT_2
                    }
                    _ => raw.f64("medium", "epsilon")?.unwrap(),
                };
                let c = c.ok_or_else(|| need_scales("[medium] epsilon"))?;
                let t = pulse_width.ok_or_else(|| need_scales("[medium] epsilon"))?;
                epsilon / (c * c * t)
            }
            None => match (preset, c, pulse_width) {
                (Some(p), Some(c), Some(t)) => p.dispersion_strength() / (c * c * t),
                _ => 0.0,
            },
        };
        if delta < 0.0 {
            return err(format!("dispersion delta = {delta} must be nonnegative"));
        }

        // gap and separation (optional; point command checks presence)
        let a = match exclusive(&raw, "detector", &["omega", "a"])? {
            Some("omega") => {
                let omega = raw.f64("detector", "omega")?.unwrap();
                let t = pulse_width.ok_or_else(|| need_scales("[detector] omega"))?;
                Some(omega * t)
            }
            Some("a") => raw.f64("detector", "a")?,
            _ => None,
        };
        let b = match exclusive(&raw, "detector", &["dx", "b"])? {
            Some("dx") => {
                let dx = raw.f64("detector", "dx")?.unwrap();
                Some(dx / ct.ok_or_else(|| need_scales("[detector] dx"))?)
            }
            Some("b") => raw.f64("detector", "b")?,
            _ => None,
        };

        let coupling = raw.f64("detector", "lambda")?.unwrap_or(1.0);
        if coupling < 0.0 {
            return err(format!("coupling lambda = {coupling} must be nonnegative"));
        }
        let smearing = match raw.get("detector", "smearing") {
            Some(text) => Smearing::from_str(text).map_err(|e| ConfigError(e.to_string()))?,
            None => Smearing::Gaussian,
        };

        let quad = QuadratureSpec {
            rel_tol: raw.f64("quadrature", "rel_tol")?.unwrap_or(1e-9),
            abs_tol: raw.f64("quadrature", "abs_tol")?.unwrap_or(1e-14),
            max_subdivisions: raw.usize("quadrature", "max_subdivisions")?.unwrap_or(2000),
            u_max_factor: raw.f64("quadrature", "uv_cutoff_factor")?.unwrap_or(10.0),
        };
        quad.validate().map_err(|e| ConfigError(e.to_string()))?;

        let axis_scale = |key: &str, default: AxisScale| -> ConfigResult<AxisScale> {
            match raw.get("grid", key) {
                None => Ok(default),
                Some("linear") => Ok(AxisScale::Linear),
                Some("log") => Ok(AxisScale::Log),
                Some(other) => err(format!("[grid] {key} = '{other}' (use linear or log)")),
            }
        };
        let a_axis = Axis {
            min: raw.f64("grid", "a_min")?.unwrap_or(0.1),
            max: raw.f64("grid", "a_max")?.unwrap_or(10.0),
            count: raw.usize("grid", "n_a")?.unwrap_or(60),
            scale: axis_scale("a_scale", AxisScale::Log)?,
        };
        let b_axis = Axis {
            min: raw.f64("grid", "b_min")?.unwrap_or(0.1),
            max: raw.f64("grid", "b_max")?.unwrap_or(8.0),
            count: raw.usize("grid", "n_b")?.unwrap_or(60),
            scale: axis_scale("b_scale", AxisScale::Linear)?,
        };

        let optimize_bounds = OptimizeBounds {
            a: (
                raw.f64("optimize", "a_min")?.unwrap_or(0.1),
                raw.f64("optimize", "a_max")?.unwrap_or(10.0),
            ),
            b: (
                raw.f64("optimize", "b_min")?.unwrap_or(0.1),
                raw.f64("optimize", "b_max")?.unwrap_or(8.0),
            ),
            s: match (raw.f64("optimize", "s_min")?, raw.f64("optimize", "s_max")?) {
                (None, None) => None,
                (Some(lo), Some(hi)) => Some((lo, hi)),
                _ => return err("[optimize] s_min and s_max must be given together"),
            },
        };
        let constraint = match raw.get("optimize", "constraint") {
            None | Some("none") => Constraint::None,
            Some("spacelike") => Constraint::Spacelike,
            Some(other) => {
                return err(format!(
                    "[optimize] constraint = '{other}' (use none or spacelike)"
                ))
            }
        };
        let budget = raw.usize("optimize", "budget")?.unwrap_or(200);

        let si = match (c, pulse_width) {
            (Some(c), Some(t)) => {
                let medium = MediumParams::new(c, delta * c * c * t, branch)
                    .map_err(|e| ConfigError(e.to_string()))?;
                Some(SiContext {
                    medium,
                    pulse_width: t,
                    gap: a.map(|a| a / t),
                    separation: b.map(|b| b * c * t),
                    spot_size: s * c * t,
                })
            }
            _ => None,
        };

        Ok(RunConfig {
            raw,
            preset_name,
            a,
            b,
            s,
            delta,
            branch,
            smearing,
            coupling,
            quad,
            si,
            grid: (a_axis, b_axis),
            optimize_bounds,
            constraint,
            budget,
        })
    }

    /// The dimensionless point of the `point` command; errors when the
    /// gap or separation was not supplied.
    pub fn point(&self) -> ConfigResult<DimensionlessPoint> {
        let a = self
            .a
            .ok_or_else(|| ConfigError("missing [detector] a or omega".into()))?;
        let b = self
            .b
            .ok_or_else(|| ConfigError("missing [detector] b or dx".into()))?;
        DimensionlessPoint::new(a, b, self.s, self.delta, self.branch)
            .map_err(|e| ConfigError(e.to_string()))
    }

    pub fn grid_spec(&self) -> ConfigResult<GridSpec> {
        let grid = GridSpec {
            a_axis: self.grid.0,
            b_axis: self.grid.1,
            s: self.s,
            delta: self.delta,
            branch: self.branch,
            smearing: self.smearing,
            quad: self.quad.clone(),
        };
        grid.validate().map_err(|e| ConfigError(e.to_string()))?;
        Ok(grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUBIDIUM_POINT: &str = "\
[medium]
preset = rubidium

[detector]
a = 1.0
b = 1.0
";

    #[test]
    fn preset_resolution() {
        let cfg = RunConfig::from_text(RUBIDIUM_POINT).unwrap();
        let point = cfg.point().unwrap();
        assert!((point.s - 0.125).abs() < 1e-15);
        assert!((point.delta - 1.8591015788696314e-3).abs() / 1.86e-3 < 1e-6);
        assert_eq!(point.branch, Branch::Bogoliubov);
        let si = cfg.si.unwrap();
        assert_eq!(si.medium.sound_speed, 8e-3);
        assert_eq!(si.pulse_width, 3e-3);
    }

    #[test]
    fn dimensionless_only_configuration() {
        let cfg = RunConfig::from_text(
            "[detector]\na = 0.5\nb = 2.0\ns = 0.2\n\n[medium]\ndelta = 0.001\nbranch = bogoliubov\n",
        )
        .unwrap();
        let point = cfg.point().unwrap();
        assert_eq!(point.a, 0.5);
        assert_eq!(point.delta, 0.001);
        assert!(cfg.si.is_none());
    }

    #[test]
    fn si_and_dimensionless_conflict_is_an_error() {
        let text = "[medium]\npreset = rubidium\n\n[detector]\na = 1.0\nomega = 333.0\nb = 1.0\n";
        let e = RunConfig::from_text(text).unwrap_err();
        assert!(e.0.contains("alternatives"), "{}", e.0);
        let text = "[medium]\npreset = rubidium\nxi = 1e-8\ndelta = 0.1\n";
        assert!(RunConfig::from_text(text).is_err());
    }

    #[test]
    fn si_inputs_reduce() {
        let text = "\
[medium]
c = 8e-3
xi = 6.31e-8
branch = bogoliubov

[detector]
omega = 333.3333333333333
dx = 2.4e-5
sigma = 3e-6
t = 3e-3
";
        let cfg = RunConfig::from_text(text).unwrap();
        let p = cfg.point().unwrap();
        assert!((p.a - 1.0).abs() < 1e-12);
        assert!((p.b - 1.0).abs() < 1e-15);
        assert!((p.s - 0.125).abs() < 1e-15);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(RunConfig::from_text("[detector]\nfrequency = 2\n").is_err());
        assert!(RunConfig::from_text("[stuff]\na = 2\n").is_err());
        assert!(RunConfig::from_text("[medium]\npreset = cesium\n").is_err());
    }

    #[test]
    fn parse_rejects_malformed_lines() {
        assert!(RawConfig::parse("a = 1\n").is_err()); // key before section
        assert!(RawConfig::parse("[detector\na = 1\n").is_err());
        assert!(RawConfig::parse("[detector]\na = 1\na = 2\n").is_err());
        assert!(RawConfig::parse("[detector]\njust a line\n").is_err());
    }

    #[test]
    fn serialization_round_trip_is_idempotent() {
        let text =
            "# comment\n[detector]\nb = 1.0\na = 1.0  # inline\ns=0.125\n\n[medium]\ndelta = 0\n";
        let once = RawConfig::parse(text).unwrap();
        let twice = RawConfig::parse(&once.serialize()).unwrap();
        assert_eq!(once, twice);
        assert_eq!(once.serialize(), twice.serialize());
    }

    #[test]
    fn grid_defaults_match_reference_map() {
        let cfg = RunConfig::from_text("[detector]\ns = 0.125\n").unwrap();
        let grid = cfg.grid_spec().unwrap();
        assert_eq!(grid.a_axis.count, 60);
        assert_eq!(grid.b_axis.count, 60);
        assert_eq!(grid.a_axis.scale, AxisScale::Log);
        assert_eq!(grid.b_axis.scale, AxisScale::Linear);
        assert_eq!(grid.a_axis.min, 0.1);
        assert_eq!(grid.b_axis.max, 8.0);
    }
}
