//! Parameter sweeps, causal classification, dispersion-sensitivity checks
//! and constrained maximization of the harvested negativity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::entanglement::{
    concurrence_and_log, inseparability_min, Diagnostics, HarvestPoint, NEGATIVITY_FLOOR,
};
use crate::medium::{Branch, DimensionlessPoint};
use crate::response::{matrix_elements, Smearing};
use crate::specfun::QuadratureSpec;
use crate::{Error, Result};

/// Causal relation of the two interaction regions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalClass {
    /// Sound emitted by one detector can reach the other during the
    /// interaction windows.
    Signaling,
    /// No causal contact for the whole interaction: `dx >= 4 c T + 2 sigma`.
    Spacelike,
}

impl CausalClass {
    pub fn name(self) -> &'static str {
        match self {
            CausalClass::Signaling => "signaling",
            CausalClass::Spacelike => "spacelike",
        }
    }
}

/// Boundary of the spacelike region in reduced units, `b = 4 + 2 s`.
pub fn causal_boundary(s: f64) -> f64 {
    4.0 + 2.0 * s
}

/// Classifies a separation: spacelike iff `b >= 4 + 2 s`, boundary
/// inclusive (no sound-mediated contact between `-2T` and `2T` with the
/// Gaussian spots separated by at least `2 sigma`).
pub fn causal_class(b: f64, s: f64) -> CausalClass {
    if b >= causal_boundary(s) {
        CausalClass::Spacelike
    } else {
        CausalClass::Signaling
    }
}

/// Full point evaluation: elements, negativity (floored to the exact-zero
/// region below [`NEGATIVITY_FLOOR`]), concurrence, inseparability and
/// causal class.
pub fn evaluate_point(
    point: &DimensionlessPoint,
    smearing: Smearing,
    quad: &QuadratureSpec,
) -> Result<HarvestPoint> {
    let started = std::time::Instant::now();
    let result = matrix_elements(point, smearing, quad)?;
    let elements = result.elements;
    let raw = elements.m.norm() - elements.identical_noise()?;
    let negativity = if raw > NEGATIVITY_FLOOR { raw } else { 0.0 };
    let (concurrence, log10_concurrence) = concurrence_and_log(negativity);
    Ok(HarvestPoint {
        a: point.a,
        b: point.b,
        s: point.s,
        delta: point.delta,
        branch: point.branch,
        smearing,
        elements,
        negativity,
        concurrence,
        log10_concurrence,
        inseparability_min: inseparability_min(&elements)?,
        causal_class: causal_class(point.b, point.s),
        diagnostics: Diagnostics {
            quad_error: result.quad_error,
            subdivisions: result.subdivisions,
            eval_micros: started.elapsed().as_micros() as u64,
        },
    })
}

/// Axis spacing of a sweep grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisScale {
    Linear,
    Log,
}

/// One sweep axis. A single-point axis (`count == 1`) pins the value at
/// `min`, which keeps a 1x1 sweep consistent with the point API.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub scale: AxisScale,
}

impl Axis {
    pub fn linear(min: f64, max: f64, count: usize) -> Self {
        Axis {
            min,
            max,
            count,
            scale: AxisScale::Linear,
        }
    }

    pub fn log(min: f64, max: f64, count: usize) -> Self {
        Axis {
            min,
            max,
            count,
            scale: AxisScale::Log,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Domain("axis needs at least one point".into()));
        }
        if !(self.min >= 0.0) || !(self.max >= self.min) || !self.max.is_finite() {
            return Err(Error::Domain(format!(
                "axis range [{}, {}] must be finite, nonnegative and ordered",
                self.min, self.max
            )));
        }
        if self.count > 1 && self.max == self.min {
            return Err(Error::Domain(
                "degenerate range with more than one point".into(),
            ));
        }
        if self.scale == AxisScale::Log && !(self.min > 0.0) {
            return Err(Error::Domain(
                "log-spaced axis requires a positive lower bound".into(),
            ));
        }
        Ok(())
    }

    /// Grid values, deterministic for identical inputs.
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / n;
                match self.scale {
                    AxisScale::Linear => self.min + t * (self.max - self.min),
                    AxisScale::Log => self.min * (self.max / self.min).powf(t),
                }
            })
            .collect()
    }
}

/// A rectangular sweep over gap and separation at fixed spot size,
/// dispersion and smearing.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// Gap axis (`a = Omega T`), the outer/slow index.
    pub a_axis: Axis,
    /// Separation axis (`b = dx/(c T)`), the inner/fast index.
    pub b_axis: Axis,
    pub s: f64,
    pub delta: f64,
    pub branch: Branch,
    pub smearing: Smearing,
    pub quad: QuadratureSpec,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        self.a_axis.validate()?;
        self.b_axis.validate()?;
        self.quad.validate()?;
        // reuse the point validation for the fixed parameters
        DimensionlessPoint::new(
            self.a_axis.min,
            self.b_axis.min,
            self.s,
            self.delta,
            self.branch,
        )?;
        Ok(())
    }
}

/// One grid cell: either the evaluated point or the per-point failure.
/// Failures never abort a sweep.
#[derive(Debug, Clone)]
pub struct SweepCell {
    pub i_a: usize,
    pub i_b: usize,
    pub a: f64,
    pub b: f64,
    pub outcome: Result<HarvestPoint>,
}

/// Completed sweep in row-major order (gap outer, separation inner).
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub grid: GridSpec,
    pub a_values: Vec<f64>,
    pub b_values: Vec<f64>,
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    pub fn cell(&self, i_a: usize, i_b: usize) -> &SweepCell {
        &self.cells[i_a * self.b_values.len() + i_b]
    }
}

/// Evaluates every grid point. Points are independent and run in
/// parallel; cells are merged by index, so the result is identical for
/// any worker count.
pub fn sweep(grid: &GridSpec) -> Result<SweepResult> {
    grid.validate()?;
    let a_values = grid.a_axis.values();
    let b_values = grid.b_axis.values();
    let n_b = b_values.len();
    let cells: Vec<SweepCell> = (0..a_values.len() * n_b)
        .into_par_iter()
        .map(|idx| {
            let (i_a, i_b) = (idx / n_b, idx % n_b);
            let (a, b) = (a_values[i_a], b_values[i_b]);
            let outcome = DimensionlessPoint::new(a, b, grid.s, grid.delta, grid.branch)
                .and_then(|point| evaluate_point(&point, grid.smearing, &grid.quad));
            SweepCell {
                i_a,
                i_b,
                a,
                b,
                outcome,
            }
        })
        .collect();
    Ok(SweepResult {
        grid: grid.clone(),
        a_values,
        b_values,
        cells,
    })
}

/// Dispersion-sensitivity verdict at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSensitivity {
    /// Negativity with the point's dispersive branch.
    pub negativity_dispersive: f64,
    /// Negativity of the linear reference (`delta = 0`), same cutoff.
    pub negativity_linear: f64,
    /// `|N_disp - N_lin| / N_lin`; zero when both vanish, infinite when
    /// only the linear reference vanishes.
    pub rel_diff: f64,
}

/// Compares the harvested negativity against the linear-dispersion
/// reference at identical detector geometry and UV cutoff.
pub fn dispersion_sensitivity(
    point: &DimensionlessPoint,
    smearing: Smearing,
    quad: &QuadratureSpec,
) -> Result<DispersionSensitivity> {
    let dispersive = evaluate_point(point, smearing, quad)?.negativity;
    let linear = evaluate_point(&point.linear_reference(), smearing, quad)?.negativity;
    let rel_diff = if dispersive == linear {
        0.0
    } else if linear == 0.0 {
        f64::INFINITY
    } else {
        (dispersive - linear).abs() / linear
    };
    Ok(DispersionSensitivity {
        negativity_dispersive: dispersive,
        negativity_linear: linear,
        rel_diff,
    })
}

/// Feasibility constraint of the negativity search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    None,
    /// Only causally disconnected geometries (`b >= 4 + 2 s`).
    Spacelike,
}

/// Search box for [`optimize_negativity`]. A degenerate interval pins the
/// coordinate; the spot size is optional and defaults to pinned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeBounds {
    pub a: (f64, f64),
    pub b: (f64, f64),
    /// Spot-size interval; `None` pins `s` at the configured value.
    pub s: Option<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct OptimizeConfig {
    pub bounds: OptimizeBounds,
    pub constraint: Constraint,
    /// Total objective evaluations allowed (at least 50).
    pub budget: usize,
    pub seed: u64,
    /// Spot size used when `bounds.s` is `None`.
    pub s: f64,
    pub delta: f64,
    pub branch: Branch,
    pub smearing: Smearing,
    pub quad: QuadratureSpec,
}

struct Objective<'a> {
    cfg: &'a OptimizeConfig,
    remaining: usize,
    best: Option<HarvestPoint>,
    best_inseparability: Option<(f64, (f64, f64, f64))>,
}

impl Objective<'_> {
    /// Negativity at clamped coordinates; failed points score negative
    /// infinity and never become candidates.
    ///
    /// Under the spacelike constraint a signaling candidate is projected
    /// up to the causal boundary `b = 4 + 2s` when the boundary lies
    /// inside the box (the constrained optimum typically sits exactly
    /// there, since harvesting decays with separation); when the whole
    /// box at this spot size is signaling, the candidate is infeasible.
    fn eval(&mut self, coords: &Coords) -> f64 {
        if self.remaining == 0 {
            return f64::NEG_INFINITY;
        }
        self.remaining -= 1;
        let (a, mut b, s) = coords.unpack(self.cfg);
        if self.cfg.constraint == Constraint::Spacelike {
            let boundary = causal_boundary(s);
            if boundary > self.cfg.bounds.b.1 {
                return f64::NEG_INFINITY;
            }
            b = b.max(boundary);
        }
        let point = match DimensionlessPoint::new(a, b, s, self.cfg.delta, self.cfg.branch) {
            Ok(p) => p,
            Err(_) => return f64::NEG_INFINITY,
        };
        let hp = match evaluate_point(&point, self.cfg.smearing, &self.cfg.quad) {
            Ok(hp) => hp,
            Err(_) => return f64::NEG_INFINITY,
        };
        let score = hp.negativity;
        if self
            .best_inseparability
            .map(|(i, _)| hp.inseparability_min < i)
            .unwrap_or(true)
        {
            self.best_inseparability = Some((hp.inseparability_min, (a, b, s)));
        }
        if score > 0.0
            && self
                .best
                .as_ref()
                .map(|cur| score > cur.negativity)
                .unwrap_or(true)
        {
            self.best = Some(hp);
        }
        score
    }
}

/// A point in the active search dimensions.
#[derive(Debug, Clone)]
struct Coords(Vec<f64>);

impl Coords {
    fn unpack(&self, cfg: &OptimizeConfig) -> (f64, f64, f64) {
        let a = self.0[0];
        let b = self.0[1];
        let s = if cfg.bounds.s.is_some() {
            self.0[2]
        } else {
            cfg.s
        };
        (a, b, s)
    }
}

fn active_bounds(cfg: &OptimizeConfig) -> Vec<(f64, f64)> {
    let mut bounds = vec![cfg.bounds.a, cfg.bounds.b];
    if let Some(sb) = cfg.bounds.s {
        bounds.push(sb);
    }
    bounds
}

fn clamp(coords: &mut [f64], bounds: &[(f64, f64)]) {
    for (x, (lo, hi)) in coords.iter_mut().zip(bounds) {
        *x = x.clamp(*lo, *hi);
    }
}

/// Bounded Nelder-Mead descent on `-N`; trial points are clamped into the
/// box. Runs until the budget is spent or the simplex collapses.
fn nelder_mead(obj: &mut Objective<'_>, start: Vec<f64>, bounds: &[(f64, f64)]) {
    let dim = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let mut first = start.clone();
    clamp(&mut first, bounds);
    let score = obj.eval(&Coords(first.clone()));
    simplex.push((first, score));
    for d in 0..dim {
        let (lo, hi) = bounds[d];
        let step = 0.15 * (hi - lo);
        let mut v = start.clone();
        // step toward the interior when the start sits on the upper edge
        v[d] = if v[d] + step <= hi {
            v[d] + step
        } else {
            v[d] - step
        };
        clamp(&mut v, bounds);
        let score = obj.eval(&Coords(v.clone()));
        simplex.push((v, score));
    }

    let span: f64 = bounds.iter().map(|(lo, hi)| hi - lo).sum();
    while obj.remaining > 0 {
        // maximize: best first
        simplex.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap_or(std::cmp::Ordering::Equal));
        let size: f64 = simplex[1..]
            .iter()
            .map(|(v, _)| {
                v.iter()
                    .zip(&simplex[0].0)
                    .map(|(x, y)| (x - y).abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max);
        if size < 1e-10 * span.max(1e-30) {
            break;
        }
        let worst = simplex.len() - 1;
        let mut centroid = vec![0.0; dim];
        for (v, _) in &simplex[..worst] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / worst as f64;
            }
        }
        let blend = |t: f64| -> Vec<f64> {
            let mut v: Vec<f64> = centroid
                .iter()
                .zip(&simplex[worst].0)
                .map(|(c, w)| c + t * (c - w))
                .collect();
            clamp(&mut v, bounds);
            v
        };
        let reflected = blend(1.0);
        let reflected_score = obj.eval(&Coords(reflected.clone()));
        if reflected_score > simplex[0].1 {
            let expanded = blend(2.0);
            let expanded_score = obj.eval(&Coords(expanded.clone()));
            simplex[worst] = if expanded_score > reflected_score {
                (expanded, expanded_score)
            } else {
                (reflected, reflected_score)
            };
        } else if reflected_score > simplex[worst - 1].1 {
            simplex[worst] = (reflected, reflected_score);
        } else {
            let contracted = blend(-0.5);
            let contracted_score = obj.eval(&Coords(contracted.clone()));
            if contracted_score > simplex[worst].1 {
                simplex[worst] = (contracted, contracted_score);
            } else {
                // shrink toward the best vertex
                let anchor = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let mut v: Vec<f64> = entry
                        .0
                        .iter()
                        .zip(&anchor)
                        .map(|(x, bx)| bx + 0.5 * (x - bx))
                        .collect();
                    clamp(&mut v, bounds);
                    let score = obj.eval(&Coords(v.clone()));
                    *entry = (v, score);
                }
            }
        }
    }
}

/// Derivative-free maximization of the harvested negativity over the box.
///
/// Evaluates the box corners first (the sanity floor of the result), then
/// runs three deterministically seeded Nelder-Mead restarts within the
/// shared evaluation budget. Returns the best feasible point, or
/// [`Error::Infeasible`] carrying the best inseparability seen when no
/// evaluated point had positive negativity.
pub fn optimize_negativity(cfg: &OptimizeConfig) -> Result<HarvestPoint> {
    if cfg.budget < 50 {
        return Err(Error::Domain(format!(
            "optimizer budget must be at least 50 evaluations, got {}",
            cfg.budget
        )));
    }
    let bounds = active_bounds(cfg);
    for (lo, hi) in &bounds {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(Error::Domain(format!(
                "optimizer bounds must be finite and ordered, got ({lo}, {hi})"
            )));
        }
    }
    if cfg.constraint == Constraint::Spacelike {
        let s_min = cfg.bounds.s.map(|(lo, _)| lo).unwrap_or(cfg.s);
        if causal_boundary(s_min) > cfg.bounds.b.1 {
            return Err(Error::Domain(format!(
                "the spacelike constraint excludes the whole box: boundary b = {} exceeds b_max = {}",
                causal_boundary(s_min),
                cfg.bounds.b.1
            )));
        }
    }
    let mut obj = Objective {
        cfg,
        remaining: cfg.budget,
        best: None,
        best_inseparability: None,
    };

    // corners of the active box
    let dim = bounds.len();
    for mask in 0..(1usize << dim) {
        let corner: Vec<f64> = bounds
            .iter()
            .enumerate()
            .map(|(d, (lo, hi))| if mask >> d & 1 == 0 { *lo } else { *hi })
            .collect();
        obj.eval(&Coords(corner));
    }

    // three deterministic restarts: the box center plus two seeded points
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut starts: Vec<Vec<f64>> = vec![bounds.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect()];
    for _ in 0..2 {
        starts.push(
            bounds
                .iter()
                .map(|(lo, hi)| lo + (hi - lo) * rng.gen::<f64>())
                .collect(),
        );
    }
    let per_restart = cfg.budget / starts.len();
    for (i, start) in starts.into_iter().enumerate() {
        let cap = if i == 2 {
            obj.remaining
        } else {
            per_restart.min(obj.remaining)
        };
        let outer_remaining = obj.remaining;
        obj.remaining = cap;
        nelder_mead(&mut obj, start, &bounds);
        obj.remaining = outer_remaining.saturating_sub(cap - obj.remaining);
    }

    match obj.best.take() {
        Some(best) => Ok(best),
        None => {
            let (best_inseparability, best_point) = obj
                .best_inseparability
                .ok_or_else(|| Error::Domain("optimizer evaluated no feasible point".into()))?;
            Err(Error::Infeasible {
                best_inseparability,
                best_point,
            })
        }
    }
}
