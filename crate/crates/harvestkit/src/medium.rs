//! Dispersion relations, dimensionless parameter groups and physical
//! presets for the effective relativistic medium.
//!
//! The field obeys `omega^2 = c^2 k^2 +- eps^2 k^4`: `+` is the Bogoliubov
//! branch of condensate sound, `-` the subsonic branch of interface waves,
//! and `eps = 0` the strictly linear reference field. Everything downstream
//! works in the reduced variables of [`DimensionlessPoint`]; SI enters and
//! leaves through [`reduce`] / [`unreduce`].

use crate::response::DetectorPairConfig;
use crate::{Error, Result};

/// Dispersion branch selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `omega^2 = c^2 k^2 + eps^2 k^4` (condensate sound).
    Bogoliubov,
    /// `omega^2 = c^2 k^2 - eps^2 k^4`, valid only below `k_c = c/eps`.
    Subsonic,
    /// `omega = c k`; the dispersion strength is ignored.
    Linear,
}

impl Branch {
    /// Sign of the quartic term, zero for the linear branch.
    pub fn quartic_sign(self) -> f64 {
        match self {
            Branch::Bogoliubov => 1.0,
            Branch::Subsonic => -1.0,
            Branch::Linear => 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Bogoliubov => "bogoliubov",
            Branch::Subsonic => "subsonic",
            Branch::Linear => "linear",
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bogoliubov" => Ok(Branch::Bogoliubov),
            "subsonic" => Ok(Branch::Subsonic),
            "linear" => Ok(Branch::Linear),
            other => Err(Error::Domain(format!("unknown branch '{other}'"))),
        }
    }
}

/// Sound speed, dispersion strength and branch of the effective medium,
/// in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    /// Propagation speed `c` (m/s).
    pub sound_speed: f64,
    /// Dispersion strength `eps` (m^2/s); the crossover wavenumber is
    /// `k_c = c/eps`.
    pub dispersion_strength: f64,
    pub branch: Branch,
}

impl MediumParams {
    /// Validated constructor; the linear branch stores `eps = 0`.
    pub fn new(sound_speed: f64, dispersion_strength: f64, branch: Branch) -> Result<Self> {
        if !(sound_speed > 0.0) {
            return Err(Error::Domain(format!(
                "sound speed must be positive, got {sound_speed}"
            )));
        }
        if !(dispersion_strength >= 0.0) {
            return Err(Error::Domain(format!(
                "dispersion strength must be nonnegative, got {dispersion_strength}"
            )));
        }
        let eps = match branch {
            Branch::Linear => 0.0,
            _ => dispersion_strength,
        };
        Ok(MediumParams {
            sound_speed,
            dispersion_strength: eps,
            branch,
        })
    }

    pub fn linear(sound_speed: f64) -> Result<Self> {
        MediumParams::new(sound_speed, 0.0, Branch::Linear)
    }
}

/// Angular frequency `omega(k) = sqrt(c^2 k^2 +- eps^2 k^4)` in 1/s.
///
/// Errors when `k < 0`, or on the subsonic branch where the radicand turns
/// negative (`eps k > c`): an imaginary frequency signals instability
/// outside the model's validity and is never clamped.
pub fn omega(k: f64, m: &MediumParams) -> Result<f64> {
    if !(k >= 0.0) {
        return Err(Error::Domain(format!("wavenumber must be >= 0, got {k}")));
    }
    let c2k2 = m.sound_speed * m.sound_speed * k * k;
    let quartic = m.dispersion_strength * m.dispersion_strength * k * k * k * k;
    let omega2 = c2k2 + m.branch.quartic_sign() * quartic;
    if omega2 < 0.0 {
        return Err(Error::Domain(format!(
            "subsonic dispersion undefined beyond k_c = c/eps: omega^2 = {omega2:e} at k = {k:e}"
        )));
    }
    Ok(omega2.sqrt())
}

/// Crossover wavenumber `k_c = c/eps` (1/m) where the quartic term equals
/// the quadratic one. A linear medium has no crossover; that case is an
/// error rather than an infinity.
pub fn crossover_scale(m: &MediumParams) -> Result<f64> {
    if m.dispersion_strength > 0.0 {
        Ok(m.sound_speed / m.dispersion_strength)
    } else {
        Err(Error::Domain(
            "no dispersive crossover: eps = 0 (linear medium)".into(),
        ))
    }
}

/// The four dimensionless groups the response integrals depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessPoint {
    /// Gap times pulse width, `a = Omega T`.
    pub a: f64,
    /// Separation in sound-travel units, `b = dx/(c T)`.
    pub b: f64,
    /// Spot size in sound-travel units, `s = sigma/(c T)`.
    pub s: f64,
    /// Dispersion strength, `delta = eps/(c^2 T)`; the reduced dispersion
    /// relation is `omega T = u sqrt(1 +- delta^2 u^2)` with `u = k c T`.
    pub delta: f64,
    pub branch: Branch,
}

impl DimensionlessPoint {
    pub fn new(a: f64, b: f64, s: f64, delta: f64, branch: Branch) -> Result<Self> {
        if !(a >= 0.0) || !(b >= 0.0) || !(s > 0.0) || !(delta >= 0.0) {
            return Err(Error::Domain(format!(
                "invalid dimensionless point: a={a}, b={b}, s={s}, delta={delta} \
                 (need a,b,delta >= 0 and s > 0)"
            )));
        }
        let delta = match branch {
            Branch::Linear => 0.0,
            _ => delta,
        };
        Ok(DimensionlessPoint {
            a,
            b,
            s,
            delta,
            branch,
        })
    }

    /// Same point with a different gap.
    pub fn with_gap(&self, a: f64) -> Result<Self> {
        DimensionlessPoint::new(a, self.b, self.s, self.delta, self.branch)
    }

    /// Same point on the linear branch (`delta = 0`), the relativistic
    /// reference for dispersion-sensitivity checks.
    pub fn linear_reference(&self) -> Self {
        DimensionlessPoint {
            delta: 0.0,
            branch: Branch::Linear,
            ..*self
        }
    }
}

/// Maps an SI configuration onto the dimensionless groups.
pub fn reduce(m: &MediumParams, d: &DetectorPairConfig) -> Result<DimensionlessPoint> {
    d.validate()?;
    if !(m.sound_speed > 0.0) {
        return Err(Error::Domain("sound speed must be positive".into()));
    }
    let ct = m.sound_speed * d.pulse_width;
    DimensionlessPoint::new(
        d.gap * d.pulse_width,
        d.separation / ct,
        d.spot_size / ct,
        m.dispersion_strength / (m.sound_speed * m.sound_speed * d.pulse_width),
        m.branch,
    )
}

/// Inverse of [`reduce`] given the reference scales `c` and `T`; the
/// round trip reproduces the SI inputs to 1e-12 relative.
pub fn unreduce(
    p: &DimensionlessPoint,
    sound_speed: f64,
    pulse_width: f64,
    coupling: f64,
) -> Result<(MediumParams, DetectorPairConfig)> {
    if !(sound_speed > 0.0) || !(pulse_width > 0.0) {
        return Err(Error::Domain(
            "reference scales c and T must be positive".into(),
        ));
    }
    let ct = sound_speed * pulse_width;
    let m = MediumParams::new(
        sound_speed,
        p.delta * sound_speed * sound_speed * pulse_width,
        p.branch,
    )?;
    let d = DetectorPairConfig::new(p.a / pulse_width, pulse_width, p.s * ct, p.b * ct, coupling)?;
    Ok((m, d))
}

/// A condensate preset: healing length, sound speed and probe geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BecPreset {
    /// Healing length `xi` (m); sets `eps = c xi / sqrt(2)`.
    pub healing_length: f64,
    /// Sound speed (m/s).
    pub sound_speed: f64,
    /// Laser spot size `sigma` (m).
    pub spot_size: f64,
    /// Pulse width `T` (s).
    pub pulse_width: f64,
    /// In-plane extent of the condensate (m).
    pub extent: f64,
}

impl BecPreset {
    /// Dispersion strength from the healing length, `eps = c xi/sqrt(2)`.
    pub fn dispersion_strength(&self) -> f64 {
        self.sound_speed * self.healing_length / std::f64::consts::SQRT_2
    }

    pub fn medium(&self) -> MediumParams {
        MediumParams {
            sound_speed: self.sound_speed,
            dispersion_strength: self.dispersion_strength(),
            branch: Branch::Bogoliubov,
        }
    }

    /// Detector defaults at this preset: unit gap-width product (`Omega =
    /// 1/T`) and one sound-travel distance of separation (`dx = c T`).
    pub fn detector_defaults(&self) -> DetectorPairConfig {
        DetectorPairConfig::new(
            1.0 / self.pulse_width,
            self.pulse_width,
            self.spot_size,
            self.sound_speed * self.pulse_width,
            1.0,
        )
        .expect("preset geometry is valid")
    }
}

/// Rubidium condensate probed by a focused pulsed laser: healing length
/// 63.1 nm, sound speed 8 mm/s, spot size 3 um, pulse width 3 ms, extent
/// 100 um. The spot covers roughly 48 healing lengths, so the probe sees
/// only the phononic band.
pub fn rubidium_preset() -> BecPreset {
    BecPreset {
        healing_length: 6.31e-8,
        sound_speed: 8e-3,
        spot_size: 3e-6,
        pulse_width: 3e-3,
        extent: 1e-4,
    }
}
