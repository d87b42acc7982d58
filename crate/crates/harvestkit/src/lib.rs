//! Entanglement harvesting from the vacuum of a dispersive (2+1)-dimensional
//! phonon field, probed by a pair of pulsed, Gaussian-switched local detectors.
//!
//! The crate computes the second-order reduced state of two identical
//! detectors coupled to the field vacuum, and from it the negativity,
//! concurrence and joint-quadrature inseparability, over sweeps of the
//! dimensionless parameters
//!
//! ```text
//! a = Omega T      detector gap x pulse width
//! b = dx / (c T)   separation in sound-travel units
//! s = sigma / (c T) detector spot size
//! d = eps / (c^2 T) dispersion strength
//! ```
//!
//! All internal integrals run in these reduced variables with `u = k c T` as
//! the radial integration variable; SI quantities appear only at the
//! configuration boundary ([`medium::reduce`] / [`medium::unreduce`]).
//!
//! Module map:
//! * [`medium`] — dispersion relations, unit reduction, physical presets
//! * [`specfun`] — Bessel/Dawson special functions, adaptive radial
//!   quadrature, brute-force oracles
//! * [`response`] — switching/smearing profiles, G-functions, and the
//!   density-matrix elements `L_aa`, `L_ab`, `M`
//! * [`entanglement`] — reduced-state assembly, negativity, concurrence,
//!   inseparability
//! * [`experiment`] — grid sweeps, causal classification, dispersion
//!   sensitivity, negativity optimization

pub mod entanglement;
pub mod experiment;
pub mod medium;
pub mod response;
pub mod specfun;

use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature exhausted its subdivision budget. Carries the best
    /// estimate reached so that callers can still inspect the partial result.
    #[error("quadrature did not converge: error estimate {error_estimate:.3e} after {subdivisions} subdivisions")]
    Convergence {
        /// Best value reached when the budget ran out.
        estimate: Complex64,
        /// Error estimate attached to `estimate`.
        error_estimate: f64,
        /// Subdivisions performed before giving up.
        subdivisions: usize,
    },

    /// Second-order construction pushed outside its validity window.
    #[error(
        "perturbative validity lost: scaled excitation probability {occupancy:.3e} >= {limit:.1e}"
    )]
    Perturbativity { occupancy: f64, limit: f64 },

    /// An operation assuming identical detectors received `L_aa != L_bb`.
    #[error("detectors are not identical: |L_aa - L_bb| = {difference:.3e}")]
    IdenticalDetector { difference: f64 },

    /// Constrained optimization found no feasible point with positive
    /// negativity; the best inseparability seen is reported instead.
    #[error(
        "no feasible point with positive negativity (best inseparability {best_inseparability:.6})"
    )]
    Infeasible {
        best_inseparability: f64,
        best_point: (f64, f64, f64),
    },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
