//! Two-detector reduced state and entanglement quantities: negativity by
//! formula and by partial transpose, concurrence, and the joint-quadrature
//! inseparability.
//!
//! The second-order state in the basis {|00>, |10>, |01>, |11>} is the
//! X-matrix
//!
//! ```text
//!     | 1-L_aa-L_bb  0     0     M |
//!     | 0            L_aa  L_ab  0 |
//!     | 0            L_ab* L_bb  0 |
//!     | M*           0     0     0 |
//! ```
//!
//! whose partial transpose splits into two 2x2 blocks: the exchange block
//! {|10>, |01>} coupled by `M`, and the outer block {|00>, |11>} coupled
//! by `L_ab`. For identical detectors the exchange block turns negative
//! exactly when `|M| > L`, giving the leading-order negativity
//! `max(|M| - L, 0)`; the outer block contributes only at fourth order in
//! the coupling.

use num_complex::Complex64;

use crate::experiment::CausalClass;
use crate::medium::Branch;
use crate::response::{MatrixElements, Smearing};
use crate::{Error, Result};

/// Margin under which a computed negativity coefficient is reported as
/// exactly zero. Values this small cannot be certified against the
/// quadrature tolerances; flooring them realizes the exact zero region of
/// the harvesting maps. Applied when assembling a [`HarvestPoint`], never
/// inside [`negativity_formula`].
pub const NEGATIVITY_FLOOR: f64 = 1e-12;

/// Scaled occupation `L_aa + L_bb` beyond which the second-order
/// construction is refused.
pub const PERTURBATIVE_LIMIT: f64 = 0.1;

/// The 4x4 two-detector reduced density matrix in the basis
/// {|00>, |10>, |01>, |11>}.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedState {
    m: [[Complex64; 4]; 4],
}

impl ReducedState {
    /// Builds a state from an explicit matrix, enforcing Hermiticity (to
    /// 1e-12), unit trace (to 1e-12) and the X-state sparsity pattern.
    pub fn from_matrix(m: [[Complex64; 4]; 4]) -> Result<Self> {
        for r in 0..4 {
            for c in 0..4 {
                let diff = (m[r][c] - m[c][r].conj()).norm();
                if diff > 1e-12 {
                    return Err(Error::Domain(format!(
                        "matrix is not Hermitian at ({r},{c}): deviation {diff:e}"
                    )));
                }
            }
        }
        let trace: Complex64 = (0..4).map(|i| m[i][i]).sum();
        if (trace - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::Domain(format!("trace {} != 1", trace.re)));
        }
        for (r, c) in [(0, 1), (0, 2), (1, 3), (2, 3)] {
            if m[r][c].norm() != 0.0 || m[c][r].norm() != 0.0 {
                return Err(Error::Domain(format!(
                    "X-state pattern violated at ({r},{c})"
                )));
            }
        }
        Ok(ReducedState { m })
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.m[r][c]
    }

    pub fn trace(&self) -> f64 {
        (0..4).map(|i| self.m[i][i].re).sum()
    }

    pub fn matrix(&self) -> &[[Complex64; 4]; 4] {
        &self.m
    }
}

/// Materializes the reduced state from element coefficients and a concrete
/// perturbative scale `x = lambda^2 T^2`.
///
/// Refuses configurations whose scaled occupation `x (L_aa + L_bb)`
/// reaches [`PERTURBATIVE_LIMIT`]: beyond that the neglected higher orders
/// are no longer small and the state loses meaning.
pub fn assemble_state(e: &MatrixElements, scale: f64) -> Result<ReducedState> {
    if !(scale >= 0.0) {
        return Err(Error::Domain(format!("scale must be >= 0, got {scale}")));
    }
    let occupancy = scale * (e.l_aa + e.l_bb);
    if occupancy >= PERTURBATIVE_LIMIT {
        return Err(Error::Perturbativity {
            occupancy,
            limit: PERTURBATIVE_LIMIT,
        });
    }
    let z = Complex64::new(0.0, 0.0);
    let re = |x: f64| Complex64::new(x, 0.0);
    let m = scale * e.m;
    let lab = scale * e.l_ab;
    Ok(ReducedState {
        m: [
            [re(1.0 - occupancy), z, z, m],
            [z, re(scale * e.l_aa), lab, z],
            [z, lab.conj(), re(scale * e.l_bb), z],
            [m.conj(), z, z, z],
        ],
    })
}

/// Leading-order negativity for identical detectors: `max(|M| - L, 0)` in
/// units of `lambda^2 T^2`.
pub fn negativity_formula(e: &MatrixElements) -> Result<f64> {
    let noise = e.identical_noise()?;
    Ok((e.m.norm() - noise).max(0.0))
}

/// Eigenvalues of the 2x2 Hermitian block [[p, c], [c*, q]].
fn block_eigenvalues(p: f64, q: f64, c: Complex64) -> [f64; 2] {
    let mean = 0.5 * (p + q);
    let radius = (0.25 * (p - q) * (p - q) + c.norm_sqr()).sqrt();
    [mean - radius, mean + radius]
}

/// The four eigenvalues of the partially transposed X-state, in closed
/// form: `[outer-, outer+, exchange-, exchange+]`. The exchange pair comes
/// from the {|10>, |01>} block coupled by `M`; its lower eigenvalue is
/// exactly `L - |M|` for identical detectors and decides the leading-order
/// entanglement verdict.
pub fn partial_transpose_eigenvalues(rho: &ReducedState) -> [f64; 4] {
    let m = &rho.m;
    let outer = block_eigenvalues(m[0][0].re, m[3][3].re, m[1][2]);
    let exchange = block_eigenvalues(m[1][1].re, m[2][2].re, m[0][3]);
    [outer[0], outer[1], exchange[0], exchange[1]]
}

/// Negativity from the partial transpose: `max(0, -min eigenvalue)`,
/// computed by the exact block eigensolve.
pub fn negativity_partial_transpose(rho: &ReducedState) -> f64 {
    let eigs = partial_transpose_eigenvalues(rho);
    (-eigs.iter().copied().fold(f64::INFINITY, f64::min)).max(0.0)
}

/// Concurrence `C = 2N` and its base-10 logarithm. A vanishing
/// concurrence maps to `None` (the "zero" flag of the output tables),
/// never to negative infinity.
pub fn concurrence_and_log(negativity: f64) -> (f64, Option<f64>) {
    let c = 2.0 * negativity;
    let log = if c > 0.0 { Some(c.log10()) } else { None };
    (c, log)
}

/// Joint quadratures of the detector pair, at a common local phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointQuadrature {
    /// Amplitude-sum quadrature `(q_A + q_B)/sqrt(2)`.
    QPlus,
    QMinus,
    PPlus,
    /// Phase-difference quadrature `(p_A - p_B)/sqrt(2)`.
    PMinus,
}

/// Variance `V = Tr(rho {O^dag, O})/2` of a joint quadrature on the
/// second-order state, in the single-excitation approximation (no
/// per-detector `<aa>` coherence). Reduces to the vacuum value 1/2 when
/// the elements vanish:
///
/// ```text
/// V(q+-) = 1/2 + L +- Re(e^{2i phi} M) +- Re(L_ab)
/// V(p+-) = 1/2 + L -+ Re(e^{2i phi} M) +- Re(L_ab)
/// ```
pub fn joint_quadrature_variance(
    e: &MatrixElements,
    which: JointQuadrature,
    phase: f64,
) -> Result<f64> {
    let noise = e.identical_noise()?;
    let rotated = (Complex64::new(0.0, 2.0 * phase).exp() * e.m).re;
    let cross = e.l_ab.re;
    Ok(match which {
        JointQuadrature::QPlus => 0.5 + noise + rotated + cross,
        JointQuadrature::QMinus => 0.5 + noise - rotated - cross,
        JointQuadrature::PPlus => 0.5 + noise - rotated + cross,
        JointQuadrature::PMinus => 0.5 + noise + rotated - cross,
    })
}

/// Minimum over the common local phase of `V(q+) + V(p-)`, in closed
/// form: `1 + 2L - 2|M|`. Values below one witness entanglement, and
/// `1 - I_min = 2N` whenever the negativity is positive.
pub fn inseparability_min(e: &MatrixElements) -> Result<f64> {
    let noise = e.identical_noise()?;
    Ok(1.0 + 2.0 * noise - 2.0 * e.m.norm())
}

/// Per-point quadrature bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// Summed error estimate of the three radial integrals.
    pub quad_error: f64,
    /// Total adaptive subdivisions spent.
    pub subdivisions: usize,
    /// Wall-clock evaluation time. Informational only; never serialized,
    /// so output files stay deterministic.
    pub eval_micros: u64,
}

/// Everything the protocol extracts at one parameter point. All
/// entanglement quantities are coefficients of `lambda^2 T^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarvestPoint {
    pub a: f64,
    pub b: f64,
    pub s: f64,
    pub delta: f64,
    pub branch: Branch,
    pub smearing: Smearing,
    pub elements: MatrixElements,
    /// `max(|M| - L, 0)`, floored to exactly zero below
    /// [`NEGATIVITY_FLOOR`].
    pub negativity: f64,
    /// Twice the negativity.
    pub concurrence: f64,
    /// `log10` of the concurrence coefficient; `None` flags the zero
    /// region.
    pub log10_concurrence: Option<f64>,
    pub inseparability_min: f64,
    pub causal_class: CausalClass,
    pub diagnostics: Diagnostics,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn elements(l: f64, lab: Complex64, m: Complex64) -> MatrixElements {
        MatrixElements {
            l_aa: l,
            l_bb: l,
            l_ab: lab,
            m,
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vacuum_state() {
        let rho = assemble_state(&MatrixElements::zero(), 1.0).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let expected = if r == 0 && col == 0 { 1.0 } else { 0.0 };
                assert_eq!(rho.entry(r, col), c(expected, 0.0));
            }
        }
        assert_eq!(negativity_partial_transpose(&rho), 0.0);
    }

    #[test]
    fn assemble_preserves_trace_and_pattern() {
        let e = elements(0.02, c(0.01, 0.0), c(-0.03, 0.015));
        let rho = assemble_state(&e, 1.0).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-15);
        for (r, col) in [
            (0, 1),
            (0, 2),
            (1, 3),
            (2, 3),
            (1, 0),
            (2, 0),
            (3, 1),
            (3, 2),
        ] {
            assert_eq!(rho.entry(r, col), c(0.0, 0.0));
        }
        assert_eq!(rho.entry(0, 3), e.m);
        assert_eq!(rho.entry(3, 0), e.m.conj());
        assert_eq!(rho.entry(1, 2), e.l_ab);
    }

    #[test]
    fn assemble_rejects_nonperturbative_scale() {
        let e = elements(0.06, c(0.0, 0.0), c(0.0, 0.0));
        assert!(assemble_state(&e, 1.0).is_err()); // occupation 0.12
        assert!(assemble_state(&e, 0.5).is_ok());
    }

    #[test]
    fn negativity_formula_examples() {
        let quiet = elements(0.1, c(0.0, 0.0), c(0.0, 0.0));
        assert_eq!(negativity_formula(&quiet).unwrap(), 0.0);
        let loud = elements(0.1, c(0.0, 0.0), c(0.0, 0.3));
        assert!((negativity_formula(&loud).unwrap() - 0.2).abs() < 1e-15);
        let boundary = elements(0.1, c(0.0, 0.0), c(0.1, 0.0));
        assert_eq!(negativity_formula(&boundary).unwrap(), 0.0);
    }

    #[test]
    fn negativity_formula_requires_identical_detectors() {
        let e = MatrixElements {
            l_aa: 0.1,
            l_bb: 0.2,
            l_ab: c(0.0, 0.0),
            m: c(0.0, 0.0),
        };
        assert!(matches!(
            negativity_formula(&e),
            Err(Error::IdenticalDetector { .. })
        ));
    }

    #[test]
    fn bell_state_partial_transpose() {
        let z = c(0.0, 0.0);
        let h = c(0.5, 0.0);
        let rho =
            ReducedState::from_matrix([[h, z, z, h], [z, z, z, z], [z, z, z, z], [h, z, z, h]])
                .unwrap();
        assert!((negativity_partial_transpose(&rho) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn partial_transpose_tracks_formula_at_leading_order() {
        let x = 1e-3;
        for phase in [0.0f64, 0.4, 1.1, 2.9] {
            let e = elements(
                0.1,
                c(0.05 * phase.cos(), 0.05 * phase.sin()),
                c(0.3 * (2.0 * phase).cos(), 0.3 * (2.0 * phase).sin()),
            );
            let rho = assemble_state(&e, x).unwrap();
            let n_pt = negativity_partial_transpose(&rho);
            let expected = x * negativity_formula(&e).unwrap();
            assert!(
                (n_pt - expected).abs() <= 5.0 * x * x,
                "residual {} at phase {phase}",
                (n_pt - expected).abs()
            );
        }
    }

    #[test]
    fn state_eigenvalues_positive_to_fourth_order() {
        let x = 1e-3;
        let e = elements(0.2, c(0.12, 0.05), c(0.1, -0.25));
        let rho = assemble_state(&e, x).unwrap();
        // the state itself is block diagonal: {|00>,|11>} coupled by M,
        // {|10>,|01>} coupled by L_ab
        let m = rho.matrix();
        let outer = block_eigenvalues(m[0][0].re, m[3][3].re, m[0][3]);
        let inner = block_eigenvalues(m[1][1].re, m[2][2].re, m[1][2]);
        for eig in [outer[0], outer[1], inner[0], inner[1]] {
            assert!(eig >= -5.0 * x * x, "eigenvalue {eig}");
        }
    }

    #[test]
    fn concurrence_and_log_flags_zero() {
        assert_eq!(concurrence_and_log(0.0), (0.0, None));
        let (conc, log) = concurrence_and_log(0.05);
        assert!((conc - 0.1).abs() < 1e-15);
        assert!((log.unwrap() + 1.0).abs() < 1e-12);
        // monotone in N
        let mut prev = -1.0;
        for n in [1e-6, 1e-3, 0.1, 0.3] {
            let (conc, _) = concurrence_and_log(n);
            assert!(conc > prev);
            prev = conc;
        }
    }

    #[test]
    fn vacuum_quadrature_variances() {
        let e = MatrixElements::zero();
        for which in [
            JointQuadrature::QPlus,
            JointQuadrature::QMinus,
            JointQuadrature::PPlus,
            JointQuadrature::PMinus,
        ] {
            assert_eq!(joint_quadrature_variance(&e, which, 0.3).unwrap(), 0.5);
        }
    }

    #[test]
    fn dgcz_sum_is_cross_term_free() {
        let e = elements(0.07, c(0.03, 0.01), c(-0.06, 0.11));
        for phase in [0.0, 0.7, 1.9] {
            let sum = joint_quadrature_variance(&e, JointQuadrature::QPlus, phase).unwrap()
                + joint_quadrature_variance(&e, JointQuadrature::PMinus, phase).unwrap();
            let expected =
                1.0 + 2.0 * e.l_aa + 2.0 * (Complex64::new(0.0, 2.0 * phase).exp() * e.m).re;
            assert!((sum - expected).abs() < 1e-15);
        }
        // phase chosen so e^{2 i phi} M = -|M| saturates the minimum
        let phase = 0.5 * (std::f64::consts::PI - e.m.arg());
        let sum = joint_quadrature_variance(&e, JointQuadrature::QPlus, phase).unwrap()
            + joint_quadrature_variance(&e, JointQuadrature::PMinus, phase).unwrap();
        assert!((sum - (1.0 + 2.0 * e.l_aa - 2.0 * e.m.norm())).abs() < 1e-14);
        assert!((sum - inseparability_min(&e).unwrap()).abs() < 1e-14);
    }

    /// Dense oracle for the quadrature variances: both detector modes
    /// truncated at two excitations (so `a a^dag` acts correctly on the
    /// one-excitation states), V = Tr(rho {O^dag, O})/2.
    mod dense_variance_oracle {
        use super::*;

        type Mat = Vec<Vec<Complex64>>;

        fn zeros(n: usize) -> Mat {
            vec![vec![Complex64::new(0.0, 0.0); n]; n]
        }

        fn mul(a: &Mat, b: &Mat) -> Mat {
            let n = a.len();
            let mut out = zeros(n);
            for r in 0..n {
                for k in 0..n {
                    if a[r][k].norm() == 0.0 {
                        continue;
                    }
                    for col in 0..n {
                        out[r][col] += a[r][k] * b[k][col];
                    }
                }
            }
            out
        }

        fn dagger(a: &Mat) -> Mat {
            let n = a.len();
            let mut out = zeros(n);
            for r in 0..n {
                for col in 0..n {
                    out[r][col] = a[col][r].conj();
                }
            }
            out
        }

        /// Annihilation operator on one three-level bosonic mode,
        /// embedded on detector `slot` of the 9-dimensional pair space
        /// with index `3 n_a + n_b`.
        fn lowering(slot: usize) -> Mat {
            let amp = |n: usize| (n as f64).sqrt();
            let mut out = zeros(9);
            for na in 0..3 {
                for nb in 0..3 {
                    let col = 3 * na + nb;
                    match slot {
                        0 if na > 0 => out[3 * (na - 1) + nb][col] = c(amp(na), 0.0),
                        1 if nb > 0 => out[3 * na + (nb - 1)][col] = c(amp(nb), 0.0),
                        _ => {}
                    }
                }
            }
            out
        }

        fn embed_state(rho: &ReducedState) -> Mat {
            // |00>,|10>,|01>,|11> -> indices 0, 3, 1, 4
            let map = [0usize, 3, 1, 4];
            let mut out = zeros(9);
            for r in 0..4 {
                for col in 0..4 {
                    out[map[r]][map[col]] = rho.entry(r, col);
                }
            }
            out
        }

        fn scale(a: &Mat, z: Complex64) -> Mat {
            a.iter()
                .map(|row| row.iter().map(|v| v * z).collect())
                .collect()
        }

        fn add(a: &Mat, b: &Mat) -> Mat {
            a.iter()
                .zip(b)
                .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
                .collect()
        }

        pub fn variance(rho: &ReducedState, which: JointQuadrature, phase: f64) -> f64 {
            let (a_op, b_op) = (lowering(0), lowering(1));
            let rot = Complex64::new(0.0, -phase).exp();
            let quad = |op: &Mat, momentum: bool| -> Mat {
                let base = if momentum {
                    scale(op, rot * Complex64::new(0.0, -1.0))
                } else {
                    scale(op, rot)
                };
                scale(&add(&base, &dagger(&base)), c(1.0 / 2f64.sqrt(), 0.0))
            };
            let (oa, ob) = match which {
                JointQuadrature::QPlus | JointQuadrature::QMinus => {
                    (quad(&a_op, false), quad(&b_op, false))
                }
                _ => (quad(&a_op, true), quad(&b_op, true)),
            };
            let sign = match which {
                JointQuadrature::QPlus | JointQuadrature::PPlus => 1.0,
                _ => -1.0,
            };
            let joint = scale(
                &add(&oa, &scale(&ob, c(sign, 0.0))),
                c(1.0 / 2f64.sqrt(), 0.0),
            );
            let anticomm = add(&mul(&dagger(&joint), &joint), &mul(&joint, &dagger(&joint)));
            let product = mul(&embed_state(rho), &anticomm);
            0.5 * (0..9).map(|i| product[i][i].re).sum::<f64>()
        }
    }

    #[test]
    fn quadrature_variances_match_dense_trace() {
        let x = 5e-3;
        let e = elements(0.09, c(0.04, 0.02), c(-0.07, 0.12)).scaled(x);
        let rho = assemble_state(&elements(0.09, c(0.04, 0.02), c(-0.07, 0.12)), x).unwrap();
        for which in [
            JointQuadrature::QPlus,
            JointQuadrature::QMinus,
            JointQuadrature::PPlus,
            JointQuadrature::PMinus,
        ] {
            for phase in [0.0, 0.35, 1.2, 2.8] {
                let formula = joint_quadrature_variance(&e, which, phase).unwrap();
                let dense = dense_variance_oracle::variance(&rho, which, phase);
                assert!(
                    (formula - dense).abs() < 1e-13,
                    "{which:?} at phase {phase}: {formula} vs {dense}"
                );
            }
        }
    }

    #[test]
    fn inseparability_examples() {
        let noisy = elements(0.1, c(0.0, 0.0), c(0.0, 0.0));
        assert!((inseparability_min(&noisy).unwrap() - 1.2).abs() < 1e-15);
        let boundary = elements(0.1, c(0.0, 0.0), c(0.0, 0.1));
        assert!((inseparability_min(&boundary).unwrap() - 1.0).abs() < 1e-15);
        let x = 1e-3;
        let entangled = elements(0.1, c(0.0, 0.0), c(0.3, 0.0)).scaled(x);
        assert!((inseparability_min(&entangled).unwrap() - (1.0 - 0.4 * x)).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn dgcz_link_and_normalization_immunity(
            l in 0.01f64..0.3,
            lab_frac in 0.0f64..1.0,
            lab_phase in 0.0f64..std::f64::consts::TAU,
            m_mag in 0.0f64..0.45,
            m_phase in 0.0f64..std::f64::consts::TAU,
            factor in 1e-3f64..1e3,
        ) {
            let lab = Complex64::from_polar(l * lab_frac, lab_phase);
            let m = Complex64::from_polar(m_mag, m_phase);
            let e = elements(l, lab, m);
            let n = negativity_formula(&e).unwrap();
            let i_min = inseparability_min(&e).unwrap();
            if n > 0.0 {
                prop_assert!((1.0 - i_min - 2.0 * n).abs() < 1e-12);
            } else {
                prop_assert!(i_min >= 1.0);
            }
            // a common positive rescaling cannot flip any verdict
            let rescaled = e.scaled(factor);
            let n2 = negativity_formula(&rescaled).unwrap();
            let i2 = inseparability_min(&rescaled).unwrap();
            prop_assert_eq!(n > 0.0, n2 > 0.0);
            prop_assert_eq!(i_min < 1.0, i2 < 1.0);
        }

        #[test]
        fn partial_transpose_blocks_match_dense_eigensolver(
            p00 in 0.3f64..0.9,
            p11_frac in 0.0f64..1.0,
            p22_frac in 0.0f64..1.0,
            lab_re in -0.1f64..0.1,
            lab_im in -0.1f64..0.1,
            m_re in -0.3f64..0.3,
            m_im in -0.3f64..0.3,
        ) {
            // random X-state, not necessarily positive; the eigensolves
            // must still agree
            let rest = 1.0 - p00;
            let p11 = rest * p11_frac * p22_frac.max(1e-3);
            let p22 = rest * (1.0 - p11_frac) * 0.9;
            let p33 = rest - p11 - p22;
            let z = Complex64::new(0.0, 0.0);
            let lab = Complex64::new(lab_re, lab_im);
            let m = Complex64::new(m_re, m_im);
            let rho = ReducedState::from_matrix([
                [c(p00, 0.0), z, z, m],
                [z, c(p11, 0.0), lab, z],
                [z, lab.conj(), c(p22, 0.0), z],
                [m.conj(), z, z, c(p33, 0.0)],
            ]).unwrap();

            // partial transpose in B swaps M into the {|10>,|01>} block
            // and L_ab* into the {|00>,|11>} block
            let pt = [
                [c(p00, 0.0), z, z, lab.conj()],
                [z, c(p11, 0.0), m.conj(), z],
                [z, m, c(p22, 0.0), z],
                [lab, z, z, c(p33, 0.0)],
            ];
            // embed as the 8x8 real symmetric [[Re, -Im], [Im, Re]]
            let mut dense = nalgebra::DMatrix::<f64>::zeros(8, 8);
            for r in 0..4 {
                for col in 0..4 {
                    dense[(r, col)] = pt[r][col].re;
                    dense[(r, col + 4)] = -pt[r][col].im;
                    dense[(r + 4, col)] = pt[r][col].im;
                    dense[(r + 4, col + 4)] = pt[r][col].re;
                }
            }
            let mut dense_eigs: Vec<f64> =
                dense.symmetric_eigen().eigenvalues.iter().copied().collect();
            dense_eigs.sort_by(f64::total_cmp);
            let mut closed = partial_transpose_eigenvalues(&rho).to_vec();
            closed.sort_by(f64::total_cmp);
            // each complex eigenvalue appears twice in the real embedding
            for (i, eig) in closed.iter().enumerate() {
                prop_assert!((dense_eigs[2 * i] - eig).abs() < 1e-12);
                prop_assert!((dense_eigs[2 * i + 1] - eig).abs() < 1e-12);
            }
        }
    }
}
