//! Scalar best approximation by functions with at most `k` poles in the disc.
//!
//! For a scalar symbol `phi` the distance from `phi` to the meromorphic class
//! with `k` disc poles equals the `k`-th Hankel singular value `s_k`, and a
//! minimizer is `q = phi - (H_phi v) / v` for any Schmidt vector `v` at level
//! `k`. The error `phi - q` then has constant modulus `s_k` on the circle.

use crate::error::{Error, Result};
use crate::hankel::{
    apply_hankel, build_hankel, hankel_depth, schmidt_space, vector_symbol, SingularData,
};
use crate::symalg::{winding_number_adaptive, LaurentPoly, Poly, RationalScalar};
use crate::{tol, C64};

/// Result of the scalar solver at level `k`.
#[derive(Debug, Clone)]
pub struct AakSolution {
    pub k: usize,
    /// Optimal error level `s_k(H_phi)`.
    pub s: f64,
    /// Multiplicity of `s_k` in the singular spectrum.
    pub mu: usize,
    /// Best approximant with at most `k` poles in the open disc.
    pub q: RationalScalar,
    /// Error symbol `phi - q`.
    pub error: RationalScalar,
    /// Schmidt vector used in the construction (zero in the exact branch).
    pub v: Poly,
    /// Full Hankel singular data of the input.
    pub singular: SingularData,
    /// True when `s_k = 0` and `q = phi` exactly.
    pub exact: bool,
}

/// One-sided symbol of a scalar Laurent polynomial as a 1x1 matrix symbol.
fn as_matrix(phi: &LaurentPoly) -> crate::symalg::LaurentMatrix {
    crate::symalg::LaurentMatrix::from_entries(1, 1, std::slice::from_ref(phi))
        .expect("1x1 shape")
}

/// Zeroes negligible antianalytic numerator coefficients. The exact minimizer
/// cancels the symbol's minus part except for its genuine principal parts,
/// which are never small; what floating point leaves behind in those
/// positions is noise and would otherwise read as spurious origin poles.
pub(crate) fn weed_minus_noise(q: &RationalScalar) -> Result<RationalScalar> {
    let num = q.num();
    if num.lo >= 0 || num.is_zero() {
        return Ok(q.clone());
    }
    let m = (-num.lo) as usize;
    let scale = num.p.scale_max();
    let mut coeffs = num.p.0.clone();
    let mut touched = false;
    for c in coeffs.iter_mut().take(m) {
        if c.norm() > 0.0 && c.norm() <= tol::CANCEL * scale {
            *c = C64::default();
            touched = true;
        }
    }
    if !touched {
        return Ok(q.clone());
    }
    RationalScalar::new(
        LaurentPoly::new(num.lo, Poly::from_coeffs(coeffs)),
        q.den().clone(),
    )
}

/// Best approximation of `phi` in the class with at most `k` disc poles.
///
/// Requires `s_{k-1} > s_k` (distinct clusters) unless `k = 0`; inside a
/// cluster the level is ill-posed and the call fails with `GapViolation`.
/// When `s_k = 0` the Hankel operator has rank at most `k` and `phi` itself
/// is the minimizer.
pub fn best_meromorphic(phi: &LaurentPoly, k: usize) -> Result<AakSolution> {
    let phi_m = as_matrix(phi);
    let h = build_hankel(&phi_m);
    let sd = SingularData::new(&h)?;
    let s = sd.value(k);
    let scale = sd.scale().max(1.0);

    if s <= 1e-13 * scale {
        // rank(H_phi) <= k: the antianalytic part is already a rational
        // function with at most k poles in the disc and phi is optimal.
        let q = RationalScalar::from_laurent(phi.clone());
        let poles: usize = q.poles_in_disc()?.iter().map(|&(_, m)| m).sum();
        if poles > k {
            return Err(Error::internal(format!(
                "rank-deficient Hankel but {poles} > {k} poles in the symbol"
            )));
        }
        return Ok(AakSolution {
            k,
            s: 0.0,
            mu: 0,
            q,
            error: RationalScalar::zero(),
            v: Poly::zero(),
            singular: sd,
            exact: true,
        });
    }

    sd.require_gap_below(k)?;
    let mu = sd.multiplicity(k);
    // after the gap check the cluster starts at k, so the first basis vector
    // is a Schmidt vector for s_k
    let basis = schmidt_space(&h, &sd, k)?;
    let v_sym = vector_symbol(&basis[0], 1)?;
    let v_entry = v_sym.entry(0, 0);
    debug_assert!(v_entry.lo >= 0);
    let v_poly = v_entry.p.shift_up(v_entry.lo as usize).trimmed();

    // H_phi v exactly, then q = phi - (H_phi v) / v
    let hv = apply_hankel(&phi_m, &v_sym)?.entry(0, 0);
    let n_snap = (4 * hankel_depth(&phi_m).max(1))
        .next_power_of_two()
        .max(tol::GRID_MIN);

    // phi v = H_phi v on the circle means the minimizer is zero; detected
    // before the quotient is formed, because in that degenerate case v's
    // spurious near-circle factors need not cancel in the num/den sense.
    let mut v_max = 0.0f64;
    let mut qv_max = 0.0f64;
    for j in 0..n_snap {
        let z = crate::symalg::grid_point(j, n_snap);
        let vz = v_poly.eval(z);
        v_max = v_max.max(vz.norm());
        qv_max = qv_max.max((phi.eval(z) * vz - hv.eval(z)).norm());
    }
    if qv_max <= tol::CANCEL * scale * v_max {
        let q = RationalScalar::zero();
        let dev = (0..n_snap)
            .map(|j| (phi.eval(crate::symalg::grid_point(j, n_snap)).norm() - s).abs())
            .fold(0.0f64, f64::max);
        if dev > tol::NORM_EQ * (1.0 + s) {
            return Err(Error::InternalInconsistency(format!(
                "zero minimizer but |phi| deviates from s_k by {dev:.3e}"
            )));
        }
        return Ok(AakSolution {
            k,
            s,
            mu,
            q,
            error: RationalScalar::from_laurent(phi.clone()),
            v: v_poly,
            singular: sd,
            exact: false,
        });
    }

    let ratio = RationalScalar::new(hv, v_poly.clone())?;
    let mut q = weed_minus_noise(&RationalScalar::from_laurent(phi.clone()).sub(&ratio)?)?;

    // A numerically vanishing minimizer is snapped to exact zero. Noise-only
    // numerators over a denominator otherwise read as spurious disc poles.
    let q_sup = (0..n_snap)
        .map(|j| q.eval(crate::symalg::grid_point(j, n_snap)).norm())
        .fold(0.0, f64::max);
    if q_sup <= tol::CANCEL * scale {
        q = RationalScalar::zero();
    }

    let poles: usize = q.poles_in_disc()?.iter().map(|&(_, m)| m).sum();
    if poles > k {
        return Err(Error::ConstructionFailure(format!(
            "approximant has {poles} poles in the disc, level allows {k}"
        )));
    }

    // the error must have constant modulus s_k on the circle
    let err_sym = ratio;
    let n = (4 * hankel_depth(&phi_m).max(1)).next_power_of_two().max(tol::GRID_MIN);
    let dev = (0..n)
        .map(|j| {
            let z = crate::symalg::grid_point(j, n);
            (err_sym.eval(z).norm() - s).abs()
        })
        .fold(0.0, f64::max);
    if dev > tol::NORM_EQ * (1.0 + s) {
        return Err(Error::ConstructionFailure(format!(
            "error modulus deviates from s_k by {dev:.3e}"
        )));
    }

    Ok(AakSolution {
        k,
        s,
        mu,
        q,
        error: err_sym,
        v: v_poly,
        singular: sd,
        exact: false,
    })
}

/// Index certificate for the scalar error symbol.
#[derive(Debug, Clone)]
pub struct ScalarIndexReport {
    pub k: usize,
    pub s: f64,
    pub mu: usize,
    /// Winding number of `phi - q` around the origin.
    pub winding: i64,
    /// Fredholm index of the Toeplitz operator with symbol `phi - q`.
    pub ind: i64,
    /// Whether `ind = 2k + mu` held.
    pub formula_holds: bool,
}

/// Solve at level `k` and test the index identity `ind T_{phi-q} = 2k + mu`.
///
/// The index of a Toeplitz operator with invertible scalar symbol is minus
/// the winding number; the error symbol has constant modulus `s_k > 0`, so
/// the winding is well defined.
pub fn verify_scalar_index(phi: &LaurentPoly, k: usize) -> Result<(AakSolution, ScalarIndexReport)> {
    let sol = best_meromorphic(phi, k)?;
    if sol.exact {
        return Err(Error::DegenerateLevel {
            k,
            reason: "error symbol vanishes; the index identity does not apply".into(),
        });
    }
    let err = sol.error.clone();
    let winding = winding_number_adaptive(
        |n| {
            Ok((0..n)
                .map(|j| err.eval(crate::symalg::grid_point(j, n)))
                .collect::<Vec<C64>>())
        },
        tol::GRID_MIN,
    )?;
    let ind = -winding;
    let report = ScalarIndexReport {
        k,
        s: sol.s,
        mu: sol.mu,
        winding,
        ind,
        formula_holds: ind == (2 * k + sol.mu) as i64,
    };
    Ok((sol, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use crate::symalg::grid_point;

    fn c(re: f64, im: f64) -> C64 {
        c64(re, im)
    }

    fn scalar(coeffs: &[(i64, f64)]) -> LaurentPoly {
        coeffs
            .iter()
            .fold(LaurentPoly::zero(), |acc, &(p, x)| {
                acc.add(&LaurentPoly::new(p, Poly::constant(c(x, 0.0))))
            })
    }

    #[test]
    fn two_pole_symbol_level_one() {
        // phi = 2/z + 1/z^2: s_0 = sqrt2 + 1, s_1 = sqrt2 - 1.
        // The level-1 approximant keeps one pole at sqrt2 - 1 and the error
        // has constant modulus s_1.
        let phi = scalar(&[(-1, 2.0), (-2, 1.0)]);
        let sol = best_meromorphic(&phi, 1).unwrap();
        let r2 = 2.0f64.sqrt();
        assert!((sol.s - (r2 - 1.0)).abs() < 1e-14);
        assert_eq!(sol.mu, 1);
        let poles = sol.q.poles_in_disc().unwrap();
        assert_eq!(poles.len(), 1);
        assert_eq!(poles[0].1, 1);
        assert!((poles[0].0 - c(r2 - 1.0, 0.0)).norm() < 1e-10);
        for j in 0..64 {
            let z = grid_point(j, 64);
            let e = phi.eval(z) - sol.q.eval(z);
            assert!((e.norm() - sol.s).abs() < 1e-10);
        }
    }

    #[test]
    fn level_zero_is_nehari() {
        // at k = 0 the approximant is analytic and the error modulus is s_0
        let phi = scalar(&[(-1, 2.0), (-2, 1.0)]);
        let sol = best_meromorphic(&phi, 0).unwrap();
        assert!(sol.q.poles_in_disc().unwrap().is_empty());
        assert!((sol.s - (2.0f64.sqrt() + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn index_formula_on_two_pole_symbol() {
        let phi = scalar(&[(-1, 2.0), (-2, 1.0)]);
        let (_, report) = verify_scalar_index(&phi, 1).unwrap();
        assert_eq!(report.winding, -3);
        assert_eq!(report.ind, 3);
        assert_eq!(report.mu, 1);
        assert!(report.formula_holds);
    }

    #[test]
    fn index_formula_on_cubic_symbol() {
        // phi = 3/z + 1/z^3 has simple singular values; each level obeys
        // ind = 2k + 1
        let phi = scalar(&[(-1, 3.0), (-3, 1.0)]);
        for k in 0..3 {
            let (sol, report) = verify_scalar_index(&phi, k).unwrap();
            assert_eq!(sol.mu, 1, "level {k}");
            assert!(report.formula_holds, "level {k}: ind = {}", report.ind);
            assert_eq!(report.ind, 2 * k as i64 + 1);
        }
    }

    #[test]
    fn exact_branch_when_rank_is_reached() {
        // Hankel rank 2: at k = 2 the symbol is its own best approximant
        let phi = scalar(&[(-1, 2.0), (-2, 1.0)]);
        let sol = best_meromorphic(&phi, 2).unwrap();
        assert!(sol.exact);
        assert!(sol.error.is_zero());
        assert_eq!(
            sol.q.poles_in_disc().unwrap().iter().map(|&(_, m)| m).sum::<usize>(),
            2
        );
    }

    #[test]
    fn analytic_symbol_needs_no_correction() {
        let phi = scalar(&[(0, 1.0), (2, 3.0)]);
        let sol = best_meromorphic(&phi, 0).unwrap();
        assert!(sol.exact);
        assert_eq!(sol.s, 0.0);
    }

    #[test]
    fn complex_coefficients_round_trip() {
        // a symbol with genuinely complex data; the certificate must still close
        let phi = LaurentPoly::new(
            -3,
            Poly::from_coeffs(vec![c(0.3, -0.4), c(0.0, 1.0), c(1.5, 0.2)]),
        );
        let (sol, report) = verify_scalar_index(&phi, 1).unwrap();
        assert!(report.formula_holds, "ind = {}, mu = {}", report.ind, report.mu);
        // error modulus constant
        for j in 0..256 {
            let z = grid_point(j, 256);
            assert!(((phi.eval(z) - sol.q.eval(z)).norm() - sol.s).abs() < 1e-8);
        }
    }
}
