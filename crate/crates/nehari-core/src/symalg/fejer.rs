//! Spectral factorization of nonnegative trigonometric polynomials.

use crate::error::{Error, Result};
use crate::symalg::grid::grid_point;
use crate::symalg::poly::{cluster_points, refine_root, LaurentPoly, Poly};
use crate::{c64, tol};

/// Clusters farther than this from the unit circle are classified as genuine
/// zeros off the circle rather than boundary zeros.
const CIRCLE_CLASS: f64 = 1e-6;

/// Factor a trigonometric polynomial `f >= 0` on the circle as `f = |h|^2`
/// with `h` analytic, `deg h = d` and `h(0) >= 0`.
///
/// `f` must satisfy `f = f*` up to trimming; boundary zeros must have even
/// multiplicity. The factor is assembled by root flipping: `h` collects the
/// zeros of `z^d f` outside the closed disc together with half of every
/// boundary cluster, and the scale is fixed by the ratio `f / |h|^2` at the
/// grid point where `|f|` is largest.
pub fn fejer_riesz(f: &LaurentPoly) -> Result<Poly> {
    let f = f.clone().canonical();
    if f.is_zero() {
        return Ok(Poly::zero());
    }
    let scale = f.p.scale_max();
    let sym_err = f
        .sub(&f.star())
        .p
        .0
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if sym_err > tol::FEJER * scale {
        return Err(Error::invalid(format!(
            "fejer_riesz: symbol is not self-adjoint, asymmetry {sym_err:.3e}"
        )));
    }
    let d = -f.lo;
    if d < 0 || f.hi() != d {
        return Err(Error::invalid(
            "fejer_riesz: symbol must have symmetric power range [-d, d]",
        ));
    }
    if d == 0 {
        let c = f.p.coeff(0);
        if c.re < -tol::FEJER * scale.max(1.0) || c.im.abs() > tol::FEJER * scale.max(1.0) {
            return Err(Error::invalid("fejer_riesz: negative constant symbol"));
        }
        return Ok(Poly::constant(c64(c.re.max(0.0).sqrt(), 0.0)));
    }

    // F(z) = z^d f(z) is a polynomial of degree 2d with F(0) != 0.
    let big = f.p.clone();
    let roots = big.roots()?;
    debug_assert_eq!(roots.len(), 2 * d as usize);
    let clusters = cluster_points(&roots, tol::ROOT_CLUSTER);

    let mut h = Poly::one();
    let mut h_degree = 0usize;
    for (center, mult) in &clusters {
        let r = center.norm();
        if (r - 1.0).abs() <= CIRCLE_CLASS {
            if mult % 2 != 0 {
                return Err(Error::ConstructionFailure(format!(
                    "fejer_riesz: boundary zero near {center} has odd multiplicity {mult}"
                )));
            }
            let c = center / c64(r, 0.0);
            for _ in 0..mult / 2 {
                h = h.mul(&Poly::from_coeffs(vec![-c, c64(1.0, 0.0)]));
            }
            h_degree += mult / 2;
        } else if r > 1.0 {
            let lam = if *mult > 1 {
                refine_root(&big, *center, *mult)
            } else {
                *center
            };
            // factor (1 - z / lam), normalized to value 1 at the origin
            let inv = c64(1.0, 0.0) / lam;
            for _ in 0..*mult {
                h = h.mul(&Poly::from_coeffs(vec![c64(1.0, 0.0), -inv]));
            }
            h_degree += mult;
        }
        // roots inside the disc are mirrors of the outside ones and are dropped
    }
    if h_degree as i64 != d {
        return Err(Error::ConstructionFailure(format!(
            "fejer_riesz: factor degree {h_degree} != {d}; root pairing failed"
        )));
    }

    // Scale at the sample where |f| is largest; there the ratio is best
    // conditioned.
    let n = ((4 * d as usize).max(tol::GRID_MIN)).next_power_of_two();
    let mut best = (0.0f64, c64(1.0, 0.0));
    for j in 0..n {
        let z = grid_point(j, n);
        let v = f.eval(z);
        if v.norm() >= best.0 {
            best = (v.norm(), z);
        }
    }
    let z0 = best.1;
    let f0 = f.eval(z0);
    let h0 = h.eval(z0).norm_sqr();
    if f0.re <= 0.0 || h0 == 0.0 {
        return Err(Error::ConstructionFailure(
            "fejer_riesz: degenerate scale point".into(),
        ));
    }
    let kappa = (f0.re / h0).sqrt();
    h = h.scale(c64(kappa, 0.0));

    // rotate so h(0) is real and nonnegative
    let h_at_0 = h.coeff(0);
    if h_at_0.norm() > 0.0 {
        h = h.scale(h_at_0.conj() / c64(h_at_0.norm(), 0.0));
    }

    // postcondition: |h|^2 reproduces f on the grid
    let err = (0..n)
        .map(|j| {
            let z = grid_point(j, n);
            (h.eval(z).norm_sqr() - f.eval(z).re).abs()
        })
        .fold(0.0, f64::max);
    if err > tol::FEJER * (1.0 + scale) {
        return Err(Error::ConstructionFailure(format!(
            "fejer_riesz: factorization residual {err:.3e}"
        )));
    }
    Ok(h.trimmed())
}

/// The squared modulus `|p|^2` of an analytic polynomial as a Laurent
/// polynomial, i.e. `p(z) conj(p)(1/z)`.
pub fn abs_squared(p: &Poly) -> LaurentPoly {
    let lp = LaurentPoly::from_poly(p.clone());
    lp.mul(&lp.star())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_poly_eq(a: &Poly, b: &Poly, tol: f64) {
        let diff = a.sub(b);
        assert!(
            diff.scale_max() <= tol,
            "polynomials differ by {:.3e}: {:?} vs {:?}",
            diff.scale_max(),
            a,
            b
        );
    }

    #[test]
    fn boundary_double_zero() {
        // 2 + z + 1/z = |1 + z|^2
        let f = LaurentPoly::new(
            -1,
            Poly::from_coeffs(vec![c64(1.0, 0.0), c64(2.0, 0.0), c64(1.0, 0.0)]),
        );
        let h = fejer_riesz(&f).unwrap();
        assert_poly_eq(
            &h,
            &Poly::from_coeffs(vec![c64(1.0, 0.0), c64(1.0, 0.0)]),
            1e-7,
        );
    }

    #[test]
    fn off_circle_pair() {
        // |(1 - sqrt 2) + z|^2 factors as 1 - (sqrt 2 - 1) z with h(0) > 0.
        let a = 1.0 - 2.0f64.sqrt();
        let f = abs_squared(&Poly::from_coeffs(vec![c64(a, 0.0), c64(1.0, 0.0)]));
        let h = fejer_riesz(&f).unwrap();
        assert_poly_eq(
            &h,
            &Poly::from_coeffs(vec![c64(1.0, 0.0), c64(a, 0.0)]),
            1e-10,
        );
    }

    #[test]
    fn random_round_trip() {
        let p = Poly::from_coeffs(vec![
            c64(0.7, 0.3),
            c64(-1.2, 0.4),
            c64(0.1, -0.9),
            c64(0.5, 0.0),
        ]);
        let f = abs_squared(&p);
        let h = fejer_riesz(&f).unwrap();
        // |h| must match |p| on the circle even though the phases differ
        for j in 0..64 {
            let z = grid_point(j, 64);
            assert!((h.eval(z).norm() - p.eval(z).norm()).abs() < 1e-9);
        }
        assert!(h.coeff(0).im.abs() < 1e-12 && h.coeff(0).re >= 0.0);
    }

    #[test]
    fn odd_boundary_zero_rejected() {
        // (z - 1)(1/z - 1) (1 + z)... construct 1 - z only: not self-adjoint.
        let f = LaurentPoly::from_poly(Poly::from_coeffs(vec![c64(1.0, 0.0), c64(-1.0, 0.0)]));
        assert!(fejer_riesz(&f).is_err());
    }

    #[test]
    fn constant_symbol() {
        let f = LaurentPoly::constant(c64(4.0, 0.0));
        let h = fejer_riesz(&f).unwrap();
        assert_poly_eq(&h, &Poly::constant(c64(2.0, 0.0)), 1e-14);
    }
}
