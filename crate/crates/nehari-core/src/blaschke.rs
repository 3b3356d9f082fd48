//! Blaschke-Potapov products and Hankel kernel carriers.
//!
//! A degree-`d` product `B = U F_1 ... F_d` of rank-one factors
//! `F(z) = b_l(z) x x^H + (I - x x^H)`, `b_l(z) = (z - l)/(1 - conj(l) z)`,
//! is unitary on the circle and analytic in the disc. For a meromorphic `Q`
//! with `d` disc poles (counted with matrix multiplicity) the carrier built
//! here makes `Q B` analytic, and `K_B = H^2 (-) B H^2` gets an explicit
//! orthonormal basis: membership `f` in `B H^2`, i.e. `H_Q f = 0`, reduces to
//! `d` scalar pairings.

use crate::error::{Error, Result};
use crate::hankel::{fix_phase, hankel_singular_data};
use crate::symalg::{LaurentPoly, MatrixSymbol, Poly, RationalMatrix, RationalScalar};
use crate::{c64, tol, C64, CMat, CVec};

/// Rank-one Blaschke-Potapov factor.
#[derive(Debug, Clone)]
pub struct BlaschkeFactor {
    pub lambda: C64,
    /// Unit direction carrying the elementary Blaschke function.
    pub x: CVec,
}

impl BlaschkeFactor {
    /// Value at `z` (any `z` except the reflected pole `1/conj(lambda)`).
    pub fn evaluate(&self, z: C64) -> CMat {
        let n = self.x.len();
        let b = (z - self.lambda) / (c64(1.0, 0.0) - self.lambda.conj() * z);
        let px = &self.x * self.x.adjoint();
        CMat::identity(n, n) + px * (b - c64(1.0, 0.0))
    }

    /// The factor as an exact rational symbol.
    pub fn as_rational(&self, n: usize) -> Result<RationalMatrix> {
        let b = RationalScalar::new(
            LaurentPoly::new(0, Poly::from_coeffs(vec![-self.lambda, c64(1.0, 0.0)])),
            Poly::from_coeffs(vec![c64(1.0, 0.0), -self.lambda.conj()]),
        )?;
        let mut entries = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                let p = self.x[r] * self.x[c].conj();
                let id = if r == c { c64(1.0, 0.0) } else { C64::default() };
                // id + p (b - 1)
                let e = RationalScalar::constant(id - p).add(&b.scale(p))?;
                entries.push(e);
            }
        }
        RationalMatrix::from_entries(n, n, entries)
    }
}

/// Finite Blaschke-Potapov product with a constant unitary front factor.
#[derive(Debug, Clone)]
pub struct BlaschkePotapovProduct {
    pub front: CMat,
    pub factors: Vec<BlaschkeFactor>,
}

impl BlaschkePotapovProduct {
    pub fn identity(n: usize) -> Self {
        BlaschkePotapovProduct {
            front: CMat::identity(n, n),
            factors: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.front.nrows()
    }

    /// Number of elementary factors; the McMillan degree of the product.
    pub fn degree(&self) -> usize {
        self.factors.len()
    }

    pub fn evaluate(&self, z: C64) -> CMat {
        let mut out = self.front.clone();
        for f in &self.factors {
            out *= f.evaluate(z);
        }
        out
    }

    /// Exact rational form of the whole product.
    pub fn as_rational(&self) -> Result<RationalMatrix> {
        let n = self.dim();
        let mut out = RationalMatrix::from_laurent(
            &crate::symalg::LaurentMatrix::constant(self.front.clone()),
        );
        for f in &self.factors {
            out = out.matmul(&f.as_rational(n)?)?;
        }
        Ok(out)
    }

    /// Largest deviation of `B(z)^H B(z)` from the identity over a grid.
    pub fn unitarity_defect(&self, samples: usize) -> f64 {
        let n = self.dim();
        (0..samples)
            .map(|j| {
                let z = crate::symalg::grid_point(j, samples);
                let b = self.evaluate(z);
                (b.adjoint() * &b - CMat::identity(n, n)).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Carrier of the Hankel kernel of a meromorphic symbol: a product `B` with
/// `Q B` analytic, together with the induced orthonormal basis of
/// `K_B = H^2 (-) B H^2`.
#[derive(Debug, Clone)]
pub struct PoleCarrier {
    pub product: BlaschkePotapovProduct,
    /// Orthonormal `g_j`, one per factor; `ker H_Q = B H^2` is exactly the
    /// set of `f` with `<f, g_j> = 0` for all `j`.
    pub g_basis: Vec<RationalMatrix>,
}

/// Total disc pole count of a symbol, multiplicity included.
pub fn disc_pole_count(q: &MatrixSymbol) -> Result<usize> {
    Ok(q.poles_in_disc()?.iter().map(|&(_, m)| m).sum())
}

/// Membership in the meromorphic class with at most `k` disc poles.
pub fn in_class(q: &MatrixSymbol, k: usize) -> Result<bool> {
    Ok(disc_pole_count(q)? <= k)
}

/// Build the pole carrier of `q` by peeling rank-one factors.
///
/// At each pole (ascending modulus, then argument) the factor direction is
/// the top right singular vector of the current leading Laurent coefficient;
/// every factor lowers that coefficient's rank by one, so the loop
/// terminates. Postconditions checked here: `B` unitary on the circle, `Q B`
/// free of antianalytic Fourier content, the `g` basis orthonormal, and the
/// degree equal to an independently computed Hankel rank of `Q`.
pub fn pole_carrier(q: &MatrixSymbol) -> Result<PoleCarrier> {
    let n = q.cols();
    let scale = q.sup_norm()?.max(1.0);
    let mut r = q.to_rational();
    let mut factors: Vec<BlaschkeFactor> = Vec::new();
    let original = r.poles_in_disc()?;
    let total: usize = original.iter().map(|&(_, m)| m).sum();
    let cap = total * n.max(1);

    for &(pole, _) in &original {
        loop {
            // locate the (possibly drifted) cluster of this pole in the
            // current remainder
            let current = r.poles_in_disc()?;
            let Some(&(lam, order)) = current
                .iter()
                .filter(|(p, _)| (p - pole).norm() < 1e-4)
                .min_by(|a, b| (a.0 - pole).norm().partial_cmp(&(b.0 - pole).norm()).unwrap())
            else {
                break;
            };
            if factors.len() >= cap {
                return Err(Error::ConstructionFailure(format!(
                    "pole carrier: {} factors without clearing {total} poles",
                    factors.len()
                )));
            }
            let leading = CMat::from_fn(r.rows(), n, |i, j| r.entry(i, j).pole_leading(lam, order));
            if leading.norm() <= 1e-12 * scale {
                return Err(Error::internal(format!(
                    "pole carrier: vanishing leading coefficient at {lam}"
                )));
            }
            let svd = leading.clone().svd(false, true);
            let v_t = svd.v_t.ok_or_else(|| Error::internal("svd: missing v_t"))?;
            let x = fix_phase(v_t.row(0).adjoint());
            let factor = BlaschkeFactor { lambda: lam, x };
            r = r.matmul(&factor.as_rational(n)?)?;
            factors.push(factor);
        }
    }

    let product = BlaschkePotapovProduct {
        front: CMat::identity(n, n),
        factors,
    };

    // postcondition: B unitary on the circle
    let defect = product.unitarity_defect(256);
    if defect > tol::UNITARITY {
        return Err(Error::internal(format!(
            "pole carrier: unitarity defect {defect:.3e}"
        )));
    }

    // postcondition: no antianalytic content is left in Q B
    let qb = q.to_rational().matmul(&product.as_rational()?)?;
    let resid = antianalytic_residual(&qb)? / scale;
    if resid > tol::CARRIER_RESID {
        return Err(Error::ConstructionFailure(format!(
            "pole carrier: Q B keeps antianalytic residual {resid:.3e}"
        )));
    }

    // independent degree check: the Hankel rank of Q
    let rank = hankel_rank(q)?;
    if rank != product.degree() {
        return Err(Error::InternalInconsistency(format!(
            "pole carrier degree {} != Hankel rank {rank}",
            product.degree()
        )));
    }

    // the g basis: g_j = sqrt(1 - |l_j|^2) (F_1 .. F_{j-1}) x_j / (1 - conj(l_j) z)
    let mut g_basis = Vec::with_capacity(product.degree());
    let mut partial = RationalMatrix::from_laurent(&crate::symalg::LaurentMatrix::constant(
        CMat::identity(n, n),
    ));
    for f in &product.factors {
        let weight = (1.0 - f.lambda.norm_sqr()).sqrt();
        let cayley = RationalScalar::new(
            LaurentPoly::new(0, Poly::constant(c64(weight, 0.0))),
            Poly::from_coeffs(vec![c64(1.0, 0.0), -f.lambda.conj()]),
        )?;
        let column = RationalMatrix::from_entries(
            n,
            1,
            f.x.iter().map(|&c| RationalScalar::constant(c)).collect(),
        )?;
        let g = scale_entries(&partial.matmul(&column)?, &cayley)?;
        g_basis.push(g);
        partial = partial.matmul(&f.as_rational(n)?)?;
    }

    // postcondition: the basis is orthonormal in H^2
    for (i, gi) in g_basis.iter().enumerate() {
        for (j, gj) in g_basis.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            let got = h2_pairing(gi, gj)?;
            if (got - c64(want, 0.0)).norm() > tol::UNITARITY {
                return Err(Error::internal(format!(
                    "pole carrier: <g_{i}, g_{j}> = {got} is off by more than {:.1e}",
                    tol::UNITARITY
                )));
            }
        }
    }

    Ok(PoleCarrier { product, g_basis })
}

/// The membership pairings `<f, g_j>` of an analytic column against the
/// carrier basis; all zero exactly when `f` lies in `B H^2 = ker H_Q`.
pub fn kernel_membership(f: &RationalMatrix, carrier: &PoleCarrier) -> Result<Vec<C64>> {
    carrier
        .g_basis
        .iter()
        .map(|g| h2_pairing(f, g))
        .collect()
}

/// `H^2` inner product `<f, g>` of analytic rational columns via Taylor
/// coefficients. The series is cut when both tails have decayed below `TAIL`
/// relative to the largest coefficient.
pub fn h2_pairing(f: &RationalMatrix, g: &RationalMatrix) -> Result<C64> {
    if f.cols() != 1 || g.cols() != 1 || f.rows() != g.rows() {
        return Err(Error::ShapeMismatch(format!(
            "h2_pairing: {}x{} vs {}x{}",
            f.rows(),
            f.cols(),
            g.rows(),
            g.cols()
        )));
    }
    let mut count = 64usize;
    loop {
        let mut acc = C64::default();
        let mut scale = 0.0f64;
        let mut tail = 0.0f64;
        for r in 0..f.rows() {
            let a = f.entry(r, 0).taylor(count)?;
            let b = g.entry(r, 0).taylor(count)?;
            for (x, y) in a.iter().zip(&b) {
                acc += y.conj() * x;
            }
            for v in a.iter().chain(&b) {
                scale = scale.max(v.norm());
            }
            // magnitude still present at the cut
            for v in a[count - 8..].iter().chain(&b[count - 8..]) {
                tail = tail.max(v.norm());
            }
        }
        if tail <= tol::TAIL * scale.max(1.0) || scale == 0.0 {
            return Ok(acc);
        }
        count *= 2;
        if count > 1 << 17 {
            return Err(Error::ResolutionFailure(
                "h2_pairing: Taylor tail does not decay; pole too close to the circle".into(),
            ));
        }
    }
}

/// Numeric Hankel rank of a symbol: singular values above `RANK_REL` of the
/// largest, computed from a Laurent truncation fine enough for the tails.
pub fn hankel_rank(q: &MatrixSymbol) -> Result<usize> {
    let laurent = match q.as_laurent() {
        Some(l) => l,
        None => rational_to_laurent(&q.to_rational())?,
    };
    let sd = hankel_singular_data(&laurent.antianalytic_part())?;
    let cut = tol::RANK_REL * sd.scale();
    Ok(sd.values.iter().filter(|&&s| s > cut).count())
}

/// Laurent truncation of a rational matrix on a grid fine enough for every
/// pole; geometric tails below `TAIL` are dropped.
pub fn rational_to_laurent(r: &RationalMatrix) -> Result<crate::symalg::LaurentMatrix> {
    let inside: f64 = r
        .poles_in_disc()?
        .iter()
        .map(|(p, _)| p.norm())
        .fold(0.0, f64::max);
    let outside: f64 = r
        .poles_outside_disc()?
        .iter()
        .map(|(p, _)| 1.0 / p.norm())
        .fold(0.0, f64::max);
    let n = quadrature_grid(inside.max(outside), r.num_hi_bound())?;
    let mut entries = Vec::with_capacity(r.rows() * r.cols());
    for i in 0..r.rows() {
        for j in 0..r.cols() {
            entries.push(r.entry(i, j).truncate_to_laurent(n)?);
        }
    }
    crate::symalg::LaurentMatrix::from_entries(r.rows(), r.cols(), &entries)
}

/// Grid size on which geometric tails with ratio `modulus` have decayed
/// below `TAIL` inside the alias-free window.
pub fn quadrature_grid(modulus: f64, span: i64) -> Result<usize> {
    let mut n = tol::GRID_MIN.max((2 * span.unsigned_abs() as usize + 2).next_power_of_two());
    if modulus > 0.0 {
        // need modulus^(n/4) <= TAIL
        let needed = (tol::TAIL.ln() / modulus.ln()).ceil();
        if !(needed.is_finite()) || needed < 0.0 {
            return Err(Error::ResolutionFailure(format!(
                "quadrature grid: pole modulus {modulus} leaves no window"
            )));
        }
        let needed = (4.0 * needed) as usize;
        while n < needed {
            n *= 2;
            if n > tol::GRID_CAP {
                return Err(Error::ResolutionFailure(format!(
                    "quadrature grid: pole modulus {modulus} needs more than {} samples",
                    tol::GRID_CAP
                )));
            }
        }
    }
    Ok(n)
}

/// Largest antianalytic Fourier coefficient of a rational symbol, measured
/// on a pole-aware grid.
pub fn antianalytic_residual(r: &RationalMatrix) -> Result<f64> {
    let inside: f64 = r
        .poles_in_disc()?
        .iter()
        .map(|(p, _)| p.norm())
        .fold(0.0, f64::max);
    let outside: f64 = r
        .poles_outside_disc()?
        .iter()
        .map(|(p, _)| 1.0 / p.norm())
        .fold(0.0, f64::max);
    let n = quadrature_grid(inside.max(outside), r.num_hi_bound())?;
    let g = r.to_grid(n)?;
    let half = n / 2;
    let mut worst = 0.0f64;
    for i in 0..r.rows() {
        for j in 0..r.cols() {
            let bins = g.fourier_bins(i, j);
            for (b, v) in bins.iter().enumerate() {
                if b >= half && b < n {
                    // powers b - n in [-n/2, -1]
                    worst = worst.max(v.norm());
                }
            }
        }
    }
    Ok(worst)
}

fn scale_entries(m: &RationalMatrix, s: &RationalScalar) -> Result<RationalMatrix> {
    let mut entries = Vec::with_capacity(m.rows() * m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            entries.push(m.entry(i, j).mul(s)?);
        }
    }
    RationalMatrix::from_entries(m.rows(), m.cols(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::{grid_point, LaurentMatrix};

    fn c(re: f64, im: f64) -> C64 {
        c64(re, im)
    }

    fn diag_symbol(entries: &[LaurentPoly]) -> MatrixSymbol {
        let n = entries.len();
        let mut all = vec![LaurentPoly::zero(); n * n];
        for (i, e) in entries.iter().enumerate() {
            all[i * n + i] = e.clone();
        }
        MatrixSymbol::from(LaurentMatrix::from_entries(n, n, &all).unwrap())
    }

    #[test]
    fn carrier_of_diagonal_origin_pole() {
        // Q = diag(1/(3z), 0): single origin pole, B = diag(z, 1), K_B = span e_1
        let q = diag_symbol(&[
            LaurentPoly::new(-1, Poly::constant(c(1.0 / 3.0, 0.0))),
            LaurentPoly::zero(),
        ]);
        let carrier = pole_carrier(&q).unwrap();
        assert_eq!(carrier.product.degree(), 1);
        assert_eq!(carrier.product.factors[0].lambda, C64::default());
        let z = c(0.6, 0.3);
        let b = carrier.product.evaluate(z);
        assert!((b[(0, 0)] - z).norm() < 1e-14);
        assert!((b[(1, 1)] - c(1.0, 0.0)).norm() < 1e-14);
        assert!(b[(0, 1)].norm() < 1e-14);
        // g_1 = e_1
        let g = &carrier.g_basis[0];
        assert!((g.entry(0, 0).eval(c(0.2, 0.1)) - c(1.0, 0.0)).norm() < 1e-14);
        assert!(g.entry(1, 0).is_zero());
    }

    #[test]
    fn carrier_clears_off_origin_pole() {
        // scalar q = 1/(z - 0.4): B = b_{0.4}, QB analytic
        let q = MatrixSymbol::from(
            RationalMatrix::from_entries(
                1,
                1,
                vec![RationalScalar::new(
                    LaurentPoly::new(0, Poly::one()),
                    Poly::from_coeffs(vec![c(-0.4, 0.0), c(1.0, 0.0)]),
                )
                .unwrap()],
            )
            .unwrap(),
        );
        let carrier = pole_carrier(&q).unwrap();
        assert_eq!(carrier.product.degree(), 1);
        assert!((carrier.product.factors[0].lambda - c(0.4, 0.0)).norm() < 1e-9);
        // membership: f = z - 0.4 is in ker H_q, f = 1 is not
        let member = RationalMatrix::from_entries(
            1,
            1,
            vec![RationalScalar::from_laurent(LaurentPoly::new(
                0,
                Poly::from_coeffs(vec![c(-0.4, 0.0), c(1.0, 0.0)]),
            ))],
        )
        .unwrap();
        let pair = kernel_membership(&member, &carrier).unwrap();
        assert!(pair[0].norm() < 1e-12);
        let non = RationalMatrix::from_entries(
            1,
            1,
            vec![RationalScalar::constant(c(1.0, 0.0))],
        )
        .unwrap();
        let pair = kernel_membership(&non, &carrier).unwrap();
        assert!(pair[0].norm() > 0.5);
    }

    #[test]
    fn double_pole_needs_two_factors() {
        // q = 1/z^2 (scalar): two factors at the origin, B = z^2
        let q = diag_symbol(&[LaurentPoly::new(-2, Poly::one())]);
        let carrier = pole_carrier(&q).unwrap();
        assert_eq!(carrier.product.degree(), 2);
        let z = c(0.3, -0.2);
        assert!((carrier.product.evaluate(z)[(0, 0)] - z * z).norm() < 1e-14);
        // g basis spans {1, z}
        assert_eq!(carrier.g_basis.len(), 2);
    }

    #[test]
    fn matrix_pole_of_rank_two() {
        // Q = diag(1/z, 1/z): leading coefficient has rank 2 at the origin
        let q = diag_symbol(&[
            LaurentPoly::new(-1, Poly::one()),
            LaurentPoly::new(-1, Poly::one()),
        ]);
        let carrier = pole_carrier(&q).unwrap();
        assert_eq!(carrier.product.degree(), 2);
        let z = c(0.5, 0.2);
        let b = carrier.product.evaluate(z);
        assert!((b[(0, 0)] - z).norm() < 1e-12 || (b[(0, 1)]).norm() > 0.0);
        // B must equal z I up to a constant unitary; check QB analytic via
        // the product value at 0 being finite: B(0) = 0
        assert!(carrier.product.evaluate(C64::default()).norm() < 1e-12);
    }

    #[test]
    fn unitary_on_circle_and_analytic() {
        let q = MatrixSymbol::from(
            RationalMatrix::from_entries(
                2,
                2,
                vec![
                    RationalScalar::new(
                        LaurentPoly::new(-1, Poly::one()),
                        Poly::from_coeffs(vec![c(-0.3, 0.1), c(1.0, 0.0)]),
                    )
                    .unwrap(),
                    RationalScalar::constant(c(0.5, 0.0)),
                    RationalScalar::zero(),
                    RationalScalar::new(
                        LaurentPoly::new(0, Poly::one()),
                        Poly::from_coeffs(vec![c(0.2, 0.4), c(1.0, 0.0)]),
                    )
                    .unwrap(),
                ],
            )
            .unwrap(),
        );
        let carrier = pole_carrier(&q).unwrap();
        // origin (1) + 0.3-0.1i (1) + -0.2-0.4i (1)
        assert_eq!(carrier.product.degree(), 3);
        assert!(carrier.product.unitarity_defect(128) < 1e-10);
        for j in 0..8 {
            let z = grid_point(j, 8);
            let b = carrier.product.evaluate(z);
            assert!(((&b * b.adjoint()) - CMat::identity(2, 2)).norm() < 1e-10);
        }
    }
}
