//! Rational symbols on the circle, with poles kept away from the boundary.

use crate::error::{Error, Result};
use crate::par;
use crate::symalg::grid::GridSymbol;
use crate::symalg::laurent::LaurentMatrix;
use crate::symalg::poly::{cluster_points, LaurentPoly, Poly};
use crate::{c64, tol, C64, CMat};

/// `z^lo p(z) / den(z)` with `den` monic, `den(0) != 0` and no denominator
/// roots within `BOUNDARY_POLE` of the unit circle. Origin poles live in the
/// numerator exponent; all other poles are denominator roots.
#[derive(Debug, Clone)]
pub struct RationalScalar {
    num: LaurentPoly,
    den: Poly,
}

impl RationalScalar {
    pub fn zero() -> Self {
        RationalScalar { num: LaurentPoly::zero(), den: Poly::one() }
    }

    pub fn constant(c: C64) -> Self {
        RationalScalar { num: LaurentPoly::constant(c), den: Poly::one() }
    }

    pub fn from_laurent(num: LaurentPoly) -> Self {
        RationalScalar { num, den: Poly::one() }
    }

    /// Builds and canonicalizes `num / den`.
    pub fn new(num: LaurentPoly, den: Poly) -> Result<Self> {
        RationalScalar { num, den }.canonical()
    }

    fn canonical(self) -> Result<Self> {
        let mut num = self.num.canonical();
        let mut den = self.den.trimmed();
        if den.is_zero() {
            return Err(Error::invalid("rational symbol with zero denominator"));
        }
        if num.is_zero() {
            return Ok(RationalScalar::zero());
        }
        // Exact origin roots of the denominator move into the exponent.
        let origin = den.0.iter().take_while(|c| c.norm() == 0.0).count();
        if origin > 0 {
            den.0.drain(0..origin);
            num.lo -= origin as i64;
        }
        if den.degree() == Some(0) {
            return Ok(RationalScalar {
                num: num.scale(c64(1.0, 0.0) / den.leading()),
                den: Poly::one(),
            });
        }

        // A denominator root cancels when the numerator vanishes there in
        // the value sense. Root positions of clustered factors are too
        // ill-conditioned to match against numerator roots, but the
        // numerator's value at them is stable, and synthetic division by a
        // near-root is then exact up to the dropped remainder.
        let den_lead = den.leading();
        let mut p = num.p.clone().trimmed();
        let mut new_den = den.clone();
        let mut kept_den: Vec<C64> = Vec::new();
        let mut cancelled = false;
        for r in den.roots()? {
            let bound: f64 = p
                .0
                .iter()
                .enumerate()
                .map(|(i, c)| c.norm() * r.norm().powi(i as i32))
                .sum();
            if p.degree().is_some_and(|d| d > 0) && p.eval(r).norm() <= tol::CANCEL * bound {
                // deflate the numerator at its own nearby root, not at the
                // denominator's smeared position, to keep the division
                // exact; the refinement must stay inside the local cluster
                // or it has converged to an unrelated root
                let refined = crate::symalg::poly::refine_root(&p, r, 1);
                let at = if (refined - r).norm() <= 1e-2 * (1.0 + r.norm())
                    && p.eval(refined).norm() < p.eval(r).norm()
                {
                    refined
                } else {
                    r
                };
                p = p.deflate(at);
                new_den = new_den.deflate(r);
                cancelled = true;
            } else {
                kept_den.push(r);
            }
        }

        let (num, den) = if cancelled {
            (
                LaurentPoly::new(num.lo, p.scale(c64(1.0, 0.0) / den_lead)),
                new_den.monic(),
            )
        } else {
            // No cancellation: keep exact coefficients, just normalize monic.
            (num.scale(c64(1.0, 0.0) / den_lead), den.monic())
        };

        for r in &kept_den {
            if (r.norm() - 1.0).abs() < tol::BOUNDARY_POLE {
                return Err(Error::invalid(format!(
                    "denominator root {r} within {} of the unit circle",
                    tol::BOUNDARY_POLE
                )));
            }
        }
        Ok(RationalScalar { num, den })
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator is trivial, i.e. the symbol is Laurent.
    pub fn is_laurent(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn add(&self, other: &RationalScalar) -> Result<RationalScalar> {
        let num = self
            .num
            .mul(&LaurentPoly::from_poly(other.den.clone()))
            .add(&other.num.mul(&LaurentPoly::from_poly(self.den.clone())));
        RationalScalar::new(num, self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &RationalScalar) -> Result<RationalScalar> {
        self.add(&other.scale(c64(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &RationalScalar) -> Result<RationalScalar> {
        RationalScalar::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, a: C64) -> RationalScalar {
        RationalScalar { num: self.num.scale(a), den: self.den.clone() }
    }

    /// `f*(z) = conj(f(1/conj(z)))`; poles reflect through the circle.
    pub fn star(&self) -> Result<RationalScalar> {
        if self.is_zero() {
            return Ok(RationalScalar::zero());
        }
        let d = self.den.degree().unwrap_or(0) as i64;
        let mut num = self.num.star();
        num.lo += d;
        RationalScalar::new(num, self.den.rev_conj())
    }

    /// Poles inside the open disc as `(location, multiplicity)`, ordered by
    /// ascending modulus then argument. Denominator roots indistinguishable
    /// from the origin merge with the exponent pole.
    pub fn poles_in_disc(&self) -> Result<Vec<(C64, usize)>> {
        let mut origin = (-self.num.lo).max(0) as usize;
        let mut inside: Vec<C64> = Vec::new();
        for r in self.den.roots()? {
            if r.norm() <= tol::ROOT_CLUSTER {
                origin += 1;
            } else if r.norm() < 1.0 {
                inside.push(r);
            }
        }
        let mut out: Vec<(C64, usize)> = Vec::new();
        if origin > 0 {
            out.push((C64::default(), origin));
        }
        out.extend(cluster_points(&inside, tol::ROOT_CLUSTER));
        sort_pole_order(&mut out);
        Ok(out)
    }

    /// `lim_{z->pole} (z - pole)^order f(z)` (with `(z - pole)` read as `z`
    /// at the origin). Entries whose local pole order is lower contribute
    /// zero.
    pub fn pole_leading(&self, pole: C64, order: usize) -> C64 {
        if self.is_zero() {
            return C64::default();
        }
        let at_origin = pole.norm() <= tol::ROOT_CLUSTER;
        let roots = match self.den.roots() {
            Ok(r) => r,
            Err(_) => return C64::default(),
        };
        let nearby: Vec<C64> = roots
            .into_iter()
            .filter(|r| (r - pole).norm() <= tol::ROOT_CLUSTER)
            .collect();
        let origin_extra = if at_origin { (-self.num.lo).max(0) as usize } else { 0 };
        if nearby.len() + origin_extra != order {
            return C64::default();
        }
        let mut deflated = self.den.clone();
        for r in &nearby {
            deflated = deflated.deflate(*r);
        }
        if at_origin {
            self.num.p.coeff(0) / deflated.eval(C64::default())
        } else {
            self.num.eval(pole) / deflated.eval(pole)
        }
    }

    /// Taylor coefficients at the origin, `count` of them, by power-series
    /// long division. Requires analyticity at `0`.
    pub fn taylor(&self, count: usize) -> Result<Vec<C64>> {
        if self.is_zero() {
            return Ok(vec![C64::default(); count]);
        }
        if self.num.lo < 0 {
            return Err(Error::invalid(
                "taylor: symbol has a pole at the origin",
            ));
        }
        let d0 = self.den.coeff(0);
        debug_assert!(d0.norm() > 0.0, "canonical denominator with den(0) = 0");
        let shift = self.num.lo as usize;
        let mut out = vec![C64::default(); count];
        for j in 0..count.saturating_sub(shift) {
            let mut acc = self.num.p.coeff(j);
            for i in 0..j {
                acc -= out[shift + i] * self.den.coeff(j - i);
            }
            out[shift + j] = acc / d0;
        }
        Ok(out)
    }

    /// Truncates to a Laurent window using grid Fourier bins. Fails when the
    /// rational tail has not decayed below `TAIL` at the window edge.
    pub fn truncate_to_laurent(&self, grid: usize) -> Result<LaurentPoly> {
        let g = self.to_grid_scalar(grid)?;
        let n = g.len();
        let bins = g.fourier_bins(0, 0);
        let scale = bins.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return Ok(LaurentPoly::zero());
        }
        let cut = tol::TAIL * scale;
        let half = (n / 2) as i64;
        let edge = (n / 4) as i64;
        let mut acc = LaurentPoly::zero();
        for (b, &v) in bins.iter().enumerate() {
            if v.norm() <= cut {
                continue;
            }
            let p = if (b as i64) < half { b as i64 } else { b as i64 - n as i64 };
            if p.abs() > edge {
                return Err(Error::ResolutionFailure(format!(
                    "rational tail still {:.3e} at power {p} on grid {n}",
                    v.norm()
                )));
            }
            acc = acc.add(&LaurentPoly::new(p, Poly::constant(v)));
        }
        Ok(acc)
    }

    fn to_grid_scalar(&self, n: usize) -> Result<GridSymbol> {
        let samples = par::map_indexed(n, |j| {
            let z = crate::symalg::grid::grid_point(j, n);
            CMat::from_element(1, 1, self.eval(z))
        });
        GridSymbol::new(1, 1, samples)
    }
}

pub(crate) fn sort_pole_order(poles: &mut [(C64, usize)]) {
    poles.sort_by(|(a, _), (b, _)| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap()
            .then(a.arg().partial_cmp(&b.arg()).unwrap())
    });
}

/// Merges per-entry `(pole, multiplicity)` lists: shared points cluster to a
/// common center and carry the largest per-entry multiplicity.
fn merge_pole_lists(per_entry: &[Vec<(C64, usize)>]) -> Vec<(C64, usize)> {
    let points: Vec<C64> = per_entry
        .iter()
        .flatten()
        .map(|(p, _)| *p)
        .collect();
    let clusters = cluster_points(&points, tol::ROOT_CLUSTER);
    let mut out: Vec<(C64, usize)> = Vec::new();
    for (center, _) in clusters {
        let mut mult = 0usize;
        for list in per_entry {
            let local: usize = list
                .iter()
                .filter(|(p, _)| (p - center).norm() <= 2.0 * tol::ROOT_CLUSTER)
                .map(|(_, m)| *m)
                .sum();
            mult = mult.max(local);
        }
        if mult > 0 {
            out.push((center, mult));
        }
    }
    sort_pole_order(&mut out);
    out
}

/// Matrix of rational scalars, row-major.
#[derive(Debug, Clone)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RationalScalar>,
}

impl RationalMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            entries: vec![RationalScalar::zero(); rows * cols],
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<RationalScalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "rational matrix: {} entries for {rows}x{cols}",
                entries.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn from_laurent(a: &LaurentMatrix) -> Self {
        let entries = (0..a.rows() * a.cols())
            .map(|idx| RationalScalar::from_laurent(a.entry(idx / a.cols(), idx % a.cols())))
            .collect();
        RationalMatrix { rows: a.rows(), cols: a.cols(), entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &RationalScalar {
        &self.entries[r * self.cols + c]
    }

    pub fn eval_at(&self, z: C64) -> CMat {
        let mut m = CMat::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(r, c)] = self.entry(r, c).eval(z);
            }
        }
        m
    }

    pub fn to_grid(&self, n: usize) -> Result<GridSymbol> {
        let samples = par::map_indexed(n, |j| self.eval_at(crate::symalg::grid::grid_point(j, n)));
        GridSymbol::new(self.rows, self.cols, samples)
    }

    pub fn add(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch("rational add".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        RationalMatrix::from_entries(self.rows, self.cols, entries)
    }

    pub fn sub(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        self.add(&other.scale(c64(-1.0, 0.0)))
    }

    pub fn scale(&self, a: C64) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e.scale(a)).collect(),
        }
    }

    pub fn matmul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch("rational matmul".into()));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = RationalScalar::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self.entry(r, k).mul(other.entry(k, c))?)?;
                }
                entries.push(acc);
            }
        }
        RationalMatrix::from_entries(self.rows, other.cols, entries)
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.entry(r, c).clone());
            }
        }
        RationalMatrix { rows: self.cols, cols: self.rows, entries }
    }

    pub fn star(&self) -> Result<RationalMatrix> {
        let t = self.transpose();
        let entries = t
            .entries
            .iter()
            .map(|e| e.star())
            .collect::<Result<Vec<_>>>()?;
        RationalMatrix::from_entries(t.rows, t.cols, entries)
    }

    /// Entrywise conjugate as a function (no transpose).
    pub fn conj_fn(&self) -> Result<RationalMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.star())
            .collect::<Result<Vec<_>>>()?;
        RationalMatrix::from_entries(self.rows, self.cols, entries)
    }

    /// Multiplies every entry by `z^k`.
    pub fn shift(&self, k: i64) -> RationalMatrix {
        let entries = self
            .entries
            .iter()
            .map(|e| RationalScalar {
                num: LaurentPoly::new(e.num.lo + k, e.num.p.clone()),
                den: e.den.clone(),
            })
            .collect();
        RationalMatrix { rows: self.rows, cols: self.cols, entries }
    }

    /// Disc poles of the matrix symbol: per-point multiplicity is the largest
    /// multiplicity over entries, points clustered across entries.
    pub fn poles_in_disc(&self) -> Result<Vec<(C64, usize)>> {
        let per_entry: Vec<Vec<(C64, usize)>> = self
            .entries
            .iter()
            .map(|e| e.poles_in_disc())
            .collect::<Result<_>>()?;
        Ok(merge_pole_lists(&per_entry))
    }

    /// Denominator roots outside the closed disc, clustered, with per-point
    /// max multiplicity over entries.
    pub fn poles_outside_disc(&self) -> Result<Vec<(C64, usize)>> {
        let per_entry: Vec<Vec<(C64, usize)>> = self
            .entries
            .iter()
            .map(|e| {
                let outside: Vec<C64> = e
                    .den()
                    .roots()?
                    .into_iter()
                    .filter(|r| r.norm() > 1.0)
                    .collect();
                Ok(cluster_points(&outside, tol::ROOT_CLUSTER))
            })
            .collect::<Result<_>>()?;
        Ok(merge_pole_lists(&per_entry))
    }

    /// Upper bound for the analytic degree of the polynomial numerator data.
    pub fn num_hi_bound(&self) -> i64 {
        self.entries
            .iter()
            .filter(|e| !e.is_zero())
            .map(|e| e.num().hi())
            .max()
            .unwrap_or(0)
    }

    /// Converts back to a Laurent matrix when all denominators are trivial.
    pub fn as_laurent(&self) -> Option<LaurentMatrix> {
        if !self.entries.iter().all(|e| e.is_laurent()) {
            return None;
        }
        let entries: Vec<LaurentPoly> = self.entries.iter().map(|e| e.num().clone()).collect();
        LaurentMatrix::from_entries(self.rows, self.cols, &entries).ok()
    }
}

/// A matrix symbol in either exact Laurent or rational form.
#[derive(Debug, Clone)]
pub enum MatrixSymbol {
    Laurent(LaurentMatrix),
    Rational(RationalMatrix),
}

impl From<LaurentMatrix> for MatrixSymbol {
    fn from(a: LaurentMatrix) -> Self {
        MatrixSymbol::Laurent(a)
    }
}

impl From<RationalMatrix> for MatrixSymbol {
    fn from(a: RationalMatrix) -> Self {
        MatrixSymbol::Rational(a)
    }
}

impl MatrixSymbol {
    pub fn rows(&self) -> usize {
        match self {
            MatrixSymbol::Laurent(a) => a.rows(),
            MatrixSymbol::Rational(a) => a.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            MatrixSymbol::Laurent(a) => a.cols(),
            MatrixSymbol::Rational(a) => a.cols(),
        }
    }

    pub fn eval_at(&self, z: C64) -> CMat {
        match self {
            MatrixSymbol::Laurent(a) => a.eval_at(z),
            MatrixSymbol::Rational(a) => a.eval_at(z),
        }
    }

    pub fn to_grid(&self, n: usize) -> Result<GridSymbol> {
        match self {
            MatrixSymbol::Laurent(a) => a.to_grid(n),
            MatrixSymbol::Rational(a) => a.to_grid(n),
        }
    }

    pub fn min_grid(&self) -> usize {
        match self {
            MatrixSymbol::Laurent(a) => a.min_grid(),
            MatrixSymbol::Rational(_) => tol::GRID_DEFAULT,
        }
    }

    pub fn to_rational(&self) -> RationalMatrix {
        match self {
            MatrixSymbol::Laurent(a) => RationalMatrix::from_laurent(a),
            MatrixSymbol::Rational(a) => a.clone(),
        }
    }

    pub fn as_laurent(&self) -> Option<LaurentMatrix> {
        match self {
            MatrixSymbol::Laurent(a) => Some(a.clone()),
            MatrixSymbol::Rational(a) => a.as_laurent(),
        }
    }

    pub fn star(&self) -> Result<MatrixSymbol> {
        Ok(match self {
            MatrixSymbol::Laurent(a) => MatrixSymbol::Laurent(a.star()),
            MatrixSymbol::Rational(a) => MatrixSymbol::Rational(a.star()?),
        })
    }

    pub fn transpose(&self) -> MatrixSymbol {
        match self {
            MatrixSymbol::Laurent(a) => MatrixSymbol::Laurent(a.transpose()),
            MatrixSymbol::Rational(a) => MatrixSymbol::Rational(a.transpose()),
        }
    }

    pub fn shift(&self, k: i64) -> MatrixSymbol {
        match self {
            MatrixSymbol::Laurent(a) => MatrixSymbol::Laurent(a.shift(k)),
            MatrixSymbol::Rational(a) => MatrixSymbol::Rational(a.shift(k)),
        }
    }

    pub fn sup_norm(&self) -> Result<f64> {
        let n = self.min_grid().max(tol::GRID_DEFAULT);
        Ok(self.to_grid(n)?.sup_norm())
    }

    pub fn poles_in_disc(&self) -> Result<Vec<(C64, usize)>> {
        match self {
            MatrixSymbol::Laurent(a) => {
                let order = (-a.lo()).max(0) as usize;
                Ok(if order > 0 { vec![(C64::default(), order)] } else { Vec::new() })
            }
            MatrixSymbol::Rational(a) => a.poles_in_disc(),
        }
    }

    pub fn poles_outside_disc(&self) -> Result<Vec<(C64, usize)>> {
        match self {
            MatrixSymbol::Laurent(_) => Ok(Vec::new()),
            MatrixSymbol::Rational(a) => a.poles_outside_disc(),
        }
    }

    /// Analytic-degree bound of the underlying numerator data.
    pub fn num_hi_bound(&self) -> i64 {
        match self {
            MatrixSymbol::Laurent(a) => a.hi().max(0),
            MatrixSymbol::Rational(a) => a.num_hi_bound().max(0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        c64(re, im)
    }

    #[test]
    fn cancellation_removes_shared_root() {
        // (z - 0.5)(z + 2) / (z - 0.5) -> z + 2
        let num = LaurentPoly::from_poly(Poly::from_roots(&[c(0.5, 0.0), c(-2.0, 0.0)], c(1.0, 0.0)));
        let den = Poly::from_roots(&[c(0.5, 0.0)], c(1.0, 0.0));
        let r = RationalScalar::new(num, den).unwrap();
        assert!(r.is_laurent());
        assert!((r.eval(c(1.0, 0.0)) - c(3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn origin_pole_moves_to_exponent() {
        // 1 / z: denominator root at 0 becomes num.lo = -1.
        let r = RationalScalar::new(
            LaurentPoly::constant(c(1.0, 0.0)),
            Poly::from_coeffs(vec![c(0.0, 0.0), c(1.0, 0.0)]),
        )
        .unwrap();
        assert!(r.is_laurent());
        assert_eq!(r.num().lo, -1);
        let poles = r.poles_in_disc().unwrap();
        assert_eq!(poles, vec![(C64::default(), 1)]);
    }

    #[test]
    fn circle_pole_is_rejected() {
        let den = Poly::from_roots(&[c(1.0, 0.0)], c(1.0, 0.0));
        assert!(RationalScalar::new(LaurentPoly::constant(c(1.0, 0.0)), den).is_err());
    }

    #[test]
    fn star_reflects_poles() {
        // 1/(z - 0.5): pole at 0.5; star pole at 2.
        let r = RationalScalar::new(
            LaurentPoly::constant(c(1.0, 0.0)),
            Poly::from_roots(&[c(0.5, 0.0)], c(1.0, 0.0)),
        )
        .unwrap();
        let s = r.star().unwrap();
        assert!(s.poles_in_disc().unwrap().is_empty());
        let roots = s.den().roots().unwrap();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - c(2.0, 0.0)).norm() < 1e-12);
        // Value check on the circle: s(z) = conj(r(1/conj z)).
        let z = c64(0.6, 0.8);
        assert!((s.eval(z) - r.eval(c64(1.0, 0.0) / z.conj()).conj()).norm() < 1e-12);
    }

    #[test]
    fn pole_leading_extracts_residue_scale() {
        // f = 3/(z - 0.4)^2: lim (z-0.4)^2 f = 3.
        let den = Poly::from_roots(&[c(0.4, 0.0), c(0.4, 0.0)], c(1.0, 0.0));
        let r = RationalScalar::new(LaurentPoly::constant(c(3.0, 0.0)), den).unwrap();
        assert!((r.pole_leading(c(0.4, 0.0), 2) - c(3.0, 0.0)).norm() < 1e-10);
        assert_eq!(r.pole_leading(c(0.4, 0.0), 1), C64::default());
    }

    #[test]
    fn taylor_series_of_geometric() {
        // z^2 / (1 - 0.5 z): coefficients 0, 0, 1, 0.5, 0.25, ...
        let r = RationalScalar::new(
            LaurentPoly::new(2, Poly::one()),
            Poly::from_coeffs(vec![c(1.0, 0.0), c(-0.5, 0.0)]),
        )
        .unwrap();
        let t = r.taylor(6).unwrap();
        let want = [0.0, 0.0, 1.0, 0.5, 0.25, 0.125];
        for (a, b) in t.iter().zip(want) {
            assert!((a - c(b, 0.0)).norm() < 1e-14);
        }
        // pole at the origin is refused
        let bad = RationalScalar::from_laurent(LaurentPoly::new(-1, Poly::one()));
        assert!(bad.taylor(3).is_err());
    }

    #[test]
    fn truncation_recovers_geometric_tail() {
        // 1/(1 - 0.5 z^-1) = sum_{k>=0} 0.5^k z^-k  (pole at 0.5)
        // Write as z/(z - 0.5).
        let r = RationalScalar::new(
            LaurentPoly::new(1, Poly::one()),
            Poly::from_roots(&[c(0.5, 0.0)], c(1.0, 0.0)),
        )
        .unwrap();
        let t = r.truncate_to_laurent(256).unwrap();
        assert!((t.coeff(0) - c(1.0, 0.0)).norm() < 1e-12);
        assert!((t.coeff(-3) - c(0.125, 0.0)).norm() < 1e-12);
        assert!(t.coeff(1).norm() < 1e-12);
    }

    #[test]
    fn matrix_star_is_pointwise_adjoint() {
        let a = RationalMatrix::from_laurent(&LaurentMatrix::scalar([(1, c(0.0, 1.0))]));
        let s = a.star().unwrap();
        let z = c64(0.0, 1.0);
        let direct = a.eval_at(z).adjoint();
        assert!((s.eval_at(z) - direct).norm() < 1e-13);
    }
}
