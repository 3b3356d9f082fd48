//! Dense scalar polynomials and Laurent polynomials over `C64`.
//!
//! `Poly` stores ascending coefficients with the zero polynomial represented
//! by an empty vector. `LaurentPoly` is `z^lo * p(z)` with `p(0) != 0`, so
//! origin zeros and poles live in the exponent `lo`.

use crate::error::{Error, Result};
use crate::{c64, tol, C64, CMat};

#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<C64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: C64) -> Self {
        Poly(vec![c]).trimmed()
    }

    pub fn one() -> Self {
        Poly(vec![c64(1.0, 0.0)])
    }

    pub fn from_coeffs(coeffs: Vec<C64>) -> Self {
        Poly(coeffs).trimmed()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn leading(&self) -> C64 {
        self.0.last().copied().unwrap_or_default()
    }

    pub fn coeff(&self, i: usize) -> C64 {
        self.0.get(i).copied().unwrap_or_default()
    }

    pub fn scale_max(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops coefficients below `TRIM` relative to the largest one.
    pub fn trimmed(mut self) -> Self {
        let scale = self.scale_max();
        if scale == 0.0 {
            return Poly(Vec::new());
        }
        let cut = tol::TRIM * scale;
        for c in self.0.iter_mut() {
            if c.norm() < cut {
                *c = C64::default();
            }
        }
        while self.0.last().map(|c| c.norm() == 0.0).unwrap_or(false) {
            self.0.pop();
        }
        self
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut acc = C64::default();
        for &c in self.0.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        Poly(
            self.0[1..]
                .iter()
                .enumerate()
                .map(|(i, &c)| c * c64((i + 1) as f64, 0.0))
                .collect(),
        )
    }

    /// Value of the `k`-th derivative at `z` (raw, no factorial scaling).
    pub fn derivative_at(&self, z: C64, k: usize) -> C64 {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.derivative();
        }
        p.eval(z)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![C64::default(); n];
        for (i, &c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, &c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Poly(out).trimmed()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(c64(-1.0, 0.0)))
    }

    pub fn scale(&self, a: C64) -> Poly {
        Poly(self.0.iter().map(|&c| c * a).collect()).trimmed()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C64::default(); self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).trimmed()
    }

    /// Multiplies by `z^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![C64::default(); k];
        out.extend_from_slice(&self.0);
        Poly(out)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(c64(1.0, 0.0) / self.leading())
    }

    /// `prod (z - r_i)` scaled by `lead`.
    pub fn from_roots(roots: &[C64], lead: C64) -> Poly {
        let mut p = Poly(vec![lead]);
        for &r in roots {
            let next = p.shift_up(1).sub(&p.scale(r));
            p = next;
        }
        p
    }

    /// Deflation by `(z - r)`; returns the quotient, discarding the remainder.
    pub fn deflate(&self, r: C64) -> Poly {
        if self.0.len() <= 1 {
            return Poly::zero();
        }
        let n = self.0.len() - 1;
        let mut q = vec![C64::default(); n];
        let mut acc = self.0[n];
        for i in (0..n).rev() {
            q[i] = acc;
            acc = self.0[i] + acc * r;
        }
        Poly(q).trimmed()
    }

    /// Reversed-conjugate polynomial `z^deg * conj(p(1/conj(z)))`.
    pub fn rev_conj(&self) -> Poly {
        Poly(self.0.iter().rev().map(|c| c.conj()).collect()).trimmed()
    }

    /// All roots, via the companion matrix. Origin roots are split off
    /// structurally before the eigenvalue iteration.
    pub fn roots(&self) -> Result<Vec<C64>> {
        let p = self.clone().trimmed();
        let deg = match p.degree() {
            None | Some(0) => return Ok(Vec::new()),
            Some(d) => d,
        };
        let mut origin = 0usize;
        let mut body = p.0.clone();
        while origin < deg && body[origin].norm() == 0.0 {
            origin += 1;
        }
        let mut roots = vec![C64::default(); origin];
        let coeffs = &body.split_off(origin);
        let n = coeffs.len() - 1;
        if n == 0 {
            return Ok(roots);
        }
        if n == 1 {
            roots.push(-coeffs[0] / coeffs[1]);
            return Ok(roots);
        }
        let lead = coeffs[n];
        let mut m = CMat::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = c64(1.0, 0.0);
        }
        for i in 0..n {
            m[(i, n - 1)] = -coeffs[i] / lead;
        }
        let schur = m
            .try_schur(1e-14, 200_000)
            .ok_or_else(|| Error::ConstructionFailure("companion eigenvalue iteration failed".into()))?;
        let t = schur.unpack().1;
        for i in 0..n {
            roots.push(t[(i, i)]);
        }
        // Deterministic order for downstream clustering.
        roots.sort_by(|a, b| {
            a.norm()
                .partial_cmp(&b.norm())
                .unwrap()
                .then(a.re.partial_cmp(&b.re).unwrap())
                .then(a.im.partial_cmp(&b.im).unwrap())
        });
        Ok(roots)
    }
}

/// Greedy clustering of a root list; returns `(center, multiplicity)` pairs
/// in deterministic order. Two roots join a cluster when they are within
/// `radius` of its current centroid.
pub fn cluster_points(points: &[C64], radius: f64) -> Vec<(C64, usize)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap()
            .then(a.re.partial_cmp(&b.re).unwrap())
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    let mut clusters: Vec<(C64, usize)> = Vec::new();
    for p in pts {
        match clusters
            .iter_mut()
            .find(|(center, _)| (p - *center).norm() <= radius)
        {
            Some((center, count)) => {
                // Running centroid keeps the cluster anchored between merges.
                let n = *count as f64;
                *center = (*center * c64(n, 0.0) + p) / c64(n + 1.0, 0.0);
                *count += 1;
            }
            None => clusters.push((p, 1)),
        }
    }
    clusters
}

/// Modified Newton step for a root of known multiplicity; tightens cluster
/// centroids whose raw eigenvalue scatter exceeds the cluster radius.
pub fn refine_root(p: &Poly, x0: C64, multiplicity: usize) -> C64 {
    // Evaluating p near a multiplicity-m root only resolves the root to
    // eps^(1/m), so Newton runs on the (m-1)-th derivative instead, where the
    // root is simple and full precision is reachable.
    let mut q = p.clone();
    for _ in 1..multiplicity {
        q = q.derivative();
    }
    let dq = q.derivative();
    let mut x = x0;
    for _ in 0..30 {
        let d = dq.eval(x);
        if d.norm() == 0.0 {
            break;
        }
        let step = q.eval(x) / d;
        x -= step;
        if step.norm() <= 1e-15 * (1.0 + x.norm()) {
            break;
        }
    }
    if (x - x0).norm() <= 10.0 * tol::ROOT_CLUSTER {
        x
    } else {
        x0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly {
    pub lo: i64,
    pub p: Poly,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { lo: 0, p: Poly::zero() }
    }

    pub fn constant(c: C64) -> Self {
        LaurentPoly { lo: 0, p: Poly::constant(c) }.canonical()
    }

    pub fn from_poly(p: Poly) -> Self {
        LaurentPoly { lo: 0, p }.canonical()
    }

    pub fn new(lo: i64, p: Poly) -> Self {
        LaurentPoly { lo, p }.canonical()
    }

    /// Strips origin zeros of `p` into the exponent.
    pub fn canonical(mut self) -> Self {
        self.p = self.p.trimmed();
        if self.p.is_zero() {
            return LaurentPoly::zero();
        }
        let mut k = 0usize;
        while self.p.0[k].norm() == 0.0 {
            k += 1;
        }
        if k > 0 {
            self.p.0.drain(0..k);
            self.lo += k as i64;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero()
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.p.degree().unwrap_or(0) as i64
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.p.eval(z) * z.powi(self.lo as i32)
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        LaurentPoly::new(self.lo + other.lo, self.p.mul(&other.p))
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let a = self.p.shift_up((self.lo - lo) as usize);
        let b = other.p.shift_up((other.lo - lo) as usize);
        LaurentPoly::new(lo, a.add(&b))
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.scale(c64(-1.0, 0.0)))
    }

    pub fn scale(&self, a: C64) -> LaurentPoly {
        LaurentPoly::new(self.lo, self.p.scale(a))
    }

    /// `f*(z) = conj(f(1/conj(z)))`.
    pub fn star(&self) -> LaurentPoly {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let deg = self.p.degree().unwrap_or(0) as i64;
        LaurentPoly::new(-self.lo - deg, self.p.rev_conj())
    }

    pub fn coeff(&self, power: i64) -> C64 {
        if self.is_zero() || power < self.lo || power > self.hi() {
            C64::default()
        } else {
            self.p.coeff((power - self.lo) as usize)
        }
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.p
            .0
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(move |(i, &c)| (self.lo + i as i64, c))
    }
}
