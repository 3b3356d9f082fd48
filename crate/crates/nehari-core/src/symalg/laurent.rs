//! Matrix Laurent polynomials on the unit circle.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::symalg::grid::GridSymbol;
use crate::symalg::poly::{LaurentPoly, Poly};
use crate::{c64, tol, C64, CMat};

/// A finite matrix Laurent polynomial `sum_p A_p z^p`.
///
/// Canonical form: coefficients whose largest entry falls below `TRIM`
/// relative to the symbol's largest entry are dropped; the zero symbol has an
/// empty coefficient map and reports `lo() == hi() == 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    coeffs: BTreeMap<i64, CMat>,
}

impl LaurentMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        LaurentMatrix { rows, cols, coeffs: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(0, CMat::identity(n, n));
        LaurentMatrix { rows: n, cols: n, coeffs }
    }

    /// Builds from `(power, coefficient)` pairs; repeated powers accumulate.
    pub fn from_coeffs(
        rows: usize,
        cols: usize,
        parts: impl IntoIterator<Item = (i64, CMat)>,
    ) -> Result<Self> {
        let mut coeffs: BTreeMap<i64, CMat> = BTreeMap::new();
        for (p, m) in parts {
            if m.nrows() != rows || m.ncols() != cols {
                return Err(Error::ShapeMismatch(format!(
                    "coefficient at power {p} is {}x{}, symbol is {rows}x{cols}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            match coeffs.get_mut(&p) {
                Some(acc) => *acc += m,
                None => {
                    coeffs.insert(p, m);
                }
            }
        }
        Ok(LaurentMatrix { rows, cols, coeffs }.canonical())
    }

    /// Scalar (1x1) symbol from `(power, value)` pairs.
    pub fn scalar(parts: impl IntoIterator<Item = (i64, C64)>) -> Self {
        let iter = parts
            .into_iter()
            .map(|(p, v)| (p, CMat::from_element(1, 1, v)));
        LaurentMatrix::from_coeffs(1, 1, iter).expect("1x1 shapes always match")
    }

    /// Constant symbol.
    pub fn constant(m: CMat) -> Self {
        let (rows, cols) = (m.nrows(), m.ncols());
        LaurentMatrix::from_coeffs(rows, cols, [(0i64, m)]).expect("shape from matrix")
    }

    fn canonical(mut self) -> Self {
        let scale = self.scale_max();
        if scale == 0.0 {
            self.coeffs.clear();
            return self;
        }
        let cut = tol::TRIM * scale;
        self.coeffs.retain(|_, m| m.iter().any(|c| c.norm() >= cut));
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_scalar(&self) -> bool {
        self.rows == 1 && self.cols == 1
    }

    /// Lowest stored power (0 for the zero symbol).
    pub fn lo(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(0)
    }

    /// Highest stored power (0 for the zero symbol).
    pub fn hi(&self) -> i64 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    pub fn coeff(&self, power: i64) -> Option<&CMat> {
        self.coeffs.get(&power)
    }

    pub fn coeff_or_zero(&self, power: i64) -> CMat {
        self.coeffs
            .get(&power)
            .cloned()
            .unwrap_or_else(|| CMat::zeros(self.rows, self.cols))
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &CMat)> {
        self.coeffs.iter().map(|(&p, m)| (p, m))
    }

    pub fn scale_max(&self) -> f64 {
        self.coeffs
            .values()
            .flat_map(|m| m.iter())
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Evaluation at a point of the unit circle (`||z|-1| <= 1e-12`).
    pub fn evaluate(&self, z: C64) -> Result<CMat> {
        if (z.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "evaluation point {z} is off the unit circle"
            )));
        }
        Ok(self.eval_at(z))
    }

    /// Evaluation anywhere away from the origin (and at the origin when the
    /// symbol has no negative powers).
    pub fn eval_at(&self, z: C64) -> CMat {
        let mut acc = CMat::zeros(self.rows, self.cols);
        for (&p, m) in &self.coeffs {
            acc += m * z.powi(p as i32);
        }
        acc
    }

    pub fn add(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "add: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut coeffs = self.coeffs.clone();
        for (&p, m) in &other.coeffs {
            match coeffs.get_mut(&p) {
                Some(acc) => *acc += m,
                None => {
                    coeffs.insert(p, m.clone());
                }
            }
        }
        Ok(LaurentMatrix { rows: self.rows, cols: self.cols, coeffs }.canonical())
    }

    pub fn sub(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        self.add(&other.scale(c64(-1.0, 0.0)))
    }

    pub fn scale(&self, a: C64) -> LaurentMatrix {
        let coeffs = self.coeffs.iter().map(|(&p, m)| (p, m * a)).collect();
        LaurentMatrix { rows: self.rows, cols: self.cols, coeffs }.canonical()
    }

    /// Exact coefficient-level product.
    pub fn multiply(&self, other: &LaurentMatrix) -> Result<LaurentMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "multiply: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut coeffs: BTreeMap<i64, CMat> = BTreeMap::new();
        for (&p, a) in &self.coeffs {
            for (&q, b) in &other.coeffs {
                let prod = a * b;
                match coeffs.get_mut(&(p + q)) {
                    Some(acc) => *acc += prod,
                    None => {
                        coeffs.insert(p + q, prod);
                    }
                }
            }
        }
        Ok(LaurentMatrix { rows: self.rows, cols: other.cols, coeffs }.canonical())
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: i64) -> LaurentMatrix {
        let coeffs = self.coeffs.iter().map(|(&p, m)| (p + k, m.clone())).collect();
        LaurentMatrix { rows: self.rows, cols: self.cols, coeffs }
    }

    pub fn transpose(&self) -> LaurentMatrix {
        let coeffs = self.coeffs.iter().map(|(&p, m)| (p, m.transpose())).collect();
        LaurentMatrix { rows: self.cols, cols: self.rows, coeffs }
    }

    /// `A*(z) = A(1/conj(z))^H`: power reflection plus conjugate transpose.
    pub fn star(&self) -> LaurentMatrix {
        let coeffs = self.coeffs.iter().map(|(&p, m)| (-p, m.adjoint())).collect();
        LaurentMatrix { rows: self.cols, cols: self.rows, coeffs }
    }

    /// Entrywise conjugate as a function on the circle:
    /// `conj(A)(z) = conj(A(1/conj(z)))` (no transpose).
    pub fn conj_fn(&self) -> LaurentMatrix {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&p, m)| (-p, m.map(|c| c.conj())))
            .collect();
        LaurentMatrix { rows: self.rows, cols: self.cols, coeffs }
    }

    /// Strictly antianalytic part (powers < 0).
    pub fn antianalytic_part(&self) -> LaurentMatrix {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&p, _)| p < 0)
            .map(|(&p, m)| (p, m.clone()))
            .collect();
        LaurentMatrix { rows: self.rows, cols: self.cols, coeffs }
    }

    /// Analytic part (powers >= 0).
    pub fn analytic_part(&self) -> LaurentMatrix {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(&p, _)| p >= 0)
            .map(|(&p, m)| (p, m.clone()))
            .collect();
        LaurentMatrix { rows: self.rows, cols: self.cols, coeffs }
    }

    pub fn entry(&self, r: usize, c: usize) -> LaurentPoly {
        let mut acc = LaurentPoly::zero();
        for (&p, m) in &self.coeffs {
            let v = m[(r, c)];
            if v.norm() > 0.0 {
                acc = acc.add(&LaurentPoly::new(p, Poly::constant(v)));
            }
        }
        acc
    }

    pub fn from_entries(rows: usize, cols: usize, entries: &[LaurentPoly]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "from_entries: got {} entries for {rows}x{cols}",
                entries.len()
            )));
        }
        let mut coeffs: BTreeMap<i64, CMat> = BTreeMap::new();
        for (idx, e) in entries.iter().enumerate() {
            let (r, c) = (idx / cols, idx % cols);
            for (p, v) in e.coeffs() {
                coeffs
                    .entry(p)
                    .or_insert_with(|| CMat::zeros(rows, cols))[(r, c)] = v;
            }
        }
        Ok(LaurentMatrix { rows, cols, coeffs }.canonical())
    }

    /// Column vector symbol from scalar entries.
    pub fn column(entries: &[LaurentPoly]) -> Self {
        LaurentMatrix::from_entries(entries.len(), 1, entries).expect("shape by construction")
    }

    /// Smallest admissible alias-free grid for this symbol.
    pub fn min_grid(&self) -> usize {
        let span = (self.hi() - self.lo()).max(0) as usize;
        (2 * span + 2).max(tol::GRID_MIN).next_power_of_two()
    }

    /// Samples on the `n`-th roots of unity. `n` must be a power of two at
    /// least `2 (hi - lo) + 2`.
    pub fn to_grid(&self, n: usize) -> Result<GridSymbol> {
        GridSymbol::from_laurent(self, n)
    }

    /// Largest pointwise operator norm over the default-or-larger grid.
    pub fn sup_norm(&self) -> f64 {
        let n = self.min_grid().max(tol::GRID_DEFAULT);
        self.to_grid(n).expect("grid large enough").sup_norm()
    }

    /// `L^2` norm on the circle; by Parseval the Frobenius norm of the
    /// coefficient stack.
    pub fn l2_norm(&self) -> f64 {
        self.coeffs()
            .map(|(_, m)| m.iter().map(|c| c.norm_sqr()).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }

    /// `L^2` pairing `<self, other>` with the Frobenius inner product on
    /// values, i.e. the sum of `tr(other_p^H self_p)` over powers.
    pub fn l2_inner(&self, other: &LaurentMatrix) -> Result<C64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "l2_inner: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut acc = C64::new(0.0, 0.0);
        for (p, m) in self.coeffs() {
            if let Some(om) = other.coeff(p) {
                acc += m
                    .iter()
                    .zip(om.iter())
                    .map(|(a, b)| b.conj() * a)
                    .sum::<C64>();
            }
        }
        Ok(acc)
    }
}
