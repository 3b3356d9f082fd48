//! Finite Hankel and Toeplitz pictures of a Laurent symbol.
//!
//! For a symbol with lowest power `-N` the block Hankel matrix with blocks
//! `(i, j) -> coeff(-i-j-1)`, `0 <= i, j < N`, carries the full Hankel
//! operator: all omitted blocks vanish, so its singular values are exact.

use crate::error::{Error, Result};
use crate::symalg::LaurentMatrix;
use crate::{c64, tol, CMat, CVec};

/// Hankel depth: number of block rows/columns carrying data.
pub fn hankel_depth(sym: &LaurentMatrix) -> usize {
    (-sym.lo()).max(0) as usize
}

/// Block Hankel matrix of the symbol at its natural depth.
pub fn build_hankel(sym: &LaurentMatrix) -> CMat {
    build_hankel_depth(sym, hankel_depth(sym))
}

/// Block Hankel matrix with `depth` block rows and columns; block `(i, j)`
/// is `coeff(-i-j-1)`, rows stacked as `i * rows + r`.
pub fn build_hankel_depth(sym: &LaurentMatrix, depth: usize) -> CMat {
    let (m, n) = (sym.rows(), sym.cols());
    let mut h = CMat::zeros(depth * m, depth * n);
    for i in 0..depth {
        for j in 0..depth {
            if let Some(block) = sym.coeff(-(i as i64) - (j as i64) - 1) {
                h.view_mut((i * m, j * n), (m, n)).copy_from(block);
            }
        }
    }
    h
}

/// Block Toeplitz truncation: `blocks x blocks` blocks, block `(i, j)` is
/// `coeff(i - j)`.
pub fn toeplitz_truncation(sym: &LaurentMatrix, blocks: usize) -> CMat {
    let (m, n) = (sym.rows(), sym.cols());
    let mut t = CMat::zeros(blocks * m, blocks * n);
    for i in 0..blocks {
        for j in 0..blocks {
            if let Some(block) = sym.coeff(i as i64 - j as i64) {
                t.view_mut((i * m, j * n), (m, n)).copy_from(block);
            }
        }
    }
    t
}

/// Singular value decomposition with values descending and singular vectors
/// as matrix columns, `A = u diag(values) v^H`.
#[derive(Debug, Clone)]
pub struct SingularData {
    pub values: Vec<f64>,
    pub u: CMat,
    pub v: CMat,
}

impl SingularData {
    pub fn new(a: &CMat) -> Result<Self> {
        if a.is_empty() {
            return Ok(SingularData {
                values: Vec::new(),
                u: CMat::zeros(a.nrows(), 0),
                v: CMat::zeros(a.ncols(), 0),
            });
        }
        let svd = a.clone().svd(true, true);
        let u = svd.u.ok_or_else(|| Error::internal("svd: missing u"))?;
        let v_t = svd.v_t.ok_or_else(|| Error::internal("svd: missing v_t"))?;
        let raw: Vec<f64> = svd.singular_values.iter().copied().collect();
        // sort descending with a stable order, permuting vectors along
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&i, &j| raw[j].partial_cmp(&raw[i]).unwrap().then(i.cmp(&j)));
        let values: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
        let u = CMat::from_columns(&order.iter().map(|&i| u.column(i)).collect::<Vec<_>>());
        let v_full = v_t.adjoint();
        let v = CMat::from_columns(&order.iter().map(|&i| v_full.column(i)).collect::<Vec<_>>());
        Ok(SingularData { values, u, v })
    }

    /// `s_k`, reading values past the rank as exact zeros.
    pub fn value(&self, k: usize) -> f64 {
        self.values.get(k).copied().unwrap_or(0.0)
    }

    /// Largest value, `0` for an empty spectrum.
    pub fn scale(&self) -> f64 {
        self.value(0)
    }

    /// Index range of the cluster of values equal to `s_k` up to the relative
    /// clustering tolerance.
    pub fn cluster(&self, k: usize) -> std::ops::Range<usize> {
        let s = self.value(k);
        let tol = tol::SV_CLUSTER_REL * self.scale();
        let mut lo = k.min(self.values.len());
        while lo > 0 && (self.value(lo - 1) - s).abs() <= tol {
            lo -= 1;
        }
        let mut hi = k.min(self.values.len());
        while hi < self.values.len() && (self.value(hi) - s).abs() <= tol {
            hi += 1;
        }
        lo..hi
    }

    /// Multiplicity of `s_k` (cluster size).
    pub fn multiplicity(&self, k: usize) -> usize {
        self.cluster(k).len()
    }

    /// Fails unless the cluster of `s_k` starts at or after `k`, i.e. `s_k`
    /// is strictly below `s_{k-1}`.
    pub fn require_gap_below(&self, k: usize) -> Result<()> {
        if k > 0 && self.cluster(k).start < k {
            return Err(Error::GapViolation {
                k,
                reason: format!(
                    "s_{} = {:.6e} is not separated from s_{} = {:.6e}",
                    k - 1,
                    self.value(k - 1),
                    k,
                    self.value(k)
                ),
            });
        }
        Ok(())
    }
}

/// Singular data of the block Hankel matrix of `sym`; exact for Laurent
/// symbols since the truncation at the natural depth is lossless.
pub fn hankel_singular_data(sym: &LaurentMatrix) -> Result<SingularData> {
    SingularData::new(&build_hankel(sym))
}

/// Orthonormal basis of the right Schmidt space of the cluster of `s_k`:
/// singular vectors re-orthonormalized in cluster order, each rotated so its
/// largest-modulus entry is real positive. Verifies `A^H A v = s^2 v`
/// residuals against the matrix.
pub fn schmidt_space(a: &CMat, sd: &SingularData, k: usize) -> Result<Vec<CVec>> {
    let range = sd.cluster(k);
    if range.is_empty() || sd.value(k) == 0.0 {
        return Err(Error::DegenerateLevel {
            k,
            reason: "no positive singular value at this level".into(),
        });
    }
    let scale = sd.scale();
    let mut basis: Vec<CVec> = Vec::with_capacity(range.len());
    for j in range.clone() {
        let mut w: CVec = sd.v.column(j).into_owned();
        // modified Gram-Schmidt against the vectors already kept
        for b in &basis {
            let coef = b.dotc(&w);
            w -= b * coef;
        }
        let n = w.norm();
        if n < 1e-8 {
            return Err(Error::internal(format!(
                "schmidt_space: cluster vectors at level {k} are not independent"
            )));
        }
        w /= c64(n, 0.0);
        basis.push(fix_phase(w));
    }
    // residual check against the operator itself
    let gram = a.adjoint() * a;
    for (off, w) in basis.iter().enumerate() {
        let s = sd.value(range.start + off);
        let resid = (&gram * w - w * c64(s * s, 0.0)).norm();
        if resid > tol::SCHMIDT_RESID_REL * scale * scale {
            return Err(Error::internal(format!(
                "schmidt_space: residual {resid:.3e} at level {k} exceeds tolerance"
            )));
        }
    }
    Ok(basis)
}

/// Rotate a unit vector so its largest-modulus entry (first on ties) is real
/// and positive.
pub fn fix_phase(v: CVec) -> CVec {
    let mut best = (0usize, 0.0f64);
    for (i, c) in v.iter().enumerate() {
        if c.norm() > best.1 + 1e-14 {
            best = (i, c.norm());
        }
    }
    let pivot = v[best.0];
    if pivot.norm() == 0.0 {
        return v;
    }
    let phase = pivot.conj() / c64(pivot.norm(), 0.0);
    v * phase
}

/// Exact Hankel image `P_-(sym f)` of an analytic vector polynomial.
pub fn apply_hankel(sym: &LaurentMatrix, f: &LaurentMatrix) -> Result<LaurentMatrix> {
    if f.lo() < 0 {
        return Err(Error::invalid("apply_hankel: argument must be analytic"));
    }
    Ok(sym.multiply(f)?.antianalytic_part())
}

/// Exact Toeplitz image `P_+(sym f)` of an analytic vector polynomial.
pub fn apply_toeplitz(sym: &LaurentMatrix, f: &LaurentMatrix) -> Result<LaurentMatrix> {
    if f.lo() < 0 {
        return Err(Error::invalid("apply_toeplitz: argument must be analytic"));
    }
    Ok(sym.multiply(f)?.analytic_part())
}

/// The flip `(J f)^(q) = conj(f^(-q-1))`, an isometric involution exchanging
/// the analytic and antianalytic sides.
pub fn apply_flip(f: &LaurentMatrix) -> LaurentMatrix {
    f.conj_fn().shift(-1)
}

/// Stack the coefficients of an analytic vector polynomial into the column
/// vector the finite Hankel/Toeplitz matrices act on: block `j` holds
/// `f^(j)`, `0 <= j < depth`.
pub fn coeff_vector(f: &LaurentMatrix, depth: usize) -> Result<CVec> {
    if f.cols() != 1 {
        return Err(Error::invalid("coeff_vector: expected a column symbol"));
    }
    if !f.is_zero() && (f.lo() < 0 || f.hi() >= depth as i64) {
        return Err(Error::invalid(format!(
            "coeff_vector: powers [{}, {}] outside [0, {})",
            f.lo(),
            f.hi(),
            depth
        )));
    }
    let n = f.rows();
    let mut v = CVec::zeros(depth * n);
    for (p, m) in f.coeffs() {
        for r in 0..n {
            v[p as usize * n + r] = m[(r, 0)];
        }
    }
    Ok(v)
}

/// Inverse of [`coeff_vector`]: a stacked coefficient vector of block size
/// `rows` becomes an analytic column polynomial.
pub fn vector_symbol(v: &CVec, rows: usize) -> Result<LaurentMatrix> {
    if rows == 0 || v.len() % rows != 0 {
        return Err(Error::invalid(format!(
            "vector_symbol: length {} is not a multiple of {rows}",
            v.len()
        )));
    }
    let depth = v.len() / rows;
    let coeffs = (0..depth)
        .map(|j| {
            let m = CMat::from_fn(rows, 1, |r, _| v[j * rows + r]);
            (j as i64, m)
        })
        .collect::<Vec<_>>();
    LaurentMatrix::from_coeffs(rows, 1, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::{LaurentPoly, Poly};
    use crate::C64;

    fn c(re: f64, im: f64) -> C64 {
        c64(re, im)
    }

    fn scalar(coeffs: &[(i64, f64)]) -> LaurentMatrix {
        LaurentMatrix::scalar(coeffs.iter().map(|&(p, x)| (p, c(x, 0.0))))
    }

    #[test]
    fn hankel_of_two_pole_scalar() {
        // 2/z + 1/z^2: Hankel [[2, 1], [1, 0]], singular values sqrt2 +- 1
        let phi = scalar(&[(-1, 2.0), (-2, 1.0)]);
        let h = build_hankel(&phi);
        assert_eq!(h.nrows(), 2);
        assert_eq!(h[(0, 0)], c(2.0, 0.0));
        assert_eq!(h[(0, 1)], c(1.0, 0.0));
        assert_eq!(h[(1, 1)], c(0.0, 0.0));
        let sd = SingularData::new(&h).unwrap();
        let r2 = 2.0f64.sqrt();
        assert!((sd.value(0) - (r2 + 1.0)).abs() < 1e-14);
        assert!((sd.value(1) - (r2 - 1.0)).abs() < 1e-14);
        assert!(sd.value(2) == 0.0);
        assert_eq!(sd.multiplicity(0), 1);
    }

    #[test]
    fn hankel_of_cubic_scalar() {
        // 3/z + 1/z^3: values (3 + sqrt 13)/2, 1, (sqrt 13 - 3)/2
        let phi = scalar(&[(-1, 3.0), (-3, 1.0)]);
        let sd = hankel_singular_data(&phi).unwrap();
        let r13 = 13.0f64.sqrt();
        assert!((sd.value(0) - (3.0 + r13) / 2.0).abs() < 1e-13);
        assert!((sd.value(1) - 1.0).abs() < 1e-13);
        assert!((sd.value(2) - (r13 - 3.0) / 2.0).abs() < 1e-13);
    }

    #[test]
    fn transpose_preserves_singular_values() {
        let phi = LaurentMatrix::from_coeffs(
            2,
            2,
            vec![
                (-1, CMat::from_row_slice(2, 2, &[c(1.0, 0.5), c(0.0, 0.0), c(2.0, 0.0), c(0.3, 0.0)])),
                (-2, CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)])),
                (1, CMat::from_row_slice(2, 2, &[c(9.0, 0.0), c(9.0, 0.0), c(9.0, 0.0), c(9.0, 0.0)])),
            ],
        )
        .unwrap();
        let a = hankel_singular_data(&phi).unwrap();
        let b = hankel_singular_data(&phi.transpose()).unwrap();
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn matrix_action_matches_symbol_action() {
        let phi = LaurentMatrix::from_coeffs(
            2,
            2,
            vec![
                (-1, CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.5, -0.5), c(0.0, 2.0), c(1.0, 1.0)])),
                (-3, CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0), c(0.25, 0.0)])),
            ],
        )
        .unwrap();
        let depth = hankel_depth(&phi);
        let h = build_hankel(&phi);
        // f = (1 + 2z, -z^2)^t
        let f = LaurentMatrix::from_coeffs(
            2,
            1,
            vec![
                (0, CMat::from_row_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)])),
                (1, CMat::from_row_slice(2, 1, &[c(2.0, 0.0), c(0.0, 0.0)])),
                (2, CMat::from_row_slice(2, 1, &[c(0.0, 0.0), c(-1.0, 0.0)])),
            ],
        )
        .unwrap();
        let image = apply_hankel(&phi, &f).unwrap();
        // stacked coefficients of the image at powers -1, -2, -3
        let got = h * coeff_vector(&f, depth).unwrap();
        for i in 0..depth {
            let block = image.coeff_or_zero(-(i as i64) - 1);
            for r in 0..2 {
                assert!((got[i * 2 + r] - block[(r, 0)]).norm() < 1e-14);
            }
        }
        // Toeplitz side agrees too
        let t = toeplitz_truncation(&phi, depth + 2);
        let got_t = t * coeff_vector(&f, depth + 2).unwrap();
        let image_t = apply_toeplitz(&phi, &f).unwrap();
        for i in 0..depth + 2 {
            let block = image_t.coeff_or_zero(i as i64);
            for r in 0..2 {
                assert!((got_t[i * 2 + r] - block[(r, 0)]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn parseval_split() {
        let phi = scalar(&[(-2, 1.0), (-1, 0.5), (0, 2.0), (3, -1.0)]);
        let f = LaurentMatrix::column(&[LaurentPoly::from_poly(Poly::from_coeffs(vec![
            c(1.0, 0.0),
            c(0.0, -2.0),
            c(0.5, 0.5),
        ]))]);
        let prod = phi.multiply(&f).unwrap();
        let plus = prod.analytic_part();
        let minus = prod.antianalytic_part();
        let total = prod.l2_norm().powi(2);
        let split = plus.l2_norm().powi(2) + minus.l2_norm().powi(2);
        assert!((total - split).abs() < 1e-12 * total.max(1.0));
    }

    #[test]
    fn flip_is_an_isometric_involution() {
        let f = LaurentMatrix::from_coeffs(
            2,
            1,
            vec![
                (-2, CMat::from_row_slice(2, 1, &[c(1.0, 3.0), c(0.0, 0.0)])),
                (1, CMat::from_row_slice(2, 1, &[c(0.5, 0.0), c(-1.0, 2.0)])),
            ],
        )
        .unwrap();
        let jf = apply_flip(&f);
        // (J f)^(q) = conj(f^(-q-1)): power -2 lands at 1, power 1 at -2
        assert!((jf.coeff_or_zero(1)[(0, 0)] - c(1.0, -3.0)).norm() < 1e-15);
        assert!((jf.coeff_or_zero(-2)[(1, 0)] - c(-1.0, -2.0)).norm() < 1e-15);
        assert!((jf.l2_norm() - f.l2_norm()).abs() < 1e-14);
        let jjf = apply_flip(&jf);
        assert!(jjf.sub(&f).unwrap().scale_max() < 1e-15);
    }

    #[test]
    fn schmidt_space_is_orthonormal_and_deterministic() {
        // diag(1/z^2, 1/z) has singular values {1, 1, 1} and a 3-dim top cluster
        let phi = LaurentMatrix::from_coeffs(
            2,
            2,
            vec![
                (-2, CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])),
                (-1, CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])),
            ],
        )
        .unwrap();
        let h = build_hankel(&phi);
        let sd = SingularData::new(&h).unwrap();
        assert_eq!(sd.multiplicity(0), 3);
        let basis = schmidt_space(&h, &sd, 0).unwrap();
        let again = schmidt_space(&h, &sd, 0).unwrap();
        assert_eq!(basis.len(), 3);
        for (i, a) in basis.iter().enumerate() {
            assert!((again[i].clone() - a.clone()).norm() < 1e-15);
            for (j, b) in basis.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((b.dotc(a).norm() - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gap_guard_fires_inside_cluster() {
        let phi = scalar(&[(-1, 1.0), (-2, 0.0)]);
        // identity-like Hankel with a repeated value
        let sym = LaurentMatrix::from_coeffs(
            2,
            2,
            vec![(-1, CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]))],
        )
        .unwrap();
        let sd = hankel_singular_data(&sym).unwrap();
        assert_eq!(sd.multiplicity(0), 2);
        assert!(sd.require_gap_below(1).is_err());
        assert!(sd.require_gap_below(0).is_ok());
        let sd2 = hankel_singular_data(&phi).unwrap();
        assert!(sd2.require_gap_below(1).is_ok());
    }
}
