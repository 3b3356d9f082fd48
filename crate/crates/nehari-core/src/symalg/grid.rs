//! Sampled symbols on dyadic circle grids, FFT-linked to coefficients.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::par;
use crate::symalg::laurent::LaurentMatrix;
use crate::{c64, tol, C64, CMat};

fn fft_plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    static PLANS: OnceLock<Mutex<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> = OnceLock::new();
    let key = (n, matches!(direction, FftDirection::Forward));
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut cache = cache.lock().expect("fft plan cache");
    cache
        .entry(key)
        .or_insert_with(|| FftPlanner::new().plan_fft(n, direction))
        .clone()
}

/// Unnormalized DFT: `X_k = sum_j x_j e^{-2 pi i jk/n}`.
pub(crate) fn dft_forward(data: &mut [C64]) {
    fft_plan(data.len(), FftDirection::Forward).process(data);
}

/// Unnormalized inverse DFT: `x_j = sum_k X_k e^{+2 pi i jk/n}`.
pub(crate) fn dft_inverse(data: &mut [C64]) {
    fft_plan(data.len(), FftDirection::Inverse).process(data);
}

/// The `j`-th node `exp(2 pi i j / n)` of the dyadic grid.
pub fn grid_point(j: usize, n: usize) -> C64 {
    let theta = 2.0 * std::f64::consts::PI * (j as f64) / (n as f64);
    c64(theta.cos(), theta.sin())
}

fn check_grid_size(n: usize) -> Result<()> {
    if !n.is_power_of_two() || n < tol::GRID_MIN {
        return Err(Error::invalid(format!(
            "grid size {n} must be a power of two, at least {}",
            tol::GRID_MIN
        )));
    }
    Ok(())
}

/// A matrix symbol sampled at the `n`-th roots of unity, with quadrature
/// weight `1/n` per node.
#[derive(Debug, Clone)]
pub struct GridSymbol {
    rows: usize,
    cols: usize,
    samples: Vec<CMat>,
}

impl GridSymbol {
    pub fn new(rows: usize, cols: usize, samples: Vec<CMat>) -> Result<Self> {
        check_grid_size(samples.len())?;
        if samples.iter().any(|m| m.nrows() != rows || m.ncols() != cols) {
            return Err(Error::ShapeMismatch("grid sample shape".into()));
        }
        Ok(GridSymbol { rows, cols, samples })
    }

    /// Samples a Laurent symbol. Requires `n >= 2 (hi - lo) + 2` so the
    /// coefficient window is alias-free.
    pub fn from_laurent(a: &LaurentMatrix, n: usize) -> Result<Self> {
        check_grid_size(n)?;
        let span = (a.hi() - a.lo()).max(0) as usize;
        if n < 2 * span + 2 {
            return Err(Error::invalid(format!(
                "grid size {n} vs coefficient span {span}: need n >= {}",
                2 * span + 2
            )));
        }
        let (rows, cols) = (a.rows(), a.cols());
        let mut samples = vec![CMat::zeros(rows, cols); n];
        let mut bins = vec![C64::default(); n];
        for r in 0..rows {
            for c in 0..cols {
                bins.iter_mut().for_each(|b| *b = C64::default());
                for (p, m) in a.coeffs() {
                    bins[p.rem_euclid(n as i64) as usize] += m[(r, c)];
                }
                dft_inverse(&mut bins);
                for (j, b) in bins.iter().enumerate() {
                    samples[j][(r, c)] = *b;
                }
            }
        }
        Ok(GridSymbol { rows, cols, samples })
    }

    /// Recovers Laurent coefficients supported on `lo..=hi`. The window must
    /// be alias-free for the grid: `n >= 2 (hi - lo) + 2`.
    pub fn to_laurent(&self, lo: i64, hi: i64) -> Result<LaurentMatrix> {
        if lo > hi {
            return Err(Error::invalid("to_laurent: lo > hi"));
        }
        let n = self.len();
        if (n as i64) < 2 * (hi - lo) + 2 {
            return Err(Error::invalid(format!(
                "window [{lo}, {hi}] too wide for grid size {n}"
            )));
        }
        let mut parts: Vec<(i64, CMat)> = (lo..=hi)
            .map(|p| (p, CMat::zeros(self.rows, self.cols)))
            .collect();
        let mut bins = vec![C64::default(); n];
        for r in 0..self.rows {
            for c in 0..self.cols {
                for (j, b) in bins.iter_mut().enumerate() {
                    *b = self.samples[j][(r, c)];
                }
                dft_forward(&mut bins);
                for (idx, p) in (lo..=hi).enumerate() {
                    parts[idx].1[(r, c)] =
                        bins[p.rem_euclid(n as i64) as usize] / c64(n as f64, 0.0);
                }
            }
        }
        LaurentMatrix::from_coeffs(self.rows, self.cols, parts)
    }

    /// Raw Fourier bins (mean-normalized), bin `b` collecting powers
    /// congruent to `b` mod `n`.
    pub fn fourier_bins(&self, r: usize, c: usize) -> Vec<C64> {
        let n = self.len();
        let mut bins: Vec<C64> = self.samples.iter().map(|m| m[(r, c)]).collect();
        dft_forward(&mut bins);
        bins.iter_mut().for_each(|b| *b /= c64(n as f64, 0.0));
        bins
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample(&self, j: usize) -> &CMat {
        &self.samples[j]
    }

    pub fn samples(&self) -> &[CMat] {
        &self.samples
    }

    pub fn map(&self, f: impl Fn(&CMat) -> CMat + Sync + Send) -> Result<GridSymbol> {
        let out = par::map_slice(&self.samples, |m| f(m));
        let rows = out.first().map(|m| m.nrows()).unwrap_or(0);
        let cols = out.first().map(|m| m.ncols()).unwrap_or(0);
        GridSymbol::new(rows, cols, out)
    }

    pub fn sub(&self, other: &GridSymbol) -> Result<GridSymbol> {
        if self.rows != other.rows || self.cols != other.cols || self.len() != other.len() {
            return Err(Error::ShapeMismatch("grid sub".into()));
        }
        let samples = par::map_indexed(self.len(), |j| &self.samples[j] - &other.samples[j]);
        GridSymbol::new(self.rows, self.cols, samples)
    }

    pub fn matmul(&self, other: &GridSymbol) -> Result<GridSymbol> {
        if self.cols != other.rows || self.len() != other.len() {
            return Err(Error::ShapeMismatch("grid matmul".into()));
        }
        let samples = par::map_indexed(self.len(), |j| &self.samples[j] * &other.samples[j]);
        GridSymbol::new(self.rows, other.cols, samples)
    }

    /// Pointwise singular values, descending at each node.
    pub fn pointwise_singular_values(&self) -> Vec<Vec<f64>> {
        par::map_slice(&self.samples, |m| {
            let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
            sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
            sv
        })
    }

    /// Largest pointwise operator norm over the grid.
    pub fn sup_norm(&self) -> f64 {
        self.pointwise_singular_values()
            .iter()
            .map(|sv| sv.first().copied().unwrap_or(0.0))
            .fold(0.0, f64::max)
    }

    /// Grid mean and standard deviation of each pointwise singular value.
    pub fn pointwise_value_stats(&self) -> (Vec<f64>, Vec<f64>) {
        let all = self.pointwise_singular_values();
        let levels = all.first().map_or(0, Vec::len);
        let n = all.len().max(1) as f64;
        let mut mean = vec![0.0f64; levels];
        let mut var = vec![0.0f64; levels];
        for sv in &all {
            for (i, v) in sv.iter().enumerate() {
                mean[i] += v;
            }
        }
        for m in mean.iter_mut() {
            *m /= n;
        }
        for sv in &all {
            for (i, v) in sv.iter().enumerate() {
                var[i] += (v - mean[i]) * (v - mean[i]);
            }
        }
        let std = var.iter().map(|v| (v / n).sqrt()).collect();
        (mean, std)
    }

    /// Scalar samples of a 1x1 grid.
    pub fn scalar_samples(&self) -> Result<Vec<C64>> {
        if self.rows != 1 || self.cols != 1 {
            return Err(Error::ShapeMismatch("scalar_samples on non-scalar grid".into()));
        }
        Ok(self.samples.iter().map(|m| m[(0, 0)]).collect())
    }

    /// Pointwise determinant as a scalar grid.
    pub fn determinant(&self) -> Result<GridSymbol> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch("determinant of non-square grid".into()));
        }
        let samples = par::map_slice(&self.samples, |m| {
            CMat::from_element(1, 1, m.clone().lu().determinant())
        });
        GridSymbol::new(1, 1, samples)
    }

    /// `L^2(T)` inner product `<f, g> = mean_j g(z_j)^H f(z_j)` for column
    /// vector grids.
    pub fn inner(&self, other: &GridSymbol) -> Result<C64> {
        if self.cols != 1 || other.cols != 1 || self.rows != other.rows || self.len() != other.len()
        {
            return Err(Error::ShapeMismatch("inner product shapes".into()));
        }
        let mut acc = C64::default();
        for j in 0..self.len() {
            acc += (other.samples[j].adjoint() * &self.samples[j])[(0, 0)];
        }
        Ok(acc / c64(self.len() as f64, 0.0))
    }

    /// `L^2(T)` norm of a column vector grid.
    pub fn norm_l2(&self) -> f64 {
        let mut acc = 0.0;
        for m in &self.samples {
            acc += m.iter().map(|c| c.norm_sqr()).sum::<f64>();
        }
        (acc / self.len() as f64).sqrt()
    }
}

/// Round trip guard: `to_grid` then `to_laurent` must reproduce coefficients.
pub fn round_trip_check(a: &LaurentMatrix, n: usize) -> Result<f64> {
    let g = a.to_grid(n)?;
    let back = g.to_laurent(a.lo().min(0), a.hi().max(0))?;
    let diff = a.sub(&back)?;
    Ok(diff.scale_max())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        c64(re, im)
    }

    #[test]
    fn grid_round_trip_is_tight() {
        let a = LaurentMatrix::scalar([
            (-3, c(0.5, -0.25)),
            (-1, c(2.0, 0.0)),
            (0, c(-1.0, 1.0)),
            (2, c(0.0, 3.0)),
        ]);
        let err = round_trip_check(&a, 64).unwrap();
        assert!(err < tol::GRID_ROUNDTRIP, "round trip error {err}");
    }

    #[test]
    fn grid_rejects_aliased_window() {
        let a = LaurentMatrix::scalar((-40..40).map(|p| (p, c(1.0, 0.0))));
        assert!(a.to_grid(64).is_err());
        assert!(a.to_grid(256).is_ok());
    }

    #[test]
    fn sampling_matches_direct_evaluation() {
        let a = LaurentMatrix::scalar([(-2, c(1.0, 1.0)), (1, c(0.0, -2.0))]);
        let g = a.to_grid(64).unwrap();
        for j in [0usize, 7, 33] {
            let z = grid_point(j, 64);
            let direct = a.eval_at(z)[(0, 0)];
            let sampled = g.sample(j)[(0, 0)];
            assert!((direct - sampled).norm() < 1e-12);
        }
    }

    #[test]
    fn quadrature_inner_product_matches_coefficients() {
        // <z e1, z e1> = 1, <z e1, e1> = 0
        let f = LaurentMatrix::from_coeffs(
            2,
            1,
            [(1, CMat::from_column_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]))],
        )
        .unwrap();
        let e = LaurentMatrix::from_coeffs(
            2,
            1,
            [(0, CMat::from_column_slice(2, 1, &[c(1.0, 0.0), c(0.0, 0.0)]))],
        )
        .unwrap();
        let gf = f.to_grid(64).unwrap();
        let ge = e.to_grid(64).unwrap();
        assert!((gf.inner(&gf).unwrap() - c(1.0, 0.0)).norm() < 1e-13);
        assert!(gf.inner(&ge).unwrap().norm() < 1e-13);
    }
}
