//! Exact kernels of block Toeplitz operators with rational symbols.
//!
//! For a rational symbol `Psi` without circle poles, write `d_in` for the
//! monic polynomial carrying the disc poles (origin exponent included,
//! per-point multiplicity the maximum over entries) and `d_out` for the
//! outside poles. Then `P = d_in d_out Psi` is a polynomial matrix and
//!
//! `ker T_Psi = { f = d_out P^{-1} q }`
//!
//! where `q` runs over polynomial vectors with `deg q_i < deg d_in` whose
//! numerators `d_out adj(P) q` vanish to full multiplicity at every root of
//! `det P` inside the disc. Indeed `q = d_in Psi f` is entire with the stated
//! degree bound for any kernel element, and conversely `Psi f = q / d_in` is
//! then strictly antianalytic while the jet conditions make `f` analytic in
//! the disc. The kernel dimension is `n deg d_in - rank(jets)` and every
//! basis element is verified on a grid afterwards.

use crate::error::{Error, Result};
use crate::hankel::SingularData;
use crate::symalg::{
    cluster_points, refine_root, winding_number_adaptive, LaurentPoly, MatrixSymbol, Poly,
    RationalMatrix, RationalScalar,
};
use crate::{c64, tol, C64, CMat};

/// Kernel of a block Toeplitz operator, with an explicit rational basis.
#[derive(Debug, Clone)]
pub struct ToeplitzKernel {
    pub dim: usize,
    /// Column symbols spanning the kernel, each of unit `L^2` norm.
    pub basis: Vec<RationalMatrix>,
    /// Parameter vectors: `q_data[i]` holds the polynomial coefficients of
    /// `q` for `basis[i]`, ordered entry-major with `delta_in_degree` slots
    /// per entry, scaled consistently with the basis element.
    pub q_data: Vec<Vec<C64>>,
    /// Degree of the inside-pole polynomial (parameter count is `n` times
    /// this).
    pub delta_in_degree: usize,
    /// Rank of the analyticity (jet) constraints.
    pub jet_rank: usize,
}

/// Square polynomial matrix, row major.
struct PolyMat {
    n: usize,
    e: Vec<Poly>,
}

impl PolyMat {
    fn at(&self, r: usize, c: usize) -> &Poly {
        &self.e[r * self.n + c]
    }

    /// Exact determinant by cofactor expansion; fine for the small blocks
    /// this library works with.
    fn det(&self) -> Poly {
        let n = self.n;
        if n == 1 {
            return self.e[0].clone();
        }
        let mut acc = Poly::zero();
        for c in 0..n {
            let minor = self.minor(0, c);
            let term = self.at(0, c).mul(&minor.det());
            if c % 2 == 0 {
                acc = acc.add(&term);
            } else {
                acc = acc.sub(&term);
            }
        }
        acc.trimmed()
    }

    fn minor(&self, row: usize, col: usize) -> PolyMat {
        let n = self.n;
        let mut e = Vec::with_capacity((n - 1) * (n - 1));
        for r in 0..n {
            if r == row {
                continue;
            }
            for c in 0..n {
                if c == col {
                    continue;
                }
                e.push(self.at(r, c).clone());
            }
        }
        PolyMat { n: n - 1, e }
    }

    fn eval(&self, z: C64) -> CMat {
        let mut m = CMat::zeros(self.n, self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                m[(r, c)] = self.at(r, c).eval(z);
            }
        }
        m
    }

    /// Adjugate: `adj(P) P = det(P) I`.
    fn adjugate(&self) -> PolyMat {
        let n = self.n;
        if n == 1 {
            return PolyMat { n: 1, e: vec![Poly::one()] };
        }
        let mut e = vec![Poly::zero(); n * n];
        for r in 0..n {
            for c in 0..n {
                let cof = self.minor(r, c).det();
                // adj = transposed cofactor matrix
                e[c * n + r] = if (r + c) % 2 == 0 { cof } else { cof.scale(c64(-1.0, 0.0)) };
            }
        }
        PolyMat { n, e }
    }
}

/// Monic polynomial with the listed roots and multiplicities.
fn pole_poly(poles: &[(C64, usize)]) -> Poly {
    let mut roots = Vec::new();
    for &(p, m) in poles {
        for _ in 0..m {
            roots.push(p);
        }
    }
    Poly::from_roots(&roots, c64(1.0, 0.0))
}

/// Clear the poles of `psi`, returning `(P, d_in, d_out)`.
fn cleared_matrix(psi: &RationalMatrix) -> Result<(PolyMat, Poly, Poly)> {
    if psi.rows() != psi.cols() {
        return Err(Error::invalid("toeplitz kernel: symbol must be square"));
    }
    let n = psi.rows();
    let d_in = pole_poly(&psi.poles_in_disc()?);
    let d_out = pole_poly(&psi.poles_outside_disc()?);
    let clear = RationalScalar::from_laurent(LaurentPoly::from_poly(d_in.mul(&d_out)));
    let mut e = Vec::with_capacity(n * n);
    for r in 0..n {
        for c in 0..n {
            let p = psi.entry(r, c).mul(&clear)?;
            if !p.is_laurent() || p.num().lo < 0 {
                return Err(Error::InternalInconsistency(format!(
                    "pole clearing left entry ({r}, {c}) non-polynomial"
                )));
            }
            let lp = p.num();
            e.push(lp.p.shift_up(lp.lo as usize).trimmed());
        }
    }
    Ok((PolyMat { n, e }, d_in, d_out))
}

/// Roots of `det P` classified against the unit circle. Roots inside come
/// back clustered, multiple roots Newton-refined; roots too close to the
/// circle are refused since the operator is then not certifiably Fredholm.
fn disc_roots(det: &Poly) -> Result<Vec<(C64, usize)>> {
    let roots = det.roots()?;
    for r in &roots {
        if (r.norm() - 1.0).abs() <= tol::BOUNDARY_POLE {
            return Err(Error::NotInvertibleOnCircle(format!(
                "det P has a root at {r} within {:.0e} of the circle",
                tol::BOUNDARY_POLE
            )));
        }
    }
    let inside: Vec<C64> = roots.into_iter().filter(|r| r.norm() < 1.0).collect();
    let mut clusters = cluster_points(&inside, tol::ROOT_CLUSTER);
    for (center, m) in clusters.iter_mut() {
        if *m > 1 && center.norm() > tol::ROOT_CLUSTER {
            *center = refine_root(det, *center, *m);
        }
    }
    Ok(clusters)
}

fn binomial(t: usize, b: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..b {
        acc = acc * (t - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Compute `ker T_Psi` exactly; see the module docs for the parametrization.
pub fn toeplitz_kernel(psi: &MatrixSymbol) -> Result<ToeplitzKernel> {
    let rat = psi.to_rational();
    let (p, d_in, d_out) = cleared_matrix(&rat)?;
    let n = p.n;
    let deg_in = d_in.degree().unwrap_or(0);
    if deg_in == 0 {
        // analytic symbol: Psi f both analytic and strictly antianalytic
        // forces f = 0 (det Psi is checked nonzero below)
        let det = p.det();
        if det.is_zero() {
            return Err(Error::invalid("toeplitz kernel: symbol is singular"));
        }
        return Ok(ToeplitzKernel {
            dim: 0,
            basis: Vec::new(),
            q_data: Vec::new(),
            delta_in_degree: 0,
            jet_rank: 0,
        });
    }
    let det = p.det();
    if det.is_zero() {
        return Err(Error::invalid("toeplitz kernel: symbol is singular"));
    }
    let adj = p.adjugate();
    let clusters = disc_roots(&det)?;
    let params = n * deg_in;

    // numerator building blocks N_i = sum_c (d_out adj_{i c}) q_c
    let mut blocks: Vec<Poly> = Vec::with_capacity(n * n);
    for i in 0..n {
        for c in 0..n {
            blocks.push(d_out.mul(adj.at(i, c)));
        }
    }

    // jet constraint rows: for each cluster (center l, mult m), derivative
    // order j < m and output component i, the j-th Taylor coefficient of
    // N_i at l must vanish
    let total_rows: usize = clusters.iter().map(|&(_, m)| m * n).sum();
    let mut rows: Vec<Vec<C64>> = Vec::with_capacity(total_rows);
    for &(lam, mult) in &clusters {
        // Taylor coefficients of each block at lam, orders 0..mult
        let taylors: Vec<Vec<C64>> = blocks
            .iter()
            .map(|b| {
                let mut t = Vec::with_capacity(mult);
                let mut d = b.clone();
                let mut fact = 1.0f64;
                for a in 0..mult {
                    if a > 0 {
                        d = d.derivative();
                        fact *= a as f64;
                    }
                    t.push(d.eval(lam) / c64(fact, 0.0));
                }
                t
            })
            .collect();
        // powers of lam for the z^t factor
        let tmax = deg_in;
        let mut lam_pow = vec![c64(1.0, 0.0); tmax.max(1)];
        for i in 1..tmax.max(1) {
            lam_pow[i] = lam_pow[i - 1] * lam;
        }
        for j in 0..mult {
            for i in 0..n {
                let mut row = vec![C64::default(); params];
                for c in 0..n {
                    let tb = &taylors[i * n + c];
                    for t in 0..deg_in {
                        // Taylor_j(block * z^t) = sum_b C(t,b) lam^{t-b} Taylor_{j-b}(block)
                        let mut acc = C64::default();
                        for b in 0..=j.min(t) {
                            acc += c64(binomial(t, b), 0.0) * lam_pow[t - b] * tb[j - b];
                        }
                        row[c * deg_in + t] = acc;
                    }
                }
                rows.push(row);
            }
        }
    }

    // rank / null space of the constraint matrix, rows normalized so the
    // rank decision is scale free; zero rows pad the matrix square so the
    // SVD returns the complete right basis. A row whose norm sits at the
    // root-position noise floor is the zero functional (its adjugate factor
    // vanishes at that root); normalizing it would manufacture a constraint
    // out of noise, so such rows are dropped instead.
    let (jet_rank, null_basis) = if rows.is_empty() {
        (0, identity_basis(params))
    } else {
        let norms: Vec<f64> = rows
            .iter()
            .map(|row| row.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
            .collect();
        let floor = tol::RANK_REL * norms.iter().fold(0.0f64, |a, &b| a.max(b));
        let mut a = CMat::zeros(rows.len().max(params), params);
        for (ri, row) in rows.iter().enumerate() {
            if norms[ri] <= floor {
                continue;
            }
            for (ci, v) in row.iter().enumerate() {
                a[(ri, ci)] = v / c64(norms[ri], 0.0);
            }
        }
        let sd = SingularData::new(&a)?;
        let cut = tol::RANK_REL * sd.scale().max(1.0);
        let rank = sd.values.iter().filter(|&&s| s > cut).count();
        let null: Vec<Vec<C64>> = (rank..params)
            .map(|j| sd.v.column(j).iter().copied().collect())
            .collect();
        (rank, null)
    };
    let dim = params - jet_rank;
    debug_assert_eq!(null_basis.len(), dim);

    // det's exact monomial factor at the origin is divided out here rather
    // than left to canonicalization: the jet constraints make the numerators
    // vanish at z = 0 only up to the rank cut, and a backward perturbation
    // at the origin cannot be priced by value-based cancellation (the local
    // coefficient bound degenerates to |c_0|)
    let m0 = clusters
        .iter()
        .find(|(lam, _)| lam.norm() <= tol::ROOT_CLUSTER)
        .map_or(0, |&(_, m)| m);
    let det_red = if m0 > 0 {
        Poly::from_coeffs(det.0[m0..].to_vec()).trimmed()
    } else {
        det.clone()
    };

    // assemble f = d_out adj(P) q / det P for each null vector
    let mut basis = Vec::with_capacity(dim);
    for q in &null_basis {
        let mut nums = Vec::with_capacity(n);
        for i in 0..n {
            let mut num = Poly::zero();
            for c in 0..n {
                let qc = Poly::from_coeffs(q[c * deg_in..(c + 1) * deg_in].to_vec()).trimmed();
                num = num.add(&blocks[i * n + c].mul(&qc));
            }
            nums.push(num.trimmed());
        }
        let col_scale = nums.iter().map(|p| p.scale_max()).fold(0.0f64, f64::max);
        let mut entries = Vec::with_capacity(n);
        for num in nums {
            // entries whose every coefficient sits at the rank-cut noise
            // floor of the column represent the zero function
            if num.scale_max() <= tol::CANCEL * col_scale {
                entries.push(RationalScalar::zero());
                continue;
            }
            let dropped = num.0.iter().take(m0).all(|c| c.norm() <= tol::CANCEL * col_scale);
            let e = if m0 > 0 && dropped {
                RationalScalar::new(
                    LaurentPoly::from_poly(
                        Poly::from_coeffs(num.0.get(m0..).unwrap_or(&[]).to_vec()).trimmed(),
                    ),
                    det_red.clone(),
                )?
            } else {
                RationalScalar::new(LaurentPoly::from_poly(num), det.clone())?
            };
            entries.push(e);
        }
        basis.push(RationalMatrix::from_entries(n, 1, entries)?);
    }

    // normalize and verify each element on a grid
    let scale = psi.sup_norm()?.max(1.0);
    let mut verified = Vec::with_capacity(dim);
    let mut q_data = Vec::with_capacity(dim);
    for (f, q) in basis.into_iter().zip(null_basis) {
        let norm = l2_norm_rational(&f)?;
        if norm <= 1e-12 {
            return Err(Error::InternalInconsistency(
                "toeplitz kernel: null vector mapped to the zero function".into(),
            ));
        }
        let f = f.scale(c64(1.0 / norm, 0.0));
        let q: Vec<C64> = q.iter().map(|v| v / c64(norm, 0.0)).collect();
        let pole_resid = crate::blaschke::antianalytic_residual(&f)?;
        if pole_resid > tol::KERNEL_RESID {
            return Err(Error::InternalInconsistency(format!(
                "kernel element leaves H^2, antianalytic residual {pole_resid:.3e}"
            )));
        }
        let image = rat.matmul(&f)?;
        let resid = analytic_residual(&image)? / scale;
        if resid > tol::KERNEL_RESID {
            return Err(Error::InternalInconsistency(format!(
                "kernel element image has analytic residual {resid:.3e}"
            )));
        }
        verified.push(f);
        q_data.push(q);
    }

    // representation identity P f = d_out q on a coarse grid, and mutual
    // independence of the parameter vectors
    if dim > 0 {
        let m = tol::GRID_MIN;
        let mut worst = 0.0f64;
        let mut pf_scale = 0.0f64;
        for (f, q) in verified.iter().zip(&q_data) {
            for jdx in 0..m {
                let z = crate::symalg::grid_point(jdx, m);
                let pf = p.eval(z) * f.eval_at(z);
                let dq = d_out.eval(z);
                let mut diff = 0.0f64;
                let mut mag = 0.0f64;
                for c in 0..n {
                    let mut qc = C64::default();
                    let mut zp = c64(1.0, 0.0);
                    for t in 0..deg_in {
                        qc += q[c * deg_in + t] * zp;
                        zp *= z;
                    }
                    diff += (pf[(c, 0)] - dq * qc).norm_sqr();
                    mag += pf[(c, 0)].norm_sqr();
                }
                worst = worst.max(diff.sqrt());
                pf_scale = pf_scale.max(mag.sqrt());
            }
        }
        if worst > tol::RANK_REL * (1.0 + pf_scale) {
            return Err(Error::InternalInconsistency(format!(
                "kernel representation identity violated by {worst:.3e}"
            )));
        }
        let mut qm = CMat::zeros(dim, params);
        for (i, q) in q_data.iter().enumerate() {
            for (j, v) in q.iter().enumerate() {
                qm[(i, j)] = *v;
            }
        }
        let qsv = SingularData::new(&qm)?;
        if qsv.values.last().copied().unwrap_or(0.0) <= tol::RANK_REL {
            return Err(Error::InternalInconsistency(
                "kernel parameter vectors are numerically dependent".into(),
            ));
        }
    }

    Ok(ToeplitzKernel {
        dim,
        basis: verified,
        q_data,
        delta_in_degree: deg_in,
        jet_rank,
    })
}

fn identity_basis(params: usize) -> Vec<Vec<C64>> {
    (0..params)
        .map(|j| {
            let mut v = vec![C64::default(); params];
            v[j] = c64(1.0, 0.0);
            v
        })
        .collect()
}

/// `L^2` norm of a rational column on a pole-aware grid.
pub fn l2_norm_rational(f: &RationalMatrix) -> Result<f64> {
    let inside: f64 = f
        .poles_in_disc()?
        .iter()
        .map(|(p, _)| p.norm())
        .fold(0.0, f64::max);
    let outside: f64 = f
        .poles_outside_disc()?
        .iter()
        .map(|(p, _)| 1.0 / p.norm())
        .fold(0.0, f64::max);
    let n = crate::blaschke::quadrature_grid(inside.max(outside), f.num_hi_bound())?;
    let g = f.to_grid(n)?;
    let mut acc = 0.0f64;
    for s in g.samples() {
        acc += s.iter().map(|c| c.norm_sqr()).sum::<f64>();
    }
    Ok((acc / n as f64).sqrt())
}

/// Largest Fourier coefficient of `r` at powers `>= 0`, on a pole-aware grid.
pub fn analytic_residual(r: &RationalMatrix) -> Result<f64> {
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
    let n = crate::blaschke::quadrature_grid(inside.max(outside), r.num_hi_bound())?;
    let g = r.to_grid(n)?;
    let half = n / 2;
    let mut worst = 0.0f64;
    for i in 0..r.rows() {
        for j in 0..r.cols() {
            let bins = g.fourier_bins(i, j);
            for (b, v) in bins.iter().enumerate() {
                if b < half {
                    worst = worst.max(v.norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Dimension of the cokernel, equal to `dim ker T_{Psi*}`.
pub fn cokernel_dim(psi: &MatrixSymbol) -> Result<usize> {
    Ok(toeplitz_kernel(&psi.star()?)?.dim)
}

/// Winding number of `det Psi` along the circle, adaptively sampled.
pub fn det_winding(psi: &MatrixSymbol) -> Result<i64> {
    let sampler = |n: usize| -> Result<Vec<C64>> {
        Ok((0..n)
            .map(|j| {
                psi.eval_at(crate::symalg::grid_point(j, n)).determinant()
            })
            .collect())
    };
    winding_number_adaptive(sampler, tol::GRID_MIN)
}

/// Kernel, cokernel and index of `T_Psi`, with the Fredholm consistency
/// identity `ind = -winding(det Psi)` enforced as a hard internal check.
#[derive(Debug, Clone)]
pub struct IndexData {
    pub kernel: ToeplitzKernel,
    pub dim_coker: usize,
    pub winding: i64,
    pub ind: i64,
}

pub fn toeplitz_index(psi: &MatrixSymbol) -> Result<IndexData> {
    let kernel = toeplitz_kernel(psi)?;
    let dim_coker = cokernel_dim(psi)?;
    let winding = det_winding(psi)?;
    let ind = kernel.dim as i64 - dim_coker as i64;
    if ind != -winding {
        return Err(Error::InternalInconsistency(format!(
            "index {ind} != -winding {}; kernel machinery disagrees with the symbol",
            -winding
        )));
    }
    Ok(IndexData {
        kernel,
        dim_coker,
        winding,
        ind,
    })
}
