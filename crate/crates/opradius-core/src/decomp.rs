//! Matrix decompositions and functional calculus for Hermitian and
//! positive semidefinite operators.
//!
//! The numerically delicate kernels (Hermitian eigendecomposition, SVD)
//! are delegated to `nalgebra`; this module wraps them behind checked
//! contracts and a deterministic factor convention.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Relative tolerance for Hermitian and PSD precondition checks.
pub const SYMMETRY_REL_TOL: f64 = 1e-8;

/// Singular values at or below `1e-12 * sigma_max` are treated as kernel
/// directions when fixing the SVD factor convention.
const KERNEL_REL_CUTOFF: f64 = 1e-12;

/// Eigendecomposition `H = Q diag(lambda) Q*` of a Hermitian matrix.
///
/// Eigenvalues are sorted ascending; `vectors` holds the matching
/// orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.dim() - 1]
    }

    /// Largest eigenvalue magnitude, which equals the operator norm.
    pub fn spectral_scale(&self) -> f64 {
        self.min_eigenvalue().abs().max(self.max_eigenvalue().abs())
    }

    /// Rebuilds `Q diag(f(lambda)) Q*`, the functional calculus of the
    /// decomposed operator. Fails with `DomainError` when `f` produces a
    /// non-finite value.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
        let n = self.dim();
        let mut mapped = Vec::with_capacity(n);
        for &l in &self.eigenvalues {
            let y = f(l);
            if !y.is_finite() {
                return Err(Error::domain(format!("function value {y} at eigenvalue {l}")));
            }
            mapped.push(y);
        }
        let q = &self.vectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = C64::ZERO;
                for k in 0..n {
                    acc += q[(i, k)] * mapped[k] * q[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out.hermitian_part()
    }
}

/// Singular value decomposition `T = L diag(sigma) R*` with square unitary
/// factors.
///
/// `singular_values` has length `min(rows, cols)`, sorted descending.
/// Factor convention: for each singular value above `1e-12 * sigma_max` the
/// left/right pair is jointly rescaled so the largest-modulus entry of the
/// Gram-side vector is positive real; columns belonging to (near-)kernel
/// directions are replaced by a greedy orthonormal completion against the
/// standard basis. This makes the factors a deterministic function of the
/// input bits.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub left: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub right: ComplexMatrix,
}

impl SvdFactors {
    /// Reconstructs the original matrix from the factors.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let m = self.left.rows();
        let n = self.right.rows();
        let k = self.singular_values.len();
        let mut out = ComplexMatrix::zeros(m, n);
        for i in 0..m {
            for j in 0..n {
                let mut acc = C64::ZERO;
                for t in 0..k {
                    acc += self.left[(i, t)] * self.singular_values[t] * self.right[(j, t)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }
}

/// Polar decomposition `T = U |T|` of a square matrix, with `U` unitary and
/// `|T| = (T*T)^{1/2}`.
///
/// For singular `T` the unitary factor is completed from the SVD kernel
/// convention documented on [`svd`].
#[derive(Debug, Clone)]
pub struct PolarFactors {
    pub unitary: ComplexMatrix,
    pub modulus: ComplexMatrix,
}

/// Hermitian eigendecomposition.
///
/// Requires `|H - H*|_F <= 1e-8 * max(1, |H|_F)`; the input is symmetrized
/// before factorization so the returned eigenvalues are exactly real.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    if !h.is_square() {
        return Err(Error::dims(format!("eigendecomposition needs a square matrix, got {}x{}", h.rows(), h.cols())));
    }
    let asymmetry = h.asymmetry();
    if asymmetry > SYMMETRY_REL_TOL * h.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { asymmetry });
    }
    let sym = h.hermitian_part()?;
    let se = sym.to_na().symmetric_eigen();
    let n = h.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| se.eigenvectors[(i, order[j])])?;
    Ok(HermitianEigen { eigenvalues, vectors })
}

/// Greedily extends a set of orthonormal columns to an orthonormal basis,
/// repeatedly adding the standard basis vector with the largest residual
/// after two Gram-Schmidt passes.
fn complete_orthonormal(cols: &mut Vec<Vec<C64>>, dim: usize) {
    while cols.len() < dim {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for k in 0..dim {
            let mut v = vec![C64::ZERO; dim];
            v[k] = C64::ONE;
            for _ in 0..2 {
                for c in cols.iter() {
                    let coeff: C64 = v.iter().zip(c).map(|(a, b)| b.conj() * a).sum();
                    for (vi, ci) in v.iter_mut().zip(c) {
                        *vi -= coeff * ci;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|(bn, _)| norm > *bn) {
                best = Some((norm, v));
            }
        }
        let (norm, v) = best.expect("dim >= 1");
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
}

fn matrix_from_columns(cols: &[Vec<C64>]) -> ComplexMatrix {
    let m = cols[0].len();
    ComplexMatrix::from_fn(m, cols.len(), |i, j| cols[j][i]).expect("well formed columns")
}

/// Makes the largest-modulus entry of each column real nonnegative.
fn phase_fix_columns(cols: &mut [Vec<C64>]) {
    for col in cols.iter_mut() {
        let pivot = col
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))
            .map(|(idx, _)| idx)
            .unwrap_or(0);
        let z = col[pivot];
        if z.norm() > 0.0 {
            let phase = z.conj() / z.norm();
            for e in col.iter_mut() {
                *e *= phase;
            }
        }
    }
}

/// Singular value decomposition with square unitary factors and the
/// deterministic convention described on [`SvdFactors`].
///
/// The factorization runs through the Hermitian spectrum of the Gram
/// matrix of the smaller side: the general bidiagonal SVD loses accuracy
/// on clustered singular values, while the Hermitian eigensolver resolves
/// them to round-off. The partner factor is recovered as `T w_i / sigma_i`
/// on the numerical range and completed orthonormally on the kernel.
pub fn svd(t: &ComplexMatrix) -> Result<SvdFactors> {
    let (m, n) = (t.rows(), t.cols());
    let k = m.min(n);
    let gram = if m >= n { t.adjoint().matmul(t)? } else { t.matmul(&t.adjoint())? };
    let eig = hermitian_eigen(&gram)?;
    let side = gram.rows();
    let mut gram_cols: Vec<Vec<C64>> = Vec::with_capacity(side);
    for j in (0..side).rev() {
        gram_cols.push((0..side).map(|i| eig.vectors[(i, j)]).collect());
    }
    phase_fix_columns(&mut gram_cols);

    // The Gram root sqrt(lambda) loses half the digits near the kernel;
    // re-evaluating sigma_i = |T w_i| against the original matrix restores
    // eps-level absolute accuracy (the vectors themselves are fine).
    let partner = if m >= n { t.clone() } else { t.adjoint() };
    let images: Vec<Vec<C64>> =
        gram_cols.iter().map(|c| partner.apply(c)).collect::<Result<_>>()?;
    let sigma: Vec<f64> = images
        .iter()
        .map(|im| im.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    if sigma.iter().any(|s| !s.is_finite()) {
        return Err(Error::ConvergenceFailure { context: "SVD produced non-finite singular values".into() });
    }
    let mut order: Vec<usize> = (0..side).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    let sigma: Vec<f64> = order.iter().map(|&i| sigma[i]).collect();
    let mut gram_cols: Vec<Vec<C64>> = order.iter().map(|&i| gram_cols[i].clone()).collect();
    let images: Vec<Vec<C64>> = order.iter().map(|&i| images[i].clone()).collect();

    let sigma_max = sigma.first().copied().unwrap_or(0.0);
    let cutoff = sigma_max * KERNEL_REL_CUTOFF;
    let rank = sigma.iter().take_while(|&&s| s > cutoff).count();

    let mut partner_cols: Vec<Vec<C64>> = Vec::with_capacity(rank);
    for i in 0..rank {
        partner_cols.push(images[i].iter().map(|z| z / sigma[i]).collect());
    }
    gram_cols.truncate(rank);
    let partner_dim = if m >= n { m } else { n };
    complete_orthonormal(&mut partner_cols, partner_dim);
    complete_orthonormal(&mut gram_cols, side);

    let (left_cols, right_cols) =
        if m >= n { (partner_cols, gram_cols) } else { (gram_cols, partner_cols) };
    Ok(SvdFactors {
        left: matrix_from_columns(&left_cols),
        singular_values: sigma.into_iter().take(k).collect(),
        right: matrix_from_columns(&right_cols),
    })
}

/// Rebuilds `R diag(f(sigma)) R*` from SVD factors, i.e. the functional
/// calculus of `|T|` expressed in the right singular basis. `side` picks the
/// right factor (for `|T|`) or the left factor (for `|T*|`).
pub(crate) fn apply_to_modulus(f: &SvdFactors, side: ModulusSide, func: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let basis = match side {
        ModulusSide::Right => &f.right,
        ModulusSide::Left => &f.left,
    };
    let n = basis.rows();
    let mut vals = vec![0.0; n];
    for (i, v) in vals.iter_mut().enumerate() {
        let s = f.singular_values.get(i).copied().unwrap_or(0.0);
        let y = func(s);
        if !y.is_finite() {
            return Err(Error::domain(format!("function value {y} at singular value {s}")));
        }
        *v = y;
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = C64::ZERO;
            for k in 0..n {
                acc += basis[(i, k)] * vals[k] * basis[(j, k)].conj();
            }
            out[(i, j)] = acc;
        }
    }
    out.hermitian_part()
}

#[derive(Clone, Copy)]
pub(crate) enum ModulusSide {
    Right,
    Left,
}

/// Polar decomposition `T = U |T|` for square `T`.
pub fn polar_decompose(t: &ComplexMatrix) -> Result<PolarFactors> {
    if !t.is_square() {
        return Err(Error::dims(format!("polar decomposition needs a square matrix, got {}x{}", t.rows(), t.cols())));
    }
    let f = svd(t)?;
    let unitary = f.left.matmul(&f.right.adjoint())?;
    let modulus = apply_to_modulus(&f, ModulusSide::Right, |s| s)?;
    Ok(PolarFactors { unitary, modulus })
}

/// Operator absolute value `|T| = (T*T)^{1/2}`, computed from the SVD.
pub fn abs_operator(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let f = svd(t)?;
    apply_to_modulus(&f, ModulusSide::Right, |s| s)
}

/// Absolute value of the adjoint, `|T*| = (TT*)^{1/2}`.
pub fn abs_adjoint(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    let f = svd(t)?;
    apply_to_modulus(&f, ModulusSide::Left, |s| s)
}

/// Applies a scalar function to a positive semidefinite matrix through its
/// eigendecomposition.
///
/// Eigenvalues in `[-1e-8 * max(1, |H|), 0)` are clamped to zero before `f`
/// is applied; anything lower fails with `NotPsd`. `f` must return finite
/// values on the clamped spectrum (`DomainError` otherwise). Note
/// `0.0f64.powf(0.0) == 1.0`, so `t^0` acts as the constant-one function.
pub fn psd_apply(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let eig = psd_eigen(h)?;
    eig.apply(|l| f(l.max(0.0)))
}

/// Hermitian eigendecomposition plus a PSD check with the documented
/// clamping tolerance.
pub(crate) fn psd_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let eig = hermitian_eigen(h)?;
    let min = eig.min_eigenvalue();
    if min < -SYMMETRY_REL_TOL * eig.spectral_scale().max(1.0) {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    Ok(eig)
}

/// `|M|^p` for Hermitian `M`, via eigenvalues `|lambda|^p`.
pub fn hermitian_abs_power(m: &ComplexMatrix, p: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m)?;
    eig.apply(|l| l.abs().powf(p))
}

/// Aluthge transform `|T|^{1/2} U |T|^{1/2}` where `T = U |T|` is the polar
/// decomposition.
pub fn aluthge(t: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !t.is_square() {
        return Err(Error::dims(format!("Aluthge transform needs a square matrix, got {}x{}", t.rows(), t.cols())));
    }
    let n = t.rows();
    let f = svd(t)?;
    // |T|^{1/2} U |T|^{1/2} = R S^{1/2} (R* L) S^{1/2} R* in SVD factors.
    let x = f.right.adjoint().matmul(&f.left)?;
    let mut y = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let si = f.singular_values.get(i).copied().unwrap_or(0.0).sqrt();
            let sj = f.singular_values.get(j).copied().unwrap_or(0.0).sqrt();
            y[(i, j)] = x[(i, j)] * (si * sj);
        }
    }
    f.right.matmul(&y)?.matmul(&f.right.adjoint())
}
