//! The four operator functionals: numerical radius, spectral radius,
//! operator norm, and minimum modulus, plus numerical range boundary
//! sampling.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;

/// Result of a radius-type computation.
///
/// `value` is the computed functional. `certified_tolerance` bounds the
/// distance to the true value as established by the computation itself
/// (grid certificates for the numerical radius, backward-stable kernel
/// contracts for the others). `maximizer_angle` is the rotation angle
/// achieving the numerical radius and is `None` for the other functionals.
#[derive(Debug, Clone)]
pub struct RadiusResult {
    pub value: f64,
    pub certified_tolerance: f64,
    pub maximizer_angle: Option<f64>,
}

/// Requested certificates below `1e-11 * max(1, |T|)` are clamped to that
/// floor; sharper claims would be swamped by eigensolver round-off.
pub const CERT_FLOOR_REL: f64 = 1e-11;

/// Hard cap on eigenvalue evaluations inside the numerical radius search.
const MAX_EVALS: usize = 4_000_000;

/// Squared singular values: the Hermitian spectrum of the Gram matrix of
/// the smaller side, ascending. The general bidiagonal SVD loses accuracy
/// on clustered singular values; the Hermitian eigensolver does not, at
/// the cost of squaring the condition number (fine at our tolerances).
pub(crate) fn gram_eigenvalues(t: &ComplexMatrix) -> Vec<f64> {
    let a = t.to_na();
    let gram = if a.nrows() >= a.ncols() { a.adjoint() * &a } else { &a * a.adjoint() };
    let sym = (gram.clone() + gram.adjoint()).scale(0.5);
    let mut vals: Vec<f64> = sym.symmetric_eigenvalues().iter().cloned().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// Operator norm, the largest singular value.
pub fn operator_norm(t: &ComplexMatrix) -> RadiusResult {
    let vals = gram_eigenvalues(t);
    let value = vals.last().copied().unwrap_or(0.0).max(0.0).sqrt();
    RadiusResult {
        value,
        certified_tolerance: 1e-12 * value.max(1.0),
        maximizer_angle: None,
    }
}

/// Minimum modulus `inf {|Tx| : |x| = 1}`, the smallest singular value.
/// A matrix with more columns than rows has a nontrivial kernel, so the
/// infimum is zero.
pub fn min_modulus(t: &ComplexMatrix) -> RadiusResult {
    let (value, top) = match crate::decomp::svd(t) {
        // The refined singular values are accurate to ~n*eps*sigma_max
        // even at the kernel, unlike the raw Gram root.
        Ok(f) => {
            let v = if t.cols() > t.rows() {
                0.0
            } else {
                f.singular_values.last().copied().unwrap_or(0.0)
            };
            (v, f.sigma_max())
        }
        Err(_) => {
            let vals = gram_eigenvalues(t);
            let top = vals.last().copied().unwrap_or(0.0).max(0.0).sqrt();
            let v = if t.cols() > t.rows() {
                0.0
            } else {
                vals.first().copied().unwrap_or(0.0).max(0.0).sqrt()
            };
            (v, top)
        }
    };
    let n = t.rows().max(t.cols()) as f64;
    RadiusResult {
        value,
        certified_tolerance: (1e-12_f64).max(n * f64::EPSILON) * top.max(1.0),
        maximizer_angle: None,
    }
}

/// Spectral radius, the largest eigenvalue modulus, via the complex Schur
/// form. Defective matrices are handled by the underlying QR iteration.
pub fn spectral_radius(t: &ComplexMatrix) -> Result<RadiusResult> {
    if !t.is_square() {
        return Err(Error::dims(format!("spectral radius needs a square matrix, got {}x{}", t.rows(), t.cols())));
    }
    let eigs = t.to_na().eigenvalues().ok_or_else(|| Error::ConvergenceFailure {
        context: "Schur iteration did not converge".into(),
    })?;
    let value = eigs.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    Ok(RadiusResult {
        value,
        certified_tolerance: 1e-8 * value.max(1.0),
        maximizer_angle: None,
    })
}

/// Rotated Hermitian parts: `H(theta) = cos(theta) A + sin(theta) B` with
/// `A = (T + T*)/2` and `B = i(T - T*)/2`, so that
/// `lambda_max(H(theta)) = max_x Re(e^{i theta} <Tx, x>)`.
fn hermitian_components(t: &ComplexMatrix) -> (DMatrix<C64>, DMatrix<C64>) {
    let m = t.to_na();
    let adj = m.adjoint();
    let a = (&m + &adj) * C64::new(0.5, 0.0);
    let b = (&m - &adj) * C64::new(0.0, 0.5);
    (a, b)
}

fn lambda_max(h: &DMatrix<C64>) -> f64 {
    h.symmetric_eigenvalues().iter().cloned().fold(f64::NEG_INFINITY, f64::max)
}

struct Interval {
    ub: f64,
    a: f64,
    ga: f64,
    b: f64,
    gb: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.ub == other.ub
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ub.total_cmp(&other.ub)
    }
}

/// Upper bound for `max g` over `[a, b]` when `g` is a supremum of
/// sinusoids `t -> Re(e^{it} z)`, which is exactly the form of
/// `lambda_max(H(t))`:
///
/// if the maximizing sinusoid peaks inside the interval, its amplitude is at
/// most `(g(a) + g(b)) / (2 cos^2 delta)` with `delta` the half-width;
/// otherwise the maximum sits at an endpoint.
fn interval_bound(ga: f64, gb: f64, half_width: f64) -> f64 {
    let c = half_width.cos();
    let secant = (ga + gb) / (2.0 * c * c);
    ga.max(gb).max(secant)
}

/// Numerical radius `w(T) = max_theta lambda_max((e^{i theta} T + e^{-i theta} T*)/2)`.
///
/// The search seeds a 64-point uniform grid on `[0, 2pi)` and refines with
/// certified branch-and-bound bisection: each interval carries the support
/// function upper bound from [`interval_bound`], intervals are split
/// best-first, and the search stops when the largest upper bound is within
/// the effective tolerance of the best sampled value. Sampled values are
/// exact lower bounds up to eigensolver round-off, so the result satisfies
/// `w(T) - tol <= value <= w(T) + eps_eig`.
pub fn numerical_radius(t: &ComplexMatrix, tol: f64) -> Result<RadiusResult> {
    if !t.is_square() {
        return Err(Error::dims(format!("numerical radius needs a square matrix, got {}x{}", t.rows(), t.cols())));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidTolerance { tol });
    }
    let norm = operator_norm(t).value;
    if norm == 0.0 {
        return Ok(RadiusResult { value: 0.0, certified_tolerance: 0.0, maximizer_angle: Some(0.0) });
    }
    let eff_tol = tol.max(CERT_FLOOR_REL * norm.max(1.0));
    let (ca, cb) = hermitian_components(t);
    let dim = t.rows();
    let mut evals = 0usize;
    let eval = |theta: f64| -> f64 {
        let (s, c) = theta.sin_cos();
        let h = DMatrix::from_fn(dim, dim, |i, j| ca[(i, j)] * c + cb[(i, j)] * s);
        lambda_max(&h)
    };

    const GRID: usize = 64;
    let step = std::f64::consts::TAU / GRID as f64;
    let mut angles = [0.0; GRID + 1];
    let mut values = [0.0; GRID + 1];
    for k in 0..GRID {
        angles[k] = k as f64 * step;
        values[k] = eval(angles[k]);
        evals += 1;
    }
    angles[GRID] = std::f64::consts::TAU;
    values[GRID] = values[0];

    let mut best = f64::NEG_INFINITY;
    let mut best_angle = 0.0;
    for k in 0..GRID {
        if values[k] > best {
            best = values[k];
            best_angle = angles[k];
        }
    }

    let mut heap = BinaryHeap::with_capacity(4 * GRID);
    for k in 0..GRID {
        let (a, b) = (angles[k], angles[k + 1]);
        let ub = interval_bound(values[k], values[k + 1], (b - a) / 2.0);
        heap.push(Interval { ub, a, ga: values[k], b, gb: values[k + 1] });
    }

    let mut certified = 0.0;
    while let Some(top) = heap.pop() {
        if top.ub <= best + eff_tol {
            certified = (top.ub - best).max(0.0);
            break;
        }
        if evals >= MAX_EVALS {
            return Err(Error::ConvergenceFailure {
                context: format!("numerical radius certificate not reached after {evals} eigenvalue evaluations"),
            });
        }
        let m = 0.5 * (top.a + top.b);
        let gm = eval(m);
        evals += 1;
        if gm > best {
            best = gm;
            best_angle = m;
        }
        let half = 0.5 * (m - top.a);
        heap.push(Interval { ub: interval_bound(top.ga, gm, half), a: top.a, ga: top.ga, b: m, gb: gm });
        heap.push(Interval { ub: interval_bound(gm, top.gb, half), a: m, ga: gm, b: top.b, gb: top.gb });
    }

    Ok(RadiusResult {
        value: best,
        certified_tolerance: certified.max(0.0),
        maximizer_angle: Some(best_angle),
    })
}

/// Samples the boundary of the numerical range: for each of `points` angles
/// the top eigenvector `x` of `H(theta)` yields the support point
/// `<Tx, x>`.
pub fn numerical_range_boundary(t: &ComplexMatrix, points: usize) -> Result<Vec<C64>> {
    if !t.is_square() {
        return Err(Error::dims(format!("numerical range needs a square matrix, got {}x{}", t.rows(), t.cols())));
    }
    if points == 0 {
        return Err(Error::spec("boundary sampling needs at least one point"));
    }
    let (ca, cb) = hermitian_components(t);
    let dim = t.rows();
    let na_t = t.to_na();
    let mut out = Vec::with_capacity(points);
    for k in 0..points {
        let theta = std::f64::consts::TAU * k as f64 / points as f64;
        let (s, c) = theta.sin_cos();
        let h = DMatrix::from_fn(dim, dim, |i, j| ca[(i, j)] * c + cb[(i, j)] * s);
        let se = h.symmetric_eigen();
        let mut top = 0;
        for i in 1..dim {
            if se.eigenvalues[i] > se.eigenvalues[top] {
                top = i;
            }
        }
        let x = se.eigenvectors.column(top);
        let tx = &na_t * x;
        let z: C64 = x.iter().zip(tx.iter()).map(|(xi, ti)| xi.conj() * ti).sum();
        out.push(z);
    }
    Ok(out)
}
