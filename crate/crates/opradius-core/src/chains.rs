//! Vector-level inequality chains: refined Holder-McCarty, refined
//! Cauchy-Schwarz, mixed Schwarz, and the Kittaneh-type f,g inequalities,
//! each evaluated as an ordered chain of real terms with signed slacks.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::decomp::{psd_eigen, svd, HermitianEigen, SvdFactors};
use crate::error::{Error, Result};
use crate::matrix::{inner, ComplexMatrix, UnitVector, C64};
use crate::radii::{operator_norm, spectral_radius};

/// Ordering relation between two adjacent chain terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "==")]
    Eq,
}

impl Relation {
    /// Signed slack of `a REL b`: nonnegative iff the relation holds.
    pub fn slack(self, a: f64, b: f64) -> f64 {
        match self {
            Relation::Le => b - a,
            Relation::Ge => a - b,
            Relation::Eq => -(a - b).abs(),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "==",
        })
    }
}

/// A multi-term inequality `v_0 REL_0 v_1 REL_1 ... v_n` evaluated on
/// concrete inputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermChain {
    pub source: String,
    pub labels: Vec<String>,
    pub values: Vec<f64>,
    pub relations: Vec<Relation>,
}

impl TermChain {
    pub fn new(
        source: impl Into<String>,
        labels: Vec<String>,
        values: Vec<f64>,
        relations: Vec<Relation>,
    ) -> Result<Self> {
        if labels.len() != values.len() || relations.len() + 1 != values.len() {
            return Err(Error::spec(format!(
                "term chain needs n labels, n values, n-1 relations; got {}/{}/{}",
                labels.len(),
                values.len(),
                relations.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("term chain produced a non-finite value"));
        }
        Ok(TermChain { source: source.into(), labels, values, relations })
    }

    /// Smallest signed slack over all adjacent pairs; negative means some
    /// relation is violated.
    pub fn min_slack(&self) -> f64 {
        self.relations
            .iter()
            .enumerate()
            .map(|(i, r)| r.slack(self.values[i], self.values[i + 1]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Natural scale of the chain: `max(1, max |v_i|)`.
    pub fn scale(&self) -> f64 {
        self.values.iter().fold(1.0_f64, |m, v| m.max(v.abs()))
    }

    /// True iff every adjacent pair respects its relation within the
    /// relative tolerance `tol` (slack at least `-tol * scale()`).
    pub fn satisfied(&self, tol: f64) -> bool {
        self.min_slack() >= -tol * self.scale()
    }
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A pair `(f, g)` of nonnegative functions on `[0, inf)` with
/// `f(t) g(t) = t`, as required by the Kittaneh-type inequalities.
///
/// `PowerSplit(alpha)` is `f(t) = t^alpha`, `g(t) = t^(1-alpha)` with the
/// convention `0^0 = 1`. `Custom` pairs are validated pointwise on the
/// exact spectrum where they are applied.
#[derive(Clone)]
pub enum FunctionPair {
    PowerSplit { alpha: f64 },
    Custom { f: ScalarFn, g: ScalarFn },
}

impl fmt::Debug for FunctionPair {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionPair::PowerSplit { alpha } => write!(fm, "PowerSplit({alpha})"),
            FunctionPair::Custom { .. } => fm.write_str("Custom(..)"),
        }
    }
}

impl FunctionPair {
    pub fn power_split(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::domain(format!("PowerSplit exponent must lie in [0,1], got {alpha}")));
        }
        Ok(FunctionPair::PowerSplit { alpha })
    }

    pub fn custom(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        FunctionPair::Custom { f: Arc::new(f), g: Arc::new(g) }
    }

    pub fn f(&self, t: f64) -> f64 {
        match self {
            FunctionPair::PowerSplit { alpha } => t.powf(*alpha),
            FunctionPair::Custom { f, .. } => f(t),
        }
    }

    pub fn g(&self, t: f64) -> f64 {
        match self {
            FunctionPair::PowerSplit { alpha } => t.powf(1.0 - *alpha),
            FunctionPair::Custom { g, .. } => g(t),
        }
    }

    /// Checks `f, g >= 0` and `|f(t) g(t) - t| <= 1e-8 * max(1, t)` at each
    /// spectrum point where the pair will be applied.
    pub fn validate_on(&self, points: &[f64]) -> Result<()> {
        let mut max_defect = 0.0_f64;
        for &t in points {
            let (ft, gt) = (self.f(t), self.g(t));
            if !ft.is_finite() || !gt.is_finite() || ft < 0.0 || gt < 0.0 {
                return Err(Error::InvalidFunctionPair { max_defect: f64::INFINITY });
            }
            max_defect = max_defect.max((ft * gt - t).abs() / t.max(1.0));
        }
        if max_defect > 1e-8 {
            return Err(Error::InvalidFunctionPair { max_defect });
        }
        Ok(())
    }
}

/// Squared overlaps `|<x, q_i>|^2` of `x` against the columns of `q`.
fn overlaps(q: &ComplexMatrix, x: &[C64]) -> Vec<f64> {
    let n = q.rows();
    let k = q.cols();
    let mut out = Vec::with_capacity(k);
    for i in 0..k {
        let mut acc = C64::ZERO;
        for j in 0..n {
            acc += q[(j, i)].conj() * x[j];
        }
        out.push(acc.norm_sqr());
    }
    out
}

/// `<h(Lambda) x, x>` in a fixed eigenbasis: the weights are the squared
/// overlaps, so any scalar function of the eigenvalues integrates exactly.
fn spectral_quad(lambdas: &[f64], weights: &[f64], h: impl Fn(f64) -> f64) -> f64 {
    lambdas.iter().zip(weights).map(|(&l, &w)| h(l) * w).sum()
}

fn eigen_weights(eig: &HermitianEigen, x: &UnitVector) -> Result<Vec<f64>> {
    if eig.dim() != x.dim() {
        return Err(Error::dims(format!("vector has dimension {}, operator has {}", x.dim(), eig.dim())));
    }
    Ok(overlaps(&eig.vectors, x.data()))
}

fn sesquilinear(t: &ComplexMatrix, x: &UnitVector, y: &UnitVector) -> Result<C64> {
    if t.cols() != x.dim() || t.rows() != y.dim() {
        return Err(Error::dims(format!(
            "form <Tx,y> needs dim(x) = {} and dim(y) = {}, got {} and {}",
            t.cols(),
            t.rows(),
            x.dim(),
            y.dim()
        )));
    }
    Ok(inner(&t.apply(x.data())?, y.data()))
}

fn check_exponent_at_least(p: f64, required: f64) -> Result<()> {
    if !p.is_finite() || p < required {
        return Err(Error::ExponentTooSmall { p, required });
    }
    Ok(())
}

/// Refined Holder-McCarty chain
/// `[<Ax,x>^p, <A^p x,x> - <|A - <Ax,x>| ^p x,x>, <A^p x,x>]`
/// with relations `[<=, <=]` for `p >= 2` and `[>=, <=]` for `0 < p < 2`.
pub fn mccarty_chain(a: &ComplexMatrix, x: &UnitVector, p: f64) -> Result<TermChain> {
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::NonpositiveExponent { p });
    }
    let eig = psd_eigen(a)?;
    let w = eigen_weights(&eig, x)?;
    let lam: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0)).collect();
    let c = spectral_quad(&lam, &w, |t| t);
    let t1 = c.powf(p);
    let t3 = spectral_quad(&lam, &w, |t| t.powf(p));
    let dev = spectral_quad(&lam, &w, |t| (t - c).abs().powf(p));
    let t2 = t3 - dev;
    let relations = if p >= 2.0 { vec![Relation::Le, Relation::Le] } else { vec![Relation::Ge, Relation::Le] };
    TermChain::new(
        if p >= 2.0 { "eq3.1" } else { "eq3.2" },
        vec!["<Ax,x>^p".into(), "<A^p x,x> - <|A - <Ax,x>|^p x,x>".into(), "<A^p x,x>".into()],
        vec![t1, t2, t3],
        relations,
    )
}

/// McCarty remark chain for `0 < p <= 1`:
/// `<Ax,x>^p >= <A^p x,x> >= <A^p x,x> - <|A - <Ax,x>|^p x,x>`.
pub fn mccarty_remark_chain(a: &ComplexMatrix, x: &UnitVector, p: f64) -> Result<TermChain> {
    if !p.is_finite() || p <= 0.0 {
        return Err(Error::NonpositiveExponent { p });
    }
    if p > 1.0 {
        return Err(Error::domain(format!("the McCarty remark chain requires 0 < p <= 1, got {p}")));
    }
    let base = mccarty_chain(a, x, p)?;
    TermChain::new(
        "eq.mc",
        vec!["<Ax,x>^p".into(), "<A^p x,x>".into(), "<A^p x,x> - <|A - <Ax,x>|^p x,x>".into()],
        vec![base.values[0], base.values[2], base.values[1]],
        vec![Relation::Ge, Relation::Ge],
    )
}

/// Refined Cauchy-Schwarz chain for a positive operator:
/// `|<Ax,y>|^{2p} <= [bracket_x][bracket_y] <= <A^p x,x><A^p y,y>`,
/// where each bracket subtracts the deviation term of the McCarty
/// refinement.
pub fn schwarz_refined_chain(a: &ComplexMatrix, x: &UnitVector, y: &UnitVector, p: f64) -> Result<TermChain> {
    check_exponent_at_least(p, 2.0)?;
    let eig = psd_eigen(a)?;
    let wx = eigen_weights(&eig, x)?;
    let wy = eigen_weights(&eig, y)?;
    let lam: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0)).collect();
    let lhs = sesquilinear(a, x, y)?.norm().powf(2.0 * p);
    let bracket = |w: &[f64]| {
        let c = spectral_quad(&lam, w, |t| t);
        let moment = spectral_quad(&lam, w, |t| t.powf(p));
        (moment, moment - spectral_quad(&lam, w, |t| (t - c).abs().powf(p)))
    };
    let (mx, bx) = bracket(&wx);
    let (my, by) = bracket(&wy);
    TermChain::new(
        "eq3.3",
        vec!["|<Ax,y>|^2p".into(), "refined product".into(), "<A^p x,x><A^p y,y>".into()],
        vec![lhs, bx * by, mx * my],
        vec![Relation::Le, Relation::Le],
    )
}

/// Shared SVD data for the mixed Schwarz family: weights of `x` against the
/// right singular basis (the eigenbasis of `|T|`) and of `y` against the
/// left singular basis (the eigenbasis of `|T*|`).
fn modulus_weights(f: &SvdFactors, x: &UnitVector, y: &UnitVector) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let n = f.right.rows();
    if x.dim() != n || y.dim() != f.left.rows() {
        return Err(Error::dims(format!(
            "vectors of dimension {} and {} do not match operator sides {} and {}",
            x.dim(),
            y.dim(),
            n,
            f.left.rows()
        )));
    }
    let mut sigmas = f.singular_values.clone();
    sigmas.resize(n, 0.0);
    Ok((sigmas, overlaps(&f.right, x.data()), overlaps(&f.left, y.data())))
}

/// Mixed Schwarz chain `|<Tx,y>|^2 <= <|T|^{2a} x,x> <|T*|^{2(1-a)} y,y>`.
pub fn mixed_schwarz_chain(t: &ComplexMatrix, x: &UnitVector, y: &UnitVector, alpha: f64) -> Result<TermChain> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::domain(format!("mixed Schwarz exponent must lie in [0,1], got {alpha}")));
    }
    if !t.is_square() {
        return Err(Error::dims(format!("mixed Schwarz needs a square matrix, got {}x{}", t.rows(), t.cols())));
    }
    let f = svd(t)?;
    let (sig, wx, wy) = modulus_weights(&f, x, y)?;
    let lhs = sesquilinear(t, x, y)?.norm_sqr();
    let rhs = spectral_quad(&sig, &wx, |s| s.powf(2.0 * alpha)) * spectral_quad(&sig, &wy, |s| s.powf(2.0 * (1.0 - alpha)));
    TermChain::new(
        "eq2.2",
        vec!["|<Tx,y>|^2".into(), "<|T|^2a x,x><|T*|^2(1-a) y,y>".into()],
        vec![lhs, rhs],
        vec![Relation::Le],
    )
}

/// Refined mixed Schwarz chain
/// `|<Tx,y>|^{2p} <= [bracket(|T|, x)][bracket(|T*|, y)] <= <|T|^p x,x><|T*|^p y,y>`.
pub fn mixed_schwarz_refined_chain(t: &ComplexMatrix, x: &UnitVector, y: &UnitVector, p: f64) -> Result<TermChain> {
    check_exponent_at_least(p, 2.0)?;
    if !t.is_square() {
        return Err(Error::dims(format!("mixed Schwarz needs a square matrix, got {}x{}", t.rows(), t.cols())));
    }
    let f = svd(t)?;
    let (sig, wx, wy) = modulus_weights(&f, x, y)?;
    let lhs = sesquilinear(t, x, y)?.norm().powf(2.0 * p);
    let bracket = |w: &[f64]| {
        let c = spectral_quad(&sig, w, |s| s);
        let moment = spectral_quad(&sig, w, |s| s.powf(p));
        (moment, moment - spectral_quad(&sig, w, |s| (s - c).abs().powf(p)))
    };
    let (mx, bx) = bracket(&wx);
    let (my, by) = bracket(&wy);
    TermChain::new(
        "eq3.4",
        vec!["|<Tx,y>|^2p".into(), "refined product".into(), "<|T|^p x,x><|T*|^p y,y>".into()],
        vec![lhs, bx * by, mx * my],
        vec![Relation::Le, Relation::Le],
    )
}

/// Frobenius residual of the Lemma 5 hypothesis `|T| S = S* |T|`, gated at
/// `1e-8 * max(1, |T| |S|)` (operator norms).
pub(crate) fn commutation_gate(t: &ComplexMatrix, s: &ComplexMatrix, abs_t: &ComplexMatrix) -> Result<()> {
    let lhs = abs_t.matmul(s)?;
    let rhs = s.adjoint().matmul(abs_t)?;
    let residual = lhs.sub(&rhs)?.frobenius_norm();
    let scale = (operator_norm(t).value * operator_norm(s).value).max(1.0);
    if residual > 1e-8 * scale {
        return Err(Error::CommutationViolated { residual });
    }
    Ok(())
}

fn abs_from_svd(f: &SvdFactors) -> Result<ComplexMatrix> {
    crate::decomp::apply_to_modulus(f, crate::decomp::ModulusSide::Right, |s| s)
}

/// Frobenius residual `| |T|S - S*|T| |_F` of the Lemma 5 hypothesis,
/// without gating.
pub fn commutation_residual(t: &ComplexMatrix, s: &ComplexMatrix) -> Result<f64> {
    if !t.is_square() || !s.is_square() || t.rows() != s.rows() {
        return Err(Error::dims(format!(
            "commutation residual needs square T and S of equal dimension, got {}x{} and {}x{}",
            t.rows(),
            t.cols(),
            s.rows(),
            s.cols()
        )));
    }
    let abs_t = crate::decomp::abs_operator(t)?;
    let lhs = abs_t.matmul(s)?;
    let rhs = s.adjoint().matmul(&abs_t)?;
    Ok(lhs.sub(&rhs)?.frobenius_norm())
}

/// Kittaneh-type chain `|<TSx,y>| <= r(S) |f(|T|) x| |g(|T*|) y|` under the
/// checked hypothesis `|T| S = S* |T|`.
pub fn kittaneh_fg_chain(
    t: &ComplexMatrix,
    s: &ComplexMatrix,
    x: &UnitVector,
    y: &UnitVector,
    fp: &FunctionPair,
) -> Result<TermChain> {
    if !t.is_square() || !s.is_square() || t.rows() != s.rows() {
        return Err(Error::dims(format!(
            "Kittaneh chain needs square T and S of equal dimension, got {}x{} and {}x{}",
            t.rows(),
            t.cols(),
            s.rows(),
            s.cols()
        )));
    }
    let f = svd(t)?;
    let abs_t = abs_from_svd(&f)?;
    commutation_gate(t, s, &abs_t)?;
    let (sig, wx, wy) = modulus_weights(&f, x, y)?;
    fp.validate_on(&sig)?;
    let r = spectral_radius(s)?.value;
    let fx = spectral_quad(&sig, &wx, |v| fp.f(v).powi(2)).max(0.0).sqrt();
    let gy = spectral_quad(&sig, &wy, |v| fp.g(v).powi(2)).max(0.0).sqrt();
    let lhs = sesquilinear(&t.matmul(s)?, x, y)?.norm();
    TermChain::new(
        "kittaneh.ineq",
        vec!["|<TSx,y>|".into(), "r(S) |f(|T|)x| |g(|T*|)y|".into()],
        vec![lhs, r * fx * gy],
        vec![Relation::Le],
    )
}

/// Refined Kittaneh-type chain: the middle term subtracts the McCarty
/// deviation of `f^2(|T|)` at `x` and of `g^2(|T*|)` at `y` before taking
/// `2p`-th roots.
pub fn kittaneh_fg_refined_chain(
    t: &ComplexMatrix,
    s: &ComplexMatrix,
    x: &UnitVector,
    y: &UnitVector,
    fp: &FunctionPair,
    p: f64,
) -> Result<TermChain> {
    check_exponent_at_least(p, 2.0)?;
    if !t.is_square() || !s.is_square() || t.rows() != s.rows() {
        return Err(Error::dims(format!(
            "Kittaneh chain needs square T and S of equal dimension, got {}x{} and {}x{}",
            t.rows(),
            t.cols(),
            s.rows(),
            s.cols()
        )));
    }
    let f = svd(t)?;
    let abs_t = abs_from_svd(&f)?;
    commutation_gate(t, s, &abs_t)?;
    let (sig, wx, wy) = modulus_weights(&f, x, y)?;
    fp.validate_on(&sig)?;
    let r = spectral_radius(s)?.value;
    let root = 1.0 / (2.0 * p);
    let bracket = |w: &[f64], h: &dyn Fn(f64) -> f64| {
        let hs: Vec<f64> = sig.iter().map(|&v| h(v)).collect();
        let sq: Vec<f64> = hs.iter().map(|v| v * v).collect();
        let c = spectral_quad(&sq, w, |v| v);
        let moment = spectral_quad(&sq, w, |v| v.powf(p));
        let dev = spectral_quad(&sq, w, |v| (v - c).abs().powf(p));
        (moment, (moment - dev).max(0.0))
    };
    let ff = |v: f64| fp.f(v);
    let gg = |v: f64| fp.g(v);
    let (mf, bf) = bracket(&wx, &ff);
    let (mg, bg) = bracket(&wy, &gg);
    let lhs = sesquilinear(&t.matmul(s)?, x, y)?.norm();
    TermChain::new(
        "eq3.6",
        vec![
            "|<TSx,y>|".into(),
            "r(S) (refined f bracket)^(1/2p) (refined g bracket)^(1/2p)".into(),
            "r(S) <f^2p(|T|)x,x>^(1/2p) <g^2p(|T*|)y,y>^(1/2p)".into(),
        ],
        vec![lhs, r * bf.powf(root) * bg.powf(root), r * mf.powf(root) * mg.powf(root)],
        vec![Relation::Le, Relation::Le],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d14() -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[C64::ONE, C64::new(4.0, 0.0)]).unwrap()
    }

    fn j2() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![(0.0, 0.0), (1.0, 0.0)], vec![(0.0, 0.0), (0.0, 0.0)]]).unwrap()
    }

    fn h2() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[vec![(2.0, 0.0), (1.0, 0.0)], vec![(1.0, 0.0), (2.0, 0.0)]]).unwrap()
    }

    fn u2() -> UnitVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        UnitVector::new(vec![C64::new(s, 0.0), C64::new(s, 0.0)]).unwrap()
    }

    fn assert_values(chain: &TermChain, expected: &[f64], tol: f64) {
        assert_eq!(chain.values.len(), expected.len(), "arity mismatch in {}", chain.source);
        for (v, e) in chain.values.iter().zip(expected) {
            assert!((v - e).abs() <= tol, "{}: got {:?}, expected {:?}", chain.source, chain.values, expected);
        }
    }

    #[test]
    fn mccarty_fixtures() {
        let a = d14();
        let u = u2();
        let c2 = mccarty_chain(&a, &u, 2.0).unwrap();
        assert_values(&c2, &[6.25, 6.25, 8.5], 1e-12);
        assert_eq!(c2.relations, vec![Relation::Le, Relation::Le]);
        assert!(c2.satisfied(1e-12));

        let c3 = mccarty_chain(&a, &u, 3.0).unwrap();
        assert_values(&c3, &[15.625, 29.125, 32.5], 1e-12);

        let c1 = mccarty_chain(&a, &u, 1.0).unwrap();
        assert_values(&c1, &[2.5, 1.0, 2.5], 1e-12);
        assert_eq!(c1.relations, vec![Relation::Ge, Relation::Le]);
        assert!(c1.satisfied(1e-12));
    }

    #[test]
    fn mccarty_remark_ordering() {
        let c = mccarty_remark_chain(&d14(), &u2(), 1.0).unwrap();
        assert_values(&c, &[2.5, 2.5, 1.0], 1e-12);
        assert!(c.satisfied(1e-12));
        assert!(mccarty_remark_chain(&d14(), &u2(), 1.5).is_err());
    }

    #[test]
    fn mccarty_rejects_bad_inputs() {
        assert!(matches!(mccarty_chain(&d14(), &u2(), 0.0).unwrap_err(), Error::NonpositiveExponent { .. }));
        let indef = ComplexMatrix::from_diagonal(&[C64::ONE, C64::new(-1.0, 0.0)]).unwrap();
        assert!(matches!(mccarty_chain(&indef, &u2(), 2.0).unwrap_err(), Error::NotPsd { .. }));
        assert!(matches!(mccarty_chain(&j2(), &u2(), 2.0).unwrap_err(), Error::NotHermitian { .. }));
    }

    #[test]
    fn p2_identity_makes_first_two_terms_agree() {
        // <A^2 x,x> - <(A - <Ax,x>)^2 x,x> = <Ax,x>^2 algebraically.
        let a = ComplexMatrix::from_rows(&[
            vec![(2.0, 0.0), (0.5, 0.5)],
            vec![(0.5, -0.5), (1.0, 0.0)],
        ])
        .unwrap();
        let x = UnitVector::new(vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let c = mccarty_chain(&a, &x, 2.0).unwrap();
        assert!((c.values[0] - c.values[1]).abs() <= 1e-10 * c.values[2].max(1.0));
    }

    #[test]
    fn schwarz_refined_fixtures() {
        let c = schwarz_refined_chain(&d14(), &u2(), &u2(), 2.0).unwrap();
        assert_values(&c, &[39.0625, 39.0625, 72.25], 1e-10);
        let e1 = UnitVector::basis(2, 0).unwrap();
        let e2 = UnitVector::basis(2, 1).unwrap();
        let c = schwarz_refined_chain(&d14(), &e1, &e2, 2.0).unwrap();
        assert_values(&c, &[0.0, 16.0, 16.0], 1e-12);
        assert!(matches!(
            schwarz_refined_chain(&d14(), &u2(), &u2(), 1.5).unwrap_err(),
            Error::ExponentTooSmall { .. }
        ));
    }

    #[test]
    fn schwarz_refined_identity_operator() {
        let i3 = ComplexMatrix::identity(3);
        let x = UnitVector::basis(3, 0).unwrap();
        let y = UnitVector::basis(3, 1).unwrap();
        let c = schwarz_refined_chain(&i3, &x, &y, 3.0).unwrap();
        assert_values(&c, &[0.0, 1.0, 1.0], 1e-12);
    }

    #[test]
    fn mixed_schwarz_fixtures() {
        let e1 = UnitVector::basis(2, 0).unwrap();
        let e2 = UnitVector::basis(2, 1).unwrap();
        let c = mixed_schwarz_chain(&j2(), &e2, &e1, 0.5).unwrap();
        assert_values(&c, &[1.0, 1.0], 1e-12);
        assert!(c.satisfied(1e-10));
        assert!(mixed_schwarz_chain(&j2(), &e2, &e1, 1.5).is_err());

        // Eigenvector of a PSD matrix: equality at alpha = 1/2.
        let c = mixed_schwarz_chain(&h2(), &u2(), &u2(), 0.5).unwrap();
        assert_values(&c, &[9.0, 9.0], 1e-10);
    }

    #[test]
    fn mixed_schwarz_refined_fixtures() {
        let e1 = UnitVector::basis(2, 0).unwrap();
        let e2 = UnitVector::basis(2, 1).unwrap();
        let c = mixed_schwarz_refined_chain(&j2(), &e2, &e1, 2.0).unwrap();
        assert_values(&c, &[1.0, 1.0, 1.0], 1e-12);
        let c = mixed_schwarz_refined_chain(&h2(), &u2(), &u2(), 2.0).unwrap();
        assert_values(&c, &[81.0, 81.0, 81.0], 1e-9);
    }

    #[test]
    fn kittaneh_fixtures() {
        let e1 = UnitVector::basis(2, 0).unwrap();
        let e2 = UnitVector::basis(2, 1).unwrap();
        let i2 = ComplexMatrix::identity(2);
        let fp = FunctionPair::power_split(0.5).unwrap();
        let c = kittaneh_fg_chain(&j2(), &i2, &e2, &e1, &fp).unwrap();
        assert_values(&c, &[1.0, 1.0], 1e-12);

        let zero = ComplexMatrix::zeros(2, 2);
        let c = kittaneh_fg_chain(&j2(), &zero, &e2, &e1, &fp).unwrap();
        assert_values(&c, &[0.0, 0.0], 1e-12);

        // S = |T|^2 satisfies the hypothesis for T = D14.
        let a = d14();
        let s = a.matmul(&a).unwrap();
        let fq = FunctionPair::power_split(0.25).unwrap();
        let c = kittaneh_fg_chain(&a, &s, &u2(), &u2(), &fq).unwrap();
        assert_values(&c, &[32.5, 16.0 * 6.75_f64.sqrt()], 1e-10);
        assert!(c.satisfied(1e-10));
    }

    #[test]
    fn kittaneh_commutation_gate() {
        // |T| = D14 and S = J2: |T|S = e1 ox e2 but S*|T| = e2 ox e1.
        let err = kittaneh_fg_chain(
            &d14(),
            &j2(),
            &UnitVector::basis(2, 0).unwrap(),
            &UnitVector::basis(2, 1).unwrap(),
            &FunctionPair::power_split(0.5).unwrap(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::CommutationViolated { residual } if residual > 0.5));
    }

    #[test]
    fn kittaneh_refined_fixtures() {
        let e1 = UnitVector::basis(2, 0).unwrap();
        let e2 = UnitVector::basis(2, 1).unwrap();
        let i2 = ComplexMatrix::identity(2);
        let fp = FunctionPair::power_split(0.5).unwrap();
        let c = kittaneh_fg_refined_chain(&j2(), &i2, &e2, &e1, &fp, 2.0).unwrap();
        assert_values(&c, &[1.0, 1.0, 1.0], 1e-12);
        assert!(matches!(
            kittaneh_fg_refined_chain(&j2(), &i2, &e2, &e1, &fp, 1.0).unwrap_err(),
            Error::ExponentTooSmall { .. }
        ));
    }

    #[test]
    fn custom_function_pair_validation() {
        let good = FunctionPair::custom(|t| t.sqrt(), |t| t.sqrt());
        assert!(good.validate_on(&[0.0, 1.0, 7.5]).is_ok());
        let bad = FunctionPair::custom(|t| t, |t| t);
        assert!(matches!(bad.validate_on(&[2.0]).unwrap_err(), Error::InvalidFunctionPair { .. }));
        let negative = FunctionPair::custom(|t| -t.sqrt(), |t| -t.sqrt());
        assert!(negative.validate_on(&[1.0]).is_err());
    }

    #[test]
    fn scale_covariance_of_mccarty() {
        let a = h2();
        let x = UnitVector::new(vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)]).unwrap();
        for &p in &[1.0, 2.0, 3.5] {
            let base = mccarty_chain(&a, &x, p).unwrap();
            let scaled = mccarty_chain(&a.scale(C64::new(3.0, 0.0)), &x, p).unwrap();
            let factor = 3.0_f64.powf(p);
            for (b, s) in base.values.iter().zip(&scaled.values) {
                assert!((s - b * factor).abs() <= 1e-9 * factor * b.abs().max(1.0));
            }
        }
    }

    #[test]
    fn chain_serialization_round_trip() {
        let c = mccarty_chain(&d14(), &u2(), 3.0).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"<=\""));
        let back: TermChain = serde_json::from_str(&json).unwrap();
        assert_eq!(back.values, c.values);
        assert_eq!(back.relations, c.relations);
    }
}
