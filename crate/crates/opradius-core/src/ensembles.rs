//! Seeded matrix ensembles. Every draw is a pure function of
//! `(spec, index)`: the generator is ChaCha12 keyed by the spec seed with
//! the trial index as the stream id, so trials can be sampled in any
//! order or in parallel and still reproduce bit-identically. The sequence
//! of raw draws inside each sampler is fixed and part of the format.

use num_complex::Complex;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{BlockMatrix, ComplexMatrix, UnitVector, C64};

/// Matrix classes the inequality hypotheses require.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    /// Entries i.i.d. standard complex Gaussian, times `scale`.
    Ginibre,
    /// `(G + G*)/2` of a ginibre draw.
    Hermitian,
    /// `G* G / dim` times `scale` for a unit-scale ginibre `G`.
    Psd,
    /// Orthonormalization factor of a ginibre draw, phases fixed.
    Unitary,
    /// `U diag(z) U*` with unitary `U` and complex Gaussian `z`.
    Normal,
    /// `(T, S)` with `T = V P`, `P` psd, `V` unitary, and `S` a random real
    /// polynomial in `P` of degree at most 3, so `|T| = P` and
    /// `|T| S = S |T| = S* |T|`.
    CommutingPair,
    /// `(T, S)` sharing a drawn eigenbasis: `P = Q diag(mu) Q*` with
    /// `mu` from the degenerate palette `{0, 1/2, 1, 2} * scale`,
    /// `S = Q diag(nu) Q*` with real Gaussian `nu`, `T = V P`.
    CommutingPairSpectral,
    /// Normalized complex Gaussian vector.
    UnitVector,
    /// Square grid of ginibre blocks with square diagonal blocks; grid
    /// size drawn from `{2, 3}` unless pinned, block dims drawn from
    /// `1..=dim`.
    Block,
}

/// A fully seeded ensemble description, embeddable in reports for replay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub dim: usize,
    pub scale: f64,
    pub seed: u64,
    /// Pinned grid size for block draws; `None` draws from `{2, 3}`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub grid: Option<usize>,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, dim: usize, scale: f64, seed: u64) -> Result<Self> {
        let spec = EnsembleSpec { kind, dim, scale, seed, grid: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_grid(mut self, grid: usize) -> Result<Self> {
        self.grid = Some(grid);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::spec("ensemble dim must be at least 1"));
        }
        if self.scale <= 0.0 || !self.scale.is_finite() {
            return Err(Error::spec(format!("ensemble scale must be positive, got {}", self.scale)));
        }
        match self.grid {
            Some(g) if self.kind != EnsembleKind::Block => {
                return Err(Error::spec(format!(
                    "grid = {g} is only meaningful for block ensembles"
                )));
            }
            Some(0) => return Err(Error::spec("block grid must be at least 1")),
            _ => {}
        }
        Ok(())
    }
}

/// One draw: the payload shape depends on the ensemble kind.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Sample {
    Matrix { matrix: ComplexMatrix },
    Pair { t: ComplexMatrix, s: ComplexMatrix },
    Vector { vector: UnitVector },
    Block { block: BlockMatrix },
}

impl Sample {
    pub fn as_matrix(&self) -> Result<&ComplexMatrix> {
        match self {
            Sample::Matrix { matrix } => Ok(matrix),
            _ => Err(Error::spec("sample is not a single matrix")),
        }
    }

    pub fn as_pair(&self) -> Result<(&ComplexMatrix, &ComplexMatrix)> {
        match self {
            Sample::Pair { t, s } => Ok((t, s)),
            _ => Err(Error::spec("sample is not an operator pair")),
        }
    }

    pub fn as_vector(&self) -> Result<&UnitVector> {
        match self {
            Sample::Vector { vector } => Ok(vector),
            _ => Err(Error::spec("sample is not a unit vector")),
        }
    }

    pub fn as_block(&self) -> Result<&BlockMatrix> {
        match self {
            Sample::Block { block } => Ok(block),
            _ => Err(Error::spec("sample is not a block matrix")),
        }
    }
}

/// The per-trial generator: seed keys the cipher, the index selects the
/// stream, so substreams never overlap.
fn trial_rng(spec: &EnsembleSpec, index: usize) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64);
    rng
}

fn gauss(rng: &mut ChaCha12Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Standard complex Gaussian: real and imaginary parts N(0, 1/2), so
/// E|z|^2 = 1.
fn complex_gauss(rng: &mut ChaCha12Rng) -> C64 {
    let re: f64 = gauss(rng);
    let im: f64 = gauss(rng);
    Complex::new(re, im) / std::f64::consts::SQRT_2
}

fn draw_ginibre(rng: &mut ChaCha12Rng, dim: usize, scale: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i, j)] = complex_gauss(rng) * scale;
        }
    }
    m
}

fn draw_hermitian(rng: &mut ChaCha12Rng, dim: usize, scale: f64) -> ComplexMatrix {
    let g = draw_ginibre(rng, dim, scale);
    hermitize(&g)
}

fn hermitize(m: &ComplexMatrix) -> ComplexMatrix {
    m.add(&m.adjoint()).expect("same shape").scale(C64::new(0.5, 0.0))
}

fn draw_psd(rng: &mut ChaCha12Rng, dim: usize, scale: f64) -> ComplexMatrix {
    let g = draw_ginibre(rng, dim, 1.0);
    let p = g
        .adjoint()
        .matmul(&g)
        .expect("square")
        .scale(C64::new(scale / dim as f64, 0.0));
    // Symmetrize away the roundoff asymmetry of the product.
    hermitize(&p)
}

/// Orthonormalization factor of a ginibre draw. The column phases are
/// fixed by making the triangular factor's diagonal real nonnegative, so
/// the draw is a deterministic function of the Gaussian sample.
fn draw_unitary(rng: &mut ChaCha12Rng, dim: usize) -> ComplexMatrix {
    let g = draw_ginibre(rng, dim, 1.0);
    let qr = nalgebra::linalg::QR::new(g.to_na());
    let q = qr.q();
    let r = qr.r();
    let mut u = ComplexMatrix::from_na(&q);
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let fix = phase.conj();
        for i in 0..dim {
            u[(i, j)] *= fix;
        }
    }
    u
}

fn draw_normal(rng: &mut ChaCha12Rng, dim: usize, scale: f64) -> ComplexMatrix {
    let u = draw_unitary(rng, dim);
    let z: Vec<C64> = (0..dim).map(|_| complex_gauss(rng) * scale).collect();
    let mut d = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        d[(i, i)] = z[i];
    }
    u.matmul(&d).expect("square").matmul(&u.adjoint()).expect("square")
}

fn draw_commuting_pair(
    rng: &mut ChaCha12Rng,
    dim: usize,
    scale: f64,
) -> (ComplexMatrix, ComplexMatrix) {
    let p = draw_psd(rng, dim, scale);
    let v = draw_unitary(rng, dim);
    let coeffs: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let t = v.matmul(&p).expect("square");
    let mut s = ComplexMatrix::identity(dim).scale(C64::new(coeffs[0], 0.0));
    let mut power = ComplexMatrix::identity(dim);
    for &c in &coeffs[1..] {
        power = power.matmul(&p).expect("square");
        s = s.add(&power.scale(C64::new(c, 0.0))).expect("same shape");
    }
    (t, hermitize(&s))
}

/// Degenerate-spectrum variant: `|T|` and `S` share the drawn eigenbasis
/// `Q`, with `|T|` eigenvalues from a palette containing repeats and
/// zeros.
fn draw_commuting_pair_spectral(
    rng: &mut ChaCha12Rng,
    dim: usize,
    scale: f64,
) -> (ComplexMatrix, ComplexMatrix) {
    const PALETTE: [f64; 4] = [0.0, 0.5, 1.0, 2.0];
    let q = draw_unitary(rng, dim);
    let mu: Vec<f64> = (0..dim).map(|_| PALETTE[rng.random_range(0..PALETTE.len())] * scale).collect();
    let nu: Vec<f64> = (0..dim).map(|_| gauss(rng) * scale).collect();
    let v = draw_unitary(rng, dim);
    let diag = |vals: &[f64]| {
        let mut d = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            d[(i, i)] = C64::new(vals[i], 0.0);
        }
        d
    };
    let conj = |vals: &[f64]| {
        q.matmul(&diag(vals))
            .expect("square")
            .matmul(&q.adjoint())
            .expect("square")
    };
    let p = hermitize(&conj(&mu));
    let s = hermitize(&conj(&nu));
    (v.matmul(&p).expect("square"), s)
}

fn draw_unit_vector(rng: &mut ChaCha12Rng, dim: usize) -> Result<UnitVector> {
    loop {
        let v: Vec<C64> = (0..dim).map(|_| complex_gauss(rng)).collect();
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return UnitVector::normalized(v);
        }
    }
}

fn draw_block(rng: &mut ChaCha12Rng, spec: &EnsembleSpec) -> Result<BlockMatrix> {
    let grid = match spec.grid {
        Some(g) => g,
        None => 2 + rng.random_range(0..2usize),
    };
    let dims: Vec<usize> = (0..grid).map(|_| 1 + rng.random_range(0..spec.dim)).collect();
    let mut blocks = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        for j in 0..grid {
            let mut m = ComplexMatrix::zeros(dims[i], dims[j]);
            for r in 0..dims[i] {
                for c in 0..dims[j] {
                    m[(r, c)] = complex_gauss(rng) * spec.scale;
                }
            }
            blocks.push(m);
        }
    }
    BlockMatrix::new(grid, grid, blocks)
}

/// Draws trial `index` of the ensemble.
pub fn sample(spec: &EnsembleSpec, index: usize) -> Result<Sample> {
    spec.validate()?;
    let mut rng = trial_rng(spec, index);
    let (dim, scale) = (spec.dim, spec.scale);
    Ok(match spec.kind {
        EnsembleKind::Ginibre => Sample::Matrix { matrix: draw_ginibre(&mut rng, dim, scale) },
        EnsembleKind::Hermitian => Sample::Matrix { matrix: draw_hermitian(&mut rng, dim, scale) },
        EnsembleKind::Psd => Sample::Matrix { matrix: draw_psd(&mut rng, dim, scale) },
        EnsembleKind::Unitary => Sample::Matrix { matrix: draw_unitary(&mut rng, dim) },
        EnsembleKind::Normal => Sample::Matrix { matrix: draw_normal(&mut rng, dim, scale) },
        EnsembleKind::CommutingPair => {
            let (t, s) = draw_commuting_pair(&mut rng, dim, scale);
            Sample::Pair { t, s }
        }
        EnsembleKind::CommutingPairSpectral => {
            let (t, s) = draw_commuting_pair_spectral(&mut rng, dim, scale);
            Sample::Pair { t, s }
        }
        EnsembleKind::UnitVector => Sample::Vector { vector: draw_unit_vector(&mut rng, dim)? },
        EnsembleKind::Block => Sample::Block { block: draw_block(&mut rng, spec)? },
    })
}
