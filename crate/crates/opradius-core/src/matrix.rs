//! Dense complex matrices, unit vectors, and block matrices.
//!
//! `ComplexMatrix` owns its entries in row-major order and is the single
//! matrix currency of this crate. Decompositions convert to `nalgebra`
//! storage internally; everything else works on the raw buffer.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense complex matrix with row-major storage.
///
/// Invariants: `rows >= 1`, `cols >= 1`, `data.len() == rows * cols`, and
/// every entry is finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

/// Wire format: `{"rows": R, "cols": C, "data": [[re, im], ...]}` with
/// `data` in row-major order.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;

    fn try_from(j: MatrixJson) -> Result<Self> {
        let data = j.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        ComplexMatrix::new(j.rows, j.cols, data)
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        MatrixJson {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::dims(format!("matrix must be at least 1x1, got {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::dims(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(z) = data.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain(format!("non-finite matrix entry {z}")));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix::new(rows, cols, vec![C64::ZERO; rows * cols]).expect("positive dims")
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix::new(rows, cols, data)
    }

    /// Square matrix with the given diagonal and zeros elsewhere.
    pub fn from_diagonal(diag: &[C64]) -> Result<Self> {
        let n = diag.len();
        let mut m = ComplexMatrix::new(n.max(1), n.max(1), vec![C64::ZERO; n.max(1) * n.max(1)])?;
        if n == 0 {
            return Err(Error::dims("diagonal must be nonempty"));
        }
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        Ok(m)
    }

    /// Convenience constructor from rows of `(re, im)` pairs.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::dims("ragged rows"));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&(re, im)| C64::new(re, im)))
            .collect();
        ComplexMatrix::new(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, c: C64) -> ComplexMatrix {
        let data = self.data.iter().map(|z| z * c).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dims(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(ComplexMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.add(&other.scale(-C64::ONE))
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::dims(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// `self * v` for a plain coefficient vector.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::dims(format!(
                "cannot apply {}x{} to a vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![C64::ZERO; self.rows];
        for i in 0..self.rows {
            let mut acc = C64::ZERO;
            for j in 0..self.cols {
                acc += self[(i, j)] * v[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius norm of `self - self*`; zero exactly when Hermitian.
    pub fn asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut acc = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self[(i, j)] - self[(j, i)].conj();
                acc += d.norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `(self + self*) / 2`; callers use this to erase Hermitian round-off.
    pub fn hermitian_part(&self) -> Result<ComplexMatrix> {
        if !self.is_square() {
            return Err(Error::dims("hermitian part requires a square matrix"));
        }
        self.add(&self.adjoint()).map(|m| m.scale(C64::new(0.5, 0.0)))
    }

    pub(crate) fn to_na(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)])
    }

    pub(crate) fn from_na(m: &DMatrix<C64>) -> ComplexMatrix {
        ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]).expect("nalgebra matrix is well formed")
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Unit vector in `C^n`, stored as its coefficient list.
///
/// Invariant: the Euclidean norm is within `1e-12` of 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<[f64; 2]>", into = "Vec<[f64; 2]>")]
pub struct UnitVector {
    data: Vec<C64>,
}

impl TryFrom<Vec<[f64; 2]>> for UnitVector {
    type Error = Error;

    fn try_from(v: Vec<[f64; 2]>) -> Result<Self> {
        UnitVector::new(v.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

impl From<UnitVector> for Vec<[f64; 2]> {
    fn from(v: UnitVector) -> Self {
        v.data.iter().map(|z| [z.re, z.im]).collect()
    }
}

impl UnitVector {
    pub fn new(data: Vec<C64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::dims("unit vector must be nonempty"));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain("non-finite vector entry"));
        }
        let norm = data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("vector norm {norm} is not within 1e-12 of 1")));
        }
        Ok(UnitVector { data })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(data: Vec<C64>) -> Result<Self> {
        let norm = data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::domain("cannot normalize a zero or non-finite vector"));
        }
        let scaled = data.into_iter().map(|z| z / norm).collect();
        Ok(UnitVector { data: scaled })
    }

    /// Standard basis vector `e_k` in dimension `n`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::dims(format!("basis index {k} out of range for dimension {n}")));
        }
        let mut data = vec![C64::ZERO; n];
        data[k] = C64::ONE;
        Ok(UnitVector { data })
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }
}

/// Inner product `<u, v>` conjugate-linear in the second slot, so
/// `<u, v> = sum_i conj(v_i) u_i`.
pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| b.conj() * a).sum()
}

/// Block matrix over a rectangular grid. Block `(i, j)` has shape
/// `row_dims[i] x col_dims[j]`; blocks are stored in grid row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlockJson", into = "BlockJson")]
pub struct BlockMatrix {
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
    blocks: Vec<ComplexMatrix>,
}

/// Wire format: `{"grid": [GR, GC], "blocks": [[matrix, ...], ...]}`.
#[derive(Serialize, Deserialize)]
struct BlockJson {
    grid: [usize; 2],
    blocks: Vec<Vec<ComplexMatrix>>,
}

impl TryFrom<BlockJson> for BlockMatrix {
    type Error = Error;

    fn try_from(j: BlockJson) -> Result<Self> {
        let [gr, gc] = j.grid;
        if j.blocks.len() != gr || j.blocks.iter().any(|row| row.len() != gc) {
            return Err(Error::dims("block grid does not match declared shape"));
        }
        let blocks = j.blocks.into_iter().flatten().collect();
        BlockMatrix::new(gr, gc, blocks)
    }
}

impl From<BlockMatrix> for BlockJson {
    fn from(b: BlockMatrix) -> Self {
        let gc = b.col_dims.len();
        let mut rows = Vec::with_capacity(b.row_dims.len());
        for chunk in b.blocks.chunks(gc) {
            rows.push(chunk.to_vec());
        }
        BlockJson { grid: [b.row_dims.len(), b.col_dims.len()], blocks: rows }
    }
}

impl BlockMatrix {
    /// Builds a grid from `grid_rows * grid_cols` blocks in row-major order,
    /// checking that row heights and column widths are consistent.
    pub fn new(grid_rows: usize, grid_cols: usize, blocks: Vec<ComplexMatrix>) -> Result<Self> {
        if grid_rows == 0 || grid_cols == 0 {
            return Err(Error::dims("block grid must be at least 1x1"));
        }
        if blocks.len() != grid_rows * grid_cols {
            return Err(Error::dims(format!(
                "expected {} blocks for a {grid_rows}x{grid_cols} grid, got {}",
                grid_rows * grid_cols,
                blocks.len()
            )));
        }
        let row_dims: Vec<usize> = (0..grid_rows).map(|i| blocks[i * grid_cols].rows()).collect();
        let col_dims: Vec<usize> = (0..grid_cols).map(|j| blocks[j].cols()).collect();
        for i in 0..grid_rows {
            for j in 0..grid_cols {
                let b = &blocks[i * grid_cols + j];
                if b.rows() != row_dims[i] || b.cols() != col_dims[j] {
                    return Err(Error::dims(format!(
                        "block ({i},{j}) has shape {}x{}, expected {}x{}",
                        b.rows(),
                        b.cols(),
                        row_dims[i],
                        col_dims[j]
                    )));
                }
            }
        }
        Ok(BlockMatrix { row_dims, col_dims, blocks })
    }

    pub fn grid_rows(&self) -> usize {
        self.row_dims.len()
    }

    pub fn grid_cols(&self) -> usize {
        self.col_dims.len()
    }

    pub fn row_dims(&self) -> &[usize] {
        &self.row_dims
    }

    pub fn col_dims(&self) -> &[usize] {
        &self.col_dims
    }

    pub fn block(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.blocks[i * self.col_dims.len() + j]
    }

    /// Total rows of the flattened matrix.
    pub fn total_rows(&self) -> usize {
        self.row_dims.iter().sum()
    }

    pub fn total_cols(&self) -> usize {
        self.col_dims.iter().sum()
    }

    /// True when the grid is square and every diagonal block is square,
    /// which pilot-matrix constructions require.
    pub fn has_square_diagonal(&self) -> bool {
        self.grid_rows() == self.grid_cols()
            && (0..self.grid_rows()).all(|i| self.block(i, i).is_square())
    }

    /// Flattens the grid into one dense matrix.
    pub fn embed(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.total_rows(), self.total_cols());
        let mut row_off = 0;
        for i in 0..self.grid_rows() {
            let mut col_off = 0;
            for j in 0..self.grid_cols() {
                let b = self.block(i, j);
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        out[(row_off + r, col_off + c)] = b[(r, c)];
                    }
                }
                col_off += self.col_dims[j];
            }
            row_off += self.row_dims[i];
        }
        out
    }
}

/// Embeds blocks into a dense matrix after validating the grid.
pub fn block_embed(blocks: &BlockMatrix) -> ComplexMatrix {
    blocks.embed()
}
