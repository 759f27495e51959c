//! Dense matrices over GF(q).

use std::fmt;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gf::{Fe, FieldCtx};
use crate::kernels::{self, with_arith};

/// Most `k x k` minors an exhaustive nonsingularity scan will evaluate.
pub const SUBSET_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("entry {value} at ({row}, {col}) is not an element of GF({q})")]
    EntryOutOfRange { row: usize, col: usize, value: u32, q: u32 },
    #[error("matrices live over different fields")]
    FieldMismatch,
    #[error("{needed} subsets exceed the exhaustive budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

#[derive(Clone)]
pub struct GfMatrix {
    ctx: Arc<FieldCtx>,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for GfMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "GfMatrix {}x{} over GF({})", self.rows, self.cols, self.ctx.q())?;
        for r in 0..self.rows.min(8) {
            let row: Vec<u32> = self.row(r).iter().take(16).map(|x| x.0).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl PartialEq for GfMatrix {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.ctx, &other.ctx)
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

pub(crate) fn same_field(a: &FieldCtx, b: &FieldCtx) -> bool {
    a.p() == b.p() && a.h() == b.h() && a.modulus() == b.modulus()
}

impl GfMatrix {
    pub fn new(ctx: Arc<FieldCtx>, rows: usize, cols: usize, data: Vec<Fe>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|x| !ctx.contains(*x)) {
            return Err(MatrixError::EntryOutOfRange {
                row: i / cols,
                col: i % cols,
                value: data[i].0,
                q: ctx.q(),
            });
        }
        Ok(GfMatrix { ctx, rows, cols, data })
    }

    pub fn zeros(ctx: Arc<FieldCtx>, rows: usize, cols: usize) -> Self {
        GfMatrix {
            ctx,
            rows,
            cols,
            data: vec![Fe::ZERO; rows * cols],
        }
    }

    pub fn identity(ctx: Arc<FieldCtx>, n: usize) -> Self {
        Self::from_fn(ctx, n, n, |r, c| if r == c { Fe::ONE } else { Fe::ZERO })
    }

    pub fn from_fn(ctx: Arc<FieldCtx>, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Fe) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        GfMatrix { ctx, rows, cols, data }
    }

    pub fn from_rows(ctx: Arc<FieldCtx>, cols: usize, rows: &[Vec<Fe>]) -> Result<Self, MatrixError> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(MatrixError::Dimension(format!(
                "row of length {} in a {cols}-column matrix",
                r.len()
            )));
        }
        Self::new(ctx, rows.len(), cols, rows.concat())
    }

    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        assert!(self.ctx.contains(v));
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> GfMatrix {
        GfMatrix::from_fn(self.ctx.clone(), self.cols, self.rows, |r, c| self.get(c, r))
    }

    /// Entrywise `x -> x^{p^e}`.
    pub fn frobenius_map(&self, e: u32) -> GfMatrix {
        GfMatrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| self.ctx.frobenius(x, e)).collect(),
        }
    }

    pub fn scale(&self, lambda: Fe) -> GfMatrix {
        GfMatrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| self.ctx.mul(lambda, x)).collect(),
        }
    }

    fn check_field(&self, other: &GfMatrix) -> Result<(), MatrixError> {
        if same_field(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(MatrixError::FieldMismatch)
        }
    }

    pub fn mul(&self, other: &GfMatrix) -> Result<GfMatrix, MatrixError> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(MatrixError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.mul_transposed(&other.transpose())
    }

    /// `self * other^T`.
    pub fn mul_transposed(&self, other: &GfMatrix) -> Result<GfMatrix, MatrixError> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(MatrixError::Dimension(format!(
                "{} columns against {}",
                self.cols, other.cols
            )));
        }
        let l = kernels::to_logs(&self.ctx, &self.data, None);
        let r = kernels::to_logs(&self.ctx, &other.data, None);
        let out = with_arith!(&self.ctx, a => kernels::gram_full(a, &l, &r, self.cols));
        Ok(GfMatrix {
            ctx: self.ctx.clone(),
            rows: self.rows,
            cols: other.rows,
            data: out.into_iter().map(Fe).collect(),
        })
    }

    /// Columns `idx` in the given order.
    pub fn select_columns(&self, idx: &[usize]) -> GfMatrix {
        GfMatrix::from_fn(self.ctx.clone(), self.rows, idx.len(), |r, c| self.get(r, idx[c]))
    }

    pub fn select_rows(&self, idx: &[usize]) -> GfMatrix {
        GfMatrix::from_fn(self.ctx.clone(), idx.len(), self.cols, |r, c| self.get(idx[r], c))
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &GfMatrix) -> Result<GfMatrix, MatrixError> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(MatrixError::Dimension("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(GfMatrix {
            ctx: self.ctx.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Appends a column whose entries are given by `col`.
    pub fn append_column(&self, col: &[Fe]) -> Result<GfMatrix, MatrixError> {
        if col.len() != self.rows {
            return Err(MatrixError::Dimension("appended column has wrong length".into()));
        }
        Ok(GfMatrix::from_fn(self.ctx.clone(), self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                col[r]
            }
        }))
    }

    /// Reduced row echelon form, rank and pivot columns.
    pub fn rref(&self) -> (GfMatrix, usize, Vec<usize>) {
        let f = &*self.ctx;
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        let mut pivots = Vec::new();
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pr) = (rank..rows).find(|&r| !m[r * cols + c].is_zero()) else {
                continue;
            };
            for j in 0..cols {
                m.swap(pr * cols + j, rank * cols + j);
            }
            let inv = f.inv(m[rank * cols + c]).expect("pivot is nonzero");
            for j in c..cols {
                m[rank * cols + j] = f.mul(inv, m[rank * cols + j]);
            }
            for r in 0..rows {
                if r == rank {
                    continue;
                }
                let factor = m[r * cols + c];
                if factor.is_zero() {
                    continue;
                }
                for j in c..cols {
                    let t = f.mul(factor, m[rank * cols + j]);
                    m[r * cols + j] = f.sub(m[r * cols + j], t);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        let out = GfMatrix {
            ctx: self.ctx.clone(),
            rows,
            cols,
            data: m,
        };
        (out, rank, pivots)
    }

    /// Rank by forward elimination. For wide matrices the leading square
    /// block is tried first, since a nonsingular block settles full row rank.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.rows <= self.cols && self.rows > 32 {
            let lead: Vec<usize> = (0..self.rows).collect();
            if !self.select_columns(&lead).det().expect("square").is_zero() {
                return self.rows;
            }
        }
        let raw: Vec<u32> = self.data.iter().map(|x| x.0).collect();
        with_arith!(&self.ctx, a => kernels::eliminate(a, &self.ctx, &raw, self.rows, self.cols)).rank
    }

    pub fn has_full_row_rank(&self) -> bool {
        self.rank() == self.rows
    }

    pub fn det(&self) -> Result<Fe, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::Dimension(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows == 0 {
            return Ok(Fe::ONE);
        }
        let raw: Vec<u32> = self.data.iter().map(|x| x.0).collect();
        let ech = with_arith!(&self.ctx, a => kernels::eliminate(a, &self.ctx, &raw, self.rows, self.cols));
        Ok(ech.det.expect("square"))
    }

    /// Basis of `{x : self * x^T = 0}`, one vector per row.
    pub fn null_space(&self) -> GfMatrix {
        let f = &*self.ctx;
        let (r, rank, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = GfMatrix::zeros(self.ctx.clone(), free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            out.data[i * self.cols + fc] = Fe::ONE;
            for (pr, &pc) in pivots.iter().enumerate().take(rank) {
                out.data[i * self.cols + pc] = f.neg(r.get(pr, fc));
            }
        }
        out
    }

    /// The nonzero rows of the reduced echelon form.
    pub fn row_space_basis(&self) -> GfMatrix {
        let (r, rank, _) = self.rref();
        let idx: Vec<usize> = (0..rank).collect();
        r.select_rows(&idx)
    }

    pub fn row_space_equal(&self, other: &GfMatrix) -> Result<bool, MatrixError> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(MatrixError::Dimension(format!(
                "comparing row spaces in {} and {} columns",
                self.cols, other.cols
            )));
        }
        Ok(self.row_space_basis() == other.row_space_basis())
    }

    /// Whether the row space of `self` lies inside that of `other`.
    pub fn row_space_within(&self, other: &GfMatrix) -> Result<bool, MatrixError> {
        self.check_field(other)?;
        if self.cols != other.cols {
            return Err(MatrixError::Dimension("row space inclusion across lengths".into()));
        }
        Ok(other.vstack(self)?.rank() == other.rank())
    }
}

/// How many column subsets to examine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetVerdict {
    pub all_nonsingular: bool,
    pub checked: usize,
    /// First singular subset found, if any.
    pub witness: Option<Vec<usize>>,
}

/// `C(n, k)`, saturating.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
        if acc == u128::MAX {
            break;
        }
    }
    acc
}

/// Advances `idx` to the next k-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Reproducible random k-subsets of `0..n`, each sorted ascending.
pub fn sample_subsets(n: usize, k: usize, count: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut s = sample(&mut rng, n, k).into_vec();
            s.sort_unstable();
            s
        })
        .collect()
}

/// Checks that every `k x k` column submatrix of a `k x n` matrix is
/// nonsingular, either over all subsets or over a seeded random sample.
pub fn all_k_subsets_nonsingular(m: &GfMatrix, mode: SubsetMode) -> Result<SubsetVerdict, MatrixError> {
    let (k, n) = (m.rows(), m.cols());
    if k > n {
        return Err(MatrixError::Dimension(format!("{k} rows exceed {n} columns")));
    }
    let check = |idx: &[usize]| !m.select_columns(idx).det().expect("square").is_zero();
    let mut checked = 0;
    match mode {
        SubsetMode::Exhaustive => {
            let needed = binomial(n, k);
            if needed > SUBSET_BUDGET {
                return Err(MatrixError::BudgetExceeded {
                    needed,
                    budget: SUBSET_BUDGET,
                });
            }
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                checked += 1;
                if !check(&idx) {
                    return Ok(SubsetVerdict {
                        all_nonsingular: false,
                        checked,
                        witness: Some(idx),
                    });
                }
                if !next_combination(&mut idx, n) {
                    break;
                }
            }
        }
        SubsetMode::Sampled { count, seed } => {
            for idx in sample_subsets(n, k, count, seed) {
                checked += 1;
                if !check(&idx) {
                    return Ok(SubsetVerdict {
                        all_nonsingular: false,
                        checked,
                        witness: Some(idx),
                    });
                }
            }
        }
    }
    Ok(SubsetVerdict {
        all_nonsingular: true,
        checked,
        witness: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    fn field(p: u64, h: u32) -> Arc<FieldCtx> {
        Arc::new(make_field(p, h).unwrap())
    }

    fn vandermonde(ctx: &Arc<FieldCtx>, k: usize, nodes: &[Fe]) -> GfMatrix {
        GfMatrix::from_fn(ctx.clone(), k, nodes.len(), |r, c| ctx.pow(nodes[c], r as u64))
    }

    #[test]
    fn rref_examples() {
        let f4 = field(2, 2);
        let (_, rank, _) = GfMatrix::zeros(f4.clone(), 2, 3).rref();
        assert_eq!(rank, 0);
        let (r, rank, piv) = GfMatrix::identity(f4.clone(), 3).rref();
        assert_eq!((rank, piv), (3, vec![0, 1, 2]));
        assert_eq!(r, GfMatrix::identity(f4.clone(), 3));
        let v = vandermonde(&f4, 2, &[Fe(0), Fe(1), f4.primitive()]);
        assert_eq!(v.rref().1, 2);
        assert_eq!(v.rank(), 2);
    }

    #[test]
    fn null_space_examples() {
        let f3 = field(3, 1);
        assert_eq!(GfMatrix::identity(f3.clone(), 4).null_space().rows(), 0);
        let ones = GfMatrix::new(f3.clone(), 1, 3, vec![Fe::ONE; 3]).unwrap();
        let ns = ones.null_space();
        assert_eq!(ns.rows(), 2);
        for r in 0..2 {
            let s = ns.row(r).iter().fold(Fe::ZERO, |a, &b| f3.add(a, b));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn row_space_examples() {
        let f9 = field(3, 2);
        let w = f9.primitive();
        let m = vandermonde(&f9, 3, &[Fe(0), Fe(1), w, f9.pow(w, 2), f9.pow(w, 5)]);
        let perm = m.select_rows(&[2, 0, 1]);
        assert!(m.row_space_equal(&perm).unwrap());
        assert!(m.row_space_equal(&m.scale(w)).unwrap());
        let smaller = m.select_rows(&[0, 1]);
        assert!(!m.row_space_equal(&smaller).unwrap());
        assert!(smaller.row_space_within(&m).unwrap());
        let other = field(3, 1);
        assert!(m.row_space_equal(&GfMatrix::zeros(other, 1, 5)).is_err());
        assert!(m.row_space_equal(&GfMatrix::zeros(f9, 1, 4)).is_err());
    }

    #[test]
    fn subset_examples() {
        let f4 = field(2, 2);
        let v = vandermonde(&f4, 2, &[Fe(0), Fe(1), f4.primitive()]);
        let verdict = all_k_subsets_nonsingular(&v, SubsetMode::Exhaustive).unwrap();
        assert!(verdict.all_nonsingular);
        assert_eq!(verdict.checked, 3);
        let dup = v.select_columns(&[0, 1, 1]);
        let verdict = all_k_subsets_nonsingular(&dup, SubsetMode::Exhaustive).unwrap();
        assert!(!verdict.all_nonsingular);
        assert_eq!(verdict.witness, Some(vec![1, 2]));
        let id = GfMatrix::identity(f4.clone(), 4);
        assert!(
            all_k_subsets_nonsingular(&id, SubsetMode::Exhaustive)
                .unwrap()
                .all_nonsingular
        );
        let wide = GfMatrix::zeros(f4, 10, 40);
        assert!(matches!(
            all_k_subsets_nonsingular(&wide, SubsetMode::Exhaustive),
            Err(MatrixError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn sampling_is_reproducible() {
        assert_eq!(sample_subsets(50, 7, 20, 3), sample_subsets(50, 7, 20, 3));
        assert_ne!(sample_subsets(50, 7, 20, 3), sample_subsets(50, 7, 20, 4));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(5, 2), 10);
        assert!(binomial(1641, 410) > SUBSET_BUDGET);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn combinations_enumerate_all() {
        let mut idx = vec![0, 1, 2];
        let mut count = 1;
        while next_combination(&mut idx, 6) {
            count += 1;
        }
        assert_eq!(count, 20);
    }
}
