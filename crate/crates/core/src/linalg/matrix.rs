use std::fmt;

use super::echelon::Echelon;
use super::sparse::SparseVec;
use super::subspace::Subspace;
use crate::scalar::Field;

/// Below this many columns `rref` works on dense rows.
const DENSE_CUTOFF: usize = 64;

/// Sparse row-major matrix; no stored zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec<F>>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![SparseVec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix {
            rows: n,
            cols: n,
            data: (0..n).map(SparseVec::unit).collect(),
        }
    }

    pub fn from_rows(cols: usize, data: Vec<SparseVec<F>>) -> Self {
        debug_assert!(data.iter().all(|r| r.max_index().is_none_or(|m| m < cols)));
        Matrix {
            rows: data.len(),
            cols,
            data,
        }
    }

    pub fn from_columns(rows: usize, columns: &[SparseVec<F>]) -> Self {
        let mut pairs: Vec<Vec<(usize, F)>> = vec![Vec::new(); rows];
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.entries() {
                pairs[*i].push((j, v.clone()));
            }
        }
        Matrix {
            rows,
            cols: columns.len(),
            data: pairs.into_iter().map(SparseVec::from_pairs).collect(),
        }
    }

    pub fn from_dense(rows: &[Vec<F>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged dense matrix");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| SparseVec::from_dense(r)).collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<F>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| F::from_i64(v)).collect())
            .collect();
        Self::from_dense(&dense)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(SparseVec::is_zero)
    }

    pub fn row(&self, i: usize) -> &SparseVec<F> {
        &self.data[i]
    }

    pub fn row_vectors(&self) -> &[SparseVec<F>] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> F {
        self.data[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        let delta = v - self.data[i].get(j);
        self.data[i] = self.data[i].axpy(&delta, &SparseVec::unit(j));
    }

    pub fn to_dense(&self) -> Vec<Vec<F>> {
        self.data.iter().map(|r| r.to_dense(self.cols)).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_columns(self.cols, &self.data)
    }

    pub fn column_vectors(&self) -> Vec<SparseVec<F>> {
        self.transpose().data
    }

    pub fn mul_vec(&self, v: &SparseVec<F>) -> SparseVec<F> {
        SparseVec::from_pairs(
            self.data
                .iter()
                .enumerate()
                .map(|(i, r)| (i, r.dot(v)))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let data = self
            .data
            .iter()
            .map(|r| SparseVec::combine(r.entries().iter().map(|(k, v)| (v.clone(), &other.data[*k]))))
            .collect();
        Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        }
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, s: &F) -> Matrix<F> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.scale(s)).collect(),
        }
    }

    pub fn kron(&self, other: &Matrix<F>) -> Matrix<F> {
        let mut data = Vec::with_capacity(self.rows * other.rows);
        for a in &self.data {
            for b in &other.data {
                data.push(a.kron(b, other.cols));
            }
        }
        Matrix {
            rows: self.rows * other.rows,
            cols: self.cols * other.cols,
            data,
        }
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row-echelon form; nonzero rows first, same shape as `self`.
    pub fn rref(&self) -> Matrix<F> {
        let mut rows = if self.cols < DENSE_CUTOFF {
            dense_rref(&self.to_dense())
                .into_iter()
                .map(|r| SparseVec::from_dense(&r))
                .collect::<Vec<_>>()
        } else {
            self.echelon().into_sorted_rows()
        };
        rows.truncate(self.rows);
        rows.resize(self.rows, SparseVec::new());
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: rows,
        }
    }

    pub fn echelon(&self) -> Echelon<F> {
        let mut ech = Echelon::new();
        for r in &self.data {
            ech.insert(r);
        }
        ech
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Null space as a subspace of the domain.
    pub fn kernel(&self) -> Subspace<F> {
        let ech = self.echelon();
        let rows = ech.into_sorted_rows();
        let pivots: Vec<usize> = rows.iter().map(|r| r.leading().unwrap().0).collect();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut kernel_pairs: Vec<Vec<(usize, F)>> = vec![Vec::new(); self.cols];
        for (row, &p) in rows.iter().zip(&pivots) {
            for (j, v) in row.entries() {
                if *j != p {
                    kernel_pairs[*j].push((p, -v.clone()));
                }
            }
        }
        let vectors = (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut pairs = std::mem::take(&mut kernel_pairs[f]);
                pairs.push((f, F::one()));
                SparseVec::from_pairs(pairs)
            })
            .collect::<Vec<_>>();
        Subspace::span(self.cols, vectors)
    }

    /// Column space as a subspace of the codomain.
    pub fn image(&self) -> Subspace<F> {
        Subspace::span(self.rows, self.column_vectors())
    }

    pub fn inverse(&self) -> Option<Matrix<F>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug: Vec<Vec<F>> = self.to_dense();
        for (i, row) in aug.iter_mut().enumerate() {
            row.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
        }
        let reduced = dense_rref(&aug);
        let mut out = Vec::with_capacity(n);
        for (i, row) in reduced.into_iter().enumerate() {
            if row[i] != F::one() || row[..n].iter().enumerate().any(|(j, v)| j != i && !v.is_zero()) {
                return None;
            }
            out.push(row[n..].to_vec());
        }
        Some(Matrix::from_dense(&out))
    }
}

fn dense_rref<F: Field>(m: &[Vec<F>]) -> Vec<Vec<F>> {
    let mut a: Vec<Vec<F>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = F::one() / a[r][c].clone();
        for v in a[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row).skip(c) {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        r += 1;
    }
    a
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_dense() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    /// Determinant by cofactor expansion, independent of elimination.
    fn det(m: &[Vec<Rational>]) -> Rational {
        if m.is_empty() {
            return q(1);
        }
        let mut total = q(0);
        for (j, a) in m[0].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let term = a.clone() * det(&minor);
            total = if j % 2 == 0 { total + term } else { total - term };
        }
        total
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        crate::poly::multisets(n, k)
            .into_iter()
            .filter(|s| s.windows(2).all(|w| w[0] < w[1]))
            .collect()
    }

    fn rank_by_minors(m: &[Vec<Rational>]) -> usize {
        let (r, c) = (m.len(), m[0].len());
        (1..=r.min(c))
            .rev()
            .find(|&k| {
                subsets(r, k).iter().any(|rows| {
                    subsets(c, k).iter().any(|cols| {
                        let sub: Vec<Vec<Rational>> =
                            rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect();
                        !det(&sub).is_zero()
                    })
                })
            })
            .unwrap_or(0)
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::<Rational>::identity(3);
        assert_eq!(id.rref(), id);
        let m = Matrix::<Rational>::from_i64(&[&[2, 4], &[1, 2]]);
        assert_eq!(m.rref(), Matrix::from_i64(&[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn random_rank_three_matches_minor_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let a: Vec<Vec<Rational>> =
                (0..5).map(|_| (0..3).map(|_| Rational::new(rng.gen_range(-4..5).into(), rng.gen_range(1..4).into())).collect()).collect();
            let b: Vec<Vec<Rational>> = (0..3).map(|_| (0..7).map(|_| q(rng.gen_range(-3..4))).collect()).collect();
            let m = Matrix::from_dense(&a).mul(&Matrix::from_dense(&b));
            let expected = rank_by_minors(&m.to_dense());
            let reduced = m.rref();
            assert_eq!(reduced.rank(), expected);
            assert_eq!(m.rank(), expected);
            assert_eq!(reduced.rref(), reduced);
            assert!(expected <= 3);
        }
    }

    #[test]
    fn sparse_and_dense_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let dense: Vec<Vec<Rational>> = (0..6)
            .map(|_| (0..70).map(|_| if rng.gen_bool(0.1) { q(rng.gen_range(-3..4)) } else { q(0) }).collect())
            .collect();
        let wide = Matrix::from_dense(&dense).rref();
        let via_dense = Matrix::from_dense(&dense_rref(&dense));
        assert_eq!(wide, via_dense);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::<Rational>::zeros(2, 4).kernel(), Subspace::full(4));
        assert_eq!(Matrix::<Rational>::identity(3).kernel().dim(), 0);
        let m = Matrix::<Rational>::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = m.kernel();
        assert_eq!(k.dim(), 2);
        for b in k.basis() {
            assert!(m.mul_vec(b).is_zero());
        }
    }

    #[test]
    fn inverse_and_products() {
        let m = Matrix::<Rational>::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2));
        assert!(Matrix::<Rational>::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
        let k = Matrix::<Rational>::identity(2).kron(&m);
        assert_eq!((k.nrows(), k.ncols(), k.get(3, 2)), (4, 4, q(1)));
        assert_eq!(m.transpose().transpose(), m);
    }
}
