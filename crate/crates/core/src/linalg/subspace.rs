use super::echelon::Echelon;
use super::matrix::Matrix;
use super::sparse::SparseVec;
use crate::error::{Error, Result};
use crate::scalar::Field;

/// A linear subspace of `F^ambient_dim` stored as its reduced echelon basis.
///
/// The basis is the unique reduced row-echelon form of any spanning set
/// (equivalently, the reduced column-echelon form of the basis matrix), so
/// two values compare equal exactly when the subspaces coincide.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F> {
    ambient_dim: usize,
    basis: Vec<SparseVec<F>>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim).map(SparseVec::unit).collect(),
        }
    }

    pub fn span(ambient_dim: usize, vectors: impl IntoIterator<Item = SparseVec<F>>) -> Self {
        let mut ech = Echelon::new();
        for v in vectors {
            debug_assert!(v.max_index().is_none_or(|m| m < ambient_dim));
            ech.insert(&v);
        }
        Subspace {
            ambient_dim,
            basis: ech.into_sorted_rows(),
        }
    }

    /// Wraps vectors that are already in canonical reduced echelon order.
    pub(crate) fn from_canonical(ambient_dim: usize, basis: Vec<SparseVec<F>>) -> Self {
        let s = Subspace { ambient_dim, basis };
        debug_assert!(s.is_canonical());
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec<F>] {
        &self.basis
    }

    /// Basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn basis_matrix(&self) -> Matrix<F> {
        Matrix::from_columns(self.ambient_dim, &self.basis)
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|b| b.leading().expect("basis vectors are nonzero").0).collect()
    }

    fn echelon(&self) -> Echelon<F> {
        let mut ech = Echelon::new();
        for b in &self.basis {
            ech.insert(b);
        }
        ech
    }

    /// Remainder of `v` after subtracting its projection along the pivots.
    pub fn residual(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let terms: Vec<(F, &SparseVec<F>)> = self
            .basis
            .iter()
            .map(|b| {
                let p = b.leading().unwrap().0;
                (-v.get(p), b)
            })
            .filter(|(c, _)| !c.is_zero())
            .collect();
        SparseVec::combine(std::iter::once((F::one(), v)).chain(terms))
    }

    pub fn contains(&self, v: &SparseVec<F>) -> bool {
        self.residual(v).is_zero()
    }

    /// Coordinates in the canonical basis (the entries at the pivots).
    pub fn coordinates(&self, v: &SparseVec<F>) -> Option<Vec<F>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots().into_iter().map(|p| v.get(p)).collect())
    }

    pub fn vector_from_coordinates(&self, coords: &[F]) -> SparseVec<F> {
        assert_eq!(coords.len(), self.dim());
        SparseVec::combine(coords.iter().cloned().zip(self.basis.iter()))
    }

    pub fn is_subspace_of(&self, other: &Subspace<F>) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|b| other.contains(b))
    }

    fn check_ambient(&self, other: &Subspace<F>) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace<F>) -> Result<Subspace<F>> {
        self.check_ambient(other)?;
        let mut ech = self.echelon();
        for b in &other.basis {
            ech.insert(b);
        }
        Ok(Subspace {
            ambient_dim: self.ambient_dim,
            basis: ech.into_sorted_rows(),
        })
    }

    /// `self ∩ other`, solved as the dependencies among the residuals of
    /// `other`'s basis modulo `self`.
    pub fn intersect(&self, other: &Subspace<F>) -> Result<Subspace<F>> {
        self.check_ambient(other)?;
        let residuals: Vec<SparseVec<F>> = other.basis.iter().map(|b| self.residual(b)).collect();
        let deps = dependencies(self.ambient_dim, &residuals);
        let vectors = deps
            .basis
            .iter()
            .map(|c| SparseVec::combine(c.entries().iter().map(|(j, v)| (v.clone(), &other.basis[*j]))));
        Ok(Subspace::span(self.ambient_dim, vectors))
    }

    /// `self ⊗ other` inside the Kronecker-ordered product space.
    pub fn tensor(&self, other: &Subspace<F>) -> Subspace<F> {
        let ambient = self.ambient_dim * other.ambient_dim;
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                basis.push(a.kron(b, other.ambient_dim));
            }
        }
        // Kronecker products of canonical bases are canonical.
        Subspace::from_canonical(ambient, basis)
    }

    /// Rows of a matrix whose kernel is exactly this subspace.
    pub fn annihilator(&self) -> Matrix<F> {
        let pivots = self.pivots();
        let mut is_pivot = vec![false; self.ambient_dim];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        // For a non-pivot coordinate r: v[r] - sum_p v[p] * b_p[r] = 0.
        let mut eqs: Vec<Vec<(usize, F)>> = vec![Vec::new(); self.ambient_dim];
        for (b, &p) in self.basis.iter().zip(&pivots) {
            for (r, v) in b.entries() {
                if *r != p {
                    eqs[*r].push((p, -v.clone()));
                }
            }
        }
        let rows = (0..self.ambient_dim)
            .filter(|&r| !is_pivot[r])
            .map(|r| {
                let mut pairs = std::mem::take(&mut eqs[r]);
                pairs.push((r, F::one()));
                SparseVec::from_pairs(pairs)
            })
            .collect();
        Matrix::from_rows(self.ambient_dim, rows)
    }

    /// Image of this subspace under `m` (a map from this ambient space).
    pub fn map(&self, m: &Matrix<F>) -> Result<Subspace<F>> {
        if m.ncols() != self.ambient_dim {
            return Err(Error::AmbientMismatch {
                left: m.ncols(),
                right: self.ambient_dim,
            });
        }
        Ok(Subspace::span(m.nrows(), self.basis.iter().map(|b| m.mul_vec(b))))
    }

    fn is_canonical(&self) -> bool {
        let pivots = self.pivots();
        pivots.windows(2).all(|w| w[0] < w[1])
            && self.basis.iter().zip(&pivots).all(|(b, &p)| {
                b.leading().map(|(_, v)| *v == F::one()).unwrap_or(false)
                    && pivots.iter().all(|&q| q == p || b.get(q).is_zero())
            })
    }
}

/// Linear dependencies among `vectors` (each of length `len`), as a subspace
/// of `F^vectors.len()`.
///
/// Row-reduces `[v_j | e_j]`; rows whose pivot lands in the tag block are
/// exactly the relations, already in reduced echelon form.
pub fn dependencies<F: Field>(len: usize, vectors: &[SparseVec<F>]) -> Subspace<F> {
    let mut ech = Echelon::new();
    for (j, v) in vectors.iter().enumerate() {
        let mut pairs = v.entries().to_vec();
        pairs.push((len + j, F::one()));
        ech.insert(&SparseVec::from_pairs(pairs));
    }
    let basis = ech
        .into_sorted_rows()
        .into_iter()
        .filter(|r| r.leading().unwrap().0 >= len)
        .map(|r| r.map_indices(|i| i - len))
        .collect();
    Subspace::from_canonical(vectors.len(), basis)
}

/// Exact Moore–Penrose pseudo-inverse, used wherever a splitting of a
/// linear map has to be chosen: `m·δ·m = m` and `δ·m·δ = δ`.
pub fn splitting<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    let reduced = m.echelon().into_sorted_rows();
    let r = reduced.len();
    if r == 0 {
        return Matrix::zeros(m.ncols(), m.nrows());
    }
    // Full-rank factorisation m = B·C with C the nonzero rref rows and B the
    // pivot columns of m.
    let pivots: Vec<usize> = reduced.iter().map(|row| row.leading().unwrap().0).collect();
    let c = Matrix::from_rows(m.ncols(), reduced);
    let cols = m.column_vectors();
    let b_cols: Vec<SparseVec<F>> = pivots.iter().map(|&p| cols[p].clone()).collect();
    let b = Matrix::from_columns(m.nrows(), &b_cols);
    let ct = c.transpose();
    let bt = b.transpose();
    let cct_inv = c.mul(&ct).inverse().expect("C has full row rank");
    let btb_inv = bt.mul(&b).inverse().expect("B has full column rank");
    ct.mul(&cct_inv).mul(&btb_inv).mul(&bt)
}
