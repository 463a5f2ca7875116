//! Exact sparse linear algebra over a [`Field`](crate::Field).

mod echelon;
mod matrix;
mod sparse;
mod subspace;

pub use echelon::Echelon;
pub use matrix::Matrix;
pub use sparse::SparseVec;
pub use subspace::{dependencies, splitting, Subspace};

/// Reduced row-echelon form of `m`.
pub fn rref<F: crate::Field>(m: &Matrix<F>) -> Matrix<F> {
    m.rref()
}

/// Null space of `m` as a subspace of its domain.
pub fn kernel<F: crate::Field>(m: &Matrix<F>) -> Subspace<F> {
    m.kernel()
}

pub fn intersect<F: crate::Field>(a: &Subspace<F>, b: &Subspace<F>) -> crate::Result<Subspace<F>> {
    a.intersect(b)
}

pub fn tensor_subspace<F: crate::Field>(a: &Subspace<F>, b: &Subspace<F>) -> Subspace<F> {
    a.tensor(b)
}
