//! Representation theory of `C_r = sp(2r)`: Weyl dimensions, the bounding
//! representation of the solution space, and Cartan-type symbols.
//!
//! Weights are written over the fundamental weights `ω_1..ω_r` with `ω_1`
//! the defining representation and `ω_r` on the long simple root, so that
//! `(0, 1)` labels the 5-dimensional representation of `C_2`.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::poly::multisets;
use crate::prolong::{contact_chain_canonical, ContactSymbol, Verdict};
use crate::scalar::Field;
use crate::symplectic::{sym_dim, symmetrized_unit, SymplecticSpace, TensorIndex};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HighestWeight {
    pub labels: Vec<u32>,
}

impl HighestWeight {
    pub fn new(labels: Vec<u32>) -> Self {
        HighestWeight { labels }
    }

    pub fn zero(rank: usize) -> Self {
        HighestWeight { labels: vec![0; rank] }
    }

    /// `(m, 0, .., 0)`, the weight of `⊙^m` of the defining representation.
    pub fn symmetric_power(rank: usize, m: u32) -> Self {
        let mut labels = vec![0; rank];
        if rank > 0 {
            labels[0] = m;
        }
        HighestWeight { labels }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    /// Coordinates of `λ` in the orthonormal basis `ε_i`.
    fn epsilon_coordinates(&self) -> Vec<i64> {
        let r = self.labels.len();
        (0..r)
            .map(|i| self.labels[i..].iter().map(|&a| a as i64).sum())
            .collect()
    }
}

impl std::fmt::Display for HighestWeight {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.labels.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Weyl dimension formula for `C_r`: the product over positive roots
/// `ε_i ± ε_j` and `2ε_i` of `⟨λ+ρ, α^∨⟩ / ⟨ρ, α^∨⟩`, evaluated exactly.
pub fn weyl_dim(w: &HighestWeight) -> BigInt {
    let r = w.rank();
    let lam = w.epsilon_coordinates();
    let rho: Vec<i64> = (0..r).map(|i| (r - i) as i64).collect();
    let shifted: Vec<i64> = lam.iter().zip(&rho).map(|(a, b)| a + b).collect();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..r {
        for j in i + 1..r {
            num *= BigInt::from((shifted[i] - shifted[j]) * (shifted[i] + shifted[j]));
            den *= BigInt::from((rho[i] - rho[j]) * (rho[i] + rho[j]));
        }
        num *= BigInt::from(shifted[i]);
        den *= BigInt::from(rho[i]);
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

pub fn weyl_dim_usize(w: &HighestWeight) -> usize {
    weyl_dim(w).to_usize().expect("dimension fits in usize")
}

/// Weight of `C_{n+1}` whose dimension bounds the solutions of an order-`k`
/// operator with Cartan-type symbol on the bundle of weight `e`: `k − 1`
/// prepended to the labels of `e`.
pub fn bound_weight(e: &HighestWeight, order: usize) -> Result<HighestWeight> {
    if order == 0 {
        return Err(Error::Precondition("operator order must be at least 1".into()));
    }
    let mut labels = Vec::with_capacity(e.rank() + 1);
    labels.push((order - 1) as u32);
    labels.extend_from_slice(&e.labels);
    Ok(HighestWeight { labels })
}

pub fn cartan_product(a: &HighestWeight, b: &HighestWeight) -> Result<HighestWeight> {
    if a.rank() != b.rank() {
        return Err(Error::WeightRankMismatch {
            left: a.rank(),
            right: b.rank(),
        });
    }
    Ok(HighestWeight {
        labels: a.labels.iter().zip(&b.labels).map(|(x, y)| x + y).collect(),
    })
}

/// Canonical basis of `⊙^m ⊆ ⊗^m`, one vector per multiset.
fn sym_basis<F: Field>(d: usize, m: usize) -> Vec<SparseVec<F>> {
    multisets(d, m).iter().map(|ms| symmetrized_unit(ms, d)).collect()
}

/// The Cartan-type symbol `S⊥^k ⊗ ⊙^m → ⊙^{k+m}`: total symmetrization,
/// which kills every `L_ab` slot. Rows are indexed by multisets of size
/// `k + m`, read as the sum of a tensor's entries over the orderings.
pub fn cartan_symbol<F: Field>(space: &SymplecticSpace<F>, order: usize, m: usize) -> ContactSymbol<F> {
    let d = space.dim();
    let sperp = space.sperp(order);
    let e_basis = sym_basis::<F>(d, m);
    let target: std::collections::HashMap<Vec<usize>, usize> =
        multisets(d, order + m).into_iter().enumerate().map(|(i, ms)| (ms, i)).collect();
    let em = space.tensor_dim(m);
    let mut columns = Vec::with_capacity(sperp.dim() * e_basis.len());
    for s in sperp.basis() {
        for u in &e_basis {
            let product = s.kron(u, em);
            let pairs = product
                .entries()
                .iter()
                .map(|(idx, v)| {
                    let mut key = TensorIndex::unflatten(*idx, order + m, d).0;
                    key.sort_unstable();
                    (target[&key], v.clone())
                })
                .collect();
            columns.push(SparseVec::from_pairs(pairs));
        }
    }
    ContactSymbol {
        n: space.n(),
        order,
        rank_e: e_basis.len(),
        matrix: Matrix::from_columns(target.len(), &columns),
    }
}

/// `K_H ⊆ S⊥^k ⊗ ⊙^m`, realized inside `⊗^{k+m}`.
pub fn cartan_symbol_kernel<F: Field>(space: &SymplecticSpace<F>, order: usize, m: usize) -> Subspace<F> {
    let d = space.dim();
    let symbol = cartan_symbol(space, order, m);
    let sperp = space.sperp(order);
    let e_basis = sym_basis::<F>(d, m);
    let r = e_basis.len();
    let em = space.tensor_dim(m);
    let kernel = symbol.matrix.kernel();
    let vectors = kernel.basis().iter().map(|c| {
        SparseVec::combine(
            c.entries()
                .iter()
                .map(|(col, v)| (v.clone(), sperp.basis()[col / r].kron(&e_basis[col % r], em)))
                .collect::<Vec<_>>()
                .iter()
                .map(|(v, t)| (v.clone(), t)),
        )
    });
    Subspace::span(space.tensor_dim(order + m), vectors.collect::<Vec<_>>())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedReport {
    pub n: usize,
    pub order: usize,
    pub m: usize,
    pub dims_vj: Vec<usize>,
    pub total: usize,
    pub bound_weight: HighestWeight,
    pub weyl_total: usize,
    pub passed: bool,
}

/// Default level cap for Cartan-type symbols: `2(k + m + 2n)`.
pub fn cartan_level_cap(n: usize, order: usize, m: usize) -> usize {
    2 * (order + m + 2 * n)
}

/// Compares `Σ_j dim 𝕍_j` (jets below the order, then the contact chain of
/// the Cartan-type symbol on `⊙^m`) with the Weyl dimension of the bounding
/// representation of `C_{n+1}`.
pub fn graded_check<F: Field>(space: &SymplecticSpace<F>, order: usize, m: usize, level_cap: usize) -> Result<GradedReport> {
    let n = space.n();
    if order == 0 {
        return Err(Error::Precondition("operator order must be at least 1".into()));
    }
    let r = sym_dim(space.dim(), m);
    let symbol = cartan_symbol(space, order, m);
    let chain = contact_chain_canonical(space, &symbol, level_cap)?;
    if chain.verdict != Verdict::FiniteType {
        return Err(Error::NotTerminated(level_cap));
    }
    let mut dims_vj: Vec<usize> = (0..order).map(|j| space.sperp(j).dim() * r).collect();
    dims_vj.extend(chain.graded_tail());
    let total = dims_vj.iter().sum();
    let bound = bound_weight(&HighestWeight::symmetric_power(n, m as u32), order)?;
    let weyl_total = weyl_dim_usize(&bound);
    Ok(GradedReport {
        n,
        order,
        m,
        dims_vj,
        total,
        bound_weight: bound,
        weyl_total,
        passed: total == weyl_total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn dim(labels: &[u32]) -> usize {
        weyl_dim_usize(&HighestWeight::new(labels.to_vec()))
    }

    #[test]
    fn weyl_values() {
        assert_eq!(dim(&[0, 0]), 1);
        assert_eq!(dim(&[0, 1]), 5);
        assert_eq!(dim(&[1, 0]), 4);
        assert_eq!(dim(&[0, 3]), 30);
        assert_eq!(dim(&[1, 3, 0]), 1344);
        assert_eq!(dim(&[1, 2, 0]), 350);
        assert_eq!(dim(&[0, 1, 0]), 14);
        assert_eq!(dim(&[2]), 3);
        assert_eq!(dim(&[]), 1);
    }

    #[test]
    fn series_closed_form() {
        for k in 0..=6u32 {
            let k64 = k as usize;
            assert_eq!(dim(&[0, k]), (k64 + 1) * (k64 + 2) * (2 * k64 + 3) / 6);
        }
    }

    #[test]
    fn bound_and_product() {
        let e = HighestWeight::new(vec![3, 0]);
        assert_eq!(bound_weight(&e, 2).unwrap().labels, vec![1, 3, 0]);
        assert_eq!(bound_weight(&HighestWeight::symmetric_power(2, 4), 1).unwrap().labels, vec![0, 4, 0]);
        assert_eq!(bound_weight(&HighestWeight::zero(3), 1).unwrap(), HighestWeight::zero(4));
        assert!(bound_weight(&e, 0).is_err());
        let a = HighestWeight::new(vec![1, 0]);
        assert_eq!(cartan_product(&a, &a).unwrap().labels, vec![2, 0]);
        let w = HighestWeight::new(vec![2, 1, 3]);
        assert_eq!(cartan_product(&w, &HighestWeight::zero(3)).unwrap(), w);
        assert_eq!(
            cartan_product(&HighestWeight::symmetric_power(3, 2), &w).unwrap().labels,
            vec![4, 1, 3]
        );
        assert!(matches!(cartan_product(&a, &w), Err(Error::WeightRankMismatch { .. })));
        assert_eq!(w.to_string(), "(2,1,3)");
    }

    #[test]
    fn symbol_kernels() {
        let s1 = SymplecticSpace::<Rational>::new(1);
        assert_eq!(cartan_symbol_kernel(&s1, 1, 1).dim(), 1);
        assert_eq!(cartan_symbol_kernel(&s1, 1, 0).dim(), 0);
        assert_eq!(cartan_symbol_kernel(&s1, 1, 2).dim(), 2);
        let s2 = SymplecticSpace::<Rational>::new(2);
        for (k, m) in [(1, 1), (2, 1), (1, 2)] {
            let kernel = cartan_symbol_kernel(&s2, k, m);
            let expected = s2.sperp(k).dim() * sym_dim(4, m) - weyl_dim_usize(&HighestWeight::symmetric_power(2, (k + m) as u32));
            assert_eq!(kernel.dim(), expected, "k={k} m={m}");
            assert!(kernel.is_subspace_of(&s2.sperp(k).tensor(&s2.sym_subspace(m))));
        }
    }

    #[test]
    fn graded_examples() {
        let s1 = SymplecticSpace::<Rational>::new(1);
        let r = graded_check(&s1, 1, 1, 8).unwrap();
        assert_eq!((r.dims_vj.clone(), r.weyl_total, r.passed), (vec![2, 1, 2], 5, true));
        let r = graded_check(&s1, 1, 2, 8).unwrap();
        assert_eq!((r.dims_vj.clone(), r.total, r.passed), (vec![3, 2, 4, 2, 3], 14, true));
        let r = graded_check(&s1, 1, 0, 8).unwrap();
        assert_eq!((r.total, r.weyl_total), (1, 1));
        assert!(matches!(graded_check(&s1, 1, 2, 2), Err(Error::NotTerminated(2))));
    }
}
