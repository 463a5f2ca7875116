//! Brute-force polynomial solution spaces, filtered by weighted degree.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dependencies, Echelon, SparseVec};
use crate::operator::{DarbouxOperator, PolySection};
use crate::prolong::FlatConnection;
use crate::poly::{Exponents, Polynomial, WeightedMonomial};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SolutionProfile {
    /// Entry `N` is the dimension of polynomial solutions of weighted
    /// degree at most `N`.
    pub dims_by_degree: Vec<usize>,
    /// Present when the last `window + 1` entries agree. A heuristic, not a
    /// certificate.
    pub stabilized_dim: Option<usize>,
}

/// The linear map "coefficients of σ → coefficients of Dσ" on sections of
/// weighted degree at most `max_degree`.
struct Discretized<F> {
    unknowns: Vec<(WeightedMonomial, usize)>,
    columns: Vec<SparseVec<F>>,
    rows: usize,
}

fn discretize<F: Field>(op: &DarbouxOperator<F>, max_degree: usize) -> Discretized<F> {
    let r = op.rank_e();
    let mut unknowns = Vec::new();
    for m in WeightedMonomial::enumerate_up_to(op.n(), max_degree) {
        for e in 0..r {
            unknowns.push((m.clone(), e));
        }
    }
    let mut index: HashMap<(Exponents, usize), usize> = HashMap::new();
    let mut columns = Vec::with_capacity(unknowns.len());
    for (m, e) in &unknowns {
        let image = op
            .apply(&PolySection::basis_monomial(m, *e, r))
            .expect("rank matches by construction");
        let mut pairs = Vec::new();
        for (f, p) in image.components.iter().enumerate() {
            for (exp, c) in p.terms() {
                let next = index.len();
                let row = *index.entry((exp.clone(), f)).or_insert(next);
                pairs.push((row, c.clone()));
            }
        }
        columns.push(SparseVec::from_pairs(pairs));
    }
    Discretized {
        unknowns,
        columns,
        rows: index.len(),
    }
}

/// `dim {σ polynomial, weighted degree ≤ max_degree : Dσ = 0}`.
pub fn solution_dim<F: Field>(op: &DarbouxOperator<F>, max_degree: usize) -> usize {
    let disc = discretize(op, max_degree);
    let mut ech = Echelon::new();
    for c in &disc.columns {
        ech.insert(c);
    }
    disc.columns.len() - ech.rank()
}

/// Same count with the unknowns visited in the given order (a permutation
/// of the monomial-times-component enumeration).
pub fn solution_dim_in_order<F: Field>(op: &DarbouxOperator<F>, max_degree: usize, order: &[usize]) -> usize {
    let disc = discretize(op, max_degree);
    assert_eq!(order.len(), disc.columns.len(), "order must be a permutation of the unknowns");
    let permuted: Vec<SparseVec<F>> = order.iter().map(|&i| disc.columns[i].clone()).collect();
    permuted.len() - {
        let mut ech = Echelon::new();
        for c in &permuted {
            ech.insert(c);
        }
        ech.rank()
    }
}

pub fn unknown_count<F: Field>(op: &DarbouxOperator<F>, max_degree: usize) -> usize {
    WeightedMonomial::enumerate_up_to(op.n(), max_degree).len() * op.rank_e()
}

/// A basis of the polynomial solutions of weighted degree at most
/// `max_degree`.
pub fn solution_space<F: Field>(op: &DarbouxOperator<F>, max_degree: usize) -> Vec<PolySection<F>> {
    let disc = discretize(op, max_degree);
    let kernel = dependencies(disc.rows, &disc.columns);
    let n = op.n();
    kernel
        .basis()
        .iter()
        .map(|v| {
            let mut s = PolySection::zero(n, op.rank_e());
            for (u, c) in v.entries() {
                let (m, e) = &disc.unknowns[*u];
                s.components[*e] = s.components[*e].add(&Polynomial::from_weighted(m, c.clone()));
            }
            s
        })
        .collect()
}

/// Solution dimensions for every degree cap `0..=max_degree`, computed in a
/// single elimination pass over the unknowns sorted by weighted degree.
pub fn stabilized_dim<F: Field>(op: &DarbouxOperator<F>, max_degree: usize, window: usize) -> Result<SolutionProfile> {
    if max_degree < window {
        return Err(Error::Precondition(format!(
            "degree cap {max_degree} is smaller than the stabilization window {window}"
        )));
    }
    let disc = discretize(op, max_degree);
    let mut ech = Echelon::new();
    let mut dims = Vec::with_capacity(max_degree + 1);
    let mut next = 0;
    for cap in 0..=max_degree {
        while next < disc.unknowns.len() && disc.unknowns[next].0.weighted_degree() as usize <= cap {
            ech.insert(&disc.columns[next]);
            next += 1;
        }
        dims.push(next - ech.rank());
    }
    let tail = &dims[dims.len() - window - 1..];
    let stabilized_dim = tail.iter().all(|&d| d == tail[0]).then_some(tail[0]);
    Ok(SolutionProfile {
        dims_by_degree: dims,
        stabilized_dim,
    })
}

pub fn verify_solution<F: Field>(op: &DarbouxOperator<F>, s: &PolySection<F>) -> Result<bool> {
    Ok(op.apply(s)?.is_zero())
}

/// Rank of a family of sections, as vectors of coefficients.
pub fn section_rank<F: Field>(sections: &[PolySection<F>]) -> usize {
    let mut index: HashMap<(Exponents, usize), usize> = HashMap::new();
    let mut ech = Echelon::new();
    for s in sections {
        let mut pairs = Vec::new();
        for (e, p) in s.components.iter().enumerate() {
            for (exp, c) in p.terms() {
                let next = index.len();
                pairs.push((*index.entry((exp.clone(), e)).or_insert(next), c.clone()));
            }
        }
        ech.insert(&SparseVec::from_pairs(pairs));
    }
    ech.rank()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectionCheck {
    pub max_degree: usize,
    pub parallel_dim: usize,
    pub solution_dim: usize,
    /// The E-projection of a basis of parallel sections is a basis of the
    /// polynomial solutions.
    pub projection_bijective: bool,
}

/// Compares polynomial parallel sections of `conn` with polynomial solutions
/// of `op`, both of weighted degree at most `max_degree`.
pub fn check_connection<F: Field>(
    op: &DarbouxOperator<F>,
    conn: &FlatConnection<F>,
    max_degree: usize,
) -> Result<ConnectionCheck> {
    let parallel = solution_space(&conn.parallel_operator(op.n())?, max_degree);
    let solution_dim = solution_dim(op, max_degree);
    let projected: Vec<PolySection<F>> = parallel.iter().map(|s| conn.project(s)).collect();
    let mut solves = true;
    for s in &projected {
        solves &= verify_solution(op, s)?;
    }
    let projection_bijective =
        solves && section_rank(&projected) == parallel.len() && parallel.len() == solution_dim;
    Ok(ConnectionCheck {
        max_degree,
        parallel_dim: parallel.len(),
        solution_dim,
        projection_bijective,
    })
}
