use std::collections::BTreeMap;

use super::sparse::SparseVec;
use crate::scalar::Field;

/// Incrementally maintained reduced row-echelon basis.
///
/// Every stored row has leading coefficient 1 at its pivot and is zero at
/// the pivots of all other rows.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    rows: Vec<SparseVec<F>>,
    pivots: BTreeMap<usize, usize>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Echelon {
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// Remainder of `v` modulo the row space; zero at every pivot.
    pub fn reduce(&self, v: &SparseVec<F>) -> SparseVec<F> {
        let hits: Vec<(F, &SparseVec<F>)> = v
            .entries()
            .iter()
            .filter_map(|(i, x)| self.pivots.get(i).map(|&r| (-x.clone(), &self.rows[r])))
            .collect();
        if hits.is_empty() {
            return v.clone();
        }
        SparseVec::combine(std::iter::once((F::one(), v)).chain(hits))
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec<F>) -> bool {
        let w = self.reduce(v);
        let Some((pivot, lead)) = w.leading() else {
            return false;
        };
        let w = w.scale(&(F::one() / lead.clone()));
        for row in self.rows.iter_mut() {
            let c = row.get(pivot);
            if !c.is_zero() {
                *row = row.axpy(&-c, &w);
            }
        }
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(w);
        true
    }

    /// Rows ordered by increasing pivot column.
    pub fn sorted_rows(&self) -> Vec<SparseVec<F>> {
        self.pivots.values().map(|&r| self.rows[r].clone()).collect()
    }

    pub fn into_sorted_rows(self) -> Vec<SparseVec<F>> {
        let mut rows: Vec<Option<SparseVec<F>>> = self.rows.into_iter().map(Some).collect();
        self.pivots
            .values()
            .map(|&r| rows[r].take().expect("each row has one pivot"))
            .collect()
    }
}
