//! Linear differential operators on the Heisenberg group in Darboux
//! coordinates.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, SparseVec};
use crate::poly::{Polynomial, WeightedMonomial};
use crate::scalar::Field;

/// Left-invariant frame of the Heisenberg group:
/// `X_i = ∂/∂x_i`, `Y_i = ∂/∂y_i + x_i ∂/∂z`, `Z = ∂/∂z`, so that
/// `[X_i, Y_i] = Z` and `Z` is central.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    X(usize),
    Y(usize),
    Z,
}

impl Generator {
    /// Contact direction `a` in `0..2n`: `X_1..X_n` then `Y_1..Y_n`.
    pub fn contact(n: usize, a: usize) -> Generator {
        if a < n {
            Generator::X(a)
        } else {
            Generator::Y(a - n)
        }
    }

    pub fn weight(self) -> usize {
        match self {
            Generator::Z => 2,
            _ => 1,
        }
    }

    pub fn parse(n: usize, name: &str) -> Result<Generator> {
        let bad = || Error::UnknownGenerator(name.to_string());
        let name = name.trim();
        if name == "Z" {
            return Ok(Generator::Z);
        }
        let (head, tail) = name.split_at(name.len().min(1));
        let idx = if tail.is_empty() && n == 1 {
            1
        } else {
            tail.parse::<usize>().map_err(|_| bad())?
        };
        if idx == 0 || idx > n {
            return Err(bad());
        }
        match head {
            "X" => Ok(Generator::X(idx - 1)),
            "Y" => Ok(Generator::Y(idx - 1)),
            _ => Err(bad()),
        }
    }

    pub fn name(self) -> String {
        match self {
            Generator::X(i) => format!("X{}", i + 1),
            Generator::Y(i) => format!("Y{}", i + 1),
            Generator::Z => "Z".to_string(),
        }
    }

    pub fn apply<F: Field>(self, f: &Polynomial<F>) -> Polynomial<F> {
        let n = f.n();
        match self {
            Generator::X(i) => f.derivative(i),
            Generator::Y(i) => f.derivative(n + i).add(&f.derivative(2 * n).times_variable(i)),
            Generator::Z => f.derivative(2 * n),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Applies `word = [g1, .., gm]` as `g1(g2(..gm(f)))`.
pub fn apply_word<F: Field>(word: &[Generator], f: &Polynomial<F>) -> Polynomial<F> {
    word.iter().rev().fold(f.clone(), |acc, g| g.apply(&acc))
}

pub fn word_weight(word: &[Generator]) -> usize {
    word.iter().map(|g| g.weight()).sum()
}

/// A polynomial section of a trivial bundle of the given rank.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySection<F> {
    pub components: Vec<Polynomial<F>>,
}

impl<F: Field> PolySection<F> {
    pub fn new(components: Vec<Polynomial<F>>) -> Self {
        PolySection { components }
    }

    pub fn zero(n: usize, rank: usize) -> Self {
        PolySection {
            components: vec![Polynomial::zero(n); rank],
        }
    }

    /// `m · e_index` in a bundle of rank `rank`.
    pub fn basis_monomial(m: &WeightedMonomial, index: usize, rank: usize) -> Self {
        let mut s = Self::zero(m.n(), rank);
        s.components[index] = Polynomial::from_weighted(m, F::one());
        s
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Term<F> {
    pub word: Vec<Generator>,
    /// `rank_f x rank_e` polynomial coefficients.
    pub coeff: Vec<Vec<Polynomial<F>>>,
}

impl<F: Field> Term<F> {
    pub fn is_zero(&self) -> bool {
        self.coeff.iter().flatten().all(Polynomial::is_zero)
    }

    pub fn has_constant_coefficients(&self) -> bool {
        self.coeff.iter().flatten().all(Polynomial::is_constant)
    }
}

/// `D = Σ_terms coeff(x, y, z) · word`, acting from sections of a rank
/// `rank_e` bundle to sections of a rank `rank_f` bundle.
#[derive(Clone, Debug, PartialEq)]
pub struct DarbouxOperator<F> {
    n: usize,
    rank_e: usize,
    rank_f: usize,
    terms: Vec<Term<F>>,
    declared_order: Option<usize>,
}

impl<F: Field> DarbouxOperator<F> {
    pub fn new(n: usize, rank_e: usize, rank_f: usize) -> Self {
        DarbouxOperator {
            n,
            rank_e,
            rank_f,
            terms: Vec::new(),
            declared_order: None,
        }
    }

    pub fn with_declared_order(mut self, order: usize) -> Self {
        self.declared_order = Some(order);
        self
    }

    pub fn add_term(&mut self, word: Vec<Generator>, coeff: Vec<Vec<Polynomial<F>>>) -> Result<()> {
        for g in &word {
            let ok = match *g {
                Generator::X(i) | Generator::Y(i) => i < self.n,
                Generator::Z => true,
            };
            if !ok {
                return Err(Error::UnknownGenerator(g.name()));
            }
        }
        let shape_ok = coeff.len() == self.rank_f
            && coeff.iter().all(|r| r.len() == self.rank_e)
            && coeff.iter().flatten().all(|p| p.n() == self.n);
        if !shape_ok {
            return Err(Error::ShapeMismatch {
                expected: format!("{}x{} coefficient over n = {}", self.rank_f, self.rank_e, self.n),
                found: format!("{}x{}", coeff.len(), coeff.first().map_or(0, Vec::len)),
            });
        }
        self.terms.push(Term { word, coeff });
        Ok(())
    }

    /// Adds a term whose coefficient is a constant rational matrix.
    pub fn add_constant_term(&mut self, word: Vec<Generator>, coeff: &Matrix<F>) -> Result<()> {
        let n = self.n;
        let polys = coeff
            .to_dense()
            .into_iter()
            .map(|row| row.into_iter().map(|c| Polynomial::constant(n, c)).collect())
            .collect();
        self.add_term(word, polys)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank_e(&self) -> usize {
        self.rank_e
    }

    pub fn rank_f(&self) -> usize {
        self.rank_f
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn declared_order(&self) -> Option<usize> {
        self.declared_order
    }

    /// Largest weight of a word carrying a nonzero coefficient.
    pub fn weighted_order(&self) -> usize {
        self.terms
            .iter()
            .filter(|t| !t.is_zero())
            .map(|t| word_weight(&t.word))
            .max()
            .unwrap_or(0)
    }

    /// Declared order when present, otherwise the weighted order.
    pub fn order(&self) -> usize {
        self.declared_order.unwrap_or_else(|| self.weighted_order())
    }

    /// Whether all terms of weight `order()` have constant coefficients.
    pub fn has_constant_top_coefficients(&self) -> bool {
        let k = self.order();
        self.terms
            .iter()
            .filter(|t| word_weight(&t.word) == k)
            .all(Term::has_constant_coefficients)
    }

    /// Whether every term is of weight exactly `order()` with constant
    /// coefficients.
    pub fn is_homogeneous_constant(&self) -> bool {
        let k = self.order();
        self.terms
            .iter()
            .filter(|t| !t.is_zero())
            .all(|t| word_weight(&t.word) == k && t.has_constant_coefficients())
    }

    pub fn apply(&self, s: &PolySection<F>) -> Result<PolySection<F>> {
        if s.rank() != self.rank_e {
            return Err(Error::RankMismatch {
                expected: self.rank_e,
                found: s.rank(),
            });
        }
        let mut out = PolySection::zero(self.n, self.rank_f);
        for term in &self.terms {
            let derived: Vec<Polynomial<F>> = s.components.iter().map(|c| apply_word(&term.word, c)).collect();
            for (i, row) in term.coeff.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    if c.is_zero() || derived[j].is_zero() {
                        continue;
                    }
                    out.components[i] = out.components[i].add(&c.mul(&derived[j]));
                }
            }
        }
        Ok(out)
    }

    /// Enhanced symbol at the origin, a `rank_f x (#monomials · rank_e)`
    /// matrix. Column `m · rank_e + e` is `D(m e)(0)` for the `m`-th
    /// monomial of weighted degree `order()` in [`WeightedMonomial::enumerate`]
    /// order.
    pub fn enhanced_symbol(&self) -> Matrix<F> {
        let k = self.order();
        let monomials = WeightedMonomial::enumerate(self.n, k);
        let mut columns = Vec::with_capacity(monomials.len() * self.rank_e);
        for m in &monomials {
            for e in 0..self.rank_e {
                let image = self
                    .apply(&PolySection::basis_monomial(m, e, self.rank_e))
                    .expect("rank matches by construction");
                columns.push(SparseVec::from_pairs(
                    image
                        .components
                        .iter()
                        .enumerate()
                        .map(|(i, p)| (i, p.constant_term()))
                        .collect(),
                ));
            }
        }
        Matrix::from_columns(self.rank_f, &columns)
    }
}
