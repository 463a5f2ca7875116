#![allow(dead_code)]

use std::path::PathBuf;

use contact_prolong::document::ProblemDocument;
use contact_prolong::linalg::{dependencies, splitting, Matrix, SparseVec, Subspace};
use contact_prolong::operator::{apply_word, DarbouxOperator, Generator};
use contact_prolong::oracle::{solution_dim, solution_dim_in_order, unknown_count};
use contact_prolong::poly::{multisets, Polynomial};
use contact_prolong::prolong::{classical_chain, contact_chain_canonical, contact_level, ContactSymbol, Verdict};
use contact_prolong::{QOperator, QSymplecticSpace, Rational};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub const SEED: [u8; 32] = *b"contact-prolong-fixed-test-seed!";
pub const CASES: u32 = 128;

pub fn q(a: i64) -> Rational {
    Rational::from_integer(a.into())
}

pub fn problem_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(format!("{name}.toml"))
}

pub fn load(name: &str) -> (ProblemDocument, QOperator) {
    let src = std::fs::read_to_string(problem_path(name)).unwrap();
    let doc = ProblemDocument::parse(&src).unwrap();
    let op = doc.to_operator().unwrap();
    (doc, op)
}

pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::from_seed(RngAlgorithm::ChaCha, &SEED))
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<u32, String> {
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())?;
    Ok(cases)
}

fn small() -> impl Strategy<Value = i64> {
    prop_oneof![3 => Just(0i64), 2 => -2i64..=2]
}

pub fn polynomial(n: usize, max_terms: usize) -> impl Strategy<Value = Polynomial<Rational>> {
    let nvars = 2 * n + 1;
    prop::collection::vec((prop::collection::vec(0u32..3, nvars), -3i64..=3), 0..=max_terms).prop_map(
        move |terms| {
            terms.into_iter().fold(Polynomial::zero(n), |acc, (e, c)| {
                acc.add(&Polynomial::monomial(n, e, q(c)))
            })
        },
    )
}

fn words_of_weight(n: usize, k: usize) -> Vec<Vec<Generator>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for a in 0..2 * n {
        for mut w in words_of_weight(n, k - 1) {
            w.insert(0, Generator::contact(n, a));
            out.push(w);
        }
    }
    if k >= 2 {
        for mut w in words_of_weight(n, k - 2) {
            w.insert(0, Generator::Z);
            out.push(w);
        }
    }
    out
}

/// Shape of a random constant-coefficient operator of weighted order `k`.
#[derive(Clone, Debug)]
pub struct RandomOp {
    pub n: usize,
    pub k: usize,
    pub rank_e: usize,
    pub rank_f: usize,
    /// (index into the words of weight k, rank_f x rank_e entries)
    pub terms: Vec<(usize, Vec<i64>)>,
}

impl RandomOp {
    pub fn build(&self) -> QOperator {
        let words = words_of_weight(self.n, self.k);
        let mut op = DarbouxOperator::new(self.n, self.rank_e, self.rank_f).with_declared_order(self.k);
        for (w, entries) in &self.terms {
            let rows: Vec<Vec<Rational>> = entries.chunks(self.rank_e).map(|r| r.iter().map(|&v| q(v)).collect()).collect();
            op.add_constant_term(words[w % words.len()].clone(), &Matrix::from_dense(&rows)).unwrap();
        }
        op
    }
}

pub fn random_op(max_n: usize, max_k: usize) -> impl Strategy<Value = RandomOp> {
    (1..=max_n, 1..=max_k, 1usize..=2, 1usize..=3).prop_flat_map(|(n, k, rank_e, rank_f)| {
        prop::collection::vec((0usize..64, prop::collection::vec(small(), rank_e * rank_f)), 1..=4)
            .prop_map(move |terms| RandomOp { n, k, rank_e, rank_f, terms })
    })
}

/// A random symbol `S⊥^k ⊗ E → F` in canonical coordinates.
fn random_symbol(space: &QSymplecticSpace, k: usize, rank_e: usize, rank_f: usize, entries: &[i64]) -> ContactSymbol<Rational> {
    let cols = space.sperp(k).dim() * rank_e;
    let rows: Vec<Vec<Rational>> = (0..rank_f)
        .map(|i| (0..cols).map(|j| q(entries[(i * cols + j) % entries.len()])).collect())
        .collect();
    ContactSymbol {
        n: space.n(),
        order: k,
        rank_e,
        matrix: Matrix::from_dense(&rows),
    }
}

/// Once a level vanishes, the next two computed levels vanish as well.
pub fn check_tail_vanishing(cases: u32) -> Result<u32, String> {
    let strategy = (1usize..=2, 1usize..=2, 1usize..=2, 1usize..=4, prop::collection::vec(small(), 1..=40));
    let spaces = [QSymplecticSpace::new(1), QSymplecticSpace::new(2)];
    run(cases, strategy, |(n, k, rank_e, rank_f, entries)| {
        let k = if n == 2 { 1 } else { k };
        let space = &spaces[n - 1];
        let sym = random_symbol(space, k, rank_e, rank_f, &entries);
        let chain = contact_chain_canonical(space, &sym, 3).unwrap();
        prop_assert!(chain.tail_vanishes());
        if chain.dim_kh == 0 {
            prop_assert_eq!(contact_level(space, &sym, 1).dim(), 0);
        }
        if let Some(first_zero) = chain.levels.iter().position(|&d| d == 0) {
            for extra in 1..=2 {
                prop_assert_eq!(contact_level(space, &sym, first_zero + 1 + extra).dim(), 0);
            }
        }
        if chain.verdict == Verdict::FiniteType {
            prop_assert!(chain.rank_t.is_some());
        }
        Ok(())
    })
}

/// `[X_i, Y_j] = δ_ij Z`; every other pair of generators commutes.
pub fn check_heisenberg_relations(cases: u32) -> Result<u32, String> {
    let strategy = (1usize..=2).prop_flat_map(|n| (Just(n), polynomial(n, 6)));
    run(cases, strategy, |(n, f)| {
        let gens: Vec<Generator> = (0..2 * n).map(|a| Generator::contact(n, a)).chain([Generator::Z]).collect();
        for &g in &gens {
            for &h in &gens {
                let bracket = apply_word(&[g, h], &f).sub(&apply_word(&[h, g], &f));
                let expected = match (g, h) {
                    (Generator::X(i), Generator::Y(j)) if i == j => Generator::Z.apply(&f),
                    (Generator::Y(i), Generator::X(j)) if i == j => Generator::Z.apply(&f).scale(&q(-1)),
                    _ => Polynomial::zero(n),
                };
                prop_assert_eq!(bracket, expected);
            }
        }
        Ok(())
    })
}

/// Adding terms of lower weight, with polynomial coefficients, leaves the
/// enhanced symbol unchanged.
pub fn check_lower_order_insensitivity(cases: u32) -> Result<u32, String> {
    let strategy = random_op(2, 2).prop_flat_map(|op| {
        let n = op.n;
        let cells = op.rank_e * op.rank_f;
        let lower = prop::collection::vec(
            (0usize..64, 0usize..op.k, prop::collection::vec(polynomial(n, 2), cells)),
            1..=3,
        );
        (Just(op), lower)
    });
    run(cases, strategy, |(shape, lower)| {
        let op = shape.build();
        let base = op.enhanced_symbol();
        let mut perturbed = op.clone();
        for (w, weight, polys) in lower {
            let words = words_of_weight(shape.n, weight);
            let coeff: Vec<Vec<Polynomial<Rational>>> = polys.chunks(shape.rank_e).map(<[_]>::to_vec).collect();
            perturbed.add_term(words[w % words.len()].clone(), coeff).unwrap();
        }
        prop_assert_eq!(perturbed.enhanced_symbol(), base);
        Ok(())
    })
}

fn random_vectors(ambient: usize, count: usize) -> impl Strategy<Value = Vec<SparseVec<Rational>>> {
    prop::collection::vec(prop::collection::vec(small(), ambient), 0..=count)
        .prop_map(|vs| vs.into_iter().map(|v| SparseVec::from_dense(&v.into_iter().map(q).collect::<Vec<_>>())).collect())
}

/// `dim(a ∩ b) + dim(a + b) = dim a + dim b`, with containment checks.
pub fn check_subspace_identities(cases: u32) -> Result<u32, String> {
    let strategy = (1usize..=7).prop_flat_map(|d| (Just(d), random_vectors(d, 5), random_vectors(d, 5)));
    run(cases, strategy, |(d, va, vb)| {
        let a = Subspace::span(d, va.clone());
        let b = Subspace::span(d, vb);
        let i = a.intersect(&b).unwrap();
        let s = a.sum(&b).unwrap();
        prop_assert_eq!(i.dim() + s.dim(), a.dim() + b.dim());
        prop_assert!(i.is_subspace_of(&a) && i.is_subspace_of(&b));
        prop_assert_eq!(&i, &b.intersect(&a).unwrap());
        prop_assert_eq!(&a, &Subspace::span(d, va.into_iter().rev()));
        prop_assert_eq!(a.annihilator().kernel(), a);
        Ok(())
    })
}

fn random_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = Matrix<Rational>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(small(), c), r)
            .prop_map(|rows| Matrix::from_dense(&rows.into_iter().map(|r| r.into_iter().map(q).collect()).collect::<Vec<_>>()))
    })
}

/// `m δ m = m`, `δ m δ = δ`, and both products are symmetric.
pub fn check_splitting_identities(cases: u32) -> Result<u32, String> {
    run(cases, random_matrix(5, 5), |m| {
        let d = splitting(&m);
        prop_assert_eq!(m.mul(&d).mul(&m), m.clone());
        prop_assert_eq!(d.mul(&m).mul(&d), d.clone());
        let md = m.mul(&d);
        let dm = d.mul(&m);
        prop_assert_eq!(md.transpose(), md);
        prop_assert_eq!(dm.transpose(), dm);
        Ok(())
    })
}

/// The kernel from row reduction equals the dependencies among columns.
pub fn check_kernel_matches_dependencies(cases: u32) -> Result<u32, String> {
    run(cases, random_matrix(6, 7), |m| {
        let k = m.kernel();
        prop_assert_eq!(&dependencies(m.nrows(), &m.column_vectors()), &k);
        prop_assert_eq!(k.dim() + m.rank(), m.ncols());
        for b in k.basis() {
            prop_assert!(m.mul_vec(b).is_zero());
        }
        prop_assert_eq!(m.rref().rref(), m.rref());
        Ok(())
    })
}

/// Contact symbol induced by a symbol on `⊙^k ⊗ E` through symmetrization.
fn contact_from_classical(space: &QSymplecticSpace, k: usize, rank_e: usize, classical: &Matrix<Rational>) -> ContactSymbol<Rational> {
    let d = space.dim();
    let index: std::collections::HashMap<Vec<usize>, usize> =
        multisets(d, k).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut orderings = vec![0i64; index.len()];
    for flat in 0..space.tensor_dim(k) {
        let mut key = contact_prolong::symplectic::TensorIndex::unflatten(flat, k, d).0;
        key.sort_unstable();
        orderings[index[&key]] += 1;
    }
    let cl_cols = classical.column_vectors();
    let mut cols = Vec::new();
    for s in space.sperp(k).basis() {
        // Symmetric projection: coefficient of e_M is the mean entry over M.
        let mut sums = vec![q(0); index.len()];
        for (flat, v) in s.entries() {
            let mut key = contact_prolong::symplectic::TensorIndex::unflatten(*flat, k, d).0;
            key.sort_unstable();
            let j = index[&key];
            sums[j] = sums[j].clone() + v.clone();
        }
        for e in 0..rank_e {
            let terms: Vec<(Rational, SparseVec<Rational>)> = sums
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != q(0))
                .map(|(j, c)| (c.clone() / q(orderings[j]), cl_cols[j * rank_e + e].clone()))
                .collect();
            cols.push(SparseVec::combine(terms.iter().map(|(c, v)| (c.clone(), v))));
        }
    }
    ContactSymbol {
        n: space.n(),
        order: k,
        rank_e,
        matrix: Matrix::from_columns(classical.nrows(), &cols),
    }
}

/// For symbols on `⊙^k ⊗ E`, `dim K^ℓ ≤ dim K_H^ℓ` level by level.
pub fn check_classical_below_contact(cases: u32) -> Result<u32, String> {
    let space = QSymplecticSpace::new(1);
    let strategy = (1usize..=2, 1usize..=2, 1usize..=3, prop::collection::vec(small(), 1..=30));
    run(cases, strategy, |(k, rank_e, rank_f, entries)| {
        let cols = multisets(2, k).len() * rank_e;
        let rows: Vec<Vec<Rational>> = (0..rank_f)
            .map(|i| (0..cols).map(|j| q(entries[(i * cols + j) % entries.len()])).collect())
            .collect();
        let classical = Matrix::from_dense(&rows);
        let cl = classical_chain(&classical, 2, k, 3).unwrap();
        let contact = contact_from_classical(&space, k, rank_e, &classical);
        prop_assert!(cl.dim_kh <= contact.matrix.kernel().dim());
        for (l, &d) in cl.levels.iter().enumerate() {
            prop_assert!(d <= contact_level(&space, &contact, l + 1).dim(), "level {}", l + 1);
        }
        Ok(())
    })
}

/// Oracle dimensions do not depend on the order of the unknowns.
pub fn check_oracle_permutation(cases: u32) -> Result<u32, String> {
    let strategy = random_op(1, 2).prop_flat_map(|op| {
        let count = unknown_count(&op.build(), 3);
        (Just(op), Just((0..count).collect::<Vec<usize>>()).prop_shuffle())
    });
    run(cases, strategy, |(shape, order)| {
        let op = shape.build();
        prop_assert_eq!(solution_dim_in_order(&op, 3, &order), solution_dim(&op, 3));
        Ok(())
    })
}

