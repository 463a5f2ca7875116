//! Tensor spaces over the contact distribution of the flat model: the
//! Levi form, symmetric tensors, the spaces `S⊥^ℓ`, and the weighted
//! monomial model of `S⊥^k`.
//!
//! Covector index `a ∈ 0..2n` stands for `dx_1..dx_n, dy_1..dy_n`. A tensor
//! index `(a_1, .., a_ℓ)` is flattened lexicographically with `a_1` most
//! significant, which agrees with Kronecker ordering of `V ⊗ W`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::Result;
use crate::linalg::{Matrix, SparseVec, Subspace};
use crate::operator::Generator;
use crate::poly::{multisets, Polynomial, WeightedMonomial};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorIndex(pub Vec<usize>);

impl TensorIndex {
    pub fn flatten(&self, d: usize) -> usize {
        self.0.iter().fold(0, |acc, &a| acc * d + a)
    }

    pub fn unflatten(mut idx: usize, len: usize, d: usize) -> TensorIndex {
        let mut out = vec![0; len];
        for slot in out.iter_mut().rev() {
            *slot = idx % d;
            idx /= d;
        }
        TensorIndex(out)
    }
}

/// The symplectic vector space `(ℝ^{2n})*` with Levi form `L_ab`.
///
/// Sign convention: `L_{x_i y_i} = -1`, `L_{y_i x_i} = 1` (so `L = dφ` for
/// the contact form `φ = dz - Σ x_i dy_i`), and `L^{ab}` is fixed by
/// `L^{ab} L_{ac} = δ^b_c`. With these choices the `n = 1` homomorphism
/// `φ_abc ↦ L^{ab}(φ_abc − φ_cab)` sends `dx⊗dy⊗dx` to `−2 dx`.
#[derive(Debug)]
pub struct SymplecticSpace<F> {
    n: usize,
    levi: Matrix<F>,
    levi_inv: Matrix<F>,
    sperp_cache: Mutex<HashMap<usize, Arc<Subspace<F>>>>,
}

impl<F: Field> SymplecticSpace<F> {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "contact dimension parameter must be positive");
        let d = 2 * n;
        let mut levi = Matrix::zeros(d, d);
        for i in 0..n {
            levi.set(i, n + i, -F::one());
            levi.set(n + i, i, F::one());
        }
        let levi_inv = levi_inverse(&levi);
        SymplecticSpace {
            n,
            levi,
            levi_inv,
            sperp_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension `2n` of the contact covector space.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn tensor_dim(&self, l: usize) -> usize {
        self.dim().pow(l as u32)
    }

    pub fn levi(&self) -> &Matrix<F> {
        &self.levi
    }

    pub fn levi_inv(&self) -> &Matrix<F> {
        &self.levi_inv
    }

    /// `L_ab` as a vector of `⊗²`.
    pub fn levi_tensor(&self) -> SparseVec<F> {
        let d = self.dim();
        SparseVec::from_pairs(
            (0..d)
                .flat_map(|a| (0..d).map(move |b| (a, b)))
                .map(|(a, b)| (a * d + b, self.levi.get(a, b)))
                .collect(),
        )
    }

    /// Torus weight of a flattened tensor index (`dx_i ↦ +e_i`,
    /// `dy_i ↦ −e_i`); `S⊥^ℓ` is spanned by weight vectors.
    pub fn weight(&self, idx: usize, len: usize) -> Vec<i32> {
        let mut w = vec![0i32; self.n];
        for a in TensorIndex::unflatten(idx, len, self.dim()).0 {
            if a < self.n {
                w[a] += 1;
            } else {
                w[a - self.n] -= 1;
            }
        }
        w
    }

    /// Totally symmetric tensors `⊙^m ⊆ ⊗^m`, one basis vector per multiset
    /// (the sum over its distinct orderings).
    pub fn sym_subspace(&self, m: usize) -> Subspace<F> {
        let d = self.dim();
        let vectors = multisets(d, m)
            .into_iter()
            .map(|ms| symmetrized_unit(&ms, d))
            .collect::<Vec<_>>();
        Subspace::span(self.tensor_dim(m), vectors)
    }

    /// `S⊥^ℓ ⊆ ⊗^ℓ`, memoized.
    pub fn sperp(&self, l: usize) -> Arc<Subspace<F>> {
        if let Some(s) = self.sperp_cache.lock().unwrap().get(&l) {
            return Arc::clone(s);
        }
        let built = Arc::new(self.build_sperp_uncached(l));
        self.sperp_cache
            .lock()
            .unwrap()
            .entry(l)
            .or_insert(built)
            .clone()
    }

    fn build_sperp_uncached(&self, l: usize) -> Subspace<F> {
        let d = self.dim();
        match l {
            0 | 1 => Subspace::full(self.tensor_dim(l)),
            2 => {
                let mut vectors = self.sym_subspace(2).basis().to_vec();
                vectors.push(self.levi_tensor());
                Subspace::span(d * d, vectors)
            }
            3 if self.n == 1 => self.sperp3_planar(),
            _ => {
                let prev = self.sperp(l - 1);
                let full = Subspace::full(d);
                let left = full.tensor(&prev);
                let right = prev.tensor(&full);
                self.graded_intersect(&left, &right, l)
            }
        }
    }

    /// `{P_abc + Q_a L_bc + Q_b L_ac + Q_c L_ab}` for `n = 1`, where the
    /// recursive description degenerates.
    fn sperp3_planar(&self) -> Subspace<F> {
        let d = self.dim();
        let levi = self.levi_tensor();
        let mut vectors = self.sym_subspace(3).basis().to_vec();
        for q in 0..d {
            let e = SparseVec::<F>::unit(q);
            let first = e.kron(&levi, d * d);
            let last = levi.kron(&e, d);
            let middle = SparseVec::from_pairs(
                levi.entries()
                    .iter()
                    .map(|(ac, v)| {
                        let (a, c) = (ac / d, ac % d);
                        ((a * d + q) * d + c, v.clone())
                    })
                    .collect(),
            );
            vectors.push(first.add(&middle).add(&last));
        }
        Subspace::span(d * d * d, vectors)
    }

    /// Intersection of two torus-invariant subspaces of `⊗^len`, computed one
    /// weight space at a time.
    pub fn graded_intersect(&self, a: &Subspace<F>, b: &Subspace<F>, len: usize) -> Subspace<F> {
        let ambient = a.ambient_dim();
        let group = |s: &Subspace<F>| {
            let mut m: BTreeMap<Vec<i32>, Vec<SparseVec<F>>> = BTreeMap::new();
            for v in s.basis() {
                let lead = v.leading().unwrap().0;
                m.entry(self.weight(lead, len)).or_default().push(v.clone());
            }
            m
        };
        let ga = group(a);
        let gb = group(b);
        let mut pieces: Vec<SparseVec<F>> = Vec::new();
        for (w, va) in &ga {
            let Some(vb) = gb.get(w) else { continue };
            let sa = Subspace::from_canonical(ambient, va.clone());
            let sb = Subspace::from_canonical(ambient, vb.clone());
            let meet = sa.intersect(&sb).expect("same ambient");
            pieces.extend(meet.basis().iter().cloned());
        }
        pieces.sort_by_key(|v| v.leading().unwrap().0);
        Subspace::from_canonical(ambient, pieces)
    }

    /// `S⊥^ℓ` solved directly from its defining relations: every adjacent
    /// skew part equals `L_ab Y` for one common `Y`.
    pub fn sperp_from_definition(&self, l: usize) -> Subspace<F> {
        let d = self.dim();
        if l < 2 {
            return Subspace::full(self.tensor_dim(l));
        }
        let dx = self.tensor_dim(l);
        let dy = self.tensor_dim(l - 2);
        let mut rows = Vec::new();
        for p in 0..l - 1 {
            for r in 0..dy {
                let rest = TensorIndex::unflatten(r, l - 2, d).0;
                for a in 0..d {
                    for b in a + 1..d {
                        let place = |x: usize, y: usize| {
                            let mut idx = rest[..p].to_vec();
                            idx.push(x);
                            idx.push(y);
                            idx.extend_from_slice(&rest[p..]);
                            TensorIndex(idx).flatten(d)
                        };
                        // X_{..ab..} − X_{..ba..} − 2 L_ab Y_rest = 0
                        let mut eq = vec![(place(a, b), F::one()), (place(b, a), -F::one())];
                        let lab = self.levi.get(a, b);
                        if !lab.is_zero() {
                            eq.push((dx + r, -F::from_i64(2) * lab));
                        }
                        rows.push(SparseVec::from_pairs(eq));
                    }
                }
            }
        }
        let system = Matrix::from_rows(dx + dy, rows);
        let sol = system.kernel();
        let projected = sol
            .basis()
            .iter()
            .map(|v| SparseVec::from_pairs(v.entries().iter().filter(|(i, _)| *i < dx).cloned().collect()));
        Subspace::span(dx, projected)
    }

    /// `φ_abc ↦ L^{ab}(φ_abc − φ_cab)`, a `2n x (2n)^3` matrix. For `n = 1`
    /// its kernel is `S⊥^3`.
    pub fn sigma_map(&self) -> Matrix<F> {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d * d * d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let col = (i * d + j) * d + k;
                    // [c = k] L^{ij} − [c = i] L^{jk}
                    let a = self.levi_inv.get(i, j);
                    if !a.is_zero() {
                        m.set(k, col, m.get(k, col) + a);
                    }
                    let b = self.levi_inv.get(j, k);
                    if !b.is_zero() {
                        m.set(i, col, m.get(i, col) - b);
                    }
                }
            }
        }
        m
    }

    /// Skew 2-tensors with vanishing `L`-trace, `{ω_ab = −ω_ba : L^{ab} ω_ab = 0}`.
    pub fn lambda_perp2(&self) -> Subspace<F> {
        let d = self.dim();
        let skew: Vec<SparseVec<F>> = (0..d)
            .flat_map(|a| (a + 1..d).map(move |b| (a, b)))
            .map(|(a, b)| SparseVec::from_pairs(vec![(a * d + b, F::one()), (b * d + a, -F::one())]))
            .collect();
        let trace = SparseVec::from_pairs(
            (0..d)
                .flat_map(|a| (0..d).map(move |b| (a, b)))
                .map(|(a, b)| (a * d + b, self.levi_inv.get(a, b)))
                .collect(),
        );
        let values = Matrix::from_rows(skew.len(), vec![SparseVec::from_pairs(
            skew.iter().enumerate().map(|(j, s)| (j, trace.dot(s))).collect(),
        )]);
        let coords = values.kernel();
        let vectors = coords
            .basis()
            .iter()
            .map(|c| SparseVec::combine(c.entries().iter().map(|(j, v)| (v.clone(), &skew[*j]))));
        Subspace::span(d * d, vectors)
    }

    /// Weighted monomials of degree `k` and their images in `S⊥^k`.
    pub fn monomial_embed(&self, k: usize) -> MonomialEmbedding<F> {
        let monomials = WeightedMonomial::enumerate(self.n, k);
        let tensors = monomials.iter().map(|m| self.contact_jet(m, k)).collect();
        MonomialEmbedding {
            n: self.n,
            k,
            monomials,
            tensors,
        }
    }

    /// `(X_{a_1} ⋯ X_{a_k} m)(0)` for all index tuples, where `X_a` runs over
    /// the contact frame.
    fn contact_jet(&self, m: &WeightedMonomial, k: usize) -> SparseVec<F> {
        let d = self.dim();
        let n = self.n;
        let mut pairs = Vec::new();
        // Depth-first over words built from the innermost generator outward.
        let mut stack: Vec<(Polynomial<F>, Vec<usize>)> = vec![(Polynomial::from_weighted(m, F::one()), Vec::new())];
        while let Some((p, word)) = stack.pop() {
            if word.len() == k {
                let c = p.constant_term();
                if !c.is_zero() {
                    // word holds a_k, a_{k-1}, .., a_1
                    let idx = word.iter().rev().fold(0, |acc, &a| acc * d + a);
                    pairs.push((idx, c));
                }
                continue;
            }
            for a in 0..d {
                let q = Generator::contact(n, a).apply(&p);
                if !q.is_zero() {
                    let mut w = word.clone();
                    w.push(a);
                    stack.push((q, w));
                }
            }
        }
        SparseVec::from_pairs(pairs)
    }
}

fn levi_inverse<F: Field>(levi: &Matrix<F>) -> Matrix<F> {
    // With M[a][b] = L^{ab}, the convention L^{ab} L_{ac} = δ^b_c reads
    // M^T L = 1.
    levi.inverse().expect("Levi form is nondegenerate").transpose()
}

/// Sum of `e_{σ(ms)}` over the distinct orderings of the multiset `ms`.
pub fn symmetrized_unit<F: Field>(ms: &[usize], d: usize) -> SparseVec<F> {
    let mut perm = ms.to_vec();
    perm.sort_unstable();
    let mut pairs = Vec::new();
    loop {
        pairs.push((TensorIndex(perm.clone()).flatten(d), F::one()));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    SparseVec::from_pairs(pairs)
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Correspondence between weighted monomials of degree `k` and `S⊥^k`.
///
/// A monomial `m` is sent to its contact jet `(X_{a_1}⋯X_{a_k} m)(0)`, the
/// canonical identification of weighted `k`-jets vanishing to order `k`
/// with `S⊥^k`. Under it the enhanced symbol of an operator
/// `Σ S^{a..b} X_a⋯X_b` is contraction with `S`.
#[derive(Clone, Debug)]
pub struct MonomialEmbedding<F> {
    pub n: usize,
    pub k: usize,
    pub monomials: Vec<WeightedMonomial>,
    pub tensors: Vec<SparseVec<F>>,
}

impl<F: Field> MonomialEmbedding<F> {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// `(2n)^k x #monomials` matrix with the images as columns.
    pub fn matrix(&self) -> Matrix<F> {
        Matrix::from_columns((2 * self.n).pow(self.k as u32), &self.tensors)
    }

    /// Square matrix `C` with `image(m_j) = Σ_q C[q][j] s_q` for the
    /// canonical basis `s_q` of `sperp`.
    pub fn to_canonical(&self, sperp: &Subspace<F>) -> Result<Matrix<F>> {
        let columns: Vec<SparseVec<F>> = self
            .tensors
            .iter()
            .map(|t| {
                sperp
                    .coordinates(t)
                    .map(|c| SparseVec::from_dense(&c))
                    .ok_or_else(|| crate::Error::Precondition("monomial image outside S⊥^k".into()))
            })
            .collect::<Result<_>>()?;
        Ok(Matrix::from_columns(sperp.dim(), &columns))
    }
}

/// `Σ_{j ≥ 0} C(2n − 1 + ℓ − 2j, ℓ − 2j)`, the dimension of
/// `⊙^ℓ ⊕ ⊙^{ℓ−2} ⊕ ⋯` over a `2n`-dimensional space.
pub fn sperp_dim(n: usize, l: usize) -> usize {
    (0..=l / 2).map(|j| sym_dim(2 * n, l - 2 * j)).sum()
}

/// `C(d + m − 1, m)`.
pub fn sym_dim(d: usize, m: usize) -> usize {
    if d == 0 {
        return usize::from(m == 0);
    }
    binomial(d + m - 1, m)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Convenience wrapper: `S⊥^ℓ` for the given `n`.
pub fn build_sperp<F: Field>(n: usize, l: usize) -> Subspace<F> {
    SymplecticSpace::<F>::new(n).sperp(l).as_ref().clone()
}
