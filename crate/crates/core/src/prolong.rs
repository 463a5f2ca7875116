//! Contact and classical prolongation chains, the finite-type verdict, and
//! the flat prolonged connection for first-order operators.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{dependencies, splitting, Matrix, SparseVec, Subspace};
use crate::operator::{DarbouxOperator, PolySection};
use crate::poly::{multisets, Polynomial};
use crate::scalar::Field;
use crate::symplectic::{sym_dim, SymplecticSpace};

pub const DEFAULT_LEVEL_CAP: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    FiniteType,
    /// The cap was reached with a nonzero level; this is not a proof of
    /// infinite type.
    NotFiniteTypeWithinCap,
    /// The symbol is not surjective.
    Degenerate,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::FiniteType => "FiniteType",
            Verdict::NotFiniteTypeWithinCap => "NotFiniteTypeWithinCap",
            Verdict::Degenerate => "Degenerate",
        };
        f.write_str(s)
    }
}

/// An enhanced symbol `S⊥^k ⊗ E → F` written in the canonical echelon basis
/// of `S⊥^k` (column `q · rank_e + e`).
#[derive(Clone, Debug)]
pub struct ContactSymbol<F> {
    pub n: usize,
    pub order: usize,
    pub rank_e: usize,
    pub matrix: Matrix<F>,
}

impl<F: Field> ContactSymbol<F> {
    /// Converts a symbol indexed by weighted monomials (as produced by
    /// [`DarbouxOperator::enhanced_symbol`]) to the canonical basis.
    pub fn from_monomial_symbol(space: &SymplecticSpace<F>, order: usize, symbol: &Matrix<F>) -> Result<Self> {
        let embed = space.monomial_embed(order);
        let sperp = space.sperp(order);
        if embed.is_empty() || !symbol.ncols().is_multiple_of(embed.len()) {
            return Err(Error::ShapeMismatch {
                expected: format!("a multiple of {} columns", embed.len()),
                found: symbol.ncols().to_string(),
            });
        }
        let rank_e = symbol.ncols() / embed.len();
        let to_canonical = embed.to_canonical(&sperp)?;
        let inv = to_canonical
            .inverse()
            .ok_or_else(|| Error::Precondition("monomial images do not form a basis of S⊥^k".into()))?;
        let change = inv.kron(&Matrix::identity(rank_e));
        Ok(ContactSymbol {
            n: space.n(),
            order,
            rank_e,
            matrix: symbol.mul(&change),
        })
    }

    pub fn from_operator(space: &SymplecticSpace<F>, op: &DarbouxOperator<F>) -> Result<Self> {
        if op.n() != space.n() {
            return Err(Error::Precondition(format!("operator has n = {}, space has n = {}", op.n(), space.n())));
        }
        if !op.has_constant_top_coefficients() {
            return Err(Error::Precondition("top-weight coefficients must be constant".into()));
        }
        Self::from_monomial_symbol(space, op.order(), &op.enhanced_symbol())
    }

    pub fn rank_f(&self) -> usize {
        self.matrix.nrows()
    }
}

#[derive(Clone, Debug)]
pub struct ProlongationChain<F> {
    pub order_k: usize,
    pub dim_e: usize,
    pub dim_f: usize,
    pub dim_kh: usize,
    /// `dim K_H^ℓ` for `ℓ = 1, 2, ..`; ends with the first zero when the
    /// chain terminated.
    pub levels: Vec<usize>,
    pub verdict: Verdict,
    pub rank_t: Option<usize>,
    /// `K_H` followed by `K_H^1, K_H^2, ..` in coordinates of the
    /// respective `S^{k+ℓ} ⊗ E` canonical bases.
    pub level_coordinates: Vec<Subspace<F>>,
    /// Dimension of the jet part `J^{k-1}E` entering `rank_t`.
    pub lower_jet_dim: usize,
}

impl<F: Field> ProlongationChain<F> {
    fn finish(
        order_k: usize,
        dim_e: usize,
        dim_f: usize,
        lower_jet_dim: usize,
        surjective: bool,
        coords: Vec<Subspace<F>>,
        terminated: bool,
    ) -> Self {
        let dim_kh = coords[0].dim();
        let levels: Vec<usize> = coords[1..].iter().map(Subspace::dim).collect();
        let verdict = if !surjective {
            Verdict::Degenerate
        } else if terminated {
            Verdict::FiniteType
        } else {
            Verdict::NotFiniteTypeWithinCap
        };
        let rank_t = (verdict == Verdict::FiniteType).then(|| lower_jet_dim + dim_kh + levels.iter().sum::<usize>());
        ProlongationChain {
            order_k,
            dim_e,
            dim_f,
            dim_kh,
            levels,
            verdict,
            rank_t,
            level_coordinates: coords,
            lower_jet_dim,
        }
    }

    /// `[dim K_H, levels..]` without the terminating zero.
    pub fn graded_tail(&self) -> Vec<usize> {
        std::iter::once(self.dim_kh)
            .chain(self.levels.iter().copied())
            .filter(|&d| d > 0)
            .collect()
    }

    pub fn tail_vanishes(&self) -> bool {
        let mut seen_zero = self.dim_kh == 0;
        for &l in &self.levels {
            if seen_zero && l != 0 {
                return false;
            }
            seen_zero |= l == 0;
        }
        true
    }
}

/// Computes `K_H` and `K_H^ℓ = (S⊥^ℓ ⊗ K_H) ∩ (S⊥^{k+ℓ} ⊗ E)` inside
/// `⊗^{k+ℓ} ⊗ E` until a level vanishes or `level_cap` levels were built.
///
/// `symbol` is indexed by weighted monomials as produced by
/// [`DarbouxOperator::enhanced_symbol`].
pub fn contact_chain<F: Field>(
    space: &SymplecticSpace<F>,
    symbol: &Matrix<F>,
    order: usize,
    level_cap: usize,
) -> Result<ProlongationChain<F>> {
    let symbol = ContactSymbol::from_monomial_symbol(space, order, symbol)?;
    contact_chain_canonical(space, &symbol, level_cap)
}

pub fn contact_chain_canonical<F: Field>(
    space: &SymplecticSpace<F>,
    symbol: &ContactSymbol<F>,
    level_cap: usize,
) -> Result<ProlongationChain<F>> {
    if level_cap == 0 {
        return Err(Error::Precondition("level cap must be at least 1".into()));
    }
    let k = symbol.order;
    let r = symbol.rank_e;
    let rank_f = symbol.rank_f();
    let sigma = &symbol.matrix;
    let surjective = sigma.rank() == rank_f;
    let lower_jet_dim = r * (0..k).map(|j| space.sperp(j).dim()).sum::<usize>();

    let kh = sigma.kernel();
    let mut terminated = kh.dim() == 0;
    let mut coords = vec![kh];
    let mut level = 1;
    while !terminated && level <= level_cap {
        let level_space = contact_level(space, symbol, level);
        terminated = level_space.dim() == 0;
        coords.push(level_space);
        level += 1;
    }
    Ok(ProlongationChain::finish(k, r, rank_f, lower_jet_dim, surjective, coords, terminated))
}

/// `K_H^ℓ` for `ℓ ≥ 1` in coordinates of the canonical basis of
/// `S⊥^{k+ℓ} ⊗ E`, computed directly from the symbol.
pub fn contact_level<F: Field>(space: &SymplecticSpace<F>, symbol: &ContactSymbol<F>, level: usize) -> Subspace<F> {
    let k = symbol.order;
    let r = symbol.rank_e;
    let rank_f = symbol.rank_f();
    let sigma_cols = symbol.matrix.column_vectors();
    let inner_dim = space.tensor_dim(k);
    let inner_pivot: std::collections::HashMap<usize, usize> =
        space.sperp(k).pivots().into_iter().enumerate().map(|(q, p)| (p, q)).collect();
    let outer = space.sperp(level);
    let outer_pivot: std::collections::HashMap<usize, usize> =
        outer.pivots().into_iter().enumerate().map(|(p, idx)| (idx, p)).collect();
    let top = space.sperp(k + level);
    // Each vector of S⊥^{k+ℓ} lies in S⊥^ℓ ⊗ S⊥^k, so its coordinates
    // there are its entries at pairs of pivots. Column (i, e) of the
    // system is (1 ⊗ σ)(b_i ⊗ e) written in S⊥^ℓ ⊗ F.
    let mut columns = Vec::with_capacity(top.dim() * r);
    for b in top.basis() {
        let pairs: Vec<(usize, usize, &F)> = b
            .entries()
            .iter()
            .filter_map(|(idx, v)| {
                let p = *outer_pivot.get(&(idx / inner_dim))?;
                let q = *inner_pivot.get(&(idx % inner_dim))?;
                Some((p, q, v))
            })
            .collect();
        for e in 0..r {
            let mut entries = Vec::new();
            for &(p, q, v) in &pairs {
                for (f, s) in sigma_cols[q * r + e].entries() {
                    entries.push((p * rank_f + f, v.clone() * s.clone()));
                }
            }
            columns.push(SparseVec::from_pairs(entries));
        }
    }
    dependencies(outer.dim() * rank_f, &columns)
}

/// Expands level `ℓ` of a contact chain (`0` is `K_H`) to tensors in
/// `⊗^{k+ℓ} ⊗ E`.
pub fn contact_level_tensors<F: Field>(
    space: &SymplecticSpace<F>,
    chain: &ProlongationChain<F>,
    level: usize,
) -> Subspace<F> {
    let r = chain.dim_e;
    let top = space.sperp(chain.order_k + level);
    let ambient = top.ambient_dim() * r;
    // Re-attach the E index: coordinate (i, e) stands for b_i ⊗ e.
    let expanded = chain.level_coordinates[level].basis().iter().map(|c| {
        let mut pairs = Vec::new();
        for (col, v) in c.entries() {
            let (i, e) = (col / r, col % r);
            for (idx, w) in top.basis()[i].entries() {
                pairs.push((idx * r + e, v.clone() * w.clone()));
            }
        }
        SparseVec::from_pairs(pairs)
    });
    Subspace::span(ambient, expanded)
}

/// Classical chain `K^ℓ = (⊙^ℓ ⊗ K) ∩ (⊙^{k+ℓ} ⊗ E)` for a symbol on
/// `⊙^k ⊗ E` over a `dim`-dimensional manifold.
///
/// Column `j · rank_e + e` of `symbol` is the value on `e_M ⊗ e`, where `M`
/// is the `j`-th multiset of [`multisets`] and `e_M` the sum over its
/// distinct orderings.
pub fn classical_chain<F: Field>(
    symbol: &Matrix<F>,
    dim: usize,
    order: usize,
    level_cap: usize,
) -> Result<ProlongationChain<F>> {
    if level_cap == 0 {
        return Err(Error::Precondition("level cap must be at least 1".into()));
    }
    let sk = sym_dim(dim, order);
    if sk == 0 || !symbol.ncols().is_multiple_of(sk) {
        return Err(Error::ShapeMismatch {
            expected: format!("a multiple of {sk} columns"),
            found: symbol.ncols().to_string(),
        });
    }
    let r = symbol.ncols() / sk;
    let rank_f = symbol.nrows();
    let surjective = symbol.rank() == rank_f;
    let lower_jet_dim = r * (0..order).map(|j| sym_dim(dim, j)).sum::<usize>();
    let kernel = symbol.kernel();
    let sigma_cols = symbol.column_vectors();
    let inner_index: std::collections::HashMap<Vec<usize>, usize> =
        multisets(dim, order).into_iter().enumerate().map(|(i, m)| (m, i)).collect();

    let mut coords = vec![kernel.clone()];
    let mut terminated = kernel.dim() == 0;
    let mut level = 1;
    while !terminated && level <= level_cap {
        let outer: std::collections::HashMap<Vec<usize>, usize> =
            multisets(dim, level).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut columns = Vec::new();
        for big in multisets(dim, order + level) {
            // e_M = Σ_{A ⊎ B = M} e_A ⊗ e_B over sub-multisets A of size ℓ.
            let splits = sub_multisets(&big, level);
            for e in 0..r {
                let mut entries = Vec::new();
                for (a, b) in &splits {
                    let p = outer[a];
                    let q = inner_index[b];
                    for (f, s) in sigma_cols[q * r + e].entries() {
                        entries.push((p * rank_f + f, s.clone()));
                    }
                }
                columns.push(SparseVec::from_pairs(entries));
            }
        }
        let level_space = dependencies(outer.len() * rank_f, &columns);
        terminated = level_space.dim() == 0;
        coords.push(level_space);
        level += 1;
    }
    Ok(ProlongationChain::finish(order, r, rank_f, lower_jet_dim, surjective, coords, terminated))
}

/// Distinct ways to write a sorted multiset as `A ⊎ B` with `|A| = size`.
fn sub_multisets(m: &[usize], size: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut counts: Vec<(usize, usize)> = Vec::new();
    for &x in m {
        match counts.last_mut() {
            Some((y, c)) if *y == x => *c += 1,
            _ => counts.push((x, 1)),
        }
    }
    let mut out = Vec::new();
    fn rec(
        counts: &[(usize, usize)],
        i: usize,
        left: usize,
        a: &mut Vec<usize>,
        b: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, Vec<usize>)>,
    ) {
        if i == counts.len() {
            if left == 0 {
                out.push((a.clone(), b.clone()));
            }
            return;
        }
        let (x, c) = counts[i];
        for take in 0..=c.min(left) {
            let (la, lb) = (a.len(), b.len());
            a.extend(std::iter::repeat_n(x, take));
            b.extend(std::iter::repeat_n(x, c - take));
            rec(counts, i + 1, left - take, a, b, out);
            a.truncate(la);
            b.truncate(lb);
        }
    }
    rec(&counts, 0, size, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

/// Flat partial connection on `𝕋 = E ⊕ K_H ⊕ K_H^1 ⊕ ⋯` whose parallel
/// sections (`X_a Σ = A_a Σ` for every contact direction `a`) correspond to
/// solutions of a first-order operator.
#[derive(Clone, Debug)]
pub struct FlatConnection<F> {
    pub total_rank: usize,
    /// Offsets of the blocks `E, K_H, K_H^1, ..` in `𝕋`.
    pub block_offsets: Vec<usize>,
    /// One `total_rank x total_rank` matrix per contact direction
    /// `X_1..X_n, Y_1..Y_n`.
    pub coeff: Vec<Matrix<F>>,
    /// `rank_e x total_rank` projection onto the `E` block.
    pub projection: Matrix<F>,
}

/// Builds the prolonged connection of a constant-coefficient homogeneous
/// first-order operator in dimension `2n + 1 ≥ 5`.
///
/// Block `j + 1` holds `∇^{j+1}σ ∈ K_H^j ⊆ ⊗^{j+1} ⊗ E`; `A_a` sends block
/// `j + 1` to block `j` by contracting the first slot with `a` and reading
/// off coordinates through the splitting of block `j`'s basis.
pub fn build_flat_connection<F: Field>(
    space: &SymplecticSpace<F>,
    op: &DarbouxOperator<F>,
    chain: &ProlongationChain<F>,
) -> Result<FlatConnection<F>> {
    let n = space.n();
    if n < 2 {
        return Err(Error::Precondition("flat connection needs n >= 2".into()));
    }
    if op.n() != n || op.order() != 1 || chain.order_k != 1 {
        return Err(Error::Precondition("first-order operator on the same space required".into()));
    }
    if !op.is_homogeneous_constant() {
        return Err(Error::Precondition("operator must be homogeneous of order 1 with constant coefficients".into()));
    }
    if chain.verdict != Verdict::FiniteType {
        return Err(Error::Precondition(format!("chain verdict is {}", chain.verdict)));
    }
    let r = op.rank_e();
    let d = space.dim();
    // Block bases as (ambient x dim) matrices; block 0 is E itself.
    let mut bases: Vec<Matrix<F>> = vec![Matrix::identity(r)];
    for level in 0..chain.level_coordinates.len() {
        let t = contact_level_tensors(space, chain, level);
        if t.dim() == 0 {
            break;
        }
        bases.push(t.basis_matrix());
    }
    let dims: Vec<usize> = bases.iter().map(Matrix::ncols).collect();
    let mut block_offsets = Vec::with_capacity(dims.len());
    let mut total = 0;
    for &dim in &dims {
        block_offsets.push(total);
        total += dim;
    }
    let splittings: Vec<Matrix<F>> = bases.iter().map(splitting).collect();

    let mut coeff = Vec::with_capacity(d);
    for a in 0..d {
        let mut entries: Vec<Vec<(usize, F)>> = vec![Vec::new(); total];
        for j in 0..bases.len() - 1 {
            let lower_len = bases[j].nrows();
            let upper = &bases[j + 1];
            for (c, col) in upper.column_vectors().iter().enumerate() {
                // First slot of ⊗^{j+1} ⊗ E is the most significant index.
                let contracted = SparseVec::from_pairs(
                    col.entries()
                        .iter()
                        .filter(|(idx, _)| idx / lower_len == a)
                        .map(|(idx, v)| (idx % lower_len, v.clone()))
                        .collect(),
                );
                let image = splittings[j].mul_vec(&contracted);
                debug_assert_eq!(bases[j].mul_vec(&image), contracted, "contraction leaves the lower block");
                for (row, v) in image.entries() {
                    entries[block_offsets[j] + row].push((block_offsets[j + 1] + c, v.clone()));
                }
            }
        }
        coeff.push(Matrix::from_rows(total, entries.into_iter().map(SparseVec::from_pairs).collect()));
    }
    let projection = Matrix::from_rows(total, (0..r).map(SparseVec::unit).collect());
    Ok(FlatConnection {
        total_rank: total,
        block_offsets,
        coeff,
        projection,
    })
}

impl<F: Field> FlatConnection<F> {
    /// Applies the projection `𝕋 → E` to a polynomial section of `𝕋`.
    pub fn project(&self, s: &PolySection<F>) -> PolySection<F> {
        let n = s.components.first().map_or(1, Polynomial::n);
        let components = self
            .projection
            .row_vectors()
            .iter()
            .map(|row| {
                row.entries()
                    .iter()
                    .fold(Polynomial::zero(n), |acc, (j, v)| acc.add(&s.components[*j].scale(v)))
            })
            .collect();
        PolySection::new(components)
    }

    /// The operator `Σ ↦ (X_a Σ − A_a Σ)_a` whose kernel is the space of
    /// parallel sections.
    pub fn parallel_operator(&self, n: usize) -> Result<DarbouxOperator<F>> {
        let t = self.total_rank;
        let d = 2 * n;
        let mut op = DarbouxOperator::new(n, t, d * t).with_declared_order(1);
        for a in 0..d {
            let mut select = Matrix::zeros(d * t, t);
            let mut shift = Matrix::zeros(d * t, t);
            for i in 0..t {
                select.set(a * t + i, i, F::one());
                for (j, v) in self.coeff[a].row(i).entries() {
                    shift.set(a * t + i, *j, -v.clone());
                }
            }
            op.add_constant_term(vec![crate::operator::Generator::contact(n, a)], &select)?;
            op.add_constant_term(Vec::new(), &shift)?;
        }
        Ok(op)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Generator;
    use crate::Rational;

    type Space = SymplecticSpace<Rational>;
    type Op = DarbouxOperator<Rational>;

    fn op(n: usize, rank_e: usize, rank_f: usize, terms: &[(&[&str], &[&[i64]])]) -> Op {
        let mut op = Op::new(n, rank_e, rank_f);
        for (word, coeff) in terms {
            let word = word.iter().map(|g| Generator::parse(n, g).unwrap()).collect();
            op.add_constant_term(word, &Matrix::from_i64(coeff)).unwrap();
        }
        op
    }

    fn chain_of(op: &Op, cap: usize) -> ProlongationChain<Rational> {
        let space = Space::new(op.n());
        contact_chain(&space, &op.enhanced_symbol(), op.order(), cap).unwrap()
    }

    #[test]
    fn first_worked_example() {
        let op = op(1, 2, 3, &[(&["X"], &[&[1, 0], &[0, 1], &[0, 0]]), (&["Y"], &[&[0, 0], &[1, 0], &[0, 1]])]);
        let c = chain_of(&op, 8);
        assert_eq!((c.dim_kh, c.levels.clone()), (1, vec![2, 0]));
        assert_eq!((c.verdict, c.rank_t), (Verdict::FiniteType, Some(5)));
        assert!(c.tail_vanishes());
    }

    #[test]
    fn second_worked_example() {
        let op = op(
            1,
            3,
            4,
            &[
                (&["X"], &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]),
                (&["Y"], &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
            ],
        );
        let c = chain_of(&op, 8);
        assert_eq!(c.lower_jet_dim, 3);
        assert_eq!(c.graded_tail(), vec![2, 4, 2, 3]);
        assert_eq!(c.rank_t, Some(14));
    }

    #[test]
    fn horizontal_differential() {
        let op = op(1, 1, 2, &[(&["X"], &[&[1], &[0]]), (&["Y"], &[&[0], &[1]])]);
        let c = chain_of(&op, 8);
        assert_eq!((c.dim_kh, c.levels.len(), c.rank_t), (0, 0, Some(1)));
    }

    #[test]
    fn second_order_pair() {
        let op = op(1, 1, 2, &[(&["X", "X"], &[&[1], &[0]]), (&["Y", "Y"], &[&[0], &[1]])]);
        let c = chain_of(&op, 8);
        assert_eq!(c.rank_t, Some(8));
        assert_eq!(c.lower_jet_dim, 3);
    }

    #[test]
    fn inconclusive_and_degenerate() {
        let x_only = op(1, 1, 1, &[(&["X"], &[&[1]])]);
        let c = chain_of(&x_only, 5);
        assert_eq!((c.verdict, c.rank_t, c.levels.len()), (Verdict::NotFiniteTypeWithinCap, None, 5));
        assert!(c.tail_vanishes());
        let doubled = op(1, 1, 2, &[(&["X"], &[&[1], &[1]])]);
        assert_eq!(chain_of(&doubled, 3).verdict, Verdict::Degenerate);
        let space = Space::new(1);
        assert!(contact_chain(&space, &x_only.enhanced_symbol(), 1, 0).is_err());
    }

    #[test]
    fn symbol_shape_is_checked() {
        let space = Space::new(1);
        let bad = Matrix::<Rational>::zeros(1, 3);
        assert!(matches!(contact_chain(&space, &bad, 1, 4), Err(Error::ShapeMismatch { .. })));
    }

    #[test]
    fn classical_gradient() {
        // df on functions of three variables.
        let c = classical_chain(&Matrix::<Rational>::identity(3), 3, 1, 4).unwrap();
        assert_eq!((c.dim_kh, c.rank_t), (0, Some(1)));
    }

    #[test]
    fn classical_horizontal_differential_is_not_finite_type() {
        // Λ¹ → Λ¹_H in coordinates (x, y, z): the kernel is the z direction.
        let sym = Matrix::<Rational>::from_i64(&[&[1, 0, 0], &[0, 1, 0]]);
        let c = classical_chain(&sym, 3, 1, 6).unwrap();
        assert_eq!(c.verdict, Verdict::NotFiniteTypeWithinCap);
        assert_eq!(c.levels, vec![1; 6]);
    }

    /// Polynomial vector fields on the plane with `∂_(a σ_b) = 0`.
    fn killing_oracle(max_degree: usize) -> usize {
        let monos: Vec<(usize, usize)> =
            (0..=max_degree).flat_map(|d| (0..=d).map(move |p| (p, d - p))).collect();
        let index = |p: usize, q: usize| monos.iter().position(|&m| m == (p, q));
        let unknowns = 2 * monos.len();
        let mut rows = Vec::new();
        // Equations indexed by (component of ⊙², target monomial).
        for pairs in [vec![(0usize, 0usize)], vec![(0, 1), (1, 0)], vec![(1, 1)]] {
            for &(tp, tq) in &monos {
                let mut row = vec![Rational::from_integer(0.into()); unknowns];
                for &(a, b) in &pairs {
                    // ∂_a σ_b hits x^tp y^tq from x^(tp+1) y^tq or x^tp y^(tq+1).
                    let (sp, sq, c) = if a == 0 { (tp + 1, tq, tp + 1) } else { (tp, tq + 1, tq + 1) };
                    if let Some(j) = index(sp, sq) {
                        row[b * monos.len() + j] += Rational::from_integer((c as i64).into());
                    }
                }
                rows.push(row);
            }
        }
        unknowns - Matrix::from_dense(&rows).rank()
    }

    #[test]
    fn classical_killing_fields_of_the_plane() {
        // Column (j, e) on e_j ⊗ e_e, rows ⊙² ordered {00, 01, 11}.
        let sym = Matrix::<Rational>::from_i64(&[&[1, 0, 0, 0], &[0, 1, 1, 0], &[0, 0, 0, 1]]);
        let c = classical_chain(&sym, 2, 1, 6).unwrap();
        assert_eq!(c.verdict, Verdict::FiniteType);
        assert_eq!(c.rank_t, Some(3));
        assert_eq!(killing_oracle(4), 3);
        assert_eq!(killing_oracle(5), 3);
    }

    #[test]
    fn sub_multiset_splits() {
        let mut s = sub_multisets(&[0, 0, 1], 1);
        s.sort();
        assert_eq!(s, vec![(vec![0], vec![0, 1]), (vec![1], vec![0, 0])]);
        assert_eq!(sub_multisets(&[2, 2], 2), vec![(vec![2, 2], vec![])]);
    }

    #[test]
    fn flat_connection_for_horizontal_differential() {
        let op = op(
            2,
            1,
            4,
            &[
                (&["X1"], &[&[1], &[0], &[0], &[0]]),
                (&["X2"], &[&[0], &[1], &[0], &[0]]),
                (&["Y1"], &[&[0], &[0], &[1], &[0]]),
                (&["Y2"], &[&[0], &[0], &[0], &[1]]),
            ],
        );
        let space = Space::new(2);
        let c = chain_of(&op, 4);
        let conn = build_flat_connection(&space, &op, &c).unwrap();
        assert_eq!(conn.total_rank, 1);
        assert!(conn.coeff.iter().all(Matrix::is_zero));
        assert_eq!(conn.coeff.len(), 4);
    }

    #[test]
    fn flat_connection_preconditions() {
        let pdes = op(1, 2, 3, &[(&["X"], &[&[1, 0], &[0, 1], &[0, 0]]), (&["Y"], &[&[0, 0], &[1, 0], &[0, 1]])]);
        let c = chain_of(&pdes, 8);
        assert!(build_flat_connection(&Space::new(1), &pdes, &c).is_err());
        let x_only = op(2, 1, 1, &[(&["X1"], &[&[1]])]);
        let c = chain_of(&x_only, 2);
        assert!(build_flat_connection(&Space::new(2), &x_only, &c).is_err());
    }
}
