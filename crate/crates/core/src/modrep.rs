//! Modules over `k[Z/q]`, `q = p^e`, via Jordan blocks of the unipotent generator,
//! and the averaging trick that upgrades a Sylow-equivariant section.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::cohom::{CohomError, CyclicModule};
use crate::gf::FieldCtx;
use crate::linalg::{span_rank, LinalgError, Matrix};

use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModrepError {
    #[error("subspace is not sigma-stable")]
    NotStable,
    #[error("index [G:P] = {0} is zero in the field")]
    IndexNotInvertible(usize),
    #[error("section is not P-equivariant")]
    NotEquivariant,
    #[error("map is not a section of the projection")]
    NotSection,
    #[error("{0}")]
    Group(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Cohom(#[from] CohomError),
}

/// Multiset of Jordan block sizes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BlockMultiset(BTreeMap<usize, usize>);

impl BlockMultiset {
    pub fn from_sizes(sizes: &[usize]) -> BlockMultiset {
        let mut m = BTreeMap::new();
        for &s in sizes {
            *m.entry(s).or_insert(0) += 1;
        }
        BlockMultiset(m)
    }

    /// Sizes in increasing order, with repetition.
    pub fn sizes(&self) -> Vec<usize> {
        self.0
            .iter()
            .flat_map(|(&s, &c)| std::iter::repeat_n(s, c))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.0.iter().map(|(s, c)| s * c).sum()
    }

    pub fn count(&self) -> usize {
        self.0.values().sum()
    }

    pub fn union(&self, other: &BlockMultiset) -> BlockMultiset {
        let mut m = self.0.clone();
        for (&s, &c) in &other.0 {
            *m.entry(s).or_insert(0) += c;
        }
        BlockMultiset(m)
    }
}

impl fmt::Display for BlockMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.sizes().iter().map(|s| s.to_string()).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

/// Jordan type from the rank sequence of `N = sigma - 1`: the number of blocks of
/// size at least `j` is `rank N^{j-1} - rank N^j`.
pub fn block_decomposition(module: &CyclicModule) -> BlockMultiset {
    let dim = module.dim();
    let nil = module.sigma().minus_identity();
    let mut ranks = vec![dim];
    let mut power = Matrix::identity(module.ctx(), dim);
    while *ranks.last().unwrap() > 0 {
        power = power.mul(&nil).unwrap();
        let r = power.rank();
        if r == *ranks.last().unwrap() {
            // not unipotent; stop rather than loop forever
            break;
        }
        ranks.push(r);
    }
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut m = BTreeMap::new();
    for j in 0..at_least.len() {
        let exact = at_least[j] - at_least.get(j + 1).copied().unwrap_or(0);
        if exact > 0 {
            m.insert(j + 1, exact);
        }
    }
    BlockMultiset(m)
}

/// `0 -> A -> B -> C -> 0` with `A` a sigma-stable subspace of `B` and `C = B/A`.
#[derive(Debug, Clone)]
pub struct ExactTriple {
    b: CyclicModule,
    /// Basis of `A`, as columns in `B`'s coordinates.
    a_basis: Vec<Vec<u64>>,
    a: CyclicModule,
    c: CyclicModule,
}

impl ExactTriple {
    /// `a_span` may be any spanning set of the submodule.
    pub fn new(b: CyclicModule, a_span: &[Vec<u64>]) -> Result<ExactTriple, ModrepError> {
        let ctx = b.ctx().clone();
        let dim = b.dim();
        let a_basis = if a_span.is_empty() {
            Vec::new()
        } else {
            Matrix::from_columns(&ctx, dim, a_span).column_basis()
        };
        let k = a_basis.len();
        for v in &a_basis {
            let image = b.sigma().mul_vec(v);
            let mut test = a_basis.clone();
            test.push(image);
            if span_rank(&ctx, dim, &test) != k {
                return Err(ModrepError::NotStable);
            }
        }
        // complete the basis of A to one of B with standard vectors
        let mut full = a_basis.clone();
        for i in 0..dim {
            let mut e = vec![0u64; dim];
            e[i] = 1;
            full.push(e);
            if span_rank(&ctx, dim, &full) < full.len() {
                full.pop();
            }
        }
        let change = Matrix::from_columns(&ctx, dim, &full);
        let adapted = change.inverse()?.mul(b.sigma())?.mul(&change)?;
        // block upper triangular: [[sigma_A, *], [0, sigma_C]]
        let mut sa = Matrix::zeros(&ctx, k, k);
        let mut sc = Matrix::zeros(&ctx, dim - k, dim - k);
        for r in 0..dim {
            for c in 0..dim {
                let v = adapted.raw(r, c);
                if r < k && c < k {
                    sa.set_raw(r, c, v);
                } else if r >= k && c >= k {
                    sc.set_raw(r - k, c - k, v);
                } else if r >= k && c < k && v != 0 {
                    return Err(ModrepError::NotStable);
                }
            }
        }
        let q = b.order();
        Ok(ExactTriple {
            a: CyclicModule::new(sa, q)?,
            c: CyclicModule::new(sc, q)?,
            b,
            a_basis,
        })
    }

    pub fn b(&self) -> &CyclicModule {
        &self.b
    }

    pub fn a(&self) -> &CyclicModule {
        &self.a
    }

    pub fn c(&self) -> &CyclicModule {
        &self.c
    }

    pub fn a_basis(&self) -> &[Vec<u64>] {
        &self.a_basis
    }
}

/// Krull-Schmidt criterion: the sequence splits iff `B` has the Jordan type of `A + C`.
pub fn splits(t: &ExactTriple) -> bool {
    block_decomposition(&t.b) == block_decomposition(&t.a).union(&block_decomposition(&t.c))
}

/// `dim A^G + dim C^G = dim B^G`, i.e. invariants are exact on the right.
pub fn invariants_additive(t: &ExactTriple) -> bool {
    t.a.invariants_dim() + t.c.invariants_dim() == t.b.invariants_dim()
}

/// Direct sum of unipotent Jordan blocks of the given sizes.
pub fn jordan_sum(ctx: &Arc<FieldCtx>, sizes: &[usize]) -> Matrix {
    let mut m = Matrix::zeros(ctx, 0, 0);
    for &s in sizes {
        let mut block = Matrix::identity(ctx, s);
        for i in 0..s.saturating_sub(1) {
            block.set_raw(i, i + 1, 1);
        }
        m = m.direct_sum(&block);
    }
    m
}

pub fn random_invertible<R: Rng>(ctx: &Arc<FieldCtx>, dim: usize, rng: &mut R) -> Matrix {
    loop {
        let rows: Vec<Vec<u64>> = (0..dim)
            .map(|_| (0..dim).map(|_| rng.gen_range(0..ctx.order())).collect())
            .collect();
        let m = Matrix::from_raw_rows(ctx, &rows);
        if m.rank() == dim {
            return m;
        }
    }
}

/// Random `k[Z/q]`-module extension for property testing.
///
/// `B` is a random sum of Jordan blocks (sizes `<= q`, total `<= max_dim`) conjugated
/// by a random invertible matrix; `A` is generated by `r` random vectors closed under
/// `N = sigma - 1`, with `r` drawn from `1..=dim`.
pub fn random_triple<R: Rng>(
    ctx: &Arc<FieldCtx>,
    q: u64,
    max_dim: usize,
    rng: &mut R,
) -> Result<ExactTriple, ModrepError> {
    let mut sizes = Vec::new();
    let target = rng.gen_range(1..=max_dim);
    while sizes.iter().sum::<usize>() < target {
        let room = target - sizes.iter().sum::<usize>();
        sizes.push(rng.gen_range(1..=room.min(q as usize)));
    }
    let dim = target;
    let g = random_invertible(ctx, dim, rng);
    let sigma = g.mul(&jordan_sum(ctx, &sizes))?.mul(&g.inverse()?)?;
    let b = CyclicModule::new(sigma, q)?;
    let nil = b.sigma().minus_identity();
    let r = rng.gen_range(1..=dim);
    let mut span: Vec<Vec<u64>> = Vec::new();
    for _ in 0..r {
        let mut v: Vec<u64> = (0..dim).map(|_| rng.gen_range(0..ctx.order())).collect();
        // v, Nv, N^2 v, ... spans the cyclic submodule generated by v
        while v.iter().any(|&x| x != 0) {
            span.push(v.clone());
            v = nil.mul_vec(&v);
        }
    }
    ExactTriple::new(b, &span)
}

/// A finite group given by its multiplication table on `0..order`.
#[derive(Debug, Clone)]
pub struct GroupTable {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl GroupTable {
    /// `compose(i, j)` is the index of `g_i g_j`.
    pub fn from_fn(
        order: usize,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<GroupTable, ModrepError> {
        let table: Vec<Vec<usize>> = (0..order)
            .map(|i| (0..order).map(|j| compose(i, j)).collect())
            .collect();
        let identity = (0..order)
            .find(|&e| (0..order).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| ModrepError::Group("no identity".into()))?;
        let inverses = (0..order)
            .map(|g| {
                (0..order)
                    .find(|&h| table[g][h] == identity)
                    .ok_or_else(|| ModrepError::Group(format!("element {g} has no inverse")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GroupTable {
            table,
            identity,
            inverses,
        })
    }

    /// `Z/n` with generator 1.
    pub fn cyclic(n: usize) -> GroupTable {
        GroupTable::from_fn(n, |i, j| (i + j) % n).expect("Z/n is a group")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    /// Representatives `g_1, ..., g_m` of the right cosets `P g_i`.
    pub fn right_coset_reps(&self, subgroup: &[usize]) -> Vec<usize> {
        let mut covered = vec![false; self.order()];
        let mut reps = Vec::new();
        for g in 0..self.order() {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &h in subgroup {
                covered[self.mul(h, g)] = true;
            }
        }
        reps
    }

    pub fn is_subgroup(&self, s: &[usize]) -> bool {
        s.contains(&self.identity)
            && s.iter()
                .all(|&a| s.iter().all(|&b| s.contains(&self.mul(a, b))))
    }
}

/// A `k[G]`-linear surjection `B -> C`: matrices of every group element on `B` and `C`,
/// and the projection.
#[derive(Debug, Clone)]
pub struct GroupAction {
    pub on_b: Vec<Matrix>,
    pub on_c: Vec<Matrix>,
    pub projection: Matrix,
}

impl GroupAction {
    pub fn is_equivariant(&self, map: &Matrix, elements: &[usize]) -> bool {
        elements
            .iter()
            .all(|&g| self.on_b[g].mul(map).unwrap() == map.mul(&self.on_c[g]).unwrap())
    }

    pub fn is_section(&self, map: &Matrix) -> bool {
        self.projection
            .mul(map)
            .map(|m| m.is_identity())
            .unwrap_or(false)
    }
}

/// `s~(c) = (1/m) sum_i g_i^{-1} s(g_i c)` over right coset representatives of `P`.
///
/// The input must be a `P`-equivariant section; the output is verified to be a
/// `G`-equivariant section.
pub fn average_section(
    group: &GroupTable,
    subgroup: &[usize],
    section: &Matrix,
    action: &GroupAction,
) -> Result<Matrix, ModrepError> {
    if !group.is_subgroup(subgroup) {
        return Err(ModrepError::Group("P is not a subgroup".into()));
    }
    if !action.is_section(section) {
        return Err(ModrepError::NotSection);
    }
    if !action.is_equivariant(section, subgroup) {
        return Err(ModrepError::NotEquivariant);
    }
    let ctx = section.ctx();
    let reps = group.right_coset_reps(subgroup);
    let m = reps.len();
    let m_field = ctx.from_int(m as i64);
    let m_inv = ctx
        .inv(m_field)
        .map_err(|_| ModrepError::IndexNotInvertible(m))?;
    let mut acc = Matrix::zeros(ctx, section.rows(), section.cols());
    for &g in &reps {
        let g_inv = group.inverse(g);
        let term = action.on_b[g_inv].mul(section)?.mul(&action.on_c[g])?;
        acc = acc.add(&term)?;
    }
    let averaged = acc.scale(m_inv);
    let all: Vec<usize> = (0..group.order()).collect();
    if !action.is_section(&averaged) {
        return Err(ModrepError::NotSection);
    }
    if !action.is_equivariant(&averaged, &all) {
        return Err(ModrepError::NotEquivariant);
    }
    Ok(averaged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Arc<FieldCtx> {
        FieldCtx::prime(p).unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let f = fp(3);
        let triv = CyclicModule::trivial(&f, 3, 3);
        assert_eq!(block_decomposition(&triv).sizes(), vec![1, 1, 1]);
        for p in [2u64, 3, 5, 7] {
            let free = CyclicModule::free(&fp(p), p, 1);
            assert_eq!(block_decomposition(&free).sizes(), vec![p as usize]);
        }
        let m = CyclicModule::new(jordan_sum(&f, &[3, 1, 2, 2]), 3).unwrap();
        assert_eq!(block_decomposition(&m).sizes(), vec![1, 2, 2, 3]);
    }

    #[test]
    fn decomposition_of_a_lattice_window() {
        use crate::ascover::LocalCover;
        let cov = LocalCover::build(3, 2, 40).unwrap();
        let w = cov.window(0, -6).unwrap();
        let m = CyclicModule::from_window(&w);
        let blocks = block_decomposition(&m);
        assert_eq!(blocks.total_dim(), 6);
        // rank oracle computed directly on the window matrix
        let nil = w.sigma.minus_identity();
        let r1 = nil.rank();
        let r2 = nil.pow(2).rank();
        assert_eq!(blocks.count(), 6 - r1);
        assert_eq!(blocks.sizes().iter().filter(|&&s| s >= 2).count(), r1 - r2);
        assert!(nil.pow(3).is_zero());
        assert_eq!(blocks.sizes(), vec![1, 1, 2, 2]);
    }

    #[test]
    fn conjugation_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, q) in [(2u64, 4u64), (3, 9), (5, 5)] {
            let f = fp(p);
            for _ in 0..30 {
                let sizes: Vec<usize> = (0..rng.gen_range(1..4))
                    .map(|_| rng.gen_range(1..=q as usize))
                    .collect();
                let j = jordan_sum(&f, &sizes);
                let g = random_invertible(&f, j.rows(), &mut rng);
                let conj = g.mul(&j).unwrap().mul(&g.inverse().unwrap()).unwrap();
                let a = block_decomposition(&CyclicModule::new(j, q).unwrap());
                let b = block_decomposition(&CyclicModule::new(conj, q).unwrap());
                assert_eq!(a, b);
                assert_eq!(a, BlockMultiset::from_sizes(&sizes));
            }
        }
    }

    #[test]
    fn uniserial_extension_does_not_split() {
        let f = fp(3);
        let b = CyclicModule::new(jordan_sum(&f, &[2]), 3).unwrap();
        // socle of J_2 is spanned by the first basis vector
        let t = ExactTriple::new(b, &[vec![1, 0]]).unwrap();
        assert!(!splits(&t));
        assert!(!invariants_additive(&t));
        assert_eq!(t.a().invariants_dim(), 1);
        assert_eq!(t.c().invariants_dim(), 1);
        assert_eq!(t.b().invariants_dim(), 1);
    }

    #[test]
    fn direct_summand_splits() {
        let f = fp(3);
        let b = CyclicModule::trivial(&f, 2, 3);
        let t = ExactTriple::new(b.clone(), &[vec![1, 0]]).unwrap();
        assert!(splits(&t) && invariants_additive(&t));
        let t = ExactTriple::new(b, &[]).unwrap();
        assert!(splits(&t) && invariants_additive(&t));
    }

    #[test]
    fn j2_inside_j3() {
        let f = fp(3);
        let b = CyclicModule::new(jordan_sum(&f, &[3]), 3).unwrap();
        let t = ExactTriple::new(b, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(block_decomposition(t.a()).sizes(), vec![2]);
        assert_eq!(block_decomposition(t.c()).sizes(), vec![1]);
        // dims of invariants: A^G = 1, C^G = 1, B^G = 1
        assert!(!invariants_additive(&t));
        assert!(!splits(&t));
    }

    #[test]
    fn additive_invariants_without_splitting() {
        // B = J_3 + J_1 with generators e, f; A is generated by Te + f, so A = J_2 sits
        // diagonally and B/A = J_2. Invariants are additive but B is not A + C.
        let f = fp(3);
        let b = CyclicModule::new(jordan_sum(&f, &[3, 1]), 3).unwrap();
        let t = ExactTriple::new(b, &[vec![0, 1, 0, 1], vec![1, 0, 0, 0]]).unwrap();
        assert_eq!(block_decomposition(t.a()).sizes(), vec![2]);
        assert_eq!(block_decomposition(t.c()).sizes(), vec![2]);
        assert_eq!(block_decomposition(t.b()).sizes(), vec![1, 3]);
        assert!(invariants_additive(&t));
        assert!(!splits(&t));
    }

    #[test]
    fn rejects_unstable_subspace() {
        let f = fp(3);
        let b = CyclicModule::new(jordan_sum(&f, &[2]), 3).unwrap();
        assert_eq!(
            ExactTriple::new(b, &[vec![0, 1]]).unwrap_err(),
            ModrepError::NotStable
        );
    }

    #[test]
    fn random_triples_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for (p, q) in [(3u64, 3u64), (2, 4), (5, 5), (2, 8), (3, 9)] {
            let f = fp(p);
            for _ in 0..40 {
                let t = random_triple(&f, q, 8, &mut rng).unwrap();
                assert_eq!(t.a().dim() + t.c().dim(), t.b().dim());
                // a split sequence always has additive invariants; the converse can fail
                if splits(&t) {
                    assert!(invariants_additive(&t));
                }
            }
        }
    }

    #[test]
    fn averaging_over_z6() {
        // Z/6 over F_2, P = {0, 3}. B = permutation module of Z/3 (1 acts as a 3-cycle,
        // 3 acts trivially) plus J_2 on which 1 acts as the involution.
        let f = fp(2);
        let g = GroupTable::cyclic(6);
        let perm = Matrix::from_int_rows(&f, &[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        let j2 = jordan_sum(&f, &[2]);
        let gen_b = perm.direct_sum(&j2);
        let on_b: Vec<Matrix> = (0..6).map(|k| gen_b.pow(k as u64)).collect();
        // A = span(1,1,1,0,0); C = B/A with coordinates (x0 - x2, x1 - x2, x3, x4)
        let proj = Matrix::from_int_rows(
            &f,
            &[
                vec![1, 0, 1, 0, 0],
                vec![0, 1, 1, 0, 0],
                vec![0, 0, 0, 1, 0],
                vec![0, 0, 0, 0, 1],
            ],
        );
        // induced action on C: solve proj * gen_b = gen_c * proj with a right inverse of proj
        let right_inv = Matrix::from_int_rows(
            &f,
            &[
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 0, 0],
                vec![0, 0, 1, 0],
                vec![0, 0, 0, 1],
            ],
        );
        let gen_c = proj.mul(&gen_b).unwrap().mul(&right_inv).unwrap();
        assert_eq!(proj.mul(&gen_b).unwrap(), gen_c.mul(&proj).unwrap());
        let on_c: Vec<Matrix> = (0..6).map(|k| gen_c.pow(k as u64)).collect();
        let action = GroupAction {
            on_b,
            on_c,
            projection: proj,
        };
        let p_sub = [0usize, 3];
        assert!(action.is_section(&right_inv));
        assert!(action.is_equivariant(&right_inv, &p_sub));
        assert!(!action.is_equivariant(&right_inv, &(0..6).collect::<Vec<_>>()));
        let avg = average_section(&g, &p_sub, &right_inv, &action).unwrap();
        assert!(action.is_section(&avg));
        // trivial subgroup of index 6 = 0 in F_2
        assert_eq!(
            average_section(&g, &[0], &right_inv, &action).unwrap_err(),
            ModrepError::IndexNotInvertible(6)
        );
    }

    #[test]
    fn averaging_with_trivial_index_is_identity() {
        let f = fp(3);
        let g = GroupTable::cyclic(3);
        let gen = jordan_sum(&f, &[1, 1]);
        let on_b: Vec<Matrix> = (0..3).map(|_| gen.clone()).collect();
        let on_c: Vec<Matrix> = (0..3).map(|_| Matrix::identity(&f, 1)).collect();
        let proj = Matrix::from_int_rows(&f, &[vec![0, 1]]);
        let s = Matrix::from_int_rows(&f, &[vec![2], vec![1]]);
        let action = GroupAction {
            on_b,
            on_c,
            projection: proj,
        };
        let all = [0usize, 1, 2];
        assert_eq!(average_section(&g, &all, &s, &action).unwrap(), s);
    }
}
