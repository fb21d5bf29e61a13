//! Parabolic and Levi combinatorics for GL(n).
//!
//! A parabolic subgroup containing the diagonal torus is encoded by an
//! ordered partition of {0,…,n-1}: the blocks are its Levi's diagonal
//! blocks, the order is the chamber. Standard parabolics are the ordered
//! partitions whose blocks are consecutive intervals in natural order;
//! everything else is a Weyl translate, carried around explicitly.
//!
//! Points of a_0 are rational vectors in Q^n. For nested parabolics
//! P ⊂ Q the simple roots of (P, Q) are differences of consecutive
//! P-block averages inside each Q-block, and the weights are the dual
//! basis to the (projected) coroots; the characteristic functions τ and
//! τ̂ cut out the chambers these define. All indicator evaluations use
//! strict inequalities and report wall hits as an explicit Boundary value
//! instead of silently picking a side.

pub mod gamma;
pub mod poly;

use crate::q::{Q, Z};
use itertools::Itertools;
use num::traits::Zero;

/// An ordered partition of {0,…,n-1}: a parabolic subgroup with its Levi
/// given by the unordered blocks and its chamber given by the order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Parabolic {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

/// A Levi subgroup containing the diagonal torus: an unordered set
/// partition, stored with blocks sorted by least element.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Levi {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Parabolic {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Parabolic {
        let mut seen = vec![false; n];
        for b in &blocks {
            assert!(!b.is_empty(), "empty block");
            for &i in b {
                assert!(i < n && !seen[i], "blocks must partition 0..n");
                seen[i] = true;
            }
        }
        assert!(seen.iter().all(|&s| s), "blocks must cover 0..n");
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Parabolic { n, blocks }
    }

    /// The standard parabolic of a composition: consecutive interval blocks.
    pub fn standard(parts: &[usize]) -> Parabolic {
        let n: usize = parts.iter().sum();
        let mut blocks = Vec::with_capacity(parts.len());
        let mut next = 0;
        for &len in parts {
            assert!(len >= 1);
            blocks.push((next..next + len).collect());
            next += len;
        }
        Parabolic::new(n, blocks)
    }

    /// The minimal (Borel) chamber: singleton blocks in natural order.
    pub fn borel(n: usize) -> Parabolic {
        Parabolic::standard(&vec![1; n])
    }

    /// The full group as a parabolic: one block.
    pub fn full(n: usize) -> Parabolic {
        Parabolic::standard(&[n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// dim a_P^G = number of blocks minus one.
    pub fn dim_rel_full(&self) -> usize {
        self.blocks.len() - 1
    }

    pub fn levi(&self) -> Levi {
        let mut blocks = self.blocks.clone();
        blocks.sort_by_key(|b| b[0]);
        Levi {
            n: self.n,
            blocks,
        }
    }

    /// Is this the standard chamber of its Levi with interval blocks?
    pub fn is_standard(&self) -> bool {
        let mut next = 0;
        for b in &self.blocks {
            for &i in b {
                if i != next {
                    return false;
                }
                next += 1;
            }
        }
        true
    }

    /// Refinement containment: self ⊂ other iff other's ordered blocks are
    /// unions of consecutive runs of self's ordered blocks.
    pub fn is_contained_in(&self, other: &Parabolic) -> bool {
        if self.n != other.n {
            return false;
        }
        let mut i = 0;
        for big in &other.blocks {
            let mut acc: Vec<usize> = Vec::with_capacity(big.len());
            while acc.len() < big.len() {
                let Some(b) = self.blocks.get(i) else {
                    return false;
                };
                acc.extend(b.iter().copied());
                i += 1;
            }
            acc.sort_unstable();
            if &acc != big {
                return false;
            }
        }
        i == self.blocks.len()
    }

    /// All parabolics R with self ⊆ R ⊆ top, as groupings of self's ordered
    /// blocks into consecutive runs respecting top's block boundaries.
    pub fn parabolics_between(&self, top: &Parabolic) -> Vec<Parabolic> {
        assert!(self.is_contained_in(top), "need self ⊆ top");
        // per top-block: the run of self-blocks inside it
        let mut runs: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut i = 0;
        for big in &top.blocks {
            let mut run = Vec::new();
            let mut count = 0;
            while count < big.len() {
                run.push(self.blocks[i].clone());
                count += self.blocks[i].len();
                i += 1;
            }
            runs.push(run);
        }
        // compositions of each run, then cartesian product
        let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        for run in runs {
            let groupings = compositions_of_sequence(&run);
            let mut next = Vec::with_capacity(out.len() * groupings.len());
            for prefix in &out {
                for g in &groupings {
                    let mut w = prefix.clone();
                    w.extend(g.iter().cloned());
                    next.push(w);
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|blocks| Parabolic::new(self.n, blocks))
            .collect()
    }

    /// All parabolics containing self (groupings of its ordered blocks).
    pub fn coarsenings(&self) -> Vec<Parabolic> {
        self.parabolics_between(&Parabolic::full(self.n))
    }

    /// Block averages of a point of a_0: the projection to a_P in
    /// per-block coordinates (one rational per block, in block order).
    pub fn block_values(&self, h: &[Q]) -> Vec<Q> {
        assert_eq!(h.len(), self.n);
        self.blocks
            .iter()
            .map(|b| {
                let sum: Q = b.iter().map(|&i| h[i].clone()).sum();
                sum / Q::from_integer(Z::from(b.len() as u64))
            })
            .collect()
    }

    /// The projection of h to a_P as a vector of a_0 (constant on blocks).
    pub fn project(&self, h: &[Q]) -> Vec<Q> {
        let vals = self.block_values(h);
        let mut out = vec![Q::zero(); self.n];
        for (b, v) in self.blocks.iter().zip(vals) {
            for &i in b {
                out[i] = v.clone();
            }
        }
        out
    }

    /// The projection of h to a_P^G (block averages minus global mean).
    pub fn project_rel_full(&self, h: &[Q]) -> Vec<Q> {
        let mut out = self.project(h);
        let mean: Q = out.iter().sum::<Q>() / Q::from_integer(Z::from(self.n as u64));
        for x in &mut out {
            *x -= &mean;
        }
        out
    }
}

impl Levi {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Levi {
        Parabolic::new(n, blocks).levi()
    }

    pub fn full(n: usize) -> Levi {
        Parabolic::full(n).levi()
    }

    pub fn diagonal(n: usize) -> Levi {
        Parabolic::borel(n).levi()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn dim_rel_full(&self) -> usize {
        self.blocks.len() - 1
    }

    /// The canonical chamber: blocks in stored (min-element) order.
    pub fn canonical_chamber(&self) -> Parabolic {
        Parabolic::new(self.n, self.blocks.clone())
    }

    /// All chambers of a_L: the orderings of the blocks (the set P(L)).
    pub fn chambers(&self) -> Vec<Parabolic> {
        let r = self.blocks.len();
        (0..r)
            .permutations(r)
            .map(|perm| {
                Parabolic::new(
                    self.n,
                    perm.into_iter().map(|i| self.blocks[i].clone()).collect(),
                )
            })
            .collect()
    }

    /// Does this Levi contain the other (other's blocks refine self's)?
    pub fn contains(&self, other: &Levi) -> bool {
        if self.n != other.n {
            return false;
        }
        other.blocks.iter().all(|small| {
            self.blocks
                .iter()
                .any(|big| small.iter().all(|i| big.contains(i)))
        })
    }

    /// All Levis containing self: set partitions of self's blocks, merged.
    pub fn containing_levis(&self) -> Vec<Levi> {
        set_partitions(self.blocks.len())
            .into_iter()
            .map(|groups| {
                let blocks = groups
                    .into_iter()
                    .map(|g| {
                        let mut merged: Vec<usize> = g
                            .into_iter()
                            .flat_map(|bi| self.blocks[bi].iter().copied())
                            .collect();
                        merged.sort_unstable();
                        merged
                    })
                    .collect();
                Levi::new(self.n, blocks)
            })
            .collect()
    }

    pub fn block_values(&self, h: &[Q]) -> Vec<Q> {
        self.canonical_chamber().block_values(h)
    }

    pub fn project(&self, h: &[Q]) -> Vec<Q> {
        self.canonical_chamber().project(h)
    }

    pub fn project_rel_full(&self, h: &[Q]) -> Vec<Q> {
        self.canonical_chamber().project_rel_full(h)
    }
}

/// All groupings of a sequence into nonempty consecutive runs, each run
/// merged into one sorted block.
fn compositions_of_sequence(seq: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let s = seq.len();
    if s == 0 {
        return vec![Vec::new()];
    }
    // bitmask over the s-1 possible cut points
    let mut out = Vec::with_capacity(1 << (s - 1));
    for cuts in 0u32..(1 << (s - 1)) {
        let mut grouping = Vec::new();
        let mut current: Vec<usize> = Vec::new();
        for (i, block) in seq.iter().enumerate() {
            current.extend(block.iter().copied());
            let cut_here = i + 1 == s || cuts & (1 << i) != 0;
            if cut_here {
                current.sort_unstable();
                grouping.push(std::mem::take(&mut current));
            }
        }
        out.push(grouping);
    }
    out
}

/// All set partitions of {0,…,m-1}, as lists of sorted groups sorted by
/// least element.
pub fn set_partitions(m: usize) -> Vec<Vec<Vec<usize>>> {
    if m == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for mut smaller in set_partitions(m - 1) {
        for gi in 0..smaller.len() {
            let mut w = smaller.clone();
            w[gi].push(m - 1);
            out.push(w);
        }
        smaller.push(vec![m - 1]);
        out.push(smaller);
    }
    out
}

/// Tristate indicator value: identities hold off walls, and wall hits are
/// reported, never rounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Indicator {
    Zero,
    One,
    Boundary,
}

impl Indicator {
    pub fn from_strict_positivity(values: &[Q]) -> Indicator {
        if values.iter().any(|v| v.is_zero()) {
            Indicator::Boundary
        } else if values.iter().all(|v| v > &Q::zero()) {
            Indicator::One
        } else {
            Indicator::Zero
        }
    }

    pub fn as_int(self) -> Option<i64> {
        match self {
            Indicator::Zero => Some(0),
            Indicator::One => Some(1),
            Indicator::Boundary => None,
        }
    }
}

/// The simple-root values of (P, Q) at h: differences of consecutive
/// P-block averages within each Q-block. Empty when P = Q.
pub fn simple_root_values(p: &Parabolic, q: &Parabolic, h: &[Q]) -> Vec<Q> {
    assert!(p.is_contained_in(q), "need P ⊆ Q");
    let pv = p.block_values(h);
    let mut out = Vec::new();
    let mut i = 0;
    for big in q.blocks() {
        let mut count = 0;
        let start = i;
        while count < big.len() {
            count += p.blocks()[i].len();
            i += 1;
        }
        for j in start..i - 1 {
            out.push(&pv[j] - &pv[j + 1]);
        }
    }
    out
}

/// The weight values of (P, Q) at h: for each Q-block with P-blocks of
/// sizes m_1..m_s, center the P-block averages to mean zero (weighted by
/// size) and emit the partial sums sum_{j<=i} m_j h_j for i < s. These are
/// the pairings of h with the weights dual to the projected coroots.
pub fn weight_values(p: &Parabolic, q: &Parabolic, h: &[Q]) -> Vec<Q> {
    assert!(p.is_contained_in(q), "need P ⊆ Q");
    let pv = p.block_values(h);
    let mut out = Vec::new();
    let mut i = 0;
    for big in q.blocks() {
        let start = i;
        let mut count = 0;
        while count < big.len() {
            count += p.blocks()[i].len();
            i += 1;
        }
        let sizes: Vec<Q> = (start..i)
            .map(|j| Q::from_integer(Z::from(p.blocks()[j].len() as u64)))
            .collect();
        let total: Q = sizes.iter().sum();
        let weighted: Q = (start..i).map(|j| &pv[j] * &sizes[j - start]).sum();
        let mean = weighted / &total;
        let mut partial = Q::zero();
        for j in start..i - 1 {
            partial += &sizes[j - start] * (&pv[j] - &mean);
            out.push(partial.clone());
        }
    }
    out
}

/// τ_P^Q(h): strict positivity on the simple roots of (P, Q).
pub fn tau(p: &Parabolic, q: &Parabolic, h: &[Q]) -> Indicator {
    Indicator::from_strict_positivity(&simple_root_values(p, q, h))
}

/// τ̂_P^Q(h): strict positivity on the weights of (P, Q).
pub fn hat_tau(p: &Parabolic, q: &Parabolic, h: &[Q]) -> Indicator {
    Indicator::from_strict_positivity(&weight_values(p, q, h))
}

/// Result of an alternating indicator sum: an exact integer off walls.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndicatorSum {
    Value(i64),
    Boundary,
}

impl IndicatorSum {
    pub fn value(self) -> Option<i64> {
        match self {
            IndicatorSum::Value(v) => Some(v),
            IndicatorSum::Boundary => None,
        }
    }
}

/// The Langlands alternating sum over P1 ⊆ P2 ⊆ P3 of
/// (-1)^{dim a_{P2}^{P3}} τ_{P1}^{P2}(h) τ̂_{P2}^{P3}(h);
/// equal to 1 when P1 = P3 and 0 otherwise, for h off the walls.
pub fn langlands_sum(p1: &Parabolic, p3: &Parabolic, h: &[Q]) -> IndicatorSum {
    let mut total = 0i64;
    for p2 in p1.parabolics_between(p3) {
        let sign = if (p2.num_blocks() - p3.num_blocks()) % 2 == 0 {
            1
        } else {
            -1
        };
        let a = tau(p1, &p2, h);
        let b = hat_tau(&p2, p3, h);
        match (a.as_int(), b.as_int()) {
            (Some(x), Some(y)) => total += sign * x * y,
            _ => return IndicatorSum::Boundary,
        }
    }
    IndicatorSum::Value(total)
}

/// The auxiliary alternating sum σ_{P1}^{P4}(h) =
/// Σ_{P5 ⊇ P4} (-1)^{dim a_{P4}^{P5}} τ_{P1}^{P5}(h) τ̂_{P5}(h).
/// Exposed as an evaluator; it enters convergence arguments rather than a
/// checked identity.
pub fn sigma_sum(p1: &Parabolic, p4: &Parabolic, h: &[Q]) -> IndicatorSum {
    assert!(p1.is_contained_in(p4));
    let g = Parabolic::full(p1.n());
    let mut total = 0i64;
    for p5 in p4.coarsenings() {
        let sign = if (p4.num_blocks() - p5.num_blocks()) % 2 == 0 {
            1
        } else {
            -1
        };
        let a = tau(p1, &p5, h);
        let b = hat_tau(&p5, &g, h);
        match (a.as_int(), b.as_int()) {
            (Some(x), Some(y)) => total += sign * x * y,
            _ => return IndicatorSum::Boundary,
        }
    }
    IndicatorSum::Value(total)
}

/// All compositions of n (ordered partitions into positive parts):
/// indexes the standard parabolics.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for rest in compositions(n - first) {
            let mut c = vec![first];
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

/// One test point per open chamber of a_0: the permutations of
/// (2^n, …, 4, 2). Powers of two keep every root and weight functional
/// that arises for n ≤ 4 away from zero, unlike (n, …, 1) where e.g.
/// 2+2 = 3+1 lands on a weight wall.
pub fn chamber_test_points(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .permutations(n)
        .map(|perm| {
            let mut h = vec![Q::zero(); n];
            for (rank, &pos) in perm.iter().enumerate() {
                h[pos] = Q::from_integer(Z::from(1u64 << (n - rank)));
            }
            h
        })
        .collect()
}

/// Weyl representatives are permutation matrices; they lie in GL(n, Z_p)
/// for every p (integer entries, determinant ±1), so the Iwasawa height
/// vanishes on them and the truncation base point is the origin. This
/// check is the recorded justification.
pub fn weyl_representatives_have_zero_height(n: usize) -> bool {
    (0..n).permutations(n).all(|perm| {
        // entries of the permutation matrix are 0/1, hence integral;
        // determinant is the sign of the permutation, hence a unit
        let mut sign_swaps = 0usize;
        for i in 0..n {
            for j in (i + 1)..n {
                if perm[i] > perm[j] {
                    sign_swaps += 1;
                }
            }
        }
        let det: i64 = if sign_swaps % 2 == 0 { 1 } else { -1 };
        det == 1 || det == -1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::qi;

    fn h2(a: i64, b: i64) -> Vec<Q> {
        vec![qi(a), qi(b)]
    }

    fn h3(a: i64, b: i64, c: i64) -> Vec<Q> {
        vec![qi(a), qi(b), qi(c)]
    }

    #[test]
    fn containment_and_enumeration() {
        let b = Parabolic::borel(3);
        let p21 = Parabolic::standard(&[2, 1]);
        let g = Parabolic::full(3);
        assert!(b.is_contained_in(&p21));
        assert!(p21.is_contained_in(&g));
        assert!(!p21.is_contained_in(&b));
        assert_eq!(b.parabolics_between(&g).len(), 4); // compositions of 3
        assert_eq!(b.parabolics_between(&p21).len(), 2);
        assert_eq!(compositions(4).len(), 8);
    }

    #[test]
    fn nonstandard_chambers() {
        let m0 = Levi::diagonal(3);
        assert_eq!(m0.chambers().len(), 6);
        let l = Levi::new(3, vec![vec![0, 2], vec![1]]);
        assert_eq!(l.chambers().len(), 2);
        assert!(Levi::full(3).contains(&l));
        assert!(l.contains(&Levi::diagonal(3)));
        // L(M_0) for GL(3): 1 + 3 + 1 set partitions
        assert_eq!(m0.containing_levis().len(), 5);
    }

    #[test]
    fn tau_gl2_examples() {
        let b = Parabolic::borel(2);
        let g = Parabolic::full(2);
        assert_eq!(tau(&b, &g, &h2(1, -1)), Indicator::One);
        assert_eq!(hat_tau(&b, &g, &h2(1, -1)), Indicator::One);
        assert_eq!(tau(&b, &g, &h2(-1, 1)), Indicator::Zero);
        assert_eq!(hat_tau(&b, &g, &h2(-1, 1)), Indicator::Zero);
        assert_eq!(tau(&b, &g, &h2(2, 2)), Indicator::Boundary);
    }

    #[test]
    fn tau_gl3_block_boundary() {
        let b = Parabolic::borel(3);
        let p21 = Parabolic::standard(&[2, 1]);
        // only the internal root of the (2,1)-block family: e0 - e1
        assert_eq!(tau(&b, &p21, &h3(1, 0, -1)), Indicator::One);
        assert_eq!(tau(&b, &p21, &h3(0, 1, -1)), Indicator::Zero);
    }

    #[test]
    fn weights_match_duality() {
        // For GL(2), the weight of B is alpha/2: hat_tau flips with tau
        // together on the sign of h1 - h2. For GL(3) B in G the weights are
        // the two fundamental weights; check H = (1,0,-1) gives positive
        // pairings (1 and 1).
        let b = Parabolic::borel(3);
        let g = Parabolic::full(3);
        let w = weight_values(&b, &g, &h3(1, 0, -1));
        assert_eq!(w, vec![qi(1), qi(1)]);
        // and the classic point inside the hat-tau cone but outside the
        // tau cone: partial sums 5 and 1 are positive while -4 < -1
        let h = h3(5, -4, -1);
        assert_eq!(tau(&b, &g, &h), Indicator::Zero);
        assert_eq!(weight_values(&b, &g, &h), vec![qi(5), qi(1)]);
        assert_eq!(hat_tau(&b, &g, &h), Indicator::One);
    }

    #[test]
    fn langlands_gl2() {
        let b = Parabolic::borel(2);
        let g = Parabolic::full(2);
        assert_eq!(langlands_sum(&b, &g, &h2(1, -1)), IndicatorSum::Value(0));
        assert_eq!(langlands_sum(&b, &g, &h2(-3, 7)), IndicatorSum::Value(0));
        assert_eq!(langlands_sum(&b, &b, &h2(1, -1)), IndicatorSum::Value(1));
        assert_eq!(langlands_sum(&g, &g, &h2(9, 2)), IndicatorSum::Value(1));
        assert_eq!(langlands_sum(&b, &g, &h2(1, 1)), IndicatorSum::Boundary);
    }

    #[test]
    fn langlands_exhaustive_small_ranks() {
        for n in 2..=4usize {
            let points = chamber_test_points(n);
            let comps = compositions(n);
            for c1 in &comps {
                let p1 = Parabolic::standard(c1);
                for c3 in &comps {
                    let p3 = Parabolic::standard(c3);
                    if !p1.is_contained_in(&p3) {
                        continue;
                    }
                    let expect = if p1 == p3 { 1 } else { 0 };
                    for h in &points {
                        assert_eq!(
                            langlands_sum(&p1, &p3, h),
                            IndicatorSum::Value(expect),
                            "n={n} P1={c1:?} P3={c3:?} h={h:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sigma_evaluates() {
        let b = Parabolic::borel(3);
        let g = Parabolic::full(3);
        // sigma_{B}^{G} = tau_B^G * hat_tau_G = tau_B^G (single term).
        let h = h3(2, 1, -3);
        assert_eq!(sigma_sum(&b, &g, &h), IndicatorSum::Value(1));
        assert_eq!(sigma_sum(&b, &b, &h).value().is_some(), true);
    }

    #[test]
    fn projections_compose() {
        let b = Parabolic::borel(3);
        let p21 = Parabolic::standard(&[2, 1]);
        let h = vec![qi(5), qi(-1), qi(2)];
        let hq = p21.project(&h);
        // projecting the already-projected point to the finer space fixes it
        assert_eq!(b.project(&hq), hq);
        assert_eq!(p21.project(&hq), hq);
        // rel-full projection kills constants
        let c = vec![qi(7), qi(7), qi(7)];
        assert_eq!(p21.project_rel_full(&c), vec![Q::zero(); 3]);
    }

    #[test]
    fn weyl_heights_vanish() {
        for n in 2..=4 {
            assert!(weyl_representatives_have_zero_height(n));
        }
    }

    #[test]
    fn set_partition_counts_are_bell() {
        assert_eq!(set_partitions(3).len(), 5);
        assert_eq!(set_partitions(4).len(), 15);
    }
}
