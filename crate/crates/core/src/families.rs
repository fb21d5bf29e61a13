//! Orthogonal sets and their weight factors.
//!
//! A positive orthogonal set for a Levi M assigns to every chamber
//! P ∈ P(M) a point Y_P of a_M^G so that the difference across each wall
//! is a nonnegative multiple of the wall's coroot. Two weight factors are
//! attached to such a set and proved equal:
//!
//! * the analytic route: c_P(λ) = exp λ(Y_P), and the smooth limit
//!   c_M(0) of Σ_P c_P(λ)/θ_P(λ), extracted exactly from truncated
//!   exponential germs and one exact polynomial division;
//! * the geometric route: the volume of the convex hull of {Y_P} in the
//!   coweight-normalized measure on a_M^G.
//!
//! On top of these sit the derived factors v′_Q (integrals of the Γ′
//! truncation kernels), the product identity over F(M), the descent
//! constants d(L1, L2) with their section map, and the descent identity —
//! every one checked exactly in the tests.

use crate::linalg;
use crate::q::{q, Q, Z};
use crate::roots::gamma::{gamma_prime_integral, ChamberChart, PairChart};
use crate::roots::poly::PolyQ;
use crate::roots::{Levi, Parabolic};
use num::traits::{One, Signed, Zero};

/// All parabolics whose Levi contains M: the index set F(M) of the
/// product identity. For the diagonal Levi of GL(3) this has 13 elements.
pub fn parabolics_containing(m: &Levi) -> Vec<Parabolic> {
    m.containing_levis()
        .iter()
        .flat_map(|l| l.chambers())
        .collect()
}

/// A positive orthogonal set for M: one point of a_M^G per chamber of M,
/// wall differences along coroot rays. Construction validates the
/// positivity condition on every adjacent pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthogonalSet {
    levi: Levi,
    chambers: Vec<Parabolic>,
    points: Vec<Vec<Q>>,
}

/// The simple coroots of a chamber: for consecutive ordered blocks
/// (B_k, B_{k+1}) of sizes a, b the coroot is (1/a)·1_{B_k} - (1/b)·1_{B_{k+1}},
/// a vector of a_M^G.
pub fn simple_coroots(p: &Parabolic) -> Vec<Vec<Q>> {
    let blocks = p.blocks();
    (0..blocks.len() - 1)
        .map(|k| {
            let mut v = vec![Q::zero(); p.n()];
            let a = Q::from_integer(Z::from(blocks[k].len() as u64));
            let b = Q::from_integer(Z::from(blocks[k + 1].len() as u64));
            for &i in &blocks[k] {
                v[i] = Q::one() / &a;
            }
            for &i in &blocks[k + 1] {
                v[i] = -Q::one() / &b;
            }
            v
        })
        .collect()
}

/// All coroots positive for the chamber: one per ordered block pair.
pub fn positive_coroots(p: &Parabolic) -> Vec<Vec<Q>> {
    let blocks = p.blocks();
    let mut out = Vec::new();
    for k in 0..blocks.len() {
        for l in k + 1..blocks.len() {
            let mut v = vec![Q::zero(); p.n()];
            let a = Q::from_integer(Z::from(blocks[k].len() as u64));
            let b = Q::from_integer(Z::from(blocks[l].len() as u64));
            for &i in &blocks[k] {
                v[i] = Q::one() / &a;
            }
            for &i in &blocks[l] {
                v[i] = -Q::one() / &b;
            }
            out.push(v);
        }
    }
    out
}

impl OrthogonalSet {
    pub fn new(levi: Levi, assign: impl Fn(&Parabolic) -> Vec<Q>) -> OrthogonalSet {
        let chambers = levi.chambers();
        let points: Vec<Vec<Q>> = chambers
            .iter()
            .map(|p| p.project_rel_full(&assign(p)))
            .collect();
        let set = OrthogonalSet {
            levi,
            chambers,
            points,
        };
        set.validate();
        set
    }

    fn validate(&self) {
        let chart = ChamberChart::new(&self.levi.canonical_chamber());
        for (i, p) in self.chambers.iter().enumerate() {
            let blocks = p.blocks();
            for k in 0..blocks.len() - 1 {
                // the chamber across the k-th wall: swap blocks k, k+1
                let mut swapped = blocks.to_vec();
                swapped.swap(k, k + 1);
                let neighbor = Parabolic::new(p.n(), swapped);
                let j = self
                    .chambers
                    .iter()
                    .position(|c| *c == neighbor)
                    .expect("neighbor chamber missing");
                let diff: Vec<Q> = self.points[i]
                    .iter()
                    .zip(&self.points[j])
                    .map(|(a, b)| a - b)
                    .collect();
                let coroot = &simple_coroots(p)[k];
                // diff must equal c * coroot with c >= 0
                let dc = chart.coords(&diff);
                let cc = chart.coords(coroot);
                let pivot = cc
                    .iter()
                    .position(|x| !x.is_zero())
                    .expect("zero coroot");
                let factor = &dc[pivot] / &cc[pivot];
                assert!(
                    !factor.is_negative(),
                    "wall difference points against the coroot"
                );
                for (a, b) in dc.iter().zip(&cc) {
                    assert_eq!(a, &(&factor * b), "wall difference off the coroot ray");
                }
            }
        }
    }

    pub fn levi(&self) -> &Levi {
        &self.levi
    }

    pub fn chambers(&self) -> &[Parabolic] {
        &self.chambers
    }

    pub fn point(&self, p: &Parabolic) -> &[Q] {
        let i = self
            .chambers
            .iter()
            .position(|c| c == p)
            .expect("not a chamber of this Levi");
        &self.points[i]
    }

    pub fn sum(&self, other: &OrthogonalSet) -> OrthogonalSet {
        assert_eq!(self.levi, other.levi);
        OrthogonalSet::new(self.levi.clone(), |p| {
            self.point(p)
                .iter()
                .zip(other.point(p))
                .map(|(a, b)| a + b)
                .collect()
        })
    }

    pub fn scale(&self, c: &Q) -> OrthogonalSet {
        assert!(!c.is_negative(), "scaling must preserve positivity");
        OrthogonalSet::new(self.levi.clone(), |p| {
            self.point(p).iter().map(|x| x * c).collect()
        })
    }

    /// The set induced from a regular dominant point t of a_0 (strictly
    /// decreasing entries): each chamber receives the projection of the
    /// Weyl translate of t that sorts the largest entries into its first
    /// block. Differences across a wall project onto the wall coroot with
    /// nonnegative coefficient, so positivity is automatic (and still
    /// checked).
    pub fn induced_from_dominant(levi: &Levi, t: &[Q]) -> OrthogonalSet {
        assert_eq!(t.len(), levi.n());
        let mut sorted = t.to_vec();
        sorted.sort_by(|a, b| b.cmp(a));
        for w in sorted.windows(2) {
            assert!(w[0] > w[1], "dominant point must be regular");
        }
        OrthogonalSet::new(levi.clone(), |p| {
            let mut h = vec![Q::zero(); levi.n()];
            let mut next = 0;
            for block in p.blocks() {
                for &i in block {
                    h[i] = sorted[next].clone();
                    next += 1;
                }
            }
            h
        })
    }

    /// A seeded positive orthogonal set: the sum of `terms` induced sets
    /// at seeded regular dominant points. Deterministic in the seed.
    pub fn seeded(levi: &Levi, seed: u64, terms: usize) -> OrthogonalSet {
        let n = levi.n();
        let mut state = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut next = move || {
            state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
            z ^ (z >> 31)
        };
        let mut total: Option<OrthogonalSet> = None;
        for _ in 0..terms.max(1) {
            let mut t: Vec<Q> = (0..n).map(|_| q((next() % 2000) as i64, 41)).collect();
            t.sort_by(|a, b| b.cmp(a));
            // enforce strict decrease by spreading ties
            for i in 0..n {
                t[i] += q(((n - i) * 7) as i64, 3);
            }
            let term = OrthogonalSet::induced_from_dominant(levi, &t);
            total = Some(match total {
                None => term,
                Some(acc) => acc.sum(&term),
            });
        }
        total.unwrap()
    }

    /// The convex hull volume of the points in the coweight-normalized
    /// measure on a_M^G; the geometric weight factor.
    pub fn hull_volume(&self) -> Q {
        let chart = ChamberChart::new(&self.levi.canonical_chamber());
        let pts: Vec<Vec<Q>> = self.points.iter().map(|y| chart.coords(y)).collect();
        hull_volume_in_chart(chart.dim(), &pts)
    }

    /// The common projection to a_{L_Q}^G of the points of chambers
    /// contained in Q; orthogonality makes it independent of the chamber,
    /// which is asserted.
    pub fn projection_to(&self, qp: &Parabolic) -> Vec<Q> {
        let mut out: Option<Vec<Q>> = None;
        for (p, y) in self.chambers.iter().zip(&self.points) {
            if !p.is_contained_in(qp) {
                continue;
            }
            let proj = qp.project_rel_full(y);
            match &out {
                None => out = Some(proj),
                Some(prev) => assert_eq!(prev, &proj, "projection not chamber-independent"),
            }
        }
        out.expect("no chamber of M inside Q")
    }

    /// v′_Q: the integral of the truncation kernel Γ′_Q against this
    /// set's projection.
    pub fn v_prime(&self, qp: &Parabolic) -> Q {
        gamma_prime_integral(qp, &self.projection_to(qp))
    }

    /// The hull volume of the restriction to Q: project the points of
    /// chambers inside Q to a_M^{L_Q} and take the volume there.
    pub fn restricted_hull_volume(&self, qp: &Parabolic) -> Q {
        let p_ref = self
            .chambers
            .iter()
            .find(|p| p.is_contained_in(qp))
            .expect("no chamber of M inside Q");
        let chart = PairChart::new(p_ref, qp);
        let pts: Vec<Vec<Q>> = self
            .chambers
            .iter()
            .zip(&self.points)
            .filter(|(p, _)| p.is_contained_in(qp))
            .map(|(_, y)| chart.coords(y))
            .collect();
        hull_volume_in_chart(chart.dim(), &pts)
    }

    /// The restricted set on a larger Levi L: each chamber R of L gets
    /// the projection of Y_P for P ⊂ R (chamber-independent, asserted).
    pub fn restricted_to_levi(&self, l: &Levi) -> OrthogonalSet {
        assert!(l.contains(&self.levi));
        OrthogonalSet::new(l.clone(), |r| self.projection_to(r))
    }

    /// The analytic weight factor: the value at λ = 0 of
    /// Σ_P exp λ(Y_P) / θ_P(λ), where θ_P(λ) is the product of λ over the
    /// simple coroots of P divided by the covolume of the lattice they
    /// span. Computed from exponential germs: multiplying by the product
    /// L(λ) over all positive coroots clears every denominator, all germ
    /// terms below degree #R⁺ must cancel (asserted), and one exact
    /// division of the degree-#R⁺ part by L yields the constant.
    pub fn c_limit(&self) -> Q {
        let canonical = self.levi.canonical_chamber();
        let chart = ChamberChart::new(&canonical);
        let d = chart.dim();
        if d == 0 {
            return Q::one();
        }
        let pos = positive_coroots(&canonical);
        let deg = pos.len() as u32;
        let form = |v: &Vec<Q>| PolyQ::linear(&chart.coords(v));
        let big_l = pos
            .iter()
            .map(form)
            .fold(PolyQ::one(d), |acc, f| acc.mul(&f));
        let mut total = PolyQ::zero(d);
        for (p, y) in self.chambers.iter().zip(&self.points) {
            let simple = simple_coroots(p);
            let covol = linalg::det(&simple.iter().map(|v| chart.coords(v)).collect::<Vec<_>>())
                .abs();
            let m_p = simple
                .iter()
                .map(form)
                .fold(PolyQ::one(d), |acc, f| acc.mul(&f));
            let l_over_theta = big_l
                .divide_exact(&m_p)
                .expect("positive-coroot product not divisible by chamber product")
                .scale(&covol);
            let germ = PolyQ::exp_truncated(&PolyQ::linear(&chart.coords(y)), deg);
            total = total.add(&germ.mul_truncated(&l_over_theta, deg));
        }
        for k in 0..deg {
            assert!(
                total.homogeneous_part(k).is_zero(),
                "family sum has a pole: degree-{k} germ term survives"
            );
        }
        let top = total.homogeneous_part(deg);
        let quot = top
            .divide_exact(&big_l)
            .expect("smooth part not divisible by the coroot product");
        assert_eq!(quot.total_degree().unwrap_or(0), 0);
        quot.coeff(&vec![0; d])
    }
}

/// Exact convex hull volume of points given in chart coordinates, for
/// dimensions 0, 1, 2.
pub(crate) fn hull_volume_in_chart(dim: usize, pts: &[Vec<Q>]) -> Q {
    assert!(!pts.is_empty());
    match dim {
        0 => Q::one(),
        1 => {
            let mut lo = pts[0][0].clone();
            let mut hi = pts[0][0].clone();
            for p in pts {
                if p[0] < lo {
                    lo = p[0].clone();
                }
                if p[0] > hi {
                    hi = p[0].clone();
                }
            }
            hi - lo
        }
        2 => {
            let hull = convex_hull_2d(pts);
            if hull.len() < 3 {
                return Q::zero();
            }
            let mut twice_area = Q::zero();
            for i in 0..hull.len() {
                let j = (i + 1) % hull.len();
                twice_area += &hull[i][0] * &hull[j][1] - &hull[j][0] * &hull[i][1];
            }
            twice_area.abs() / Q::from_integer(2.into())
        }
        _ => panic!("hull volume not implemented in dimension {dim}"),
    }
}

/// Andrew's monotone chain with exact orientation tests. Returns the hull
/// in counterclockwise order without collinear interior points.
pub(crate) fn convex_hull_2d(pts: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let mut sorted: Vec<Vec<Q>> = pts.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() <= 2 {
        return sorted;
    }
    let cross = |o: &Vec<Q>, a: &Vec<Q>, b: &Vec<Q>| -> Q {
        (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
    };
    let mut lower: Vec<Vec<Q>> = Vec::new();
    for p in &sorted {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<Q>> = Vec::new();
    for p in sorted.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// The coweight basis of a_M^L: the chart basis vectors of the canonical
/// chamber of M relative to (the canonical chamber of) L, as a_0 vectors.
pub fn coweight_basis_rel(m: &Levi, l: &Levi) -> Vec<Vec<Q>> {
    assert!(l.contains(m));
    // order M's blocks compatibly with L's canonical chamber
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for big in l.canonical_chamber().blocks() {
        let mut inside: Vec<Vec<usize>> = m
            .blocks()
            .iter()
            .filter(|b| b.iter().all(|i| big.contains(i)))
            .cloned()
            .collect();
        inside.sort();
        blocks.extend(inside);
    }
    let p = Parabolic::new(m.n(), blocks);
    let chart = PairChart::new(&p, &l.canonical_chamber());
    (0..chart.dim())
        .map(|k| {
            let mut u = vec![Q::zero(); chart.dim()];
            u[k] = Q::one();
            chart.embed(&u)
        })
        .collect()
}

/// The descent constant d(L1, L2) relative to M: zero unless
/// a_M^{L1} ⊕ a_M^{L2} = a_M^G, and otherwise the absolute determinant of
/// the combined coweight bases of the two summands written in the
/// coweight basis of a_M^G. Symmetric, and d(M, G) = d(G, M) = 1.
pub fn descent_constant(m: &Levi, l1: &Levi, l2: &Levi) -> Q {
    let chart = ChamberChart::new(&m.canonical_chamber());
    let d = chart.dim();
    let b1 = coweight_basis_rel(m, l1);
    let b2 = coweight_basis_rel(m, l2);
    if b1.len() + b2.len() != d {
        return Q::zero();
    }
    let cols: Vec<Vec<Q>> = b1.iter().chain(&b2).map(|v| chart.coords(v)).collect();
    // columns into a matrix (rows are chart coordinates)
    let mat: Vec<Vec<Q>> = (0..d)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    if d == 0 {
        return Q::one();
    }
    linalg::det(&mat).abs()
}

/// The section map: given a generic ξ ∈ a_M^G and Levis L1, L2 with
/// nonzero descent constant, solve 2ξ = ξ1 - ξ2 with ξ_i ∈ a_{L_i}^G and
/// return the chambers Q_i ∈ P(L_i) whose positive cones contain ξ_i.
/// None when the constant vanishes or ξ is not generic for this pair.
pub fn s_map(
    m: &Levi,
    l1: &Levi,
    l2: &Levi,
    xi: &[Q],
) -> Option<(Parabolic, Parabolic)> {
    s_map_witness(m, l1, l2, xi).map(|(q1, _, q2, _)| (q1, q2))
}

/// As [`s_map`], but also return the solution points ξ1, ξ2 themselves so
/// the chamber memberships can be re-verified independently.
pub fn s_map_witness(
    m: &Levi,
    l1: &Levi,
    l2: &Levi,
    xi: &[Q],
) -> Option<(Parabolic, Vec<Q>, Parabolic, Vec<Q>)> {
    let chart = ChamberChart::new(&m.canonical_chamber());
    let d = chart.dim();
    let b1: Vec<Vec<Q>> = (0..ChamberChart::new(&l1.canonical_chamber()).dim())
        .map(|k| {
            let c = ChamberChart::new(&l1.canonical_chamber());
            let mut u = vec![Q::zero(); c.dim()];
            u[k] = Q::one();
            c.embed(&u)
        })
        .collect();
    let b2: Vec<Vec<Q>> = (0..ChamberChart::new(&l2.canonical_chamber()).dim())
        .map(|k| {
            let c = ChamberChart::new(&l2.canonical_chamber());
            let mut u = vec![Q::zero(); c.dim()];
            u[k] = Q::one();
            c.embed(&u)
        })
        .collect();
    if b1.len() + b2.len() != d {
        return None;
    }
    // solve in chart coordinates: [B1 | -B2] x = 2ξ
    let cols: Vec<Vec<Q>> = b1
        .iter()
        .map(|v| chart.coords(v))
        .chain(b2.iter().map(|v| {
            chart.coords(v).iter().map(|c| -c).collect()
        }))
        .collect();
    let mat: Vec<Vec<Q>> = (0..d)
        .map(|r| cols.iter().map(|c| c[r].clone()).collect())
        .collect();
    let rhs: Vec<Q> = chart
        .coords(xi)
        .iter()
        .map(|c| c * Q::from_integer(2.into()))
        .collect();
    let x = linalg::solve(&mat, &rhs)?;
    let combine = |basis: &[Vec<Q>], coef: &[Q]| -> Vec<Q> {
        let mut v = vec![Q::zero(); m.n()];
        for (b, c) in basis.iter().zip(coef) {
            for i in 0..v.len() {
                v[i] += &b[i] * c;
            }
        }
        v
    };
    let xi1 = combine(&b1, &x[..b1.len()]);
    let xi2 = combine(&b2, &x[b1.len()..]);
    let q1 = chamber_containing(l1, &xi1)?;
    let q2 = chamber_containing(l2, &xi2)?;
    Some((q1, xi1, q2, xi2))
}

/// The chamber of P(L) whose simple roots are strictly positive on a
/// point of a_L^G; None if the point sits on a wall.
pub fn chamber_containing(l: &Levi, v: &[Q]) -> Option<Parabolic> {
    use crate::roots::{tau, Indicator};
    let g = Parabolic::full(l.n());
    let mut found = None;
    for p in l.chambers() {
        match tau(&p, &g, v) {
            Indicator::One => found = Some(p),
            Indicator::Boundary => return None,
            Indicator::Zero => {}
        }
    }
    found
}

/// A seeded point of a_M^G that is generic for the section map: every
/// complementary pair of Levis over M yields strict chambers.
pub fn generic_xi(m: &Levi, seed: u64) -> Vec<Q> {
    let chart = ChamberChart::new(&m.canonical_chamber());
    let d = chart.dim();
    let levis = m.containing_levis();
    let mut state = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    'outer: for _ in 0..200 {
        let u: Vec<Q> = (0..d).map(|_| q((next() % 4001) as i64 - 2000, 89)).collect();
        if u.iter().any(|x| x.is_zero()) {
            continue;
        }
        let xi = chart.embed(&u);
        for l1 in &levis {
            for l2 in &levis {
                if !descent_constant(m, l1, l2).is_zero()
                    && s_map(m, l1, l2, &xi).is_none()
                {
                    continue 'outer;
                }
            }
        }
        return xi;
    }
    panic!("no generic point found; wall set unexpectedly dense");
}

/// Both sides of the product identity
/// (cd)_M(0) = Σ_{Q ∈ F(M)} v′_Q(c) · (hull volume of d restricted to Q):
/// the left side evaluated on the sum set, the right side from truncation
/// kernel integrals.
pub fn product_identity_sides(c: &OrthogonalSet, d: &OrthogonalSet) -> (Q, Q) {
    assert_eq!(c.levi(), d.levi());
    let lhs = c.sum(d).hull_volume();
    let mut rhs = Q::zero();
    for qp in parabolics_containing(c.levi()) {
        rhs += c.v_prime(&qp) * d.restricted_hull_volume(&qp);
    }
    (lhs, rhs)
}

/// Both sides of the descent identity for the weight factor of a larger
/// Levi L: the restricted hull volume on L against the sum over
/// complementary Levis L′ of d(L, L′) times the hull volume of the
/// restriction to the section chamber Q′ ∈ P(L′).
pub fn descent_identity_sides(y: &OrthogonalSet, l: &Levi, xi: &[Q]) -> (Q, Q) {
    let m = y.levi();
    assert!(l.contains(m));
    let lhs = y.restricted_to_levi(l).hull_volume();
    let mut rhs = Q::zero();
    for l2 in m.containing_levis() {
        let dc = descent_constant(m, l, &l2);
        if dc.is_zero() {
            continue;
        }
        let (_, q2) = s_map(m, l, &l2, xi).expect("xi not generic for this pair");
        rhs += dc * y.restricted_hull_volume(&q2);
    }
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::qi;

    fn gl2_set(t: i64) -> OrthogonalSet {
        // Y_B = t·α∨, Y_{B̄} = -t·α∨
        OrthogonalSet::new(Levi::diagonal(2), |p| {
            let sign = if p.blocks()[0] == vec![0] { 1 } else { -1 };
            vec![qi(sign * t), qi(-sign * t)]
        })
    }

    #[test]
    fn gl2_both_routes_agree() {
        for t in [0, 1, 3, 7] {
            let y = gl2_set(t);
            // chart length from -2t to 2t
            assert_eq!(y.hull_volume(), qi(4 * t));
            assert_eq!(y.c_limit(), qi(4 * t));
        }
    }

    #[test]
    fn positivity_validated() {
        let r = std::panic::catch_unwind(|| gl2_set(-1));
        assert!(r.is_err(), "negative set must be rejected");
    }

    #[test]
    fn induced_sets_are_positive_and_agree() {
        for n in 2..=3usize {
            for levi in Levi::diagonal(n).containing_levis() {
                let t: Vec<Q> = (0..n).map(|i| qi(3 * (n as i64 - i as i64)) + q(1, 7)).collect();
                let y = OrthogonalSet::induced_from_dominant(&levi, &t);
                assert_eq!(y.c_limit(), y.hull_volume(), "levi {levi:?}");
            }
        }
    }

    #[test]
    fn seeded_sets_agree_on_gl3() {
        let m = Levi::diagonal(3);
        for seed in 0..12 {
            let y = OrthogonalSet::seeded(&m, seed, 2);
            assert_eq!(y.c_limit(), y.hull_volume(), "seed {seed}");
        }
    }

    #[test]
    fn f_of_diagonal_gl3_has_13_elements() {
        assert_eq!(parabolics_containing(&Levi::diagonal(3)).len(), 13);
        assert_eq!(parabolics_containing(&Levi::diagonal(2)).len(), 3);
    }

    #[test]
    fn gl2_product_identity_by_hand() {
        // c = d = the t-set: v′_B = v′_{B̄} = 2t with unit restricted
        // hulls, plus v′_G = 1 against the full hull 4t: total 8t = hull
        // of the doubled set.
        let y = gl2_set(3);
        let (lhs, rhs) = product_identity_sides(&y, &y);
        assert_eq!(lhs, qi(24));
        assert_eq!(rhs, qi(24));
        let b = Parabolic::borel(2);
        assert_eq!(y.v_prime(&b), qi(6));
        assert_eq!(y.restricted_hull_volume(&b), qi(1) * Q::one());
    }

    #[test]
    fn product_identity_seeded() {
        for n in 2..=3usize {
            let m = Levi::diagonal(n);
            for seed in 0..6 {
                let c = OrthogonalSet::seeded(&m, seed, 1);
                let d = OrthogonalSet::seeded(&m, seed + 100, 2);
                let (lhs, rhs) = product_identity_sides(&c, &d);
                assert_eq!(lhs, rhs, "n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn descent_constants_normalized() {
        let m = Levi::diagonal(3);
        let g = Levi::full(3);
        assert_eq!(descent_constant(&m, &m, &g), Q::one());
        assert_eq!(descent_constant(&m, &g, &m), Q::one());
        // two distinct intermediate Levis span; equal ones never do
        let la = Levi::new(3, vec![vec![0, 1], vec![2]]);
        let lb = Levi::new(3, vec![vec![0, 2], vec![1]]);
        assert!(descent_constant(&m, &la, &la).is_zero());
        let d = descent_constant(&m, &la, &lb);
        assert!(!d.is_zero());
        assert_eq!(d, descent_constant(&m, &lb, &la));
    }

    #[test]
    fn s_map_yields_complementary_chambers() {
        let m = Levi::diagonal(3);
        let xi = generic_xi(&m, 17);
        let la = Levi::new(3, vec![vec![0, 1], vec![2]]);
        let lb = Levi::new(3, vec![vec![1, 2], vec![0]]);
        let (q1, q2) = s_map(&m, &la, &lb, &xi).unwrap();
        assert_eq!(q1.levi(), la);
        assert_eq!(q2.levi(), lb);
        // the witness solves 2ξ = ξ1 − ξ2 with ξ_i strictly inside Q_i
        let (w1, xi1, w2, xi2) = s_map_witness(&m, &la, &lb, &xi).unwrap();
        assert_eq!((&w1, &w2), (&q1, &q2));
        let g = Parabolic::full(3);
        for i in 0..3 {
            assert_eq!(&xi1[i] - &xi2[i], &xi[i] * qi(2));
        }
        use crate::roots::simple_root_values;
        assert!(simple_root_values(&w1, &g, &xi1).iter().all(|r| r > &Q::zero()));
        assert!(simple_root_values(&w2, &g, &xi2).iter().all(|r| r > &Q::zero()));
    }

    #[test]
    fn descent_identity_gl3() {
        let m = Levi::diagonal(3);
        let xi = generic_xi(&m, 23);
        for seed in 0..4 {
            let y = OrthogonalSet::seeded(&m, seed, 2);
            for l in m.containing_levis() {
                let (lhs, rhs) = descent_identity_sides(&y, &l, &xi);
                assert_eq!(lhs, rhs, "levi {l:?} seed {seed}");
            }
        }
    }

    #[test]
    fn descent_identity_gl2() {
        let m = Levi::diagonal(2);
        let xi = generic_xi(&m, 3);
        let y = gl2_set(5);
        for l in m.containing_levis() {
            let (lhs, rhs) = descent_identity_sides(&y, &l, &xi);
            assert_eq!(lhs, rhs, "levi {l:?}");
        }
    }

    #[test]
    fn hull_geometry() {
        let pts = vec![
            vec![qi(0), qi(0)],
            vec![qi(2), qi(0)],
            vec![qi(2), qi(2)],
            vec![qi(0), qi(2)],
            vec![qi(1), qi(1)], // interior
        ];
        assert_eq!(hull_volume_in_chart(2, &pts), qi(4));
        let collinear = vec![vec![qi(0), qi(0)], vec![qi(1), qi(1)], vec![qi(2), qi(2)]];
        assert_eq!(hull_volume_in_chart(2, &collinear), qi(0));
    }
}
