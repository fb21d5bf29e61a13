//! The truncation kernels Γ′ and their exact integrals.
//!
//! For a chamber Q with Levi L, Γ′_Q(H, T) is the alternating sum over
//! parabolics R ⊇ Q of (-1)^{dim a_R^G} τ_Q^R(H) τ̂_R(H - T). It is a
//! compactly supported integer-valued step function of H ∈ a_L^G, and its
//! total integral — in the measure normalized by the coweight lattice —
//! is a homogeneous polynomial of degree dim a_L^G in T.
//!
//! The integral is computed exactly from the hyperplane arrangement of
//! every functional that appears in any term: in rank one by summing
//! interval lengths, in rank two by a slab sweep between consecutive
//! vertex abscissas (trapezoid areas are exact for affine boundaries).
//! Compact support is asserted, not assumed: the sweep checks that every
//! unbounded cell carries the value zero.

use super::{hat_tau, simple_root_values, tau, weight_values, IndicatorSum, Parabolic};
use crate::linalg;
use crate::q::{q, Q, Z};
use crate::roots::poly::PolyQ;
use num::traits::{One, Signed, Zero};

/// Γ′_Q(H, T) for H, T given as points of a_0.
pub fn gamma_prime(qp: &Parabolic, h: &[Q], t: &[Q]) -> IndicatorSum {
    let g = Parabolic::full(qp.n());
    let h_minus_t: Vec<Q> = h.iter().zip(t).map(|(a, b)| a - b).collect();
    let mut total = 0i64;
    for r in qp.coarsenings() {
        let sign = if r.dim_rel_full() % 2 == 0 { 1 } else { -1 };
        let a = tau(qp, &r, h);
        let b = hat_tau(&r, &g, &h_minus_t);
        match (a.as_int(), b.as_int()) {
            (Some(x), Some(y)) => total += sign * x * y,
            _ => return IndicatorSum::Boundary,
        }
    }
    IndicatorSum::Value(total)
}

/// Both sides of the decomposition
/// τ̂_{P1}(H - T) = Σ_{P2 ⊇ P1} (-1)^{dim a_{P2}^G} τ̂_{P1}^{P2}(H) Γ′_{P2}(H, T);
/// None when H or H - T sits on a wall of any term.
pub fn hat_tau_decomposition_sides(
    p1: &Parabolic,
    h: &[Q],
    t: &[Q],
) -> Option<(i64, i64)> {
    let g = Parabolic::full(p1.n());
    let h_minus_t: Vec<Q> = h.iter().zip(t).map(|(a, b)| a - b).collect();
    let lhs = hat_tau(p1, &g, &h_minus_t).as_int()?;
    let mut rhs = 0i64;
    for p2 in p1.coarsenings() {
        let sign = if p2.dim_rel_full() % 2 == 0 { 1 } else { -1 };
        let a = hat_tau(p1, &p2, h).as_int()?;
        let b = gamma_prime(&p2, h, t).value()?;
        rhs += sign * a * b;
    }
    Some((lhs, rhs))
}

/// Coordinates on a_{L_P}^{L_Q} for nested parabolics P ⊆ Q: the k-th
/// coordinate of H is the value of the k-th simple root of (P, Q), so the
/// coweight lattice becomes exactly Z^d and Lebesgue measure in these
/// coordinates is the normalized measure. The chart basis vectors
/// embed(e_k) are the coweights dual to those simple roots.
pub struct PairChart {
    p: Parabolic,
    q: Parabolic,
    dim: usize,
}

impl PairChart {
    pub fn new(p: &Parabolic, q: &Parabolic) -> PairChart {
        assert!(p.is_contained_in(q), "need P ⊆ Q");
        PairChart {
            dim: p.num_blocks() - q.num_blocks(),
            p: p.clone(),
            q: q.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The point of a_{L_P}^{L_Q} with the given root coordinates, as an
    /// a_0 vector: constant on P-blocks, size-weighted mean zero on every
    /// Q-block.
    pub fn embed(&self, u: &[Q]) -> Vec<Q> {
        assert_eq!(u.len(), self.dim);
        let mut out = vec![Q::zero(); self.p.n()];
        let mut pi = 0;
        let mut ui = 0;
        for big in self.q.blocks() {
            let start = pi;
            let mut count = 0;
            while count < big.len() {
                count += self.p.blocks()[pi].len();
                pi += 1;
            }
            // sub-block values within this Q-block from consecutive
            // differences, then center to weighted mean zero
            let s = pi - start;
            let mut vals = vec![Q::zero(); s];
            for j in 0..s - 1 {
                vals[j + 1] = &vals[j] - &u[ui];
                ui += 1;
            }
            let total = Q::from_integer(Z::from(big.len() as u64));
            let mean: Q = (0..s)
                .map(|j| {
                    &vals[j]
                        * Q::from_integer(Z::from(self.p.blocks()[start + j].len() as u64))
                })
                .sum::<Q>()
                / total;
            for j in 0..s {
                for &i in &self.p.blocks()[start + j] {
                    out[i] = &vals[j] - &mean;
                }
            }
        }
        out
    }

    /// The root coordinates of (the a_{L_P}^{L_Q}-projection of) a point.
    pub fn coords(&self, h: &[Q]) -> Vec<Q> {
        simple_root_values(&self.p, &self.q, h)
    }
}

/// The chart of a_{L_Q}^G adapted to a chamber Q.
pub struct ChamberChart {
    inner: PairChart,
}

impl ChamberChart {
    pub fn new(q: &Parabolic) -> ChamberChart {
        ChamberChart {
            inner: PairChart::new(q, &Parabolic::full(q.n())),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.dim()
    }

    pub fn embed(&self, u: &[Q]) -> Vec<Q> {
        self.inner.embed(u)
    }

    pub fn coords(&self, h: &[Q]) -> Vec<Q> {
        self.inner.coords(h)
    }
}

/// An affine functional a·u + b on chart coordinates.
#[derive(Clone, Debug)]
struct Affine {
    a: Vec<Q>,
    b: Q,
}

impl Affine {
    fn is_constant(&self) -> bool {
        self.a.iter().all(|c| c.is_zero())
    }

    fn normalized(&self) -> Affine {
        let lead = self.a.iter().chain([&self.b]).find(|c| !c.is_zero());
        match lead {
            None => self.clone(),
            Some(c) => {
                let scale = Q::one() / c;
                Affine {
                    a: self.a.iter().map(|x| x * &scale).collect(),
                    b: &self.b * &scale,
                }
            }
        }
    }
}

/// Every functional whose sign any term of Γ′_Q(·, T) consults, as affine
/// functions of the chart coordinates, deduplicated up to scaling.
fn wall_functionals(chart: &ChamberChart, t: &[Q]) -> Vec<Affine> {
    let qp = &chart.inner.p;
    let g = Parabolic::full(qp.n());
    let d = chart.dim();
    let zero_h = chart.embed(&vec![Q::zero(); d]);
    let basis: Vec<Vec<Q>> = (0..d)
        .map(|k| {
            let mut u = vec![Q::zero(); d];
            u[k] = Q::one();
            chart.embed(&u)
        })
        .collect();

    let mut out: Vec<Affine> = Vec::new();
    let mut push_family = |at_zero: Vec<Q>, at_basis: Vec<Vec<Q>>| {
        for j in 0..at_zero.len() {
            let a: Vec<Q> = at_basis.iter().map(|vals| &vals[j] - &at_zero[j]).collect();
            out.push(Affine {
                a,
                b: at_zero[j].clone(),
            });
        }
    };

    for r in qp.coarsenings() {
        // roots of (Q, R) at H(u): linear, zero offset
        let root_zero = simple_root_values(qp, &r, &zero_h);
        let root_basis: Vec<Vec<Q>> = basis
            .iter()
            .map(|h| simple_root_values(qp, &r, h))
            .collect();
        push_family(root_zero, root_basis);
        // weights of (R, G) at H(u) - T: affine with offset -ϖ(T)
        let minus_t: Vec<Q> = t.iter().map(|x| -x).collect();
        let w_zero: Vec<Q> = weight_values(&r, &g, &zero_h)
            .iter()
            .zip(weight_values(&r, &g, &minus_t))
            .map(|(z, off)| z + off)
            .collect();
        let w_basis: Vec<Vec<Q>> = basis
            .iter()
            .map(|h| {
                weight_values(&r, &g, h)
                    .iter()
                    .zip(weight_values(&r, &g, &minus_t))
                    .map(|(z, off)| z + off)
                    .collect()
            })
            .collect();
        push_family(w_zero, w_basis);
    }

    // constants never cut walls; a vanishing constant would make every
    // evaluation a boundary case, which the evaluator will report anyway
    let mut walls: Vec<Affine> = out
        .into_iter()
        .filter(|f| !f.is_constant())
        .map(|f| f.normalized())
        .collect();
    walls.sort_by(|x, y| x.a.cmp(&y.a).then(x.b.cmp(&y.b)));
    walls.dedup_by(|x, y| x.a == y.a && x.b == y.b);
    walls
}

fn gamma_prime_at(chart: &ChamberChart, u: &[Q], t: &[Q]) -> IndicatorSum {
    gamma_prime(&chart.inner.p, &chart.embed(u), t)
}

fn expect_value(chart: &ChamberChart, u: &[Q], t: &[Q]) -> i64 {
    gamma_prime_at(chart, u, t)
        .value()
        .expect("sample point unexpectedly on a wall")
}

/// ∫ Γ′_Q(H, T) dH over a_L^G in the coweight-normalized measure, exact.
/// Supported for dim a_L^G ≤ 2, which covers every Levi of GL(2) and
/// GL(3). Panics if the compact-support assertion fails (that would be an
/// implementation bug, not bad input).
pub fn gamma_prime_integral(qp: &Parabolic, t: &[Q]) -> Q {
    let chart = ChamberChart::new(qp);
    match chart.dim() {
        0 => Q::one(), // a_G^G is a point carrying counting measure
        1 => integral_rank_one(&chart, t),
        2 => integral_rank_two(&chart, t),
        d => panic!("exact truncation integral not implemented for rank {d}"),
    }
}

fn integral_rank_one(chart: &ChamberChart, t: &[Q]) -> Q {
    let walls = wall_functionals(chart, t);
    let mut cuts: Vec<Q> = walls
        .iter()
        .filter(|f| !f.a[0].is_zero())
        .map(|f| -&f.b / &f.a[0])
        .collect();
    cuts.sort();
    cuts.dedup();
    if cuts.is_empty() {
        assert_eq!(expect_value(chart, &[Q::zero()], t), 0, "unbounded support");
        return Q::zero();
    }
    let one = Q::one();
    let below = &cuts[0] - &one;
    let above = cuts.last().unwrap() + &one;
    assert_eq!(expect_value(chart, &[below], t), 0, "unbounded support");
    assert_eq!(expect_value(chart, &[above], t), 0, "unbounded support");
    let mut total = Q::zero();
    for w in cuts.windows(2) {
        let mid = (&w[0] + &w[1]) / Q::from_integer(2.into());
        let v = expect_value(chart, &[mid], t);
        if v != 0 {
            total += Q::from_integer(v.into()) * (&w[1] - &w[0]);
        }
    }
    total
}

/// A line y = m x + c in sheared chart coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Line {
    m: Q,
    c: Q,
}

fn integral_rank_two(chart: &ChamberChart, t: &[Q]) -> Q {
    let walls = wall_functionals(chart, t);
    // shear u = (x + s*y, y): every wall must get a nonzero y-coefficient
    let shear = pick_shear(&walls);
    let to_u = |x: &Q, y: &Q| vec![x + &shear * y, y.clone()];
    let mut lines: Vec<Line> = Vec::new();
    for f in &walls {
        let ycoef = &f.a[0] * &shear + &f.a[1];
        if f.a[0].is_zero() && ycoef.is_zero() {
            continue;
        }
        assert!(!ycoef.is_zero(), "shear failed to clear vertical walls");
        // a0*(x + s y) + a1*y + b = 0  =>  y = -(a0 x + b)/ycoef
        lines.push(Line {
            m: -&f.a[0] / &ycoef,
            c: -&f.b / &ycoef,
        });
    }
    lines.sort_by(|p, r| p.m.cmp(&r.m).then(p.c.cmp(&r.c)));
    lines.dedup();

    // vertex abscissas
    let mut xs: Vec<Q> = Vec::new();
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            if lines[i].m != lines[j].m {
                xs.push((&lines[j].c - &lines[i].c) / (&lines[i].m - &lines[j].m));
            }
        }
    }
    xs.sort();
    xs.dedup();

    let two = Q::from_integer(2.into());
    let one = Q::one();

    // evaluate the full column of cells over a fixed x; integrate bounded
    // trapezoids, assert zero on the unbounded top and bottom
    let column = |x: &Q, width: Option<&Q>, total: &mut Q| {
        let mut heights: Vec<Q> = lines.iter().map(|l| &l.m * x + &l.c).collect();
        heights.sort();
        heights.dedup();
        if heights.is_empty() {
            let v = expect_value(chart, &to_u(x, &Q::zero()), t);
            assert_eq!(v, 0, "unbounded support (no walls in column)");
            return;
        }
        let below = &heights[0] - &one;
        let above = heights.last().unwrap() + &one;
        assert_eq!(
            expect_value(chart, &to_u(x, &below), t),
            0,
            "unbounded support below"
        );
        assert_eq!(
            expect_value(chart, &to_u(x, &above), t),
            0,
            "unbounded support above"
        );
        if let Some(w) = width {
            for pair in heights.windows(2) {
                let mid = (&pair[0] + &pair[1]) / &two;
                let v = expect_value(chart, &to_u(x, &mid), t);
                if v != 0 {
                    *total += Q::from_integer(v.into()) * (&pair[1] - &pair[0]) * w;
                }
            }
        } else {
            for pair in heights.windows(2) {
                let mid = (&pair[0] + &pair[1]) / &two;
                let v = expect_value(chart, &to_u(x, &mid), t);
                assert_eq!(v, 0, "unbounded support sideways");
            }
        }
    };

    let mut total = Q::zero();
    if xs.is_empty() {
        column(&Q::zero(), None, &mut total);
        return Q::zero();
    }
    column(&(&xs[0] - &one), None, &mut total);
    column(&(xs.last().unwrap() + &one), None, &mut total);
    for w in xs.windows(2) {
        // heights are affine in x, so the trapezoid area over the slab is
        // width times the gap measured at the midpoint, exactly
        let mid = (&w[0] + &w[1]) / &two;
        let width = &w[1] - &w[0];
        column(&mid, Some(&width), &mut total);
    }
    total
}

fn pick_shear(walls: &[Affine]) -> Q {
    let candidates = [
        q(0, 1),
        q(1, 1),
        q(-1, 1),
        q(1, 2),
        q(-1, 2),
        q(1, 3),
        q(2, 1),
        q(-2, 1),
        q(1, 5),
        q(3, 1),
    ];
    for s in candidates {
        let ok = walls.iter().all(|f| {
            let ycoef = &f.a[0] * &s + &f.a[1];
            !ycoef.is_zero() || f.a[0].is_zero()
        });
        if ok {
            return s;
        }
    }
    panic!("no shear candidate separated the wall directions");
}

/// The integral of Γ′_Q(·, T) as a polynomial in the root coordinates of
/// T, fitted on positive-chamber sample points and verified on extra
/// ones. Homogeneous of degree dim a_L^G by scaling invariance.
pub fn gamma_prime_integral_polynomial(qp: &Parabolic) -> PolyQ {
    let chart = ChamberChart::new(qp);
    let d = chart.dim();
    if d == 0 {
        return PolyQ::one(0);
    }
    // monomials of total degree d in d variables
    let monomials = degree_exponents(d, d as u32);
    let samples = fit_points(d, monomials.len() + 3);
    let rows: Vec<Vec<Q>> = samples
        .iter()
        .map(|pt| {
            monomials
                .iter()
                .map(|e| {
                    let mut v = Q::one();
                    for (i, &k) in e.iter().enumerate() {
                        for _ in 0..k {
                            v *= &pt[i];
                        }
                    }
                    v
                })
                .collect()
        })
        .collect();
    let values: Vec<Q> = samples
        .iter()
        .map(|pt| gamma_prime_integral(qp, &chart.embed(pt)))
        .collect();
    let k = monomials.len();
    let coeffs = linalg::solve(
        &rows[..k].to_vec(),
        &values[..k],
    )
    .expect("interpolation matrix unexpectedly singular");
    let mut poly = PolyQ::zero(d);
    for (e, c) in monomials.iter().zip(&coeffs) {
        poly = poly.add(&PolyQ::zero(d).add(&monomial(d, e, c)));
    }
    // the fit must reproduce the held-out evaluations exactly
    for (pt, v) in samples.iter().zip(&values).skip(k) {
        assert_eq!(&poly.eval(pt), v, "truncation integral is not the fitted polynomial");
    }
    poly
}

fn monomial(vars: usize, exp: &[u32], c: &Q) -> PolyQ {
    let mut p = PolyQ::constant(vars, c.clone());
    for (i, &k) in exp.iter().enumerate() {
        for _ in 0..k {
            p = p.mul(&PolyQ::var(vars, i));
        }
    }
    p
}

fn degree_exponents(vars: usize, deg: u32) -> Vec<Vec<u32>> {
    if vars == 1 {
        return vec![vec![deg]];
    }
    let mut out = Vec::new();
    for first in 0..=deg {
        for mut rest in degree_exponents(vars - 1, deg - first) {
            let mut e = vec![first];
            e.append(&mut rest);
            out.push(e);
        }
    }
    out
}

fn fit_points(d: usize, count: usize) -> Vec<Vec<Q>> {
    // distinct positive-chamber points with incommensurate coordinates
    let mut out = Vec::with_capacity(count);
    let mut k: i64 = 1;
    while out.len() < count {
        let pt: Vec<Q> = (0..d)
            .map(|i| q(k + (i as i64) * (k % 3 + 1), 1 + (i as i64 + k as i64) % 2))
            .collect();
        if pt.iter().all(|x| x.is_positive()) && !out.contains(&pt) {
            out.push(pt);
        }
        k += 1;
    }
    out
}

/// Monte-Carlo estimate of the same integral: stratified rational samples
/// in a bounding box read off the wall arrangement. The box is cut into a
/// g^d jittered grid with g = ⌊samples^(1/d)⌋ and one uniform draw taken
/// per cell, which tightens the error of plain uniform sampling from
/// N^(-1/2) to roughly N^(-1/2-1/(2d)) for indicator integrands.
/// Deterministic in the seed; wall hits are re-jittered within their cell.
/// Used as an independent cross-check.
pub fn gamma_prime_integral_monte_carlo(qp: &Parabolic, t: &[Q], seed: u64, samples: u32) -> Q {
    let chart = ChamberChart::new(qp);
    let d = chart.dim();
    if d == 0 {
        return Q::one();
    }
    let walls = wall_functionals(&chart, t);
    // conservative box: max breakpoint magnitude along each axis, padded
    let mut bound = Q::from_integer(1.into());
    for f in &walls {
        for i in 0..d {
            if !f.a[i].is_zero() {
                let reach = (&f.b / &f.a[i]).abs();
                if reach > bound {
                    bound = reach;
                }
            }
        }
    }
    bound += Q::one();
    let side = &bound * Q::from_integer(2.into());
    let mut volume = Q::one();
    for _ in 0..d {
        volume *= &side;
    }

    let mut state = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };

    let g = {
        let mut g = 1u64;
        while (g + 1).pow(d as u32) <= samples as u64 {
            g += 1;
        }
        g
    };
    let total = g.pow(d as u32);
    // denominator of one jittered coordinate: cell index plus a 20-bit
    // fraction of the cell, over g * 2^20
    let grid = Z::from(g) * Z::from(1u64 << 20);
    let mut hits: i64 = 0;
    let mut cell = vec![0u64; d];
    for _ in 0..total {
        loop {
            let u: Vec<Q> = cell
                .iter()
                .map(|&c| {
                    let k = next() & ((1u64 << 20) - 1);
                    let frac = Q::new(Z::from((c << 20) | k), grid.clone());
                    (frac * &side) - &bound
                })
                .collect();
            match gamma_prime_at(&chart, &u, t) {
                IndicatorSum::Value(v) => {
                    hits += v;
                    break;
                }
                IndicatorSum::Boundary => continue,
            }
        }
        for c in cell.iter_mut() {
            *c += 1;
            if *c < g {
                break;
            }
            *c = 0;
        }
    }
    Q::from_integer(hits.into()) / Q::from_integer(Z::from(total)) * volume
}

/// Permute the coordinates of an a_0 point: (σ·h)_{σ(i)} = h_i.
pub fn permute_point(perm: &[usize], h: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); h.len()];
    for (i, &pi) in perm.iter().enumerate() {
        out[pi] = h[i].clone();
    }
    out
}

/// Permute a parabolic: blocks mapped through σ, order kept.
pub fn permute_parabolic(perm: &[usize], p: &Parabolic) -> Parabolic {
    Parabolic::new(
        p.n(),
        p.blocks()
            .iter()
            .map(|b| b.iter().map(|&i| perm[i]).collect())
            .collect(),
    )
}

/// Seeded rational test points of a_0 that avoid walls with high
/// probability; used by the identity sweeps. Deterministic in the seed.
pub fn seeded_points(n: usize, seed: u64, count: usize) -> Vec<Vec<Q>> {
    let mut state = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    (0..count)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let num = (next() % 4001) as i64 - 2000;
                    q(num, 97)
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::qi;
    use crate::roots::chamber_test_points;
    use crate::roots::Levi;

    fn t2(a: i64) -> Vec<Q> {
        vec![qi(a), qi(-a)]
    }

    #[test]
    fn rank_one_kernel_is_half_open_interval() {
        let b = Parabolic::borel(2);
        let t = t2(3); // root coordinate 6
        // Γ′_B(H, T) = [0 < α(H) ≤ α(T)] off walls
        for (u, expect) in [(1, 1), (5, 1), (7, 0), (-1, 0)] {
            let chart = ChamberChart::new(&b);
            let h = chart.embed(&[qi(u)]);
            assert_eq!(gamma_prime(&b, &h, &t), IndicatorSum::Value(expect), "u={u}");
        }
        assert_eq!(gamma_prime_integral(&b, &t), qi(6));
        // for T in the negative chamber the kernel is -[α(T) < α(H) ≤ 0]:
        // signed, and the integral is still the polynomial α(T)
        assert_eq!(gamma_prime_integral(&b, &t2(-2)), qi(-4));
        let chart = ChamberChart::new(&b);
        assert_eq!(
            gamma_prime(&b, &chart.embed(&[qi(-1)]), &t2(-2)),
            IndicatorSum::Value(-1)
        );
    }

    #[test]
    fn rank_one_polynomial() {
        let b = Parabolic::borel(2);
        let poly = gamma_prime_integral_polynomial(&b);
        // integral = root coordinate of T
        assert_eq!(poly, PolyQ::var(1, 0));
    }

    #[test]
    fn boundary_reported() {
        let b = Parabolic::borel(2);
        let h = vec![qi(1), qi(1)];
        assert_eq!(gamma_prime(&b, &h, &t2(1)), IndicatorSum::Boundary);
    }

    #[test]
    fn gl3_integral_cross_checked() {
        let b = Parabolic::borel(3);
        let t = vec![qi(1), qi(0), qi(-1)]; // root coords (1, 1)
        let exact = gamma_prime_integral(&b, &t);
        assert!(exact > Q::zero());
        // homogeneity of degree 2
        let t2: Vec<Q> = t.iter().map(|x| x * Q::from_integer(3.into())).collect();
        assert_eq!(
            gamma_prime_integral(&b, &t2),
            &exact * Q::from_integer(9.into())
        );
        // Monte-Carlo agreement within 10% at modest sample count
        let mc = gamma_prime_integral_monte_carlo(&b, &t, 7, 4000);
        let diff = (&mc - &exact).abs();
        assert!(
            diff < exact.abs() * q(1, 10),
            "mc={mc} exact={exact}"
        );
        // polynomial fit reproduces the pointwise integral
        let poly = gamma_prime_integral_polynomial(&b);
        let chart = ChamberChart::new(&b);
        assert_eq!(poly.eval(&chart.coords(&t)), exact);
    }

    #[test]
    fn gl3_nonstandard_levi_rank_one() {
        // Levi {0,2}{1} inside GL(3): a_L^G has rank one
        let l = Levi::new(3, vec![vec![0, 2], vec![1]]);
        let qp = l.canonical_chamber();
        let t = qp.project_rel_full(&[qi(2), qi(-1), qi(2)]);
        let v = gamma_prime_integral(&qp, &t);
        assert!(v > Q::zero());
        let poly = gamma_prime_integral_polynomial(&qp);
        let chart = ChamberChart::new(&qp);
        assert_eq!(poly.eval(&chart.coords(&t)), v);
    }

    #[test]
    fn decomposition_identity_on_chamber_points() {
        for n in 2..=3usize {
            let b = Parabolic::borel(n);
            let t: Vec<Q> = (0..n).map(|i| qi(2 * (n as i64 - i as i64))).collect();
            for h in chamber_test_points(n) {
                // scale h away from coincidences with t walls
                let h: Vec<Q> = h.iter().map(|x| x * q(13, 7)).collect();
                if let Some((lhs, rhs)) = hat_tau_decomposition_sides(&b, &h, &t) {
                    assert_eq!(lhs, rhs, "n={n} h={h:?}");
                }
            }
        }
    }

    #[test]
    fn decomposition_identity_seeded() {
        let b = Parabolic::borel(3);
        let t = vec![qi(3), qi(1), qi(-4)];
        let mut checked = 0;
        for h in seeded_points(3, 42, 200) {
            if let Some((lhs, rhs)) = hat_tau_decomposition_sides(&b, &h, &t) {
                assert_eq!(lhs, rhs, "h={h:?}");
                checked += 1;
            }
        }
        assert!(checked > 150, "too many wall hits: {checked}");
    }

    #[test]
    fn weyl_equivariance() {
        // Γ′_{σQ}(σH, σT) = Γ′_Q(H, T)
        let b = Parabolic::borel(3);
        let perm = vec![1usize, 2, 0];
        let sq = permute_parabolic(&perm, &b);
        let t = vec![qi(4), qi(1), qi(-5)];
        for h in seeded_points(3, 5, 50) {
            let lhs = gamma_prime(&sq, &permute_point(&perm, &h), &permute_point(&perm, &t));
            let rhs = gamma_prime(&b, &h, &t);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn chart_round_trip() {
        let b = Parabolic::borel(3);
        let chart = ChamberChart::new(&b);
        let u = vec![qi(2), qi(-3)];
        assert_eq!(chart.coords(&chart.embed(&u)), u);
        // embedded points have weighted sum zero
        let h = chart.embed(&u);
        let sum: Q = h.iter().sum();
        assert!(sum.is_zero());
    }
}
