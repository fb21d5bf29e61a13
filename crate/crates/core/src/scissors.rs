//! Translation scissors invariants on the root chart spaces a_M^G.
//!
//! A strict flag on an ambient Levi M is a nested chain of Levi subgroups
//! G = L^0 ⊃ L^1 ⊃ … ⊃ L^l containing M, each step splitting exactly one
//! block in two; it cuts out the subspace chain a_M^G ⊃ a_M^{L^1} ⊃ … .
//! A rigging refines the chain by a nested choice of chambers
//! Q^0 ⊃ Q^1 ⊃ … with Q^i ∈ P(L^i), which orders each split and so picks
//! one linear functional r_i per step.  The signed sum over riggings of
//! the measures of iterated minimizing faces
//!
//!   H_Φ(P) = Σ_r sign(r) · vol(∂_{Φ,r} P)
//!
//! is translation invariant and additive across dissections, and the flag
//! vector (H_Φ(P))_Φ decides translation scissors congruence within the
//! family.  The same signed sums applied to chamber-indexed tables of
//! weighted orbital data produce flag vectors satisfying the identical
//! linear consistency conditions, with a graded product over pairs of
//! complementary Levi subgroups that splits integrals over two places.
//!
//! All face measures are taken in the coweight-normalized volume of the
//! subspace they span, with a zero-dimensional face counting 1.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num::traits::{One, Signed, Zero};

use crate::families::{convex_hull_2d, coweight_basis_rel, descent_constant, hull_volume_in_chart, OrthogonalSet};
use crate::linalg;
use crate::q::{q, qi, Q};
use crate::roots::gamma::ChamberChart;
use crate::roots::{Levi, Parabolic};

/// A strict flag: a nested Levi chain starting at the full group, every
/// member containing the ambient Levi, each step splitting one block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Flag {
    m: Levi,
    chain: Vec<Levi>,
}

impl Flag {
    pub fn new(m: &Levi, chain: Vec<Levi>) -> Flag {
        assert!(!chain.is_empty(), "a flag starts at the full group");
        assert_eq!(chain[0], Levi::full(m.n()), "a flag starts at the full group");
        for (i, l) in chain.iter().enumerate() {
            assert_eq!(l.num_blocks(), i + 1, "each step must split exactly one block");
            assert!(l.contains(m), "every chain member must contain the ambient Levi");
            if i > 0 {
                assert!(chain[i - 1].contains(l), "the chain must be nested");
            }
        }
        Flag { m: m.clone(), chain }
    }

    /// The length-zero flag on an ambient Levi.
    pub fn trivial(m: &Levi) -> Flag {
        Flag::new(m, vec![Levi::full(m.n())])
    }

    pub fn ambient(&self) -> &Levi {
        &self.m
    }

    pub fn chain(&self) -> &[Levi] {
        &self.chain
    }

    /// Number of proper steps (one less than the chain length).
    pub fn length(&self) -> usize {
        self.chain.len() - 1
    }

    /// The smallest Levi of the chain; its relative chart space carries
    /// the face measure for this flag.
    pub fn last(&self) -> &Levi {
        self.chain.last().unwrap()
    }
}

/// All strict flags on the ambient Levi, of every length, in a fixed
/// deterministic order.
pub fn flag_family(m: &Levi) -> Vec<Flag> {
    let levis = m.containing_levis();
    let mut out = vec![Flag::trivial(m)];
    let mut frontier: Vec<Vec<Levi>> = vec![vec![Levi::full(m.n())]];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for chain in &frontier {
            let last = chain.last().unwrap();
            for l in &levis {
                if l.num_blocks() == last.num_blocks() + 1 && last.contains(l) {
                    let mut c = chain.clone();
                    c.push(l.clone());
                    out.push(Flag::new(m, c.clone()));
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    out.sort();
    out
}

/// A flag together with a nested chain of chambers Q^i ∈ P(L^i).  The
/// chamber at each step orders the two halves of the split block and so
/// determines the step functional r_i(H) = mean over the first half minus
/// mean over the second half, positive on the chamber side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiggedFlag {
    flag: Flag,
    chambers: Vec<Parabolic>,
}

impl RiggedFlag {
    pub fn flag(&self) -> &Flag {
        &self.flag
    }

    pub fn chambers(&self) -> &[Parabolic] {
        &self.chambers
    }

    /// The ordered pair of block halves created at step i ≥ 1, read off
    /// from the chamber at that step.
    fn split_blocks(&self, i: usize) -> (Vec<usize>, Vec<usize>) {
        let prev = &self.flag.chain()[i - 1];
        let q = &self.chambers[i];
        for w in q.blocks().windows(2) {
            let mut union: Vec<usize> = w[0].iter().chain(w[1].iter()).copied().collect();
            union.sort_unstable();
            if prev.blocks().iter().any(|b| *b == union) {
                return (w[0].clone(), w[1].clone());
            }
        }
        unreachable!("consecutive chain steps differ by a single block split");
    }

    /// The orientation sign of the rigging: the sign of the determinant of
    /// the step vectors c_1, …, c_l followed by the coweight basis of the
    /// final subspace, all in the chart of the ambient canonical chamber.
    /// The step vector c_i is the mean-difference direction of step i, so
    /// it satisfies r_i(c_i) > 0 and lies in the previous subspace; the
    /// sign is independent of these choices because any two differ by
    /// later columns.
    pub fn sign(&self) -> i64 {
        let m = self.flag.ambient();
        let chart = ChamberChart::new(&m.canonical_chamber());
        let d = chart.dim();
        if d == 0 {
            return 1;
        }
        let mut cols: Vec<Vec<Q>> = Vec::with_capacity(d);
        for i in 1..=self.flag.length() {
            let (b1, b2) = self.split_blocks(i);
            cols.push(chart.coords(&step_vector(m.n(), &b1, &b2)));
        }
        for v in coweight_basis_rel(m, self.flag.last()) {
            cols.push(chart.coords(&v));
        }
        assert_eq!(cols.len(), d);
        let mat: Vec<Vec<Q>> = (0..d).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let det = linalg::det(&mat);
        assert!(!det.is_zero(), "rigging columns must be independent");
        if det.is_positive() {
            1
        } else {
            -1
        }
    }
}

/// All riggings of a flag: one nested chamber chain per choice, at each
/// step, of which half of the split block comes first.  There are 2^l.
pub fn riggings(flag: &Flag) -> Vec<RiggedFlag> {
    let n = flag.ambient().n();
    let mut partial: Vec<Vec<Parabolic>> = vec![vec![Parabolic::full(n)]];
    for levi in &flag.chain()[1..] {
        let mut next = Vec::new();
        for chain in &partial {
            let prev = chain.last().unwrap();
            for q in levi.chambers() {
                if q.is_contained_in(prev) {
                    let mut c = chain.clone();
                    c.push(q);
                    next.push(c);
                }
            }
        }
        partial = next;
    }
    assert_eq!(partial.len(), 1 << flag.length());
    partial
        .into_iter()
        .map(|chambers| RiggedFlag { flag: flag.clone(), chambers })
        .collect()
}

/// The mean-difference direction of an ordered block split: +1/|first| on
/// the first half, −1/|second| on the second.
fn step_vector(n: usize, first: &[usize], second: &[usize]) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    for &i in first {
        v[i] = q(1, first.len() as i64);
    }
    for &i in second {
        v[i] = q(-1, second.len() as i64);
    }
    v
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn unit_vec(d: usize, k: usize) -> Vec<Q> {
    let mut e = vec![Q::zero(); d];
    e[k] = Q::one();
    e
}

/// Express a vector in a given independent spanning set by exact
/// elimination; None when the vector lies outside the span.
fn coords_in_basis(basis: &[Vec<Q>], target: &[Q]) -> Option<Vec<Q>> {
    let d = target.len();
    let k = basis.len();
    let mut rows: Vec<Vec<Q>> = (0..d)
        .map(|r| {
            let mut row: Vec<Q> = basis.iter().map(|b| b[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_rows = Vec::with_capacity(k);
    let mut next = 0;
    for c in 0..k {
        let pivot = (next..d)
            .find(|&r| !rows[r][c].is_zero())
            .expect("basis vectors must be independent");
        rows.swap(next, pivot);
        let inv = rows[next][c].clone();
        for cc in c..=k {
            rows[next][cc] = &rows[next][cc] / &inv;
        }
        for r in 0..d {
            if r != next && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for cc in c..=k {
                    let s = &f * &rows[next][cc];
                    rows[r][cc] -= s;
                }
            }
        }
        pivot_rows.push(next);
        next += 1;
    }
    for r in next..d {
        if !rows[r][k].is_zero() {
            return None;
        }
    }
    Some((0..k).map(|c| rows[pivot_rows[c]][k].clone()).collect())
}

/// The affine dimension of a point set (rank of the differences).
fn affine_rank(verts: &[Vec<Q>]) -> usize {
    if verts.len() <= 1 {
        return 0;
    }
    let base = &verts[0];
    let mut rows: Vec<Vec<Q>> = verts[1..].iter().map(|v| sub(v, base)).collect();
    let cols = rows[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in rank + 1..rows.len() {
            if !rows[r][c].is_zero() {
                let f = &rows[r][c] / &rows[rank][c];
                for cc in c..cols {
                    let s = &f * &rows[rank][cc];
                    rows[r][cc] -= s;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// A convex polytope in a_M^G, stored as the extreme points in the chart
/// of the ambient canonical chamber.  Supported up to chart dimension 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexPolytope {
    m: Levi,
    vertices: Vec<Vec<Q>>,
}

impl ConvexPolytope {
    /// Build from points of a_0 lying in a_M^G (constant on the blocks of
    /// M with total sum zero; asserted).
    pub fn from_points(m: &Levi, pts: &[Vec<Q>]) -> ConvexPolytope {
        let chart = ChamberChart::new(&m.canonical_chamber());
        let coords: Vec<Vec<Q>> = pts
            .iter()
            .map(|p| {
                let u = chart.coords(p);
                assert_eq!(&chart.embed(&u), p, "points must lie in the relative chart space");
                u
            })
            .collect();
        ConvexPolytope::from_chart_points(m, &coords)
    }

    /// Build from chart coordinates of the ambient canonical chamber.
    pub fn from_chart_points(m: &Levi, pts: &[Vec<Q>]) -> ConvexPolytope {
        assert!(!pts.is_empty(), "a polytope needs at least one point");
        let d = ChamberChart::new(&m.canonical_chamber()).dim();
        for p in pts {
            assert_eq!(p.len(), d);
        }
        ConvexPolytope { m: m.clone(), vertices: hull_reduce(d, pts) }
    }

    pub fn ambient(&self) -> &Levi {
        &self.m
    }

    /// Extreme points in chart coordinates (canonical order).
    pub fn chart_vertices(&self) -> &[Vec<Q>] {
        &self.vertices
    }

    /// Extreme points as vectors of a_0.
    pub fn vertices(&self) -> Vec<Vec<Q>> {
        let chart = ChamberChart::new(&self.m.canonical_chamber());
        self.vertices.iter().map(|u| chart.embed(u)).collect()
    }

    pub fn affine_dim(&self) -> usize {
        affine_rank(&self.vertices)
    }

    /// Translate by a vector of a_M^G.
    pub fn translate(&self, v: &[Q]) -> ConvexPolytope {
        let chart = ChamberChart::new(&self.m.canonical_chamber());
        let shift = chart.coords(v);
        assert_eq!(chart.embed(&shift), v, "translation must lie in the relative chart space");
        let verts: Vec<Vec<Q>> = self
            .vertices
            .iter()
            .map(|u| u.iter().zip(&shift).map(|(a, b)| a + b).collect())
            .collect();
        ConvexPolytope { m: self.m.clone(), vertices: verts }
    }

    /// Volume in the coweight-normalized measure of a_M^G; zero for lower
    /// dimensional polytopes, 1 for a point when the chart is trivial.
    pub fn volume(&self) -> Q {
        let d = ChamberChart::new(&self.m.canonical_chamber()).dim();
        hull_volume_in_chart(d, &self.vertices)
    }

    /// Whether the other polytope is a translate of this one.
    pub fn is_translate_of(&self, other: &ConvexPolytope) -> bool {
        if self.m != other.m || self.vertices.len() != other.vertices.len() {
            return false;
        }
        let mut a = self.vertices.clone();
        let mut b = other.vertices.clone();
        a.sort();
        b.sort();
        let shift = sub(&a[0], &b[0]);
        a.iter().zip(&b).all(|(x, y)| sub(x, y) == shift)
    }
}

fn hull_reduce(d: usize, pts: &[Vec<Q>]) -> Vec<Vec<Q>> {
    assert!(!pts.is_empty());
    match d {
        0 => vec![vec![]],
        1 => {
            let lo = pts.iter().min().unwrap().clone();
            let hi = pts.iter().max().unwrap().clone();
            if lo == hi {
                vec![lo]
            } else {
                vec![lo, hi]
            }
        }
        2 => convex_hull_2d(pts),
        _ => panic!("convex polytopes are supported in chart dimension ≤ 2, got {d}"),
    }
}

/// Cut a polytope along a level set of the functional h ↦ Σ w_i h_i and
/// return the two closed pieces (values ≤ level, values ≥ level).  Both
/// pieces must be nonempty: the level has to meet the polytope.
pub fn split_by_level(p: &ConvexPolytope, w: &[Q], level: &Q) -> (ConvexPolytope, ConvexPolytope) {
    let chart = ChamberChart::new(&p.m.canonical_chamber());
    let vals: Vec<Q> = p.vertices.iter().map(|u| dot(w, &chart.embed(u))).collect();
    let clip = |keep_le: bool| -> Vec<Vec<Q>> {
        let m = p.vertices.len();
        let mut out = Vec::new();
        for i in 0..m {
            let (a, va) = (&p.vertices[i], &vals[i]);
            let (b, vb) = (&p.vertices[(i + 1) % m], &vals[(i + 1) % m]);
            let ina = if keep_le { va <= level } else { va >= level };
            let inb = if keep_le { vb <= level } else { vb >= level };
            if ina {
                out.push(a.clone());
            }
            if ina != inb {
                let t = (level - va) / (vb - va);
                out.push(a.iter().zip(b).map(|(x, y)| x + &t * (y - x)).collect());
            }
        }
        out
    };
    let le = clip(true);
    let ge = clip(false);
    assert!(!le.is_empty() && !ge.is_empty(), "cut level must meet the polytope");
    (
        ConvexPolytope::from_chart_points(&p.m, &le),
        ConvexPolytope::from_chart_points(&p.m, &ge),
    )
}

/// The convex hull of a positive orthogonal set as a polytope on its Levi.
pub fn orthogonal_set_hull(os: &OrthogonalSet) -> ConvexPolytope {
    let chart = ChamberChart::new(&os.levi().canonical_chamber());
    let pts: Vec<Vec<Q>> = os.chambers().iter().map(|c| chart.coords(os.point(c))).collect();
    ConvexPolytope::from_chart_points(os.levi(), &pts)
}

/// The iterated minimizing face of a rigging: at step i, keep the
/// vertices minimizing the step functional, requiring the argmin face to
/// have the full dimension of the next subspace; otherwise the face is
/// degenerate and contributes nothing.
pub fn boundary_face(p: &ConvexPolytope, rf: &RiggedFlag) -> Option<ConvexPolytope> {
    assert_eq!(&p.m, rf.flag().ambient(), "polytope and flag must share an ambient Levi");
    let chart = ChamberChart::new(&p.m.canonical_chamber());
    let d = chart.dim();
    let mut verts = p.vertices.clone();
    for i in 1..=rf.flag().length() {
        let (b1, b2) = rf.split_blocks(i);
        let w = step_vector(p.m.n(), &b1, &b2);
        let row: Vec<Q> = (0..d).map(|k| dot(&w, &chart.embed(&unit_vec(d, k)))).collect();
        let vals: Vec<Q> = verts.iter().map(|u| dot(&row, u)).collect();
        let min = vals.iter().min().unwrap().clone();
        verts = verts
            .into_iter()
            .zip(&vals)
            .filter(|(_, v)| **v == min)
            .map(|(u, _)| u)
            .collect();
        if affine_rank(&verts) != d - i {
            return None;
        }
    }
    Some(ConvexPolytope { m: p.m.clone(), vertices: hull_reduce(d, &verts) })
}

/// Measure of a boundary face in the coweight-normalized volume of the
/// final subspace of its flag; a point counts 1.
fn face_volume(face: &ConvexPolytope, flag: &Flag) -> Q {
    let m = flag.ambient();
    let chart = ChamberChart::new(&m.canonical_chamber());
    let basis: Vec<Vec<Q>> = coweight_basis_rel(m, flag.last())
        .iter()
        .map(|v| chart.coords(v))
        .collect();
    let base = face.vertices[0].clone();
    let rel: Vec<Vec<Q>> = face
        .vertices
        .iter()
        .map(|v| {
            coords_in_basis(&basis, &sub(v, &base))
                .expect("boundary face must be parallel to the flag subspace")
        })
        .collect();
    hull_volume_in_chart(basis.len(), &rel)
}

/// The flag invariant H_Φ(P): the signed sum over riggings of the
/// measures of the iterated minimizing faces.
pub fn hadwiger(p: &ConvexPolytope, flag: &Flag) -> Q {
    let mut total = Q::zero();
    for rf in riggings(flag) {
        if let Some(face) = boundary_face(p, &rf) {
            total += qi(rf.sign()) * face_volume(&face, flag);
        }
    }
    total
}

/// All flag invariants of a polytope.
pub fn hadwiger_vector(p: &ConvexPolytope) -> HadwigerVector {
    let mut out = HadwigerVector::zero(&p.m);
    for f in flag_family(&p.m) {
        let v = hadwiger(p, &f);
        out.set(&f, v);
    }
    out
}

/// Whether two polytopes have equal flag invariants, i.e. are congruent
/// under dissection and translation as detected by this family.
pub fn congruent(p: &ConvexPolytope, other: &ConvexPolytope) -> bool {
    assert_eq!(p.m, other.m, "congruence compares polytopes on one ambient Levi");
    flag_family(&p.m)
        .iter()
        .all(|f| hadwiger(p, f) == hadwiger(other, f))
}

/// A vector of rationals indexed by the strict flags of an ambient Levi.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HadwigerVector {
    m: Levi,
    entries: BTreeMap<Flag, Q>,
}

impl HadwigerVector {
    pub fn zero(m: &Levi) -> HadwigerVector {
        let entries = flag_family(m).into_iter().map(|f| (f, Q::zero())).collect();
        HadwigerVector { m: m.clone(), entries }
    }

    pub fn ambient(&self) -> &Levi {
        &self.m
    }

    pub fn get(&self, f: &Flag) -> &Q {
        self.entries.get(f).expect("unknown flag for this ambient Levi")
    }

    pub fn set(&mut self, f: &Flag, v: Q) {
        let slot = self.entries.get_mut(f).expect("unknown flag for this ambient Levi");
        *slot = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Flag, &Q)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|v| v.is_zero())
    }

    pub fn add(&self, other: &HadwigerVector) -> HadwigerVector {
        assert_eq!(self.m, other.m);
        let entries = self
            .entries
            .iter()
            .map(|(f, v)| (f.clone(), v + other.get(f)))
            .collect();
        HadwigerVector { m: self.m.clone(), entries }
    }

    pub fn scale(&self, c: &Q) -> HadwigerVector {
        let entries = self.entries.iter().map(|(f, v)| (f.clone(), v * c)).collect();
        HadwigerVector { m: self.m.clone(), entries }
    }
}

/// Coordinates of a wedge of vectors in Λ^k(Q^d): the k×k minors over the
/// lexicographically ordered k-subsets of rows.
fn wedge_coords(vectors: &[Vec<Q>], d: usize) -> Vec<Q> {
    let k = vectors.len();
    if k == 0 {
        return vec![Q::one()];
    }
    (0..d)
        .combinations(k)
        .map(|rows| {
            let mat: Vec<Vec<Q>> = rows
                .iter()
                .map(|&r| vectors.iter().map(|v| v[r].clone()).collect())
                .collect();
            linalg::det(&mat)
        })
        .collect()
}

/// The linear consistency conditions cutting out the span of polytope
/// classes: replacing any interior chain member over all compatible
/// choices sums to zero, and for every proper flag the sum of the
/// one-step extensions weighted by the wedge of the coweight basis of the
/// extending subspace vanishes.
pub fn check_consistency(h: &HadwigerVector) -> bool {
    let m = h.ambient();
    let levis = m.containing_levis();
    let chart = ChamberChart::new(&m.canonical_chamber());
    let d = chart.dim();
    let flags = flag_family(m);
    for f in &flags {
        let l = f.length();
        for i in 1..l {
            let mut sum = Q::zero();
            for cand in &levis {
                if cand.num_blocks() == i + 1
                    && f.chain()[i - 1].contains(cand)
                    && cand.contains(&f.chain()[i + 1])
                {
                    let mut c = f.chain().to_vec();
                    c[i] = cand.clone();
                    sum += h.get(&Flag::new(m, c));
                }
            }
            if !sum.is_zero() {
                return false;
            }
        }
    }
    for f in &flags {
        let j = f.length();
        if j >= d {
            continue;
        }
        let k = d - j - 1;
        let mut acc = vec![Q::zero(); binomial(d, k)];
        for cand in &levis {
            if cand.num_blocks() == j + 2 && f.last().contains(cand) {
                let mut c = f.chain().to_vec();
                c.push(cand.clone());
                let hval = h.get(&Flag::new(m, c));
                let tau: Vec<Vec<Q>> = coweight_basis_rel(m, cand)
                    .iter()
                    .map(|v| chart.coords(v))
                    .collect();
                for (slot, w) in acc.iter_mut().zip(wedge_coords(&tau, d)) {
                    *slot += hval * w;
                }
            }
        }
        if acc.iter().any(|v| !v.is_zero()) {
            return false;
        }
    }
    true
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 0..k.min(n - k) {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

/// Chamber-indexed orbital data for one ambient Levi: the full group keys
/// the undescended weighted value, and each proper chamber keys the value
/// of the corresponding descent.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrbitalTable {
    entries: BTreeMap<Parabolic, Q>,
}

impl OrbitalTable {
    pub fn new() -> OrbitalTable {
        OrbitalTable { entries: BTreeMap::new() }
    }

    pub fn insert(&mut self, chamber: Parabolic, value: Q) {
        self.entries.insert(chamber, value);
    }

    pub fn get(&self, chamber: &Parabolic) -> Option<&Q> {
        self.entries.get(chamber)
    }
}

/// A rigging referenced a chamber with no table entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MissingEntry(pub Parabolic);

impl fmt::Display for MissingEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no orbital entry for chamber {:?}", self.0.blocks())
    }
}

impl std::error::Error for MissingEntry {}

/// The flag vector of an orbital table: each flag entry is the signed sum
/// over riggings of the table value at the final chamber.  For tables
/// coming from genuine weighted orbital data the result satisfies the
/// same consistency conditions as a polytope class.
pub fn integrohedron(m: &Levi, table: &OrbitalTable) -> Result<HadwigerVector, MissingEntry> {
    let mut out = HadwigerVector::zero(m);
    for f in flag_family(m) {
        let mut sum = Q::zero();
        for rf in riggings(&f) {
            let chamber = rf.chambers().last().unwrap();
            let v = table.get(chamber).ok_or_else(|| MissingEntry(chamber.clone()))?;
            sum += qi(rf.sign()) * v;
        }
        out.set(&f, sum);
    }
    Ok(out)
}

/// An element of the total graded ring over a base Levi M: one flag
/// vector per Levi containing M, the component at L living on ambient L.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TotalScissorsElement {
    m: Levi,
    components: BTreeMap<Levi, HadwigerVector>,
}

impl TotalScissorsElement {
    pub fn zero(m: &Levi) -> TotalScissorsElement {
        let components = m
            .containing_levis()
            .into_iter()
            .map(|l| (l.clone(), HadwigerVector::zero(&l)))
            .collect();
        TotalScissorsElement { m: m.clone(), components }
    }

    pub fn base(&self) -> &Levi {
        &self.m
    }

    pub fn component(&self, l: &Levi) -> &HadwigerVector {
        self.components.get(l).expect("not a Levi over the base")
    }

    pub fn set_component(&mut self, l: &Levi, h: HadwigerVector) {
        assert_eq!(h.ambient(), l);
        let slot = self.components.get_mut(l).expect("not a Levi over the base");
        *slot = h;
    }

    pub fn components(&self) -> impl Iterator<Item = (&Levi, &HadwigerVector)> {
        self.components.iter()
    }

    pub fn add(&self, other: &TotalScissorsElement) -> TotalScissorsElement {
        assert_eq!(self.m, other.m);
        let components = self
            .components
            .iter()
            .map(|(l, h)| (l.clone(), h.add(other.component(l))))
            .collect();
        TotalScissorsElement { m: self.m.clone(), components }
    }

    pub fn scale(&self, c: &Q) -> TotalScissorsElement {
        let components = self
            .components
            .iter()
            .map(|(l, h)| (l.clone(), h.scale(c)))
            .collect();
        TotalScissorsElement { m: self.m.clone(), components }
    }

    /// Push to a coarser base: keep exactly the components at Levi
    /// subgroups containing the new base.
    pub fn quotient(&self, l: &Levi) -> TotalScissorsElement {
        assert!(l.contains(&self.m), "quotient base must contain the current base");
        let components = l
            .containing_levis()
            .into_iter()
            .map(|l2| (l2.clone(), self.component(&l2).clone()))
            .collect();
        TotalScissorsElement { m: l.clone(), components }
    }

    /// The graded product: a pair of components at L1, L2 contributes at
    /// L1 ∩ L2 exactly when the two relative chart spaces are
    /// complementary there (nonzero descent constant), in which case the
    /// product class is pulled back through the pair of projections.
    /// Scalar factors multiply through; segment × segment pulls back to a
    /// parallelogram.  Higher-dimensional factors are not needed for
    /// rank ≤ 2 bases and are rejected.
    pub fn boxtimes(&self, other: &TotalScissorsElement) -> TotalScissorsElement {
        assert_eq!(self.m, other.m, "product requires a common base Levi");
        let mut out = TotalScissorsElement::zero(&self.m);
        for (l1, h1) in &self.components {
            for (l2, h2) in &other.components {
                if h1.is_zero() || h2.is_zero() {
                    continue;
                }
                let inter = intersect_levis(l1, l2);
                if descent_constant(&inter, l1, l2).is_zero() {
                    continue;
                }
                let prod = component_product(l1, h1, l2, h2, &inter);
                let slot = out.components.get_mut(&inter).unwrap();
                *slot = slot.add(&prod);
            }
        }
        out
    }
}

/// The common refinement: blocks are the nonempty pairwise intersections.
fn intersect_levis(l1: &Levi, l2: &Levi) -> Levi {
    let mut blocks = Vec::new();
    for b1 in l1.blocks() {
        for b2 in l2.blocks() {
            let inter: Vec<usize> = b1.iter().filter(|i| b2.contains(i)).copied().collect();
            if !inter.is_empty() {
                blocks.push(inter);
            }
        }
    }
    Levi::new(l1.n(), blocks)
}

fn component_product(
    l1: &Levi,
    h1: &HadwigerVector,
    l2: &Levi,
    h2: &HadwigerVector,
    inter: &Levi,
) -> HadwigerVector {
    let d1 = l1.dim_rel_full();
    let d2 = l2.dim_rel_full();
    if d1 == 0 {
        let c = h1.get(&Flag::trivial(l1)).clone();
        return h2.scale(&c);
    }
    if d2 == 0 {
        let c = h2.get(&Flag::trivial(l2)).clone();
        return h1.scale(&c);
    }
    if d1 == 1 && d2 == 1 {
        assert!(
            check_consistency(h1) && check_consistency(h2),
            "segment factors must satisfy the consistency conditions"
        );
        let len1 = h1.get(&Flag::trivial(l1)).clone();
        let len2 = h2.get(&Flag::trivial(l2)).clone();
        if len1.is_zero() || len2.is_zero() {
            return HadwigerVector::zero(inter);
        }
        let para = pullback_box(l1, &len1.abs(), l2, &len2.abs(), inter);
        return hadwiger_vector(&para).scale(&(len1.signum() * len2.signum()));
    }
    panic!("products are implemented for factors of chart dimension ≤ 1");
}

/// The pullback of a coordinate box through the complementary pair of
/// projections a_inter^G → a_{L1}^G ⊕ a_{L2}^G, as a parallelogram on the
/// common refinement.
fn pullback_box(l1: &Levi, a1: &Q, l2: &Levi, a2: &Q, inter: &Levi) -> ConvexPolytope {
    let chart = ChamberChart::new(&inter.canonical_chamber());
    let d = chart.dim();
    assert_eq!(d, 2, "box pullback requires a rank-two refinement");
    let chart1 = ChamberChart::new(&l1.canonical_chamber());
    let chart2 = ChamberChart::new(&l2.canonical_chamber());
    let mut mat = vec![vec![Q::zero(); d]; 2];
    for k in 0..d {
        let e = chart.embed(&unit_vec(d, k));
        mat[0][k] = chart1.coords(&l1.project_rel_full(&e))[0].clone();
        mat[1][k] = chart2.coords(&l2.project_rel_full(&e))[0].clone();
    }
    let mut pts = Vec::new();
    for x in [Q::zero(), a1.clone()] {
        for y in [Q::zero(), a2.clone()] {
            let u = linalg::solve(&mat, &[x.clone(), y])
                .expect("complementary projections must be invertible");
            pts.push(u);
        }
    }
    ConvexPolytope::from_chart_points(inter, &pts)
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// The component constant (−1)^{dim a_L^G} |W_0^L| / |W_0^G| weighting
/// the table at L inside a total element.
fn component_constant(l: &Levi) -> Q {
    let wl: u64 = l.blocks().iter().map(|b| factorial(b.len())).product();
    let wg = factorial(l.n());
    let sign = if l.dim_rel_full() % 2 == 0 { 1 } else { -1 };
    q(sign * wl as i64, wg as i64)
}

/// Assemble the total element from one orbital table per Levi over the
/// base: the component at L is the flag vector of its table scaled by the
/// component constant.
pub fn total_integrohedron(
    m: &Levi,
    tables: &BTreeMap<Levi, OrbitalTable>,
) -> Result<TotalScissorsElement, MissingEntry> {
    let mut out = TotalScissorsElement::zero(m);
    for l in m.containing_levis() {
        let table = tables
            .get(&l)
            .unwrap_or_else(|| panic!("missing orbital table for Levi {:?}", l.blocks()));
        let comp = integrohedron(&l, table)?;
        out.set_component(&l, comp.scale(&component_constant(&l)));
    }
    Ok(out)
}

/// Orbital tables for a rank-one factor of the diagonal torus: the
/// weighted integral of `f` at the regular element with eigenvalue
/// difference `2a`, its two Borel descents, and the plain integral at
/// the full group.
pub fn gl2_orbital_tables(
    f: &crate::padic::cell::CellFunction,
    a: &Q,
) -> BTreeMap<Levi, OrbitalTable> {
    use crate::sl2::brute::orbital;
    use crate::sl2::weighted::{borel_descent_value, weighted_orbital_bruteforce};
    let eta = a * a;
    let mut tm = OrbitalTable::new();
    tm.insert(Parabolic::full(2), weighted_orbital_bruteforce(f, &eta));
    tm.insert(Parabolic::borel(2), borel_descent_value(f, a));
    tm.insert(
        Parabolic::new(2, vec![vec![1], vec![0]]),
        borel_descent_value(f, &(-a)),
    );
    let mut tg = OrbitalTable::new();
    tg.insert(Parabolic::full(2), orbital(f, &eta));
    [(Levi::diagonal(2), tm), (Levi::full(2), tg)].into_iter().collect()
}

/// Tables for a two-place product function: the truncation weight of a
/// product point is the sum of the place weights, so the weighted entry
/// expands into the two cross terms, while the descents and the plain
/// integrals factor place by place.
pub fn gl2_pair_tables(
    f1: &crate::padic::cell::CellFunction,
    f2: &crate::padic::cell::CellFunction,
    a: &Q,
) -> BTreeMap<Levi, OrbitalTable> {
    use crate::sl2::brute::orbital;
    use crate::sl2::weighted::{borel_descent_value, weighted_orbital_bruteforce};
    let eta = a * a;
    let i1 = orbital(f1, &eta);
    let i2 = orbital(f2, &eta);
    let j1 = weighted_orbital_bruteforce(f1, &eta);
    let j2 = weighted_orbital_bruteforce(f2, &eta);
    let d1p = borel_descent_value(f1, a);
    let d1m = borel_descent_value(f1, &(-a));
    let d2p = borel_descent_value(f2, a);
    let d2m = borel_descent_value(f2, &(-a));
    let mut tm = OrbitalTable::new();
    tm.insert(Parabolic::full(2), &j1 * &i2 + &i1 * &j2);
    tm.insert(Parabolic::borel(2), &d1p * &d2p);
    tm.insert(Parabolic::new(2, vec![vec![1], vec![0]]), &d1m * &d2m);
    let mut tg = OrbitalTable::new();
    tg.insert(Parabolic::full(2), &i1 * &i2);
    [(Levi::diagonal(2), tm), (Levi::full(2), tg)].into_iter().collect()
}
