//! The two-function pairing: a weighted split-torus term balanced against
//! elliptic orbital masses.
//!
//! For a pair of scaled-lattice test functions the same distribution can be
//! expanded two ways, moving the Fourier transform from one argument to the
//! other.  Each expansion integrates orbital data over the four torus
//! classes of [`super::weyl`], with the weighted invariant integral of
//! [`super::fourier`] attached to the transformed function on the split
//! class:
//!
//!   side(f, g) = −(κ_split/2) Σ_k p^{−k}(1−1/p) · Iw(k, f̂) · O(k, g)
//!              + Σ_ε (κ_ε/2) |ε|^{−1/2} Σ_k p^{−k}(1−1/p) · O_ε(k, f̂) · O_ε(k, g)
//!
//! where the split shells carry val x = k (so val η = 2k), the elliptic
//! shells carry val η = val ε + 2k, Iw is the invariant weighted value, and
//! O the plain orbital integral.  The identity under test is
//! side(f, g) = side(g, f).  The ramified classes contribute through
//! |ε|^{−1/2} = √p, so both sides live in Q + Q·√p and are tracked exactly,
//! one rational component per basis element.
//!
//! [`local_trace_totals`] evaluates both sides in closed form by summing
//! the shell series exactly; [`local_trace_check`] truncates the shells at
//! a chosen depth and certifies the discarded mass, which is how the
//! comparison is exported: the difference of the truncated sides must sit
//! inside the combined tail bound.

use num::{One, Signed, Zero};

use super::fourier::{invariant_weighted_closed_at_val, lattice_profile};
use super::weyl::{TorusClass, WeylMeasures};
use crate::padic::cell::CellFunction;
use crate::q::{p_pow, qi, tail_geom, tail_k_geom, Q};

/// An exact element a + b·√p of the quadratic extension, stored
/// componentwise.  Which prime the irrational slot refers to is the
/// caller's bookkeeping; the pairing only ever mixes values over one p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExt {
    pub rat: Q,
    pub irr: Q,
}

impl QExt {
    pub fn new(rat: Q, irr: Q) -> QExt {
        QExt { rat, irr }
    }

    pub fn zero() -> QExt {
        QExt::new(Q::zero(), Q::zero())
    }

    pub fn rational(rat: Q) -> QExt {
        QExt::new(rat, Q::zero())
    }

    pub fn add(&self, other: &QExt) -> QExt {
        QExt::new(&self.rat + &other.rat, &self.irr + &other.irr)
    }

    pub fn sub(&self, other: &QExt) -> QExt {
        QExt::new(&self.rat - &other.rat, &self.irr - &other.irr)
    }

    pub fn scale(&self, s: &Q) -> QExt {
        QExt::new(&self.rat * s, &self.irr * s)
    }

    pub fn abs(&self) -> QExt {
        QExt::new(self.rat.abs(), self.irr.abs())
    }

    /// Componentwise |self| ≤ bound; with a nonnegative bound this is the
    /// certified-interval comparison (1 and √p are independent over Q, so
    /// componentwise control is the honest notion of smallness).
    pub fn within(&self, bound: &QExt) -> bool {
        self.rat.abs() <= bound.rat && self.irr.abs() <= bound.irr
    }
}

/// A scaled-lattice test function c · I(p^j sl2(Z_p)), the class on which
/// the pairing's both-sides expansion is available in closed form.
#[derive(Clone, Debug)]
struct Profile {
    c: Q,
    j: i64,
}

impl Profile {
    fn of(f: &CellFunction) -> Profile {
        let (c, j) = lattice_profile(f)
            .expect("the pairing is evaluated on scaled-lattice indicator functions");
        Profile { c, j }
    }

    /// Fourier transform: (c · I(p^j L))^ = c p^{−3j} · I(p^{−j} L).
    fn hat(&self, p: u64) -> Profile {
        Profile {
            c: &self.c * p_pow(p, -3 * self.j),
            j: -self.j,
        }
    }
}

/// Outcome of the depth-truncated comparison: the two expansions truncated
/// to shell index `depth`, and a certified bound on everything discarded.
/// The identity holds exactly, so the truncated sides must differ by at
/// most `bound`.
#[derive(Clone, Debug)]
pub struct TraceCheck {
    pub lhs: QExt,
    pub rhs: QExt,
    pub bound: QExt,
    pub depth: i64,
}

impl TraceCheck {
    pub fn holds(&self) -> bool {
        self.lhs.sub(&self.rhs).within(&self.bound)
    }
}

/// Evaluate both expansions truncated at shell `depth` (clamped up so the
/// closed-form branches apply), with a certified tail bound for each side.
pub fn local_trace_check(f: &CellFunction, g: &CellFunction, depth: i64) -> TraceCheck {
    let p = f.p();
    assert_eq!(p, g.p(), "the pairing needs a single residue characteristic");
    let pf = Profile::of(f);
    let pg = Profile::of(g);
    let measures = WeylMeasures::solve(p);
    let (lhs, lhs_tail) = side_partial(p, &measures, &pf.hat(p), &pg, depth);
    let (rhs, rhs_tail) = side_partial(p, &measures, &pg.hat(p), &pf, depth);
    TraceCheck {
        lhs,
        rhs,
        bound: lhs_tail.add(&rhs_tail),
        depth,
    }
}

/// Both expansions in closed form, every shell series summed exactly.
pub fn local_trace_totals(f: &CellFunction, g: &CellFunction) -> (QExt, QExt) {
    let p = f.p();
    assert_eq!(p, g.p(), "the pairing needs a single residue characteristic");
    let pf = Profile::of(f);
    let pg = Profile::of(g);
    let measures = WeylMeasures::solve(p);
    let lhs = side_exact(p, &measures, &pf.hat(p), &pg);
    let rhs = side_exact(p, &measures, &pg.hat(p), &pf);
    (lhs, rhs)
}

/// (κ/2)(1 − 1/p) · c_h c_p · p^{−j_h − j_p}: the constants of one class's
/// shell sum, with both profiles' scalar parts pulled out.
fn class_prefactor(p: u64, kappa: &Q, hatted: &Profile, plain: &Profile) -> Q {
    kappa / qi(2)
        * (Q::one() - p_pow(p, -1))
        * &hatted.c
        * &plain.c
        * p_pow(p, -hatted.j - plain.j)
}

/// The per-shell decay constant of the closed orbital integral along an
/// elliptic class: O(val η = val ε + 2(k − j)) = 1 − B p^{−k} with
/// B = 2 p^j / (p + 1) on the inert class and B = p^{j−1} on the ramified
/// ones.
fn elliptic_decay(p: u64, class: &TorusClass, j: i64) -> Q {
    if class.val_offset() == 0 {
        qi(2) * p_pow(p, j) / qi(p as i64 + 1)
    } else {
        p_pow(p, j - 1)
    }
}

fn side_exact(p: u64, measures: &WeylMeasures, hatted: &Profile, plain: &Profile) -> QExt {
    let classes = measures.classes();
    let (jh, jp) = (hatted.j, plain.j);
    let k0 = jh.max(jp);

    // Split class: the weighted invariant value of the hatted profile is
    // p^{−j_h} Iw(2(k − j_h)) against the plain indicator [k ≥ j_p].  Below
    // k = j_h the weighted value follows its negative-valuation branch;
    // those finitely many shells are added verbatim, and from k0 on the
    // nonnegative branch (k − j_h) + p^{−(k−j_h)}/(p−1) − (2p+1)/(p²−1)
    // splits into geometric series.
    let mut split_sum = Q::zero();
    for k in jp..jh {
        split_sum += p_pow(p, -k) * invariant_weighted_closed_at_val(p, 2 * (k - jh));
    }
    let drift = qi(2 * p as i64 + 1) / qi((p * p) as i64 - 1);
    split_sum += tail_k_geom(p, k0) - (qi(jh) + drift) * tail_geom(p, k0)
        + p_pow(p, jh) / qi(p as i64 - 1) * tail_geom(p * p, k0);
    let mut total = QExt::rational(-class_prefactor(p, classes[0].kappa(), hatted, plain) * split_sum);

    // Elliptic classes: a product of two decaying closed orbitals expands
    // into three geometric series in p^{−k}, p^{−2k}, p^{−3k}.
    for class in &classes[1..] {
        let b_h = elliptic_decay(p, class, jh);
        let b_p = elliptic_decay(p, class, jp);
        let series = tail_geom(p, k0) - (&b_h + &b_p) * tail_geom(p * p, k0)
            + &b_h * &b_p * tail_geom(p * p * p, k0);
        let value = class_prefactor(p, class.kappa(), hatted, plain) * series;
        if class.val_offset() == 0 {
            total.rat += value;
        } else {
            total.irr += value;
        }
    }
    total
}

/// One expansion truncated at shell `depth`, returning (value, tail bound).
/// The tail majorizes the weighted value by |Iw(2m)| ≤ m + 1 (valid for
/// m ≥ 0, which the depth clamp guarantees past the truncation point) and
/// every closed orbital by 1.
fn side_partial(
    p: u64,
    measures: &WeylMeasures,
    hatted: &Profile,
    plain: &Profile,
    depth: i64,
) -> (QExt, QExt) {
    let classes = measures.classes();
    let (jh, jp) = (hatted.j, plain.j);
    let depth = depth.max(jh).max(jp).max(0);

    let prefac_split = class_prefactor(p, classes[0].kappa(), hatted, plain);
    let mut split_sum = Q::zero();
    for k in jp..=depth {
        split_sum += p_pow(p, -k) * invariant_weighted_closed_at_val(p, 2 * (k - jh));
    }
    let mut value = QExt::rational(-&prefac_split * split_sum);
    // Σ_{k > depth} p^{−k} (k − j_h + 1).
    let split_tail_mass =
        tail_k_geom(p, depth + 1) + qi(1 - jh) * tail_geom(p, depth + 1);
    let mut tail = QExt::rational(prefac_split.abs() * split_tail_mass);

    for class in &classes[1..] {
        let prefac = class_prefactor(p, class.kappa(), hatted, plain);
        let v0 = class.val_offset();
        let mut sum = Q::zero();
        for k in jh.max(jp)..=depth {
            sum += p_pow(p, -k)
                * class.lattice_orbital_at(p, v0 + 2 * (k - jh))
                * class.lattice_orbital_at(p, v0 + 2 * (k - jp));
        }
        let class_value = &prefac * sum;
        let class_tail = prefac.abs() * tail_geom(p, depth + 1);
        if v0 == 0 {
            value.rat += class_value;
            tail.rat += class_tail;
        } else {
            value.irr += class_value;
            tail.irr += class_tail;
        }
    }
    (value, tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::q;

    fn lat(p: u64, j: i64) -> CellFunction {
        CellFunction::lattice(p, 3, j)
    }

    #[test]
    fn frozen_pair_of_nested_lattices() {
        let (lhs, rhs) = local_trace_totals(&lat(3, 0), &lat(3, 1));
        let expected = QExt::new(q(-5, 351), q(4, 117));
        assert_eq!(lhs, expected);
        assert_eq!(rhs, expected);
    }

    #[test]
    fn the_two_expansions_agree_exactly() {
        for (p, a, b) in [(3u64, 0i64, 2i64), (3, -1, -2), (3, 1, 2), (5, 0, 1), (5, -1, 1)] {
            let (lhs, rhs) = local_trace_totals(&lat(p, a), &lat(p, b));
            assert_eq!(lhs, rhs, "p = {p}, lattices p^{a}, p^{b}");
            assert!(!lhs.rat.is_zero() || !lhs.irr.is_zero());
        }
    }

    #[test]
    fn the_pairing_is_bilinear_in_the_scalars() {
        let f = lat(3, 0).scale(&q(-3, 2));
        let g = lat(3, 1).scale(&q(5, 7));
        let (lhs, rhs) = local_trace_totals(&f, &g);
        let scale = q(-3, 2) * q(5, 7);
        let expected = QExt::new(q(-5, 351), q(4, 117)).scale(&scale);
        assert_eq!(lhs, expected);
        assert_eq!(rhs, expected);
    }

    #[test]
    fn truncations_stay_inside_their_certificates() {
        for (p, a, b) in [(3u64, 0i64, 1i64), (3, -1, -2), (5, 0, 1)] {
            let (exact_lhs, exact_rhs) = local_trace_totals(&lat(p, a), &lat(p, b));
            for depth in [0i64, 2, 6] {
                let check = local_trace_check(&lat(p, a), &lat(p, b), depth);
                assert!(check.holds(), "p = {p}, a = {a}, b = {b}, depth {depth}");
                assert!(exact_lhs.sub(&check.lhs).within(&check.bound));
                assert!(exact_rhs.sub(&check.rhs).within(&check.bound));
            }
        }
    }

    #[test]
    fn certificates_shrink_with_depth() {
        let shallow = local_trace_check(&lat(3, 0), &lat(3, 1), 2);
        let deep = local_trace_check(&lat(3, 0), &lat(3, 1), 10);
        assert!(deep.bound.rat < shallow.bound.rat);
        assert!(deep.bound.irr < shallow.bound.irr);
        // The deep truncation pins the frozen value tightly.
        assert!(QExt::new(q(-5, 351), q(4, 117))
            .sub(&deep.lhs)
            .within(&deep.bound));
    }

    #[test]
    fn quadratic_extension_arithmetic() {
        let x = QExt::new(q(1, 2), q(-1, 3));
        let y = QExt::new(q(1, 3), q(1, 3));
        assert_eq!(x.add(&y), QExt::new(q(5, 6), qi(0)));
        assert_eq!(x.sub(&x), QExt::zero());
        assert_eq!(x.scale(&qi(-6)), QExt::new(qi(-3), qi(2)));
        assert_eq!(x.abs(), QExt::new(q(1, 2), q(1, 3)));
        assert!(x.within(&QExt::new(q(1, 2), q(1, 2))));
        assert!(!x.within(&QExt::new(q(1, 4), q(1, 2))));
    }
}
