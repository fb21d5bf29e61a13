//! p-adic scalar arithmetic over exact rationals.
//!
//! Scalars are plain `Q` values tagged with an odd prime; nothing is ever
//! stored as a truncated digit expansion. Valuations carry an explicit
//! +infinity sentinel for 0, and square roots exist in two flavours: exact
//! (when the scalar is a rational square) and Hensel approximations to a
//! requested modulus, used only for residue-cell bookkeeping.

pub mod cell;
pub mod cyclo;

use crate::q::{p_pow, Q, Z};
use num::traits::{One, Signed, Zero};
use num::Integer;

/// p-adic valuation with the +infinity sentinel for 0.
///
/// `Finite(v) < Infinite` under the derived order, which is the order the
/// ultrametric inequalities want.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Finite(i64),
    Infinite,
}

impl Val {
    pub fn finite(self) -> Option<i64> {
        match self {
            Val::Finite(v) => Some(v),
            Val::Infinite => None,
        }
    }

    /// Finite value, panicking on the 0 sentinel.
    pub fn expect_finite(self) -> i64 {
        self.finite().expect("valuation of zero")
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Val::Infinite)
    }

    /// val >= m, the membership test for p^m Z_p.
    pub fn at_least(self, m: i64) -> bool {
        match self {
            Val::Finite(v) => v >= m,
            Val::Infinite => true,
        }
    }
}

impl std::fmt::Display for Val {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Val::Finite(v) => write!(f, "{v}"),
            Val::Infinite => write!(f, "+inf"),
        }
    }
}

/// Checks that p is an odd prime (the only primes these kernels accept).
pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Valuation of an integer.
pub fn val_z(p: u64, n: &Z) -> Val {
    if n.is_zero() {
        return Val::Infinite;
    }
    let pz = Z::from(p);
    let mut v = 0i64;
    let mut m = n.abs();
    loop {
        let (q, r) = m.div_rem(&pz);
        if r.is_zero() {
            v += 1;
            m = q;
        } else {
            break;
        }
    }
    Val::Finite(v)
}

/// Valuation of a rational.
pub fn val(p: u64, x: &Q) -> Val {
    if x.is_zero() {
        return Val::Infinite;
    }
    let vn = val_z(p, x.numer()).expect_finite();
    let vd = val_z(p, x.denom()).expect_finite();
    Val::Finite(vn - vd)
}

/// p-adic absolute value |x| = p^{-val(x)}, with |0| = 0.
pub fn abs(p: u64, x: &Q) -> Q {
    match val(p, x) {
        Val::Infinite => Q::zero(),
        Val::Finite(v) => p_pow(p, -v),
    }
}

/// The unit part u of x = p^v * u. Panics on 0.
pub fn unit_part(p: u64, x: &Q) -> Q {
    let v = val(p, x).expect_finite();
    x / p_pow(p, v)
}

/// Canonical representative of x modulo p^k Z_p, for x with val(x) >= 0:
/// the unique integer r in [0, p^k) with x ≡ r (mod p^k Z_p).
pub fn residue_mod_pk(p: u64, x: &Q, k: u32) -> Z {
    assert!(
        val(p, x).at_least(0),
        "residue_mod_pk needs a p-integral rational"
    );
    let pk = Z::from(p).pow(k);
    let a = x.numer().mod_floor(&pk);
    let b = x.denom().mod_floor(&pk);
    // denominator is a unit mod p^k; invert by extended gcd
    let e = b.extended_gcd(&pk);
    debug_assert!(e.gcd.is_one());
    let binv = e.x.mod_floor(&pk);
    (a * binv).mod_floor(&pk)
}

/// Euler criterion: is the unit rational u a square modulo p?
pub fn is_residue_unit(p: u64, u: &Q) -> bool {
    assert_eq!(val(p, u), Val::Finite(0), "Euler criterion needs a unit");
    let pz = Z::from(p);
    let r = residue_mod_pk(p, u, 1);
    let e = (&pz - 1u32) / 2u32;
    r.modpow(&e, &pz).is_one()
}

/// The square-class trichotomy of a nonzero scalar over Q_p, p odd.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SquareClass {
    /// Even valuation, unit part a quadratic residue: x is a square in Q_p.
    Square,
    /// Even valuation, unit part a non-residue.
    UnitNonResidue,
    /// Odd valuation, unit part a residue.
    PTimesResidue,
    /// Odd valuation, unit part a non-residue.
    PTimesNonResidue,
}

impl SquareClass {
    pub fn of(p: u64, x: &Q) -> SquareClass {
        let v = val(p, x).expect_finite();
        let residue = is_residue_unit(p, &unit_part(p, x));
        match (v.rem_euclid(2) == 0, residue) {
            (true, true) => SquareClass::Square,
            (true, false) => SquareClass::UnitNonResidue,
            (false, true) => SquareClass::PTimesResidue,
            (false, false) => SquareClass::PTimesNonResidue,
        }
    }

    pub fn all() -> [SquareClass; 4] {
        [
            SquareClass::Square,
            SquareClass::UnitNonResidue,
            SquareClass::PTimesResidue,
            SquareClass::PTimesNonResidue,
        ]
    }

    /// A canonical class representative of minimal valuation in {0, 1}.
    pub fn representative(self, p: u64) -> Q {
        let nr = smallest_nonresidue(p);
        match self {
            SquareClass::Square => Q::one(),
            SquareClass::UnitNonResidue => Q::from_integer(Z::from(nr)),
            SquareClass::PTimesResidue => Q::from_integer(Z::from(p)),
            SquareClass::PTimesNonResidue => Q::from_integer(Z::from(p * nr)),
        }
    }
}

/// Smallest positive non-residue mod p.
pub fn smallest_nonresidue(p: u64) -> u64 {
    (2..p)
        .find(|&u| !is_residue_unit(p, &Q::from_integer(Z::from(u))))
        .expect("odd primes have non-residues")
}

/// Exact rational square root, when one exists.
pub fn try_exact_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some(Q::zero());
    }
    let sn = x.numer().sqrt();
    let sd = x.denom().sqrt();
    let cand = Q::new(sn, sd);
    (&cand * &cand == *x).then_some(cand)
}

/// Hensel square root of x to modulus precision `extra`: for x = p^{2a} u
/// with u a residue unit, returns s = p^a t with t an integer in [1, p^extra)
/// and val(s^2 - x) >= 2a + extra. Requires `SquareClass::Square` and
/// extra >= 1.
pub fn sqrt_hensel(p: u64, x: &Q, extra: u32) -> Q {
    assert!(extra >= 1);
    let v = val(p, x).expect_finite();
    assert_eq!(v.rem_euclid(2), 0, "square root needs even valuation");
    let a = v / 2;
    let u = unit_part(p, x);
    let pz = Z::from(p);
    let pk = pz.pow(extra);
    let target = residue_mod_pk(p, &u, extra);

    // base solution mod p by search
    let t0 = (1..p)
        .map(Z::from)
        .find(|t| (t * t).mod_floor(&pz) == target.mod_floor(&pz))
        .expect("sqrt_hensel called on a non-square class");

    // Newton lift: t <- t - (t^2 - u) / (2t), doubling precision each step
    let mut t = t0;
    let mut prec = 1u32;
    while prec < extra {
        prec = (prec * 2).min(extra);
        let pm = pz.pow(prec);
        let two_t = (&t * 2u32).mod_floor(&pm);
        let inv = two_t.extended_gcd(&pm).x.mod_floor(&pm);
        let residual = (&t * &t - residue_mod_pk(p, &u, prec)).mod_floor(&pm);
        t = (&t - residual * inv).mod_floor(&pm);
    }
    debug_assert!((&t * &t - &target).mod_floor(&pk).is_zero());
    Q::from_integer(t) * p_pow(p, a)
}

/// A rational tagged with its odd prime — the scalar of record for the
/// p-adic kernels, carrying val and |.| as derived data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdic {
    pub p: u64,
    pub x: Q,
}

impl PAdic {
    pub fn new(p: u64, x: Q) -> Self {
        assert!(is_odd_prime(p), "p must be an odd prime, got {p}");
        PAdic { p, x }
    }

    pub fn val(&self) -> Val {
        val(self.p, &self.x)
    }

    pub fn abs(&self) -> Q {
        abs(self.p, &self.x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::{q, qi};

    #[test]
    fn valuation_examples() {
        assert_eq!(val(3, &qi(18)), Val::Finite(2));
        assert_eq!(val(3, &qi(0)), Val::Infinite);
        assert_eq!(val(5, &q(7, 25)), Val::Finite(-2));
    }

    #[test]
    fn abs_matches_val() {
        assert_eq!(abs(3, &qi(18)), q(1, 9));
        assert_eq!(abs(5, &q(7, 25)), qi(25));
        assert_eq!(abs(7, &qi(0)), qi(0));
        let x = PAdic::new(3, qi(18));
        assert_eq!(x.abs(), q(1, 9));
        assert_eq!(x.val(), Val::Finite(2));
    }

    #[test]
    fn val_ordering_infinite_on_top() {
        assert!(Val::Finite(100) < Val::Infinite);
        assert!(Val::Finite(-3) < Val::Finite(0));
        assert!(Val::Infinite.at_least(1_000_000));
    }

    #[test]
    fn residue_arithmetic() {
        // 1/2 mod 9: 2 * 5 = 10 ≡ 1, so 1/2 ≡ 5
        assert_eq!(residue_mod_pk(3, &q(1, 2), 2), Z::from(5));
        assert_eq!(residue_mod_pk(3, &qi(7), 1), Z::from(1));
    }

    #[test]
    fn euler_criterion() {
        assert!(is_residue_unit(3, &qi(1)));
        assert!(!is_residue_unit(3, &qi(2)));
        assert!(is_residue_unit(5, &qi(4)));
        assert!(!is_residue_unit(5, &qi(2)));
        assert!(is_residue_unit(7, &qi(2)));
        assert_eq!(smallest_nonresidue(3), 2);
        assert_eq!(smallest_nonresidue(5), 2);
        assert_eq!(smallest_nonresidue(7), 3);
    }

    #[test]
    fn square_classes() {
        assert_eq!(SquareClass::of(5, &qi(4)), SquareClass::Square);
        assert_eq!(SquareClass::of(3, &qi(2)), SquareClass::UnitNonResidue);
        assert_eq!(SquareClass::of(3, &qi(3)), SquareClass::PTimesResidue);
        assert_eq!(SquareClass::of(3, &qi(6)), SquareClass::PTimesNonResidue);
        assert_eq!(SquareClass::of(3, &q(1, 9)), SquareClass::Square);
        for c in SquareClass::all() {
            assert_eq!(SquareClass::of(3, &c.representative(3)), c);
            assert_eq!(SquareClass::of(5, &c.representative(5)), c);
        }
    }

    #[test]
    fn exact_sqrt() {
        assert_eq!(try_exact_sqrt(&qi(4)), Some(qi(2)));
        assert_eq!(try_exact_sqrt(&q(9, 25)), Some(q(3, 5)));
        assert_eq!(try_exact_sqrt(&qi(2)), None);
        assert_eq!(try_exact_sqrt(&qi(-4)), None);
    }

    #[test]
    fn hensel_sqrt_squares_back() {
        for (p, x, extra) in [
            (3u64, qi(7), 5u32), // 7 ≡ 1 mod 3 is a residue
            (3, q(4, 1), 4),
            (3, q(7, 4), 6), // val 0, unit 7/4 ≡ 7 * 7 = 49 ≡ 1 mod 3
            (5, qi(11), 5),  // 11 ≡ 1 mod 5
            (3, qi(9 * 7), 5),
            (3, q(7, 9), 5),
        ] {
            let s = sqrt_hensel(p, &x, extra);
            let v = val(p, &x).expect_finite();
            let err = &s * &s - &x;
            assert!(
                val(p, &err).at_least(v + extra as i64),
                "p={p} x={x} extra={extra}: s={s} err val {:?}",
                val(p, &err)
            );
            assert_eq!(val(p, &s), Val::Finite(v / 2));
        }
    }
}
