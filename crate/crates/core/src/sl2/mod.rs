//! Orbital integrals on the trace-zero 2x2 matrices over Q_p.
//!
//! A matrix [[x, y], [z, -x]] is recorded as the coordinate triple (x, y, z);
//! its regular semisimple orbit is cut out by eta = x^2 + yz, and Haar measure
//! on the algebra is the product measure dx dy dz.  The orbit through eta
//! carries the measure (1 + 1/p)^{-1} dx dy/|y| in the chart
//! (x, y) -> (x, y, (eta - x^2)/y), and the orbital integral of a cell
//! function is evaluated exactly in that chart by [`brute::orbital`].
//!
//! Closed forms for the basic integrals live here; the heavy machinery
//! (adaptive cell sweeps, compact-group averaging, Fourier kernels, torus
//! constants, and the two-function pairing) is split across the submodules.

pub mod brute;
pub mod fourier;
pub mod kappa;
pub mod trace;
pub mod weighted;
pub mod weyl;

use crate::padic::{sqrt_hensel, try_exact_sqrt, val, SquareClass, Val};
use crate::q::{p_pow, qi, Q};
use num::Zero;

/// Orbit parameter of the triple (x, y, z).
pub fn eta(x: &Q, y: &Q, z: &Q) -> Q {
    x * x + y * z
}

/// How the orbit through η splits over Q_p: the centralizer torus is split,
/// inert (unramified quadratic), or ramified quadratic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitClass {
    Split,
    UnramifiedElliptic,
    RamifiedElliptic,
}

/// A regular orbit parameter η ≠ 0 together with its torus type and, when η
/// is a rational square, the exact square root. For split η that is not a
/// rational square (for example η = 7 with p = 3) the root exists in Z_p but
/// not in Q; it is produced on demand by `sqrt_approx` at whatever precision
/// the caller's cell bookkeeping needs, and never stored as "the" root.
#[derive(Clone, Debug)]
pub struct OrbitParameter {
    p: u64,
    eta: Q,
    class: SplitClass,
    sqrt_eta: Option<Q>,
}

/// Decide the torus type of η by the parity of val(η) and the Euler
/// criterion on its unit part, and record an exact rational root if one
/// exists. Rejects η = 0 (the singular locus).
pub fn classify(p: u64, eta: &Q) -> OrbitParameter {
    assert!(!eta.is_zero(), "orbit parameter must be nonzero");
    let class = match SquareClass::of(p, eta) {
        SquareClass::Square => SplitClass::Split,
        SquareClass::UnitNonResidue => SplitClass::UnramifiedElliptic,
        SquareClass::PTimesResidue | SquareClass::PTimesNonResidue => SplitClass::RamifiedElliptic,
    };
    let sqrt_eta = if class == SplitClass::Split {
        try_exact_sqrt(eta)
    } else {
        None
    };
    OrbitParameter {
        p,
        eta: eta.clone(),
        class,
        sqrt_eta,
    }
}

impl OrbitParameter {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn eta(&self) -> &Q {
        &self.eta
    }

    pub fn class(&self) -> SplitClass {
        self.class
    }

    pub fn is_split(&self) -> bool {
        self.class == SplitClass::Split
    }

    /// Exact rational square root, when η is a square in Q (not merely in Q_p).
    pub fn exact_sqrt(&self) -> Option<&Q> {
        self.sqrt_eta.as_ref()
    }

    pub fn val(&self) -> i64 {
        val(self.p, &self.eta).expect_finite()
    }

    /// val(√η) = val(η)/2 for split and inert η (even valuation).
    pub fn half_val(&self) -> i64 {
        let v = self.val();
        assert!(v % 2 == 0, "half_val needs even valuation");
        v / 2
    }

    /// A square root of η in Z_p-scaled coordinates: exact when rational,
    /// otherwise a Hensel lift r with val(r² − η) ≥ val(η) + extra. Split only.
    pub fn sqrt_approx(&self, extra: u32) -> Q {
        assert!(self.is_split(), "square root requires split η");
        match &self.sqrt_eta {
            Some(r) => r.clone(),
            None => sqrt_hensel(self.p, &self.eta, extra),
        }
    }

    /// The diagonal lift η̃ = diag(r, −r), with r as in `sqrt_approx`.
    pub fn diagonal_lift(&self, extra: u32) -> DiagonalLift {
        DiagonalLift {
            entry: self.sqrt_approx(extra),
        }
    }
}

/// The diagonal representative diag(r, −r) of a split orbit, i.e. the point
/// (x, y, z) = (r, 0, 0) in our coordinates.
#[derive(Clone, Debug)]
pub struct DiagonalLift {
    pub entry: Q,
}

impl DiagonalLift {
    pub fn coords(&self) -> [Q; 3] {
        [self.entry.clone(), Q::zero(), Q::zero()]
    }
}

/// Orbital integral of the unit-lattice indicator over the orbit `eta`,
/// in closed form.  The orbit must be regular (`eta != 0`).
///
/// The value depends only on the square class and valuation of `eta`:
/// zero off the integers, 1 on split orbits, and a correction of size
/// |eta|^{1/2} on the two kinds of elliptic orbit.
pub fn phi0(p: u64, eta: &Q) -> Q {
    assert!(!eta.is_zero(), "orbit parameter must be nonzero");
    let v = match val(p, eta) {
        Val::Finite(v) => v,
        Val::Infinite => unreachable!(),
    };
    if v < 0 {
        return Q::zero();
    }
    match SquareClass::of(p, eta) {
        SquareClass::Square => qi(1),
        SquareClass::UnitNonResidue => {
            // 1 - 2 p^{-v/2} / (1 + p), with v even.
            debug_assert!(v % 2 == 0);
            qi(1) - qi(2) * p_pow(p, -v / 2) / (qi(1) + qi(p as i64))
        }
        SquareClass::PTimesResidue | SquareClass::PTimesNonResidue => {
            debug_assert!(v % 2 == 1);
            qi(1) - p_pow(p, -(v + 1) / 2)
        }
    }
}

/// Orbital integral of the indicator of the scaled lattice p^j sl2(Z_p).
///
/// Substituting X -> p^j X in the orbit chart multiplies dx by p^{-j} and
/// leaves dy/|y| alone, so the integral is p^{-j} phi0(p^{-2j} eta).
pub fn phi0_scaled(p: u64, eta: &Q, j: i64) -> Q {
    p_pow(p, -j) * phi0(p, &(eta * p_pow(p, -2 * j)))
}

/// [`phi0`] on a split orbit, as a function of val(η) alone: the indicator
/// of v ≥ 0.
pub fn phi0_split_at(_p: u64, v: i64) -> Q {
    if v >= 0 {
        qi(1)
    } else {
        Q::zero()
    }
}

/// [`phi0`] on an inert elliptic orbit, as a function of val(η) alone
/// (v must be even): 1 − 2 p^{−v/2}/(1 + p) for v ≥ 0.
pub fn phi0_unramified_at(p: u64, v: i64) -> Q {
    assert!(v % 2 == 0, "inert orbit parameters have even valuation");
    if v < 0 {
        return Q::zero();
    }
    qi(1) - qi(2) * p_pow(p, -v / 2) / (qi(1) + qi(p as i64))
}

/// [`phi0`] on a ramified elliptic orbit, as a function of val(η) alone
/// (v must be odd): 1 − p^{−(v+1)/2} for v ≥ 0.
pub fn phi0_ramified_at(p: u64, v: i64) -> Q {
    assert!(v % 2 != 0, "ramified orbit parameters have odd valuation");
    if v < 0 {
        return Q::zero();
    }
    qi(1) - p_pow(p, -(v + 1) / 2)
}

/// Weighted orbital integral of the unit-lattice indicator over the split
/// orbit `eta`, in closed form: val(eta)/2 - 1/(p-1) + |eta|^{1/2}/(p-1)
/// for integral `eta`, zero otherwise.
pub fn weighted_closed(p: u64, eta: &Q) -> Q {
    assert!(!eta.is_zero());
    let v = match val(p, eta) {
        Val::Finite(v) => v,
        Val::Infinite => unreachable!(),
    };
    assert!(
        SquareClass::of(p, eta) == SquareClass::Square,
        "weight factor is attached to split orbits only"
    );
    if v < 0 {
        return Q::zero();
    }
    let pm1 = qi(p as i64 - 1);
    crate::q::q(v, 2) - qi(1) / &pm1 + p_pow(p, -v / 2) / &pm1
}

/// Weighted orbital integral of the scaled-lattice indicator, via the same
/// substitution as [`phi0_scaled`] (the weight is dilation-invariant, so the
/// covariance is J(eta, f(p^{-j} .)) = p^{-j} J(p^{-2j} eta, f)).
pub fn weighted_closed_scaled(p: u64, eta: &Q, j: i64) -> Q {
    p_pow(p, -j) * weighted_closed(p, &(eta * p_pow(p, -2 * j)))
}
