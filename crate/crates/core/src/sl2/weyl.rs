//! Slicing Haar measure on the trace-zero matrices into orbital integrals.
//!
//! The regular set of sl2(Z_p) is partitioned by the square class of
//! η = x² + yz into four pieces, one per conjugacy class of maximal torus:
//! split (η a square), inert (unit nonresidue), and two ramified classes
//! (odd valuation, residue or nonresidue unit part).  Integrating any cell
//! function over the algebra is the same as integrating its orbital
//! integrals over the parameter η, once each class carries the right
//! constant.  This module computes those constants exactly, validates the
//! class volumes by counting residues, and packages the slicing identity as
//! a depth-truncated check with a certified tail bound.
//!
//! Concretely, with κ the per-class constants solved here,
//!
//!   ∫ f  =  Σ_classes (κ/2) Σ_k p^{−2k} (1 − 1/p) · O(η_k, f),
//!
//! where η_k runs over the shells of the class (val η = val ε + 2k) and
//! O(η_k, f) is the average of the orbital integral over the shell.  The
//! constants are pinned down by the unit-lattice calibration: the inner sum
//! against O(·, I) is the class's `torus_factor`, and the outer identity
//! must reproduce the class's share of vol(sl2(Z_p)) = 1.

use num::{One, Signed, Zero};

use super::brute::{orbital, orbital_integral_bound};
use super::fourier::lattice_profile;
use super::{phi0_ramified_at, phi0_split_at, phi0_unramified_at};
use crate::padic::cell::CellFunction;
use crate::padic::{is_odd_prime, smallest_nonresidue, SquareClass};
use crate::q::{p_pow, q, qi, tail_geom, Q};

/// One conjugacy class of maximal tori, tagged by a representative
/// discriminant ε ∈ {1, u₀, p, p·u₀} (u₀ the smallest nonresidue).
#[derive(Clone, Debug)]
pub struct TorusClass {
    label: &'static str,
    /// val(ε): 0 for the unit classes, 1 for the ramified ones.
    val_offset: i64,
    /// Whether the unit part of η is a quadratic residue mod p.
    unit_is_residue: bool,
    epsilon: Q,
    volume: Q,
    torus_factor: Q,
    kappa: Q,
}

impl TorusClass {
    pub fn label(&self) -> &'static str {
        self.label
    }

    pub fn epsilon(&self) -> &Q {
        &self.epsilon
    }

    /// Haar measure of {X ∈ sl2(Z_p) : η(X) in this class}.
    pub fn volume(&self) -> &Q {
        &self.volume
    }

    /// Σ_{k ≥ 0} p^{−2k} (1 − 1/p) · O(ε p^{2k}, I), the unit-lattice mass
    /// of the class's shell sum.
    pub fn torus_factor(&self) -> &Q {
        &self.torus_factor
    }

    /// The measure constant κ attached to the class.
    pub fn kappa(&self) -> &Q {
        &self.kappa
    }

    pub fn val_offset(&self) -> i64 {
        self.val_offset
    }

    pub fn unit_is_residue(&self) -> bool {
        self.unit_is_residue
    }

    /// O(η, I) for η in this class with val(η) = v; the value depends on η
    /// only through the class and the valuation.
    pub fn lattice_orbital_at(&self, p: u64, v: i64) -> Q {
        match (self.val_offset == 0, self.unit_is_residue) {
            (true, true) => phi0_split_at(p, v),
            (true, false) => phi0_unramified_at(p, v),
            (false, _) => phi0_ramified_at(p, v),
        }
    }
}

/// The four torus classes with their volumes, shell masses, and measure
/// constants, all exact.
#[derive(Clone, Debug)]
pub struct WeylMeasures {
    p: u64,
    classes: Vec<TorusClass>,
}

impl WeylMeasures {
    /// Solve for the measure constants at an odd prime.
    ///
    /// The class volumes come from summing, over shells of η, the measure
    /// of {X : η(X) = η}-fibers; the geometric series collapse to
    ///
    ///   vol(split) = 1/2,
    ///   vol(inert) = (p² − p + 1) / 2(p² + p + 1),
    ///   vol(ramified) = p / 2(p² + p + 1)   (each of the two classes),
    ///
    /// and the torus factors are the same series against the closed
    /// unit-lattice orbital integral.  κ = 2·vol/factor then makes the
    /// slicing identity exact; the quotients simplify to (p+1)/p on the
    /// unit classes and (p+1)/p² on the ramified ones.
    pub fn solve(p: u64) -> WeylMeasures {
        assert!(is_odd_prime(p), "torus constants need an odd prime");
        let pq = qi(p as i64);
        let u0 = qi(smallest_nonresidue(p) as i64);
        let s = &pq * &pq + &pq + Q::one(); // p² + p + 1
        let two = qi(2);

        let vol_split = q(1, 2);
        let vol_inert = (&pq * &pq - &pq + Q::one()) / (&two * &s);
        let vol_ram = &pq / (&two * &s);

        // Σ_k p^{−2k}(1−1/p): split shells all carry O = 1.
        let t_split = &pq / (&pq + Q::one());
        // The inert correction 2p^{−k}/(1+p) turns the series into a
        // difference of two geometric sums; likewise p^{−k−1} for ramified.
        let t_inert = &t_split * (&pq * &pq - &pq + Q::one()) / &s;
        let t_ram = &pq * &pq * &pq / ((&pq + Q::one()) * &s);

        let classes = vec![
            TorusClass {
                label: "split",
                val_offset: 0,
                unit_is_residue: true,
                epsilon: Q::one(),
                kappa: &two * &vol_split / &t_split,
                volume: vol_split,
                torus_factor: t_split,
            },
            TorusClass {
                label: "inert",
                val_offset: 0,
                unit_is_residue: false,
                epsilon: u0.clone(),
                kappa: &two * &vol_inert / &t_inert,
                volume: vol_inert,
                torus_factor: t_inert,
            },
            TorusClass {
                label: "ramified",
                val_offset: 1,
                unit_is_residue: true,
                epsilon: pq.clone(),
                kappa: &two * &vol_ram / &t_ram,
                volume: vol_ram.clone(),
                torus_factor: t_ram.clone(),
            },
            TorusClass {
                label: "ramified-twist",
                val_offset: 1,
                unit_is_residue: false,
                epsilon: &pq * &u0,
                kappa: &two * &vol_ram / &t_ram,
                volume: vol_ram,
                torus_factor: t_ram,
            },
        ];
        WeylMeasures { p, classes }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Order: split, inert, ramified, ramified-twist.
    pub fn classes(&self) -> &[TorusClass] {
        &self.classes
    }

    pub fn total_volume(&self) -> Q {
        self.classes.iter().map(|c| c.volume.clone()).sum()
    }
}

/// Counts of coordinate triples mod p^N, classified by the torus type of
/// η = x² + yz when the residue already decides it (η ≢ 0 mod p^N pins the
/// valuation and the unit part mod p).  `decided` follows the order of
/// [`WeylMeasures::classes`]; `undecided` counts the residues with
/// η ≡ 0 mod p^N, whose lifts can land anywhere.
#[derive(Clone, Debug)]
pub struct ResidueClassMasses {
    pub p: u64,
    pub exponent: u32,
    pub decided: [u64; 4],
    pub undecided: u64,
}

impl ResidueClassMasses {
    pub fn total(&self) -> u64 {
        self.decided.iter().sum::<u64>() + self.undecided
    }
}

/// Enumerate all p^{3N} coordinate triples mod p^N and tally the decided
/// torus classes.  Exhausts 531441 triples at (p, N) = (3, 4).
pub fn residue_class_masses(p: u64, exponent: u32) -> ResidueClassMasses {
    assert!(is_odd_prime(p));
    assert!(exponent >= 1);
    let modulus = p.pow(exponent);
    let mut residue = vec![false; p as usize];
    for w in 1..p {
        residue[((w * w) % p) as usize] = true;
    }
    let mut decided = [0u64; 4];
    let mut undecided = 0u64;
    for x in 0..modulus {
        let xx = (x * x) % modulus;
        for y in 0..modulus {
            for z in 0..modulus {
                let eta = (xx + y * z) % modulus;
                if eta == 0 {
                    undecided += 1;
                    continue;
                }
                let mut unit = eta;
                let mut v = 0usize;
                while unit % p == 0 {
                    unit /= p;
                    v += 1;
                }
                let idx = 2 * (v % 2) + usize::from(!residue[(unit % p) as usize]);
                decided[idx] += 1;
            }
        }
    }
    ResidueClassMasses {
        p,
        exponent,
        decided,
        undecided,
    }
}

/// Outcome of the depth-truncated slicing identity: `lhs` is the Haar
/// integral of f, `rhs` the class-and-shell sum through shell index
/// `depth`, and `tail` a certified bound on the discarded shells.
#[derive(Clone, Debug)]
pub struct WeylCheck {
    pub lhs: Q,
    pub rhs: Q,
    pub tail: Q,
    pub depth: i64,
}

impl WeylCheck {
    pub fn holds(&self) -> bool {
        (&self.lhs - &self.rhs).abs() <= self.tail
    }
}

/// Compare ∫f against the truncated slice sum Σ (κ/2) p^{−2k}(1−1/p) O(·,f).
///
/// Scaled-lattice indicators use the closed orbital values per shell; any
/// other cell function is averaged over unit residues of the shell at
/// increasing depth until two consecutive refinements agree (the orbital
/// integral is locally constant in η, so the average stabilizes).  The tail
/// bounds every discarded shell value by [`orbital_integral_bound`].
pub fn weyl_integration_check(f: &CellFunction, depth: i64) -> WeylCheck {
    assert_eq!(f.arity(), 3);
    let p = f.p();
    let lhs = f.integrate();
    if f.is_zero() {
        return WeylCheck {
            lhs,
            rhs: Q::zero(),
            tail: Q::zero(),
            depth,
        };
    }
    // Below this valuation no point of supp f can sit on the orbit, so the
    // shells vanish identically: val(x² + yz) ≥ min(2 val x, val y + val z).
    let floor_x = f.coord_min_val(0).unwrap();
    let v_f = (2 * floor_x).min(f.coord_min_val(1).unwrap() + f.coord_min_val(2).unwrap());

    let measures = WeylMeasures::solve(p);
    let profile = lattice_profile(f);
    let bound = orbital_integral_bound(f);
    let shell_density = Q::one() - p_pow(p, -1);

    let mut rhs = Q::zero();
    let mut tail = Q::zero();
    for class in measures.classes() {
        let k_min = (v_f - class.val_offset + 1).div_euclid(2);
        let half_kappa = class.kappa() / qi(2);
        for k in k_min..=depth {
            let v = class.val_offset + 2 * k;
            let value = match &profile {
                Some((c, j)) => c * p_pow(p, -j) * class.lattice_orbital_at(p, v - 2 * j),
                None => stable_shell_average(f, class, k),
            };
            rhs += &half_kappa * p_pow(p, -2 * k) * &shell_density * value;
        }
        let start = (depth + 1).max(k_min);
        tail += &half_kappa * &shell_density * &bound * tail_geom(p * p, start);
    }
    WeylCheck {
        lhs,
        rhs,
        tail,
        depth,
    }
}

/// Average O(η, f) over η in the class's shell k, refining the unit-residue
/// grid until two consecutive depths agree.
fn stable_shell_average(f: &CellFunction, class: &TorusClass, k: i64) -> Q {
    const CAP: u32 = 4;
    let mut prev: Option<Q> = None;
    for m in 1..=CAP {
        let cur = residue_grid_average(f, class, k, m);
        if prev.as_ref() == Some(&cur) {
            return cur;
        }
        prev = Some(cur);
    }
    panic!(
        "shell average did not stabilize by residue depth {} (class {}, shell {})",
        CAP,
        class.label(),
        k
    );
}

fn residue_grid_average(f: &CellFunction, class: &TorusClass, k: i64, m: u32) -> Q {
    let p = f.p();
    let v = class.val_offset + 2 * k;
    let scale = p_pow(p, v);
    let mut total = Q::zero();
    let mut count = 0u64;
    for u in 1..p.pow(m) {
        if u % p == 0 {
            continue;
        }
        let is_residue = SquareClass::of(p, &qi(u as i64)) == SquareClass::Square;
        if is_residue != class.unit_is_residue {
            continue;
        }
        let eta = qi(u as i64) * &scale;
        total += orbital(f, &eta);
        count += 1;
    }
    total / qi(count as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::cell::{Ball, Cell};
    use crate::sl2::phi0;

    #[test]
    fn measure_constants_at_small_primes() {
        let m = WeylMeasures::solve(3);
        assert_eq!(m.total_volume(), qi(1));
        let kappas: Vec<Q> = m.classes().iter().map(|c| c.kappa().clone()).collect();
        assert_eq!(kappas, vec![q(4, 3), q(4, 3), q(4, 9), q(4, 9)]);
        let vols: Vec<Q> = m.classes().iter().map(|c| c.volume().clone()).collect();
        assert_eq!(vols, vec![q(1, 2), q(7, 26), q(3, 26), q(3, 26)]);
        assert_eq!(m.classes()[0].torus_factor(), &q(3, 4));
        assert_eq!(m.classes()[1].torus_factor(), &q(21, 52));
        assert_eq!(m.classes()[2].torus_factor(), &q(27, 52));

        let m = WeylMeasures::solve(5);
        assert_eq!(m.total_volume(), qi(1));
        let kappas: Vec<Q> = m.classes().iter().map(|c| c.kappa().clone()).collect();
        assert_eq!(kappas, vec![q(6, 5), q(6, 5), q(6, 25), q(6, 25)]);
    }

    #[test]
    fn torus_factors_agree_with_the_orbital_shell_sums() {
        for p in [3u64, 5] {
            let m = WeylMeasures::solve(p);
            let density = Q::one() - p_pow(p, -1);
            for class in m.classes() {
                let depth = 6;
                let partial: Q = (0..=depth)
                    .map(|k| {
                        p_pow(p, -2 * k) * &density * phi0(p, &(class.epsilon() * p_pow(p, 2 * k)))
                    })
                    .sum();
                let remainder = &density * tail_geom(p * p, depth + 1);
                assert!(partial <= *class.torus_factor());
                assert!(*class.torus_factor() <= partial + remainder);
            }
        }
    }

    #[test]
    fn residue_counts_sandwich_the_class_volumes() {
        for (p, exponent) in [(3u64, 4u32), (5, 3)] {
            let masses = residue_class_masses(p, exponent);
            assert_eq!(masses.total(), p.pow(3 * exponent));
            let m = WeylMeasures::solve(p);
            let scale = p_pow(p, 3 * exponent as i64);
            for (i, class) in m.classes().iter().enumerate() {
                let exact = class.volume() * &scale;
                assert!(qi(masses.decided[i] as i64) <= exact, "{}", class.label());
                assert!(
                    exact <= qi((masses.decided[i] + masses.undecided) as i64),
                    "{}",
                    class.label()
                );
            }
        }
    }

    #[test]
    fn unit_lattice_slices_to_full_volume() {
        let f = CellFunction::lattice(3, 3, 0);
        let mut prev = Q::zero();
        for depth in 0..=4 {
            let check = weyl_integration_check(&f, depth);
            assert_eq!(check.lhs, qi(1));
            assert!(check.rhs >= prev, "partial sums increase");
            assert!(check.rhs < check.lhs);
            assert!(check.holds(), "depth {depth}");
            prev = check.rhs;
        }
        let check = weyl_integration_check(&f, 3);
        assert_eq!(check.tail, q(4, 6561));
    }

    #[test]
    fn scaled_lattices_slice_exactly() {
        for (p, j) in [(3u64, 1i64), (3, -1), (5, 1)] {
            let f = CellFunction::lattice(p, 3, j);
            let check = weyl_integration_check(&f, 3 + j.abs());
            assert_eq!(check.lhs, p_pow(p, -3 * j));
            assert!(check.holds(), "p = {p}, j = {j}");
        }
    }

    #[test]
    fn general_cell_functions_slice_within_the_tail() {
        let p = 3;
        let shifted = Cell::new(vec![
            Ball::new(p, &qi(1), 1),
            Ball::lattice(0),
            Ball::lattice(1),
        ]);
        let f = CellFunction::indicator(p, shifted)
            .scale(&q(3, 2))
            .add_disjoint(&CellFunction::lattice(p, 3, 1))
            .unwrap();
        let check = weyl_integration_check(&f, 3);
        assert_eq!(check.lhs, f.integrate());
        assert!(check.holds());
        // The discarded shells genuinely matter at this depth: the bound is
        // small but the partial sum is not yet the exact value.
        assert!(check.rhs != check.lhs);
        assert!(check.tail < q(1, 27));
    }
}
