//! Weighted orbital integrals on the split torus, by exact K-averaging.
//!
//! For split η with root r, the orbit points reached from the diagonal
//! representative through the unipotent direction are X(u) = (r, 2ur, 0),
//! and the weight is −val(u) on |u| > 1, zero on Z_p.  Substituting
//! n = 2ur turns the weighted integral into
//!
//!   J(η, f) = avg_{κ∈K} ∫_{Q_p} f(κ⁻¹ (r, n, 0) κ) (c₀ − val n)⁺ dn,
//!
//! with c₀ = val(η)/2; the |η|^{1/2} normalization cancels against the
//! substitution Jacobian.  Dropping the weight and letting the diagonal
//! entry be arbitrary gives the parabolic descent of f to the torus.  Both
//! are evaluated exactly: per conjugation table the argument is affine in
//! n, each cell imposes up to three ball conditions on n, and the weight
//! mass of the resulting ball is a closed form.

use std::sync::Arc;

use num::Zero;

use super::kappa::{AdTable, KappaSet};
use super::SplitClass;
use crate::padic::cell::{Ball, CellFunction};
use crate::padic::val;
use crate::q::{p_pow, qi, Q};

/// Weight along the unipotent line in the n-chart.
#[derive(Clone, Copy, Debug)]
pub enum WeightProfile {
    /// Plain measure — parabolic descent.
    Flat,
    /// (c₀ − val n)⁺ — unipotent distance transported to the n-chart.
    Truncated { c0: i64 },
}

/// Σ_{s=ℓ}^{c₀−1} (c₀ − s) p^{−s} (1 − 1/p): the truncated weight mass of
/// the ball p^ℓ Z_p.  Empty (zero) when ℓ ≥ c₀.
pub fn truncated_shell_sum(p: u64, l: i64, c0: i64) -> Q {
    let shell = Q::one() - p_pow(p, -1);
    let mut acc = Q::zero();
    for s in l..c0 {
        acc += qi(c0 - s) * p_pow(p, -s) * &shell;
    }
    acc
}

use num::One;

fn weight_mass(p: u64, b: &Ball, w: WeightProfile) -> Q {
    match w {
        WeightProfile::Flat => b.measure(p),
        WeightProfile::Truncated { c0 } => {
            if b.contains_point(p, &Q::zero()) {
                truncated_shell_sum(p, b.level(), c0)
            } else {
                let s = val(p, b.center()).expect_finite();
                if s >= c0 {
                    Q::zero()
                } else {
                    qi(c0 - s) * b.measure(p)
                }
            }
        }
    }
}

/// ∫ f(a·colH + n·colE) w(n) dn for one conjugation table: the line through
/// the diagonal point a in the unipotent direction, pushed through κ.
fn line_integral(f: &CellFunction, a: &Q, t: &AdTable, w: WeightProfile) -> Q {
    let p = f.p();
    let mut total = Q::zero();
    'cells: for (cell, v) in f.cells() {
        let mut window: Option<Ball> = None;
        for i in 0..3 {
            let alpha = a * &t.col_h()[i];
            let beta = &t.col_e()[i];
            let bi = &cell.balls[i];
            if beta.is_zero() {
                if !bi.contains_point(p, &alpha) {
                    continue 'cells;
                }
                continue;
            }
            let vb = val(p, beta).expect_finite();
            let center = (bi.center() - &alpha) / beta;
            let cond = Ball::new(p, &center, bi.level() - vb);
            window = Some(match window {
                None => cond,
                Some(prev) => match prev.intersect(p, &cond) {
                    Some(b) => b,
                    None => continue 'cells,
                },
            });
        }
        let b = window.expect("the unipotent image column always has a unit entry");
        total += v * weight_mass(p, &b, w);
    }
    total
}

/// The congruence level at which the K-average of f along adjoint orbits
/// becomes a finite group average, exactly.
pub fn required_level(f: &CellFunction) -> u32 {
    let top = f.max_level().unwrap_or(0);
    let floor = (0..3)
        .filter_map(|i| f.coord_min_val(i))
        .min()
        .unwrap_or(0);
    (top - floor).max(1) as u32
}

/// The cached conjugation tables adequate for f.
pub fn kappa_for(f: &CellFunction) -> Arc<KappaSet> {
    KappaSet::shared(f.p(), required_level(f))
}

/// Weighted orbital integral J(η, f) for split η, by brute K-averaging.
pub fn weighted_orbital_bruteforce(f: &CellFunction, eta: &Q) -> Q {
    weighted_orbital_with(f, eta, &kappa_for(f))
}

/// As `weighted_orbital_bruteforce` with explicit conjugation tables.
pub fn weighted_orbital_with(f: &CellFunction, eta: &Q, kappa: &KappaSet) -> Q {
    assert_eq!(f.arity(), 3);
    assert_eq!(kappa.p(), f.p(), "conjugation tables for the wrong prime");
    assert!(
        kappa.level() >= required_level(f),
        "congruence level {} too coarse for this test function (needs {})",
        kappa.level(),
        required_level(f)
    );
    if f.is_zero() {
        return Q::zero();
    }
    let orbit = super::classify(f.p(), eta);
    assert_eq!(
        orbit.class(),
        SplitClass::Split,
        "the unipotent-weighted integral lives on split orbits"
    );
    let c0 = orbit.half_val();
    let r = orbit.sqrt_approx(hensel_slack(f, c0));
    kappa.average(|t| line_integral(f, &r, t, WeightProfile::Truncated { c0 }))
}

/// Shell-sum evaluation for the scaled lattice test function I_{p^j sl₂(Z_p)}:
/// every conjugation fixes the lattice, so the K-average is a single weight
/// sum.  Independent of the table machinery.
pub fn weighted_orbital_shells(p: u64, eta: &Q, j: i64) -> Q {
    let orbit = super::classify(p, eta);
    assert_eq!(orbit.class(), SplitClass::Split);
    truncated_shell_sum(p, j, orbit.half_val())
}

/// Parabolic descent of f to the diagonal, evaluated at the point with
/// diagonal entry a: avg_κ ∫ f(κ⁻¹ (a, n, 0) κ) dn.
pub fn borel_descent_value(f: &CellFunction, a: &Q) -> Q {
    borel_descent_with(f, a, &kappa_for(f))
}

/// As `borel_descent_value` with explicit conjugation tables.
pub fn borel_descent_with(f: &CellFunction, a: &Q, kappa: &KappaSet) -> Q {
    assert_eq!(f.arity(), 3);
    assert_eq!(kappa.p(), f.p());
    assert!(kappa.level() >= required_level(f));
    if f.is_zero() {
        return Q::zero();
    }
    kappa.average(|t| line_integral(f, a, t, WeightProfile::Flat))
}

fn hensel_slack(f: &CellFunction, c0: i64) -> u32 {
    let top = f.max_level().unwrap_or(0).abs();
    let floor = (0..3)
        .filter_map(|i| f.coord_min_val(i))
        .min()
        .unwrap_or(0)
        .abs();
    (2 * (top + floor + c0.abs()) + 64) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::cell::Cell;
    use crate::q::q;
    use crate::sl2::brute::{ad_diag, ad_unipotent_lower, ad_unipotent_upper, ad_weyl, orbital};
    use crate::sl2::{weighted_closed, weighted_closed_scaled};

    fn lat(p: u64, j: i64) -> CellFunction {
        CellFunction::lattice(p, 3, j)
    }

    fn asymmetric(p: u64) -> CellFunction {
        let cell_a = Cell::new(vec![
            Ball::new(p, &qi(1), 2),
            Ball::new(p, &qi(p as i64), 2),
            Ball::lattice(1),
        ]);
        let cell_b = Cell::new(vec![
            Ball::lattice(1),
            Ball::lattice(-1),
            Ball::new(p, &qi(2), 1),
        ]);
        CellFunction::indicator(p, cell_a)
            .add_disjoint(&CellFunction::indicator(p, cell_b).scale(&q(2, 5)))
            .unwrap()
    }

    #[test]
    fn shell_sums_match_the_closed_form() {
        for p in [3u64, 5] {
            for eta in [qi(1), qi(4), qi((p * p) as i64), qi((4 * p * p) as i64), qi((p * p * p * p) as i64)] {
                assert_eq!(
                    weighted_orbital_shells(p, &eta, 0),
                    weighted_closed(p, &eta),
                    "p={p} eta={eta}"
                );
            }
            // Scaled lattices against the scaled closed form.
            for j in [-1i64, 0, 1, 2] {
                for eta in [qi(1), qi((p * p) as i64), qi((p * p * p * p) as i64)] {
                    assert_eq!(
                        weighted_orbital_shells(p, &eta, j),
                        weighted_closed_scaled(p, &eta, j),
                        "p={p} eta={eta} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn brute_average_matches_the_closed_form() {
        for (eta, j) in [
            (qi(1), 0),
            (qi(9), 0),
            (qi(81), 0),
            (qi(63), 0), // unit part is a nonsquare integer yet a 3-adic square
            (qi(9), 1),
            (qi(81), 1),
            (qi(1), -1),
        ] {
            assert_eq!(
                weighted_orbital_bruteforce(&lat(3, j), &eta),
                weighted_closed_scaled(3, &eta, j),
                "eta={eta} j={j}"
            );
        }
        assert_eq!(
            weighted_orbital_bruteforce(&lat(5, 0), &qi(25)),
            weighted_closed(5, &qi(25))
        );
    }

    #[test]
    fn vanishes_off_the_lattice_window() {
        assert_eq!(weighted_orbital_bruteforce(&lat(3, 0), &q(1, 9)), qi(0));
        assert_eq!(weighted_orbital_bruteforce(&lat(3, 1), &qi(1)), qi(0));
    }

    #[test]
    fn invariant_under_compact_conjugation() {
        // Reflection and unit-diagonal conjugation permute cells without
        // refining them; a function whose support floor sits at valuation 0
        // keeps the congruence level at 2.
        let cell_a = Cell::new(vec![
            Ball::new(3, &qi(1), 2),
            Ball::new(3, &qi(3), 2),
            Ball::lattice(1),
        ]);
        let cell_b = Cell::new(vec![
            Ball::lattice(1),
            Ball::lattice(0),
            Ball::new(3, &qi(2), 1),
        ]);
        let f = CellFunction::indicator(3, cell_a)
            .add_disjoint(&CellFunction::indicator(3, cell_b).scale(&q(2, 5)))
            .unwrap();
        for eta in [qi(9), qi(36)] {
            let base = weighted_orbital_bruteforce(&f, &eta);
            for g in [ad_weyl(&f), ad_diag(&f, &qi(2))] {
                assert_eq!(weighted_orbital_bruteforce(&g, &eta), base, "eta={eta}");
            }
        }

        // Unipotent conjugation refines cells to a common level, so give it
        // a level-one function (congruence level 1, 24 tables).
        let g1 = Cell::new(vec![
            Ball::new(3, &qi(1), 1),
            Ball::lattice(1),
            Ball::lattice(0),
        ]);
        let g2 = Cell::new(vec![
            Ball::lattice(0),
            Ball::new(3, &qi(2), 1),
            Ball::lattice(1),
        ]);
        let g = CellFunction::indicator(3, g1)
            .add_disjoint(&CellFunction::indicator(3, g2).scale(&q(3, 7)))
            .unwrap();
        for eta in [qi(9), qi(36)] {
            let base = weighted_orbital_bruteforce(&g, &eta);
            assert_eq!(
                weighted_orbital_bruteforce(&ad_unipotent_upper(&g, &qi(1)), &eta),
                base
            );
            assert_eq!(
                weighted_orbital_bruteforce(&ad_unipotent_lower(&g, &qi(2)), &eta),
                base
            );
            assert_eq!(
                weighted_orbital_bruteforce(&ad_weyl(&g), &eta),
                base
            );
        }
    }

    #[test]
    fn descent_reproduces_plain_orbital_integrals() {
        for f in [lat(3, 0), lat(3, 1), asymmetric(3)] {
            for a in [qi(1), qi(2), qi(3), q(1, 3)] {
                assert_eq!(
                    borel_descent_value(&f, &a),
                    orbital(&f, &(&a * &a)),
                    "a={a}"
                );
            }
        }
    }

    #[test]
    fn descent_at_the_origin_of_the_torus() {
        assert_eq!(borel_descent_value(&lat(3, 0), &Q::zero()), qi(1));
        assert_eq!(borel_descent_value(&lat(3, 1), &Q::zero()), q(1, 3));
    }

    #[test]
    fn weight_profile_masses() {
        // Lattice ball: the shell sum.  Off-center ball: single-shell mass.
        assert_eq!(truncated_shell_sum(3, 0, 1), q(2, 3));
        assert_eq!(truncated_shell_sum(3, 0, 2), q(14, 9));
        assert_eq!(truncated_shell_sum(3, 1, 1), qi(0));
        let off = Ball::new(3, &q(1, 3), 1);
        assert_eq!(
            weight_mass(3, &off, WeightProfile::Truncated { c0: 1 }),
            qi(2) * off.measure(3)
        );
    }
}
