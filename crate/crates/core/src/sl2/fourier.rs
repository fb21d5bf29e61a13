//! Fourier transforms: exact closed forms on the line, truncation tails,
//! the transform on the 3-space, and the invariant weighted value.
//!
//! One-variable transforms are taken against ψ(xy) with the self-dual
//! measure, and the closed forms below are functions of e = val(x) alone.
//! The 3-space transform pairs X = (x, y, z) with Ξ = (ξ₁, ξ₂, ξ₃) through
//! the trace form ⟨X, Ξ⟩ = 2xξ₁ + yξ₃ + zξ₂, under which the unit lattice
//! is self-dual for odd p.
//!
//! The invariant weighted value subtracts from the weighted orbital
//! integral the transform of its own torus restriction; on the split torus
//! that restriction is val(y) − 1/(p−1) + |y|/(p−1) on Z_p, so the
//! correction term is assembled from the three line transforms.

use num::{One, Zero};

use super::kappa::KappaSet;
use super::weighted::borel_descent_with;
use super::SplitClass;
use crate::padic::cell::{Ball, CellFunction};
use crate::padic::cyclo::{psi, Cyc};
use crate::padic::val;
use crate::q::{p_pow, q, qi, Q};

/// Σ_{m ≥ max(K+1, −e)} p^{−m}: the transform mass of val(·) on Z_p beyond
/// truncation depth K, at val(x) = e.  Depth 0 is the full transform.
pub fn ft_val_tail(p: u64, depth: i64, e: i64) -> Q {
    assert!(depth >= 0);
    let start = (depth + 1).max(-e);
    p_pow(p, -start) / (Q::one() - p_pow(p, -1))
}

/// ∫_{Z_p} val(y) ψ(xy) dy at val(x) = e: p^{−1}/(1−p^{−1}) for e ≥ 0 and
/// p^{e}/(1−p^{−1}) for e ≤ −1.
pub fn ft_val_at(p: u64, e: i64) -> Q {
    ft_val_tail(p, 0, e)
}

/// ∫_{Z_p} ψ(xy) dy at val(x) = e.
pub fn ft_ind_at(_p: u64, e: i64) -> Q {
    if e >= 0 {
        Q::one()
    } else {
        Q::zero()
    }
}

fn geom_sq(p: u64, m: i64) -> Q {
    // Σ_{v ≥ m} p^{−2v}
    p_pow(p, -2 * m) / (Q::one() - p_pow(p, -2))
}

/// The transform mass of |·| on Z_p carried by the shells val ≥ depth, at
/// val(x) = e.  Depth 0 is the full transform.
pub fn ft_abs_tail(p: u64, depth: i64, e: i64) -> Q {
    assert!(depth >= 0);
    geom_sq(p, depth.max(-e)) - geom_sq(p, depth.max(-e - 1)) * p_pow(p, -1)
}

/// ∫_{Z_p} |y| ψ(xy) dy at val(x) = e: p/(p+1) for e ≥ 0 and
/// −p^{2e+2}/(p+1) for e ≤ −1.
pub fn ft_abs_at(p: u64, e: i64) -> Q {
    ft_abs_tail(p, 0, e)
}

/// Transform of val(y) − 1/(p−1) + |y|/(p−1) on Z_p, at val(x) = e — the
/// correction kernel of the invariant weighted value.
pub fn hhat_at(p: u64, e: i64) -> Q {
    let pm1 = qi(p as i64 - 1);
    ft_val_at(p, e) - ft_ind_at(p, e) / &pm1 + ft_abs_at(p, e) / &pm1
}

/// The invariant weighted value on the split orbit with val(η) = v (even).
pub fn invariant_weighted_closed_at_val(p: u64, v: i64) -> Q {
    assert!(v % 2 == 0, "split orbits have even valuation");
    let pm1 = qi(p as i64 - 1);
    if v >= 0 {
        q(v, 2) + p_pow(p, -v / 2) / &pm1
            - q(2 * p as i64 + 1, (p * p - 1) as i64)
    } else {
        p_pow(p, v) / (Q::one() - p_pow(p, -2))
            - p_pow(p, v / 2) / (Q::one() - p_pow(p, -1))
    }
}

/// The invariant weighted value at a split η, closed form.
pub fn invariant_weighted_closed(p: u64, eta: &Q) -> Q {
    let orbit = super::classify(p, eta);
    assert_eq!(orbit.class(), SplitClass::Split);
    invariant_weighted_closed_at_val(p, orbit.val())
}

/// The invariant weighted value built from its definition: the weighted
/// orbital integral minus the transform of the torus restriction.
pub fn invariant_weighted_constructed(p: u64, eta: &Q) -> Q {
    let orbit = super::classify(p, eta);
    assert_eq!(orbit.class(), SplitClass::Split);
    let weighted = if orbit.val() >= 0 {
        super::weighted_closed(p, eta)
    } else {
        Q::zero()
    };
    weighted - hhat_at(p, orbit.half_val())
}

/// Invariant weighted value against the scaled lattice I_{p^j sl₂(Z_p)}.
pub fn invariant_weighted_scaled_at_val(p: u64, v: i64, j: i64) -> Q {
    p_pow(p, -j) * invariant_weighted_closed_at_val(p, v - 2 * j)
}

/// ∫_B ψ(a t) dt for a one-dimensional ball: ψ(a·center) p^{−level} when
/// val(a) ≥ −level, zero otherwise.
pub fn ball_char_integral(p: u64, b: &Ball, a: &Q) -> Cyc {
    if !val(p, a).at_least(-b.level()) {
        return Cyc::zero(p);
    }
    psi(p, &(a * b.center())).scale(&p_pow(p, -b.level()))
}

/// f̂(Ξ) = ∫ f(X) ψ(⟨X, Ξ⟩) dX, exactly, as a cyclotomic value.
pub fn ft3_eval(f: &CellFunction, xi: &[Q; 3]) -> Cyc {
    let p = f.p();
    let coeff = [qi(2) * &xi[0], xi[2].clone(), xi[1].clone()];
    let mut total = Cyc::zero(p);
    for (cell, v) in f.cells() {
        let mut term = Cyc::rational(p, v.clone());
        for i in 0..3 {
            term = term.mul(&ball_char_integral(p, &cell.balls[i], &coeff[i]));
            if term.is_zero() {
                break;
            }
        }
        total = total.add(&term);
    }
    total
}

/// If f = c·I_{p^j sl₂(Z_p)}, its (value, level).
pub fn lattice_profile(f: &CellFunction) -> Option<(Q, i64)> {
    let p = f.p();
    let cells = f.cells();
    if cells.len() != 1 {
        return None;
    }
    let (cell, v) = &cells[0];
    let j = cell.balls[0].level();
    for b in &cell.balls {
        if b.level() != j || !b.contains_point(p, &Q::zero()) {
            return None;
        }
    }
    Some((v.clone(), j))
}

/// The transform of a scaled lattice function, again a cell function:
/// (c·I_{p^j})^ = c p^{−3j} I_{p^{−j}}.
pub fn lattice_fourier(f: &CellFunction) -> CellFunction {
    let (c, j) = lattice_profile(f).expect("only lattice-scaled functions transform to cells");
    CellFunction::lattice(f.p(), 3, -j).scale(&(c * p_pow(f.p(), -3 * j)))
}

/// Parabolic descent of f̂ to the diagonal, evaluated at diagonal entry a.
/// Per conjugation table the transform is integrated along an affine line:
/// the phase splits off exactly and the constraint set is a ball, so each
/// table contributes a closed cyclotomic term.
pub fn fourier_then_descent(f: &CellFunction, a: &Q, kappa: &KappaSet) -> Cyc {
    let p = f.p();
    assert_eq!(kappa.p(), p);
    assert!(kappa.level() >= super::weighted::required_level(f));
    let mut total = Cyc::zero(p);
    for t in kappa.tables() {
        let h = t.col_h();
        let e = t.col_e();
        // Pairing coefficients of Ξ(n) = a·colH + n·colE, in cell order.
        let alpha = [qi(2) * a * &h[0], a * &h[2], a * &h[1]];
        let beta = [qi(2) * &e[0], e[2].clone(), e[1].clone()];
        let mut table_sum = Cyc::zero(p);
        'cells: for (cell, v) in f.cells() {
            let mut window: Option<Ball> = None;
            let mut phase_const = Q::zero();
            let mut phase_lin = Q::zero();
            let mut scale = v.clone();
            for i in 0..3 {
                let b = &cell.balls[i];
                phase_const += &alpha[i] * b.center();
                phase_lin += &beta[i] * b.center();
                scale *= p_pow(p, -b.level());
                if beta[i].is_zero() {
                    if !val(p, &alpha[i]).at_least(-b.level()) {
                        continue 'cells;
                    }
                    continue;
                }
                let vb = val(p, &beta[i]).expect_finite();
                let cond = Ball::new(p, &(-&alpha[i] / &beta[i]), -b.level() - vb);
                window = Some(match window {
                    None => cond,
                    Some(prev) => match prev.intersect(p, &cond) {
                        Some(w) => w,
                        None => continue 'cells,
                    },
                });
            }
            let w = window.expect("the unipotent image column always has a unit entry");
            let term = psi(p, &phase_const)
                .mul(&ball_char_integral(p, &w, &phase_lin))
                .scale(&scale);
            table_sum = table_sum.add(&term);
        }
        total = total.add(&table_sum.scale(&qi(t.mult() as i64)));
    }
    total.scale(&(Q::one() / qi(kappa.order() as i64)))
}

/// Transform of the parabolic descent of f, evaluated at diagonal entry a:
/// the descent is constant on balls at the level of f and supported where
/// the torus variable clears the support floor, so the transform is a
/// finite sum of exact ball integrals against ψ(2at).
pub fn descent_then_fourier(f: &CellFunction, a: &Q, kappa: &KappaSet) -> Cyc {
    let p = f.p();
    let top = f.max_level().unwrap_or(0);
    let floor = (0..3)
        .filter_map(|i| f.coord_min_val(i))
        .min()
        .unwrap_or(0);
    let two_a = qi(2) * a;
    let mut total = Cyc::zero(p);
    let push = |center: &Q, total: &mut Cyc| {
        let b = Ball::new(p, center, top);
        let value = borel_descent_with(f, center, kappa);
        if !value.is_zero() {
            *total = total.add(&ball_char_integral(p, &b, &two_a).scale(&value));
        }
    };
    for s in floor..top {
        let step = p.pow((top - s) as u32) as i64;
        for d in 1..step {
            if d as u64 % p == 0 {
                continue;
            }
            push(&(qi(d) * p_pow(p, s)), &mut total);
        }
    }
    push(&Q::zero(), &mut total);
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::cell::{
        abs_indicator_truncated, val_indicator_truncated, Cell,
    };
    use crate::padic::cyclo::character_sum;

    #[test]
    fn truncated_character_sums_match_closed_forms() {
        for p in [3u64, 5] {
            for e in -6..=6i64 {
                // Two different units in front of p^e.
                for u in [qi(1), qi(2)] {
                    let x = u * p_pow(p, e);
                    for depth in 1..=6i64 {
                        let lhs = character_sum(&val_indicator_truncated(p, depth), &x)
                            .as_rational()
                            .expect("full-shell sums are rational");
                        assert_eq!(
                            lhs,
                            ft_val_at(p, e) - ft_val_tail(p, depth, e),
                            "val p={p} e={e} depth={depth}"
                        );
                        let lhs = character_sum(&abs_indicator_truncated(p, depth), &x)
                            .as_rational()
                            .expect("full-shell sums are rational");
                        assert_eq!(
                            lhs,
                            ft_abs_at(p, e) - ft_abs_tail(p, depth, e),
                            "abs p={p} e={e} depth={depth}"
                        );
                    }
                    let lhs = character_sum(&CellFunction::lattice(p, 1, 0), &x)
                        .as_rational()
                        .unwrap();
                    assert_eq!(lhs, ft_ind_at(p, e), "ind p={p} e={e}");
                }
            }
        }
    }

    #[test]
    fn correction_kernel_frozen_values() {
        assert_eq!(hhat_at(3, 0), q(3, 8));
        assert_eq!(hhat_at(3, 5), q(3, 8));
        assert_eq!(hhat_at(3, -1), q(3, 8));
        assert_eq!(hhat_at(3, -2), q(11, 72));
    }

    #[test]
    fn invariant_value_constructed_equals_closed() {
        for eta in [qi(1), qi(4), qi(9), qi(36), qi(81), q(1, 9), q(4, 9), q(1, 81)] {
            assert_eq!(
                invariant_weighted_constructed(3, &eta),
                invariant_weighted_closed(3, &eta),
                "eta={eta}"
            );
        }
        for eta in [qi(1), qi(25), q(1, 25)] {
            assert_eq!(
                invariant_weighted_constructed(5, &eta),
                invariant_weighted_closed(5, &eta),
                "eta={eta}"
            );
        }
    }

    #[test]
    fn invariant_value_frozen_points() {
        assert_eq!(invariant_weighted_closed(3, &qi(1)), q(-3, 8));
        assert_eq!(invariant_weighted_closed(3, &q(1, 9)), q(-3, 8));
        assert_eq!(invariant_weighted_closed(3, &qi(9)), q(7, 24));
        assert_eq!(invariant_weighted_scaled_at_val(3, 2, 1), q(-1, 8));
    }

    #[test]
    fn lattice_transform_round_trip() {
        let f = CellFunction::lattice(3, 3, 1).scale(&q(2, 7));
        let fhat = lattice_fourier(&f);
        assert_eq!(lattice_profile(&fhat), Some((q(2, 7) * q(1, 27), -1)));
        let back = lattice_fourier(&fhat);
        assert_eq!(lattice_profile(&back), lattice_profile(&f));
    }

    #[test]
    fn three_space_transform_matches_lattice_rule() {
        for j in [-1i64, 0, 1] {
            let f = CellFunction::lattice(3, 3, j).scale(&q(5, 2));
            let fhat = lattice_fourier(&f);
            for xi in [
                [qi(0), qi(0), qi(0)],
                [qi(1), qi(2), qi(3)],
                [q(1, 3), qi(1), qi(1)],
                [q(1, 9), q(1, 3), q(2, 3)],
                [qi(9), q(2, 9), qi(1)],
            ] {
                let direct = ft3_eval(&f, &xi)
                    .as_rational()
                    .expect("lattice transforms are rational");
                assert_eq!(direct, fhat.eval(&xi), "j={j} xi={xi:?}");
            }
        }
    }

    #[test]
    fn ball_integrals_oscillate_and_vanish() {
        let b = Ball::new(3, &qi(1), 1);
        let v = ball_char_integral(3, &b, &q(1, 3));
        assert!(!v.is_rational());
        assert_eq!(v.level(), 1);
        assert!(ball_char_integral(3, &b, &q(1, 9)).is_zero());
        // a in the dual of the ball: plain measure.
        assert_eq!(
            ball_char_integral(3, &b, &qi(3)).as_rational(),
            Some(q(1, 3))
        );
    }

    #[test]
    fn transform_commutes_with_descent() {
        // One-cell function, mixed levels, support floor at valuation −1.
        let cell = Cell::new(vec![
            Ball::new(3, &q(1, 3), 1),
            Ball::lattice(0),
            Ball::new(3, &qi(2), 2),
        ]);
        let f = CellFunction::indicator(3, cell);
        let kappa = KappaSet::shared(3, 3);
        for a in [qi(1), q(1, 3)] {
            let lhs = fourier_then_descent(&f, &a, &kappa);
            let rhs = descent_then_fourier(&f, &a, &kappa);
            assert!(lhs.sub(&rhs).is_zero(), "a={a}");
        }
    }
}
