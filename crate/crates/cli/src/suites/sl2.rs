//! The sl(2) suites: closed forms of the basic, weighted, and invariant
//! orbital integrals against their brute-force routes, the Fourier
//! truncation identities in cyclotomic arithmetic, and the two truncated
//! integral identities with certified tails.

use std::time::Instant;

use num::traits::One;
use orbitlab::padic::cell::{abs_indicator_truncated, val_indicator_truncated, CellFunction};
use orbitlab::padic::cyclo::character_sum;
use orbitlab::padic::smallest_nonresidue;
use orbitlab::q::{p_pow, q, qi, Q};
use orbitlab::sl2::brute::orbital;
use orbitlab::sl2::fourier::{
    ft_abs_at, ft_abs_tail, ft_ind_at, ft_val_at, ft_val_tail, invariant_weighted_closed,
    invariant_weighted_constructed,
};
use orbitlab::sl2::trace::{local_trace_check, local_trace_totals, QExt};
use orbitlab::sl2::weighted::{borel_descent_value, weighted_orbital_bruteforce};
use orbitlab::sl2::weyl::weyl_integration_check;
use orbitlab::sl2::{classify, phi0 as phi0_closed, weighted_closed};

use crate::{exact, finish, fq, fqext, CheckRecord, RunConfig, Status};

fn unit_lattice(p: u64) -> CellFunction {
    CellFunction::lattice(p, 3, 0)
}

/// Two orbit invariants per valuation: the square unit and the smallest
/// nonresidue, covering every square class as the valuation sweeps parity.
fn class_reps(p: u64, v: i64) -> Vec<Q> {
    let u = smallest_nonresidue(p) as i64;
    vec![p_pow(p, v), qi(u) * p_pow(p, v)]
}

pub(crate) fn phi0(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for &p in &cfg.primes {
        let f = unit_lattice(p);
        for v in -2..=4 {
            for eta in class_reps(p, v) {
                let t = Instant::now();
                let class = classify(p, &eta).class();
                let closed = phi0_closed(p, &eta);
                let brute = orbital(&f, &eta);
                out.push(finish(
                    "phi0",
                    "closed-vs-brute",
                    "the normalized orbital integral of the unit-lattice indicator over the orbit with invariant eta equals its closed form",
                    format!("p={p} eta={eta} class={class:?}"),
                    fq(&closed),
                    fq(&brute),
                    exact(closed == brute),
                    None,
                    t,
                ));
            }
        }
    }
    out
}

pub(crate) fn weighted(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for &p in &cfg.primes {
        let f = unit_lattice(p);
        let p2 = p_pow(p, 2);
        for eta in [Q::one(), qi(4), p2.clone(), Q::one() / &p2] {
            let t = Instant::now();
            let closed = weighted_closed(p, &eta);
            let brute = weighted_orbital_bruteforce(&f, &eta);
            out.push(finish(
                "weighted",
                "closed-vs-brute",
                "the weighted orbital integral of the unit-lattice indicator at a split orbit equals its closed form",
                format!("p={p} eta={eta}"),
                fq(&closed),
                fq(&brute),
                exact(closed == brute),
                None,
                t,
            ));
        }
        // The measure normalization: at eta = 1 the plain integral is
        // exactly 1, reproduced independently through the Borel descent
        // at the torus element with a = 1.
        let t = Instant::now();
        let descent = borel_descent_value(&f, &Q::one());
        let direct = orbital(&f, &Q::one());
        out.push(finish(
            "weighted",
            "normalization",
            "at eta = 1 the plain orbital integral of the unit-lattice indicator is exactly 1, via Borel descent and via the direct sweep",
            format!("p={p} eta=1 a=1"),
            fq(&Q::one()),
            format!("descent={} direct={}", fq(&descent), fq(&direct)),
            exact(descent.is_one() && direct.is_one()),
            None,
            t,
        ));
    }
    out
}

pub(crate) fn fourier(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let max_depth = 6i64;
    for &p in &cfg.primes {
        for e in -6..=6i64 {
            for kernel in ["val", "abs"] {
                let t = Instant::now();
                let closed = match kernel {
                    "val" => ft_val_at(p, e),
                    _ => ft_abs_at(p, e),
                };
                let mut fail: Option<String> = None;
                for depth in 1..=max_depth {
                    let trunc = match kernel {
                        "val" => val_indicator_truncated(p, depth),
                        _ => abs_indicator_truncated(p, depth),
                    };
                    let tail = match kernel {
                        "val" => ft_val_tail(p, depth, e),
                        _ => ft_abs_tail(p, depth, e),
                    };
                    let want = &closed - &tail;
                    for u in [1i64, 2] {
                        let x = qi(u) * p_pow(p, e);
                        let got = character_sum(&trunc, &x).as_rational();
                        if got.as_ref() != Some(&want) && fail.is_none() {
                            fail = Some(format!(
                                "K={depth} u={u}: {}",
                                got.map_or("non-rational".into(), |g| fq(&g))
                            ));
                        }
                    }
                }
                // reconstruct the full value from the deepest truncation
                let deepest = match kernel {
                    "val" => val_indicator_truncated(p, max_depth),
                    _ => abs_indicator_truncated(p, max_depth),
                };
                let deep_tail = match kernel {
                    "val" => ft_val_tail(p, max_depth, e),
                    _ => ft_abs_tail(p, max_depth, e),
                };
                let computed = match character_sum(&deepest, &p_pow(p, e)).as_rational() {
                    Some(s) => fq(&(s + deep_tail)),
                    None => "non-rational".into(),
                };
                let status = exact(fail.is_none());
                out.push(finish(
                    "fourier",
                    kernel,
                    "the additive character sum of every level-K truncation of the kernel equals its closed-form transform minus the closed tail",
                    format!("p={p} val(x)={e} K=1..{max_depth} units=1,2"),
                    fq(&closed),
                    fail.unwrap_or(computed),
                    status,
                    None,
                    t,
                ));
            }
            // the plain lattice indicator needs no truncation at all
            let t = Instant::now();
            let closed = ft_ind_at(p, e);
            let lattice = CellFunction::lattice(p, 1, 0);
            let mut vals = Vec::new();
            for u in [1i64, 2] {
                let x = qi(u) * p_pow(p, e);
                vals.push(character_sum(&lattice, &x).as_rational());
            }
            let ok = vals.iter().all(|v| v.as_ref() == Some(&closed));
            out.push(finish(
                "fourier",
                "ind",
                "the additive character sum of the lattice indicator equals its closed-form transform",
                format!("p={p} val(x)={e} units=1,2"),
                fq(&closed),
                vals[0]
                    .as_ref()
                    .map_or("non-rational".into(), fq),
                exact(ok),
                None,
                t,
            ));
        }
    }
    out
}

fn invariant_grid(p: u64) -> Vec<Q> {
    let p2 = p_pow(p, 2);
    if p == 3 {
        // both branches of the closed form, valuations -4 through 4
        let p4 = p_pow(p, 4);
        vec![
            Q::one(),
            qi(4),
            p2.clone(),
            qi(4) * &p2,
            p4.clone(),
            Q::one() / &p2,
            qi(4) / &p2,
            Q::one() / &p4,
        ]
    } else {
        vec![Q::one(), qi(4), p2.clone(), Q::one() / &p2, qi(4) / &p2]
    }
}

pub(crate) fn invariant(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for &p in &cfg.primes {
        for eta in invariant_grid(p) {
            let t = Instant::now();
            let closed = invariant_weighted_closed(p, &eta);
            let built = invariant_weighted_constructed(p, &eta);
            out.push(finish(
                "invariant",
                "constructed-vs-closed",
                "the invariant weighted orbital integral assembled from the weighted integral and its Fourier correction equals the closed form",
                format!("p={p} eta={eta}"),
                fq(&closed),
                fq(&built),
                exact(closed == built),
                None,
                t,
            ));
        }
        if p == 3 {
            // the two closed-form branches collide: eta = 1 sits on the
            // integral branch, eta = 1/9 on the fractional one, and both
            // evaluate to -3/8
            let t = Instant::now();
            let frozen = q(-3, 8);
            let a = invariant_weighted_constructed(3, &Q::one());
            let b = invariant_weighted_constructed(3, &q(1, 9));
            out.push(finish(
                "invariant",
                "cross-branch",
                "the integral-eta and fractional-eta branches of the invariant integral agree where the closed forms collide",
                "p=3 eta=1 vs eta=1/9".into(),
                fq(&frozen),
                format!("{} vs {}", fq(&a), fq(&b)),
                exact(a == frozen && b == frozen),
                None,
                t,
            ));
        }
    }
    out
}

pub(crate) fn weyl(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for &p in &cfg.primes {
        let f = unit_lattice(p);
        let t = Instant::now();
        let check = weyl_integration_check(&f, cfg.level);
        let ok = check.holds() && check.lhs.is_one();
        out.push(finish(
            "weyl",
            "slice-sum",
            "integrating the unit-lattice indicator equals the kappa-weighted sum of its orbital integrals over torus shells, within the certified tail of the truncation",
            format!("p={p} depth={}", cfg.level),
            fq(&check.lhs),
            fq(&check.rhs),
            if ok { Status::PassWithinBound } else { Status::Fail },
            Some(fq(&check.tail)),
            t,
        ));
        let t = Instant::now();
        let tails: Vec<Q> = (cfg.level..cfg.level + 3)
            .map(|d| weyl_integration_check(&f, d).tail)
            .collect();
        let monotone = tails.windows(2).all(|w| w[1] < w[0]);
        out.push(finish(
            "weyl",
            "tail-monotone",
            "the certified tail of the shell-sum truncation decreases strictly as the depth grows",
            format!("p={p} depths={}..={}", cfg.level, cfg.level + 2),
            "strictly decreasing".into(),
            tails.iter().map(fq).collect::<Vec<_>>().join(" > "),
            exact(monotone),
            None,
            t,
        ));
    }
    out
}

pub(crate) fn trace(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for &p in &cfg.primes {
        let f = CellFunction::lattice(p, 3, 0);
        let g = CellFunction::lattice(p, 3, 1);
        let inputs = format!("p={p} f=unit-lattice g=p-scaled-lattice");

        let t = Instant::now();
        let check = local_trace_check(&f, &g, cfg.level);
        out.push(finish(
            "trace",
            "two-expansions",
            "the two expansions of the local pairing — each side transforming one argument — agree within the certified truncation bound",
            format!("{inputs} depth={}", cfg.level),
            fqext(&check.lhs, p),
            fqext(&check.rhs, p),
            if check.holds() { Status::PassWithinBound } else { Status::Fail },
            Some(fqext(&check.bound, p)),
            t,
        ));

        let t = Instant::now();
        let (lhs, rhs) = local_trace_totals(&f, &g);
        out.push(finish(
            "trace",
            "exact-totals",
            "summing every shell series of the pairing in closed form makes the two expansions agree exactly",
            inputs.clone(),
            fqext(&lhs, p),
            fqext(&rhs, p),
            exact(lhs == rhs),
            None,
            t,
        ));

        let t = Instant::now();
        let shallow = local_trace_check(&f, &g, cfg.level);
        let deep = local_trace_check(&f, &g, cfg.level + 4);
        let tight =
            deep.bound.rat < shallow.bound.rat && deep.bound.irr < shallow.bound.irr;
        out.push(finish(
            "trace",
            "bound-monotone",
            "deepening the truncation shrinks the certified bound in both components",
            format!("{inputs} depths={},{}", cfg.level, cfg.level + 4),
            format!("tighter than {}", fqext(&shallow.bound, p)),
            fqext(&deep.bound, p),
            exact(tight),
            None,
            t,
        ));

        if p == 3 {
            let t = Instant::now();
            let frozen = QExt::new(q(-5, 351), q(4, 117));
            out.push(finish(
                "trace",
                "frozen-value",
                "the closed-form pairing of the nested-lattice pair reproduces its independently derived frozen value",
                inputs.clone(),
                fqext(&frozen, 3),
                fqext(&lhs, 3),
                exact(lhs == frozen && rhs == frozen),
                None,
                t,
            ));
        }
    }
    out
}
