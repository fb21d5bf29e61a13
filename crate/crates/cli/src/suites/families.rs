//! The weight-family suites: the smoothed limit against the hull volume,
//! the product and descent identities, the descent constants, and the
//! section map with independent membership re-verification.

use std::time::Instant;

use num::traits::Zero;
use orbitlab::families::{
    descent_constant, descent_identity_sides, generic_xi, product_identity_sides,
    s_map_witness, OrthogonalSet,
};
use orbitlab::q::{qi, Q};
use orbitlab::roots::{simple_root_values, Levi, Parabolic};

use crate::{exact, finish, fq, CheckRecord, RunConfig};

pub(crate) fn levi_str(l: &Levi) -> String {
    l.blocks()
        .iter()
        .map(|b| {
            let body: Vec<String> = b.iter().map(|i| i.to_string()).collect();
            format!("{{{}}}", body.join(","))
        })
        .collect()
}

pub(crate) fn weights(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for n in [2usize, 3] {
        let m = Levi::diagonal(n);
        let t = Instant::now();
        let total = 100u64;
        let mut first_bad = None;
        for k in 0..total {
            let seed = cfg.seed.wrapping_add(k);
            let terms = 1 + (k % 3) as usize;
            let y = OrthogonalSet::seeded(&m, seed, terms);
            let limit = y.c_limit();
            let hull = y.hull_volume();
            if limit != hull && first_bad.is_none() {
                first_bad = Some(format!(
                    "seed={seed}: limit={} hull={}",
                    fq(&limit),
                    fq(&hull)
                ));
            }
        }
        out.push(finish(
            "weights",
            "limit-vs-hull",
            "the smoothed limit defining the geometric weight factor equals the convex hull volume of the orthogonal set",
            format!(
                "n={n} seeds={}..={} terms=1..3 sets={total}",
                cfg.seed,
                cfg.seed.wrapping_add(total - 1)
            ),
            format!("{total} equalities"),
            first_bad
                .clone()
                .unwrap_or(format!("{total} equalities")),
            exact(first_bad.is_none()),
            None,
            t,
        ));
    }
    out
}

pub(crate) fn descent(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let m = Levi::diagonal(3);
    let levis = m.containing_levis();

    // (a) the family descent identity on seeded sets at a generic xi
    let xi_seed = cfg.seed.wrapping_add(23);
    let xi = generic_xi(&m, xi_seed);
    for k in 0..4u64 {
        let seed = cfg.seed.wrapping_add(k);
        let t = Instant::now();
        let y = OrthogonalSet::seeded(&m, seed, 2);
        let mut first_bad = None;
        for l in &levis {
            let (lhs, rhs) = descent_identity_sides(&y, l, &xi);
            if lhs != rhs && first_bad.is_none() {
                first_bad = Some(format!(
                    "L={} lhs={} rhs={}",
                    levi_str(l),
                    fq(&lhs),
                    fq(&rhs)
                ));
            }
        }
        out.push(finish(
            "descent",
            "family-descent",
            "the weight factor of each Levi in the family decomposes as the descent-constant-weighted sum over the section images",
            format!("n=3 set-seed={seed} xi-seed={xi_seed} levis={}", levis.len()),
            "equal sides on every Levi".into(),
            first_bad
                .clone()
                .unwrap_or("equal sides on every Levi".into()),
            exact(first_bad.is_none()),
            None,
            t,
        ));
    }

    // (b) the product identity for pairs of seeded sets
    for n in 2..=cfg.n.min(3) {
        let mn = Levi::diagonal(n);
        let t = Instant::now();
        let mut first_bad = None;
        for k in 0..6u64 {
            let c = OrthogonalSet::seeded(&mn, cfg.seed.wrapping_add(k), 1);
            let d = OrthogonalSet::seeded(&mn, cfg.seed.wrapping_add(k + 100), 2);
            let (lhs, rhs) = product_identity_sides(&c, &d);
            if lhs != rhs && first_bad.is_none() {
                first_bad = Some(format!(
                    "seed={}: lhs={} rhs={}",
                    cfg.seed.wrapping_add(k),
                    fq(&lhs),
                    fq(&rhs)
                ));
            }
        }
        out.push(finish(
            "descent",
            "product",
            "the weight volume of the sum of two orthogonal sets expands as the chamber-indexed sum of products of a weight factor and a restricted hull volume",
            format!("n={n} seeds={}..+6 paired with +100", cfg.seed),
            "equal sides for every pair".into(),
            first_bad
                .clone()
                .unwrap_or("equal sides for every pair".into()),
            exact(first_bad.is_none()),
            None,
            t,
        ));
    }

    // (c) descent constants: symmetry and normalization
    let t = Instant::now();
    let mut first_bad = None;
    for l1 in &levis {
        for l2 in &levis {
            if descent_constant(&m, l1, l2) != descent_constant(&m, l2, l1)
                && first_bad.is_none()
            {
                first_bad = Some(format!("L1={} L2={}", levi_str(l1), levi_str(l2)));
            }
        }
    }
    let g = Levi::full(3);
    let norm = descent_constant(&m, &m, &g);
    let ok = first_bad.is_none() && norm == qi(1);
    out.push(finish(
        "descent",
        "constant-symmetry",
        "the descent constant is symmetric in its two Levi arguments and normalized to 1 on the pair (M, G)",
        format!("n=3 pairs={}", levis.len() * levis.len()),
        "symmetric, d(M,G)=1/1".into(),
        first_bad.unwrap_or(format!("symmetric, d(M,G)={}", fq(&norm))),
        exact(ok),
        None,
        t,
    ));

    // (d) the section map, with membership re-verified from the witness
    let t = Instant::now();
    let smap_seed = cfg.seed.wrapping_add(17);
    let xi2 = generic_xi(&m, smap_seed);
    let gp = Parabolic::full(3);
    let mut checked = 0usize;
    let mut first_bad = None;
    for l1 in &levis {
        for l2 in &levis {
            match s_map_witness(&m, l1, l2, &xi2) {
                Some((q1, x1, q2, x2)) => {
                    checked += 1;
                    let splits = (0..3).all(|i| &x1[i] - &x2[i] == &xi2[i] * qi(2));
                    let inside = q1.levi() == *l1
                        && q2.levi() == *l2
                        && simple_root_values(&q1, &gp, &x1).iter().all(|r| r > &Q::zero())
                        && simple_root_values(&q2, &gp, &x2).iter().all(|r| r > &Q::zero());
                    if !(splits && inside) && first_bad.is_none() {
                        first_bad =
                            Some(format!("L1={} L2={}", levi_str(l1), levi_str(l2)));
                    }
                }
                None => {
                    if !descent_constant(&m, l1, l2).is_zero() && first_bad.is_none() {
                        first_bad = Some(format!(
                            "no section for nondegenerate pair L1={} L2={}",
                            levi_str(l1),
                            levi_str(l2)
                        ));
                    }
                }
            }
        }
    }
    let status = exact(first_bad.is_none() && checked > 0);
    out.push(finish(
        "descent",
        "s-map-membership",
        "for every pair with nonzero descent constant the section map solves 2*xi = xi1 - xi2 with each half strictly inside the returned chamber of its Levi",
        format!("n=3 xi-seed={smap_seed} pairs={}", levis.len() * levis.len()),
        "strict membership for every nondegenerate pair".into(),
        first_bad.unwrap_or(format!("{checked} sections verified")),
        status,
        None,
        t,
    ));
    out
}
