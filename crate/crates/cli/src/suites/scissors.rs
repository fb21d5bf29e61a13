//! The scissors suite: translation invariance and dissection additivity
//! of the flag invariants on seeded polygons, consistency of the flag
//! vectors assembled from orbital data, and the two-place splitting
//! identity in the graded product.

use std::time::Instant;

use orbitlab::families::OrthogonalSet;
use orbitlab::padic::cell::CellFunction;
use orbitlab::q::{q, qi, Q};
use orbitlab::roots::gamma::ChamberChart;
use orbitlab::roots::Levi;
use orbitlab::scissors::{
    check_consistency, gl2_orbital_tables, gl2_pair_tables, hadwiger_vector, integrohedron,
    orthogonal_set_hull, split_by_level, total_integrohedron, ConvexPolytope, HadwigerVector,
    TotalScissorsElement,
};

use crate::suites::families::levi_str;
use crate::{exact, finish, fq, CheckRecord, RunConfig};

fn hv_str(h: &HadwigerVector) -> String {
    let body: Vec<String> = h.entries().map(|(_, v)| fq(v)).collect();
    format!("[{}]", body.join(", "))
}

fn total_str(x: &TotalScissorsElement) -> String {
    let body: Vec<String> = x
        .components()
        .map(|(l, h)| format!("{}:{}", levi_str(l), hv_str(h)))
        .collect();
    body.join(" ")
}

/// Midpoint of the functional h -> <w, h> over the polytope: a level that
/// always cuts through the interior.
fn mid_level(p: &ConvexPolytope, w: &[Q]) -> Q {
    let vals: Vec<Q> = p.vertices().iter().map(|v| {
        v.iter().zip(w).map(|(a, b)| a * b).sum()
    }).collect();
    let lo = vals.iter().min().unwrap();
    let hi = vals.iter().max().unwrap();
    (lo + hi) / qi(2)
}

pub(crate) fn scissors(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    let m3 = Levi::diagonal(3);
    let chart = ChamberChart::new(&m3.canonical_chamber());
    let y = OrthogonalSet::seeded(&m3, cfg.seed, 2);
    let poly = orthogonal_set_hull(&y);
    let h_poly = hadwiger_vector(&poly);

    // (a) translation invariance
    let t = Instant::now();
    let shift = chart.embed(&[q(13, 7), q(-5, 3)]);
    let h_shifted = hadwiger_vector(&poly.translate(&shift));
    out.push(finish(
        "scissors",
        "translation",
        "the flag vector of a polytope is unchanged by translation",
        format!("n=3 hull-seed={} shift-chart=(13/7,-5/3)", cfg.seed),
        hv_str(&h_poly),
        hv_str(&h_shifted),
        exact(h_poly == h_shifted),
        None,
        t,
    ));

    // (b) dissection additivity, generic cut and wall-parallel cut
    for (name, w) in [
        ("additivity-generic-cut", vec![qi(5), qi(-2), qi(-3)]),
        ("additivity-wall-cut", vec![q(1, 2), q(1, 2), qi(-1)]),
    ] {
        let t = Instant::now();
        let level = mid_level(&poly, &w);
        let (piece1, piece2) = split_by_level(&poly, &w, &level);
        let sum = hadwiger_vector(&piece1).add(&hadwiger_vector(&piece2));
        out.push(finish(
            "scissors",
            name,
            "cutting a polytope along a level set splits its flag vector additively",
            format!(
                "n=3 hull-seed={} w=({},{},{}) level={}",
                cfg.seed, w[0], w[1], w[2], level
            ),
            hv_str(&h_poly),
            hv_str(&sum),
            exact(h_poly == sum),
            None,
            t,
        ));
    }

    // (c) the geometric class satisfies the linear consistency conditions
    let t = Instant::now();
    out.push(finish(
        "scissors",
        "geometric-consistency",
        "the flag vector of a polytope satisfies the interior-replacement and one-step-extension sums",
        format!("n=3 hull-seed={}", cfg.seed),
        "consistent".into(),
        if check_consistency(&h_poly) { "consistent".into() } else { "inconsistent".into() },
        exact(check_consistency(&h_poly)),
        None,
        t,
    ));

    // (d) flag vectors from orbital tables pass the same conditions
    let m2 = Levi::diagonal(2);
    let a = qi(3);
    for &p in &cfg.primes {
        for j in 0..=2i64 {
            let t = Instant::now();
            let f = CellFunction::lattice(p, 3, j);
            let tables = gl2_orbital_tables(&f, &a);
            let h = integrohedron(&m2, &tables[&m2]).expect("complete table");
            out.push(finish(
                "scissors",
                "integrohedron-consistency",
                "the flag vector assembled from the weighted orbital table of a scaled lattice satisfies the consistency conditions",
                format!("p={p} f=p^{j}-scaled-lattice a=3"),
                "consistent".into(),
                format!(
                    "{} {}",
                    if check_consistency(&h) { "consistent" } else { "inconsistent" },
                    hv_str(&h)
                ),
                exact(check_consistency(&h)),
                None,
                t,
            ));
        }

        // (e) the two-place splitting identity in the graded product
        let singles: Vec<TotalScissorsElement> = (0..=2i64)
            .map(|j| {
                let f = CellFunction::lattice(p, 3, j);
                total_integrohedron(&m2, &gl2_orbital_tables(&f, &a)).expect("complete tables")
            })
            .collect();
        for j1 in 0..=2usize {
            for j2 in 0..=2usize {
                let t = Instant::now();
                let f1 = CellFunction::lattice(p, 3, j1 as i64);
                let f2 = CellFunction::lattice(p, 3, j2 as i64);
                let pair = total_integrohedron(&m2, &gl2_pair_tables(&f1, &f2, &a))
                    .expect("complete tables");
                let product = singles[j1].boxtimes(&singles[j2]);
                out.push(finish(
                    "scissors",
                    "splitting",
                    "the total element of a two-place product function equals the graded product of the single-place total elements",
                    format!("p={p} j1={j1} j2={j2} a=3"),
                    total_str(&pair),
                    total_str(&product),
                    exact(pair == product),
                    None,
                    t,
                ));
            }
        }
    }
    out
}
