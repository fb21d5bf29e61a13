//! The root-system suites: the combinatorial delta identity over every
//! standard parabolic pair, and the truncation-kernel decomposition with
//! its exact polyhedral volume against Monte-Carlo sampling.

use std::time::Instant;

use num::traits::Signed;
use orbitlab::q::{q, qi, Q};
use orbitlab::roots::gamma::{
    gamma_prime_integral, gamma_prime_integral_monte_carlo, hat_tau_decomposition_sides,
    seeded_points,
};
use orbitlab::roots::{
    chamber_test_points, compositions, langlands_sum, IndicatorSum, Parabolic,
};

use crate::{exact, finish, fq, CheckRecord, RunConfig, Status};

pub(crate) fn comp_str(c: &[usize]) -> String {
    c.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",")
}

pub(crate) fn pt_str(h: &[Q]) -> String {
    let body: Vec<String> = h.iter().map(|x| x.to_string()).collect();
    format!("({})", body.join(","))
}

pub(crate) fn langlands(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for n in 2..=cfg.n {
        let points = chamber_test_points(n);
        let comps = compositions(n);
        for c1 in &comps {
            let p1 = Parabolic::standard(c1);
            for c3 in &comps {
                let p3 = Parabolic::standard(c3);
                if !p1.is_contained_in(&p3) {
                    continue;
                }
                let t = Instant::now();
                let expect = i64::from(p1 == p3);
                let mut status = Status::ExactPass;
                let mut computed = expect.to_string();
                let mut skipped = 0usize;
                for h in &points {
                    match langlands_sum(&p1, &p3, h) {
                        IndicatorSum::Value(v) if v == expect => {}
                        IndicatorSum::Value(v) => {
                            status = Status::Fail;
                            computed = format!("{v} at h={}", pt_str(h));
                        }
                        IndicatorSum::Boundary => skipped += 1,
                    }
                }
                if skipped == points.len() {
                    status = Status::BoundarySkip;
                    computed = "all points on walls".into();
                }
                out.push(finish(
                    "langlands",
                    "delta",
                    "the alternating sum of indicator products over intermediate parabolics collapses to 1 when the pair coincides and to 0 otherwise, off the walls",
                    format!(
                        "n={n} P1=({}) P3=({}) chamber-points={} wall-skips={skipped}",
                        comp_str(c1),
                        comp_str(c3),
                        points.len()
                    ),
                    expect.to_string(),
                    computed,
                    status,
                    None,
                    t,
                ));
            }
        }
    }
    out
}

/// Samples for the Monte-Carlo cross-check. The stratified sampler splits
/// the bounding box into a jittered grid, so this count lands the seeded
/// runs well inside the one-percent window with margin to spare.
const MC_SAMPLES: u32 = 120_000;

/// A seeded regular dominant point with small coordinates, so the
/// Monte-Carlo bounding box stays tight.
fn seeded_dominant(n: usize, seed: u64) -> Vec<Q> {
    let mut state = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    let mut t: Vec<Q> = (0..n).map(|_| q((next() % 60) as i64, 7)).collect();
    t.sort_by(|a, b| b.cmp(a));
    for (i, x) in t.iter_mut().enumerate() {
        *x += qi(2 * (n - i) as i64);
    }
    t
}

pub(crate) fn gammaprime(cfg: &RunConfig) -> Vec<CheckRecord> {
    let mut out = Vec::new();

    // (a) the decomposition identity on seeded lattice-scale points
    for n in 2..=cfg.n.min(3) {
        let t_pt: Vec<Q> = (0..n).map(|i| qi(2 * (n as i64 - i as i64))).collect();
        for comp in compositions(n) {
            let p1 = Parabolic::standard(&comp);
            let t = Instant::now();
            let samples = 1000usize;
            let mut verified = 0usize;
            let mut skipped = 0usize;
            let mut status = Status::ExactPass;
            let mut note = None;
            for h in seeded_points(n, cfg.seed, samples) {
                match hat_tau_decomposition_sides(&p1, &h, &t_pt) {
                    Some((lhs, rhs)) if lhs == rhs => verified += 1,
                    Some((lhs, rhs)) => {
                        status = Status::Fail;
                        note = Some(format!("lhs={lhs} rhs={rhs} at h={}", pt_str(&h)));
                    }
                    None => skipped += 1,
                }
            }
            if verified == 0 && status == Status::ExactPass {
                status = Status::BoundarySkip;
            }
            out.push(finish(
                "gammaprime",
                "decomposition",
                "the global truncation indicator at H splits as the sum over parabolics above P1 of the compactly supported kernel at (H, T) times the indicator of the shifted projection",
                format!(
                    "n={n} P1=({}) T={} seed={} samples={samples}",
                    comp_str(&comp),
                    pt_str(&t_pt),
                    cfg.seed
                ),
                "equal sides at every off-wall sample".into(),
                note.unwrap_or(format!("{verified} matched, {skipped} wall-skips")),
                status,
                None,
                t,
            ));
        }
    }

    // (b) exact homogeneity of the kernel's region volume
    for n in 2..=cfg.n.min(3) {
        let b = Parabolic::borel(n);
        let d = n - 1;
        let t_pt: Vec<Q> = (0..n)
            .map(|i| qi(2 * (n as i64 - i as i64)) + q(1, 7))
            .collect();
        let base = gamma_prime_integral(&b, &t_pt);
        for lam in [qi(2), qi(3), q(1, 2)] {
            let t = Instant::now();
            let scaled: Vec<Q> = t_pt.iter().map(|x| x * &lam).collect();
            let got = gamma_prime_integral(&b, &scaled);
            let mut want = base.clone();
            for _ in 0..d {
                want *= &lam;
            }
            out.push(finish(
                "gammaprime",
                "homogeneity",
                "the region volume of the truncation kernel scales with degree equal to the chart dimension",
                format!("n={n} T={} lambda={lam}", pt_str(&t_pt)),
                fq(&want),
                fq(&got),
                exact(got == want),
                None,
                t,
            ));
        }
    }

    // (c) Monte-Carlo agreement for the GL(3) volume
    if cfg.n >= 3 {
        let b = Parabolic::borel(3);
        for k in 0..3u64 {
            let t = Instant::now();
            let t_pt = seeded_dominant(3, cfg.seed.wrapping_add(k));
            let volume = gamma_prime_integral(&b, &t_pt);
            let mc = gamma_prime_integral_monte_carlo(
                &b,
                &t_pt,
                cfg.seed.wrapping_add(100 + k),
                MC_SAMPLES,
            );
            let bound = &volume / qi(100);
            let ok = (&mc - &volume).abs() <= bound;
            out.push(finish(
                "gammaprime",
                "monte-carlo",
                "stratified rational sampling of the bounding box reproduces the exact region volume within one percent",
                format!(
                    "n=3 T={} mc-seed={} samples={MC_SAMPLES}",
                    pt_str(&t_pt),
                    cfg.seed.wrapping_add(100 + k)
                ),
                fq(&volume),
                fq(&mc),
                if ok { Status::PassWithinBound } else { Status::Fail },
                Some(fq(&bound)),
                t,
            ));
        }
    }
    out
}
