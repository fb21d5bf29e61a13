//! Exact conjugation averages over the maximal compact subgroup.
//!
//! For a locally constant f, the average of f(κ⁻¹Xκ) over κ ∈ GL₂(Z_p)
//! collapses to a finite group average: if two lifts have the same adjoint
//! action mod p^k, they differ by a scalar times an element of 1 + p^k M₂(Z_p),
//! and conjugating by the latter moves any point Y by at most p^k times the
//! least coordinate valuation of Y.  So once
//!
//!   k ≥ max_level(f) − min coordinate valuation on supp f,
//!
//! the value f(κ⁻¹Xκ) depends on κ only through its class, for every X.
//! This module enumerates GL₂(Z/p^k) once, keeps one exact-rational adjoint
//! table per distinct action together with its multiplicity, and exposes the
//! uniform-weight average.
//!
//! Coordinates: (x, y, z) stands for [[x, y], [z, −x]]; a table is the matrix
//! of X ↦ κ⁻¹Xκ with columns the images of [[1,0],[0,−1]], [[0,1],[0,0]],
//! [[0,0],[1,0]].  Entries are integers over the unit determinant, so every
//! table is p-integral.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num::Zero;
use once_cell::sync::Lazy;
use rayon::prelude::*;

use crate::q::{q, qi, Q};

/// Cap on p^{4k}: enumerating all lifts beyond this is a programming error,
/// not something to attempt.
const ENUMERATION_CAP: u64 = 50_000_000;

/// One distinct adjoint action of GL₂(Z/p^k) with its multiplicity.
#[derive(Clone, Debug)]
pub struct AdTable {
    cols: [[Q; 3]; 3],
    mult: u64,
}

impl AdTable {
    pub fn mult(&self) -> u64 {
        self.mult
    }

    /// Image of [[1,0],[0,−1]].
    pub fn col_h(&self) -> &[Q; 3] {
        &self.cols[0]
    }

    /// Image of [[0,1],[0,0]].
    pub fn col_e(&self) -> &[Q; 3] {
        &self.cols[1]
    }

    /// Image of [[0,0],[1,0]].
    pub fn col_f(&self) -> &[Q; 3] {
        &self.cols[2]
    }

    /// κ⁻¹ X κ in coordinates.
    pub fn apply(&self, x: &Q, y: &Q, z: &Q) -> [Q; 3] {
        let mut out = [Q::zero(), Q::zero(), Q::zero()];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = &self.cols[0][i] * x + &self.cols[1][i] * y + &self.cols[2][i] * z;
        }
        out
    }
}

/// The deduplicated adjoint tables of GL₂(Z/p^k).
pub struct KappaSet {
    p: u64,
    level: u32,
    order: u64,
    tables: Vec<AdTable>,
}

impl KappaSet {
    pub fn new(p: u64, level: u32) -> KappaSet {
        assert!(crate::padic::is_odd_prime(p), "odd primes only");
        assert!(level >= 1);
        let pk = p.pow(level);
        assert!(
            pk.pow(4) <= ENUMERATION_CAP,
            "GL2(Z/{p}^{level}) enumeration would visit {} lifts",
            pk.pow(4)
        );
        let pk = pk as i64;
        let pi = p as i64;
        let mut index: HashMap<[u64; 9], usize> = HashMap::new();
        let mut tables: Vec<AdTable> = Vec::new();
        let mut total = 0u64;
        for a in 0..pk {
            for b in 0..pk {
                for c in 0..pk {
                    for d in 0..pk {
                        let det = a * d - b * c;
                        if det.rem_euclid(pi) == 0 {
                            continue;
                        }
                        total += 1;
                        let nums = [
                            a * d + b * c,
                            2 * b * d,
                            -2 * a * c,
                            d * c,
                            d * d,
                            -c * c,
                            -a * b,
                            -b * b,
                            a * a,
                        ];
                        let dinv = inv_mod(det, pk);
                        let mut key = [0u64; 9];
                        for (slot, n) in key.iter_mut().zip(nums.iter()) {
                            *slot = (n.rem_euclid(pk) * dinv).rem_euclid(pk) as u64;
                        }
                        match index.get(&key) {
                            Some(&i) => tables[i].mult += 1,
                            None => {
                                index.insert(key, tables.len());
                                let col = |i: usize| -> [Q; 3] {
                                    [
                                        q(nums[3 * i], det),
                                        q(nums[3 * i + 1], det),
                                        q(nums[3 * i + 2], det),
                                    ]
                                };
                                tables.push(AdTable {
                                    cols: [col(0), col(1), col(2)],
                                    mult: 1,
                                });
                            }
                        }
                    }
                }
            }
        }
        let order = group_order(p, level);
        assert_eq!(total, order, "unit-determinant count disagrees");
        KappaSet { p, level, order, tables }
    }

    /// Cached construction; the sets are immutable and safely shared.
    pub fn shared(p: u64, level: u32) -> Arc<KappaSet> {
        static CACHE: Lazy<Mutex<HashMap<(u64, u32), Arc<KappaSet>>>> =
            Lazy::new(|| Mutex::new(HashMap::new()));
        let mut cache = CACHE.lock().unwrap();
        cache
            .entry((p, level))
            .or_insert_with(|| Arc::new(KappaSet::new(p, level)))
            .clone()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// |GL₂(Z/p^k)|.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn tables(&self) -> &[AdTable] {
        &self.tables
    }

    /// (1/|GL₂(Z/p^k)|) Σ_κ value(κ), multiplicities included.
    pub fn average<F>(&self, value: F) -> Q
    where
        F: Fn(&AdTable) -> Q + Sync + Send,
    {
        let sum: Q = self
            .tables
            .par_iter()
            .map(|t| qi(t.mult as i64) * value(t))
            .reduce(Q::zero, |x, y| x + y);
        sum / qi(self.order as i64)
    }
}

/// |GL₂(Z/p^k)| = p^{4(k−1)} (p²−1)(p²−p).
pub fn group_order(p: u64, level: u32) -> u64 {
    p.pow(4 * (level - 1)) * (p * p - 1) * (p * p - p)
}

fn inv_mod(a: i64, m: i64) -> i64 {
    let (mut r0, mut r1) = (m, a.rem_euclid(m));
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let quot = r0 / r1;
        (r0, r1) = (r1, r0 - quot * r1);
        (t0, t1) = (t1, t0 - quot * t1);
    }
    assert_eq!(r0, 1, "not invertible");
    t0.rem_euclid(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::val;
    use crate::q::qi;

    #[test]
    fn orders_and_class_counts() {
        let k31 = KappaSet::new(3, 1);
        assert_eq!(k31.order(), 48);
        // The scalars Z/3^× are the full kernel of the action: 48/2 classes.
        assert_eq!(k31.tables().len(), 24);

        let k32 = KappaSet::new(3, 2);
        assert_eq!(k32.order(), 81 * 48);
        assert_eq!(k32.tables().len(), (81 * 48 / 6) as usize);

        let k51 = KappaSet::new(5, 1);
        assert_eq!(k51.order(), 480);
        assert_eq!(k51.tables().len(), 120);
    }

    #[test]
    fn tables_preserve_the_invariant_form() {
        // x² + yz is conjugation-invariant, exactly, table by table.
        for set in [KappaSet::new(3, 2), KappaSet::new(5, 1)] {
            for t in set.tables() {
                let [x, y, z] = t.apply(&qi(1), &qi(2), &qi(3));
                assert_eq!(&x * &x + &y * &z, qi(7));
            }
        }
    }

    #[test]
    fn averages_vanish_to_the_congruence_depth() {
        // Reduced mod p^k the tables form a representation of GL₂(Z/p^k)
        // with no invariant vectors, so the summed table is ≡ 0 mod p^k —
        // a sharp test of the multiplicity bookkeeping.  (The exact lifted
        // tables do not compose as a representation, so the sum is not
        // exactly zero.)
        let set = KappaSet::new(3, 2);
        for j in 0..3 {
            for i in 0..3 {
                let total = set.average(|t| t.cols[j][i].clone()) * qi(set.order() as i64);
                assert!(
                    val(3, &total).at_least(2),
                    "column {j} entry {i}: {total}"
                );
            }
        }
    }

    #[test]
    fn tables_are_integral_with_unit_pivots() {
        let set = KappaSet::new(3, 2);
        for t in set.tables() {
            let mut min_h = i64::MAX;
            let mut min_e = i64::MAX;
            for i in 0..3 {
                for col in [t.col_h(), t.col_e(), t.col_f()] {
                    if let Some(v) = val(3, &col[i]).finite() {
                        assert!(v >= 0, "entry with negative valuation");
                    }
                }
                if let Some(v) = val(3, &t.col_h()[i]).finite() {
                    min_h = min_h.min(v);
                }
                if let Some(v) = val(3, &t.col_e()[i]).finite() {
                    min_e = min_e.min(v);
                }
            }
            // Both the semisimple and the nilpotent images stay primitive.
            assert_eq!(min_h, 0);
            assert_eq!(min_e, 0);
        }
    }

    #[test]
    fn shared_cache_returns_the_same_set() {
        let a = KappaSet::shared(3, 1);
        let b = KappaSet::shared(3, 1);
        assert!(Arc::ptr_eq(&a, &b));
    }
}
