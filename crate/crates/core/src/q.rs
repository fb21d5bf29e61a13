//! Exact rational scalars and tiny constructors used everywhere else.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};

/// The scalar field: arbitrary-precision rationals.
pub type Q = BigRational;
/// Arbitrary-precision integers.
pub type Z = BigInt;

/// Integer as a `Z`.
pub fn zi(n: i64) -> Z {
    Z::from(n)
}

/// Integer as a `Q`.
pub fn qi(n: i64) -> Q {
    Q::from_integer(Z::from(n))
}

/// The fraction n/d as a `Q`. Panics on d = 0.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(Z::from(n), Z::from(d))
}

/// p^k as an exact rational, for any sign of k.
pub fn p_pow(p: u64, k: i64) -> Q {
    let base = Z::from(p);
    if k >= 0 {
        Q::from_integer(base.pow(k as u32))
    } else {
        Q::new(Z::one(), base.pow((-k) as u32))
    }
}

/// Sum of the geometric series p^{-a} + p^{-a-1} + ... + p^{-b} (a <= b),
/// in closed form. Empty when a > b.
pub fn geom_sum(p: u64, a: i64, b: i64) -> Q {
    if a > b {
        return Q::zero();
    }
    // sum_{i=a}^{b} p^{-i} = (p^{-a} - p^{-b-1}) / (1 - p^{-1})
    let one = Q::one();
    (p_pow(p, -a) - p_pow(p, -(b + 1))) / (one - p_pow(p, -1))
}

/// Σ_{k ≥ m} p^{-k} = p^{-m} / (1 - 1/p), any integer m.
pub fn tail_geom(p: u64, m: i64) -> Q {
    p_pow(p, -m) / (Q::one() - p_pow(p, -1))
}

/// Σ_{k ≥ m} k p^{-k} = p^{-m} (m + 1/(p-1)) / (1 - 1/p), any integer m.
pub fn tail_k_geom(p: u64, m: i64) -> Q {
    p_pow(p, -m) * (qi(m) + Q::one() / qi(p as i64 - 1)) / (Q::one() - p_pow(p, -1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_pow_signs() {
        assert_eq!(p_pow(3, 2), qi(9));
        assert_eq!(p_pow(3, 0), qi(1));
        assert_eq!(p_pow(5, -2), q(1, 25));
    }

    #[test]
    fn geom_sum_matches_direct() {
        let direct: Q = (1..=6).map(|i| p_pow(3, -i)).sum();
        assert_eq!(geom_sum(3, 1, 6), direct);
        assert_eq!(geom_sum(3, 2, 1), qi(0));
        assert_eq!(geom_sum(7, 0, 0), qi(1));
    }

    #[test]
    fn tails_continue_partial_sums() {
        for m in [-2i64, 0, 3] {
            assert_eq!(
                tail_geom(3, m),
                geom_sum(3, m, m + 40) + tail_geom(3, m + 41)
            );
            let partial: Q = (m..m + 40).map(|k| qi(k) * p_pow(3, -k)).sum();
            assert_eq!(tail_k_geom(3, m), partial + tail_k_geom(3, m + 40));
        }
    }
}
