//! Reference tables: the basic orbital integral swept over orbit
//! representatives, closed form against brute force.

use orbitlab::padic::cell::CellFunction;
use orbitlab::padic::is_odd_prime;
use orbitlab::q::{p_pow, qi};
use orbitlab::sl2::brute::orbital;
use orbitlab::sl2::{classify, phi0};

use crate::ConfigError;

/// CSV table of the basic orbital integral over the representatives
/// eta = u * p^v for units u below min(p, 5) and valuations v in the
/// requested range: one row per representative with the closed form,
/// the brute-force value, and whether they agree exactly.
pub fn table_phi0(p: u64, val_min: i64, val_max: i64) -> Result<String, ConfigError> {
    if !is_odd_prime(p) {
        return Err(ConfigError {
            field: "p",
            message: format!("{p} is not an odd prime"),
        });
    }
    if val_min > val_max {
        return Err(ConfigError {
            field: "val-range",
            message: format!("empty valuation range {val_min}..={val_max}"),
        });
    }
    let f = CellFunction::lattice(p, 3, 0);
    let mut rows = vec!["eta,split_class,phi0_closed,phi0_bruteforce,match".to_string()];
    for v in val_min..=val_max {
        for u in 1..p.min(5) {
            let eta = qi(u as i64) * p_pow(p, v);
            let class = classify(p, &eta).class();
            let closed = phi0(p, &eta);
            let brute = orbital(&f, &eta);
            let verdict = if closed == brute { "exact" } else { "MISMATCH" };
            rows.push(format!("{eta},{class:?},{closed},{brute},{verdict}"));
        }
    }
    rows.push(String::new());
    Ok(rows.join("\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_rows_appear() {
        let t3 = table_phi0(3, 0, 2).unwrap();
        assert!(t3.starts_with("eta,split_class,phi0_closed,phi0_bruteforce,match"));
        assert!(t3.contains("\n2,UnramifiedElliptic,1/2,1/2,exact"));
        assert!(t3.contains("\n3,RamifiedElliptic,2/3,2/3,exact"));
        let t5 = table_phi0(5, 0, 0).unwrap();
        assert!(t5.contains("\n4,Split,1,1,exact"));
    }

    #[test]
    fn fractional_valuations_render_exactly() {
        let t = table_phi0(3, -1, -1).unwrap();
        assert!(t.contains("\n1/3,RamifiedElliptic,"));
    }

    #[test]
    fn bad_parameters_are_rejected() {
        assert_eq!(table_phi0(4, 0, 1).unwrap_err().field, "p");
        assert_eq!(table_phi0(2, 0, 1).unwrap_err().field, "p");
        assert_eq!(table_phi0(3, 2, 0).unwrap_err().field, "val-range");
    }
}
