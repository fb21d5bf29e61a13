//! Small multivariate polynomials over Q, used for truncation polynomials
//! in the chamber variables and for exponential germs. Dense enough work
//! happens in low rank that a sorted exponent map is plenty.

use crate::q::{Q, Z};
use num::traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyQ {
    vars: usize,
    terms: BTreeMap<Vec<u32>, Q>,
}

impl PolyQ {
    pub fn zero(vars: usize) -> PolyQ {
        PolyQ {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: Q) -> PolyQ {
        let mut p = PolyQ::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    pub fn one(vars: usize) -> PolyQ {
        PolyQ::constant(vars, Q::one())
    }

    pub fn var(vars: usize, i: usize) -> PolyQ {
        assert!(i < vars);
        let mut exp = vec![0; vars];
        exp[i] = 1;
        let mut p = PolyQ::zero(vars);
        p.terms.insert(exp, Q::one());
        p
    }

    /// The linear form c · x (no constant term).
    pub fn linear(coeffs: &[Q]) -> PolyQ {
        let mut p = PolyQ::zero(coeffs.len());
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut exp = vec![0; coeffs.len()];
                exp[i] = 1;
                p.terms.insert(exp, c.clone());
            }
        }
        p
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[u32]) -> Q {
        self.terms.get(exp).cloned().unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
    }

    fn insert(&mut self, exp: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &PolyQ) -> PolyQ {
        assert_eq!(self.vars, other.vars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PolyQ) -> PolyQ {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> PolyQ {
        if c.is_zero() {
            return PolyQ::zero(self.vars);
        }
        PolyQ {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &PolyQ) -> PolyQ {
        assert_eq!(self.vars, other.vars);
        let mut out = PolyQ::zero(self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let exp: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(exp, c1 * c2);
            }
        }
        out
    }

    /// Product with all terms above total degree `deg` discarded; keeps
    /// germ arithmetic from blowing up.
    pub fn mul_truncated(&self, other: &PolyQ, deg: u32) -> PolyQ {
        assert_eq!(self.vars, other.vars);
        let mut out = PolyQ::zero(self.vars);
        for (e1, c1) in &self.terms {
            let d1: u32 = e1.iter().sum();
            if d1 > deg {
                continue;
            }
            for (e2, c2) in &other.terms {
                let d2: u32 = e2.iter().sum();
                if d1 + d2 > deg {
                    continue;
                }
                let exp: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.insert(exp, c1 * c2);
            }
        }
        out
    }

    pub fn truncate_total_degree(&self, deg: u32) -> PolyQ {
        PolyQ {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= deg)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// The homogeneous part of the given total degree.
    pub fn homogeneous_part(&self, deg: u32) -> PolyQ {
        PolyQ {
            vars: self.vars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == deg)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous_of_degree(&self, deg: u32) -> bool {
        self.terms.keys().all(|e| e.iter().sum::<u32>() == deg)
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.vars);
        let mut total = Q::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term *= &point[i];
                }
            }
            total += term;
        }
        total
    }

    /// Exact division: self = q * divisor with zero remainder, or None.
    /// Standard multivariate division by a single divisor in lex order.
    pub fn divide_exact(&self, divisor: &PolyQ) -> Option<PolyQ> {
        assert_eq!(self.vars, divisor.vars);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (lead_exp, lead_coeff) = divisor
            .terms
            .iter()
            .next_back()
            .map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quot = PolyQ::zero(self.vars);
        loop {
            let Some((e, c)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))
            else {
                return Some(quot);
            };
            // divisible term?
            if !e.iter().zip(&lead_exp).all(|(a, b)| a >= b) {
                return None;
            }
            let qe: Vec<u32> = e.iter().zip(&lead_exp).map(|(a, b)| a - b).collect();
            let qc = &c / &lead_coeff;
            let mut mono = PolyQ::zero(self.vars);
            mono.terms.insert(qe, qc);
            rem = rem.sub(&mono.mul(divisor));
            quot = quot.add(&mono);
        }
    }

    /// exp(linear) as a germ to total degree `deg`; the input must have no
    /// constant term (otherwise it is not polynomial at all).
    pub fn exp_truncated(linear: &PolyQ, deg: u32) -> PolyQ {
        assert!(
            linear.coeff(&vec![0; linear.vars]).is_zero(),
            "exp germ needs vanishing constant term"
        );
        let mut out = PolyQ::one(linear.vars);
        let mut power = PolyQ::one(linear.vars);
        let mut factorial = Q::one();
        for k in 1..=deg {
            power = power.mul_truncated(linear, deg);
            factorial *= Q::from_integer(Z::from(k as u64));
            out = out.add(&power.scale(&(Q::one() / &factorial)));
        }
        out
    }
}

impl fmt::Display for PolyQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    write!(f, "*x{}", i)?;
                } else if k > 1 {
                    write!(f, "*x{}^{}", i, k)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::{q, qi};

    #[test]
    fn arithmetic_round_trip() {
        let x = PolyQ::var(2, 0);
        let y = PolyQ::var(2, 1);
        let p = x.add(&y).mul(&x.sub(&y)); // x^2 - y^2
        assert_eq!(p.eval(&[qi(3), qi(2)]), qi(5));
        assert_eq!(p.total_degree(), Some(2));
        assert!(p.is_homogeneous_of_degree(2));
    }

    #[test]
    fn exact_division() {
        let x = PolyQ::var(2, 0);
        let y = PolyQ::var(2, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        let quot = p.divide_exact(&x.add(&y)).unwrap();
        assert_eq!(quot, x.sub(&y));
        assert!(p.divide_exact(&x.sub(&y.scale(&qi(2)))).is_none());
        // dividing by a form with a nontrivial coefficient
        let d = PolyQ::linear(&[q(1, 2), qi(0)]);
        let quot = x.mul(&x).divide_exact(&d).unwrap();
        assert_eq!(quot.eval(&[qi(1), qi(0)]), qi(2));
    }

    #[test]
    fn exp_germ() {
        let l = PolyQ::linear(&[qi(1), qi(-1)]);
        let e = PolyQ::exp_truncated(&l, 3);
        // 1 + (x-y) + (x-y)^2/2 + (x-y)^3/6 at (1, 0)
        assert_eq!(e.eval(&[qi(1), qi(0)]), qi(1) + qi(1) + q(1, 2) + q(1, 6));
        // germs multiply: exp(l)*exp(-l) = 1 + O(deg^4)
        let e2 = PolyQ::exp_truncated(&l.scale(&qi(-1)), 3);
        let prod = e.mul_truncated(&e2, 3);
        assert_eq!(prod, PolyQ::one(2));
    }

    #[test]
    fn homogeneous_extraction() {
        let x = PolyQ::var(1, 0);
        let p = PolyQ::one(1).add(&x).add(&x.mul(&x).scale(&qi(3)));
        assert_eq!(p.homogeneous_part(2), x.mul(&x).scale(&qi(3)));
        assert_eq!(p.truncate_total_degree(1), PolyQ::one(1).add(&x));
    }
}
