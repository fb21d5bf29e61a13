//! Exact linear algebra over Q for the small systems this crate meets:
//! chamber-coordinate changes, interpolation matrices, lattice
//! determinants. Plain Gaussian elimination with rational pivots.

use crate::q::Q;
use num::traits::Zero;

/// Determinant of a square matrix.
pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "square matrix required");
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut sign = Q::from_integer(1.into());
    let mut result = Q::from_integer(1.into());
    for col in 0..n {
        let Some(pivot_row) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if pivot_row != col {
            a.swap(pivot_row, col);
            sign = -sign;
        }
        let pivot = a[col][col].clone();
        result *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
        }
    }
    result * sign
}

/// Solve A x = b exactly; None if A is singular.
pub fn solve(m: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    assert!(m.iter().all(|row| row.len() == n), "square matrix required");
    assert_eq!(b.len(), n);
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut rhs: Vec<Q> = b.to_vec();
    for col in 0..n {
        let pivot_row = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot_row, col);
        rhs.swap(pivot_row, col);
        let pivot = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            for c in col..n {
                let delta = &factor * &a[col][c];
                a[r][c] -= delta;
            }
            let delta = &factor * &rhs[col];
            rhs[r] -= delta;
        }
    }
    Some(
        (0..n)
            .map(|i| &rhs[i] / &a[i][i])
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::{q, qi};

    #[test]
    fn determinants() {
        assert_eq!(det(&[vec![qi(2)]]), qi(2));
        assert_eq!(det(&[vec![qi(1), qi(2)], vec![qi(3), qi(4)]]), qi(-2));
        assert_eq!(
            det(&[
                vec![qi(0), qi(1), qi(0)],
                vec![qi(1), qi(0), qi(0)],
                vec![qi(0), qi(0), qi(1)],
            ]),
            qi(-1)
        );
        assert_eq!(det(&[vec![qi(1), qi(2)], vec![qi(2), qi(4)]]), qi(0));
    }

    #[test]
    fn solving() {
        let a = vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]];
        let x = solve(&a, &[qi(5), qi(10)]).unwrap();
        assert_eq!(x, vec![qi(1), qi(3)]);
        let singular = vec![vec![qi(1), qi(1)], vec![qi(2), qi(2)]];
        assert!(solve(&singular, &[qi(1), qi(2)]).is_none());
        let a = vec![vec![q(1, 2), qi(0)], vec![qi(0), q(3, 1)]];
        let x = solve(&a, &[qi(1), qi(1)]).unwrap();
        assert_eq!(x, vec![qi(2), q(1, 3)]);
    }
}
