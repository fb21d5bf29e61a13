//! Exactly represented locally constant functions on Q_p^n.
//!
//! A function is a finite list of disjoint product cells, each a product of
//! balls c + p^m Z_p with a rational value. Balls in Q_p are nested or
//! disjoint, which keeps every operation here exact and finite: products
//! intersect cell-by-cell, integrals are value-times-measure sums, and
//! refinement splits a ball into its p children without changing anything
//! pointwise.

use super::{residue_mod_pk, val, Val};
use crate::q::{p_pow, Q, Z};
use num::traits::{One, Zero};

/// The ball center + p^level Z_p in one coordinate. Centers are canonical:
/// 0 when val(center) >= level, otherwise p^v * t with t an integer in
/// [1, p^(level - v)) prime to p.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ball {
    center: Q,
    level: i64,
}

impl Ball {
    pub fn new(p: u64, center: &Q, level: i64) -> Ball {
        Ball {
            center: canonical_center(p, center, level),
            level,
        }
    }

    /// The whole-lattice ball p^level Z_p.
    pub fn lattice(level: i64) -> Ball {
        Ball {
            center: Q::zero(),
            level,
        }
    }

    pub fn center(&self) -> &Q {
        &self.center
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn measure(&self, p: u64) -> Q {
        p_pow(p, -self.level)
    }

    pub fn contains_point(&self, p: u64, x: &Q) -> bool {
        val(p, &(x - &self.center)).at_least(self.level)
    }

    pub fn contains_ball(&self, p: u64, other: &Ball) -> bool {
        self.level <= other.level && self.contains_point(p, &other.center)
    }

    /// Nested-or-disjoint: the intersection is a ball or empty.
    pub fn intersect(&self, p: u64, other: &Ball) -> Option<Ball> {
        if self.contains_ball(p, other) {
            Some(other.clone())
        } else if other.contains_ball(p, self) {
            Some(self.clone())
        } else {
            None
        }
    }

    pub fn is_disjoint(&self, p: u64, other: &Ball) -> bool {
        self.intersect(p, other).is_none()
    }

    /// The p children one level down.
    pub fn split(&self, p: u64) -> Vec<Ball> {
        (0..p)
            .map(|d| {
                Ball::new(
                    p,
                    &(&self.center + Q::from_integer(Z::from(d)) * p_pow(p, self.level)),
                    self.level + 1,
                )
            })
            .collect()
    }

    /// Children at the requested finer level (k >= level), all p^(k - level)
    /// of them.
    pub fn refine(&self, p: u64, k: i64) -> Vec<Ball> {
        assert!(k >= self.level);
        let mut out = vec![self.clone()];
        for _ in self.level..k {
            out = out.iter().flat_map(|b| b.split(p)).collect();
        }
        out
    }

    /// Image under x -> x + t.
    pub fn translate(&self, p: u64, t: &Q) -> Ball {
        Ball::new(p, &(&self.center + t), self.level)
    }

    /// Image under x -> p^j x.
    pub fn scale_by_p_pow(&self, p: u64, j: i64) -> Ball {
        Ball::new(p, &(&self.center * p_pow(p, j)), self.level + j)
    }

    /// Image under x -> u x for a unit u.
    pub fn scale_by_unit(&self, p: u64, u: &Q) -> Ball {
        assert_eq!(val(p, u), Val::Finite(0));
        Ball::new(p, &(&self.center * u), self.level)
    }

    /// A valuation lower bound for all points of the ball.
    pub fn min_val(&self, p: u64) -> i64 {
        match val(p, &self.center) {
            Val::Infinite => self.level,
            Val::Finite(v) => v.min(self.level),
        }
    }
}

/// Canonical coset representative of c + p^m Z_p.
fn canonical_center(p: u64, c: &Q, m: i64) -> Q {
    match val(p, c) {
        Val::Infinite => Q::zero(),
        Val::Finite(v) => {
            if v >= m {
                Q::zero()
            } else {
                let u = c / p_pow(p, v);
                let digits = (m - v) as u32;
                Q::from_integer(residue_mod_pk(p, &u, digits)) * p_pow(p, v)
            }
        }
    }
}

/// A product of one ball per coordinate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub balls: Vec<Ball>,
}

impl Cell {
    pub fn new(balls: Vec<Ball>) -> Cell {
        Cell { balls }
    }

    pub fn arity(&self) -> usize {
        self.balls.len()
    }

    pub fn measure(&self, p: u64) -> Q {
        p_pow(p, -self.balls.iter().map(|b| b.level).sum::<i64>())
    }

    pub fn contains_point(&self, p: u64, x: &[Q]) -> bool {
        self.balls.len() == x.len()
            && self
                .balls
                .iter()
                .zip(x)
                .all(|(b, xi)| b.contains_point(p, xi))
    }

    pub fn intersect(&self, p: u64, other: &Cell) -> Option<Cell> {
        if self.balls.len() != other.balls.len() {
            return None;
        }
        let mut balls = Vec::with_capacity(self.balls.len());
        for (a, b) in self.balls.iter().zip(&other.balls) {
            balls.push(a.intersect(p, b)?);
        }
        Some(Cell { balls })
    }

    pub fn is_disjoint(&self, p: u64, other: &Cell) -> bool {
        self.intersect(p, other).is_none()
    }
}

/// Errors from cell-function construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellError {
    /// Two cells overlap; indices refer to the constructor input.
    Overlap(usize, usize),
    /// A cell's arity differs from the function's.
    ArityMismatch { expected: usize, got: usize },
}

impl std::fmt::Display for CellError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CellError::Overlap(i, j) => write!(f, "cells {i} and {j} overlap"),
            CellError::ArityMismatch { expected, got } => {
                write!(f, "cell arity {got}, function arity {expected}")
            }
        }
    }
}

impl std::error::Error for CellError {}

/// A locally constant function with compact support: finitely many disjoint
/// product cells with rational values. Zero-valued cells are dropped, and
/// the cell list is kept sorted so equal functions compare equal when built
/// from the same cells in any order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellFunction {
    p: u64,
    arity: usize,
    cells: Vec<(Cell, Q)>,
}

impl CellFunction {
    pub fn new(p: u64, arity: usize, cells: Vec<(Cell, Q)>) -> Result<CellFunction, CellError> {
        for (c, _) in &cells {
            if c.arity() != arity {
                return Err(CellError::ArityMismatch {
                    expected: arity,
                    got: c.arity(),
                });
            }
        }
        for i in 0..cells.len() {
            for j in (i + 1)..cells.len() {
                if !cells[i].0.is_disjoint(p, &cells[j].0) {
                    return Err(CellError::Overlap(i, j));
                }
            }
        }
        let mut cells: Vec<_> = cells.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(CellFunction { p, arity, cells })
    }

    pub fn zero(p: u64, arity: usize) -> CellFunction {
        CellFunction {
            p,
            arity,
            cells: Vec::new(),
        }
    }

    /// Indicator of a single cell.
    pub fn indicator(p: u64, cell: Cell) -> CellFunction {
        let arity = cell.arity();
        CellFunction::new(p, arity, vec![(cell, Q::one())]).expect("one cell cannot overlap")
    }

    /// Indicator of (p^j Z_p)^arity.
    pub fn lattice(p: u64, arity: usize, j: i64) -> CellFunction {
        CellFunction::indicator(p, Cell::new(vec![Ball::lattice(j); arity]))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn cells(&self) -> &[(Cell, Q)] {
        &self.cells
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    /// The exact integral: sum of value times cell measure.
    pub fn integrate(&self) -> Q {
        self.cells
            .iter()
            .map(|(c, v)| v * c.measure(self.p))
            .sum()
    }

    pub fn eval(&self, x: &[Q]) -> Q {
        assert_eq!(x.len(), self.arity);
        for (c, v) in &self.cells {
            if c.contains_point(self.p, x) {
                return v.clone();
            }
        }
        Q::zero()
    }

    /// Pointwise product; supports intersect cell-by-cell.
    pub fn product(&self, other: &CellFunction) -> CellFunction {
        assert_eq!(self.p, other.p);
        assert_eq!(self.arity, other.arity);
        let mut cells = Vec::new();
        for (a, va) in &self.cells {
            for (b, vb) in &other.cells {
                if let Some(c) = a.intersect(self.p, b) {
                    cells.push((c, va * vb));
                }
            }
        }
        CellFunction::new(self.p, self.arity, cells)
            .expect("intersections of disjoint families are disjoint")
    }

    /// Pointwise sum of two functions with disjoint supports.
    pub fn add_disjoint(&self, other: &CellFunction) -> Result<CellFunction, CellError> {
        assert_eq!(self.p, other.p);
        assert_eq!(self.arity, other.arity);
        let mut cells = self.cells.clone();
        cells.extend(other.cells.iter().cloned());
        CellFunction::new(self.p, self.arity, cells)
    }

    /// Scale all values by a rational.
    pub fn scale(&self, s: &Q) -> CellFunction {
        let cells = self
            .cells
            .iter()
            .map(|(c, v)| (c.clone(), v * s))
            .collect();
        CellFunction::new(self.p, self.arity, cells).expect("same cells stay disjoint")
    }

    /// Refine every cell so that all balls sit at exactly level k
    /// (k must be >= every current level). Pointwise the function is
    /// unchanged; the representation just gets finer.
    pub fn refine_to_level(&self, k: i64) -> CellFunction {
        let mut cells = Vec::new();
        for (c, v) in &self.cells {
            let per_coord: Vec<Vec<Ball>> = c.balls.iter().map(|b| b.refine(self.p, k)).collect();
            let mut parts: Vec<Vec<Ball>> = vec![Vec::new()];
            for coord in &per_coord {
                let mut next = Vec::with_capacity(parts.len() * coord.len());
                for prefix in &parts {
                    for b in coord {
                        let mut w = prefix.clone();
                        w.push(b.clone());
                        next.push(w);
                    }
                }
                parts = next;
            }
            for balls in parts {
                cells.push((Cell::new(balls), v.clone()));
            }
        }
        CellFunction::new(self.p, self.arity, cells).expect("refinement preserves disjointness")
    }

    /// g(x) = f(x - t): translate the support by t.
    pub fn translate(&self, t: &[Q]) -> CellFunction {
        assert_eq!(t.len(), self.arity);
        let cells = self
            .cells
            .iter()
            .map(|(c, v)| {
                let balls = c
                    .balls
                    .iter()
                    .zip(t)
                    .map(|(b, ti)| b.translate(self.p, ti))
                    .collect();
                (Cell::new(balls), v.clone())
            })
            .collect();
        CellFunction::new(self.p, self.arity, cells).expect("translation preserves disjointness")
    }

    /// g(x) = f(p^{-j} x): the support scales by p^j in every coordinate.
    pub fn scale_support_by_p_pow(&self, j: i64) -> CellFunction {
        let cells = self
            .cells
            .iter()
            .map(|(c, v)| {
                let balls = c
                    .balls
                    .iter()
                    .map(|b| b.scale_by_p_pow(self.p, j))
                    .collect();
                (Cell::new(balls), v.clone())
            })
            .collect();
        CellFunction::new(self.p, self.arity, cells).expect("scaling preserves disjointness")
    }

    /// A lower bound for the valuation of coordinate i over the support.
    pub fn coord_min_val(&self, i: usize) -> Option<i64> {
        self.cells
            .iter()
            .map(|(c, _)| c.balls[i].min_val(self.p))
            .min()
    }

    /// Max ball level over all cells and coordinates (the resolution of the
    /// representation); None for the zero function.
    pub fn max_level(&self) -> Option<i64> {
        self.cells
            .iter()
            .flat_map(|(c, _)| c.balls.iter().map(|b| b.level))
            .max()
    }
}

/// The p - 1 balls making up the shell {x : val(x) = v}.
pub fn shell_balls(p: u64, v: i64) -> Vec<Ball> {
    (1..p)
        .map(|d| Ball::new(p, &(Q::from_integer(Z::from(d)) * p_pow(p, v)), v + 1))
        .collect()
}

/// Indicator of the shell {x : val(x) = v} in one variable.
pub fn shell_indicator(p: u64, v: i64) -> CellFunction {
    let cells = shell_balls(p, v)
        .into_iter()
        .map(|b| (Cell::new(vec![b]), Q::one()))
        .collect();
    CellFunction::new(p, 1, cells).expect("shell balls are disjoint")
}

/// The truncation at depth K of val(.) restricted to Z_p: equal to val(y)
/// on the shells val = 1..K-1, and to K on the ball p^K Z_p (where the true
/// val(.) is >= K); zero on the unit shell and off Z_p.
pub fn val_indicator_truncated(p: u64, depth: i64) -> CellFunction {
    assert!(depth >= 1);
    let mut cells = Vec::new();
    for v in 1..depth {
        for b in shell_balls(p, v) {
            cells.push((Cell::new(vec![b]), Q::from_integer(Z::from(v))));
        }
    }
    cells.push((
        Cell::new(vec![Ball::lattice(depth)]),
        Q::from_integer(Z::from(depth)),
    ));
    CellFunction::new(p, 1, cells).expect("shells and the deep ball are disjoint")
}

/// |y| on Z_p, exactly (the function takes finitely many values there):
/// p^{-v} on the shell val = v for 0 <= v < depth, and 0 on p^depth Z_p.
/// The dropped tail has integral sum_{v >= depth} p^{-2v} (1 - 1/p).
pub fn abs_indicator_truncated(p: u64, depth: i64) -> CellFunction {
    assert!(depth >= 1);
    let mut cells = Vec::new();
    for v in 0..depth {
        for b in shell_balls(p, v) {
            cells.push((Cell::new(vec![b]), p_pow(p, -v)));
        }
    }
    CellFunction::new(p, 1, cells).expect("shells are disjoint")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q::{q, qi};

    #[test]
    fn canonical_centers() {
        let b = Ball::new(3, &qi(10), 1); // 10 ≡ 1 mod 3
        assert_eq!(b.center(), &qi(1));
        let b = Ball::new(3, &qi(9), 2); // val 2 >= level
        assert_eq!(b.center(), &qi(0));
        let b = Ball::new(3, &q(1, 2), 1); // 1/2 ≡ 2 mod 3
        assert_eq!(b.center(), &qi(2));
        let b = Ball::new(3, &q(1, 3), 1); // val -1: digits up to level 1
        assert_eq!(b.center(), &q(1, 3)); // 1/3 canonical: 1 * 3^{-1}, t in [1, 9)
        let b = Ball::new(3, &q(4, 3), 0); // 4/3 = 3^{-1} * 4, 4 mod 3 = 1
        assert_eq!(b.center(), &q(1, 3));
    }

    #[test]
    fn nesting_and_disjointness() {
        let zp = Ball::lattice(0);
        let three_zp = Ball::lattice(1);
        let unit_shell_ball = Ball::new(3, &qi(1), 1);
        assert!(zp.contains_ball(3, &three_zp));
        assert!(zp.contains_ball(3, &unit_shell_ball));
        assert!(three_zp.is_disjoint(3, &unit_shell_ball));
        assert_eq!(three_zp.intersect(3, &zp), Some(three_zp.clone()));
    }

    #[test]
    fn integrate_lattices() {
        assert_eq!(CellFunction::lattice(3, 1, 0).integrate(), qi(1));
        assert_eq!(CellFunction::lattice(3, 1, 1).integrate(), q(1, 3));
        assert_eq!(CellFunction::lattice(3, 3, 1).integrate(), q(1, 27));
        assert_eq!(CellFunction::lattice(5, 2, -1).integrate(), qi(25));
    }

    #[test]
    fn integrate_mixed_values() {
        // value 5 on 3Z_p x Z_p, value 1 on (Z_p - 3Z_p) x Z_p
        let mut cells = vec![(
            Cell::new(vec![Ball::lattice(1), Ball::lattice(0)]),
            qi(5),
        )];
        for b in shell_balls(3, 0) {
            cells.push((Cell::new(vec![b, Ball::lattice(0)]), qi(1)));
        }
        let f = CellFunction::new(3, 2, cells).unwrap();
        assert_eq!(f.integrate(), q(7, 3));
    }

    #[test]
    fn overlap_rejected() {
        let err = CellFunction::new(
            3,
            1,
            vec![
                (Cell::new(vec![Ball::lattice(0)]), qi(1)),
                (Cell::new(vec![Ball::lattice(2)]), qi(1)),
            ],
        )
        .unwrap_err();
        assert_eq!(err, CellError::Overlap(0, 1));
    }

    #[test]
    fn refinement_is_invisible() {
        let f = CellFunction::new(
            3,
            2,
            vec![
                (Cell::new(vec![Ball::lattice(0), Ball::lattice(1)]), q(2, 7)),
                (
                    Cell::new(vec![Ball::new(3, &q(1, 3), 0), Ball::lattice(0)]),
                    qi(-3),
                ),
            ],
        )
        .unwrap();
        let g = f.refine_to_level(2);
        assert_eq!(f.integrate(), g.integrate());
        for x in [
            vec![qi(0), qi(3)],
            vec![qi(1), qi(0)],
            vec![q(1, 3), qi(2)],
            vec![q(4, 3), qi(1)],
            vec![q(1, 9), qi(0)],
        ] {
            assert_eq!(f.eval(&x), g.eval(&x), "at {x:?}");
        }
    }

    #[test]
    fn product_is_intersection() {
        let f = CellFunction::lattice(3, 1, 0);
        let g = CellFunction::indicator(3, Cell::new(vec![Ball::new(3, &qi(1), 1)]));
        let h = f.product(&g);
        assert_eq!(h, g);
        let disjoint = CellFunction::indicator(3, Cell::new(vec![Ball::new(3, &q(1, 3), 0)]));
        assert!(f.product(&disjoint).is_zero());
    }

    #[test]
    fn shells_partition_the_lattice() {
        // shells 0..3 plus the deep ball give Z_p
        let mut total = q(1, 27); // measure of 3^3 Z_3
        for v in 0..3 {
            total += shell_indicator(3, v).integrate();
        }
        assert_eq!(total, qi(1));
        assert_eq!(shell_indicator(3, 2).integrate(), qi(2) * q(1, 27));
    }

    #[test]
    fn truncated_val_values() {
        let f = val_indicator_truncated(3, 4);
        assert_eq!(f.eval(&[qi(3)]), qi(1));
        assert_eq!(f.eval(&[qi(18)]), qi(2));
        assert_eq!(f.eval(&[qi(27)]), qi(3));
        assert_eq!(f.eval(&[qi(81)]), qi(4)); // truncated: true val is 4
        assert_eq!(f.eval(&[qi(243)]), qi(4)); // truncated: true val is 5
        assert_eq!(f.eval(&[qi(1)]), qi(0));
        assert_eq!(f.eval(&[q(1, 3)]), qi(0));
        // integral: sum_{v=1}^{3} v p^{-v}(1-1/p) + 4 * p^{-4}
        let expect = qi(1) * q(1, 3) * q(2, 3)
            + qi(2) * q(1, 9) * q(2, 3)
            + qi(3) * q(1, 27) * q(2, 3)
            + qi(4) * q(1, 81);
        assert_eq!(f.integrate(), expect);
    }

    #[test]
    fn truncated_abs_values() {
        let f = abs_indicator_truncated(3, 3);
        assert_eq!(f.eval(&[qi(2)]), qi(1));
        assert_eq!(f.eval(&[qi(3)]), q(1, 3));
        assert_eq!(f.eval(&[qi(9)]), q(1, 9));
        assert_eq!(f.eval(&[qi(27)]), qi(0)); // truncated away
        assert_eq!(f.eval(&[q(1, 3)]), qi(0));
    }

    #[test]
    fn translation_and_scaling() {
        let f = CellFunction::lattice(3, 1, 0);
        let g = f.translate(&[q(1, 3)]);
        assert_eq!(g.eval(&[q(1, 3)]), qi(1));
        assert_eq!(g.eval(&[qi(0)]), qi(0));
        assert_eq!(g.integrate(), qi(1));

        let h = f.scale_support_by_p_pow(1); // indicator of 3 Z_p
        assert_eq!(h, CellFunction::lattice(3, 1, 1));
        let w = f.scale_support_by_p_pow(-1);
        assert_eq!(w.eval(&[q(1, 3)]), qi(1));
        assert_eq!(w.integrate(), qi(3));
    }

    #[test]
    fn min_val_bounds() {
        let f = CellFunction::indicator(3, Cell::new(vec![Ball::new(3, &q(1, 9), 0)]));
        assert_eq!(f.coord_min_val(0), Some(-2));
        let g = CellFunction::lattice(3, 2, 1);
        assert_eq!(g.coord_min_val(0), Some(1));
        assert_eq!(g.coord_min_val(1), Some(1));
    }
}
