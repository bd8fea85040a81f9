//! Exact two-phase simplex over the rationals with Bland's rule.
//!
//! Every variable is nonnegative and all input data are integers. The solver
//! first runs on `Ratio<i64>` with checked arithmetic; if an intermediate value
//! overflows it starts over on `BigRational`. Either way the answer is exact,
//! and Bland's rule makes the pivot sequence (and so the returned vertex)
//! deterministic.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, i64)>,
    pub relation: Relation,
    pub rhs: i64,
}

impl Constraint {
    pub fn new(coeffs: Vec<(usize, i64)>, relation: Relation, rhs: i64) -> Self {
        Self { coeffs, relation, rhs }
    }
}

/// `maximize objective·x` subject to the constraints and `x >= 0`.
///
/// An empty objective makes this a pure feasibility problem.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Vec<(usize, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { values: Vec<BigRational>, objective: BigRational },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }

    pub fn values(&self) -> Option<&[BigRational]> {
        match self {
            LpOutcome::Optimal { values, .. } => Some(values),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        Self { num_vars, ..Self::default() }
    }

    pub fn push(&mut self, coeffs: Vec<(usize, i64)>, relation: Relation, rhs: i64) {
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
    }

    pub fn solve(&self) -> LpOutcome {
        if let Some(out) = Tableau::<Ratio<i64>>::build(self).and_then(|t| t.run(self)) {
            return out;
        }
        Tableau::<BigRational>::build(self)
            .and_then(|t| t.run(self))
            .expect("BigRational arithmetic cannot overflow")
    }

    /// Solves on `BigRational` directly, skipping the machine-word attempt.
    pub fn solve_big(&self) -> LpOutcome {
        Tableau::<BigRational>::build(self)
            .and_then(|t| t.run(self))
            .expect("BigRational arithmetic cannot overflow")
    }

    /// Exact check that `values` satisfies every constraint and sign condition.
    pub fn is_satisfied_by(&self, values: &[BigRational]) -> bool {
        if values.len() != self.num_vars || values.iter().any(|v| v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs: BigRational = c
                .coeffs
                .iter()
                .map(|&(j, a)| &values[j] * BigRational::from_integer(BigInt::from(a)))
                .sum();
            let rhs = BigRational::from_integer(BigInt::from(c.rhs));
            match c.relation {
                Relation::Le => lhs <= rhs,
                Relation::Ge => lhs >= rhs,
                Relation::Eq => lhs == rhs,
            }
        })
    }
}

trait Scalar: Clone + PartialOrd {
    fn from_i64(v: i64) -> Self;
    fn is_zero_(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn add_(&self, o: &Self) -> Option<Self>;
    fn sub_(&self, o: &Self) -> Option<Self>;
    fn mul_(&self, o: &Self) -> Option<Self>;
    fn div_(&self, o: &Self) -> Option<Self>;
    fn to_big(&self) -> BigRational;
}

impl Scalar for Ratio<i64> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(v)
    }
    fn is_zero_(&self) -> bool {
        self.is_zero()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn add_(&self, o: &Self) -> Option<Self> {
        self.checked_add(o)
    }
    fn sub_(&self, o: &Self) -> Option<Self> {
        self.checked_sub(o)
    }
    fn mul_(&self, o: &Self) -> Option<Self> {
        self.checked_mul(o)
    }
    fn div_(&self, o: &Self) -> Option<Self> {
        self.checked_div(o)
    }
    fn to_big(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
}

impl Scalar for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero_(&self) -> bool {
        self.is_zero()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn add_(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub_(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul_(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_(&self, o: &Self) -> Option<Self> {
        Some(self / o)
    }
    fn to_big(&self) -> BigRational {
        self.clone()
    }
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    /// Columns `[0, num_vars)` are structural, then slacks, then artificials.
    num_vars: usize,
    first_artificial: usize,
    cols: usize,
}

enum Step {
    Optimal,
    Unbounded,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &LinearProgram) -> Option<Self> {
        let m = lp.constraints.len();
        let num_slack = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();
        // normalised relations after making every rhs nonnegative
        let norm: Vec<(Relation, bool)> = lp
            .constraints
            .iter()
            .map(|c| {
                let flip = c.rhs < 0;
                let rel = match (c.relation, flip) {
                    (Relation::Le, true) => Relation::Ge,
                    (Relation::Ge, true) => Relation::Le,
                    (r, _) => r,
                };
                (rel, flip)
            })
            .collect();
        let num_art = norm.iter().filter(|(r, _)| *r != Relation::Le).count();
        let first_artificial = lp.num_vars + num_slack;
        let cols = first_artificial + num_art;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = lp.num_vars;
        let mut art = first_artificial;
        for (c, &(rel, flip)) in lp.constraints.iter().zip(&norm) {
            let sign = if flip { -1 } else { 1 };
            let mut row = alloc::vec![T::from_i64(0); cols + 1];
            for &(j, a) in &c.coeffs {
                let v = row[j].add_(&T::from_i64(a.checked_mul(sign)?))?;
                row[j] = v;
            }
            row[cols] = T::from_i64(c.rhs.checked_mul(sign)?);
            if c.relation != Relation::Eq {
                // the slack keeps its original orientation: Le gets +s, Ge gets -s
                let s = if c.relation == Relation::Le { sign } else { -sign };
                row[slack] = T::from_i64(s);
                if rel == Relation::Le {
                    basis.push(slack);
                }
                slack += 1;
            }
            if rel != Relation::Le {
                row[art] = T::from_i64(1);
                basis.push(art);
                art += 1;
            }
            rows.push(row);
        }
        Some(Self { rows, basis, num_vars: lp.num_vars, first_artificial, cols })
    }

    fn pivot(&mut self, obj: &mut [T], r: usize, c: usize) -> Option<()> {
        let p = self.rows[r][c].clone();
        let pivot_row: Vec<T> = self.rows[r].iter().map(|v| v.div_(&p)).collect::<Option<_>>()?;
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero_() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero_() {
                    *x = x.sub_(&f.mul_(y)?)?;
                }
            }
        }
        if !obj[c].is_zero_() {
            let f = obj[c].clone();
            for (x, y) in obj.iter_mut().zip(&pivot_row) {
                if !y.is_zero_() {
                    *x = x.sub_(&f.mul_(y)?)?;
                }
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
        Some(())
    }

    /// Objective row for `maximize Σ cost_j x_j`, reduced against the current basis.
    fn objective_row(&self, cost: &[(usize, T)]) -> Option<Vec<T>> {
        let mut obj = alloc::vec![T::from_i64(0); self.cols + 1];
        for (j, v) in cost {
            obj[*j] = obj[*j].sub_(v)?;
        }
        for (i, &b) in self.basis.iter().enumerate() {
            if obj[b].is_zero_() {
                continue;
            }
            let f = obj[b].clone();
            for (x, y) in obj.iter_mut().zip(&self.rows[i]) {
                if !y.is_zero_() {
                    *x = x.sub_(&f.mul_(y)?)?;
                }
            }
        }
        Some(obj)
    }

    fn iterate(&mut self, obj: &mut [T], allowed: usize) -> Option<Step> {
        loop {
            let Some(enter) = (0..allowed).find(|&j| obj[j].is_neg()) else {
                return Some(Step::Optimal);
            };
            let mut best: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_pos() {
                    continue;
                }
                let ratio = row[self.cols].div_(&row[enter])?;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((leave, _)) = best else {
                return Some(Step::Unbounded);
            };
            self.pivot(obj, leave, enter)?;
        }
    }

    fn run(mut self, lp: &LinearProgram) -> Option<LpOutcome> {
        // phase one: maximise minus the sum of the artificials
        if self.first_artificial < self.cols {
            let cost: Vec<(usize, T)> = (self.first_artificial..self.cols).map(|j| (j, T::from_i64(-1))).collect();
            let mut obj = self.objective_row(&cost)?;
            let cols = self.cols;
            match self.iterate(&mut obj, cols)? {
                Step::Optimal => {}
                Step::Unbounded => unreachable!("phase one is bounded above by zero"),
            }
            if obj[self.cols].is_neg() {
                return Some(LpOutcome::Infeasible);
            }
            // drive zero-valued artificials out of the basis
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero_()) {
                        Some(j) => {
                            self.pivot(&mut obj, i, j)?;
                        }
                        None => {
                            self.rows.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let cost: Vec<(usize, T)> = lp.objective.iter().map(|&(j, v)| (j, T::from_i64(v))).collect();
        let mut obj = self.objective_row(&cost)?;
        let allowed = self.first_artificial;
        if let Step::Unbounded = self.iterate(&mut obj, allowed)? {
            return Some(LpOutcome::Unbounded);
        }
        let mut values = alloc::vec![BigRational::zero(); self.num_vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.num_vars {
                values[b] = self.rows[i][self.cols].to_big();
            }
        }
        Some(LpOutcome::Optimal { values, objective: obj[self.cols].to_big() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn textbook_maximum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), 36
        let mut lp = LinearProgram::new(2);
        lp.push(vec![(0, 1)], Relation::Le, 4);
        lp.push(vec![(1, 2)], Relation::Le, 12);
        lp.push(vec![(0, 3), (1, 2)], Relation::Le, 18);
        lp.objective = vec![(0, 3), (1, 5)];
        let out = lp.solve();
        assert_eq!(out, LpOutcome::Optimal { values: vec![r(2, 1), r(6, 1)], objective: r(36, 1) });
        assert!(lp.is_satisfied_by(out.values().unwrap()));
    }

    #[test]
    fn fractional_vertex_and_equalities() {
        // max t s.t. x - t >= 0, y - t >= 0, x + 2y = 1
        let mut lp = LinearProgram::new(3);
        lp.push(vec![(0, 1), (2, -1)], Relation::Ge, 0);
        lp.push(vec![(1, 1), (2, -1)], Relation::Ge, 0);
        lp.push(vec![(0, 1), (1, 2)], Relation::Eq, 1);
        lp.objective = vec![(2, 1)];
        match lp.solve() {
            LpOutcome::Optimal { values, objective } => {
                assert_eq!(objective, r(1, 3));
                assert_eq!(values, vec![r(1, 3), r(1, 3), r(1, 3)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.push(vec![(0, 1)], Relation::Ge, 2);
        lp.push(vec![(0, 1)], Relation::Le, 1);
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(2);
        lp.push(vec![(0, 1), (1, -1)], Relation::Le, 1);
        lp.objective = vec![(0, 1)];
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn negative_rhs_and_redundant_rows() {
        // -x - y = -2 twice, x <= 1  ->  feasible
        let mut lp = LinearProgram::new(2);
        lp.push(vec![(0, -1), (1, -1)], Relation::Eq, -2);
        lp.push(vec![(0, -1), (1, -1)], Relation::Eq, -2);
        lp.push(vec![(0, 1)], Relation::Le, 1);
        let out = lp.solve();
        assert!(lp.is_satisfied_by(out.values().unwrap()));
        // -x >= -1 with x >= 3 is infeasible
        let mut lp = LinearProgram::new(1);
        lp.push(vec![(0, -1)], Relation::Ge, -1);
        lp.push(vec![(0, 1)], Relation::Ge, 3);
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
    }

    #[test]
    fn word_and_big_paths_agree() {
        let mut lp = LinearProgram::new(3);
        lp.push(vec![(0, 7), (1, -3), (2, 5)], Relation::Le, 11);
        lp.push(vec![(0, 2), (1, 9)], Relation::Ge, 4);
        lp.push(vec![(1, 1), (2, 1)], Relation::Eq, 3);
        lp.objective = vec![(0, 1), (2, 2)];
        assert_eq!(lp.solve(), lp.solve_big());
    }
}
