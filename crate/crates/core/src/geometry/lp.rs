//! Exact two-phase simplex with Bland's rule.
//!
//! The core solver works on standard form `min c x, A x = b, x >= 0`.
//! Inequality systems `A p <= b` with free variables are optimized through
//! their dual `min b u, A^T u = c, u >= 0`, whose simplex multipliers are an
//! optimal primal point. Systems here have few variables and many rows, so the
//! dual tableau stays small.

use num_traits::{Signed, Zero};

use super::rational::{Rational, RationalVector};
use super::system::InequalitySystem;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, point: RationalVector },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&RationalVector> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StandardOutcome {
    Optimal {
        x: Vec<Rational>,
        value: Rational,
        /// Simplex multipliers, one per equality row.
        duals: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Number of structural columns; columns beyond are artificial.
    nvar: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize, cost: &mut [Rational], obj: &mut Rational) {
        let inv = Rational::from_integer(1.into()) / &self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            for (v, p) in self.rows[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &prhs;
        }
        if !cost[c].is_zero() {
            let factor = cost[c].clone();
            *obj += &factor * &prhs;
            for (v, p) in cost.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Run simplex iterations on the given reduced-cost row. Only structural
    /// columns may enter. Returns false if the objective is unbounded below.
    fn optimize(&mut self, cost: &mut [Rational], obj: &mut Rational) -> bool {
        loop {
            let Some(c) = (0..self.nvar).find(|&j| cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, c, cost, obj);
        }
    }
}

/// Solve `min c x` subject to `A x = b`, `x >= 0` exactly.
pub fn solve_standard(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> StandardOutcome {
    let m = a.len();
    let nvar = c.len();
    let mut signs = Vec::with_capacity(m);
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        debug_assert_eq!(row.len(), nvar);
        let neg = bi.is_negative();
        signs.push(neg);
        let mut r: Vec<Rational> = row.iter().map(|v| if neg { -v } else { v.clone() }).collect();
        r.extend((0..m).map(|k| Rational::from_integer(i64::from(k == i).into())));
        rows.push(r);
        rhs.push(if neg { -bi } else { bi.clone() });
    }
    let mut t = Tableau { rows, rhs, basis: (nvar..nvar + m).collect(), nvar };

    // Phase 1: minimize the sum of artificials.
    let mut cost: Vec<Rational> = (0..nvar + m)
        .map(|j| {
            if j < nvar {
                -t.rows.iter().map(|r| r[j].clone()).sum::<Rational>()
            } else {
                Rational::zero()
            }
        })
        .collect();
    let mut obj: Rational = t.rhs.iter().sum();
    let bounded = t.optimize(&mut cost, &mut obj);
    debug_assert!(bounded);
    if obj.is_positive() {
        return StandardOutcome::Infeasible;
    }
    // Drive zero-level artificials out of the basis where possible; the rest
    // sit on redundant rows whose structural entries are all zero.
    for r in 0..m {
        if t.basis[r] >= nvar {
            if let Some(j) = (0..nvar).find(|&j| !t.rows[r][j].is_zero()) {
                let mut dummy = vec![Rational::zero(); nvar + m];
                let mut dobj = Rational::zero();
                t.pivot(r, j, &mut dummy, &mut dobj);
            }
        }
    }

    // Phase 2.
    let full_cost = |j: usize| -> Rational {
        if j < nvar {
            c[j].clone()
        } else {
            Rational::zero()
        }
    };
    let mut cost: Vec<Rational> = (0..nvar + m)
        .map(|j| {
            let mut d = full_cost(j);
            for (i, row) in t.rows.iter().enumerate() {
                let cb = full_cost(t.basis[i]);
                if !cb.is_zero() && !row[j].is_zero() {
                    d -= cb * &row[j];
                }
            }
            d
        })
        .collect();
    let mut obj: Rational = t
        .basis
        .iter()
        .zip(&t.rhs)
        .map(|(&bj, v)| full_cost(bj) * v)
        .sum();
    if !t.optimize(&mut cost, &mut obj) {
        return StandardOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); nvar];
    for (i, &bj) in t.basis.iter().enumerate() {
        if bj < nvar {
            x[bj] = t.rhs[i].clone();
        }
    }
    let duals = (0..m)
        .map(|i| {
            let pi = -cost[nvar + i].clone();
            if signs[i] {
                -pi
            } else {
                pi
            }
        })
        .collect();
    StandardOutcome::Optimal { x, value: obj, duals }
}

/// Optimize a linear objective over `{p : A p <= b}` exactly.
pub fn lp_solve(objective: &RationalVector, system: &InequalitySystem, sense: Sense) -> Result<LpOutcome> {
    if objective.dim() != system.dim {
        return Err(Error::DimensionMismatch { expected: system.dim, found: objective.dim() });
    }
    let c: Vec<Rational> = match sense {
        Sense::Maximize => objective.0.clone(),
        Sense::Minimize => objective.0.iter().map(|v| -v).collect(),
    };
    let outcome = max_over_system(&c, system);
    Ok(match outcome {
        LpOutcome::Optimal { value, point } => LpOutcome::Optimal {
            value: if sense == Sense::Minimize { -value } else { value },
            point,
        },
        other => other,
    })
}

/// Feasible point of `A p <= b`, if any.
pub fn feasible_point(system: &InequalitySystem) -> Option<RationalVector> {
    match max_over_system(&vec![Rational::zero(); system.dim], system) {
        LpOutcome::Optimal { point, .. } => Some(point),
        _ => None,
    }
}

fn max_over_system(c: &[Rational], system: &InequalitySystem) -> LpOutcome {
    let n = system.dim;
    // Dual: rows indexed by variables j, columns by inequalities i.
    let a: Vec<Vec<Rational>> = (0..n)
        .map(|j| system.rows.iter().map(|r| r.coeffs[j].clone()).collect())
        .collect();
    let cost: Vec<Rational> = system.rows.iter().map(|r| r.rhs.clone()).collect();
    match solve_standard(&a, c, &cost) {
        StandardOutcome::Optimal { value, duals, .. } => {
            let point = RationalVector(duals);
            debug_assert!(system.satisfied_by(&point.0));
            LpOutcome::Optimal { value, point }
        }
        StandardOutcome::Unbounded => LpOutcome::Infeasible,
        StandardOutcome::Infeasible => {
            if c.iter().all(Zero::is_zero) {
                // Cannot happen: u = 0 is dual feasible for a zero objective.
                unreachable!("zero objective dual is always feasible")
            }
            let zero = vec![Rational::zero(); n];
            match solve_standard(&a, &zero, &cost) {
                StandardOutcome::Unbounded => LpOutcome::Infeasible,
                _ => LpOutcome::Unbounded,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::{rat, ratio};
    use crate::geometry::system::Row;

    fn sys(dim: usize, rows: &[(&[i64], i64)]) -> InequalitySystem {
        InequalitySystem::from_rows(dim, rows.iter().map(|(c, b)| Row::from_ints(c, *b)).collect()).unwrap()
    }

    #[test]
    fn zero_objective_on_empty_system() {
        let out = lp_solve(&RationalVector::from_ints(&[0]), &InequalitySystem::new(1), Sense::Maximize).unwrap();
        assert_eq!(out.value(), Some(&rat(0)));
        assert_eq!(out.point().unwrap().dim(), 1);
    }

    #[test]
    fn one_variable_box() {
        let s = sys(1, &[(&[1], 1), (&[-1], 0)]);
        let out = lp_solve(&RationalVector::from_ints(&[1]), &s, Sense::Maximize).unwrap();
        assert_eq!(out, LpOutcome::Optimal { value: rat(1), point: RationalVector::from_ints(&[1]) });
        let out = lp_solve(&RationalVector::from_ints(&[1]), &s, Sense::Minimize).unwrap();
        assert_eq!(out.value(), Some(&rat(0)));
    }

    #[test]
    fn half_integral_feasible_point() {
        let s = sys(
            3,
            &[
                (&[1, 1, 0], 1),
                (&[0, 1, 1], 1),
                (&[1, 0, 1], 1),
                (&[-1, -1, 0], -1),
                (&[0, -1, -1], -1),
                (&[-1, 0, -1], -1),
            ],
        );
        let p = feasible_point(&s).unwrap();
        assert_eq!(p, RationalVector(vec![ratio(1, 2); 3]));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let s = sys(1, &[(&[1], 0), (&[-1], -1)]);
        let out = lp_solve(&RationalVector::from_ints(&[1]), &s, Sense::Maximize).unwrap();
        assert_eq!(out, LpOutcome::Infeasible);
        let s = sys(2, &[(&[1, 0], 3)]);
        let out = lp_solve(&RationalVector::from_ints(&[0, 1]), &s, Sense::Maximize).unwrap();
        assert_eq!(out, LpOutcome::Unbounded);
        let out = lp_solve(&RationalVector::from_ints(&[1, 0]), &s, Sense::Maximize).unwrap();
        assert_eq!(out.value(), Some(&rat(3)));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s = sys(2, &[(&[1, 0], 3)]);
        assert!(lp_solve(&RationalVector::from_ints(&[1]), &s, Sense::Maximize).is_err());
    }

    #[test]
    fn standard_form_with_redundant_rows() {
        // x1 + x2 = 1 stated twice; min x1.
        let a = vec![vec![rat(1), rat(1)], vec![rat(1), rat(1)]];
        let out = solve_standard(&a, &[rat(1), rat(1)], &[rat(1), rat(0)]);
        match out {
            StandardOutcome::Optimal { x, value, .. } => {
                assert_eq!(value, rat(0));
                assert_eq!(x, vec![rat(0), rat(1)]);
            }
            other => panic!("{other:?}"),
        }
    }
}
