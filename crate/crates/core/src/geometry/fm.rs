//! General Fourier–Motzkin elimination with gcd-normalized output rows.

use num_traits::{Signed, Zero};

use super::rational::{dot, Rational};
use super::system::InequalitySystem;

/// Project out variable `var`: the result has a zero coefficient on `var`
/// in every row, and a point extends to a solution of `system` exactly when
/// it satisfies the result and [`variable_interval`] is nonempty there.
pub fn fm_eliminate_general(system: &InequalitySystem, var: usize) -> InequalitySystem {
    assert!(var < system.dim, "variable index out of range");
    let mut out = InequalitySystem::new(system.dim);
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for row in &system.rows {
        let a = &row.coeffs[var];
        if a.is_zero() {
            out.push(row.clone());
        } else if a.is_positive() {
            upper.push(row.scale(&(Rational::from_integer(1.into()) / a)));
        } else {
            lower.push(row.scale(&(Rational::from_integer(1.into()) / -a)));
        }
    }
    for u in &upper {
        for l in &lower {
            let mut sum = u.add(l);
            sum.coeffs[var] = Rational::zero();
            out.push(sum);
        }
    }
    out.normalized()
}

/// Closed interval `[lower, upper]` (with `None` for an infinite end) that the
/// rows of `system` mentioning `var` impose on it once every other variable
/// is fixed by `point` (the entry at `var` is ignored).
pub fn variable_interval(system: &InequalitySystem, var: usize, point: &[Rational]) -> (Option<Rational>, Option<Rational>) {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for row in &system.rows {
        let a = &row.coeffs[var];
        if a.is_zero() {
            continue;
        }
        let rest = dot(&row.coeffs, point) - a * &point[var];
        let bound = (&row.rhs - rest) / a;
        if a.is_positive() {
            if hi.as_ref().is_none_or(|h| bound < *h) {
                hi = Some(bound);
            }
        } else if lo.as_ref().is_none_or(|l| bound > *l) {
            lo = Some(bound);
        }
    }
    (lo, hi)
}

/// The systems obtained by eliminating variables in `order` one after the
/// other; entry `k` has the first `k` variables of `order` eliminated.
pub fn elimination_chain(system: &InequalitySystem, order: &[usize]) -> Vec<InequalitySystem> {
    let mut chain = vec![system.normalized()];
    for &v in order {
        let next = fm_eliminate_general(chain.last().unwrap(), v);
        chain.push(next);
    }
    chain
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
    fn pinned_variable_leaves_nothing() {
        let s = sys(1, &[(&[1], 1), (&[-1], -1)]);
        let out = fm_eliminate_general(&s, 0);
        assert!(out.is_empty());
        assert_eq!(variable_interval(&s, 0, &[rat(0)]), (Some(rat(1)), Some(rat(1))));
    }

    #[test]
    fn two_row_sum() {
        let s = sys(2, &[(&[1, 1], 1), (&[-1, 0], 0)]);
        let out = fm_eliminate_general(&s, 0);
        assert_eq!(out.rows, vec![Row::from_ints(&[0, 1], 1)]);
    }

    #[test]
    fn odd_cycle_system_collapses_to_half_integers() {
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
        let chain = elimination_chain(&s, &[0, 1]);
        assert!(chain[1].rows.iter().all(|r| r.coeffs[0].is_zero()));
        let (lo, hi) = variable_interval(&chain[2], 2, &[rat(0), rat(0), rat(0)]);
        assert_eq!(lo, Some(ratio(1, 2)));
        assert_eq!(hi, Some(ratio(1, 2)));
    }
}
