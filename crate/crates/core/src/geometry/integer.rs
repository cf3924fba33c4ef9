//! Exact integer feasibility of small rational inequality systems.
//!
//! The search runs over a Fourier–Motzkin elimination chain, choosing integer
//! values from the last variable back to the first and backtracking when an
//! interval holds no integer. Unbounded systems are first clipped to a box
//! that provably contains an integer point whenever one exists: writing the
//! polyhedron as `conv(V) + cone(R) + lin(L)` with integral `R` and `L`, any
//! integer point can be shifted by integer multiples of the generators into
//! `conv(V) + [0,1]R + [-1,1]L`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::cone::cone_generators;
use super::fm::{elimination_chain, variable_interval};
use super::lp::{feasible_point, lp_solve, LpOutcome, Sense};
use super::rational::{ceil_int, floor_int, int_rat, Rational, RationalVector};
use super::system::InequalitySystem;

/// Why a system has no integer solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InfeasibilityProof {
    /// No real solution at all.
    RealInfeasible,
    /// The exact real range of one variable contains no integer.
    EmptyIntegerInterval { variable: usize, lower: Rational, upper: Rational },
    /// Exhaustive backtracking over a box known to contain an integer
    /// solution if any exists found none.
    ExhaustedBox { lower: Vec<BigInt>, upper: Vec<BigInt>, nodes: usize },
}

impl fmt::Display for InfeasibilityProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfeasibilityProof::RealInfeasible => write!(f, "real relaxation infeasible"),
            InfeasibilityProof::EmptyIntegerInterval { variable, lower, upper } => write!(
                f,
                "p{} confined to [{lower}, {upper}] which contains no integer",
                variable + 1
            ),
            InfeasibilityProof::ExhaustedBox { lower, upper, nodes } => {
                let fmt_vec = |v: &[BigInt]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
                write!(
                    f,
                    "no integer point in box [{}] .. [{}] after {nodes} search nodes",
                    fmt_vec(lower),
                    fmt_vec(upper)
                )
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegerFeasibility {
    Point(Vec<BigInt>),
    Empty(InfeasibilityProof),
}

/// Decide exactly whether `system` has an integer solution.
pub fn find_integer_point(system: &InequalitySystem) -> IntegerFeasibility {
    let n = system.dim;
    if feasible_point(system).is_none() {
        return IntegerFeasibility::Empty(InfeasibilityProof::RealInfeasible);
    }
    if n == 0 {
        return IntegerFeasibility::Point(Vec::new());
    }
    let system = &remove_redundant(system);
    let order: Vec<usize> = (0..n - 1).collect();
    let chain = elimination_chain(system, &order);
    let last = n - 1;
    if let (Some(lo), Some(hi)) = variable_interval(&chain[last], last, &vec![Rational::zero(); n]) {
        if ceil_int(&lo) > floor_int(&hi) {
            return IntegerFeasibility::Empty(InfeasibilityProof::EmptyIntegerInterval {
                variable: last,
                lower: lo,
                upper: hi,
            });
        }
    }

    let mut lower = Vec::with_capacity(n);
    let mut upper = Vec::with_capacity(n);
    let mut bounded = true;
    for j in 0..n {
        let mut c = RationalVector::zeros(n);
        c[j] = Rational::one();
        let lo = lp_solve(&c, system, Sense::Minimize).ok().and_then(|o| o.value().cloned());
        let hi = lp_solve(&c, system, Sense::Maximize).ok().and_then(|o| o.value().cloned());
        if let (Some(l), Some(h)) = (&lo, &hi) {
            if ceil_int(l) > floor_int(h) {
                return IntegerFeasibility::Empty(InfeasibilityProof::EmptyIntegerInterval {
                    variable: j,
                    lower: l.clone(),
                    upper: h.clone(),
                });
            }
        }
        bounded &= lo.is_some() && hi.is_some();
        lower.push(lo);
        upper.push(hi);
    }
    let radius = if bounded { None } else { Some(search_radius(system)) };
    let mut lo_box = Vec::with_capacity(n);
    let mut hi_box = Vec::with_capacity(n);
    for j in 0..n {
        let r = radius.as_ref().map(|r| r[j].clone());
        let lo = match (&lower[j], &r) {
            (Some(l), Some(r)) => ceil_int(l).max(-r.clone()),
            (Some(l), None) => ceil_int(l),
            (None, Some(r)) => -r.clone(),
            (None, None) => unreachable!(),
        };
        let hi = match (&upper[j], &r) {
            (Some(h), Some(r)) => floor_int(h).min(r.clone()),
            (Some(h), None) => floor_int(h),
            (None, Some(r)) => r.clone(),
            (None, None) => unreachable!(),
        };
        lo_box.push(lo);
        hi_box.push(hi);
    }
    let boxed = system.with_box(&lo_box, &hi_box);
    let chain = elimination_chain(&boxed, &order);
    let mut point = vec![Rational::zero(); n];
    let mut nodes = 0usize;
    if backtrack(&chain, last, &mut point, &mut nodes) {
        let p: Vec<BigInt> = point.iter().map(|v| v.to_integer()).collect();
        debug_assert!(system.satisfied_by(&point));
        IntegerFeasibility::Point(p)
    } else {
        IntegerFeasibility::Empty(InfeasibilityProof::ExhaustedBox { lower: lo_box, upper: hi_box, nodes })
    }
}

fn backtrack(chain: &[InequalitySystem], var: usize, point: &mut [Rational], nodes: &mut usize) -> bool {
    let sys = &chain[var];
    if sys.has_contradiction() {
        return false;
    }
    let (lo, hi) = variable_interval(sys, var, point);
    let (Some(lo), Some(hi)) = (lo, hi) else {
        unreachable!("boxed system has finite intervals");
    };
    let mut v = ceil_int(&lo);
    let end = floor_int(&hi);
    while v <= end {
        *nodes += 1;
        point[var] = int_rat(&v);
        if var == 0 || backtrack(chain, var - 1, point, nodes) {
            return true;
        }
        v += 1;
    }
    point[var] = Rational::zero();
    false
}

/// Per-coordinate radius of a box guaranteed to contain an integer point of
/// the (nonempty) polyhedron `system` if it has one.
fn search_radius(system: &InequalitySystem) -> Vec<BigInt> {
    let n = system.dim;
    // Homogenization {(t, p) : t b - A p >= 0, t >= 0}.
    let mut cons: Vec<Vec<Rational>> = system
        .rows
        .iter()
        .map(|r| {
            let mut c = vec![r.rhs.clone()];
            c.extend(r.coeffs.iter().map(|a| -a));
            c
        })
        .collect();
    let mut t_pos = vec![Rational::zero(); n + 1];
    t_pos[0] = Rational::one();
    cons.push(t_pos);
    let gens = cone_generators(&cons, n + 1);
    let mut radius = vec![BigInt::zero(); n];
    let mut vertex_part = vec![Rational::zero(); n];
    for ray in &gens.rays {
        if ray[0].is_positive() {
            for j in 0..n {
                let v = (&ray[j + 1] / &ray[0]).abs();
                if v > vertex_part[j] {
                    vertex_part[j] = v;
                }
            }
        } else {
            for j in 0..n {
                radius[j] += ray[j + 1].abs().to_integer();
            }
        }
    }
    for l in &gens.lineality {
        for j in 0..n {
            radius[j] += l[j + 1].abs().to_integer();
        }
    }
    for j in 0..n {
        radius[j] += ceil_int(&vertex_part[j]);
    }
    radius
}

/// Drop rows implied by the others, judged by exact LP.
pub fn remove_redundant(system: &InequalitySystem) -> InequalitySystem {
    let mut rows = system.normalized().rows;
    let mut i = 0;
    while i < rows.len() {
        let row = rows.remove(i);
        let rest = InequalitySystem { dim: system.dim, rows: rows.clone() };
        let implied = match lp_solve(&RationalVector(row.coeffs.clone()), &rest, Sense::Maximize) {
            Ok(LpOutcome::Optimal { value, .. }) => value <= row.rhs,
            _ => false,
        };
        if !implied {
            rows.insert(i, row);
            i += 1;
        }
    }
    InequalitySystem { dim: system.dim, rows }
}

/// Convenience for callers that only need feasibility of an LP-bounded system.
pub fn is_real_feasible(system: &InequalitySystem) -> bool {
    !matches!(
        lp_solve(&RationalVector::zeros(system.dim), system, Sense::Maximize),
        Ok(LpOutcome::Infeasible)
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::ratio;
    use crate::geometry::system::Row;

    fn sys(dim: usize, rows: &[(&[i64], i64)]) -> InequalitySystem {
        InequalitySystem::from_rows(dim, rows.iter().map(|(c, b)| Row::from_ints(c, *b)).collect()).unwrap()
    }

    #[test]
    fn odd_cycle_has_no_integer_point() {
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
        match find_integer_point(&s) {
            IntegerFeasibility::Empty(InfeasibilityProof::EmptyIntegerInterval { lower, upper, .. }) => {
                assert_eq!(lower, ratio(1, 2));
                assert_eq!(upper, ratio(1, 2));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_system_with_integer_points() {
        let s = sys(2, &[(&[1, 1], 1), (&[0, 1], 1)]);
        match find_integer_point(&s) {
            IntegerFeasibility::Point(p) => {
                let q: Vec<Rational> = p.iter().map(int_rat).collect();
                assert!(s.satisfied_by(&q));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn thin_unbounded_strip_without_integers() {
        // 2x - 2y in [1, 1]: a line with no integer point, unbounded both ways.
        let s = sys(2, &[(&[2, -2], 1), (&[-2, 2], -1)]);
        match find_integer_point(&s) {
            IntegerFeasibility::Empty(InfeasibilityProof::ExhaustedBox { .. }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let s = sys(2, &[(&[1, 0], 1), (&[1, 0], 2), (&[1, 1], 5), (&[0, 1], 1)]);
        let r = remove_redundant(&s);
        assert_eq!(r.rows, vec![Row::from_ints(&[0, 1], 1), Row::from_ints(&[1, 0], 1)]);
    }

    #[test]
    fn real_infeasible() {
        let s = sys(1, &[(&[1], 0), (&[-1], -1)]);
        assert_eq!(find_integer_point(&s), IntegerFeasibility::Empty(InfeasibilityProof::RealInfeasible));
        assert!(!is_real_feasible(&s));
    }
}
