//! Integer subgradients by Fourier–Motzkin elimination without cross rows.
//!
//! For an integrally convex `f` the local system `<y - x, p> <= f(y) - f(x)`
//! over `y - x` in {-1,0,1}^n describes the real subdifferential at `x`, and
//! when a variable is eliminated the sums of its upper and lower rows are
//! implied by the rows not involving it. Eliminating therefore just keeps the
//! rows with a zero coefficient, and integers can be chosen variable by
//! variable from the last to the first.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::fm::variable_interval;
use crate::geometry::linalg::rank;
use crate::geometry::{ceil_int, floor_int, int_rat, lp_solve, LpOutcome, Rational, RationalVector, Sense};
use crate::geometry::{InequalitySystem, Row};
use crate::zfunction::{ZFunction, ZPoint};

/// Rows `<y - x, p> <= f(y) - f(x)` for every neighbor `y` of `x` in the
/// domain, in lexicographic order of `y`.
pub fn build_local_system(f: &ZFunction, x: &ZPoint) -> Result<InequalitySystem> {
    let fx = f.get(x).ok_or_else(|| Error::NotInDomain(x.to_string()))?;
    let mut sys = InequalitySystem::new(f.dim());
    for y in x.unit_neighbors() {
        if let Some(fy) = f.get(&y) {
            let d = y.sub(x);
            sys.push(Row::new(d.0.iter().map(int_rat).collect(), int_rat(&(fy - fx))));
        }
    }
    Ok(sys)
}

/// The full system over every domain point, not just the neighbors.
pub fn build_global_system(f: &ZFunction, x: &ZPoint) -> Result<InequalitySystem> {
    let fx = f.get(x).ok_or_else(|| Error::NotInDomain(x.to_string()))?;
    let mut sys = InequalitySystem::new(f.dim());
    for (y, fy) in f.iter() {
        if y != x {
            sys.push(Row::new(y.sub(x).0.iter().map(int_rat).collect(), int_rat(&(fy - fx))));
        }
    }
    Ok(sys)
}

/// Rows split by the sign of their coefficient on `var`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub var: usize,
    pub plus: Vec<Row>,
    pub zero: Vec<Row>,
    pub minus: Vec<Row>,
}

impl StageRecord {
    /// Bounds on `var` once the variables still present are fixed by `point`.
    pub fn interval(&self, dim: usize, point: &[Rational]) -> (Option<Rational>, Option<Rational>) {
        let rows = self.plus.iter().chain(&self.minus).cloned().collect();
        variable_interval(&InequalitySystem { dim, rows }, self.var, point)
    }
}

/// Keep only the rows without `var`; the others are recorded for
/// back-substitution.
pub fn fm_eliminate_simplified(system: &InequalitySystem, var: usize) -> (InequalitySystem, StageRecord) {
    let mut rec = StageRecord { var, plus: Vec::new(), zero: Vec::new(), minus: Vec::new() };
    for row in &system.rows {
        let a = &row.coeffs[var];
        if a.is_positive() {
            rec.plus.push(row.clone());
        } else if a.is_negative() {
            rec.minus.push(row.clone());
        } else {
            rec.zero.push(row.clone());
        }
    }
    let reduced = InequalitySystem { dim: system.dim, rows: rec.zero.clone() };
    (reduced, rec)
}

/// Stage records for eliminating every variable in `order`.
pub fn simplified_stages(system: &InequalitySystem, order: &[usize]) -> Vec<StageRecord> {
    let mut current = system.clone();
    let mut stages = Vec::with_capacity(order.len());
    for &v in order {
        let (next, rec) = fm_eliminate_simplified(&current, v);
        stages.push(rec);
        current = next;
    }
    stages
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub var: usize,
    pub plus: usize,
    pub zero: usize,
    pub minus: usize,
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
    pub chosen: BigInt,
}

/// Back-substitution steps in the order they were taken (last stage first).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BackSubstitutionTrace {
    pub steps: Vec<TraceStep>,
}

impl fmt::Display for BackSubstitutionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |b: &Option<Rational>, inf: &str| b.as_ref().map_or(inf.to_string(), ToString::to_string);
        for s in &self.steps {
            writeln!(
                f,
                "p{}: rows plus {} zero {} minus {}  bounds [{}, {}]  chosen {}",
                s.var + 1,
                s.plus,
                s.zero,
                s.minus,
                show(&s.lower, "-inf"),
                show(&s.upper, "+inf"),
                s.chosen
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubgradientCertificate {
    pub x: ZPoint,
    pub p: ZPoint,
    /// Number of domain points checked against the subgradient inequality.
    pub verified_rows: usize,
}

/// Check `f(y) - f(x) >= <p, y - x>` for every `y` in the domain.
pub fn verify_subgradient(f: &ZFunction, x: &ZPoint, p: &ZPoint) -> Result<SubgradientCertificate> {
    let fx = f.get(x).ok_or_else(|| Error::NotInDomain(x.to_string()))?;
    for (y, fy) in f.iter() {
        if fy - fx < p.dot(&y.sub(x)) {
            return Err(Error::InvalidArgument(format!("{p} violates the subgradient inequality at {y}")));
        }
    }
    Ok(SubgradientCertificate { x: x.clone(), p: p.clone(), verified_rows: f.len() })
}

fn default_order(n: usize) -> Vec<usize> {
    (0..n).collect()
}

fn check_order(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return Err(Error::InvalidArgument(format!("elimination order must be a permutation of 1..{n}")));
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Rule {
    /// Floor of a finite upper bound, else ceiling of the lower, else 0.
    PreferUpper,
    /// Upper bounds only; fails on an infinite one.
    UpperOnly,
}

fn back_substitute(
    sys: &InequalitySystem,
    order: &[usize],
    rule: Rule,
) -> Result<(Vec<Rational>, BackSubstitutionTrace)> {
    let n = sys.dim;
    let stages = simplified_stages(sys, order);
    let mut point = vec![Rational::zero(); n];
    let mut trace = BackSubstitutionTrace::default();
    for stage in stages.iter().rev() {
        let (lower, upper) = stage.interval(n, &point);
        let chosen = match (&lower, &upper, rule) {
            (_, Some(u), _) => floor_int(u),
            (_, None, Rule::UpperOnly) => {
                return Err(Error::UnboundedSubdifferential(format!("+e{}", stage.var + 1)));
            }
            (Some(l), None, Rule::PreferUpper) => ceil_int(l),
            (None, None, Rule::PreferUpper) => BigInt::zero(),
        };
        if lower.as_ref().is_some_and(|l| int_rat(&chosen) < *l) {
            return Err(Error::NotIntegrallyConvex(format!(
                "no integer value for p{} in [{}, {}]",
                stage.var + 1,
                lower.as_ref().unwrap(),
                upper.as_ref().map_or("+inf".to_string(), ToString::to_string)
            )));
        }
        point[stage.var] = int_rat(&chosen);
        trace.steps.push(TraceStep {
            var: stage.var,
            plus: stage.plus.len(),
            zero: stage.zero.len(),
            minus: stage.minus.len(),
            lower,
            upper,
            chosen,
        });
    }
    Ok((point, trace))
}

/// An integer subgradient of `f` at `x` from the local system, checked
/// against every domain point. `order` defaults to `0, 1, ..., n-1`.
pub fn fm_integer_subgradient(
    f: &ZFunction,
    x: &ZPoint,
    order: Option<&[usize]>,
) -> Result<(SubgradientCertificate, BackSubstitutionTrace)> {
    let n = f.dim();
    let order = order.map_or_else(|| default_order(n), <[usize]>::to_vec);
    check_order(&order, n)?;
    let sys = build_local_system(f, x)?;
    let (point, trace) = back_substitute(&sys, &order, Rule::PreferUpper)?;
    let p = ZPoint(point.iter().map(|v| v.to_integer()).collect());
    let cert = verify_subgradient(f, x, &p).map_err(|e| Error::NotIntegrallyConvex(e.to_string()))?;
    Ok((cert, trace))
}

/// The integral vertex of a bounded real subdifferential reached by always
/// taking upper bounds.
pub fn fm_bounded_vertex(f: &ZFunction, x: &ZPoint) -> Result<ZPoint> {
    let n = f.dim();
    let sys = build_local_system(f, x)?;
    for j in 0..n {
        for sign in [1i64, -1] {
            let mut c = RationalVector::zeros(n);
            c[j] = Rational::from_integer(sign.into());
            if matches!(lp_solve(&c, &sys, Sense::Maximize)?, LpOutcome::Unbounded) {
                let dir = if sign > 0 { '+' } else { '-' };
                return Err(Error::UnboundedSubdifferential(format!("{dir}e{}", j + 1)));
            }
        }
    }
    let (point, _) = back_substitute(&sys, &default_order(n), Rule::UpperOnly)?;
    let tight: Vec<Vec<Rational>> = sys.rows.iter().filter(|r| r.is_tight_at(&point)).map(|r| r.coeffs.clone()).collect();
    assert_eq!(rank(&tight), n, "upper-bound back-substitution must end at a vertex");
    let p = ZPoint(point.iter().map(|v| v.to_integer()).collect());
    verify_subgradient(f, x, &p)?;
    Ok(p)
}
