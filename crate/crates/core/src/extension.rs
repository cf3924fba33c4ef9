//! Integral neighborhoods and the local convex extension.

use num_traits::{One, Zero};

use crate::geometry::lp::{solve_standard, StandardOutcome};
use crate::geometry::{floor_int, int_rat, Rational, RationalVector};
use crate::zfunction::{ExtendedValue, ZFunction, ZPoint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodResult {
    pub center: RationalVector,
    /// Sorted lexicographically.
    pub points: Vec<ZPoint>,
}

/// All integer points `z` with `|x_i - z_i| < 1` for every `i`.
pub fn integral_neighborhood(x: &RationalVector) -> NeighborhoodResult {
    let mut points = vec![ZPoint(Vec::with_capacity(x.dim()))];
    for v in x.coords() {
        let lo = floor_int(v);
        let choices = if v.is_integer() { vec![lo] } else { vec![lo.clone(), lo + 1] };
        points = points
            .into_iter()
            .flat_map(|p| {
                choices.iter().map(move |c| {
                    let mut q = p.clone();
                    q.0.push(c.clone());
                    q
                })
            })
            .collect();
    }
    points.sort();
    NeighborhoodResult { center: x.clone(), points }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionResult {
    pub value: ExtendedValue,
    /// Optimal convex coefficients over `N(x) ∩ dom f`, zero weights omitted.
    pub coefficients: Option<Vec<(ZPoint, Rational)>>,
}

/// Minimum of `sum λ_y f(y)` over convex combinations of `N(x) ∩ dom f`
/// expressing `x`; `+inf` when there is none.
pub fn local_convex_extension(f: &ZFunction, x: &RationalVector) -> ExtensionResult {
    assert_eq!(f.dim(), x.dim(), "dimension mismatch");
    let support: Vec<(ZPoint, Rational)> = integral_neighborhood(x)
        .points
        .into_iter()
        .filter_map(|y| f.get(&y).map(|v| (y.clone(), int_rat(v))))
        .collect();
    let infinite = ExtensionResult { value: ExtendedValue::PosInfinity, coefficients: None };
    if support.is_empty() {
        return infinite;
    }
    if support.len() == 1 {
        let (y, v) = &support[0];
        if y.to_rational() != *x {
            return infinite;
        }
        return ExtensionResult {
            value: ExtendedValue::Finite(v.clone()),
            coefficients: Some(vec![(y.clone(), Rational::one())]),
        };
    }
    let n = x.dim();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| support.iter().map(|(y, _)| int_rat(&y.0[i])).collect())
        .collect();
    a.push(vec![Rational::one(); support.len()]);
    let mut b = x.0.clone();
    b.push(Rational::one());
    let c: Vec<Rational> = support.iter().map(|(_, v)| v.clone()).collect();
    match solve_standard(&a, &b, &c) {
        StandardOutcome::Optimal { x: lambda, value, .. } => {
            let coefficients = support
                .into_iter()
                .zip(lambda)
                .filter(|(_, l)| !l.is_zero())
                .map(|((y, _), l)| (y, l))
                .collect();
            ExtensionResult { value: ExtendedValue::Finite(value), coefficients: Some(coefficients) }
        }
        _ => infinite,
    }
}
