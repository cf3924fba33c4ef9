//! Convex hulls of finite point sets, hull membership, and vertex enumeration.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use itertools::Itertools;
use num_traits::{One, Zero};

use super::cone::cone_generators;
use super::linalg::{rank, rref, solve_square};
use super::lp::{lp_solve, solve_standard, LpOutcome, Sense, StandardOutcome};
use super::rational::{Rational, RationalVector};
use super::system::{InequalitySystem, Row};
use crate::error::{Error, Result};

/// Result of a convex-combination membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Convex coefficients, one per input point, when `member` is true.
    pub coefficients: Option<Vec<Rational>>,
}

/// Decide whether `x` is a convex combination of `points`.
pub fn hull_membership(x: &RationalVector, points: &[RationalVector]) -> Result<Membership> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let n = x.dim();
    if let Some(bad) = points.iter().find(|p| p.dim() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: bad.dim() });
    }
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| points.iter().map(|p| p[i].clone()).collect())
        .collect();
    a.push(vec![Rational::one(); points.len()]);
    let mut b = x.0.clone();
    b.push(Rational::one());
    let c = vec![Rational::zero(); points.len()];
    Ok(match solve_standard(&a, &b, &c) {
        StandardOutcome::Optimal { x: lambda, .. } => Membership { member: true, coefficients: Some(lambda) },
        _ => Membership { member: false, coefficients: None },
    })
}

/// H-representation of a polytope: affine equalities plus facet inequalities,
/// all with primitive integer coefficients when generated from a point set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HRep {
    pub dim: usize,
    pub equalities: Vec<Row>,
    pub inequalities: Vec<Row>,
}

impl HRep {
    pub fn contains(&self, x: &[Rational]) -> bool {
        self.equalities.iter().all(|r| r.is_tight_at(x)) && self.inequalities.iter().all(|r| r.satisfied_by(x))
    }

    /// All constraints as `<=` rows, each equality contributing two rows.
    pub fn to_system(&self) -> InequalitySystem {
        let mut sys = InequalitySystem::new(self.dim);
        for e in &self.equalities {
            sys.push(e.clone());
            sys.push(e.scale(&-Rational::one()));
        }
        for r in &self.inequalities {
            sys.push(r.clone());
        }
        sys
    }

    /// Rank of the constraints tight at `x`, counting every equality.
    pub fn tight_rank(&self, x: &[Rational]) -> usize {
        let rows: Vec<Vec<Rational>> = self
            .equalities
            .iter()
            .chain(self.inequalities.iter().filter(|r| r.is_tight_at(x)))
            .map(|r| r.coeffs.clone())
            .collect();
        rank(&rows)
    }
}

/// Facet description of `conv(points)` by double description on the cone of
/// valid inequalities `{(b, a) : a . s <= b for all s}`.
pub fn convex_hull(points: &[RationalVector]) -> Result<HRep> {
    let Some(first) = points.first() else {
        return Err(Error::EmptyPointSet);
    };
    let n = first.dim();
    let mut uniq: Vec<RationalVector> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    // Far-from-centroid points first: they are likely extreme and keep the
    // intermediate cones small.
    let count = Rational::from_integer((uniq.len() as i64).into());
    let centroid: Vec<Rational> = (0..n)
        .map(|i| uniq.iter().map(|p| p[i].clone()).sum::<Rational>() / &count)
        .collect();
    let dist = |p: &RationalVector| -> Rational {
        p.0.iter().zip(&centroid).map(|(a, c)| (a - c) * (a - c)).sum()
    };
    uniq.sort_by_cached_key(|p| std::cmp::Reverse(dist(p)));

    let constraints: Vec<Vec<Rational>> = uniq
        .iter()
        .map(|s| {
            let mut c = vec![Rational::one()];
            c.extend(s.0.iter().map(|v| -v));
            c
        })
        .collect();
    let gens = cone_generators(&constraints, n + 1);
    let split = |v: &[Rational]| Row::new(v[1..].to_vec(), v[0].clone());
    let equalities: Vec<Row> = gens.lineality.iter().map(|v| split(v)).collect();
    let mut inequalities: Vec<Row> = gens
        .rays
        .iter()
        .map(|v| split(v))
        .filter(|r| !r.is_trivial() && uniq.iter().any(|s| r.is_tight_at(&s.0)))
        .collect();
    inequalities.sort_by(|a, b| a.coeffs.cmp(&b.coeffs).then(a.rhs.cmp(&b.rhs)));
    Ok(HRep { dim: n, equalities, inequalities })
}

/// Points satisfying all `equalities` and `inequalities` at which the
/// equalities together with `dim - rank(equalities)` inequalities form a
/// nonsingular square system. Deduplicated and sorted.
pub fn basic_solutions(dim: usize, equalities: &[Row], inequalities: &[Row]) -> Vec<RationalVector> {
    // Independent equality rows.
    let mut aug: Vec<Vec<Rational>> = equalities
        .iter()
        .map(|r| {
            let mut v = r.coeffs.clone();
            v.push(r.rhs.clone());
            v
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&dim) {
        return Vec::new();
    }
    let eq: Vec<Row> = aug
        .into_iter()
        .take(pivots.len())
        .map(|mut v| {
            let rhs = v.pop().unwrap();
            Row::new(v, rhs)
        })
        .collect();
    let k = eq.len();
    if k > dim {
        return Vec::new();
    }
    let mut out = BTreeSet::new();
    for subset in (0..inequalities.len()).combinations(dim - k) {
        let mut a: Vec<Vec<Rational>> = eq.iter().map(|r| r.coeffs.clone()).collect();
        let mut b: Vec<Rational> = eq.iter().map(|r| r.rhs.clone()).collect();
        for &i in &subset {
            a.push(inequalities[i].coeffs.clone());
            b.push(inequalities[i].rhs.clone());
        }
        let Some(x) = solve_square(&a, &b) else {
            continue;
        };
        if inequalities.iter().all(|r| r.satisfied_by(&x)) {
            out.insert(RationalVector(x));
        }
    }
    out.into_iter().collect()
}

fn is_bounded(system: &InequalitySystem) -> Result<bool> {
    for j in 0..system.dim {
        for s in [Rational::one(), -Rational::one()] {
            let mut c = RationalVector::zeros(system.dim);
            c[j] = s;
            match lp_solve(&c, system, Sense::Maximize)? {
                LpOutcome::Unbounded => return Ok(false),
                LpOutcome::Infeasible => return Ok(true),
                LpOutcome::Optimal { .. } => {}
            }
        }
    }
    Ok(true)
}

/// A bounded convex polytope held in V-form, H-form, or both. The missing form
/// is computed on first request and cached.
#[derive(Debug)]
pub struct Polytope {
    dim: usize,
    generators: Option<Vec<RationalVector>>,
    vertices: OnceLock<Result<Vec<RationalVector>>>,
    hrep: OnceLock<Result<HRep>>,
}

impl Polytope {
    pub fn from_points(points: Vec<RationalVector>) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::EmptyPointSet);
        };
        let dim = first.dim();
        if let Some(bad) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        Ok(Polytope { dim, generators: Some(points), vertices: OnceLock::new(), hrep: OnceLock::new() })
    }

    pub fn from_system(system: InequalitySystem) -> Self {
        let dim = system.dim;
        let hrep = HRep { dim, equalities: Vec::new(), inequalities: system.rows };
        Polytope { dim, generators: None, vertices: OnceLock::new(), hrep: OnceLock::from(Ok(hrep)) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hrep(&self) -> Result<&HRep> {
        self.hrep
            .get_or_init(|| convex_hull(self.generators.as_deref().expect("V-form polytope")))
            .as_ref()
            .map_err(Clone::clone)
    }

    /// Extreme points, sorted lexicographically.
    pub fn vertices(&self) -> Result<&[RationalVector]> {
        self.vertices
            .get_or_init(|| {
                let h = self.hrep()?;
                match &self.generators {
                    Some(points) => {
                        let set: BTreeSet<RationalVector> = points
                            .iter()
                            .filter(|p| h.tight_rank(&p.0) == self.dim)
                            .cloned()
                            .collect();
                        Ok(set.into_iter().collect())
                    }
                    None => {
                        if !is_bounded(&h.to_system())? {
                            return Err(Error::Unbounded);
                        }
                        Ok(basic_solutions(self.dim, &h.equalities, &h.inequalities))
                    }
                }
            })
            .as_ref()
            .map(Vec::as_slice)
            .map_err(Clone::clone)
    }

    pub fn contains(&self, x: &RationalVector) -> Result<bool> {
        Ok(self.hrep()?.contains(&x.0))
    }
}

/// Extreme points of a bounded polytope.
pub fn enumerate_vertices(poly: &Polytope) -> Result<Vec<RationalVector>> {
    poly.vertices().map(<[_]>::to_vec)
}
