//! Recognition of integrally convex sets and functions.
//!
//! A set `S` is checked in two passes. The first tests every midpoint of two
//! points of `S`, which finds the usual violations and gives readable
//! witnesses. The second is complete: for every unit cell `C` of the bounding
//! box, each vertex `v` of `conv(S) ∩ C` must lie in `conv(S ∩ N(v))`. A
//! point in the relative interior of a face `F` of `C` has `N(x) = F ∩ Z^n`,
//! and a convex combination of points of `C` lands in `F` only if every point
//! used lies in `F`, so checking vertices of each cell suffices.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::extension::{integral_neighborhood, local_convex_extension};
use crate::geometry::hull::{basic_solutions, convex_hull, hull_membership, HRep};
use crate::geometry::linalg::rank;
use crate::geometry::rational::primitive_integer_vector;
use crate::geometry::{int_rat, ratio, Rational, RationalVector, Row};
use crate::zfunction::{box_points, ExtendedValue, ZFunction, ZPoint, ZSet};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// A point of `conv(S)` outside `conv(S ∩ N(x))`.
    SetPoint { point: RationalVector },
    /// The effective domain is not integrally convex.
    Domain { point: RationalVector },
    /// A pair at ℓ∞-distance 2 with `f̃((x+y)/2) > (f(x)+f(y))/2`.
    Pair { x: ZPoint, y: ZPoint, midpoint: RationalVector, extension: ExtendedValue, average: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SetPoint { point } => write!(f, "point {point} of the hull is not spanned by its neighborhood"),
            Violation::Domain { point } => {
                write!(f, "effective domain: point {point} of the hull is not spanned by its neighborhood")
            }
            Violation::Pair { x, y, midpoint, extension, average } => write!(
                f,
                "pair {x} {y}: extension at {midpoint} is {extension} > {average}"
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IcVerdict {
    pub is_ic: bool,
    pub witness: Option<Violation>,
}

impl IcVerdict {
    fn ok() -> Self {
        IcVerdict { is_ic: true, witness: None }
    }

    fn violated(witness: Violation) -> Self {
        IcVerdict { is_ic: false, witness: Some(witness) }
    }
}

fn spanned_by_neighborhood(s: &ZSet, x: &RationalVector) -> bool {
    let local: Vec<RationalVector> = integral_neighborhood(x)
        .points
        .into_iter()
        .filter(|z| s.contains(z))
        .map(|z| z.to_rational())
        .collect();
    if local.len() == 1 << x.coords().iter().filter(|c| !c.is_integer()).count() {
        return true;
    }
    !local.is_empty() && hull_membership(x, &local).is_ok_and(|m| m.member)
}

/// Lexicographically smallest midpoint of two points of `s` that violates
/// the definition.
fn midpoint_scan(s: &ZSet) -> Option<RationalVector> {
    let pts: Vec<&ZPoint> = s.iter().collect();
    let sums: BTreeSet<ZPoint> = (0..pts.len())
        .flat_map(|i| ((i + 1)..pts.len()).map(move |j| (i, j)))
        .map(|(i, j)| pts[i].add(pts[j]))
        .collect();
    let half = ratio(1, 2);
    sums.into_par_iter()
        .map(|sum| sum.to_rational().scale(&half))
        .filter(|m| !spanned_by_neighborhood(s, m))
        .min()
}

/// Complete cell-by-cell check; returns the smallest violating cell vertex.
fn cell_scan(s: &ZSet) -> Result<Option<RationalVector>> {
    let n = s.dim();
    let (lo, hi) = s.bounding_box();
    let lo: Vec<i64> = lo.0.iter().map(|v| v.to_i64().expect("bounding box fits in i64")).collect();
    let hi: Vec<i64> = hi.0.iter().map(|v| v.to_i64().expect("bounding box fits in i64")).collect();
    let cell_hi: Vec<i64> = lo.iter().zip(&hi).map(|(&l, &h)| (h - 1).max(l)).collect();
    let hull = convex_hull(&s.rational_points())?;
    let corners: Vec<Vec<i64>> = box_points(&vec![0; n], &vec![1; n]);
    let cells = box_points(&lo, &cell_hi);
    let found: Vec<RationalVector> = cells
        .par_iter()
        .filter_map(|z| {
            let corner_points: Vec<ZPoint> = corners
                .iter()
                .map(|c| ZPoint(z.iter().zip(c).zip(&hi).map(|((a, b), &h)| BigInt::from((a + b).min(h))).collect()))
                .collect();
            if corner_points.iter().all(|c| s.contains(c)) {
                return None;
            }
            cell_violation(s, &hull, z, &hi, &corner_points)
        })
        .collect();
    Ok(found.into_iter().min())
}

fn cell_violation(s: &ZSet, hull: &HRep, z: &[i64], hi: &[i64], corners: &[ZPoint]) -> Option<RationalVector> {
    let n = s.dim();
    let corner_rats: Vec<RationalVector> = corners.iter().map(ZPoint::to_rational).collect();
    let mut rows: Vec<Row> = hull
        .inequalities
        .iter()
        .filter(|r| corner_rats.iter().any(|c| !r.satisfied_by(&c.0)))
        .cloned()
        .collect();
    for j in 0..n {
        let top = (z[j] + 1).min(hi[j]);
        let mut up = vec![Rational::zero(); n];
        up[j] = Rational::one();
        rows.push(Row::new(up.clone(), Rational::from_integer(top.into())));
        rows.push(Row::new(up.iter().map(|v| -v).collect(), Rational::from_integer((-z[j]).into())));
    }
    basic_solutions(n, &hull.equalities, &rows)
        .into_iter()
        .filter(|v| !spanned_by_neighborhood(s, v))
        .min()
}

fn set_violation(s: &ZSet) -> Result<Option<RationalVector>> {
    if let Some(m) = midpoint_scan(s) {
        return Ok(Some(m));
    }
    cell_scan(s)
}

pub fn is_integrally_convex_set(s: &ZSet) -> IcVerdict {
    match set_violation(s).expect("hull of a nonempty finite set") {
        Some(point) => IcVerdict::violated(Violation::SetPoint { point }),
        None => IcVerdict::ok(),
    }
}

/// Integrally convex effective domain plus the distance-2 midpoint
/// inequality `f̃((x+y)/2) <= (f(x)+f(y))/2` for all domain pairs.
pub fn is_integrally_convex_function(f: &ZFunction) -> IcVerdict {
    if let Some(point) = set_violation(&f.domain()).expect("hull of a nonempty finite set") {
        return IcVerdict::violated(Violation::Domain { point });
    }
    match distance_two_violation(f) {
        Some(v) => IcVerdict::violated(v),
        None => IcVerdict::ok(),
    }
}

/// Offsets `d` with `max |d_i| = 2` whose first nonzero entry is positive.
fn distance_two_offsets(n: usize) -> Vec<Vec<i64>> {
    box_points(&vec![-2; n], &vec![2; n])
        .into_iter()
        .filter(|d| d.iter().any(|v| v.abs() == 2) && d.iter().find(|v| **v != 0).is_some_and(|v| *v > 0))
        .collect()
}

fn distance_two_violation(f: &ZFunction) -> Option<Violation> {
    let n = f.dim();
    let offsets: Vec<ZPoint> = distance_two_offsets(n).iter().map(|d| ZPoint::from_ints(d)).collect();
    // Pairs grouped by x + y, i.e. by twice their midpoint.
    let mut groups: BTreeMap<ZPoint, Vec<(ZPoint, ZPoint, BigInt)>> = BTreeMap::new();
    for (x, fx) in f.iter() {
        for d in &offsets {
            let y = x.add(d);
            if let Some(fy) = f.get(&y) {
                groups.entry(x.add(&y)).or_default().push((x.clone(), y, fx + fy));
            }
        }
    }
    let half = ratio(1, 2);
    groups
        .into_par_iter()
        .filter_map(|(sum, pairs)| {
            let budget = pairs.iter().map(|p| &p.2).min().cloned()?;
            if antipodal_bound(f, &sum).is_some_and(|best| best <= budget) {
                return None;
            }
            let m = sum.to_rational().scale(&half);
            let ext = local_convex_extension(f, &m).value;
            let bad: Vec<&(ZPoint, ZPoint, BigInt)> = pairs
                .iter()
                .filter(|(_, _, total)| match &ext {
                    ExtendedValue::Finite(v) => v * Rational::from_integer(2.into()) > int_rat(total),
                    _ => true,
                })
                .collect();
            bad.into_iter().min_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1))).map(|(x, y, total)| Violation::Pair {
                x: x.clone(),
                y: y.clone(),
                midpoint: m.clone(),
                extension: ext.clone(),
                average: int_rat(total) * &half,
            })
        })
        .min_by(|a, b| match (a, b) {
            (Violation::Pair { x: ax, y: ay, .. }, Violation::Pair { x: bx, y: by, .. }) => (ax, ay).cmp(&(bx, by)),
            _ => std::cmp::Ordering::Equal,
        })
}

/// Smallest `f(z) + f(sum - z)` over domain points `z` of `N(sum / 2)`, a
/// cheap upper bound on `2 f̃(sum / 2)`.
fn antipodal_bound(f: &ZFunction, sum: &ZPoint) -> Option<BigInt> {
    let m = sum.to_rational().scale(&ratio(1, 2));
    integral_neighborhood(&m)
        .points
        .iter()
        .filter_map(|z| Some(f.get(z)? + f.get(&sum.sub(z))?))
        .min()
}

/// Whether `x` minimizes `f` over Z^n, decided from its {-1,0,1} neighbors.
/// With `check` set, integral convexity is verified first.
pub fn is_global_minimizer(f: &ZFunction, x: &ZPoint, check: bool) -> Result<bool> {
    let fx = f.get(x).ok_or_else(|| Error::NotInDomain(x.to_string()))?;
    if check {
        let verdict = is_integrally_convex_function(f);
        if let Some(w) = verdict.witness {
            return Err(Error::NotIntegrallyConvex(w.to_string()));
        }
    }
    Ok(x.unit_neighbors().iter().all(|y| f.get(y).is_none_or(|fy| fy >= fx)))
}

/// Steepest descent over {-1,0,1} moves from `start`, ties broken by the
/// smaller point. Returns the final point and the number of moves.
pub fn local_descent(f: &ZFunction, start: &ZPoint) -> Result<(ZPoint, usize)> {
    let mut x = start.clone();
    let mut fx = f.get(&x).ok_or_else(|| Error::NotInDomain(x.to_string()))?.clone();
    let mut moves = 0;
    loop {
        let best = x.unit_neighbors().into_iter().filter_map(|y| Some((f.get(&y)?.clone(), y))).min();
        match best {
            Some((fy, y)) if fy < fx => {
                x = y;
                fx = fy;
                moves += 1;
            }
            _ => return Ok((x, moves)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullReport {
    pub vertices: Vec<RationalVector>,
    pub all_vertices_integral: bool,
    /// Primitive edge directions, each with first nonzero entry positive.
    pub edge_primitive_directions: Vec<ZPoint>,
    pub directions_in_pm1: bool,
    pub hole_free: bool,
}

pub fn hull_report(s: &ZSet) -> HullReport {
    let n = s.dim();
    let points = s.rational_points();
    let hull = convex_hull(&points).expect("hull of a nonempty finite set");
    let vertices: Vec<RationalVector> = points.iter().filter(|p| hull.tight_rank(&p.0) == n).cloned().collect();
    let tight: Vec<Vec<&Row>> = vertices
        .iter()
        .map(|v| hull.inequalities.iter().filter(|r| r.is_tight_at(&v.0)).collect())
        .collect();
    let mut directions = BTreeSet::new();
    for i in 0..vertices.len() {
        for j in (i + 1)..vertices.len() {
            let rows: Vec<Vec<Rational>> = hull
                .equalities
                .iter()
                .chain(tight[i].iter().copied().filter(|r| tight[j].contains(r)))
                .map(|r| r.coeffs.clone())
                .collect();
            if rank(&rows) + 1 == n {
                let mut d = primitive_integer_vector(&vertices[j].sub(&vertices[i]).0);
                if d.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
                    d.iter_mut().for_each(|v| *v = -v.clone());
                }
                directions.insert(ZPoint(d));
            }
        }
    }
    let (lo, hi) = s.bounding_box();
    let lo: Vec<i64> = lo.0.iter().map(|v| v.to_i64().expect("bounding box fits in i64")).collect();
    let hi: Vec<i64> = hi.0.iter().map(|v| v.to_i64().expect("bounding box fits in i64")).collect();
    let hole_free = box_points(&lo, &hi)
        .iter()
        .map(|p| ZPoint::from_ints(p))
        .all(|p| s.contains(&p) || !hull.contains(&p.to_rational().0));
    let edge_primitive_directions: Vec<ZPoint> = directions.into_iter().collect();
    HullReport {
        all_vertices_integral: vertices.iter().all(RationalVector::is_integral),
        directions_in_pm1: edge_primitive_directions.iter().all(|d| d.0.iter().all(|v| v.abs() <= BigInt::one())),
        vertices,
        edge_primitive_directions,
        hole_free,
    }
}
