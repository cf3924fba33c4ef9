//! Integral conjugates, biconjugates and subdifferentials.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fm_subgradient::{
    build_global_system, build_local_system, fm_integer_subgradient, verify_subgradient, SubgradientCertificate,
};
use crate::geometry::hull::{convex_hull, HRep};
use crate::geometry::integer::{find_integer_point, InfeasibilityProof, IntegerFeasibility};
use crate::geometry::lp::{solve_standard, StandardOutcome};
use crate::geometry::{floor_int, int_rat, InequalitySystem, Rational};
use crate::zfunction::{box_points, ExtendedValue, ZFunction, ZPoint};

/// `max { <p, x> - f(x) : x in dom f }`, always finite for a finite domain.
pub fn integral_conjugate(f: &ZFunction, p: &ZPoint) -> ExtendedValue {
    ExtendedValue::int(&conjugate_value(f, p))
}

pub fn conjugate_value(f: &ZFunction, p: &ZPoint) -> BigInt {
    f.iter().map(|(x, v)| p.dot(x) - v).max().expect("nonempty domain")
}

/// Domain points attaining the conjugate at `p`, in lexicographic order.
pub fn conjugate_argmax(f: &ZFunction, p: &ZPoint) -> (BigInt, Vec<ZPoint>) {
    let best = conjugate_value(f, p);
    let arg = f.iter().filter(|(x, v)| p.dot(x) - *v == best).map(|(x, _)| x.clone()).collect();
    (best, arg)
}

/// The conjugate tabulated on the integer box `[lo, hi]`.
pub fn conjugate_table(f: &ZFunction, lo: &[i64], hi: &[i64]) -> Result<ZFunction> {
    if lo.len() != f.dim() || hi.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: lo.len().min(hi.len()) });
    }
    if lo.iter().zip(hi).any(|(l, h)| l > h) {
        return Err(Error::InvalidArgument("empty box".into()));
    }
    let table = box_points(lo, hi)
        .into_par_iter()
        .map(|p| {
            let p = ZPoint::from_ints(&p);
            let v = conjugate_value(f, &p);
            (p, v)
        })
        .collect();
    ZFunction::new(f.dim(), table)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdifferentialHRep {
    pub anchor: ZPoint,
    pub system: InequalitySystem,
}

/// Rows `<y - x, p> <= f(y) - f(x)`, over the {-1,0,1} neighbors of `x`
/// when `local` is set and over the whole domain otherwise.
pub fn real_subdifferential_hrep(f: &ZFunction, x: &ZPoint, local: bool) -> Result<SubdifferentialHRep> {
    let system = if local { build_local_system(f, x)? } else { build_global_system(f, x)? };
    Ok(SubdifferentialHRep { anchor: x.clone(), system })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubdifferentialDecision {
    Nonempty(SubgradientCertificate),
    Empty(InfeasibilityProof),
}

impl SubdifferentialDecision {
    pub fn is_nonempty(&self) -> bool {
        matches!(self, SubdifferentialDecision::Nonempty(_))
    }
}

/// Decide whether an integer subgradient exists at `x`, trying the
/// elimination construction first.
pub fn integral_subdifferential_nonempty(f: &ZFunction, x: &ZPoint) -> Result<SubdifferentialDecision> {
    if let Ok((cert, _)) = fm_integer_subgradient(f, x, None) {
        return Ok(SubdifferentialDecision::Nonempty(cert));
    }
    integral_subdifferential_exact(f, x)
}

/// Exact integer feasibility of the full subgradient system, without the
/// elimination shortcut.
pub fn integral_subdifferential_exact(f: &ZFunction, x: &ZPoint) -> Result<SubdifferentialDecision> {
    let system = build_global_system(f, x)?;
    Ok(match find_integer_point(&system) {
        IntegerFeasibility::Point(p) => SubdifferentialDecision::Nonempty(verify_subgradient(f, x, &ZPoint(p))?),
        IntegerFeasibility::Empty(proof) => SubdifferentialDecision::Empty(proof),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BiconjugateCertificate {
    /// An integer subgradient at `x`, so the value is `f(x)`.
    Subgradient(SubgradientCertificate),
    /// `<c, x> > max <c, y>` over the domain, so the value is `+inf`.
    Separation { direction: ZPoint },
    /// Best `p` over the searched box; `stable` records that doubling the
    /// box did not change the value.
    Search { argmax: ZPoint, bound: i64, stable: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiconjugateResult {
    pub value: ExtendedValue,
    pub certificate: BiconjugateCertificate,
}

/// Evaluates the integral biconjugate of one function at many points,
/// sharing the hull of the domain.
pub struct Biconjugator<'a> {
    f: &'a ZFunction,
    hull: OnceLock<HRep>,
}

impl<'a> Biconjugator<'a> {
    pub fn new(f: &'a ZFunction) -> Self {
        Biconjugator { f, hull: OnceLock::new() }
    }

    fn hull(&self) -> &HRep {
        self.hull.get_or_init(|| {
            let pts: Vec<_> = self.f.domain_points().map(ZPoint::to_rational).collect();
            convex_hull(&pts).expect("nonempty domain")
        })
    }

    /// An integer `c` with `<c, x>` above every `<c, y>`, `y` in the domain.
    pub fn separating_direction(&self, x: &ZPoint) -> Option<ZPoint> {
        let xr = x.to_rational();
        let hull = self.hull();
        let to_int = |coeffs: &[Rational], sign: i64| {
            ZPoint(coeffs.iter().map(|c| c.to_integer() * BigInt::from(sign)).collect())
        };
        for e in &hull.equalities {
            let lhs: Rational = e.coeffs.iter().zip(&xr.0).map(|(a, b)| a * b).sum();
            if lhs > e.rhs {
                return Some(to_int(&e.coeffs, 1));
            }
            if lhs < e.rhs {
                return Some(to_int(&e.coeffs, -1));
            }
        }
        hull.inequalities.iter().find(|r| !r.satisfied_by(&xr.0)).map(|r| to_int(&r.coeffs, 1))
    }

    pub fn evaluate(&self, x: &ZPoint) -> BiconjugateResult {
        if let Some(direction) = self.separating_direction(x) {
            return BiconjugateResult {
                value: ExtendedValue::PosInfinity,
                certificate: BiconjugateCertificate::Separation { direction },
            };
        }
        if self.f.contains(x) {
            if let Ok(SubdifferentialDecision::Nonempty(cert)) = integral_subdifferential_nonempty(self.f, x) {
                return BiconjugateResult {
                    value: self.f.value(x),
                    certificate: BiconjugateCertificate::Subgradient(cert),
                };
            }
        }
        self.search(x)
    }

    /// Value by box search alone (no subgradient shortcut); points outside
    /// the hull still get the separation certificate.
    pub fn evaluate_by_search(&self, x: &ZPoint) -> BiconjugateResult {
        if let Some(direction) = self.separating_direction(x) {
            return BiconjugateResult {
                value: ExtendedValue::PosInfinity,
                certificate: BiconjugateCertificate::Separation { direction },
            };
        }
        self.search(x)
    }

    /// Upper bound on the biconjugate at a point of the hull: `f(x)` on the
    /// domain, and the floor of the convex closure in general.
    fn ceiling(&self, x: &ZPoint) -> BigInt {
        let closure = convex_closure(self.f, x).expect("point lies in the hull");
        let c = floor_int(&closure);
        match self.f.get(x) {
            Some(v) if *v < c => v.clone(),
            _ => c,
        }
    }

    fn initial_bound(&self) -> i64 {
        let n = self.f.dim() as i64;
        let range = (self.f.max_value() - self.f.min_value()).to_i64().unwrap_or(i64::MAX / 4);
        let (lo, hi) = self.f.bounding_box();
        let spread = lo.0.iter().zip(&hi.0).map(|(a, b)| (b - a).to_i64().unwrap_or(0)).max().unwrap_or(0);
        1 + (n + 1) * range + spread
    }

    fn search(&self, x: &ZPoint) -> BiconjugateResult {
        let ceiling = self.ceiling(x);
        let mut bound = self.initial_bound();
        let mut scanned = -1i64;
        let mut best: Option<(BigInt, ZPoint)> = None;
        let mut last_at_bound: Option<BigInt> = None;
        loop {
            for r in (scanned + 1)..=bound {
                if let Some(cand) = self.best_on_shell(x, r) {
                    if best.as_ref().is_none_or(|(v, p)| cand.0 > *v || (cand.0 == *v && cand.1 < *p)) {
                        best = Some(cand);
                    }
                }
                scanned = r;
                if best.as_ref().is_some_and(|(v, _)| *v >= ceiling) {
                    let (v, p) = best.unwrap();
                    return BiconjugateResult {
                        value: ExtendedValue::int(&v),
                        certificate: BiconjugateCertificate::Search { argmax: p, bound: r, stable: true },
                    };
                }
            }
            let current = best.as_ref().map(|(v, _)| v.clone());
            if last_at_bound.is_some() && last_at_bound == current {
                let (v, p) = best.unwrap();
                return BiconjugateResult {
                    value: ExtendedValue::int(&v),
                    certificate: BiconjugateCertificate::Search { argmax: p, bound: bound / 2, stable: true },
                };
            }
            last_at_bound = current;
            bound *= 2;
        }
    }

    /// Best `(<p, x> - f•(p), p)` over `max |p_i| = r`, ties to the smallest `p`.
    fn best_on_shell(&self, x: &ZPoint, r: i64) -> Option<(BigInt, ZPoint)> {
        let n = self.f.dim();
        let shell: Vec<Vec<i64>> = box_points(&vec![-r; n], &vec![r; n])
            .into_iter()
            .filter(|p| p.iter().any(|v| v.abs() == r))
            .collect();
        if let (Some(table), Some(xs)) = (self.f.small_table(), x.to_i64()) {
            let pts: Vec<Vec<i128>> = table.points.iter().map(|p| p.iter().map(|&v| v as i128).collect()).collect();
            let vals: Vec<i128> = table.values.iter().map(|&v| v as i128).collect();
            let xs: Vec<i128> = xs.iter().map(|&v| v as i128).collect();
            return shell
                .into_par_iter()
                .map(|p| {
                    let pi: Vec<i128> = p.iter().map(|&v| v as i128).collect();
                    let dot = |y: &[i128]| y.iter().zip(&pi).map(|(a, b)| a * b).sum::<i128>();
                    let conj = pts.iter().zip(&vals).map(|(y, v)| dot(y) - v).max().unwrap();
                    (dot(&xs) - conj, p)
                })
                .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
                .map(|(v, p)| (BigInt::from(v), ZPoint::from_ints(&p)));
        }
        shell
            .into_par_iter()
            .map(|p| {
                let p = ZPoint::from_ints(&p);
                (p.dot(x) - conjugate_value(self.f, &p), p)
            })
            .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
    }
}

pub fn integral_biconjugate(f: &ZFunction, x: &ZPoint) -> BiconjugateResult {
    Biconjugator::new(f).evaluate(x)
}

/// `min sum λ_y f(y)` over convex combinations of the domain equal to `x`.
pub fn convex_closure(f: &ZFunction, x: &ZPoint) -> Option<Rational> {
    let n = f.dim();
    let pts: Vec<(&ZPoint, &BigInt)> = f.iter().collect();
    let mut a: Vec<Vec<Rational>> = (0..n).map(|i| pts.iter().map(|(y, _)| int_rat(&y.0[i])).collect()).collect();
    a.push(vec![Rational::one(); pts.len()]);
    let mut b: Vec<Rational> = x.0.iter().map(int_rat).collect();
    b.push(Rational::one());
    let c: Vec<Rational> = pts.iter().map(|(_, v)| int_rat(v)).collect();
    match solve_standard(&a, &b, &c) {
        StandardOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConjugacyItem {
    /// `f(x) + f•(p) = <p, x>` at the argmax.
    ConjugateIdentity,
    /// `p` is an integer subgradient at the argmax.
    DomainOfConjugate,
    /// `f••(x) = f(x)` at the argmax.
    Biconjugate,
    /// `x` is an integer subgradient of the conjugate at `p` exactly when
    /// `p` is one of `f` at `x`.
    Symmetry,
    /// The conjugate has an integer subgradient at `p`.
    ConjugateSubgradient,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyFailure {
    pub item: ConjugacyItem,
    pub x: ZPoint,
    pub p: ZPoint,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConjugacyReport {
    pub checked: usize,
    pub failures: Vec<ConjugacyFailure>,
}

/// Whether `x` is an integer subgradient of the conjugate at `p` over the
/// box `p + [-radius, radius]^n`, returning a violating `q` if not.
fn conjugate_subgradient_violation(f: &ZFunction, p: &ZPoint, x: &ZPoint, radius: i64) -> Option<ZPoint> {
    let n = f.dim();
    let fp = conjugate_value(f, p);
    box_points(&vec![-radius; n], &vec![radius; n]).into_iter().find_map(|d| {
        let q = p.add(&ZPoint::from_ints(&d));
        (conjugate_value(f, &q) - &fp < q.sub(p).dot(x)).then_some(q)
    })
}

/// Check the conjugacy properties at every sampled `p`. `f` is expected to
/// be integrally convex.
pub fn conjugacy_suite(f: &ZFunction, sample_p: &[ZPoint], radius: i64) -> ConjugacyReport {
    let biconj = Biconjugator::new(f);
    let failures: Vec<ConjugacyFailure> = sample_p
        .par_iter()
        .flat_map_iter(|p| {
            let (fp, argmax) = conjugate_argmax(f, p);
            let x = argmax[0].clone();
            let fx = f.get(&x).unwrap().clone();
            let mut out = Vec::new();
            let mut fail = |item, detail: String| out.push(ConjugacyFailure { item, x: x.clone(), p: p.clone(), detail });
            if &fx + &fp != p.dot(&x) {
                fail(ConjugacyItem::ConjugateIdentity, format!("{fx} + {fp} != {}", p.dot(&x)));
            }
            if let Err(e) = verify_subgradient(f, &x, p) {
                fail(ConjugacyItem::DomainOfConjugate, e.to_string());
            }
            let b = biconj.evaluate(&x);
            if b.value != ExtendedValue::int(&fx) {
                fail(ConjugacyItem::Biconjugate, format!("f••(x) = {} but f(x) = {fx}", b.value));
            }
            if let Some(q) = conjugate_subgradient_violation(f, p, &x, radius) {
                fail(ConjugacyItem::ConjugateSubgradient, format!("x is no subgradient of f• at p; see q = {q}"));
            }
            // The converse direction: every other domain point y with p not
            // a subgradient there is excluded by q, a subgradient at y.
            for (y, fy) in f.iter() {
                if fy + &fp == p.dot(y) {
                    continue;
                }
                match fm_integer_subgradient(f, y, None) {
                    Ok((cert, _)) => {
                        let q = cert.p;
                        if conjugate_value(f, &q) - &fp >= q.sub(p).dot(y) {
                            fail(ConjugacyItem::Symmetry, format!("{y} not excluded by {q}"));
                        }
                    }
                    Err(e) => fail(ConjugacyItem::Symmetry, format!("no subgradient at {y}: {e}")),
                }
            }
            out
        })
        .collect();
    ConjugacyReport { checked: sample_p.len(), failures }
}

/// `f(x) + f•(p) - <p, x>`, nonnegative by definition of the conjugate.
pub fn duality_gap(f: &ZFunction, x: &ZPoint, p: &ZPoint) -> Option<BigInt> {
    Some(f.get(x)? + conjugate_value(f, p) - p.dot(x))
}
