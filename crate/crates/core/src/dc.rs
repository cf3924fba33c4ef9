//! Both sides of the Toland–Singer identity
//! `inf { g - h } = inf { h• - g• }` for integrally convex `h`.

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::checker::is_integrally_convex_function;
use crate::conjugacy::{conjugate_value, Biconjugator};
use crate::error::{Error, Result};
use crate::fm_subgradient::fm_integer_subgradient;
use crate::zfunction::{box_points, ExtendedValue, ZFunction, ZPoint};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DcReport {
    pub primal: ExtendedValue,
    pub dual: ExtendedValue,
    pub primal_argmin: ZPoint,
    /// `None` when the dual is `-inf`.
    pub dual_argmin: Option<ZPoint>,
    pub equal: bool,
    /// The dual minimum did not move when the sampled box was enlarged.
    pub stable: bool,
    /// Integer subgradient of `h` at the primal minimizer.
    pub argmin_subgradient: Option<ZPoint>,
    /// Whether that subgradient attains the dual value.
    pub subgradient_attains_dual: bool,
    /// When a point of `dom g` lies outside `dom h`, an integer direction
    /// along which `h• - g•` decreases without bound.
    pub separation: Option<ZPoint>,
}

fn dual_objective(g: &ZFunction, h: &ZFunction, p: &ZPoint) -> BigInt {
    conjugate_value(h, p) - conjugate_value(g, p)
}

/// Smallest objective over `candidates`, ties to the smallest `p`.
fn dual_min(g: &ZFunction, h: &ZFunction, candidates: &[ZPoint]) -> (BigInt, ZPoint) {
    candidates
        .par_iter()
        .map(|p| (dual_objective(g, h, p), p.clone()))
        .min()
        .expect("nonempty candidate set")
}

pub fn toland_singer(g: &ZFunction, h: &ZFunction) -> Result<DcReport> {
    if g.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), found: g.dim() });
    }
    if let Some(w) = is_integrally_convex_function(h).witness {
        return Err(Error::NotIntegrallyConvex(w.to_string()));
    }
    if !g.domain_points().any(|x| h.contains(x)) {
        return Err(Error::EmptyIntersection);
    }
    let n = h.dim();

    if let Some(x) = g.domain_points().find(|x| !h.contains(x)) {
        // g - h is -inf at x; h is hole-free, so x is outside conv(dom h) and
        // a separating direction drives the dual to -inf as well.
        let direction = Biconjugator::new(h).separating_direction(x).expect("integrally convex domains are hole-free");
        return Ok(DcReport {
            primal: ExtendedValue::NegInfinity,
            dual: ExtendedValue::NegInfinity,
            primal_argmin: x.clone(),
            dual_argmin: None,
            equal: true,
            stable: true,
            argmin_subgradient: None,
            subgradient_attains_dual: false,
            separation: Some(direction),
        });
    }

    let (primal, primal_argmin) = g
        .iter()
        .map(|(x, gx)| (gx - h.get(x).unwrap(), x.clone()))
        .min()
        .expect("nonempty intersection");

    let mut candidates: Vec<ZPoint> = h
        .domain_points()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|x| fm_integer_subgradient(h, x, None).map(|(c, _)| c.p))
        .collect::<Result<Vec<_>>>()?;
    candidates.extend(box_points(&vec![-1; n], &vec![1; n]).iter().map(|p| ZPoint::from_ints(p)));
    candidates.sort();
    candidates.dedup();
    let (dual, dual_argmin) = dual_min(g, h, &candidates);
    let wider: Vec<ZPoint> = box_points(&vec![-2; n], &vec![2; n]).iter().map(|p| ZPoint::from_ints(p)).collect();
    let (wide_min, _) = dual_min(g, h, &wider);
    let stable = wide_min >= dual;

    let (cert, _) = fm_integer_subgradient(h, &primal_argmin, None)?;
    let q = cert.p;
    let subgradient_attains_dual = dual_objective(g, h, &q) == dual
        && conjugate_value(h, &q) == q.dot(&primal_argmin) - h.get(&primal_argmin).unwrap();

    Ok(DcReport {
        equal: primal == dual,
        primal: ExtendedValue::int(&primal),
        dual: ExtendedValue::int(&dual),
        primal_argmin,
        dual_argmin: Some(dual_argmin),
        stable,
        argmin_subgradient: Some(q),
        subgradient_attains_dual,
        separation: None,
    })
}
