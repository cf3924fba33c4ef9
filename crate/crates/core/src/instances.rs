//! Named instances with expected properties, and seeded generators of
//! integrally convex functions.

use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::checker::{hull_report, is_integrally_convex_function, is_integrally_convex_set, Violation};
use crate::conjugacy::{conjugate_value, integral_subdifferential_exact, Biconjugator};
use crate::error::{Error, Result};
use crate::fm_subgradient::{build_local_system, fm_integer_subgradient};
use crate::geometry::hull::basic_solutions;
use crate::geometry::{rat, ratio, RationalVector, Row};
use crate::zfunction::{box_points, parse_instance, ExtendedValue, Instance, ZFunction, ZPoint, ZSet};

const SOURCES: &[(&str, &str)] = &[
    ("exla1", include_str!("../../../corpus/exla1.icx")),
    ("rmconjic_set", include_str!("../../../corpus/rmconjic_set.icx")),
    ("rmconjic_g", include_str!("../../../corpus/rmconjic_g.icx")),
    ("rmedgedir", include_str!("../../../corpus/rmedgedir.icx")),
    ("rmsubg", include_str!("../../../corpus/rmsubg.icx")),
    ("rmfbbf_rational", include_str!("../../../corpus/rmfbbf_rational.icx")),
    ("unit-box-zero", include_str!("../../../corpus/unit-box.icx")),
    ("square-1d", include_str!("../../../corpus/square-1d.icx")),
    ("sep-square", include_str!("../../../corpus/sep-square.icx")),
    ("sep-abs", include_str!("../../../corpus/sep-abs.icx")),
    ("lnat-pairs", include_str!("../../../corpus/lnat-pairs.icx")),
];

/// A checkable claim about an instance. Sets are treated as indicator
/// functions except for `IntegrallyConvex` and `Witness`, which use the set
/// checker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Property {
    IntegrallyConvex(bool),
    Witness(Violation),
    HullVerticesIntegral(bool),
    EdgeDirectionsInPm1(bool),
    HoleFree(bool),
    Conjugate { p: ZPoint, value: BigInt },
    Biconjugate { x: ZPoint, value: ExtendedValue },
    IntegerSubgradient { x: ZPoint, exists: bool },
    FmSubgradient { x: ZPoint, p: ZPoint },
    /// `vertex` is a vertex of the real subdifferential at `x` cut by `p >= lower`.
    BoxedSubdifferentialVertex { x: ZPoint, lower: i64, vertex: RationalVector },
    /// Every domain point has an integer subgradient.
    SubgradientEverywhere(bool),
    /// `f•• = f` on the bounding box of the domain grown by one.
    BiconjugateAgreesEverywhere(bool),
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::IntegrallyConvex(_) => write!(f, "integrally-convex"),
            Property::Witness(_) => write!(f, "witness"),
            Property::HullVerticesIntegral(_) => write!(f, "hull-vertices-integral"),
            Property::EdgeDirectionsInPm1(_) => write!(f, "edge-directions-in-pm1"),
            Property::HoleFree(_) => write!(f, "hole-free"),
            Property::Conjugate { p, .. } => write!(f, "conjugate at {p}"),
            Property::Biconjugate { x, .. } => write!(f, "biconjugate at {x}"),
            Property::IntegerSubgradient { x, .. } => write!(f, "integer-subgradient at {x}"),
            Property::FmSubgradient { x, .. } => write!(f, "fm-subgradient at {x}"),
            Property::BoxedSubdifferentialVertex { x, lower, .. } => {
                write!(f, "subdifferential vertex at {x} with p >= {lower}")
            }
            Property::SubgradientEverywhere(_) => write!(f, "subgradient-everywhere"),
            Property::BiconjugateAgreesEverywhere(_) => write!(f, "biconjugate-agrees"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub instance: Instance,
    pub expected: Vec<Property>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyCheck {
    pub property: String,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

fn pt(v: &[i64]) -> ZPoint {
    ZPoint::from_ints(v)
}

fn rv(v: &[(i64, i64)]) -> RationalVector {
    RationalVector(v.iter().map(|&(a, b)| ratio(a, b)).collect())
}

fn expectations(name: &str) -> Vec<Property> {
    use Property::*;
    match name {
        "exla1" => vec![
            IntegrallyConvex(false),
            Witness(Violation::Domain { point: rv(&[(-1, 2), (0, 1), (1, 2)]) }),
            HoleFree(true),
            Conjugate { p: pt(&[0, 0, 0]), value: BigInt::from(1) },
            Biconjugate { x: pt(&[0, 0, 0]), value: ExtendedValue::Finite(rat(-1)) },
            IntegerSubgradient { x: pt(&[0, 0, 0]), exists: false },
            BiconjugateAgreesEverywhere(false),
        ],
        "rmconjic_set" => vec![
            IntegrallyConvex(true),
            Conjugate { p: pt(&[0, 0, 0, 0]), value: BigInt::from(0) },
            Conjugate { p: pt(&[1, 1, 1, 2]), value: BigInt::from(2) },
        ],
        "rmconjic_g" => vec![
            IntegrallyConvex(false),
            Witness(Violation::Pair {
                x: pt(&[0, 0, 0, 0]),
                y: pt(&[1, 1, 1, 2]),
                midpoint: rv(&[(1, 2), (1, 2), (1, 2), (1, 1)]),
                extension: ExtendedValue::Finite(ratio(5, 4)),
                average: rat(1),
            }),
        ],
        "rmedgedir" => vec![
            IntegrallyConvex(false),
            Witness(Violation::SetPoint { point: rv(&[(1, 1), (1, 2), (0, 1)]) }),
            HullVerticesIntegral(true),
            EdgeDirectionsInPm1(true),
        ],
        "rmsubg" => vec![
            IntegrallyConvex(true),
            IntegerSubgradient { x: pt(&[0, 0, 0]), exists: true },
            FmSubgradient { x: pt(&[0, 0, 0]), p: pt(&[0, 1, 0]) },
            BoxedSubdifferentialVertex { x: pt(&[0, 0, 0]), lower: -10, vertex: rv(&[(1, 2), (1, 2), (1, 2)]) },
            Biconjugate { x: pt(&[0, 0, 0]), value: ExtendedValue::Finite(rat(0)) },
        ],
        "rmfbbf_rational" => vec![
            IntegrallyConvex(false),
            Witness(Violation::SetPoint { point: rv(&[(3, 2), (2, 1)]) }),
            HullVerticesIntegral(true),
            EdgeDirectionsInPm1(false),
            HoleFree(true),
            SubgradientEverywhere(true),
            BiconjugateAgreesEverywhere(true),
        ],
        "unit-box-zero" | "square-1d" | "sep-square" | "sep-abs" | "lnat-pairs" => vec![
            IntegrallyConvex(true),
            HoleFree(true),
            SubgradientEverywhere(true),
            BiconjugateAgreesEverywhere(true),
        ],
        _ => Vec::new(),
    }
}

pub fn corpus() -> Vec<CorpusEntry> {
    SOURCES
        .iter()
        .map(|&(name, text)| CorpusEntry {
            name,
            instance: parse_instance(text).expect("corpus files parse"),
            expected: expectations(name),
        })
        .collect()
}

pub fn corpus_entry(name: &str) -> Option<CorpusEntry> {
    corpus().into_iter().find(|e| e.name == name)
}

fn show_witness(w: &Option<Violation>) -> String {
    w.as_ref().map_or_else(|| "none".to_string(), ToString::to_string)
}

/// Compute the property on `instance` and compare.
pub fn verify_property(instance: &Instance, property: &Property) -> PropertyCheck {
    let f = instance.clone().into_function();
    let (expected, actual) = match property {
        Property::IntegrallyConvex(e) => (e.to_string(), ic_verdict(instance).is_ic.to_string()),
        Property::Witness(w) => (w.to_string(), show_witness(&ic_verdict(instance).witness)),
        Property::HullVerticesIntegral(e) => (e.to_string(), hull_report(&f.domain()).all_vertices_integral.to_string()),
        Property::EdgeDirectionsInPm1(e) => (e.to_string(), hull_report(&f.domain()).directions_in_pm1.to_string()),
        Property::HoleFree(e) => (e.to_string(), hull_report(&f.domain()).hole_free.to_string()),
        Property::Conjugate { p, value } => (value.to_string(), conjugate_value(&f, p).to_string()),
        Property::Biconjugate { x, value } => {
            (value.to_string(), Biconjugator::new(&f).evaluate(x).value.to_string())
        }
        Property::IntegerSubgradient { x, exists } => (
            exists.to_string(),
            integral_subdifferential_exact(&f, x).map_or_else(|e| e.to_string(), |d| d.is_nonempty().to_string()),
        ),
        Property::FmSubgradient { x, p } => (
            p.to_string(),
            fm_integer_subgradient(&f, x, None).map_or_else(|e| e.to_string(), |(c, _)| c.p.to_string()),
        ),
        Property::BoxedSubdifferentialVertex { x, lower, vertex } => {
            let found = boxed_subdifferential_vertices(&f, x, *lower).map(|vs| vs.contains(vertex));
            ("true".to_string(), found.map_or_else(|e| e.to_string(), |b| b.to_string()))
        }
        Property::SubgradientEverywhere(e) => {
            let all = f
                .domain_points()
                .all(|x| integral_subdifferential_exact(&f, x).is_ok_and(|d| d.is_nonempty()));
            (e.to_string(), all.to_string())
        }
        Property::BiconjugateAgreesEverywhere(e) => (e.to_string(), biconjugate_agrees(&f).to_string()),
    };
    PropertyCheck { property: property.to_string(), ok: expected == actual, expected, actual }
}

fn ic_verdict(instance: &Instance) -> crate::checker::IcVerdict {
    match instance {
        Instance::Set(s) => is_integrally_convex_set(s),
        Instance::Function(f) => is_integrally_convex_function(f),
    }
}

/// Vertices of the local real subdifferential at `x` intersected with `p >= lower`.
pub fn boxed_subdifferential_vertices(f: &ZFunction, x: &ZPoint, lower: i64) -> Result<Vec<RationalVector>> {
    let n = f.dim();
    let mut rows = build_local_system(f, x)?.rows;
    for j in 0..n {
        let mut c = vec![0; n];
        c[j] = -1;
        rows.push(Row::from_ints(&c, -lower));
    }
    Ok(basic_solutions(n, &[], &rows))
}

fn biconjugate_agrees(f: &ZFunction) -> bool {
    let (lo, hi) = f.bounding_box();
    let lo: Vec<i64> = lo.to_i64().unwrap().iter().map(|v| v - 1).collect();
    let hi: Vec<i64> = hi.to_i64().unwrap().iter().map(|v| v + 1).collect();
    let b = Biconjugator::new(f);
    box_points(&lo, &hi).iter().all(|x| {
        let x = ZPoint::from_ints(x);
        b.evaluate(&x).value == f.value(&x)
    })
}

/// A function `sum_i phi_i(x_i)` on the box `[lo, hi]`, where `phis[i]` lists
/// `phi_i(lo_i), ..., phi_i(hi_i)` and must have nonnegative second differences.
pub fn gen_separable(lo: &[i64], hi: &[i64], phis: &[Vec<i64>]) -> Result<ZFunction> {
    check_box(lo, hi, phis)?;
    ZFunction::from_fn_on_box(lo, hi, |p| Some(separable_value(lo, phis, p)))
}

/// `sum_{i<j} c_ij |x_i - x_j| + sum_i phi_i(x_i)` on a box, with `c_ij >= 0`
/// read from the strict upper triangle of `weights`.
pub fn gen_lnat_style(lo: &[i64], hi: &[i64], weights: &[Vec<i64>], phis: &[Vec<i64>]) -> Result<ZFunction> {
    check_box(lo, hi, phis)?;
    let n = lo.len();
    if weights.len() != n || weights.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidArgument("weights must be an n x n matrix".into()));
    }
    if weights.iter().flatten().any(|&c| c < 0) {
        return Err(Error::InvalidArgument("pair weights must be nonnegative".into()));
    }
    ZFunction::from_fn_on_box(lo, hi, |p| Some(separable_value(lo, phis, p) + pair_value(weights, p)))
}

fn check_box(lo: &[i64], hi: &[i64], phis: &[Vec<i64>]) -> Result<()> {
    if lo.len() != hi.len() || lo.len() != phis.len() {
        return Err(Error::DimensionMismatch { expected: lo.len(), found: hi.len().max(phis.len()) });
    }
    for (i, phi) in phis.iter().enumerate() {
        if hi[i] < lo[i] || phi.len() as i64 != hi[i] - lo[i] + 1 {
            return Err(Error::InvalidArgument(format!("phi_{} must have {} values", i + 1, hi[i] - lo[i] + 1)));
        }
        if phi.windows(3).any(|w| w[0] + w[2] < 2 * w[1]) {
            return Err(Error::InvalidArgument(format!("phi_{} is not convex", i + 1)));
        }
    }
    Ok(())
}

fn separable_value(lo: &[i64], phis: &[Vec<i64>], p: &[i64]) -> i64 {
    p.iter().enumerate().map(|(i, &v)| phis[i][(v - lo[i]) as usize]).sum()
}

fn pair_value(weights: &[Vec<i64>], p: &[i64]) -> i64 {
    let n = p.len();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| weights[i][j] * (p[i] - p[j]).abs()).sum()
}

/// A random convex sequence of length `len` with small integer slopes.
pub fn random_convex_sequence(rng: &mut impl Rng, len: usize) -> Vec<i64> {
    let mut slope = rng.gen_range(-3..=1);
    let mut value = rng.gen_range(0..=3);
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(value);
        value += slope;
        slope += rng.gen_range(0..=2);
    }
    out
}

fn random_phis(rng: &mut impl Rng, lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    lo.iter().zip(hi).map(|(l, h)| random_convex_sequence(rng, (h - l + 1) as usize)).collect()
}

fn random_weights(rng: &mut impl Rng, n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=2)).collect()).collect()
}

pub fn gen_separable_random(lo: &[i64], hi: &[i64], seed: u64) -> ZFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phis = random_phis(&mut rng, lo, hi);
    gen_separable(lo, hi, &phis).expect("random sequences are convex")
}

pub fn gen_lnat_random(lo: &[i64], hi: &[i64], seed: u64) -> ZFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phis = random_phis(&mut rng, lo, hi);
    let weights = random_weights(&mut rng, lo.len());
    gen_lnat_style(lo, hi, &weights, &phis).expect("random data is valid")
}

/// A random integrally convex function on a subset of the box `[lo, hi]`.
///
/// Each attempt draws an L♮-convex domain (the box cut by random
/// `x_i - x_j <= k`), an L♮-convex base function scaled by a random factor and
/// random nonnegative noise; the checker accepts or rejects. Noise shrinks on
/// rejection. Fails with `GaveUp` after `max_attempts` rejections.
pub fn gen_random_ic(lo: &[i64], hi: &[i64], seed: u64, max_attempts: usize) -> Result<ZFunction> {
    let n = lo.len();
    if hi.len() != n || lo.iter().zip(hi).any(|(l, h)| l > h) {
        return Err(Error::InvalidArgument("empty box".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noise = 4i64;
    for _ in 0..max_attempts {
        let phis = random_phis(&mut rng, lo, hi);
        let weights = random_weights(&mut rng, n);
        let scale = rng.gen_range(1..=3);
        let mut cuts: Vec<(usize, usize, i64)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && rng.gen_bool(0.25) {
                    cuts.push((i, j, rng.gen_range(0..=1)));
                }
            }
        }
        let table: Vec<(Vec<i64>, i64)> = box_points(lo, hi)
            .into_iter()
            .filter(|p| cuts.iter().all(|&(i, j, k)| p[i] - p[j] <= k))
            .map(|p| {
                let base = separable_value(lo, &phis, &p) + pair_value(&weights, &p);
                let v = scale * base + rng.gen_range(0..=noise);
                (p, v)
            })
            .collect();
        let entries: Vec<(&[i64], i64)> = table.iter().map(|(p, v)| (p.as_slice(), *v)).collect();
        let f = ZFunction::from_ints(&entries)?;
        if is_integrally_convex_function(&f).is_ic {
            return Ok(f);
        }
        noise /= 2;
    }
    Err(Error::GaveUp(max_attempts))
}

/// A random function on a random nonempty subset of `{0,1}^n`; always
/// integrally convex.
pub fn gen_cube_subset(n: usize, seed: u64) -> ZFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let entries: Vec<(Vec<i64>, i64)> = box_points(&vec![0; n], &vec![1; n])
            .into_iter()
            .filter_map(|p| rng.gen_bool(0.6).then_some(p))
            .collect::<Vec<_>>()
            .into_iter()
            .map(|p| (p, rng.gen_range(-3..=5)))
            .collect();
        if !entries.is_empty() {
            let refs: Vec<(&[i64], i64)> = entries.iter().map(|(p, v)| (p.as_slice(), *v)).collect();
            return ZFunction::from_ints(&refs).unwrap();
        }
    }
}

/// The deterministic test suite: 125 integrally convex functions with
/// `n` in 1..=4 and at most 108 domain points.
pub fn ic_suite() -> Vec<(String, ZFunction)> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    let mut next = || {
        seed += 1;
        seed
    };
    for w in 0..30 {
        let width = 2 + w % 7;
        let s = next();
        let f = match w % 3 {
            0 => gen_separable_random(&[-1], &[width - 1], s),
            1 => gen_random_ic(&[0], &[width], s, 64).unwrap(),
            _ => gen_separable_random(&[0], &[width], s),
        };
        out.push((format!("n1-{w}"), f));
    }
    let boxes2: [(&[i64], &[i64]); 3] = [(&[0, 0], &[3, 3]), (&[-2, -2], &[2, 2]), (&[0, -1], &[4, 2])];
    for w in 0..35 {
        let (lo, hi) = boxes2[w % 3];
        let s = next();
        let f = match w % 4 {
            0 => gen_separable_random(lo, hi, s),
            1 => gen_lnat_random(lo, hi, s),
            2 => gen_cube_subset(2, s),
            _ => gen_random_ic(lo, hi, s, 64).unwrap(),
        };
        out.push((format!("n2-{w}"), f));
    }
    let boxes3: [(&[i64], &[i64]); 2] = [(&[0, 0, 0], &[2, 2, 2]), (&[-1, 0, 0], &[2, 3, 2])];
    for w in 0..35 {
        let (lo, hi) = boxes3[w % 2];
        let s = next();
        let f = match w % 4 {
            0 => gen_separable_random(lo, hi, s),
            1 => gen_lnat_random(lo, hi, s),
            2 => gen_cube_subset(3, s),
            _ => gen_random_ic(lo, hi, s, 64).unwrap(),
        };
        out.push((format!("n3-{w}"), f));
    }
    let boxes4: [(&[i64], &[i64]); 2] = [(&[0, 0, 0, 0], &[2, 2, 2, 2]), (&[0, 0, 0, 0], &[3, 2, 2, 1])];
    for w in 0..25 {
        let (lo, hi) = boxes4[w % 2];
        let s = next();
        let f = match w % 4 {
            0 => gen_separable_random(lo, hi, s),
            1 => gen_lnat_random(lo, hi, s),
            2 => gen_cube_subset(4, s),
            _ => gen_random_ic(lo, hi, s, 64).unwrap(),
        };
        out.push((format!("n4-{w}"), f));
    }
    out
}

/// Random subset of the box, for exercising the set checker on both answers.
pub fn gen_random_set(lo: &[i64], hi: &[i64], density: f64, seed: u64) -> ZSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = box_points(lo, hi);
    loop {
        let chosen: Vec<ZPoint> = pts.iter().filter(|_| rng.gen_bool(density)).map(|p| ZPoint::from_ints(p)).collect();
        if !chosen.is_empty() {
            return ZSet::new(lo.len(), chosen).unwrap();
        }
    }
}
