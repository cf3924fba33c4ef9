//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines always show.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use icx::checker::{hull_report, is_global_minimizer, is_integrally_convex_function, is_integrally_convex_set, Violation};
use icx::conjugacy::{
    conjugate_argmax, conjugate_value, integral_subdifferential_exact, conjugacy_suite, real_subdifferential_hrep,
    BiconjugateCertificate, Biconjugator, SubdifferentialDecision,
};
use icx::dc::toland_singer;
use icx::fm_subgradient::{fm_eliminate_simplified, fm_integer_subgradient, verify_subgradient};
use icx::geometry::{
    feasible_point, fm_eliminate_general, int_rat, lp_solve, rat, ratio, InequalitySystem, LpOutcome, Rational,
    RationalVector, Row, Sense,
};
use icx::instances::{boxed_subdifferential_vertices, corpus_entry, gen_random_set, ic_suite};
use icx::zfunction::{box_points, indicator, ExtendedValue, Instance, ZFunction, ZPoint, ZSet};

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn suite() -> &'static [(String, ZFunction)] {
    static SUITE: OnceLock<Vec<(String, ZFunction)>> = OnceLock::new();
    SUITE.get_or_init(ic_suite)
}

fn function(name: &str) -> ZFunction {
    corpus_entry(name).unwrap().instance.into_function()
}

fn set(name: &str) -> ZSet {
    match corpus_entry(name).unwrap().instance {
        Instance::Set(s) => s,
        Instance::Function(f) => f.domain(),
    }
}

fn pt(v: &[i64]) -> ZPoint {
    ZPoint::from_ints(v)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn first_failures(failures: Vec<String>, total: usize, what: &str) -> Outcome {
    if failures.is_empty() {
        Ok(format!("{total} {what}"))
    } else {
        Err(format!("{} of {total} {what} failed; first: {}", failures.len(), failures[0]))
    }
}

fn worked_examples() -> Outcome {
    let start = Instant::now();
    // Odd cycle through the origin.
    let f = function("exla1");
    let d = f.domain();
    ensure(!is_integrally_convex_set(&d).is_ic, || "D accepted".into())?;
    let origin = pt(&[0, 0, 0]);
    match integral_subdifferential_exact(&f, &origin).map_err(|e| e.to_string())? {
        SubdifferentialDecision::Empty(proof) => ensure(!proof.to_string().is_empty(), String::new)?,
        SubdifferentialDecision::Nonempty(c) => return Err(format!("integer subgradient {} at 0", c.p)),
    }
    let global = real_subdifferential_hrep(&f, &origin, false).map_err(|e| e.to_string())?;
    let half = vec![ratio(1, 2); 3];
    ensure(global.system.satisfied_by(&half), || "(1/2,1/2,1/2) not a real subgradient".into())?;
    ensure(conjugate_value(&f, &origin) == BigInt::from(1), || "f•(0) != 1".into())?;
    let b = Biconjugator::new(&f).evaluate(&origin).value;
    ensure(b == ExtendedValue::Finite(rat(-1)), || format!("f••(0) = {b}"))?;
    ensure(f.value(&origin) == ExtendedValue::Finite(rat(0)), || "f(0) != 0".into())?;

    // Four 0/1 points and the max formula.
    let s = set("rmconjic_set");
    ensure(is_integrally_convex_set(&s).is_ic, || "S rejected".into())?;
    let delta = indicator(&s);
    for p in box_points(&[-1; 4], &[2; 4]) {
        let expected = [p[0] + p[1], p[1] + p[2], p[0] + p[2], p[3]].into_iter().max().unwrap();
        let got = conjugate_value(&delta, &pt(&p));
        ensure(got == BigInt::from(expected), || format!("δ•({p:?}) = {got}, expected {expected}"))?;
    }
    let g = function("rmconjic_g");
    match is_integrally_convex_function(&g).witness {
        Some(Violation::Pair { extension, average, .. }) => ensure(
            extension == ExtendedValue::Finite(ratio(5, 4)) && average == rat(1),
            || format!("g witness {extension} vs {average}"),
        )?,
        other => return Err(format!("g verdict {other:?}")),
    }

    // Parallelogram with integral hull.
    let par = set("rmedgedir");
    let h = hull_report(&par);
    ensure(h.all_vertices_integral && h.directions_in_pm1, || "hull report".into())?;
    ensure(h.edge_primitive_directions.iter().all(|d| d.coords().iter().all(|c| c.magnitude() <= &One::one())), || {
        "direction outside {-1,0,1}".into()
    })?;
    let w = is_integrally_convex_set(&par).witness;
    let expected = RationalVector(vec![rat(1), ratio(1, 2), rat(0)]);
    ensure(w == Some(Violation::SetPoint { point: expected }), || format!("parallelogram witness {w:?}"))?;

    // Half-integral vertex of the real subdifferential.
    let f = function("rmsubg");
    let local = real_subdifferential_hrep(&f, &origin, true).map_err(|e| e.to_string())?;
    let rows: BTreeSet<Row> = local.system.rows.iter().cloned().collect();
    let printed: BTreeSet<Row> =
        [[1, 1, 0], [0, 1, 1], [1, 0, 1]].iter().map(|c| Row::from_ints(c, 1)).collect();
    ensure(rows == printed, || format!("local rows {:?}", local.system.rows))?;
    let vertices = boxed_subdifferential_vertices(&f, &origin, -10).map_err(|e| e.to_string())?;
    ensure(vertices.contains(&RationalVector(half.clone())), || "(1/2,1/2,1/2) not a vertex".into())?;
    let dz = integral_subdifferential_exact(&f, &origin).map_err(|e| e.to_string())?;
    ensure(dz.is_nonempty(), || "integer subdifferential empty".into())?;

    let t = start.elapsed();
    ensure(t < Duration::from_secs(5), || format!("took {t:?}"))?;
    Ok("all worked examples reproduced".into())
}

fn fm_subgradients() -> Outcome {
    let failures: Vec<String> = suite()
        .par_iter()
        .flat_map_iter(|(name, f)| {
            f.iter()
                .filter_map(|(x, fx)| {
                    let p = match fm_integer_subgradient(f, x, None) {
                        Ok((c, _)) => c.p,
                        Err(e) => return Some(format!("{name} at {x}: {e}")),
                    };
                    // Exhaustive subgradient inequality, written out here.
                    let bad = f.iter().find(|(y, fy)| *fy - fx < p.dot(&y.sub(x)));
                    bad.map(|(y, _)| format!("{name}: p = {p} at {x} violated by {y}"))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let points: usize = suite().iter().map(|(_, f)| f.len()).sum();
    first_failures(failures, points, "domain points")
}

fn outside_samples(f: &ZFunction, count: usize, seed: u64) -> Vec<ZPoint> {
    let (lo, hi) = f.bounding_box();
    let grow = if f.dim() == 1 { 12 } else { 3 };
    let lo: Vec<i64> = lo.to_i64().unwrap().iter().map(|v| v - grow).collect();
    let hi: Vec<i64> = hi.to_i64().unwrap().iter().map(|v| v + grow).collect();
    let mut candidates = box_points(&lo, &hi);
    candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let domain: Vec<ZPoint> = f.domain_points().cloned().collect();
    candidates
        .into_iter()
        .map(|c| pt(&c))
        .filter(|x| !in_convex_hull(&x.to_rational(), &domain))
        .take(count)
        .collect()
}

/// Definitional LP: is there `lambda >= 0`, `sum lambda = 1`, `sum lambda_i y_i = x`?
fn in_convex_hull(x: &RationalVector, points: &[ZPoint]) -> bool {
    let m = points.len();
    let mut sys = InequalitySystem::new(m);
    let unit = |i: usize, s: i64| {
        let mut c = vec![Rational::zero(); m];
        c[i] = rat(s);
        c
    };
    for i in 0..m {
        sys.push(Row::new(unit(i, -1), rat(0)));
    }
    let ones = vec![rat(1); m];
    sys.push(Row::new(ones.clone(), rat(1)));
    sys.push(Row::new(ones.iter().map(|v| -v).collect(), rat(-1)));
    for j in 0..x.dim() {
        let c: Vec<Rational> = points.iter().map(|p| int_rat(&p.coords()[j])).collect();
        sys.push(Row::new(c.iter().map(|v| -v).collect(), -x[j].clone()));
        sys.push(Row::new(c, x[j].clone()));
    }
    feasible_point(&sys).is_some()
}

fn biconjugacy() -> Outcome {
    let failures: Vec<String> = suite()
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, (name, f))| {
            let b = Biconjugator::new(f);
            let mut out = Vec::new();
            // No integer points of the hull lie outside the domain.
            if !hull_report(&f.domain()).hole_free {
                out.push(format!("{name}: domain has holes"));
            }
            for (x, fx) in f.iter() {
                let v = b.evaluate(x).value;
                if v != ExtendedValue::int(fx) {
                    out.push(format!("{name}: f••{x} = {v} but f = {fx}"));
                }
                if f.dim() == 1 {
                    let s = b.evaluate_by_search(x);
                    let stable = matches!(s.certificate, BiconjugateCertificate::Search { stable: true, .. });
                    if s.value != ExtendedValue::int(fx) || !stable {
                        out.push(format!("{name}: search at {x} gave {} ({:?})", s.value, s.certificate));
                    }
                }
            }
            let outside = outside_samples(f, 20, i as u64);
            if outside.len() < 20 {
                out.push(format!("{name}: only {} outside samples", outside.len()));
            }
            for x in outside {
                let r = b.evaluate(&x);
                if r.value != ExtendedValue::PosInfinity {
                    out.push(format!("{name}: f••{x} = {} outside the hull", r.value));
                }
            }
            out
        })
        .collect();
    first_failures(failures, suite().len(), "instances")
}

/// Whether every solution of `system` satisfies `row`.
fn implied(system: &InequalitySystem, row: &Row) -> bool {
    match lp_solve(&RationalVector(row.coeffs.clone()), system, Sense::Maximize) {
        Ok(LpOutcome::Optimal { value, .. }) => value <= row.rhs,
        Ok(LpOutcome::Infeasible) => true,
        _ => false,
    }
}

fn contains(outer: &InequalitySystem, inner: &InequalitySystem) -> bool {
    let known: BTreeSet<&Row> = inner.rows.iter().collect();
    outer.rows.iter().all(|r| known.contains(r) || implied(inner, r))
}

fn simplified_elimination() -> Outcome {
    let failures: Vec<String> = suite()
        .par_iter()
        .flat_map_iter(|(name, f)| {
            let n = f.dim();
            let mut out = Vec::new();
            for x in f.domain_points() {
                let sys = icx::fm_subgradient::build_local_system(f, x).unwrap().normalized();
                let mut simplified = sys.clone();
                let mut general = sys;
                for var in 0..n {
                    let (next, rec) = fm_eliminate_simplified(&simplified, var);
                    // The trivial row for y = x always sits in the zero class; a
                    // nonzero cross sum needs a nontrivial zero row besides it.
                    let nonzero_cross = rec.plus.iter().any(|a| {
                        rec.minus.iter().any(|b| a.coeffs.iter().zip(&b.coeffs).any(|(u, v)| !(u + v).is_zero()))
                    });
                    if nonzero_cross && rec.zero.is_empty() {
                        out.push(format!("{name} at {x}: stage p{} has no zero rows", var + 1));
                    }
                    simplified = next.normalized();
                    general = icx::geometry::integer::remove_redundant(&fm_eliminate_general(&general, var));
                    if !contains(&general, &simplified) || !contains(&simplified, &general) {
                        out.push(format!("{name} at {x}: stage p{} differs", var + 1));
                    }
                }
            }
            out
        })
        .collect();
    let points: usize = suite().iter().map(|(_, f)| f.len()).sum();
    first_failures(failures, points, "domain points")
}

fn random_table(lo: &[i64], hi: &[i64], seed: u64) -> ZFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries: Vec<(Vec<i64>, i64)> = box_points(lo, hi)
        .into_iter()
        .filter(|_| rng.gen_bool(0.75))
        .collect::<Vec<_>>()
        .into_iter()
        .map(|p| (p, rng.gen_range(0..=5)))
        .collect();
    let refs: Vec<(&[i64], i64)> = entries.iter().map(|(p, v)| (p.as_slice(), *v)).collect();
    ZFunction::from_ints(&refs).unwrap()
}

fn subgradient_iff_biconjugate() -> Outcome {
    let mut mixed: Vec<(String, ZFunction)> = ["exla1", "rmsubg", "rmfbbf_rational", "rmedgedir", "square-1d", "sep-square", "unit-box-zero"]
        .iter()
        .map(|n| (n.to_string(), function(n)))
        .collect();
    for s in 0..24u64 {
        let (lo, hi): (&[i64], &[i64]) = if s % 3 == 2 { (&[0, 0, 0], &[1, 1, 1]) } else { (&[0, 0], &[2, 2]) };
        let f = random_table(lo, hi, 1000 + s);
        if !f.is_empty() {
            mixed.push((format!("random-{s}"), f));
        }
    }
    mixed.extend(suite().iter().filter(|(_, f)| f.dim() <= 2 && f.len() <= 16).take(10).cloned());
    let non_ic = mixed.iter().filter(|(_, f)| !is_integrally_convex_function(f).is_ic).count();
    let results: Vec<(String, bool, bool)> = mixed
        .par_iter()
        .flat_map_iter(|(name, f)| {
            let b = Biconjugator::new(f);
            f.iter()
                .map(|(x, fx)| {
                    let sub = integral_subdifferential_exact(f, x).unwrap().is_nonempty();
                    let bic = b.evaluate_by_search(x).value == ExtendedValue::int(fx);
                    (format!("{name} at {x}"), sub, bic)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let empty = results.iter().filter(|r| !r.1).count();
    let failures: Vec<String> = results
        .iter()
        .filter(|r| r.1 != r.2)
        .map(|(w, s, b)| format!("{w}: subgradient {s}, biconjugate agrees {b}"))
        .collect();
    if failures.is_empty() && (empty == 0 || non_ic == 0) {
        return Err(format!("only one branch exercised ({empty} empty, {non_ic} non-IC instances)"));
    }
    first_failures(failures, results.len(), &format!("points ({empty} with empty subdifferential)"))
}

fn conjugate_symmetry() -> Outcome {
    let failures: Vec<String> = suite()
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, (name, f))| {
            let n = f.dim();
            let mut rng = ChaCha8Rng::seed_from_u64(500 + i as u64);
            let ps: Vec<ZPoint> =
                (0..25).map(|_| ZPoint::from_ints(&(0..n).map(|_| rng.gen_range(-4..=4)).collect::<Vec<_>>())).collect();
            let mut out: Vec<String> = conjugacy_suite(f, &ps, 2)
                .failures
                .iter()
                .map(|e| format!("{name}: {:?} at x = {}, p = {}: {}", e.item, e.x, e.p, e.detail))
                .collect();
            let b = Biconjugator::new(f);
            for p in &ps {
                let (fp, argmax) = conjugate_argmax(f, p);
                for x in &argmax {
                    let fx = f.get(x).unwrap();
                    if fx + &fp != p.dot(x) || verify_subgradient(f, x, p).is_err() {
                        out.push(format!("{name}: identity fails at x = {x}, p = {p}"));
                    }
                    if b.evaluate(x).value != ExtendedValue::int(fx) {
                        out.push(format!("{name}: f•• != f at {x}"));
                    }
                }
                // The identity characterises subgradients at every other point too.
                for (y, fy) in f.iter() {
                    if (fy + &fp == p.dot(y)) != verify_subgradient(f, y, p).is_ok() {
                        out.push(format!("{name}: identity and subgradient disagree at {y}, p = {p}"));
                    }
                }
            }
            out
        })
        .collect();
    first_failures(failures, suite().len() * 25, "(instance, p) samples")
}

fn dc_duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut pool: Vec<(String, ZFunction)> = ["exla1", "rmsubg", "rmfbbf_rational", "rmedgedir", "square-1d", "sep-square", "sep-abs", "lnat-pairs", "unit-box-zero", "rmconjic_g"]
        .iter()
        .map(|n| (n.to_string(), function(n)))
        .collect();
    pool.extend(suite().iter().step_by(3).cloned());
    let hs: Vec<&(String, ZFunction)> = suite().iter().filter(|(_, f)| f.dim() <= 3).collect();
    let mut pairs = Vec::new();
    while pairs.len() < 30 {
        let (hn, h) = hs[rng.gen_range(0..hs.len())];
        let same: Vec<&(String, ZFunction)> = pool.iter().filter(|(_, g)| g.dim() == h.dim()).collect();
        let (gn, g) = same[rng.gen_range(0..same.len())];
        let g = if pairs.len() < 22 {
            let shift = h.argmin().0.sub(g.argmin().0);
            let moved = g.shift(&shift);
            let kept: std::collections::BTreeMap<ZPoint, BigInt> =
                moved.iter().filter(|(x, _)| h.contains(x)).map(|(x, v)| (x.clone(), v.clone())).collect();
            if kept.is_empty() {
                continue;
            }
            ZFunction::new(h.dim(), kept).unwrap()
        } else {
            if !g.domain_points().any(|x| h.contains(x)) {
                continue;
            }
            g.clone()
        };
        pairs.push((format!("g = {gn}, h = {hn}"), g, h.clone()));
    }
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|(name, g, h)| {
            let r = match toland_singer(g, h) {
                Ok(r) => r,
                Err(e) => return Some(format!("{name}: {e}")),
            };
            if !r.equal {
                return Some(format!("{name}: primal {} dual {}", r.primal, r.dual));
            }
            let ExtendedValue::Finite(primal) = &r.primal else {
                return r.separation.is_none().then(|| format!("{name}: -inf without separation"));
            };
            if !r.stable {
                return Some(format!("{name}: dual minimum moved when the box was enlarged"));
            }
            if !r.subgradient_attains_dual {
                return Some(format!("{name}: argmin subgradient misses the dual"));
            }
            // Weak duality over a box: nothing below the primal value.
            let n = h.dim();
            let radius = if n <= 2 { 5 } else { 2 };
            let below = box_points(&vec![-radius; n], &vec![radius; n]).into_iter().find(|p| {
                let p = pt(p);
                int_rat(&(conjugate_value(h, &p) - conjugate_value(g, &p))) < *primal
            });
            below.map(|p| format!("{name}: dual objective below primal at {p:?}"))
        })
        .collect();
    first_failures(failures, pairs.len(), "pairs")
}

fn local_optimality() -> Outcome {
    let failures: Vec<String> = suite()
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, (name, f))| {
            let mut rng = ChaCha8Rng::seed_from_u64(900 + i as u64);
            let pts: Vec<&ZPoint> = f.domain_points().collect();
            let mut sample: Vec<&ZPoint> = vec![f.argmin().0];
            sample.extend((0..9).map(|_| pts[rng.gen_range(0..pts.len())]));
            let min = f.min_value().clone();
            sample
                .into_iter()
                .filter_map(|x| {
                    let local = is_global_minimizer(f, x, false).unwrap();
                    let global = f.get(x).unwrap() == &min;
                    (local != global).then(|| format!("{name} at {x}: local {local}, global {global}"))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    first_failures(failures, suite().len() * 10, "sampled points")
}

/// Up to 200 points of `conv(S)`: pairwise midpoints first, then random
/// convex combinations with small denominators.
fn oracle_samples(s: &ZSet, seed: u64) -> Vec<RationalVector> {
    let pts: Vec<RationalVector> = s.rational_points();
    let mut out: BTreeSet<RationalVector> = BTreeSet::new();
    let half = ratio(1, 2);
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            out.insert(pts[i].add(&pts[j]).scale(&half));
        }
    }
    let mut out: Vec<RationalVector> = out.into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out.shuffle(&mut rng);
    out.truncate(150);
    let mut guard = 0;
    while out.len() < 200 && pts.len() > 1 && guard < 2000 {
        guard += 1;
        let k = rng.gen_range(2..=4.min(pts.len()));
        let den = rng.gen_range(2..=4i64);
        let mut weights = vec![0i64; k];
        for _ in 0..den {
            weights[rng.gen_range(0..k)] += 1;
        }
        let mut x = RationalVector::zeros(s.dim());
        for &w in &weights {
            let p = &pts[rng.gen_range(0..pts.len())];
            x = x.add(&p.scale(&ratio(w, den)));
        }
        out.push(x);
    }
    out
}

fn oracle_is_ic(s: &ZSet, seed: u64) -> bool {
    oracle_samples(s, seed).iter().all(|x| {
        let local: Vec<ZPoint> = s
            .iter()
            .filter(|y| y.coords().iter().zip(&x.0).all(|(a, b)| (int_rat(a) - b).abs() < rat(1)))
            .cloned()
            .collect();
        !local.is_empty() && in_convex_hull(x, &local)
    })
}

fn checker_cross_validation() -> Outcome {
    let mut sets: Vec<(String, ZSet)> = Vec::new();
    let small = |s: &ZSet| {
        let (lo, hi) = s.bounding_box();
        s.dim() <= 3 && lo.coords().iter().zip(hi.coords()).all(|(l, h)| h - l <= BigInt::from(3))
    };
    for name in ["exla1", "rmedgedir", "rmfbbf_rational", "unit-box-zero", "square-1d", "lnat-pairs", "rmsubg"] {
        sets.push((name.to_string(), set(name)));
    }
    sets.extend(suite().iter().map(|(n, f)| (n.clone(), f.domain())));
    let boxes: [(&[i64], &[i64]); 4] = [(&[0, 0], &[2, 2]), (&[0, 0], &[3, 3]), (&[0, 0, 0], &[1, 1, 1]), (&[0, 0, 0], &[2, 2, 2])];
    for s in 0..160u64 {
        let (lo, hi) = boxes[(s % 4) as usize];
        let density = [0.3, 0.5, 0.7, 0.85][(s / 4 % 4) as usize];
        sets.push((format!("random-set-{s}"), gen_random_set(lo, hi, density, 3000 + s)));
    }
    sets.retain(|(_, s)| small(s));
    let verdicts: Vec<(String, bool, bool)> = sets
        .par_iter()
        .enumerate()
        .map(|(i, (name, s))| (name.clone(), is_integrally_convex_set(s).is_ic, oracle_is_ic(s, i as u64)))
        .collect();
    let non_ic = verdicts.iter().filter(|v| !v.1).count();
    let failures: Vec<String> = verdicts
        .iter()
        .filter(|v| v.1 != v.2)
        .map(|(n, c, o)| format!("{n}: checker {c}, oracle {o}"))
        .collect();
    first_failures(failures, verdicts.len(), &format!("sets ({non_ic} not integrally convex)"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("worked examples", worked_examples),
        ("fm integer subgradients on the suite", fm_subgradients),
        ("integral biconjugacy on the suite", biconjugacy),
        ("simplified elimination equals projection", simplified_elimination),
        ("subgradient exists iff biconjugate agrees", subgradient_iff_biconjugate),
        ("conjugate identity and symmetry", conjugate_symmetry),
        ("dc duality", dc_duality),
        ("local optimality test", local_optimality),
        ("set checker against sampling oracle", checker_cross_validation),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail}; {secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
