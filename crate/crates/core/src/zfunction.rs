//! Integer-valued functions and finite sets on Z^n, and the text instance format.
//!
//! ```text
//! dim 3
//! fn
//! 0 0 0 : 0
//! 1 1 0 : 1
//! ```
//!
//! Points missing from a function table have value +inf.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::geometry::{int_rat, Rational, RationalVector};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZPoint(pub Vec<BigInt>);

impl ZPoint {
    pub fn zeros(dim: usize) -> Self {
        ZPoint(vec![BigInt::zero(); dim])
    }

    pub fn from_ints(values: &[i64]) -> Self {
        ZPoint(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn to_rational(&self) -> RationalVector {
        RationalVector::from_bigints(&self.0)
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(ToPrimitive::to_i64).collect()
    }

    pub fn add(&self, other: &ZPoint) -> ZPoint {
        ZPoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &ZPoint) -> ZPoint {
        ZPoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn dot(&self, other: &ZPoint) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn linf_distance(&self, other: &ZPoint) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).max().unwrap_or_default()
    }

    /// The points `self + d` for every `d` in {-1, 0, 1}^n other than 0.
    pub fn unit_neighbors(&self) -> Vec<ZPoint> {
        let n = self.dim();
        let mut out = Vec::with_capacity(3usize.pow(n as u32) - 1);
        for code in 0..3usize.pow(n as u32) {
            let mut c = code;
            let mut y = self.clone();
            let mut nonzero = false;
            for coord in y.0.iter_mut() {
                let d = (c % 3) as i64 - 1;
                c /= 3;
                if d != 0 {
                    nonzero = true;
                    *coord += d;
                }
            }
            if nonzero {
                out.push(y);
            }
        }
        out.sort();
        out
    }
}

impl fmt::Display for ZPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A value in Q extended by both infinities.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedValue {
    NegInfinity,
    Finite(Rational),
    PosInfinity,
}

impl ExtendedValue {
    pub fn int(v: &BigInt) -> Self {
        ExtendedValue::Finite(int_rat(v))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtendedValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedValue::Finite(_))
    }
}

impl Add for &ExtendedValue {
    type Output = ExtendedValue;

    /// Panics on `+inf + -inf`, which never arises in this crate.
    fn add(self, rhs: &ExtendedValue) -> ExtendedValue {
        use ExtendedValue::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a + b),
            (PosInfinity, NegInfinity) | (NegInfinity, PosInfinity) => panic!("undefined sum of opposite infinities"),
            (PosInfinity, _) | (_, PosInfinity) => PosInfinity,
            _ => NegInfinity,
        }
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::NegInfinity => write!(f, "-inf"),
            ExtendedValue::Finite(v) => write!(f, "{v}"),
            ExtendedValue::PosInfinity => write!(f, "+inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZSet {
    dim: usize,
    points: BTreeSet<ZPoint>,
}

impl ZSet {
    pub fn new(dim: usize, points: impl IntoIterator<Item = ZPoint>) -> Result<Self> {
        let points: BTreeSet<ZPoint> = points.into_iter().collect();
        if points.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if let Some(p) = points.iter().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        Ok(ZSet { dim, points })
    }

    pub fn from_ints(points: &[&[i64]]) -> Result<Self> {
        let dim = points.first().map_or(0, |p| p.len());
        ZSet::new(dim, points.iter().map(|p| ZPoint::from_ints(p)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &ZPoint) -> bool {
        self.points.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = &ZPoint> {
        self.points.iter()
    }

    pub fn rational_points(&self) -> Vec<RationalVector> {
        self.points.iter().map(ZPoint::to_rational).collect()
    }

    /// Componentwise minimum and maximum.
    pub fn bounding_box(&self) -> (ZPoint, ZPoint) {
        bounding_box(self.dim, self.points.iter())
    }
}

fn bounding_box<'a>(dim: usize, points: impl Iterator<Item = &'a ZPoint>) -> (ZPoint, ZPoint) {
    let mut lo: Option<Vec<BigInt>> = None;
    let mut hi: Option<Vec<BigInt>> = None;
    for p in points {
        match (&mut lo, &mut hi) {
            (Some(l), Some(h)) => {
                for j in 0..dim {
                    if p.0[j] < l[j] {
                        l[j] = p.0[j].clone();
                    }
                    if p.0[j] > h[j] {
                        h[j] = p.0[j].clone();
                    }
                }
            }
            _ => {
                lo = Some(p.0.clone());
                hi = Some(p.0.clone());
            }
        }
    }
    (ZPoint(lo.unwrap_or_default()), ZPoint(hi.unwrap_or_default()))
}

/// Domain points and values as machine integers, when they all fit.
#[derive(Clone, Debug)]
pub struct SmallTable {
    pub points: Vec<Vec<i64>>,
    pub values: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct ZFunction {
    dim: usize,
    table: BTreeMap<ZPoint, BigInt>,
    small: OnceLock<Option<SmallTable>>,
}

impl PartialEq for ZFunction {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.table == other.table
    }
}

impl Eq for ZFunction {}

impl ZFunction {
    pub fn new(dim: usize, table: BTreeMap<ZPoint, BigInt>) -> Result<Self> {
        if table.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        if let Some(p) = table.keys().find(|p| p.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: p.dim() });
        }
        Ok(ZFunction { dim, table, small: OnceLock::new() })
    }

    pub fn from_ints(entries: &[(&[i64], i64)]) -> Result<Self> {
        let dim = entries.first().map_or(0, |(p, _)| p.len());
        let mut table = BTreeMap::new();
        for (p, v) in entries {
            if table.insert(ZPoint::from_ints(p), BigInt::from(*v)).is_some() {
                return Err(Error::InvalidArgument(format!("duplicate point {}", ZPoint::from_ints(p))));
            }
        }
        ZFunction::new(dim, table)
    }

    /// Tabulate `value` on the integer box `[lo, hi]`; `None` means +inf.
    pub fn from_fn_on_box(lo: &[i64], hi: &[i64], value: impl Fn(&[i64]) -> Option<i64>) -> Result<Self> {
        let mut table = BTreeMap::new();
        for p in box_points(lo, hi) {
            if let Some(v) = value(&p) {
                table.insert(ZPoint::from_ints(&p), BigInt::from(v));
            }
        }
        ZFunction::new(lo.len(), table)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn get(&self, x: &ZPoint) -> Option<&BigInt> {
        self.table.get(x)
    }

    pub fn value(&self, x: &ZPoint) -> ExtendedValue {
        self.get(x).map_or(ExtendedValue::PosInfinity, ExtendedValue::int)
    }

    pub fn contains(&self, x: &ZPoint) -> bool {
        self.table.contains_key(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ZPoint, &BigInt)> {
        self.table.iter()
    }

    pub fn table(&self) -> &BTreeMap<ZPoint, BigInt> {
        &self.table
    }

    pub fn domain(&self) -> ZSet {
        ZSet { dim: self.dim, points: self.table.keys().cloned().collect() }
    }

    pub fn domain_points(&self) -> impl Iterator<Item = &ZPoint> {
        self.table.keys()
    }

    pub fn bounding_box(&self) -> (ZPoint, ZPoint) {
        bounding_box(self.dim, self.table.keys())
    }

    pub fn min_value(&self) -> &BigInt {
        self.table.values().min().expect("nonempty table")
    }

    pub fn max_value(&self) -> &BigInt {
        self.table.values().max().expect("nonempty table")
    }

    /// A domain point of minimum value, the lexicographically smallest one.
    pub fn argmin(&self) -> (&ZPoint, &BigInt) {
        self.table
            .iter()
            .min_by(|a, b| a.1.cmp(b.1).then_with(|| a.0.cmp(b.0)))
            .expect("nonempty table")
    }

    pub fn small_table(&self) -> Option<&SmallTable> {
        self.small
            .get_or_init(|| {
                let mut points = Vec::with_capacity(self.len());
                let mut values = Vec::with_capacity(self.len());
                // Leave headroom so inner products over small boxes stay in range.
                let limit = 1i64 << 40;
                for (p, v) in &self.table {
                    let q = p.to_i64()?;
                    let w = v.to_i64()?;
                    if w.abs() > limit || q.iter().any(|c| c.abs() > limit) {
                        return None;
                    }
                    points.push(q);
                    values.push(w);
                }
                Some(SmallTable { points, values })
            })
            .as_ref()
    }

    /// `y -> f(y + x) - f(x)`.
    pub fn translate_to_origin(&self, x: &ZPoint) -> Result<ZFunction> {
        let fx = self.get(x).ok_or_else(|| Error::NotInDomain(x.to_string()))?;
        let table = self.table.iter().map(|(y, v)| (y.sub(x), v - fx)).collect();
        ZFunction::new(self.dim, table)
    }

    /// `x -> f(x) + <c, x>`.
    pub fn add_linear(&self, c: &ZPoint) -> ZFunction {
        let table = self.table.iter().map(|(y, v)| (y.clone(), v + c.dot(y))).collect();
        ZFunction { dim: self.dim, table, small: OnceLock::new() }
    }

    /// `x -> f(x - shift)`.
    pub fn shift(&self, shift: &ZPoint) -> ZFunction {
        let table = self.table.iter().map(|(y, v)| (y.add(shift), v.clone())).collect();
        ZFunction { dim: self.dim, table, small: OnceLock::new() }
    }
}

pub fn indicator(s: &ZSet) -> ZFunction {
    let table = s.points.iter().map(|p| (p.clone(), BigInt::zero())).collect();
    ZFunction { dim: s.dim, table, small: OnceLock::new() }
}

/// Every integer point of the box `[lo, hi]` in lexicographic order.
pub fn box_points(lo: &[i64], hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::with_capacity(lo.len())];
    for (&l, &h) in lo.iter().zip(hi) {
        out = out
            .into_iter()
            .flat_map(|p| {
                (l..=h).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Set(ZSet),
    Function(ZFunction),
}

impl Instance {
    pub fn dim(&self) -> usize {
        match self {
            Instance::Set(s) => s.dim(),
            Instance::Function(f) => f.dim(),
        }
    }

    /// Sets are read as their indicator functions.
    pub fn into_function(self) -> ZFunction {
        match self {
            Instance::Set(s) => indicator(&s),
            Instance::Function(f) => f,
        }
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_ints(tokens: &[&str], line: usize) -> Result<Vec<BigInt>> {
    tokens
        .iter()
        .map(|t| t.parse::<BigInt>().map_err(|_| parse_error(line, format!("invalid integer `{t}`"))))
        .collect()
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut dim: Option<usize> = None;
    let mut kind: Option<bool> = None;
    let mut table: BTreeMap<ZPoint, BigInt> = BTreeMap::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some(n) = dim else {
            let mut it = content.split_whitespace();
            match (it.next(), it.next(), it.next()) {
                (Some("dim"), Some(v), None) => {
                    dim = Some(v.parse().map_err(|_| parse_error(line, format!("invalid dimension `{v}`")))?);
                }
                _ => return Err(parse_error(line, "expected `dim <n>`")),
            }
            continue;
        };
        let Some(is_fn) = kind else {
            kind = Some(match content {
                "fn" => true,
                "set" => false,
                other => return Err(parse_error(line, format!("expected `fn` or `set`, found `{other}`"))),
            });
            continue;
        };
        let (coords, value) = if is_fn {
            let (lhs, rhs) = content
                .split_once(':')
                .ok_or_else(|| parse_error(line, "expected `<coords> : <value>`"))?;
            let v = parse_ints(&rhs.split_whitespace().collect::<Vec<_>>(), line)?;
            if v.len() != 1 {
                return Err(parse_error(line, "expected exactly one value after `:`"));
            }
            (lhs, v.into_iter().next().unwrap())
        } else {
            if content.contains(':') {
                return Err(parse_error(line, "set records take no value"));
            }
            (content, BigInt::zero())
        };
        let coords = parse_ints(&coords.split_whitespace().collect::<Vec<_>>(), line)?;
        if coords.len() != n {
            return Err(parse_error(line, format!("expected {n} coordinates, found {}", coords.len())));
        }
        let p = ZPoint(coords);
        if table.contains_key(&p) {
            return Err(parse_error(line, format!("duplicate point {p}")));
        }
        table.insert(p, value);
    }
    let (Some(n), Some(is_fn)) = (dim, kind) else {
        return Err(parse_error(last_line.max(1), "missing header"));
    };
    if table.is_empty() {
        return Err(parse_error(last_line, "no points"));
    }
    Ok(if is_fn {
        Instance::Function(ZFunction::new(n, table)?)
    } else {
        Instance::Set(ZSet { dim: n, points: table.into_keys().collect() })
    })
}

fn write_coords(out: &mut String, p: &ZPoint) {
    let parts: Vec<String> = p.0.iter().map(ToString::to_string).collect();
    out.push_str(&parts.join(" "));
}

pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = format!("dim {}\n", instance.dim());
    match instance {
        Instance::Set(s) => {
            out.push_str("set\n");
            for p in s.iter() {
                write_coords(&mut out, p);
                out.push('\n');
            }
        }
        Instance::Function(f) => {
            out.push_str("fn\n");
            for (p, v) in f.iter() {
                write_coords(&mut out, p);
                out.push_str(&format!(" : {v}\n"));
            }
        }
    }
    out
}

/// Parse whitespace- or comma-separated integers, as given on a command line.
pub fn parse_point(text: &str) -> Result<ZPoint> {
    let tokens: Vec<&str> = text
        .split(|c: char| c.is_whitespace() || c == ',' || c == '(' || c == ')')
        .filter(|t| !t.is_empty())
        .collect();
    Ok(ZPoint(parse_ints(&tokens, 1)?))
}
