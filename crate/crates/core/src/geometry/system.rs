use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::rational::{denominator_lcm, dot, int_rat, primitive_integer_vector, Rational, RationalVector};
use crate::error::{Error, Result};

/// One inequality `coeffs · p <= rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Row {
    pub coeffs: Vec<Rational>,
    pub rhs: Rational,
}

impl Row {
    pub fn new(coeffs: Vec<Rational>, rhs: Rational) -> Self {
        Row { coeffs, rhs }
    }

    pub fn from_ints(coeffs: &[i64], rhs: i64) -> Self {
        Row {
            coeffs: coeffs.iter().map(|&c| super::rational::rat(c)).collect(),
            rhs: super::rational::rat(rhs),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn satisfied_by(&self, p: &[Rational]) -> bool {
        dot(&self.coeffs, p) <= self.rhs
    }

    pub fn is_tight_at(&self, p: &[Rational]) -> bool {
        dot(&self.coeffs, p) == self.rhs
    }

    pub fn add(&self, other: &Row) -> Row {
        Row {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
            rhs: &self.rhs + &other.rhs,
        }
    }

    pub fn scale(&self, factor: &Rational) -> Row {
        Row {
            coeffs: self.coeffs.iter().map(|a| a * factor).collect(),
            rhs: &self.rhs * factor,
        }
    }

    /// Positive rescaling with integer, coprime coefficients. For a row with
    /// all-zero coefficients the rhs is reduced to its sign (-1, 0 or 1).
    pub fn normalized(&self) -> Row {
        if self.is_trivial() {
            let rhs = if self.rhs.is_zero() {
                Rational::zero()
            } else {
                self.rhs.signum()
            };
            return Row { coeffs: self.coeffs.iter().map(|_| Rational::zero()).collect(), rhs };
        }
        let l = denominator_lcm(&self.coeffs);
        let scaled: Vec<Rational> = self.coeffs.iter().map(|c| c * int_rat(&l)).collect();
        let prim = primitive_integer_vector(&scaled);
        let first = self
            .coeffs
            .iter()
            .zip(&prim)
            .find(|(c, _)| !c.is_zero())
            .map(|(c, p)| int_rat(p) / c)
            .expect("nonzero row");
        Row {
            coeffs: prim.iter().map(int_rat).collect(),
            rhs: &self.rhs * first,
        }
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", RationalVector(self.coeffs.clone()), self.rhs)
    }
}

/// Linear inequality system `A p <= b` over `R^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalitySystem {
    pub dim: usize,
    pub rows: Vec<Row>,
}

impl InequalitySystem {
    pub fn new(dim: usize) -> Self {
        InequalitySystem { dim, rows: Vec::new() }
    }

    pub fn from_rows(dim: usize, rows: Vec<Row>) -> Result<Self> {
        for r in &rows {
            if r.coeffs.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: r.coeffs.len() });
            }
        }
        Ok(InequalitySystem { dim, rows })
    }

    pub fn push(&mut self, row: Row) {
        debug_assert_eq!(row.coeffs.len(), self.dim);
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn satisfied_by(&self, p: &[Rational]) -> bool {
        self.rows.iter().all(|r| r.satisfied_by(p))
    }

    /// Add the box `lo <= p <= hi` as explicit rows.
    pub fn with_box(&self, lo: &[BigInt], hi: &[BigInt]) -> InequalitySystem {
        let mut out = self.clone();
        for j in 0..self.dim {
            let mut up = vec![Rational::zero(); self.dim];
            up[j] = Rational::from_integer(1.into());
            out.push(Row::new(up.clone(), int_rat(&hi[j])));
            up[j] = Rational::from_integer((-1).into());
            out.push(Row::new(up, -int_rat(&lo[j])));
        }
        out
    }

    /// Normalize every row, drop satisfied constant rows, and keep only the
    /// tightest rhs among rows sharing a coefficient vector. A violated
    /// constant row (`0 <= negative`) is kept as the single row of the result.
    pub fn normalized(&self) -> InequalitySystem {
        let mut best: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
        for row in &self.rows {
            let n = row.normalized();
            if n.is_trivial() {
                if n.rhs.is_negative() {
                    return InequalitySystem { dim: self.dim, rows: vec![n] };
                }
                continue;
            }
            best.entry(n.coeffs)
                .and_modify(|r| {
                    if n.rhs < *r {
                        *r = n.rhs.clone();
                    }
                })
                .or_insert(n.rhs);
        }
        InequalitySystem {
            dim: self.dim,
            rows: best.into_iter().map(|(c, r)| Row::new(c, r)).collect(),
        }
    }

    /// True when the system contains an explicit contradiction `0 <= negative`.
    pub fn has_contradiction(&self) -> bool {
        self.rows.iter().any(|r| r.is_trivial() && r.rhs.is_negative())
    }
}

impl fmt::Display for InequalitySystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::{rat, ratio};

    #[test]
    fn normalization_is_positive_scaling() {
        let r = Row::new(vec![ratio(1, 2), ratio(-3, 2)], ratio(5, 4));
        let n = r.normalized();
        assert_eq!(n.coeffs, vec![rat(1), rat(-3)]);
        assert_eq!(n.rhs, ratio(5, 2));
        let c = Row::new(vec![rat(0), rat(0)], rat(-7)).normalized();
        assert_eq!(c.rhs, rat(-1));
    }

    #[test]
    fn dominated_rows_collapse() {
        let sys = InequalitySystem::from_rows(
            2,
            vec![
                Row::from_ints(&[2, 2], 4),
                Row::from_ints(&[1, 1], 1),
                Row::from_ints(&[0, 0], 3),
            ],
        )
        .unwrap();
        let n = sys.normalized();
        assert_eq!(n.rows, vec![Row::from_ints(&[1, 1], 1)]);
    }

    #[test]
    fn dimension_checked() {
        let err = InequalitySystem::from_rows(2, vec![Row::from_ints(&[1], 0)]);
        assert!(err.is_err());
    }
}
