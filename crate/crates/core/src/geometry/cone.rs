//! Double description of polyhedral cones `{y : a_i . y >= 0}`.
//!
//! The cone is grown one constraint at a time starting from the whole space,
//! tracking a lineality basis alongside the extreme rays. Adjacency of ray
//! pairs uses the combinatorial test on tight-constraint sets.

use num_traits::{Signed, Zero};

use super::rational::{dot, int_rat, primitive_integer_vector, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn with_capacity(bits: usize) -> Self {
        BitSet { words: vec![0; bits.div_ceil(64)] }
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Generators of a polyhedral cone: every element is a lineality combination
/// plus a nonnegative combination of rays. All vectors are primitive integer
/// vectors stored as rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeGenerators {
    pub lineality: Vec<Vec<Rational>>,
    pub rays: Vec<Vec<Rational>>,
}

fn primitive(v: &[Rational]) -> Vec<Rational> {
    primitive_integer_vector(v).iter().map(int_rat).collect()
}

struct Ray {
    v: Vec<Rational>,
    zeros: BitSet,
}

/// Extreme rays and lineality of `{y in R^dim : c . y >= 0 for every c in constraints}`.
pub fn cone_generators(constraints: &[Vec<Rational>], dim: usize) -> ConeGenerators {
    let m = constraints.len();
    let mut lineality: Vec<Vec<Rational>> = (0..dim)
        .map(|i| (0..dim).map(|j| Rational::from_integer(i64::from(i == j).into())).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (k, a) in constraints.iter().enumerate() {
        let lvals: Vec<Rational> = lineality.iter().map(|l| dot(a, l)).collect();
        if let Some(pos) = lvals.iter().position(|v| !v.is_zero()) {
            let mut l0 = lineality.remove(pos);
            let mut a0 = lvals[pos].clone();
            if a0.is_negative() {
                l0.iter_mut().for_each(|x| *x = -x.clone());
                a0 = -a0;
            }
            let project = |v: &[Rational], av: &Rational| -> Vec<Rational> {
                let f = av / &a0;
                v.iter().zip(&l0).map(|(x, y)| x - &f * y).collect()
            };
            let mut rest_vals = lvals;
            rest_vals.remove(pos);
            lineality = lineality
                .iter()
                .zip(&rest_vals)
                .map(|(l, av)| if av.is_zero() { l.clone() } else { primitive(&project(l, av)) })
                .collect();
            for r in rays.iter_mut() {
                let av = dot(a, &r.v);
                if !av.is_zero() {
                    r.v = primitive(&project(&r.v, &av));
                }
                r.zeros.insert(k);
            }
            let mut zeros = BitSet::with_capacity(m);
            for j in 0..k {
                zeros.insert(j);
            }
            rays.push(Ray { v: primitive(&l0), zeros });
            continue;
        }

        let vals: Vec<Rational> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let plus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let minus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if minus.is_empty() {
            for (i, r) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    r.zeros.insert(k);
                }
            }
            continue;
        }
        let pointed_dim = dim - lineality.len();
        let mut new_rays = Vec::new();
        for &p in &plus {
            for &q in &minus {
                let common = rays[p].zeros.intersection(&rays[q].zeros);
                if pointed_dim >= 2 && common.len() + 2 < pointed_dim {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, r)| i == p || i == q || !common.is_subset(&r.zeros));
                if !adjacent {
                    continue;
                }
                let v: Vec<Rational> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(x, y)| &vals[p] * x - &vals[q] * y)
                    .collect();
                let mut zeros = common;
                zeros.insert(k);
                new_rays.push(Ray { v: primitive(&v), zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + new_rays.len());
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_negative() {
                continue;
            }
            if vals[i].is_zero() {
                r.zeros.insert(k);
            } else {
                r.zeros.remove(k);
            }
            kept.push(r);
        }
        kept.extend(new_rays);
        rays = kept;
    }

    ConeGenerators {
        lineality,
        rays: rays.into_iter().map(|r| r.v).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rational::rat;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn nonnegative_orthant() {
        let g = cone_generators(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])], 3);
        assert!(g.lineality.is_empty());
        let mut rays = g.rays.clone();
        rays.sort();
        assert_eq!(rays, vec![v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]);
    }

    #[test]
    fn half_space_keeps_lineality() {
        let g = cone_generators(&[v(&[1, 1])], 2);
        assert_eq!(g.lineality.len(), 1);
        assert_eq!(g.rays.len(), 1);
        assert!(dot(&v(&[1, 1]), &g.lineality[0]).is_zero());
        assert!(dot(&v(&[1, 1]), &g.rays[0]).is_positive());
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // Cone over the square [-1,1]^2 at height 1: t +- x >= 0, t +- y >= 0.
        let cons = vec![v(&[1, 1, 0]), v(&[1, -1, 0]), v(&[1, 0, 1]), v(&[1, 0, -1])];
        let g = cone_generators(&cons, 3);
        assert!(g.lineality.is_empty());
        let mut rays = g.rays.clone();
        rays.sort();
        assert_eq!(
            rays,
            vec![v(&[1, -1, -1]), v(&[1, -1, 1]), v(&[1, 1, -1]), v(&[1, 1, 1])]
        );
    }
}
