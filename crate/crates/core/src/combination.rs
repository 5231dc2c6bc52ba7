//! Finite formal integer combinations of labelled objects.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::ExactField;

/// `sum(c_k * k)` with integer coefficients; zero coefficients are never stored,
/// so structural equality is equality of combinations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound(
    serialize = "K: Ord + Serialize",
    deserialize = "K: Ord + Deserialize<'de>"
))]
pub struct Combination<K> {
    terms: BTreeMap<K, i64>,
}

impl<K: Ord> Default for Combination<K> {
    fn default() -> Self {
        Self {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> Combination<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K, coefficient: i64) -> Self {
        let mut c = Self::zero();
        c.add_term(key, coefficient);
        c
    }

    pub fn add_term(&mut self, key: K, coefficient: i64) {
        let entry = self.terms.entry(key.clone()).or_insert(0);
        *entry += coefficient;
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn coefficient(&self, key: &K) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, i64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn scale(&self, k: i64) -> Self {
        self.iter().map(|(key, v)| (key.clone(), v * k)).collect()
    }

    /// Applies a relabelling to every key, merging collisions.
    pub fn map_keys<L: Ord + Clone>(&self, f: impl Fn(&K) -> L) -> Combination<L> {
        self.iter().map(|(k, v)| (f(k), v)).collect()
    }
}

impl<K: Ord + Clone> FromIterator<(K, i64)> for Combination<K> {
    fn from_iter<I: IntoIterator<Item = (K, i64)>>(iter: I) -> Self {
        let mut c = Self::zero();
        for (k, v) in iter {
            c.add_term(k, v);
        }
        c
    }
}

impl<K: Ord + Clone> Add for &Combination<K> {
    type Output = Combination<K>;

    fn add(self, rhs: Self) -> Combination<K> {
        self.iter()
            .chain(rhs.iter())
            .map(|(k, v)| (k.clone(), v))
            .collect()
    }
}

impl<K: Ord + Clone> Sub for &Combination<K> {
    type Output = Combination<K>;

    fn sub(self, rhs: Self) -> Combination<K> {
        self + &(-rhs)
    }
}

impl<K: Ord + Clone> Neg for &Combination<K> {
    type Output = Combination<K>;

    fn neg(self) -> Combination<K> {
        self.scale(-1)
    }
}

impl<K: Ord + Clone + fmt::Display> fmt::Display for Combination<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, v)) in self.iter().enumerate() {
            let sign = if v < 0 { "-" } else { "+" };
            let mag = v.unsigned_abs();
            match (i, mag) {
                (0, 1) if v > 0 => write!(f, "{k}")?,
                (0, _) if v > 0 => write!(f, "{mag}{k}")?,
                (0, 1) => write!(f, "-{k}")?,
                (0, _) => write!(f, "-{mag}{k}")?,
                (_, 1) => write!(f, " {sign} {k}")?,
                _ => write!(f, " {sign} {mag}{k}")?,
            }
        }
        Ok(())
    }
}

/// Whether `target` lies in the span over `F` of `generators`, by exact row
/// reduction.
pub fn span_contains<F: ExactField, K: Ord + Clone>(
    generators: &[Combination<K>],
    target: &Combination<K>,
) -> bool {
    let mut keys: Vec<K> = generators
        .iter()
        .chain(std::iter::once(target))
        .flat_map(|c| c.iter().map(|(k, _)| k.clone()))
        .collect();
    keys.sort();
    keys.dedup();
    let row = |c: &Combination<K>| -> Vec<F> {
        keys.iter().map(|k| F::from_int(c.coefficient(k))).collect()
    };
    let base: Vec<Vec<F>> = generators.iter().map(row).collect();
    let mut extended = base.clone();
    extended.push(row(target));
    rank(base) == rank(extended)
}

/// Rank of a dense matrix over an exact field.
pub fn rank<F: ExactField>(mut rows: Vec<Vec<F>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone() / pivot.clone();
                let pivot_row = rows[r].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row).skip(c) {
                    *x = x.clone() - factor.clone() * p.clone();
                }
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, SmallRational};

    fn combo(items: &[(&'static str, i64)]) -> Combination<&'static str> {
        items.iter().copied().collect()
    }

    #[test]
    fn zero_coefficients_vanish() {
        let c = combo(&[("x", 1), ("y", 2), ("x", -1)]);
        assert_eq!(c, combo(&[("y", 2)]));
        assert!((&c - &c).is_zero());
    }

    #[test]
    fn display_forms() {
        assert_eq!(combo(&[("T11", 1), ("T12", -1)]).to_string(), "T11 - T12");
        assert_eq!(combo(&[("a", -2), ("b", 3)]).to_string(), "-2a + 3b");
        assert_eq!(Combination::<&str>::zero().to_string(), "0");
    }

    #[test]
    fn span_membership() {
        let gens = vec![combo(&[("x", 1), ("y", 1)]), combo(&[("z", 1)])];
        assert!(span_contains::<Rational, _>(
            &gens,
            &combo(&[("x", 2), ("y", 2), ("z", -5)])
        ));
        assert!(!span_contains::<Rational, _>(
            &gens,
            &combo(&[("x", 1), ("y", -1)])
        ));
        assert!(span_contains::<SmallRational, _>(
            &gens,
            &Combination::zero()
        ));
        assert!(!span_contains::<SmallRational, _>(&[], &combo(&[("w", 1)])));
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = |v: &[i64]| {
            v.iter()
                .map(|&x| SmallRational::from_integer(x))
                .collect::<Vec<_>>()
        };
        assert_eq!(rank(vec![m(&[1, 2]), m(&[2, 4])]), 1);
        assert_eq!(rank(vec![m(&[1, 2]), m(&[0, 4]), m(&[3, 3])]), 2);
        assert_eq!(rank::<SmallRational>(vec![]), 0);
    }
}
