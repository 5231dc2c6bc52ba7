//! Rational plane curves through `3d - 1` general points, and the point-condition
//! count for classes on a blown-up plane.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{anticanonical_half_degree, DivisorClass, LatticeError};
use crate::scalar::{checked_add, checked_mul, checked_sub, LatticeInt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("degree must be positive, got {0}")]
    Domain(i64),
    #[error("arithmetic overflow at degree {0}")]
    Overflow(i64),
}

/// `N_1, ..., N_max` for plane rational curves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable<T> {
    entries: Vec<T>,
}

impl<T: LatticeInt> CountTable<T> {
    pub fn max_degree(&self) -> i64 {
        self.entries.len() as i64
    }

    pub fn get(&self, delta: i64) -> Option<&T> {
        usize::try_from(delta - 1)
            .ok()
            .and_then(|i| self.entries.get(i))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &T)> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, n)| (i as i64 + 1, n))
    }
}

/// Serialises as `{"1": "1", "2": "1", "3": "12", ...}`; counts are strings so
/// that they survive JSON readers with 64-bit numbers.
impl<T: LatticeInt> Serialize for CountTable<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (d, n) in self.iter() {
            map.serialize_entry(&d.to_string(), &n.to_string())?;
        }
        map.end()
    }
}

/// `delta1^2 delta2 (delta2 C(3d-4, 3delta1-2) - delta1 C(3d-4, 3delta1-1))`.
fn weight<T: LatticeInt>(delta: i64, d1: i64, binom: impl Fn(i64, i64) -> Option<T>) -> Option<T> {
    let d2 = delta - d1;
    let n = 3 * delta - 4;
    let left = checked_mul(&T::from_small(d2), &binom(n, 3 * d1 - 2)?)?;
    let right = checked_mul(&T::from_small(d1), &binom(n, 3 * d1 - 1)?)?;
    let bracket = checked_sub(&left, &right)?;
    checked_mul(&T::from_small(d1 * d1 * d2), &bracket)
}

fn binomial<T: LatticeInt>(n: i64, k: i64) -> Option<T> {
    if k < 0 || k > n {
        return Some(T::from_small(0));
    }
    let k = k.min(n - k);
    let mut acc = T::from_small(1);
    for i in 0..k {
        // exact at every step: acc = C(n, i) * (n - i) / (i + 1) = C(n, i + 1)
        acc = checked_mul(&acc, &T::from_small(n - i))? / T::from_small(i + 1);
    }
    Some(acc)
}

/// `N_delta` by memoised recursion on the degree.
pub fn kontsevich_count<T: LatticeInt>(delta: i64) -> Result<T, CountError> {
    if delta <= 0 {
        return Err(CountError::Domain(delta));
    }
    let mut memo = BTreeMap::new();
    count_memo(delta, &mut memo)
}

fn count_memo<T: LatticeInt>(delta: i64, memo: &mut BTreeMap<i64, T>) -> Result<T, CountError> {
    if delta == 1 {
        return Ok(T::from_small(1));
    }
    if let Some(n) = memo.get(&delta) {
        return Ok(n.clone());
    }
    let overflow = || CountError::Overflow(delta);
    let mut total = T::from_small(0);
    for d1 in 1..delta {
        let n1 = count_memo::<T>(d1, memo)?;
        let n2 = count_memo::<T>(delta - d1, memo)?;
        let w = weight(delta, d1, binomial::<T>).ok_or_else(overflow)?;
        let term =
            checked_mul(&checked_mul(&n1, &n2).ok_or_else(overflow)?, &w).ok_or_else(overflow)?;
        total = checked_add(&total, &term).ok_or_else(overflow)?;
    }
    memo.insert(delta, total.clone());
    Ok(total)
}

/// `N_1, ..., N_max` filled bottom-up, with binomials read from a Pascal
/// triangle rather than the multiplicative formula.
pub fn kontsevich_table<T: LatticeInt>(max_degree: i64) -> Result<CountTable<T>, CountError> {
    if max_degree <= 0 {
        return Err(CountError::Domain(max_degree));
    }
    let rows = (3 * max_degree - 3).max(1) as usize;
    let mut pascal: Vec<Vec<T>> = Vec::with_capacity(rows);
    for n in 0..rows {
        let mut row = vec![T::from_small(1); n + 1];
        for k in 1..n {
            row[k] = checked_add(&pascal[n - 1][k - 1], &pascal[n - 1][k])
                .ok_or(CountError::Overflow(max_degree))?;
        }
        pascal.push(row);
    }
    let lookup = |n: i64, k: i64| -> Option<T> {
        if k < 0 || k > n {
            Some(T::from_small(0))
        } else {
            Some(pascal[n as usize][k as usize].clone())
        }
    };

    let mut entries: Vec<T> = vec![T::from_small(1)];
    for delta in 2..=max_degree {
        let overflow = || CountError::Overflow(delta);
        let mut total = T::from_small(0);
        for d2 in 1..delta {
            let d1 = delta - d2;
            let w = weight(delta, d1, lookup).ok_or_else(overflow)?;
            let product = checked_mul(&entries[(d1 - 1) as usize], &entries[(d2 - 1) as usize])
                .ok_or_else(overflow)?;
            let term = checked_mul(&w, &product).ok_or_else(overflow)?;
            total = checked_add(&total, &term).ok_or_else(overflow)?;
        }
        entries.push(total);
    }
    Ok(CountTable { entries })
}

/// `3a - sum b_i - 1`: point conditions imposed on curves in the class `x`.
/// Negative values (the zero class gives -1) mean no effective condition count.
pub fn generalized_point_condition<T: LatticeInt>(x: &DivisorClass<T>) -> Result<T, LatticeError> {
    let half = anticanonical_half_degree(x)?;
    checked_sub(&half, &T::from_small(1)).ok_or(LatticeError::Overflow)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_neg_one;
    use crate::lattice::{branch_class, pair, DelPezzoContext};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    const N: [&str; 10] = [
        "1",
        "1",
        "12",
        "620",
        "87304",
        "26312976",
        "14616808192",
        "13525751027392",
        "19385778269260800",
        "40739017561997799680",
    ];

    #[test]
    fn small_degrees() {
        assert_eq!(kontsevich_count::<i64>(1), Ok(1));
        assert_eq!(kontsevich_count::<i64>(2), Ok(1));
        assert_eq!(kontsevich_count::<i64>(3), Ok(12));
        assert_eq!(kontsevich_count::<i64>(4), Ok(620));
    }

    #[test]
    fn big_values_through_degree_ten() {
        for (i, expected) in N.iter().enumerate() {
            let d = i as i64 + 1;
            let n: BigInt = kontsevich_count(d).unwrap();
            assert_eq!(n.to_string(), *expected, "degree {d}");
        }
        let table = kontsevich_table::<BigInt>(10).unwrap();
        let got: Vec<String> = table.iter().map(|(_, n)| n.to_string()).collect();
        assert_eq!(got, N);
    }

    #[test]
    fn word_sized_counts_overflow_at_degree_ten() {
        assert_eq!(kontsevich_count::<i64>(9).unwrap().to_string(), N[8]);
        assert_eq!(kontsevich_count::<i64>(10), Err(CountError::Overflow(10)));
        assert!(matches!(
            kontsevich_table::<i64>(10),
            Err(CountError::Overflow(10))
        ));
        assert_eq!(kontsevich_count::<i128>(10).unwrap().to_string(), N[9]);
    }

    #[test]
    fn domain_errors() {
        assert_eq!(kontsevich_count::<i64>(0), Err(CountError::Domain(0)));
        assert_eq!(kontsevich_count::<i64>(-3), Err(CountError::Domain(-3)));
        assert!(kontsevich_table::<i64>(0).is_err());
    }

    #[test]
    fn routes_agree_and_grow() {
        let table = kontsevich_table::<BigInt>(12).unwrap();
        for (d, n) in table.iter() {
            assert_eq!(*n, kontsevich_count::<BigInt>(d).unwrap());
            assert!(*n > BigInt::from(0));
        }
        for d in 2..12 {
            assert!(table.get(d) <= table.get(d + 1));
        }
        assert_eq!(table.get(0), None);
        assert_eq!(table.get(13), None);
    }

    #[test]
    fn table_json_uses_strings() {
        let table = kontsevich_table::<BigInt>(3).unwrap();
        assert_eq!(
            serde_json::to_string(&table).unwrap(),
            r#"{"1":"1","2":"1","3":"12"}"#
        );
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial::<i64>(5, 2), Some(10));
        assert_eq!(binomial::<i64>(5, 6), Some(0));
        assert_eq!(binomial::<i64>(5, -1), Some(0));
        assert_eq!(binomial::<i64>(23, 11), Some(1352078));
    }

    #[test]
    fn point_conditions() {
        let cubic = DivisorClass::<i64>::from_ints(3, &[0; 8]);
        assert_eq!(generalized_point_condition(&cubic), Ok(8));
        let zero = DivisorClass::<i64>::from_ints(0, &[0; 3]);
        assert_eq!(generalized_point_condition(&zero), Ok(-1));
        for ctx in DelPezzoContext::all() {
            for c in enumerate_neg_one::<i64>(ctx) {
                assert_eq!(generalized_point_condition(c.class()), Ok(0));
            }
        }
    }

    proptest! {
        #[test]
        fn condition_matches_branch_pairing(a in -20i64..20, b in prop::collection::vec(-20i64..20, 0..=8)) {
            let ctx = DelPezzoContext::with_points(b.len()).unwrap();
            let x = DivisorClass::<i64>::from_ints(a, &b);
            let lhs = generalized_point_condition(&x).unwrap() + 1;
            let rhs = pair(&x, &branch_class(ctx)).unwrap();
            prop_assert_eq!(2 * lhs, rhs);
        }
    }
}
