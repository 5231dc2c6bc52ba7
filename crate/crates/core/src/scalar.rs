//! Scalar abstractions shared by the lattice and plane-function code.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, FromPrimitive, Num, Signed, ToPrimitive};

/// Integer coefficient type for lattice vectors.
///
/// All arithmetic inside the crate goes through the `Checked*` methods, so a
/// fixed-width type reports overflow as an error and never wraps.
pub trait LatticeInt:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + Signed
    + CheckedAdd
    + CheckedSub
    + CheckedMul
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
    fn from_small(v: i64) -> Self {
        Self::from_i64(v).expect("every lattice integer type holds an i64")
    }
}

impl LatticeInt for i64 {}
impl LatticeInt for i128 {}
impl LatticeInt for BigInt {}

/// Exact field used for plane coordinates and span computations.
///
/// Floating point types are deliberately not implementors: proportionality and
/// concurrency tests need exact zero tests.
pub trait ExactField:
    Clone + Ord + Hash + Debug + Display + Num + Signed + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self;

    /// Integer power; negative exponents invert. Panics on `0^e` with `e < 0`.
    fn powi(&self, exp: i64) -> Self {
        let mut base = if exp < 0 {
            assert!(!self.is_zero(), "zero raised to a negative power");
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl ExactField for Ratio<i64> {
    fn from_int(v: i64) -> Self {
        Ratio::from_integer(v)
    }
}

impl ExactField for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
}

pub(crate) fn checked_add<T: LatticeInt>(x: &T, y: &T) -> Option<T> {
    x.checked_add(y)
}

pub(crate) fn checked_sub<T: LatticeInt>(x: &T, y: &T) -> Option<T> {
    x.checked_sub(y)
}

pub(crate) fn checked_mul<T: LatticeInt>(x: &T, y: &T) -> Option<T> {
    x.checked_mul(y)
}
