//! Picard lattice of a del Pezzo surface.
//!
//! A degree `d` surface (for `d <= 8`) is the plane blown up at `r = 9 - d` points.
//! Its Picard group is free on `H, E1, .., Er` with intersection form
//! `diag(1, -1, .., -1)`. A class is stored as `(a; b1, .., br)` and denotes
//! `aH - b1*E1 - .. - br*Er`, so an exceptional curve is `(0; .., -1, ..)`, a line
//! through two points is `(1; 1, 1, 0, ..)` and the canonical class is
//! `(-3; -1, .., -1)`.

use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::ser::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::{checked_add, checked_mul, checked_sub, LatticeInt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("del Pezzo degree must lie in 1..=9, got {0}")]
    InvalidDegree(i64),
    #[error(
        "dimension mismatch: class with {left} points paired against class with {right} points"
    )]
    DimensionMismatch { left: usize, right: usize },
    #[error("point index {index} out of range 1..={points}")]
    IndexOutOfRange { index: usize, points: usize },
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("cannot parse divisor class: {0}")]
    Parse(String),
}

/// Degree bookkeeping for a del Pezzo surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DelPezzoContext {
    degree: u32,
}

impl DelPezzoContext {
    pub fn new(degree: i64) -> Result<Self, LatticeError> {
        if (1..=9).contains(&degree) {
            Ok(Self {
                degree: degree as u32,
            })
        } else {
            Err(LatticeError::InvalidDegree(degree))
        }
    }

    /// Context with `points` blown-up points (`0..=8`).
    pub fn with_points(points: usize) -> Result<Self, LatticeError> {
        if points > 8 {
            return Err(LatticeError::InvalidDegree(9 - points as i64));
        }
        Self::new(9 - points as i64)
    }

    /// All contexts, from degree 9 down to degree 1.
    pub fn all() -> impl Iterator<Item = Self> {
        (1..=9).rev().map(|d| Self { degree: d })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Number of blown-up points, `9 - degree`.
    pub fn points(&self) -> usize {
        9 - self.degree as usize
    }
}

/// Integer class `aH - sum(b_i E_i)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DivisorClass<T> {
    a: T,
    b: Vec<T>,
}

impl<T: LatticeInt> DivisorClass<T> {
    pub fn new(a: T, b: Vec<T>) -> Self {
        Self { a, b }
    }

    pub fn from_ints(a: i64, b: &[i64]) -> Self {
        Self {
            a: T::from_small(a),
            b: b.iter().map(|&v| T::from_small(v)).collect(),
        }
    }

    pub fn zero(ctx: DelPezzoContext) -> Self {
        Self {
            a: T::zero(),
            b: vec![T::zero(); ctx.points()],
        }
    }

    /// Pull-back of the hyperplane class, `(1; 0, .., 0)`.
    pub fn hyperplane(ctx: DelPezzoContext) -> Self {
        Self {
            a: T::one(),
            b: vec![T::zero(); ctx.points()],
        }
    }

    /// Exceptional curve over the `index`-th point (1-based).
    pub fn exceptional(ctx: DelPezzoContext, index: usize) -> Result<Self, LatticeError> {
        let points = ctx.points();
        if index == 0 || index > points {
            return Err(LatticeError::IndexOutOfRange { index, points });
        }
        let mut class = Self::zero(ctx);
        class.b[index - 1] = -T::one();
        Ok(class)
    }

    /// Coefficient of `H`.
    pub fn a(&self) -> &T {
        &self.a
    }

    /// Multiplicities at the blown-up points.
    pub fn b(&self) -> &[T] {
        &self.b
    }

    pub fn points(&self) -> usize {
        self.b.len()
    }

    pub fn fits(&self, ctx: DelPezzoContext) -> bool {
        self.points() == ctx.points()
    }

    fn zip_with(
        &self,
        other: &Self,
        op: impl Fn(&T, &T) -> Option<T>,
    ) -> Result<Self, LatticeError> {
        check_dims(self, other)?;
        let a = op(&self.a, &other.a).ok_or(LatticeError::Overflow)?;
        let b = self
            .b
            .iter()
            .zip(&other.b)
            .map(|(x, y)| op(x, y).ok_or(LatticeError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Self { a, b })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, LatticeError> {
        self.zip_with(other, checked_add)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, LatticeError> {
        self.zip_with(other, checked_sub)
    }

    pub fn checked_scale(&self, k: &T) -> Result<Self, LatticeError> {
        let a = checked_mul(&self.a, k).ok_or(LatticeError::Overflow)?;
        let b = self
            .b
            .iter()
            .map(|x| checked_mul(x, k).ok_or(LatticeError::Overflow))
            .collect::<Result<_, _>>()?;
        Ok(Self { a, b })
    }

    pub fn checked_neg(&self) -> Result<Self, LatticeError> {
        self.checked_scale(&-T::one())
    }

    /// Flat coefficient vector `[a, b1, .., br]`.
    pub fn to_vec(&self) -> Vec<T> {
        std::iter::once(self.a.clone())
            .chain(self.b.iter().cloned())
            .collect()
    }

    /// Converts to another coefficient type; `None` if a coefficient does not fit.
    pub fn convert<U: LatticeInt>(&self) -> Option<DivisorClass<U>> {
        let conv = |v: &T| v.to_i128().and_then(U::from_i128);
        Some(DivisorClass {
            a: conv(&self.a)?,
            b: self.b.iter().map(conv).collect::<Option<_>>()?,
        })
    }
}

fn check_dims<T>(x: &DivisorClass<T>, y: &DivisorClass<T>) -> Result<(), LatticeError> {
    if x.b.len() != y.b.len() {
        return Err(LatticeError::DimensionMismatch {
            left: x.b.len(),
            right: y.b.len(),
        });
    }
    Ok(())
}

/// Intersection number `a*a' - sum(b_i * b_i')`.
pub fn pair<T: LatticeInt>(x: &DivisorClass<T>, y: &DivisorClass<T>) -> Result<T, LatticeError> {
    check_dims(x, y)?;
    let mut acc = checked_mul(&x.a, &y.a).ok_or(LatticeError::Overflow)?;
    for (u, v) in x.b.iter().zip(&y.b) {
        let term = checked_mul(u, v).ok_or(LatticeError::Overflow)?;
        acc = checked_sub(&acc, &term).ok_or(LatticeError::Overflow)?;
    }
    Ok(acc)
}

/// Canonical class `K = -3H + sum(E_i)`, stored as `(-3; -1, .., -1)`.
pub fn canonical_class<T: LatticeInt>(ctx: DelPezzoContext) -> DivisorClass<T> {
    DivisorClass {
        a: T::from_small(-3),
        b: vec![-T::one(); ctx.points()],
    }
}

/// Class of the branch curve of the K3 double cover, `-2K = (6; 2, .., 2)`.
pub fn branch_class<T: LatticeInt>(ctx: DelPezzoContext) -> DivisorClass<T> {
    DivisorClass {
        a: T::from_small(6),
        b: vec![T::from_small(2); ctx.points()],
    }
}

/// `3a - sum(b_i)`, which is half of the pairing with `-2K`.
pub fn anticanonical_half_degree<T: LatticeInt>(x: &DivisorClass<T>) -> Result<T, LatticeError> {
    let mut acc = checked_mul(&T::from_small(3), &x.a).ok_or(LatticeError::Overflow)?;
    for v in &x.b {
        acc = checked_sub(&acc, v).ok_or(LatticeError::Overflow)?;
    }
    Ok(acc)
}

/// Pairing with the canonical class, `-3a + sum(b_i)`.
pub fn canonical_degree<T: LatticeInt>(x: &DivisorClass<T>) -> Result<T, LatticeError> {
    Ok(-anticanonical_half_degree(x)?)
}

/// `x^2 = -1` and `x.K = -1`.
pub fn is_neg_one_class<T: LatticeInt>(x: &DivisorClass<T>) -> Result<bool, LatticeError> {
    let minus_one = -T::one();
    Ok(pair(x, x)? == minus_one && canonical_degree(x)? == minus_one)
}

/// `x^2 = -2` and `x.K = 0`.
pub fn is_root<T: LatticeInt>(x: &DivisorClass<T>) -> Result<bool, LatticeError> {
    Ok(pair(x, x)? == T::from_small(-2) && canonical_degree(x)?.is_zero())
}

/// Gram matrix of the pairing on the basis `H, E1, .., Er`.
pub fn gram_matrix<T: LatticeInt>(ctx: DelPezzoContext) -> Vec<Vec<T>> {
    let n = ctx.points() + 1;
    let basis: Vec<DivisorClass<T>> = (0..n)
        .map(|k| {
            let mut v = vec![0i64; n];
            v[k] = 1;
            DivisorClass::from_ints(v[0], &v[1..])
        })
        .collect();
    basis
        .iter()
        .map(|x| {
            basis
                .iter()
                .map(|y| pair(x, y).expect("basis vectors share a context"))
                .collect()
        })
        .collect()
}

/// Reflection `x + (x.rho) rho` in a root `rho` (a class with `rho^2 = -2`).
pub fn reflect<T: LatticeInt>(
    x: &DivisorClass<T>,
    root: &DivisorClass<T>,
) -> Result<DivisorClass<T>, LatticeError> {
    let k = pair(x, root)?;
    x.checked_add(&root.checked_scale(&k)?)
}

/// Simple roots `E1-E2, .., E(r-1)-Er` and `H-E1-E2-E3` (when `r >= 3`).
pub fn simple_roots<T: LatticeInt>(ctx: DelPezzoContext) -> Vec<DivisorClass<T>> {
    let r = ctx.points();
    let mut out = Vec::new();
    for i in 0..r.saturating_sub(1) {
        // E_i - E_{i+1} is (0; .., -1, 1, ..) in the multiplicity convention
        let mut b = vec![0i64; r];
        b[i] = -1;
        b[i + 1] = 1;
        out.push(DivisorClass::from_ints(0, &b));
    }
    if r >= 3 {
        let mut b = vec![0i64; r];
        b[..3].fill(1);
        out.push(DivisorClass::from_ints(1, &b));
    }
    out
}

/// Every root of the lattice `K^perp`, in lexicographic order.
///
/// From `sum(b) = 3a` and `sum(b^2) = a^2 + 2`, Cauchy-Schwarz gives
/// `(9 - r) a^2 <= 2r`, and each `|b_i| <= sqrt(a^2 + 2)`.
pub fn roots<T: LatticeInt>(ctx: DelPezzoContext) -> Vec<DivisorClass<T>> {
    let r = ctx.points() as i64;
    let mut out = Vec::new();
    if r == 0 {
        return out;
    }
    let a_max = isqrt(2 * r / (9 - r));
    for a in -a_max..=a_max {
        let square_sum = a * a + 2;
        let m = isqrt(square_sum);
        let mut b = Vec::with_capacity(r as usize);
        fill_vectors(r as usize, -m, m, 3 * a, square_sum, &mut b, &mut |b| {
            out.push(DivisorClass::from_ints(a, b));
        });
    }
    out.sort();
    out
}

pub(crate) fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Depth-first search over integer vectors of length `len` with entries in
/// `[lo, hi]`, fixed sum and fixed sum of squares. Visits in lexicographic order.
pub(crate) fn fill_vectors(
    len: usize,
    lo: i64,
    hi: i64,
    sum: i64,
    square_sum: i64,
    prefix: &mut Vec<i64>,
    visit: &mut dyn FnMut(&[i64]),
) {
    let remaining = len - prefix.len();
    if remaining == 0 {
        if sum == 0 && square_sum == 0 {
            visit(prefix);
        }
        return;
    }
    let rem = remaining as i64;
    // feasibility: sum within box, squares non-negative, Cauchy-Schwarz
    if square_sum < 0 || sum < lo * rem || sum > hi * rem || sum * sum > rem * square_sum {
        return;
    }
    for v in lo..=hi {
        prefix.push(v);
        fill_vectors(len, lo, hi, sum - v, square_sum - v * v, prefix, visit);
        prefix.pop();
    }
}

impl<T: LatticeInt> fmt::Display for DivisorClass<T> {
    /// `aH - b1*E1 - .. - br*Er`, every term written out.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}H", self.a)?;
        for (i, v) in self.b.iter().enumerate() {
            write!(f, " - {}*E{}", v, i + 1)?;
        }
        Ok(())
    }
}

impl<T: LatticeInt> FromStr for DivisorClass<T> {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LatticeError::Parse(s.to_string());
        let parse_int = |t: &str| -> Result<T, LatticeError> {
            let v: i64 = t.trim().parse().map_err(|_| bad())?;
            Ok(T::from_small(v))
        };
        let mut parts = s.split(" - ");
        let head = parts.next().ok_or_else(bad)?.trim();
        let a = parse_int(head.strip_suffix('H').ok_or_else(bad)?)?;
        let mut b = Vec::new();
        for (i, part) in parts.enumerate() {
            let (coef, label) = part.split_once('*').ok_or_else(bad)?;
            if label.trim() != format!("E{}", i + 1) {
                return Err(bad());
            }
            b.push(parse_int(coef)?);
        }
        Ok(Self { a, b })
    }
}

impl<T: LatticeInt> Serialize for DivisorClass<T> {
    /// JSON integer array `[a, b1, .., br]`.
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let flat = self
            .to_vec()
            .iter()
            .map(|v| {
                v.to_i64()
                    .ok_or_else(|| S::Error::custom("coefficient does not fit in i64"))
            })
            .collect::<Result<Vec<i64>, _>>()?;
        flat.serialize(serializer)
    }
}

impl<'de, T: LatticeInt> Deserialize<'de> for DivisorClass<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let flat = Vec::<i64>::deserialize(deserializer)?;
        let (a, b) = flat
            .split_first()
            .ok_or_else(|| D::Error::custom("empty divisor class"))?;
        if b.len() > 8 {
            return Err(D::Error::custom("at most 8 blown-up points"));
        }
        Ok(Self::from_ints(*a, b))
    }
}
