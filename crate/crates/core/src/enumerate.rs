//! Enumeration and classification of (−1)-classes.
//!
//! A class `D = (a; b)` is a (−1)-class when `D^2 = -1` and `D.K = -1`, i.e.
//! `sum(b_i^2) = a^2 + 1` and `sum(b_i) = 3a - 1`. On a del Pezzo surface these
//! are exactly the (−1)-curves. The search runs over `0 <= a <= a_max(r)` where
//! `(3a - 1)^2 <= r (a^2 + 1)`, with `b_i` in `[-1, a]`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::lattice::{
    fill_vectors, is_neg_one_class, reflect, roots, simple_roots, DelPezzoContext, DivisorClass,
    LatticeError,
};
use crate::scalar::{checked_add, checked_mul, LatticeInt};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("{0} is not a (-1)-class")]
    NotNegOneClass(String),
    #[error("(-1)-class {0} matches no known curve type")]
    UnmatchedSignature(String),
    #[error("the image of {0} in the plane is a point")]
    ImageIsPoint(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Tag of a [`CurveType`], without its index data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurveKind {
    Exceptional,
    Line,
    Conic,
    Cubic,
    Quartic,
    Quintic,
    Sextic,
}

impl CurveKind {
    pub const ALL: [CurveKind; 7] = [
        CurveKind::Exceptional,
        CurveKind::Line,
        CurveKind::Conic,
        CurveKind::Cubic,
        CurveKind::Quartic,
        CurveKind::Quintic,
        CurveKind::Sextic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Exceptional => "exceptional",
            CurveKind::Line => "line",
            CurveKind::Conic => "conic",
            CurveKind::Cubic => "cubic",
            CurveKind::Quartic => "quartic",
            CurveKind::Quintic => "quintic",
            CurveKind::Sextic => "sextic",
        }
    }

    /// Degree of the image in the plane (0 for a point).
    pub fn image_degree(self) -> u32 {
        self as u32
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for CurveKind {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// Geometric type of a (−1)-curve: what its image in the plane is. All point
/// indices are 1-based and index sets are sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CurveType {
    /// Exceptional curve over `P_i`.
    Exceptional(usize),
    /// Line through `P_i, P_j`.
    Line(usize, usize),
    /// Conic through five points.
    Conic([usize; 5]),
    /// Cubic with a node at `P_node` through the other points except `omitted`
    /// (empty when `r = 7`).
    Cubic { node: usize, omitted: Vec<usize> },
    /// Quartic with nodes at three points, through all eight.
    Quartic([usize; 3]),
    /// Quintic with double points at six of the eight points.
    Quintic([usize; 6]),
    /// Sextic with a triple point at `P_j` and double points at the other seven.
    Sextic(usize),
}

impl CurveType {
    pub fn kind(&self) -> CurveKind {
        match self {
            CurveType::Exceptional(_) => CurveKind::Exceptional,
            CurveType::Line(..) => CurveKind::Line,
            CurveType::Conic(_) => CurveKind::Conic,
            CurveType::Cubic { .. } => CurveKind::Cubic,
            CurveType::Quartic(_) => CurveKind::Quartic,
            CurveType::Quintic(_) => CurveKind::Quintic,
            CurveType::Sextic(_) => CurveKind::Sextic,
        }
    }

    /// The index data carried by the tag, flattened. For a cubic this is the node
    /// followed by the omitted points.
    pub fn indices(&self) -> Vec<usize> {
        match self {
            CurveType::Exceptional(i) | CurveType::Sextic(i) => vec![*i],
            CurveType::Line(i, j) => vec![*i, *j],
            CurveType::Conic(s) => s.to_vec(),
            CurveType::Cubic { node, omitted } => std::iter::once(*node)
                .chain(omitted.iter().copied())
                .collect(),
            CurveType::Quartic(s) => s.to_vec(),
            CurveType::Quintic(s) => s.to_vec(),
        }
    }

    pub fn is_exceptional(&self) -> bool {
        matches!(self, CurveType::Exceptional(_))
    }
}

fn join(ix: &[usize]) -> String {
    ix.iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for CurveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveType::Exceptional(i) => write!(f, "E({i})"),
            CurveType::Line(i, j) => write!(f, "L({i},{j})"),
            CurveType::Conic(s) => write!(f, "F({})", join(s)),
            CurveType::Cubic { node, omitted } if omitted.is_empty() => write!(f, "C3({node})"),
            CurveType::Cubic { node, omitted } => write!(f, "C3,{}({node})", join(omitted)),
            CurveType::Quartic(s) => write!(f, "Q4({})", join(s)),
            CurveType::Quintic(s) => write!(f, "Q5({})", join(s)),
            CurveType::Sextic(j) => write!(f, "S6({j})"),
        }
    }
}

impl Serialize for CurveType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A class certified as a (−1)-class, with its type and its position in the
/// canonical ordering of its degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NegOneCurve<T: LatticeInt> {
    id: usize,
    class: DivisorClass<T>,
    curve_type: CurveType,
}

/// `{"id", "class", "type", "indices"}`.
impl<T: LatticeInt> Serialize for NegOneCurve<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("NegOneCurve", 4)?;
        s.serialize_field("id", &self.id)?;
        s.serialize_field("class", &self.class)?;
        s.serialize_field("type", &self.curve_type)?;
        s.serialize_field("indices", &self.curve_type.indices())?;
        s.end()
    }
}

impl<T: LatticeInt> NegOneCurve<T> {
    pub fn id(&self) -> usize {
        self.id
    }

    pub fn class(&self) -> &DivisorClass<T> {
        &self.class
    }

    pub fn curve_type(&self) -> &CurveType {
        &self.curve_type
    }

    pub fn kind(&self) -> CurveKind {
        self.curve_type.kind()
    }
}

/// Largest `a` with `(3a - 1)^2 <= r (a^2 + 1)`.
pub fn max_hyperplane_degree(points: usize) -> i64 {
    let r = points as i64;
    let mut a = 0;
    while (3 * (a + 1) - 1) * (3 * (a + 1) - 1) <= r * ((a + 1) * (a + 1) + 1) {
        a += 1;
    }
    a
}

/// All (−1)-classes of the given degree, ordered lexicographically on
/// `(a, b1, .., br)`; `id` is the position in that order.
pub fn enumerate_neg_one<T: LatticeInt>(ctx: DelPezzoContext) -> Vec<NegOneCurve<T>> {
    let r = ctx.points();
    let mut raw: Vec<(i64, Vec<i64>)> = Vec::new();
    if r > 0 {
        for a in 0..=max_hyperplane_degree(r) {
            let mut prefix = Vec::with_capacity(r);
            fill_vectors(r, -1, a, 3 * a - 1, a * a + 1, &mut prefix, &mut |b| {
                raw.push((a, b.to_vec()))
            });
        }
    }
    raw.sort();
    raw.into_iter()
        .enumerate()
        .map(|(id, (a, b))| {
            let class = DivisorClass::from_ints(a, &b);
            let curve_type = classify(&class).expect("enumerated classes are (-1)-classes");
            NegOneCurve {
                id,
                class,
                curve_type,
            }
        })
        .collect()
}

/// Determines the geometric type of a (−1)-class from its plane degree and
/// multiplicity signature.
pub fn classify<T: LatticeInt>(x: &DivisorClass<T>) -> Result<CurveType, EnumerateError> {
    if !is_neg_one_class(x)? {
        return Err(EnumerateError::NotNegOneClass(x.to_string()));
    }
    let unmatched = || EnumerateError::UnmatchedSignature(x.to_string());
    let a = x.a().to_i64().ok_or_else(unmatched)?;
    let mut by_mult: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, v) in x.b().iter().enumerate() {
        let v = v.to_i64().ok_or_else(unmatched)?;
        if v != 0 {
            by_mult.entry(v).or_default().push(i + 1);
        }
    }
    let zeros: Vec<usize> = x
        .b()
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_zero())
        .map(|(i, _)| i + 1)
        .collect();
    let count = |m: i64| by_mult.get(&m).map_or(0, Vec::len);
    let at = |m: i64| by_mult.get(&m).cloned().unwrap_or_default();
    // signature = (a, counts of multiplicities -1, 1, 2, 3); nothing else occurs
    let other = by_mult.keys().any(|m| !matches!(m, -1 | 1 | 2 | 3));
    if other {
        return Err(unmatched());
    }
    let sig = (a, count(-1), count(1), count(2), count(3));
    let ty = match sig {
        (0, 1, 0, 0, 0) => CurveType::Exceptional(at(-1)[0]),
        (1, 0, 2, 0, 0) => {
            let s = at(1);
            CurveType::Line(s[0], s[1])
        }
        (2, 0, 5, 0, 0) => CurveType::Conic(at(1).try_into().map_err(|_| unmatched())?),
        (3, 0, 6, 1, 0) => CurveType::Cubic {
            node: at(2)[0],
            omitted: zeros,
        },
        (4, 0, 5, 3, 0) => CurveType::Quartic(at(2).try_into().map_err(|_| unmatched())?),
        (5, 0, 2, 6, 0) => CurveType::Quintic(at(2).try_into().map_err(|_| unmatched())?),
        (6, 0, 0, 7, 1) => CurveType::Sextic(at(3)[0]),
        _ => return Err(unmatched()),
    };
    Ok(ty)
}

/// Number of (−1)-curves of each kind in degree `ctx`. Kinds that do not occur
/// are omitted.
pub fn type_census(ctx: DelPezzoContext) -> BTreeMap<CurveKind, usize> {
    census_of(&enumerate_neg_one::<i64>(ctx))
}

pub fn census_of<T: LatticeInt>(curves: &[NegOneCurve<T>]) -> BTreeMap<CurveKind, usize> {
    let mut census = BTreeMap::new();
    for c in curves {
        *census.entry(c.kind()).or_insert(0) += 1;
    }
    census
}

/// Intersection data of a non-exceptional (−1)-curve with the branch sextic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchLemma<T: LatticeInt> {
    /// Degree of the plane image.
    pub e: T,
    /// Total multiplicity at the nodes of the sextic.
    pub sum_b: T,
    /// `6e - 2 sum_b`: intersections left over after the nodes are accounted for.
    pub residual: T,
}

impl<T: LatticeInt> BranchLemma<T> {
    /// `sum_b = 3e - 1`, equivalently `residual = 2`.
    pub fn holds(&self) -> bool {
        self.residual == T::from_small(2)
    }
}

pub fn verify_branch_lemma<T: LatticeInt>(
    curve: &NegOneCurve<T>,
) -> Result<BranchLemma<T>, EnumerateError> {
    if curve.curve_type.is_exceptional() {
        return Err(EnumerateError::ImageIsPoint(curve.curve_type.to_string()));
    }
    let e = curve.class.a().clone();
    let mut sum_b = T::zero();
    for v in curve.class.b() {
        sum_b = checked_add(&sum_b, v).ok_or(LatticeError::Overflow)?;
    }
    let three_e = checked_mul(&T::from_small(3), &e).ok_or(LatticeError::Overflow)?;
    // 6e - 2 sum_b = 2 (3e - sum_b)
    let diff = three_e.checked_sub(&sum_b).ok_or(LatticeError::Overflow)?;
    let residual = diff.checked_add(&diff).ok_or(LatticeError::Overflow)?;
    Ok(BranchLemma { e, sum_b, residual })
}

/// Whether the reflection in every root maps every class of `curves` back into
/// the set.
pub fn weyl_closed<T: LatticeInt>(
    ctx: DelPezzoContext,
    curves: &[NegOneCurve<T>],
) -> Result<bool, LatticeError> {
    let set: BTreeSet<&DivisorClass<T>> = curves.iter().map(|c| &c.class).collect();
    for rho in roots::<T>(ctx) {
        for c in curves {
            if !set.contains(&reflect(&c.class, &rho)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Orbit of `seeds` under the group generated by the simple reflections.
pub fn weyl_orbit<T: LatticeInt>(
    ctx: DelPezzoContext,
    seeds: &[DivisorClass<T>],
) -> Result<BTreeSet<DivisorClass<T>>, LatticeError> {
    let generators = simple_roots::<T>(ctx);
    let mut seen: BTreeSet<DivisorClass<T>> = seeds.iter().cloned().collect();
    let mut frontier: Vec<DivisorClass<T>> = seen.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for rho in &generators {
            let y = reflect(&x, rho)?;
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    Ok(seen)
}

/// Seeds whose Weyl orbit is every (−1)-class: `E_r`, plus the line through
/// the two points when `r = 2`, where that line is fixed by the only reflection.
pub fn orbit_seeds<T: LatticeInt>(ctx: DelPezzoContext) -> Vec<DivisorClass<T>> {
    let r = ctx.points();
    let mut seeds = Vec::new();
    if r >= 1 {
        let mut b = vec![0i64; r];
        b[r - 1] = -1;
        seeds.push(DivisorClass::from_ints(0, &b));
    }
    if r == 2 {
        seeds.push(DivisorClass::from_ints(1, &[1, 1]));
    }
    seeds
}
