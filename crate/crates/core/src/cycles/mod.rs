//! Formal precycles `sum (C_i, f_i)` on the K3 double cover.
//!
//! A function on a rational curve is recorded by its divisor, which must have
//! degree zero, together with an optional anchor point where it takes the value 1.
//! The cocycle condition asks that the divisors of all terms cancel once pushed
//! to the surface, which here means summing orders point by point.

pub mod tame;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combination::Combination;
use crate::enumerate::{CurveType, NegOneCurve};
use crate::lattice::{pair, LatticeError};
use crate::scalar::LatticeInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("divisor has degree {0}, a function on a rational curve needs degree 0")]
    NonZeroDegree(i64),
    #[error("anchor {0} lies in the support of the divisor")]
    AnchorInSupport(String),
    #[error("curves {0} and {1} do not meet (intersection number {2})")]
    NotIntersecting(String, String, String),
    #[error("point {0} needs an on_branch or off_branch location, got {1}")]
    MissingLocation(String, PointLocation),
    #[error("{0} and {1} share no blown-up point, so no exceptional fibre passes through an on-branch intersection")]
    NoSharedNode(String, String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Where a point sits relative to the branch curve of the double cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointLocation {
    OnBranch,
    OffBranch,
    Node,
    Generic,
}

impl fmt::Display for PointLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointLocation::OnBranch => "on_branch",
            PointLocation::OffBranch => "off_branch",
            PointLocation::Node => "node",
            PointLocation::Generic => "generic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub id: String,
    pub location: PointLocation,
}

impl SurfacePoint {
    pub fn new(id: impl Into<String>, location: PointLocation) -> Self {
        Self {
            id: id.into(),
            location,
        }
    }
}

/// Points of the double cover over `p`: two labelled points `id#1`, `id#2` off
/// the branch curve, a single point on it or at a node.
pub fn lift(p: &SurfacePoint) -> Vec<SurfacePoint> {
    match p.location {
        PointLocation::OnBranch | PointLocation::Node => vec![p.clone()],
        PointLocation::OffBranch | PointLocation::Generic => (1..=2)
            .map(|k| SurfacePoint::new(format!("{}#{k}", p.id), p.location))
            .collect(),
    }
}

/// A function on a rational curve, known through its degree-zero divisor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCurveFunction")]
pub struct CurveFunction {
    orders: BTreeMap<String, i64>,
    anchor: Option<String>,
}

#[derive(Deserialize)]
struct RawCurveFunction {
    orders: BTreeMap<String, i64>,
    anchor: Option<String>,
}

impl TryFrom<RawCurveFunction> for CurveFunction {
    type Error = CycleError;

    fn try_from(raw: RawCurveFunction) -> Result<Self, Self::Error> {
        CurveFunction::new(raw.orders, raw.anchor)
    }
}

impl CurveFunction {
    pub fn new(
        orders: impl IntoIterator<Item = (String, i64)>,
        anchor: Option<String>,
    ) -> Result<Self, CycleError> {
        let mut map = BTreeMap::new();
        for (p, v) in orders {
            *map.entry(p).or_insert(0) += v;
        }
        map.retain(|_, v| *v != 0);
        let degree: i64 = map.values().sum();
        if degree != 0 {
            return Err(CycleError::NonZeroDegree(degree));
        }
        if let Some(a) = &anchor {
            if map.contains_key(a) {
                return Err(CycleError::AnchorInSupport(a.clone()));
            }
        }
        Ok(Self {
            orders: map,
            anchor,
        })
    }

    /// A nonzero constant.
    pub fn constant() -> Self {
        Self {
            orders: BTreeMap::new(),
            anchor: None,
        }
    }

    /// The function with divisor `zero - pole`, normalised to 1 at `anchor`.
    pub fn point_difference(
        zero: &SurfacePoint,
        pole: &SurfacePoint,
        anchor: Option<&SurfacePoint>,
    ) -> Result<Self, CycleError> {
        Self::new(
            [(zero.id.clone(), 1), (pole.id.clone(), -1)],
            anchor.map(|a| a.id.clone()),
        )
    }

    /// `1/f`: negated divisor, same anchor.
    pub fn inverse(&self) -> Self {
        Self {
            orders: self.orders.iter().map(|(k, v)| (k.clone(), -v)).collect(),
            anchor: self.anchor.clone(),
        }
    }

    pub fn orders(&self) -> &BTreeMap<String, i64> {
        &self.orders
    }

    pub fn anchor(&self) -> Option<&str> {
        self.anchor.as_deref()
    }

    pub fn is_constant(&self) -> bool {
        self.orders.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecycleTerm {
    pub curve: String,
    #[serde(flatten)]
    pub function: CurveFunction,
}

/// A finite formal sum of (curve, function) terms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalPrecycle {
    terms: Vec<PrecycleTerm>,
}

impl FormalPrecycle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, curve: impl Into<String>, function: CurveFunction) {
        self.terms.push(PrecycleTerm {
            curve: curve.into(),
            function,
        });
    }

    pub fn terms(&self) -> &[PrecycleTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The additive inverse: every function replaced by its reciprocal.
    pub fn negated(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| PrecycleTerm {
                    curve: t.curve.clone(),
                    function: t.function.inverse(),
                })
                .collect(),
        }
    }

    /// Formal sum, concatenating terms.
    pub fn plus(&self, other: &Self) -> Self {
        Self {
            terms: self.terms.iter().chain(&other.terms).cloned().collect(),
        }
    }

    /// Sum of all divisors, aggregated by point id.
    pub fn divisor_sum(&self) -> Combination<String> {
        self.terms
            .iter()
            .flat_map(|t| t.function.orders.iter().map(|(p, &v)| (p.clone(), v)))
            .collect()
    }
}

/// `sum div(f_i) = 0`.
pub fn cocycle_check(z: &FormalPrecycle) -> bool {
    z.divisor_sum().is_zero()
}

/// Label of the lift of a (−1)-curve to the double cover.
pub fn lifted_label(ty: &CurveType) -> String {
    format!("~{ty}")
}

/// Label of the branch point `s` on the lift of a (−1)-curve; the functions of a
/// cycle are normalised to 1 there.
pub fn s_point(ty: &CurveType) -> SurfacePoint {
    SurfacePoint::new(format!("s{}", lifted_label(ty)), PointLocation::OnBranch)
}

/// Two-term cycle on lifted curves meeting over the off-branch point `x`:
/// `(~D1, x#1 - x#2) + (~D2, x#2 - x#1)`.
fn two_point_cycle(
    first: &CurveType,
    second: &CurveType,
    x: &SurfacePoint,
) -> Result<FormalPrecycle, CycleError> {
    let lifted = lift(x);
    let (p1, p2) = (&lifted[0], &lifted[1]);
    let mut z = FormalPrecycle::new();
    z.push(
        lifted_label(first),
        CurveFunction::point_difference(p1, p2, Some(&s_point(first)))?,
    );
    z.push(
        lifted_label(second),
        CurveFunction::point_difference(p2, p1, Some(&s_point(second)))?,
    );
    Ok(z)
}

/// The cycle attached to two meeting (−1)-curves and a common point `p` of their
/// plane images.
///
/// * `p` off the branch curve: two lifted points `P1, P2`, and the cycle is
///   `(~D1, P1 - P2) + (~D2, P2 - P1)`.
/// * `p` on the branch curve and one curve the exceptional fibre over `p`: the
///   two curves meet once over `p`, off the branch curve, and the same two-term
///   cycle is built over that point.
/// * `p` on the branch curve, neither curve exceptional: with `E` the exceptional
///   fibre over `p`, the result is the four-term difference
///   `Xi(D1, E) - Xi(D2, E)`.
///
/// The blown-up point under an on-branch `p` is the lowest index through which
/// both plane images pass.
pub fn build_xi<T: LatticeInt>(
    d1: &NegOneCurve<T>,
    d2: &NegOneCurve<T>,
    p: &SurfacePoint,
) -> Result<FormalPrecycle, CycleError> {
    let m = pair(d1.class(), d2.class())?;
    if m < T::one() {
        return Err(CycleError::NotIntersecting(
            d1.curve_type().to_string(),
            d2.curve_type().to_string(),
            m.to_string(),
        ));
    }
    let (t1, t2) = (d1.curve_type(), d2.curve_type());
    match p.location {
        PointLocation::OffBranch => two_point_cycle(t1, t2, p),
        PointLocation::OnBranch => {
            let over = |ty: &CurveType| {
                SurfacePoint::new(format!("{}[{}]", p.id, ty), PointLocation::OffBranch)
            };
            if t2.is_exceptional() {
                two_point_cycle(t1, t2, &over(t1))
            } else if t1.is_exceptional() {
                two_point_cycle(t2, t1, &over(t2))
            } else {
                let node = d1
                    .class()
                    .b()
                    .iter()
                    .zip(d2.class().b())
                    .position(|(x, y)| *x >= T::one() && *y >= T::one())
                    .ok_or_else(|| CycleError::NoSharedNode(t1.to_string(), t2.to_string()))?;
                let fibre = CurveType::Exceptional(node + 1);
                let first = two_point_cycle(t1, &fibre, &over(t1))?;
                let second = two_point_cycle(t2, &fibre, &over(t2))?;
                Ok(first.plus(&second.negated()))
            }
        }
        PointLocation::Node | PointLocation::Generic => {
            Err(CycleError::MissingLocation(p.id.clone(), p.location))
        }
    }
}

/// A product-type cycle `(C, a)` with `a` a constant on the base of a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecomposableCycle {
    pub curve: String,
    /// Name of the constant; `"1"` is the unit.
    pub constant: String,
    pub precycle: FormalPrecycle,
}

pub fn decomposable_cycle(
    curve: impl Into<String>,
    constant: impl Into<String>,
) -> DecomposableCycle {
    let curve = curve.into();
    let mut precycle = FormalPrecycle::new();
    precycle.push(curve.clone(), CurveFunction::constant());
    DecomposableCycle {
        curve,
        constant: constant.into(),
        precycle,
    }
}

impl DecomposableCycle {
    pub fn is_unit(&self) -> bool {
        self.constant == "1"
    }

    /// Boundary in a family: `sum ord_s(a) C_s`, where `C_s` (labelled `C|s`) is
    /// the restriction of the curve to the fibre over `s`. The unit has no zeros
    /// or poles, so its boundary vanishes.
    pub fn family_boundary(&self, valuations: &BTreeMap<String, i64>) -> Combination<String> {
        if self.is_unit() {
            return Combination::zero();
        }
        valuations
            .iter()
            .map(|(s, &ord)| (format!("{}|{}", self.curve, s), ord))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_neg_one;
    use crate::incidence::{candidate_cycle_pairs, IncidenceGraph};
    use crate::lattice::{DelPezzoContext, DivisorClass};

    fn pt(id: &str, loc: PointLocation) -> SurfacePoint {
        SurfacePoint::new(id, loc)
    }

    fn curve(d: i64, a: i64, b: &[i64]) -> NegOneCurve<i64> {
        let cls = DivisorClass::from_ints(a, b);
        enumerate_neg_one::<i64>(DelPezzoContext::new(d).unwrap())
            .into_iter()
            .find(|c| *c.class() == cls)
            .unwrap()
    }

    #[test]
    fn curve_function_invariants() {
        let p = pt("P1", PointLocation::OffBranch);
        let q = pt("P2", PointLocation::OffBranch);
        let f = CurveFunction::point_difference(&p, &q, None).unwrap();
        assert_eq!(f.orders().values().sum::<i64>(), 0);
        assert_eq!(f.inverse().orders()["P1"], -1);
        assert_eq!(
            CurveFunction::new([("P".to_string(), 1)], None),
            Err(CycleError::NonZeroDegree(1))
        );
        assert!(matches!(
            CurveFunction::point_difference(&p, &q, Some(&p)),
            Err(CycleError::AnchorInSupport(_))
        ));
        assert!(
            CurveFunction::new([("P".to_string(), 1), ("P".to_string(), -1)], None)
                .unwrap()
                .is_constant()
        );
    }

    #[test]
    fn cocycle_examples() {
        let p1 = pt("P1", PointLocation::OffBranch);
        let p2 = pt("P2", PointLocation::OffBranch);
        let mut z = FormalPrecycle::new();
        z.push(
            "C1",
            CurveFunction::point_difference(&p1, &p2, None).unwrap(),
        );
        assert!(!cocycle_check(&z));
        z.push(
            "C2",
            CurveFunction::point_difference(&p2, &p1, None).unwrap(),
        );
        assert!(cocycle_check(&z));
        assert!(cocycle_check(&FormalPrecycle::new()));
    }

    #[test]
    fn lifting_labels() {
        assert_eq!(lift(&pt("P", PointLocation::OnBranch)).len(), 1);
        let off = lift(&pt("P", PointLocation::OffBranch));
        assert_eq!(
            off.iter().map(|p| p.id.as_str()).collect::<Vec<_>>(),
            ["P#1", "P#2"]
        );
    }

    #[test]
    fn xi_off_branch_has_two_terms() {
        let conic = curve(2, 2, &[1, 1, 1, 1, 1, 0, 0]);
        let cubic = curve(2, 3, &[1, 1, 1, 1, 1, 1, 2]);
        let z = build_xi(&conic, &cubic, &pt("P", PointLocation::OffBranch)).unwrap();
        assert_eq!(z.len(), 2);
        assert!(cocycle_check(&z));
        assert_eq!(z.terms()[0].function.anchor(), Some("s~F(1,2,3,4,5)"));
    }

    #[test]
    fn xi_on_branch_with_exceptional_fibre_has_two_terms() {
        let line = curve(3, 1, &[1, 1, 0, 0, 0, 0]);
        let e1 = curve(3, 0, &[-1, 0, 0, 0, 0, 0]);
        let z = build_xi(&line, &e1, &pt("P1", PointLocation::OnBranch)).unwrap();
        assert_eq!(z.len(), 2);
        assert!(cocycle_check(&z));
        let z = build_xi(&e1, &line, &pt("P1", PointLocation::OnBranch)).unwrap();
        assert_eq!(z.terms()[0].curve, "~L(1,2)");
    }

    #[test]
    fn xi_on_branch_general_has_four_terms() {
        let l12 = curve(3, 1, &[1, 1, 0, 0, 0, 0]);
        let l13 = curve(3, 1, &[1, 0, 1, 0, 0, 0]);
        // L12 and L13 meet at P1 only: intersection number 1 - 1 = 0, so use a conic
        let conic = curve(3, 2, &[1, 1, 1, 1, 1, 0]);
        assert!(build_xi(&l12, &l13, &pt("P", PointLocation::OnBranch)).is_err());
        let z = build_xi(&l12, &conic, &pt("P", PointLocation::OnBranch)).unwrap_err();
        assert!(matches!(z, CycleError::NotIntersecting(..)));
        let l16 = curve(3, 1, &[1, 0, 0, 0, 0, 1]);
        let z = build_xi(&l16, &conic, &pt("P", PointLocation::OnBranch)).unwrap();
        assert_eq!(z.len(), 4);
        assert!(cocycle_check(&z));
        assert_eq!(
            z.terms().iter().filter(|t| t.curve == "~E(1)").count(),
            2,
            "both halves route through the fibre over P1"
        );
    }

    #[test]
    fn xi_errors() {
        let e1 = curve(3, 0, &[-1, 0, 0, 0, 0, 0]);
        let e2 = curve(3, 0, &[0, -1, 0, 0, 0, 0]);
        assert!(matches!(
            build_xi(&e1, &e2, &pt("P", PointLocation::OffBranch)),
            Err(CycleError::NotIntersecting(..))
        ));
        let line = curve(3, 1, &[1, 1, 0, 0, 0, 0]);
        assert!(matches!(
            build_xi(&line, &e1, &pt("P", PointLocation::Generic)),
            Err(CycleError::MissingLocation(..))
        ));
        // a line and a conic with no common blown-up point
        let l12 = curve(2, 1, &[1, 1, 0, 0, 0, 0, 0]);
        let f = curve(2, 2, &[0, 0, 1, 1, 1, 1, 1]);
        assert!(matches!(
            build_xi(&l12, &f, &pt("P", PointLocation::OnBranch)),
            Err(CycleError::NoSharedNode(..))
        ));
    }

    #[test]
    fn every_candidate_pair_gives_a_cocycle() {
        for c in DelPezzoContext::all() {
            let g = IncidenceGraph::<i64>::for_degree(c).unwrap();
            for p in candidate_cycle_pairs(&g) {
                let (x, y) = (g.node(p.i).unwrap(), g.node(p.j).unwrap());
                let z = build_xi(x, y, &pt("P", PointLocation::OffBranch)).unwrap();
                assert!(cocycle_check(&z));
                match build_xi(x, y, &pt("P", PointLocation::OnBranch)) {
                    Ok(z) => assert!(cocycle_check(&z)),
                    Err(CycleError::NoSharedNode(..)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn decomposable_boundaries() {
        let unit = decomposable_cycle("C", "1");
        assert!(unit.family_boundary(&BTreeMap::new()).is_zero());
        assert!(cocycle_check(&unit.precycle));
        let a = decomposable_cycle("C", "a");
        let one: BTreeMap<String, i64> = [("s0".to_string(), 1)].into_iter().collect();
        assert_eq!(
            a.family_boundary(&one),
            Combination::single("C|s0".to_string(), 1)
        );
        let two: BTreeMap<String, i64> = [("s0".to_string(), 2), ("s1".to_string(), -2)]
            .into_iter()
            .collect();
        assert_eq!(a.family_boundary(&two).to_string(), "2C|s0 - 2C|s1");
    }

    #[test]
    fn precycle_json_shape() {
        let p1 = pt("P1", PointLocation::OffBranch);
        let p2 = pt("P2", PointLocation::OffBranch);
        let mut z = FormalPrecycle::new();
        z.push(
            "C1",
            CurveFunction::point_difference(&p1, &p2, Some(&pt("s", PointLocation::OnBranch)))
                .unwrap(),
        );
        let json = serde_json::to_string(&z).unwrap();
        assert_eq!(
            json,
            r#"{"terms":[{"curve":"C1","orders":{"P1":1,"P2":-1},"anchor":"s"}]}"#
        );
        let back: FormalPrecycle = serde_json::from_str(&json).unwrap();
        assert_eq!(back, z);
        let bad = r#"{"terms":[{"curve":"C1","orders":{"P1":1},"anchor":null}]}"#;
        assert!(serde_json::from_str::<FormalPrecycle>(bad).is_err());
    }
}
