//! Boundary of the cycle Xi under degeneration to the divisor where `Q1` becomes
//! tangent to `Q2`, replayed as an exact solve.
//!
//! Over the divisor the total transform of `D1` contains a horizontal curve `H`,
//! the two swapped halves `T11`, `T12` of the split vertical curve, the fibre `E`
//! of the exceptional curve and possibly further vertical curves `Z1, Z2, ...`.
//! Writing `div f = H + a T11 + b T12 + c E` on `D1`, the involution fixes `a, b, c`
//! up to one unknown, and the degree of `div(f h^-a)` on `T11` fixes that one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combination::{span_contains, Combination};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegenerationError {
    #[error("involution violates the model contract: {0}")]
    InvalidInvolution(String),
    #[error("component {0} is not part of the model")]
    UnknownComponent(Component),
    #[error("the locus where both conics are tangent is not supported")]
    Unsupported,
    #[error("constraint set is degenerate (identity involution); nothing to solve")]
    Degenerate,
    #[error("missing constraint {0}")]
    MissingConstraint(String),
    #[error("coefficient of a vanishes; the model is singular")]
    Singular,
    #[error("solution a = {numerator}/{denominator} is not an integer")]
    NonIntegral { numerator: i64, denominator: i64 },
    #[error("model splits but no solved decomposition was supplied")]
    Unsolved,
    #[error("cannot parse component {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    Horizontal,
    T11,
    T12,
    ExcFibre,
    OtherZ(u32),
}

impl Component {
    pub fn is_vertical(self) -> bool {
        self != Component::Horizontal
    }

    /// Name of the coefficient this component carries in `div f`.
    pub fn coefficient_name(self) -> String {
        match self {
            Component::Horizontal => "1".into(),
            Component::T11 => "a".into(),
            Component::T12 => "b".into(),
            Component::ExcFibre => "c".into(),
            Component::OtherZ(k) => format!("z{k}"),
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Horizontal => f.write_str("H"),
            Component::T11 => f.write_str("T11"),
            Component::T12 => f.write_str("T12"),
            Component::ExcFibre => f.write_str("E"),
            Component::OtherZ(k) => write!(f, "Z{k}"),
        }
    }
}

impl FromStr for Component {
    type Err = DegenerationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "H" => Ok(Component::Horizontal),
            "T11" => Ok(Component::T11),
            "T12" => Ok(Component::T12),
            "E" => Ok(Component::ExcFibre),
            _ => s
                .strip_prefix('Z')
                .and_then(|k| k.parse().ok())
                .map(Component::OtherZ)
                .ok_or_else(|| DegenerationError::Parse(s.to_string())),
        }
    }
}

impl Serialize for Component {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Component {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Locus {
    /// Only `Q1` is tangent to the branch configuration.
    #[default]
    Q1Only,
    /// Both conics are; no formula is available there.
    Q1AndQ2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegenerationModel {
    components: BTreeSet<Component>,
    involution: BTreeMap<Component, Component>,
    itable: BTreeMap<(Component, Component), i64>,
    z_coefficients: BTreeMap<u32, i64>,
    splits: bool,
    locus: Locus,
}

fn key(x: Component, y: Component) -> (Component, Component) {
    (x.min(y), x.max(y))
}

impl DegenerationModel {
    /// The configuration over a generic point of the tangency divisor:
    /// `H` meets `T11` once, `T11` and `T12` are disjoint, `E` meets each half once,
    /// and no further vertical curve contributes. `H . T12 = -1` makes the table
    /// antisymmetric under exchanging the two halves.
    pub fn standard() -> Self {
        use Component::*;
        let mut m = Self {
            components: [Horizontal, T11, T12, ExcFibre].into_iter().collect(),
            involution: [(T11, T12), (T12, T11)].into_iter().collect(),
            itable: BTreeMap::new(),
            z_coefficients: BTreeMap::new(),
            splits: true,
            locus: Locus::Q1Only,
        };
        for (x, y, v) in [
            (Horizontal, T11, 1),
            (Horizontal, T12, -1),
            (T12, T11, 0),
            (ExcFibre, T11, 1),
            (ExcFibre, T12, 1),
        ] {
            m.itable.insert(key(x, y), v);
        }
        m
    }

    pub fn components(&self) -> &BTreeSet<Component> {
        &self.components
    }

    pub fn splits(&self) -> bool {
        self.splits
    }

    pub fn locus(&self) -> Locus {
        self.locus
    }

    /// Image under the involution; components not listed are fixed.
    pub fn image(&self, c: Component) -> Component {
        self.involution.get(&c).copied().unwrap_or(c)
    }

    pub fn intersection(&self, x: Component, y: Component) -> i64 {
        self.itable.get(&key(x, y)).copied().unwrap_or(0)
    }

    /// `a_Z` in `div h = H - sum a_Z Z`.
    pub fn z_coefficient(&self, k: u32) -> i64 {
        self.z_coefficients.get(&k).copied().unwrap_or(0)
    }

    pub fn with_intersection(mut self, x: Component, y: Component, value: i64) -> Self {
        self.components.extend([x, y]);
        self.itable.insert(key(x, y), value);
        self
    }

    pub fn with_other_component(mut self, k: u32, a_z: i64) -> Self {
        self.components.insert(Component::OtherZ(k));
        self.z_coefficients.insert(k, a_z);
        self
    }

    /// Adds the transposition `x <-> y` to the involution.
    pub fn with_swap(mut self, x: Component, y: Component) -> Self {
        self.components.extend([x, y]);
        self.involution.insert(x, y);
        self.involution.insert(y, x);
        self
    }

    pub fn with_identity_involution(mut self) -> Self {
        self.involution.clear();
        self
    }

    /// Neither curve splits over the divisor.
    pub fn unsplit(mut self) -> Self {
        self.splits = false;
        self
    }

    pub fn with_locus(mut self, locus: Locus) -> Self {
        self.locus = locus;
        self
    }

    /// Exchanges the names `T11` and `T12` throughout, i.e. puts `P1` on the
    /// other half.
    pub fn relabelled(&self) -> Self {
        let swap = |c: Component| match c {
            Component::T11 => Component::T12,
            Component::T12 => Component::T11,
            other => other,
        };
        Self {
            components: self.components.iter().map(|&c| swap(c)).collect(),
            involution: self
                .involution
                .iter()
                .map(|(&x, &y)| (swap(x), swap(y)))
                .collect(),
            itable: self
                .itable
                .iter()
                .map(|(&(x, y), &v)| (key(swap(x), swap(y)), v))
                .collect(),
            z_coefficients: self.z_coefficients.clone(),
            splits: self.splits,
            locus: self.locus,
        }
    }

    fn is_identity(&self) -> bool {
        self.involution.iter().all(|(x, y)| x == y)
    }

    fn validate_involution(&self) -> Result<(), DegenerationError> {
        use Component::*;
        let bad = |msg: String| Err(DegenerationError::InvalidInvolution(msg));
        for (&x, &y) in &self.involution {
            for c in [x, y] {
                if !self.components.contains(&c) {
                    return Err(DegenerationError::UnknownComponent(c));
                }
            }
            if self.image(y) != x {
                return bad(format!("{x} -> {y} but {y} -> {}", self.image(y)));
            }
        }
        if self.image(Horizontal) != Horizontal {
            return bad("H must be fixed".into());
        }
        if self.image(ExcFibre) != ExcFibre {
            return bad("E must be fixed".into());
        }
        if self.image(T11) != T12 {
            return bad("T11 and T12 must be swapped".into());
        }
        Ok(())
    }
}

/// A linear condition on the coefficients of `div f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Constraint {
    /// The coefficient of this component vanishes.
    Zero(Component),
    /// `coefficient(left) = -coefficient(right)`.
    Negated { left: Component, right: Component },
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Zero(c) => write!(f, "{} = 0", c.coefficient_name()),
            Constraint::Negated { left, right } => write!(
                f,
                "{} = -{}",
                left.coefficient_name(),
                right.coefficient_name()
            ),
        }
    }
}

impl Serialize for Constraint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstraintSet {
    pub constraints: Vec<Constraint>,
    /// Set when the involution is the identity and says nothing.
    pub degenerate: bool,
}

impl ConstraintSet {
    pub fn contains(&self, c: &Constraint) -> bool {
        self.constraints.contains(c)
    }
}

/// Since `f^iota = const / f`, pushing `div f` forward by the involution negates
/// its vertical part, so each fixed component has coefficient 0 and each swapped
/// pair has opposite coefficients.
pub fn solve_involution_constraints(
    model: &DegenerationModel,
) -> Result<ConstraintSet, DegenerationError> {
    if model.locus == Locus::Q1AndQ2 {
        return Err(DegenerationError::Unsupported);
    }
    if model.is_identity() {
        return Ok(ConstraintSet {
            constraints: Vec::new(),
            degenerate: true,
        });
    }
    model.validate_involution()?;
    let mut constraints = Vec::new();
    for &c in model.components.iter().filter(|c| c.is_vertical()) {
        let image = model.image(c);
        if image == c {
            constraints.push(Constraint::Zero(c));
        } else if c < image {
            constraints.push(Constraint::Negated {
                left: image,
                right: c,
            });
        }
    }
    constraints.sort();
    Ok(ConstraintSet {
        constraints,
        degenerate: false,
    })
}

/// `div f = H + a T11 + b T12 + c E` on the closure of `D1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoundaryDecomposition {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl BoundaryDecomposition {
    pub fn as_combination(&self) -> Combination<Component> {
        [
            (Component::Horizontal, 1),
            (Component::T11, self.a),
            (Component::T12, self.b),
            (Component::ExcFibre, self.c),
        ]
        .into_iter()
        .collect()
    }
}

/// Solves `(H.T11) - 2a (T12.T11) - a (E.T11) + a sum a_Z (Z.T11) = 0`, the
/// statement that `div(f h^-a)` restricted to `T11` has degree 0.
pub fn solve_degree_constraint(
    model: &DegenerationModel,
    constraints: &ConstraintSet,
) -> Result<BoundaryDecomposition, DegenerationError> {
    use Component::*;
    if constraints.degenerate {
        return Err(DegenerationError::Degenerate);
    }
    for needed in [
        Constraint::Negated {
            left: T12,
            right: T11,
        },
        Constraint::Zero(ExcFibre),
    ] {
        if !constraints.contains(&needed) {
            return Err(DegenerationError::MissingConstraint(needed.to_string()));
        }
    }
    let z_sum: i64 = model
        .components
        .iter()
        .filter_map(|&c| match c {
            OtherZ(k) => Some(model.z_coefficient(k) * model.intersection(c, T11)),
            _ => None,
        })
        .sum();
    let coefficient = 2 * model.intersection(T12, T11) + model.intersection(ExcFibre, T11) - z_sum;
    let constant = model.intersection(Horizontal, T11);
    if coefficient == 0 {
        return Err(DegenerationError::Singular);
    }
    if constant % coefficient != 0 {
        return Err(DegenerationError::NonIntegral {
            numerator: constant,
            denominator: coefficient,
        });
    }
    let a = constant / coefficient;
    Ok(BoundaryDecomposition { a, b: -a, c: 0 })
}

/// `div f` on `D1` plus `div f = -H` on `D2`; the horizontal parts cancel.
pub fn boundary_of_xi(
    model: &DegenerationModel,
    decomposition: Option<&BoundaryDecomposition>,
) -> Result<Combination<Component>, DegenerationError> {
    if model.locus == Locus::Q1AndQ2 {
        return Err(DegenerationError::Unsupported);
    }
    if !model.splits {
        return Ok(Combination::zero());
    }
    let d = decomposition.ok_or(DegenerationError::Unsolved)?;
    let d2_side = Combination::single(Component::Horizontal, -1);
    Ok(&d.as_combination() + &d2_side)
}

/// Involution-invariant combinations `c + iota(c)` of vertical components; the
/// restrictions of generic cycles lie in their span.
pub fn invariant_span(model: &DegenerationModel) -> Vec<Combination<Component>> {
    let mut seen = BTreeSet::new();
    let mut span = Vec::new();
    for &c in model.components.iter().filter(|c| c.is_vertical()) {
        let image = model.image(c);
        if seen.insert(c.min(image)) {
            let mut orbit = Combination::single(c, 1);
            orbit.add_term(image, 1);
            span.push(orbit);
        }
    }
    span
}

/// `x - iota(x)`, twice the anti-invariant part.
pub fn doubled_anti_invariant_part(
    model: &DegenerationModel,
    x: &Combination<Component>,
) -> Combination<Component> {
    let pushed = x.map_keys(|&c| model.image(c));
    x - &pushed
}

/// True iff `boundary` lies outside the span of the restrictions of generic cycles.
pub fn indecomposability_witness(
    boundary: &Combination<Component>,
    generic_span: &[Combination<Component>],
) -> bool {
    !span_contains::<Rational, _>(generic_span, boundary)
}

/// Everything the `boundary-replay` command reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Replay {
    pub constraints: ConstraintSet,
    pub a: Option<i64>,
    pub b: Option<i64>,
    pub c: Option<i64>,
    pub boundary: String,
    pub indecomposable: bool,
}

pub fn replay(model: &DegenerationModel) -> Result<Replay, DegenerationError> {
    let constraints = solve_involution_constraints(model)?;
    let decomposition = if model.splits {
        Some(solve_degree_constraint(model, &constraints)?)
    } else {
        None
    };
    let boundary = boundary_of_xi(model, decomposition.as_ref())?;
    Ok(Replay {
        a: decomposition.map(|d| d.a),
        b: decomposition.map(|d| d.b),
        c: decomposition.map(|d| d.c),
        indecomposable: indecomposability_witness(&boundary, &invariant_span(model)),
        boundary: boundary.to_string(),
        constraints,
    })
}

/// JSON overrides applied on top of [`DegenerationModel::standard`].
///
/// ```json
/// {"itable": [["H", "T11", 2]], "z": {"Z1": 1}, "swaps": [["Z1", "Z2"]]}
/// ```
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelOverrides {
    pub itable: Vec<(Component, Component, i64)>,
    /// `a_Z` for further vertical components.
    pub z: BTreeMap<Component, i64>,
    pub swaps: Vec<(Component, Component)>,
    pub identity_involution: bool,
    pub splits: Option<bool>,
    pub locus: Option<Locus>,
    pub relabel: bool,
}

impl ModelOverrides {
    pub fn apply(
        &self,
        mut model: DegenerationModel,
    ) -> Result<DegenerationModel, DegenerationError> {
        if self.relabel {
            model = model.relabelled();
        }
        for &(x, y, v) in &self.itable {
            model = model.with_intersection(x, y, v);
        }
        for (&c, &a_z) in &self.z {
            let Component::OtherZ(k) = c else {
                return Err(DegenerationError::Parse(c.to_string()));
            };
            model = model.with_other_component(k, a_z);
        }
        if self.identity_involution {
            model = model.with_identity_involution();
        }
        for &(x, y) in &self.swaps {
            model = model.with_swap(x, y);
        }
        if self.splits == Some(false) {
            model = model.unsplit();
        }
        if let Some(locus) = self.locus {
            model = model.with_locus(locus);
        }
        Ok(model)
    }
}
