//! Tame symbols of rational functions on the plane that are products of linear
//! forms.
//!
//! For `f, g` such products and `Z` a line in their support, the component of
//! `tau(f, g)` along `Z` is the restriction to `Z` of
//! `(-1)^(ord_Z f * ord_Z g) f^(ord_Z g) / g^(ord_Z f)`, where the powers of the
//! form defining `Z` cancel before restricting. Restrictions are computed exactly
//! through a fixed parametrisation of each line, so the divisor of every component
//! is known point by point and the cocycle condition can be checked directly.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::{CurveFunction, FormalPrecycle};
use crate::scalar::ExactField;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TameError {
    #[error("linear form with all coefficients zero")]
    ZeroForm,
    #[error("factors {0} and {1} of one function are proportional")]
    ProportionalFactors(String, String),
    #[error("function has total degree {0}; only degree 0 products define functions on the plane")]
    NotDegreeZero(i64),
    #[error("support lines {0}, {1}, {2} are concurrent")]
    Concurrent(String, String, String),
    #[error("cannot parse linear form factor {0:?}")]
    Parse(String),
}

/// `aX + bY + cZ` on the projective plane.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearForm<F> {
    coeffs: [F; 3],
}

impl<F: ExactField> LinearForm<F> {
    pub fn new(a: F, b: F, c: F) -> Result<Self, TameError> {
        if a.is_zero() && b.is_zero() && c.is_zero() {
            return Err(TameError::ZeroForm);
        }
        Ok(Self { coeffs: [a, b, c] })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self, TameError> {
        Self::new(F::from_int(a), F::from_int(b), F::from_int(c))
    }

    /// Parses `"a,b,c"`; coefficients may be rationals such as `1/2`.
    pub fn parse(text: &str) -> Result<Self, TameError> {
        let bad = || TameError::Parse(text.to_string());
        let parts: Vec<F> = text
            .split(',')
            .map(|t| parse_scalar(t.trim()).ok_or_else(bad))
            .collect::<Result<_, _>>()?;
        let [a, b, c]: [F; 3] = parts.try_into().map_err(|_| bad())?;
        Self::new(a, b, c)
    }

    pub fn coeffs(&self) -> &[F; 3] {
        &self.coeffs
    }

    pub fn eval(&self, p: &[F; 3]) -> F {
        self.coeffs
            .iter()
            .zip(p)
            .fold(F::zero(), |acc, (c, x)| acc + c.clone() * x.clone())
    }

    /// `(scale, form)` with `self = scale * form` and the first nonzero
    /// coefficient of `form` equal to 1.
    pub fn normalized(&self) -> (F, Self) {
        let scale = first_nonzero(&self.coeffs).expect("forms are nonzero");
        let coeffs = self.coeffs.clone().map(|c| c / scale.clone());
        (scale, Self { coeffs })
    }

    pub fn is_proportional(&self, other: &Self) -> bool {
        cross(&self.coeffs, &other.coeffs)
            .iter()
            .all(|c| c.is_zero())
    }
}

impl<F: ExactField> fmt::Display for LinearForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = &self.coeffs;
        write!(f, "({a},{b},{c})")
    }
}

/// Accepts `"p/q"` and bare integers `"p"`.
fn parse_scalar<F: ExactField>(t: &str) -> Option<F> {
    let parsed = if t.contains('/') {
        F::from_str_radix(t, 10)
    } else {
        F::from_str_radix(&format!("{t}/1"), 10)
    };
    parsed.ok()
}

fn first_nonzero<F: ExactField>(v: &[F]) -> Option<F> {
    v.iter().find(|c| !c.is_zero()).cloned()
}

fn cross<F: ExactField>(x: &[F; 3], y: &[F; 3]) -> [F; 3] {
    let m = |i: usize, j: usize| x[i].clone() * y[j].clone() - x[j].clone() * y[i].clone();
    [m(1, 2), m(2, 0), m(0, 1)]
}

fn det3<F: ExactField>(x: &[F; 3], y: &[F; 3], z: &[F; 3]) -> F {
    let c = cross(y, z);
    x.iter()
        .zip(&c)
        .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

/// Canonical text for a point of the plane, scaled so its first nonzero
/// coordinate is 1.
pub fn point_label<F: ExactField>(p: &[F; 3]) -> String {
    let s = first_nonzero(p).expect("points are nonzero");
    let [x, y, z] = p.clone().map(|c| c / s.clone());
    format!("[{x}:{y}:{z}]")
}

/// Product of powers of pairwise non-proportional linear forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearFormFunction<F> {
    factors: Vec<(LinearForm<F>, i64)>,
}

impl<F: ExactField> LinearFormFunction<F> {
    /// Zero exponents are dropped.
    pub fn new(factors: Vec<(LinearForm<F>, i64)>) -> Result<Self, TameError> {
        let factors: Vec<_> = factors.into_iter().filter(|(_, e)| *e != 0).collect();
        for (i, (x, _)) in factors.iter().enumerate() {
            for (y, _) in &factors[i + 1..] {
                if x.is_proportional(y) {
                    return Err(TameError::ProportionalFactors(x.to_string(), y.to_string()));
                }
            }
        }
        Ok(Self { factors })
    }

    /// The empty product.
    pub fn one() -> Self {
        Self {
            factors: Vec::new(),
        }
    }

    /// Parses factors written `"a,b,c"` or `"a,b,c^e"`.
    pub fn parse_factors<'a>(items: impl IntoIterator<Item = &'a str>) -> Result<Self, TameError> {
        let factors = items
            .into_iter()
            .map(|item| {
                let (form, exp) = match item.split_once('^') {
                    Some((form, exp)) => (
                        form,
                        exp.trim()
                            .parse::<i64>()
                            .map_err(|_| TameError::Parse(item.to_string()))?,
                    ),
                    None => (item, 1),
                };
                Ok((LinearForm::parse(form)?, exp))
            })
            .collect::<Result<Vec<_>, TameError>>()?;
        Self::new(factors)
    }

    pub fn factors(&self) -> &[(LinearForm<F>, i64)] {
        &self.factors
    }

    /// Total degree as a homogeneous expression.
    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    /// Exponent of the factor proportional to `line`, with that factor.
    fn factor_along(&self, line: &LinearForm<F>) -> Option<&(LinearForm<F>, i64)> {
        self.factors.iter().find(|(l, _)| l.is_proportional(line))
    }

    pub fn order_along(&self, line: &LinearForm<F>) -> i64 {
        self.factor_along(line).map_or(0, |(_, e)| *e)
    }
}

/// A rational function on a line, written in the line's parameters `(s, t)` as
/// `constant * prod (s + c t)^e` or `t^e`; each binary form is stored as its
/// normalised coefficient pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedFunction<F> {
    constant: F,
    factors: BTreeMap<[F; 2], i64>,
}

impl<F: ExactField> RestrictedFunction<F> {
    pub fn one() -> Self {
        Self {
            constant: F::one(),
            factors: BTreeMap::new(),
        }
    }

    pub fn constant(&self) -> &F {
        &self.constant
    }

    pub fn factors(&self) -> &BTreeMap<[F; 2], i64> {
        &self.factors
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant.is_one()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.constant = out.constant * other.constant.clone();
        for (k, e) in &other.factors {
            out.add_factor(k.clone(), *e);
        }
        out
    }

    fn add_factor(&mut self, key: [F; 2], exp: i64) {
        let entry = self.factors.entry(key.clone()).or_insert(0);
        *entry += exp;
        if *entry == 0 {
            self.factors.remove(&key);
        }
    }

    /// Value at the parameter `(s, t)`; `None` at a zero or pole.
    pub fn eval(&self, s: &F, t: &F) -> Option<F> {
        let mut acc = self.constant.clone();
        for ([p, q], e) in &self.factors {
            let v = p.clone() * s.clone() + q.clone() * t.clone();
            if v.is_zero() {
                return None;
            }
            acc = acc * v.powi(*e);
        }
        Some(acc)
    }
}

/// Parametrisation `s*u + t*v` of a line: solve for the coordinate whose
/// coefficient has the largest absolute value (first such on ties) and keep the
/// other two as parameters.
pub fn line_parametrization<F: ExactField>(line: &LinearForm<F>) -> ([F; 3], [F; 3]) {
    let c = line.coeffs();
    let k = (0..3).fold(
        0,
        |best, i| if c[i].abs() > c[best].abs() { i } else { best },
    );
    let free: Vec<usize> = (0..3).filter(|&i| i != k).collect();
    let basis = |i: usize| {
        let mut p: [F; 3] = std::array::from_fn(|_| F::zero());
        p[i] = F::one();
        p[k] = -(c[i].clone() / c[k].clone());
        p
    };
    (basis(free[0]), basis(free[1]))
}

/// The part of `tau(f, g)` carried by one support line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TameComponent<F> {
    /// Normalised form of the line.
    pub line: LinearForm<F>,
    pub order_f: i64,
    pub order_g: i64,
    pub function: RestrictedFunction<F>,
    /// Divisor of `function`, keyed by [`point_label`].
    pub divisor: BTreeMap<String, i64>,
}

impl<F: ExactField> TameComponent<F> {
    pub fn label(&self) -> String {
        format!("Z{}", self.line)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TameSymbol<F> {
    components: Vec<TameComponent<F>>,
}

impl<F: ExactField> TameSymbol<F> {
    pub fn components(&self) -> &[TameComponent<F>] {
        &self.components
    }

    pub fn component(&self, line: &LinearForm<F>) -> Option<&TameComponent<F>> {
        self.components
            .iter()
            .find(|c| c.line.is_proportional(line))
    }

    /// Divisor-level view as a precycle, one term per component.
    pub fn to_precycle(&self) -> FormalPrecycle {
        let mut z = FormalPrecycle::new();
        for c in &self.components {
            let f = CurveFunction::new(c.divisor.clone(), None)
                .expect("restricted functions have degree 0");
            z.push(c.label(), f);
        }
        z
    }
}

#[derive(Serialize)]
pub struct TameComponentReport {
    pub line: String,
    pub order_f: i64,
    pub order_g: i64,
    pub constant: String,
    pub divisor: BTreeMap<String, i64>,
}

impl<F: ExactField> From<&TameComponent<F>> for TameComponentReport {
    fn from(c: &TameComponent<F>) -> Self {
        Self {
            line: c.label(),
            order_f: c.order_f,
            order_g: c.order_g,
            constant: c.function.constant.to_string(),
            divisor: c.divisor.clone(),
        }
    }
}

struct Support<'a, F> {
    line: LinearForm<F>,
    in_f: Option<&'a (LinearForm<F>, i64)>,
    in_g: Option<&'a (LinearForm<F>, i64)>,
}

/// Tame symbol `tau(f, g)`. Components whose function is identically 1 are
/// omitted.
pub fn tame_symbol<F: ExactField>(
    f: &LinearFormFunction<F>,
    g: &LinearFormFunction<F>,
) -> Result<TameSymbol<F>, TameError> {
    for h in [f, g] {
        if h.degree() != 0 {
            return Err(TameError::NotDegreeZero(h.degree()));
        }
    }
    let mut lines: BTreeMap<LinearForm<F>, ()> = BTreeMap::new();
    for (l, _) in f.factors.iter().chain(&g.factors) {
        lines.insert(l.normalized().1, ());
    }
    let support: Vec<Support<'_, F>> = lines
        .into_keys()
        .map(|line| Support {
            in_f: f.factor_along(&line),
            in_g: g.factor_along(&line),
            line,
        })
        .collect();
    check_general_position(&support)?;

    let mut components = Vec::new();
    for z in &support {
        let a = z.in_f.map_or(0, |(_, e)| *e);
        let b = z.in_g.map_or(0, |(_, e)| *e);
        let mut function = RestrictedFunction::one();
        if (a * b) % 2 != 0 {
            function.constant = -F::one();
        }
        if let (Some((lf, _)), Some((lg, _))) = (z.in_f, z.in_g) {
            // f^b / g^a contains (lf / lg)^(ab) along Z, a constant
            let idx = (0..3)
                .find(|&i| !lf.coeffs[i].is_zero())
                .expect("nonzero form");
            let lambda = lg.coeffs[idx].clone() / lf.coeffs[idx].clone();
            function.constant = function.constant * lambda.powi(-(a * b));
        }
        let (u, v) = line_parametrization(&z.line);
        let mut divisor: BTreeMap<String, i64> = BTreeMap::new();
        let others = f
            .factors
            .iter()
            .map(|(w, e)| (w, e * b))
            .chain(g.factors.iter().map(|(w, e)| (w, -e * a)));
        for (w, exp) in others {
            if exp == 0 || w.is_proportional(&z.line) {
                continue;
            }
            let alpha = w.eval(&u);
            let beta = w.eval(&v);
            let (scale, key) = if alpha.is_zero() {
                (beta.clone(), [F::zero(), F::one()])
            } else {
                (alpha.clone(), [F::one(), beta.clone() / alpha.clone()])
            };
            // alpha*s + beta*t vanishes at (s, t) = (beta, -alpha)
            let root: [F; 3] =
                std::array::from_fn(|i| beta.clone() * u[i].clone() - alpha.clone() * v[i].clone());
            function.constant = function.constant * scale.powi(exp);
            function.add_factor(key, exp);
            let entry = divisor.entry(point_label(&root)).or_insert(0);
            *entry += exp;
        }
        divisor.retain(|_, e| *e != 0);
        if function.is_one() {
            continue;
        }
        components.push(TameComponent {
            line: z.line.clone(),
            order_f: a,
            order_g: b,
            function,
            divisor,
        });
    }
    Ok(TameSymbol { components })
}

fn check_general_position<F: ExactField>(support: &[Support<'_, F>]) -> Result<(), TameError> {
    let n = support.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (x, y, z) = (&support[i].line, &support[j].line, &support[k].line);
                if det3(&x.coeffs, &y.coeffs, &z.coeffs).is_zero() {
                    return Err(TameError::Concurrent(
                        x.to_string(),
                        y.to_string(),
                        z.to_string(),
                    ));
                }
            }
        }
    }
    Ok(())
}
