//! Pairwise intersection structure of the (−1)-curves of one degree.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::enumerate::{enumerate_neg_one, NegOneCurve};
use crate::lattice::{canonical_class, pair, DelPezzoContext, DivisorClass, LatticeError};
use crate::scalar::LatticeInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IncidenceError {
    #[error("operation needs a degree {expected} surface, got degree {actual}")]
    WrongDegree { expected: u32, actual: u32 },
    #[error("node {index} out of range for a graph on {len} curves")]
    NodeOutOfRange { index: usize, len: usize },
    #[error("curve {id} has {found} points, context has {expected}")]
    MixedContexts {
        id: usize,
        found: usize,
        expected: usize,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Curves of one degree together with all their pairwise intersection numbers.
#[derive(Debug, Clone)]
pub struct IncidenceGraph<T: LatticeInt> {
    degree: u32,
    nodes: Vec<NegOneCurve<T>>,
    matrix: Vec<Vec<T>>,
}

pub fn build_graph<T: LatticeInt>(
    ctx: DelPezzoContext,
    curves: Vec<NegOneCurve<T>>,
) -> Result<IncidenceGraph<T>, IncidenceError> {
    for c in &curves {
        if !c.class().fits(ctx) {
            return Err(IncidenceError::MixedContexts {
                id: c.id(),
                found: c.class().points(),
                expected: ctx.points(),
            });
        }
    }
    let matrix = curves
        .iter()
        .map(|x| {
            curves
                .iter()
                .map(|y| pair(x.class(), y.class()))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IncidenceGraph {
        degree: ctx.degree(),
        nodes: curves,
        matrix,
    })
}

impl<T: LatticeInt> IncidenceGraph<T> {
    /// Graph on the full enumeration of degree `ctx`.
    pub fn for_degree(ctx: DelPezzoContext) -> Result<Self, IncidenceError> {
        build_graph(ctx, enumerate_neg_one(ctx))
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[NegOneCurve<T>] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> Result<&NegOneCurve<T>, IncidenceError> {
        self.nodes.get(i).ok_or(IncidenceError::NodeOutOfRange {
            index: i,
            len: self.nodes.len(),
        })
    }

    /// Intersection number of nodes `i` and `j` (self-intersection `-1` on the
    /// diagonal).
    pub fn get(&self, i: usize, j: usize) -> Result<&T, IncidenceError> {
        self.node(i)?;
        self.node(j)?;
        Ok(&self.matrix[i][j])
    }

    /// Number of other curves meeting node `i`.
    pub fn meets_count(&self, i: usize) -> Result<usize, IncidenceError> {
        self.node(i)?;
        Ok(self.matrix[i]
            .iter()
            .enumerate()
            .filter(|&(j, v)| j != i && *v >= T::one())
            .count())
    }

    /// Counts of each off-diagonal value over unordered pairs.
    pub fn histogram(&self) -> BTreeMap<T, usize> {
        let mut h = BTreeMap::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                *h.entry(self.matrix[i][j].clone()).or_insert(0) += 1;
            }
        }
        h
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.len()).all(|i| (0..i).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }
}

/// Two (−1)-curves on a degree 2 surface lying over the same bitangent.
#[derive(Debug, Clone, Serialize)]
pub struct BitangentPair<T: LatticeInt> {
    pub first: NegOneCurve<T>,
    pub second: NegOneCurve<T>,
    pub intersection: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct BitangentReport<T: LatticeInt> {
    pub pairs: Vec<BitangentPair<T>>,
    /// Number of pairs of each (unordered) kind combination.
    pub composition: BTreeMap<String, usize>,
}

/// Splits the 56 curves of a degree 2 surface into the 28 orbits of
/// `D -> -K - D`.
pub fn bitangent_pairs<T: LatticeInt>(
    ctx: DelPezzoContext,
) -> Result<BitangentReport<T>, IncidenceError> {
    if ctx.degree() != 2 {
        return Err(IncidenceError::WrongDegree {
            expected: 2,
            actual: ctx.degree(),
        });
    }
    let curves = enumerate_neg_one::<T>(ctx);
    let minus_k = canonical_class::<T>(ctx).checked_neg()?;
    let index: HashMap<&DivisorClass<T>, usize> =
        curves.iter().map(|c| (c.class(), c.id())).collect();
    let mut pairs = Vec::new();
    let mut composition = BTreeMap::new();
    for c in &curves {
        let partner_class = minus_k.checked_sub(c.class())?;
        let Some(&j) = index.get(&partner_class) else {
            // unreachable for a complete enumeration; surfaces as a short pair list
            continue;
        };
        if c.id() < j {
            let other = &curves[j];
            let mut kinds = [c.kind(), other.kind()];
            kinds.sort();
            *composition
                .entry(format!("{}+{}", kinds[0], kinds[1]))
                .or_insert(0) += 1;
            pairs.push(BitangentPair {
                first: c.clone(),
                second: other.clone(),
                intersection: pair(c.class(), other.class())?,
            });
        }
    }
    Ok(BitangentReport { pairs, composition })
}

/// An unordered pair of curves that meet, i.e. the lattice-level support of a
/// cycle construction. Positions of the individual intersection points are not
/// lattice data, so they are always taken to be in general position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidatePair<T: LatticeInt> {
    pub i: usize,
    pub j: usize,
    pub multiplicity: T,
    pub generic_position_assumed: bool,
}

pub fn candidate_cycle_pairs<T: LatticeInt>(g: &IncidenceGraph<T>) -> Vec<CandidatePair<T>> {
    let mut out = Vec::new();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            let m = &g.matrix[i][j];
            if *m >= T::one() {
                out.push(CandidatePair {
                    i,
                    j,
                    multiplicity: m.clone(),
                    generic_position_assumed: true,
                });
            }
        }
    }
    out
}

/// A double-six: `first` is sorted, and `second[k]` is the unique line of the
/// other sextuple disjoint from `first[k]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DoubleSix {
    pub first: [usize; 6],
    pub second: [usize; 6],
}

/// Checks the double-six incidence pattern for two sextuples of node ids,
/// aligned so that `b[k]` is the partner of `a[k]`.
pub fn is_double_six<T: LatticeInt>(g: &IncidenceGraph<T>, a: &[usize; 6], b: &[usize; 6]) -> bool {
    let ok = |i: usize, j: usize, want: i64| g.get(i, j).is_ok_and(|v| *v == T::from_small(want));
    for x in 0..6 {
        for y in 0..6 {
            if x != y && !(ok(a[x], a[y], 0) && ok(b[x], b[y], 0)) {
                return false;
            }
            let want = if x == y { 0 } else { 1 };
            if !ok(a[x], b[y], want) {
                return false;
            }
        }
    }
    let all: BTreeSet<usize> = a.iter().chain(b).copied().collect();
    all.len() == 12
}

/// All double-sixes among the 27 lines of a cubic surface.
pub fn double_sixes(ctx: DelPezzoContext) -> Result<Vec<DoubleSix>, IncidenceError> {
    if ctx.degree() != 3 {
        return Err(IncidenceError::WrongDegree {
            expected: 3,
            actual: ctx.degree(),
        });
    }
    let g = IncidenceGraph::<i64>::for_degree(ctx)?;
    let n = g.len();
    let disjoint = |i: usize, j: usize| g.matrix[i][j] == 0;

    // every sextuple of pairwise disjoint lines, in lexicographic order
    let mut sixes: Vec<[usize; 6]> = Vec::new();
    let mut stack = Vec::with_capacity(6);
    fn extend(
        n: usize,
        start: usize,
        stack: &mut Vec<usize>,
        disjoint: &dyn Fn(usize, usize) -> bool,
        out: &mut Vec<[usize; 6]>,
    ) {
        if stack.len() == 6 {
            out.push(stack.as_slice().try_into().expect("length checked"));
            return;
        }
        for v in start..n {
            if stack.iter().all(|&u| disjoint(u, v)) {
                stack.push(v);
                extend(n, v + 1, stack, disjoint, out);
                stack.pop();
            }
        }
    }
    extend(n, 0, &mut stack, &disjoint, &mut sixes);

    let mut found = BTreeSet::new();
    for a in &sixes {
        // partner of a[k]: meets every a[m], m != k, and misses a[k]
        let mut partners = Vec::with_capacity(6);
        for k in 0..6 {
            let cands: Vec<usize> = (0..n)
                .filter(|&v| !a.contains(&v))
                .filter(|&v| (0..6).all(|m| g.matrix[a[m]][v] == if m == k { 0 } else { 1 }))
                .collect();
            partners.push(cands);
        }
        let mut choice = [0usize; 6];
        collect_partners(&g, a, &partners, 0, &mut choice, &mut found);
    }
    Ok(found.into_iter().collect())
}

fn collect_partners<T: LatticeInt>(
    g: &IncidenceGraph<T>,
    a: &[usize; 6],
    partners: &[Vec<usize>],
    k: usize,
    choice: &mut [usize; 6],
    found: &mut BTreeSet<DoubleSix>,
) {
    if k == 6 {
        if is_double_six(g, a, choice) {
            found.insert(canonical_double_six(a, choice));
        }
        return;
    }
    for &v in &partners[k] {
        choice[k] = v;
        collect_partners(g, a, partners, k + 1, choice, found);
    }
}

fn canonical_double_six(a: &[usize; 6], b: &[usize; 6]) -> DoubleSix {
    let sorted_with = |x: &[usize; 6], y: &[usize; 6]| {
        let mut zipped: Vec<(usize, usize)> = x.iter().copied().zip(y.iter().copied()).collect();
        zipped.sort();
        let first: [usize; 6] = std::array::from_fn(|k| zipped[k].0);
        let second: [usize; 6] = std::array::from_fn(|k| zipped[k].1);
        DoubleSix { first, second }
    };
    let one = sorted_with(a, b);
    let two = sorted_with(b, a);
    let mut sb = one.second;
    sb.sort();
    if one.first <= sb {
        one
    } else {
        two
    }
}
