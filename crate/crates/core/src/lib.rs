//! Exact (−1)-curve combinatorics of del Pezzo surfaces, together with a symbolic
//! model of the precycle construction on their K3 double covers.
//!
//! The lattice engine, the enumerator and the incidence structures are generic over
//! the coefficient integer ([`LatticeInt`]); the plane-function side of the Tame
//! symbol and the span tests are generic over an exact field ([`ExactField`]).
//! The aliases below fix the usual choices.

pub mod combination;
pub mod counting;
pub mod cycles;
pub mod degeneration;
pub mod enumerate;
pub mod incidence;
pub mod lattice;
pub mod scalar;

pub use combination::Combination;
pub use counting::{generalized_point_condition, kontsevich_count, kontsevich_table, CountTable};
pub use cycles::tame::{tame_symbol, LinearForm, LinearFormFunction, TameSymbol};
pub use cycles::{
    build_xi, cocycle_check, decomposable_cycle, CurveFunction, FormalPrecycle, PointLocation,
    SurfacePoint,
};
pub use degeneration::{
    boundary_of_xi, indecomposability_witness, invariant_span, replay, solve_degree_constraint,
    solve_involution_constraints, Component, DegenerationModel, ModelOverrides,
};
pub use enumerate::{
    classify, enumerate_neg_one, orbit_seeds, type_census, verify_branch_lemma, weyl_closed,
    weyl_orbit, CurveKind, CurveType, NegOneCurve,
};
pub use incidence::{
    bitangent_pairs, build_graph, candidate_cycle_pairs, double_sixes, IncidenceGraph,
};
pub use lattice::{
    anticanonical_half_degree, branch_class, canonical_class, is_neg_one_class, pair,
    DelPezzoContext, DivisorClass,
};
pub use scalar::{ExactField, LatticeInt};

/// Divisor class with machine-word coefficients; every operation is overflow-checked.
pub type Class = DivisorClass<i64>;
/// Divisor class with arbitrary-size coefficients.
pub type BigClass = DivisorClass<num_bigint::BigInt>;
/// A certified (−1)-curve with machine-word coefficients.
pub type Curve = NegOneCurve<i64>;
/// Incidence graph over machine-word coefficients.
pub type Graph = IncidenceGraph<i64>;

/// Arbitrary-precision rationals, the default field for plane functions.
pub type Rational = num_rational::BigRational;
/// Word-sized rationals; adequate for small coefficients, panics on overflow.
pub type SmallRational = num_rational::Ratio<i64>;
/// Product of linear forms over [`Rational`].
pub type PlaneFunction = LinearFormFunction<Rational>;
/// Tame symbol over [`Rational`].
pub type Tame = TameSymbol<Rational>;

/// Number of (−1)-curves on a del Pezzo surface, indexed by degree 1..=9.
pub const NEG_ONE_COUNTS: [(u32, usize); 9] = [
    (9, 0),
    (8, 1),
    (7, 3),
    (6, 6),
    (5, 10),
    (4, 16),
    (3, 27),
    (2, 56),
    (1, 240),
];

/// Looks up the expected number of (−1)-curves in degree `degree`.
pub fn expected_neg_one_count(degree: u32) -> Option<usize> {
    NEG_ONE_COUNTS
        .iter()
        .find(|(d, _)| *d == degree)
        .map(|&(_, n)| n)
}
