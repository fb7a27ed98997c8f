//! Exact analysis of projective toric varieties attached to lattice point
//! configurations: line coverings, fibrations into joins, dual defect, and
//! discriminant triviality.
//!
//! Everything is computed in arbitrary-precision integer and rational
//! arithmetic; there is no floating point and no tolerance parameter
//! anywhere. The combinatorial pipeline (Cayley structures -> elementary
//! fibrations -> defect) is cross-checked by an independent Hessian-rank
//! oracle.
//!
//! With the default `parallel` feature the embarrassingly parallel inner
//! loops (oracle trials, per-vertex semigroup checks, candidate
//! enumeration) run on rayon; without it the same code runs sequentially.

pub mod cayley;
pub mod cone;
pub mod defect;
#[doc(hidden)]
pub mod exec;
pub mod fan;
pub mod fixtures;
pub mod hessian;
pub mod lattice;
pub mod polytope;

pub use cayley::{enumerate_cayley_structures, verify_cayley, CayleyOutcome, CayleyStructure};
pub use cone::{check_embedding_hypothesis, hilbert_basis, vertex_cone, Cone, EmbeddingReport};
pub use defect::{
    discriminant_verdict, dual_defect, elementary_fibrations, fiber_defect, join_decomposition,
    lattice_defect, DefectReport, DualDefect, StructureReport, Verdict,
};
pub use fan::{
    cartier_multiples, check_fibration, fiber_and_base, fiber_reduced, line_criterion,
    normal_fan, orbit_curve_degree, polarization_offsets, CartierProfile, Fan,
};
pub use hessian::{certify_agreement, hessian_defect, AgreementVerdict, HessianEstimate, OracleConfig};
pub use lattice::{
    primitive_generator, quotient_map, smith_normal_form, Int, IntMatrix, IntVector, LatticeMap,
    Rat, RatVector, Sublattice,
};
pub use polytope::{convex_hull, strictly_comb_isomorphic, LatticePolytope, PointConfiguration};
