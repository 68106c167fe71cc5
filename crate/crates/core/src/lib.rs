//! Graph-parameter engine for frustration graphs of Pauli strings.
//!
//! A set of Pauli strings is characterized up to the relations that matter by its
//! frustration graph: vertices are strings, edges are anticommuting pairs. This
//! crate computes the two graph parameters that meet on that interface — the exact
//! weighted independence number `alpha(G, w)` on one side and the weighted beta
//! number `beta(G, w)` (the largest attainable value of `sum_i w_i <S_i>^2` over
//! quantum states) on the other — and decides whether they agree for every
//! nonnegative weight vector, i.e. whether the graph is hbar-perfect.
//!
//! The toolbox:
//!
//! - [`graph`]: bit-packed graphs up to 24 vertices, graph6 I/O, the perfection
//!   preserving operations (join, union, lexicographic product, vertex copy and
//!   split), induced-subgraph search and named fixtures.
//! - [`gf2`]: symplectic GF(2) machinery; every graph is realized as a set of
//!   Pauli strings of minimal length `rank_F2(A)/2`.
//! - [`stab`]: exact combinatorics of the stable set polytope STAB(G) — stable
//!   sets, `alpha`, facet enumeration by double description, facet classes,
//!   fractional packing and membership tests.
//! - [`beta`]: numerical brackets for `beta(G, w)` — see-saw lower bounds and
//!   symmetric-subspace (de Finetti) upper bounds with a rigorous error term.
//! - [`moment`]: the state-polynomial moment hierarchy and a first-order SDP
//!   solver; also the Lovasz number and the shadow-tomography SDPs.
//! - [`decider`]: the structural + numeric decision pipeline for hbar-perfectness
//!   and the census harness.
//! - [`apps`]: entanglement witnesses and estimates, shadow-tomography sample
//!   complexity brackets, uncertainty programs and ground-state energy bounds.

pub mod apps;
pub mod beta;
pub mod decider;
pub mod gf2;
pub mod graph;
pub mod linalg;
pub mod moment;
pub mod simplex;
pub mod stab;

pub use graph::{Graph, GraphError};
pub use gf2::{Gf2Matrix, PauliString, Realization};
pub use stab::{Facet, FacetClass, StabPolytope};

/// Exact nonnegative weights; facet normals and alpha computations stay rational.
pub type Rational = num_rational::BigRational;

/// Convenience: the all-ones rational weight vector.
pub fn ones(n: usize) -> Vec<Rational> {
    use num_traits::One;
    vec![Rational::one(); n]
}

/// Rational weights from integer entries.
pub fn weights_from_ints(ints: &[i64]) -> Vec<Rational> {
    ints.iter()
        .map(|&k| Rational::from_integer(k.into()))
        .collect()
}

/// Lossy conversion for the numerical solvers.
pub fn weights_to_f64(w: &[Rational]) -> Vec<f64> {
    use num_traits::ToPrimitive;
    w.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()
}
