//! Exact symbolic computation of holomorphic bivector fields and Poisson
//! structures on the local Calabi-Yau threefolds `W_{k1,k2} =
//! Tot(O(-k1) ⊕ O(-k2))` over the projective line.
//!
//! Everything is computed over the rationals with no rounding: sparse
//! Laurent polynomials in the chart coordinates, exact kernels of the
//! holomorphy constraints for sections of `Λ²T`, minimal module
//! presentations over the ring of global functions, Schouten-Nijenhuis
//! brackets and integrability, degeneracy loci, Casimir spaces, the
//! automorphism/embedding catalogs, and a `verify-paper` harness that
//! replays the reference results as machine-checked cases.

pub mod analysis;
pub mod catalog;
pub mod exactpoly;
pub mod linalg;
pub mod schouten;
pub mod sections;
pub mod symmetries;
pub mod threefold;
pub mod verify;

pub use exactpoly::{Monomial, Poly, Scalar, Var};
pub use sections::{BivectorField, Presentation, Relation};
pub use threefold::{Chart, ThreefoldSpec, TransitionMatrix};
