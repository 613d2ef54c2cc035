//! Exact symbolic calculus for closed forms, Lie algebra actions and homotopy
//! moment maps on model manifolds `T^a x R^b`.
//!
//! Everything is computed over the rationals: functions are trigonometric
//! polynomials with rational coefficients, so every identity checked by this
//! crate is checked exactly, with zero tolerance.
//!
//! The main layers, bottom up:
//!
//! - [`manifold`], [`scalar`]: the model manifold and its exact function ring;
//! - [`form`]: differential forms, vector fields and the full Cartan calculus;
//! - [`derham`]: constructive exactness decisions (primitive or harmonic class);
//! - [`linalg`], [`lie`]: rational linear algebra and Chevalley-Eilenberg
//!   cohomology of finite-dimensional Lie algebras from structure constants;
//! - [`equivariant`]: actions, contraction cochains, the total complex and the
//!   cone complex;
//! - [`moment`]: homotopy moment maps, their two verification routes,
//!   ansatz-based solving and obstruction theory;
//! - [`cartan`]: the Cartan model, cocycle checks and induced moment maps;
//! - [`equivalence`]: equivalences of moment maps, isotopy witnesses and the
//!   polynomial-in-`t` homotopies connecting inner-equivalent moment maps.

pub mod cartan;
pub mod corpus;
pub mod derham;
pub mod equivalence;
pub mod equivariant;
pub mod form;
pub mod lie;
pub mod linalg;
pub mod manifold;
pub mod moment;
pub mod random;
pub mod scalar;

pub use manifold::{Coordinate, ModelManifold, Param, Point, QuarterTurn};
pub use scalar::{rat, rat_int, Rational, ScalarFn};
