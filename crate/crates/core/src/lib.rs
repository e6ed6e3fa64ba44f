//! Numerical toolkit for nonlocal Sobolev analysis over p-Lévy kernels:
//! builds the critical Young function of a kernel, computes Orlicz/Luxemburg
//! norms and nonlocal Gagliardo-type seminorms, and verifies the associated
//! Sobolev, Poincaré and rearrangement inequalities with explicit constants
//! at desk scale.
//!
//! Module map:
//! - [`kernels`]: p-Lévy kernels ν, tail masses, the profile w, ν*, ν^#, κ,
//!   and the inverse problem φ → ν
//! - [`young`]: Young-function calculus (critical function, conjugate,
//!   max/min/minorant combination, growth constant θ)
//! - [`orlicz`]: modulars, Luxemburg norms, embedding constants
//! - [`fields`]: grid functions, nonlocal/gradient seminorms, K_{d,p},
//!   rearrangement, the s → 1 limit check
//! - [`levelset`]: dyadic decompositions and the proof-chain certificates
//! - [`verify`]: end-to-end inequality reports
//! - [`corpus`]: golden fixtures and the deterministic random corpus

pub mod corpus;
pub mod curve;
pub mod error;
pub mod fields;
pub mod kernels;
pub mod levelset;
pub mod orlicz;
pub mod quadrature;
pub mod verify;
pub mod young;

pub use error::CoreError;
