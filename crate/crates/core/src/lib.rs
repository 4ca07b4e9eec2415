//! Desk-scale verified numerics for the spectral theory of the modular
//! surface: real-analytic Eisenstein series, Arthur truncation, regularized
//! integrals and their closed-form scalar identities, together with the
//! supporting p-adic Schwartz calculus, Mellin machinery, congruence-coset
//! normal forms and lattice-sum estimates.
//!
//! Everything is specialized to the rational field (the lattice-sum module
//! also handles the Gaussian field), where each constant in the theory has a
//! closed form that the test- and verification suites pin down numerically.

pub mod coset;
pub mod eisenstein;
pub mod error;
pub mod jet;
pub mod lattice;
pub mod mellin;
pub mod padic;
pub mod products;
pub mod regint;
pub mod report;
pub mod scalars;
pub mod special;
pub mod suites;

pub use error::{Error, Result};

pub type Cplx = num_complex::Complex64;
