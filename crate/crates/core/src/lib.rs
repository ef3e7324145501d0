//! Exact-arithmetic workbench for rational dynamical systems on affine space over Q.
//!
//! The crate is layered bottom-up:
//!
//! - [`exactalg`]: sparse multivariate polynomials, normalized rational functions,
//!   gcd, substitution, Jacobian rank and exact linear algebra.
//! - [`dynsys`]: dynamical systems `φ: Aⁿ ⇢ Aⁿ`, iteration, products, pullback and
//!   degree growth.
//! - [`invsearch`]: bounded-degree search for invariant rational functions and the
//!   cartesian-square check.
//! - [`translation`]: evidence for translational structure, the monomial lattice
//!   oracle and leading-coefficient normalization of polynomial sequences.

pub mod dynsys;
pub mod error;
pub mod exactalg;
pub mod invsearch;
pub mod translation;

pub use error::{Error, Result};
