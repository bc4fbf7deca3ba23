//! Exact computation of Berline-Vergne alpha values on faces of Tesler
//! polytopes, with brute-force Ehrhart polynomials as an independent check.
//!
//! The crate is organized bottom-up:
//!
//! - [`ratlinalg`]: exact rationals, matrices, inversion, interpolation.
//! - [`tesler`]: hook sums, `Tes_n(a)` / `PTes_n(a)`, facets, faces, vertices.
//! - [`cones`]: normal- and feasible-cone Gram matrices, and the
//!   edge-direction oracle that computes the latter without inversion.
//! - [`alpha`]: alpha values for faces of codimension 0 to 3, the closed-form
//!   case tables, and table verification.
//! - [`ehrhart`]: lattice-point counting, Ehrhart polynomials, face volumes,
//!   and McMullen's weighted face sums.

pub mod alpha;
pub mod cones;
pub mod ehrhart;
pub mod ratlinalg;
pub mod tesler;
