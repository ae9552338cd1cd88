//! Field-point constructions for versal families of reductive groups.
//!
//! The crate enumerates the finite classification data (root data of bounded
//! rank, small finite groups, homomorphisms into based automorphism groups),
//! builds and verifies points of the family of finite étale algebras with a
//! group action, solves 1-cocycle equations with nonabelian coefficients,
//! realizes twisted forms of `SL_n`, `PGL_n` and tori as fixed-point groups over
//! finite fields, and assembles all of it into a catalog.

pub mod algebra;
pub mod catalog;
pub mod descent;
pub mod error;
pub mod etale;
pub mod groups;
pub mod root_data;

pub use error::{Error, Result};
