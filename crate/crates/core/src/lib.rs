// Tolerance checks are written as `!(x < tol)` so that NaN fails them.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classify;
pub mod cli;
pub mod cohomology;
pub mod corners;
pub mod cutblow;
pub mod doc;
pub mod labelling;
pub mod lattice;
pub mod models;
