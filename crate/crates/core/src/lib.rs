//! Exact torus localization for equivariant open Gromov-Witten invariants of
//! (CP^2m, RP^2m) and Welschinger counts of real rational plane curves.

pub mod algebra;
pub mod cli;
pub mod cache;
pub mod correlators;
pub mod descendents;
pub mod invariants;
pub mod profiles;
pub mod selftest;
pub mod series;
pub mod wdvv;
