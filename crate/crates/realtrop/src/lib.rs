//! Exact tools for real tropical plane curves: oriented matroids, signed
//! Bergman fans, sign-indexed charts dual to signed regular marked
//! subdivisions, and the classification of singular curves of maximal
//! dimensional type.
//!
//! All arithmetic is exact rational. There is no floating point anywhere in
//! this crate: every decision (covector, membership, chart incidence) is a
//! sign or incidence question and tolerances would corrupt it.

pub mod bergman;
pub mod exactlin;
pub mod orientedmatroid;
pub mod singular;
pub mod tropcurve;

pub use exactlin::{QMatrix, Rat};
pub use orientedmatroid::{OrientedMatroid, Sign, SignVector, SignedCircuit};
