//! Additive prime decompositions over the integers and the Gaussian integers.

pub mod diophantine;
pub mod gaussdecomp;
pub mod golden;
pub mod primes;
pub mod ratdecomp;
pub mod zcore;

mod parallel;

pub use zcore::{GaussianInt, Parity, Region, Unit};
