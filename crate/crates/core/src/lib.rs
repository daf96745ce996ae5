//! Exact computations around the ideal of pairs of a matroid realization.

pub mod field;
pub mod linalg;
pub mod matroid;
pub mod pairs;
pub mod poly;
pub mod betti;
pub mod graded;
pub mod groebner;
pub mod primes;
pub mod derivations;
pub mod fixtures;
