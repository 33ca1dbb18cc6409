//! Executable constructions around combinatorially rich sets of integers.
//!
//! The crate builds divisibility blocks by iterated pigeonhole refinement,
//! solves integer systems `A x = (a, ..., a)` exactly, searches for witnesses
//! `(a, H)` with `a + Σ_{t∈H} f(t) ∈ A`, and transports such witnesses from a
//! set `B ⊆ ℤ` to its matrix preimage `{y ∈ ℤ^v : A y ∈ B^u}`. All arithmetic
//! is arbitrary precision.

pub mod blocks;
pub mod chain;
pub mod error;
pub mod experiment;
pub mod linalg;
pub mod numeric;
pub mod sequences;
pub mod sets;
pub mod transform;
pub mod witness;

pub use error::{Error, Result};
