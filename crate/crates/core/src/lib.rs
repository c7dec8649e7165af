//! Circulant Hadamard matrices and Hadamard full propelinear codes.
//!
//! The crate is layered bottom-up: [`gf2`] (vectors, permutations, rank and
//! kernel), [`poly`] (the ring F2[x]/(x^N+1)), [`hadamard`] (±1 matrices and
//! fixtures), [`codes`] (Hadamard-code recognition and structural bounds),
//! [`propelinear`] (the `*` operation and its checks), [`circulant`] (the
//! circulant-generator to HFP-code correspondence) and [`search`]
//! (exhaustive first-row searches).

pub mod circulant;
pub mod codes;
pub mod gf2;
pub mod hadamard;
pub mod poly;
pub mod propelinear;
pub mod search;

pub use gf2::{BinaryCode, BitVector, Permutation};
pub use poly::{Poly, RingElement};
