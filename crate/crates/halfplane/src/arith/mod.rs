//! Arithmetic substrate: finite fields, Galois rings, exact p-adic 2×2
//! matrices, and linear algebra over finite fields.

pub mod field;
pub mod galois;
pub mod linalg;
pub mod padic;

pub use field::{Fe, FiniteField};
pub use galois::{GaloisRing, GaloisRingElement};
pub use linalg::{kernel_basis, rank, Matrix};
pub use padic::{smith_valuations, PMat, PadicMatrix2x2, Rat};
