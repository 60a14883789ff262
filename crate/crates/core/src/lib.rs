//! Mechanical checks of no-hidden-variables constructions: Pauli parity
//! proofs, Kochen-Specker ray colorings, a single-spin hidden-variable
//! model, and the three-spin GHZ argument.

pub mod assign;
pub mod bell2d;
pub mod ks;
pub mod pauli;
pub mod qverify;
pub mod sign;

pub use sign::Sign;
