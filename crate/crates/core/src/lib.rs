//! Coherent states of the truncated harmonic oscillator and of its
//! supersymmetric partners, with the observables and entanglement
//! diagnostics built on them.

pub mod coherent;
pub mod entangle;
pub mod error;
pub mod fock;
pub mod numerics;
pub mod observables;
pub mod susy;

pub use error::{Error, Result};
