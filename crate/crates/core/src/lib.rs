//! Elementary quantum cloning machines built from CNOT and rotation gates.
//!
//! Simulation of the one- and two-operation copiers, the BH universal cloner
//! and the phase-covariant cloner, together with the preparation-angle solver
//! and a CNOT synthesizer for affine basis permutations.

pub mod cli;
pub mod error;
pub mod gates;
pub mod machines;
pub mod prepsolver;
pub mod qnum;
pub mod quadrature;
pub mod synth;

pub use error::{Error, Result};
