//! Two ultracold particles in an isotropic harmonic trap with reactive
//! (absorbing) short-range interactions.
//!
//! The crate computes complex trap eigenenergies for a contact pseudopotential
//! with complex scattering length, for an absorbing square well embedded in the
//! trap, and converts them into lifetimes and rate constants for real molecules.
//!
//! Units: unless stated otherwise lengths are in oscillator lengths
//! `sqrt(hbar / (mu * omega))`, energies in `hbar * omega` and times in `1 / omega`.

pub mod aqw;
pub mod cli;
pub mod contact;
pub mod croots;
pub mod decay;
pub mod error;
pub mod physunits;
pub mod quadrature;
pub mod specfun;
pub mod trapwell;

pub use error::{Error, Result};
pub use num_complex::Complex64;
