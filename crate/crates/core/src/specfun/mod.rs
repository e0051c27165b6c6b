//! Complex-argument special functions: Gamma and friends, and the confluent
//! hypergeometric functions of Kummer (M) and Tricomi (U).
//!
//! All functions are pure and thread-safe.

mod dd;
mod gamma;
mod hypergeometric;

pub use gamma::{cdigamma, cgamma, clgamma, crgamma, is_nonpositive_integer, POLE_TOLERANCE};
pub use hypergeometric::{
    kummer_m, kummer_m_derivative, tricomi_u, tricomi_u_asymptotic, tricomi_u_connection,
    tricomi_u_derivative,
};
