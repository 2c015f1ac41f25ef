//! Phase statistics of ζ′ at the zeros of the Riemann zeta function.
//!
//! The argument of ζ′(1/2 + iγ) is defined by continuous variation along the
//! path 4 → 4 + iγ → 1/2 + iγ. This crate evaluates every special function it
//! needs from scratch, tracks that argument, finds or ingests zeros, and turns
//! the results into normalized statistics and phase portraits.

pub mod argtrack;
pub mod error;
pub mod fmt;
pub mod phaseplot;
pub mod special;
pub mod stats;
pub mod zeta;
pub mod zeros;

pub use error::{Error, Result};

/// Complex number in double precision.
pub type ComplexValue = num_complex::Complex64;
