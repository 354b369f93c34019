//! Linear-response model of a four-mode optomechanical plaquette.
//!
//! Two optical modes `a1`, `a2` and two mechanical modes `b1`, `b2` are coupled
//! in a closed loop. Phase-correlated pumps imprint a synthetic flux on the
//! loop, which breaks time-reversal symmetry and makes the scattering between
//! the four ports nonreciprocal.
//!
//! The pipeline is:
//!
//! 1. [`model`]: physical parameters, classical steady state, linearization.
//! 2. [`dynamics`]: the 4×4 coefficient matrix `M`, stability, normal modes.
//! 3. [`scattering`]: `U(ω)`, `W(ω)` and `S(ω)` by direct inversion, plus the
//!    closed-form cofactor expressions in [`appendix`].
//! 4. [`routing`]: isolation, router classification, regime maps.
//! 5. [`sweep`]: declarative sweeps over one parameter.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod appendix;
pub mod dynamics;
mod error;
pub mod linalg;
pub mod model;
pub mod routing;
pub mod scattering;
pub mod sweep;

pub use error::{Error, Result};

pub use num_complex::Complex64;
