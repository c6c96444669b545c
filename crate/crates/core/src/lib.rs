//! Channel estimation for a fluid reconfigurable intelligent surface (FRIS)
//! assisted multi-user MISO uplink.
//!
//! The crate is organised bottom-up:
//!
//! - [`tensor`]: dense complex matrices and 3-/4-way tensors, Khatri-Rao and
//!   Kronecker products, the unfoldings of the received-signal tensor and
//!   rank-1 extraction (SVD and truncated HOSVD).
//! - [`model`]: scenario generation, i.e. channels, DFT phase and pilot
//!   matrices, the preset position grid, motion schedules with position
//!   errors, and synthesis of the noisy received signal.
//! - [`estimators`]: matched filtering, the least-squares filters for the
//!   combined channel and the motion-augmented channel, two- and three-factor
//!   Khatri-Rao factorization, scaling-ambiguity resolution and NMSE.
//! - [`harness`]: seeded Monte-Carlo sweeps over SNR or position error, CSV
//!   output and gnuplot script generation.

pub mod error;
pub mod estimators;
pub mod harness;
pub mod model;
pub mod tensor;

pub use error::{Error, Result};
pub use num_complex::Complex64;
