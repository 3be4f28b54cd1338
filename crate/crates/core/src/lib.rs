//! Treating-interference-as-noise analysis for compound Gaussian interference
//! channels in the generalized degrees of freedom (GDoF) regime.
//!
//! The crate is `no_std` (with `alloc`); all region, graph and power-control
//! computations use exact rationals. Only finite-SNR rate evaluation uses
//! floating point.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod channel;
pub mod fixtures;
pub mod gdof;
pub mod graph;
pub mod oracle;
pub mod power;
mod lp;
pub mod rational;
pub mod region;
pub mod snr;

pub use channel::{CompoundChannel, RegularChannel, TinCheck};
pub use gdof::GdofTuple;
pub use rational::Q;
