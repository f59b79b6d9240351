//! Low-thrust multi-target tour design and closed-loop guidance.
//!
//! The crate is `no_std` (with `alloc`). It covers the analytic reference
//! generator (Edelbaum transfers extended with drag, eclipses and duty ratio,
//! J2 drift-orbit RAAN matching, constrained tour optimization) and the
//! osculating-dynamics validation layer (Ruggiero, Δv-Law and Q-Law guidance,
//! guided propagation, particle-swarm weight tuning).
//!
//! Units: km, s, kg, rad unless a field says otherwise. Epochs are seconds
//! since J2000.0 (2000-01-01T12:00:00).
#![no_std]
// Whenever std is anywhere in the build graph its inherent float methods
// shadow `math::Float`, which then looks unused.
#![allow(unused_imports)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod astro;
pub mod edelbaum;
mod error;
pub mod guidance;
pub mod math;
pub mod propagator;
pub mod pso;
pub mod raan_match;
pub mod tour;

pub use error::{Error, Result};
