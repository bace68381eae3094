// Copyright 2026 nhbath Contributors
// SPDX-License-Identifier: Apache-2.0

//! Spontaneous emission of a two-level emitter coupled to the edge of a
//! semi-infinite lattice with uniform photon loss.
//!
//! The excited-state amplitude `c_a(t)` is computed two independent ways:
//!
//! * [`inversion`]: exact spectral assembly from the poles of the Laplace
//!   transform on both Riemann sheets plus the two Hankel branch-cut
//!   integrals, built on the closed forms in [`spectral`].
//! * [`lattice`]: direct time integration of the real-space lattice, the
//!   momentum-space Friedrichs-Lee system and the single-excitation Lindblad
//!   master equation.
//!
//! [`sweep`] locates sheet crossings and exceptional points (physical and
//! virtual) along loss-rate sweeps, maps the coupling regimes and finds the
//! loss rate that maximises the asymptotic decay rate.
//!
//! All rates are in the units of the hopping `J` supplied in [`ModelParams`].

pub mod error;
pub mod exec;
pub mod inversion;
pub mod lattice;
pub mod params;
pub mod quadrature;
pub mod spectral;
pub mod sweep;

pub use error::{Error, Result};
pub use exec::Execution;
pub use params::ModelParams;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
