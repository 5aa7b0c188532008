//! Regularized vacuum field energy densities at desk scale.
//!
//! Three solvers share one numerical core:
//!
//! - [`boundary`]: renormalized ⟨E²⟩/⟨B²⟩ profiles near a perfectly
//!   conducting wall with a time-splitting (exponential frequency)
//!   cutoff — closed forms, their extrema, the z⁻⁴ far-field law, and
//!   the vanishing half-line integral.
//! - [`point_source`]: electric and magnetic energy densities around a
//!   point-like polarizable source at finite cutoff, the far-zone
//!   r⁻⁷ coefficients, the distributional series at the source, and
//!   the exact electric/magnetic self-energy cancellation.
//! - [`cavity`]: mode sums for a 1D cavity with one harmonically bound,
//!   quantum-mechanical mirror — density change near the mobile wall,
//!   wall excitation, position distributions, statistically averaged
//!   (smeared) profiles, and the renormalized free-field baseline.
//!
//! Supporting modules: [`config`] (constants, dimensionless scaling,
//! `key = value` run configuration), [`quadrature`] (tanh-sinh panels,
//! semi-infinite maps, Richardson extrapolation), and [`summation`]
//! (compensated deterministic reductions).
//!
//! Everything computes with ħ = c = 1 in per-module length units;
//! SI conversion factors are provided at the interface.

pub mod boundary;
pub mod cavity;
pub mod config;
pub mod error;
pub mod point_source;
pub mod quadrature;
pub mod summation;

pub use error::{Error, Result};
