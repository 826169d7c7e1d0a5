//! Rényi entanglement entropies of intervals in free, translation-invariant
//! fermionic chains and of fragments of fermionic ladders.
//!
//! Two routes are provided and cross-checked against each other:
//!
//! * exact entropies from the spectrum of the restricted two-point
//!   correlation matrix ([`correl`], [`spectra`]);
//! * the large-`L` expansion `S = A L + B log L + C` whose coefficients are
//!   evaluated from a piecewise-constant occupation density by Fisher–Hartwig
//!   asymptotics ([`asymptotics`]).
//!
//! [`ladder`] builds ground-state densities of prismatic ladders from their
//! couplings and [`harness`] holds fitting, table reproduction and reporting.

pub mod asymptotics;
pub mod config;
pub mod correl;
pub mod error;
pub mod harness;
pub mod ladder;
pub mod occupation;
pub mod quadrature;
pub mod special;
pub mod spectra;

pub use asymptotics::{ExpansionCoefficients, JumpData};
pub use correl::CorrelationMatrix;
pub use error::{Error, Result};
pub use ladder::{BandSet, LadderSpec};
pub use occupation::{ModeSet, OccupationDensity, RenyiOrder};
pub use spectra::SpectrumResult;
