//! Bell–CHSH correlations of a spin singlet carried by two counter-propagating
//! Gaussian Dirac wavepackets and sampled by planar detectors at z = ±Z.
//!
//! All quantities use natural units ħ = m = c = 1. The closed-form results
//! depend only on ζ = Z/d and κ = Pd; the quadrature oracle in
//! [`correlator::correlator_numeric`] evaluates the windowed correlator
//! directly from the two-particle amplitude.

pub mod chsh;
pub mod correlator;
pub mod entangled;
pub mod error;
pub mod quadrature;
pub mod spinor;
pub mod sweep;
pub mod units;
pub mod validation;
pub mod wavepacket;

pub use chsh::{AnalyzerSettings, BellDecomposition, BellValue, CrossingScan, Evaluation};
pub use correlator::{CorrelatorValue, Method, NumericOptions};
pub use entangled::{DetectorWindow, TwoParticleAmplitude, WindowProfile};
pub use error::{Error, Result};
pub use quadrature::{QuadResult, QuadratureSpec};
pub use spinor::{Matrix4, SpinLabel, SpinMode, Spinor4, UnitVector3};
pub use sweep::{Spacing, SweepRow, ZetaGrid};
pub use units::{DimensionlessPoint, PhysicalConfig};
pub use validation::{ValidationGrid, ValidationReport, ValidationRow};
