use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("momentum P = {0} is not small compared to mc (limit 0.1); pass the relativistic override to accept it")]
    Relativistic(f64),

    #[error("detection time is undefined for P = {0}")]
    UndefinedDetectionTime(f64),

    #[error("vector ({0}, {1}, {2}) is not a unit vector")]
    NotUnit(f64, f64, f64),

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("Gauss-Hermite rule size {0} is outside 1..=256")]
    RuleSize(usize),

    #[error("invalid quadrature spec: {0}")]
    QuadratureSpec(String),

    #[error("quadrature did not converge at {nodes_per_axis} nodes per axis (abs error estimate {abs_err:e})")]
    NonConvergence {
        best: Vec<Complex64>,
        abs_err: f64,
        nodes_per_axis: usize,
    },

    #[error("correlator denominator {0:e} is numerically zero")]
    DegenerateDenominator(f64),

    #[error("integral `{which}` has an imaginary residue {ratio:e} relative to its scale")]
    ComplexResidue { which: &'static str, ratio: f64 },
}
