//! Side-by-side comparison of the quadrature oracle and the closed form on a
//! grid of (κ, ζ) points and CHSH setting pairs.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::chsh::AnalyzerSettings;
use crate::correlator::{correlator_dimensionless, correlators_numeric, NumericOptions};
use crate::error::{Error, Result};
use crate::units::{from_dimensionless, DimensionlessPoint, DEFAULT_WIDTH};

pub const PAIR_LABELS: [&str; 4] = ["a,b", "a,b'", "a',b", "a',b'"];

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationGrid {
    pub kappas: Vec<f64>,
    pub zetas: Vec<f64>,
    pub settings: AnalyzerSettings,
    pub d: f64,
    pub allow_relativistic: bool,
    pub tolerance: f64,
    pub options: NumericOptions,
}

impl Default for ValidationGrid {
    fn default() -> Self {
        ValidationGrid {
            kappas: vec![0.5, 1.0],
            zetas: vec![0.0, 0.25, 0.5, 1.0, 2.0],
            settings: AnalyzerSettings::default(),
            d: DEFAULT_WIDTH,
            allow_relativistic: false,
            tolerance: 1e-6,
            options: NumericOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationRow {
    pub zeta: f64,
    pub kappa: f64,
    /// Index into [`PAIR_LABELS`].
    pub pair: usize,
    pub closed: f64,
    /// Oracle value, or its best estimate when quadrature did not converge.
    pub numeric: f64,
    pub abs_diff: f64,
    pub quad_err: f64,
    pub converged: bool,
    pub pass: bool,
}

impl ValidationRow {
    pub fn pair_label(&self) -> &'static str {
        PAIR_LABELS[self.pair]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub rows: Vec<ValidationRow>,
    pub tolerance: f64,
}

impl ValidationReport {
    pub fn max_diff(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| r.abs_diff)
            .fold(0.0, |m, d| if d.is_nan() { f64::NAN } else { m.max(d) })
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }
}

/// A row passes iff |numeric − closed| ≤ max(tolerance, 10·quad_err).
pub fn row_passes(abs_diff: f64, quad_err: f64, tolerance: f64) -> bool {
    abs_diff <= tolerance.max(10.0 * quad_err)
}

/// Runs the oracle at every grid point. Non-convergence marks the point's
/// rows as failed but keeps the best estimate; other errors abort.
pub fn validate(grid: &ValidationGrid) -> Result<ValidationReport> {
    let pairs = grid.settings.pairs();
    let points: Vec<DimensionlessPoint> = grid
        .kappas
        .iter()
        .flat_map(|&k| grid.zetas.iter().map(move |&z| (z, k)))
        .map(|(z, k)| DimensionlessPoint::new(z, k))
        .collect::<Result<_>>()?;

    let per_point: Vec<Vec<ValidationRow>> = points
        .par_iter()
        .map(|pt| {
            let cfg = from_dimensionless(*pt, grid.d, grid.allow_relativistic)?;
            let closed = pairs.map(|(a, b)| correlator_dimensionless(&a, &b, pt).value);
            let (numeric, errs, converged) = match correlators_numeric(&pairs, &cfg, &grid.options)
            {
                Ok(vals) => (
                    vals.iter().map(|v| v.value).collect::<Vec<_>>(),
                    vals.iter().map(|v| v.err).collect::<Vec<_>>(),
                    true,
                ),
                Err(Error::NonConvergence { best, abs_err, .. }) => {
                    let (vals, errs) = best_estimates(&best, abs_err);
                    (vals, errs, false)
                }
                Err(e) => return Err(e),
            };
            Ok((0..pairs.len())
                .map(|k| {
                    let abs_diff = (numeric[k] - closed[k]).abs();
                    ValidationRow {
                        zeta: pt.zeta,
                        kappa: pt.kappa,
                        pair: k,
                        closed: closed[k],
                        numeric: numeric[k],
                        abs_diff,
                        quad_err: errs[k],
                        converged,
                        pass: converged && row_passes(abs_diff, errs[k], grid.tolerance),
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    Ok(ValidationReport {
        rows: per_point.into_iter().flatten().collect(),
        tolerance: grid.tolerance,
    })
}

/// Correlators from raw integrals [den, num₁, …] of an unconverged run.
fn best_estimates(best: &[Complex64], abs_err: f64) -> (Vec<f64>, Vec<f64>) {
    let den = best[0].re;
    best[1..]
        .iter()
        .map(|num| {
            let c = num.re / den;
            (c, abs_err * (1.0 + c.abs()) / den.abs())
        })
        .unzip()
}
