//! Grid evaluation of B(ζ; κ) over separations for a list of κ values.

use rayon::prelude::*;

use crate::chsh::{bell_closed, bell_from_correlators, AnalyzerSettings, BellValue, Evaluation};
use crate::error::{Error, Result};
use crate::units::DimensionlessPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaGrid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl ZetaGrid {
    pub fn linear(min: f64, max: f64, count: usize) -> Self {
        ZetaGrid {
            min,
            max,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::InvalidParameter {
                name: "count",
                value: self.count as f64,
                reason: "grid needs at least 2 points",
            });
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::InvalidParameter {
                name: "zeta_max",
                value: self.max,
                reason: "grid needs finite min < max",
            });
        }
        if self.min < 0.0 {
            return Err(Error::InvalidParameter {
                name: "zeta_min",
                value: self.min,
                reason: "separation must be non-negative",
            });
        }
        if self.spacing == Spacing::Log && self.min <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "zeta_min",
                value: self.min,
                reason: "log spacing needs a positive minimum",
            });
        }
        Ok(())
    }

    /// Grid points; both endpoints are hit exactly.
    pub fn points(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let last = (self.count - 1) as f64;
        Ok((0..self.count)
            .map(|k| {
                if k == self.count - 1 {
                    return self.max;
                }
                let f = k as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + (self.max - self.min) * f,
                    Spacing::Log => self.min * (self.max / self.min).powf(f),
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub kappa: f64,
    pub zeta: f64,
    /// Closed-form B.
    pub bell: f64,
    pub f_perp: f64,
    pub phi_par: f64,
    /// Oracle value when requested.
    pub numeric: Option<BellValue>,
}

impl SweepRow {
    pub fn abs_bell(&self) -> f64 {
        self.bell.abs()
    }
}

/// Evaluates every (κ, ζ) pair, κ outer and ζ inner. Points run in
/// parallel on the current rayon pool; the row order is fixed.
pub fn sweep(
    kappas: &[f64],
    grid: &ZetaGrid,
    numeric: Option<&Evaluation>,
    settings: &AnalyzerSettings,
) -> Result<Vec<SweepRow>> {
    if kappas.is_empty() {
        return Err(Error::InvalidParameter {
            name: "kappa",
            value: f64::NAN,
            reason: "kappa list is empty",
        });
    }
    let zetas = grid.points()?;
    let points: Vec<DimensionlessPoint> = kappas
        .iter()
        .flat_map(|&k| zetas.iter().map(move |&z| (z, k)))
        .map(|(z, k)| DimensionlessPoint::new(z, k))
        .collect::<Result<_>>()?;
    points
        .par_iter()
        .map(|pt| {
            let dec = bell_closed(pt);
            let numeric = match numeric {
                Some(method) => Some(bell_from_correlators(pt, settings, method)?),
                None => None,
            };
            Ok(SweepRow {
                kappa: pt.kappa,
                zeta: pt.zeta,
                bell: dec.bell,
                f_perp: dec.f_perp,
                phi_par: dec.phi_par,
                numeric,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_grid_endpoints() {
        let g = ZetaGrid::linear(0.0, 5.0, 501).points().unwrap();
        assert_eq!(g.len(), 501);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[500], 5.0);
        assert!((g[100] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn log_grid() {
        let g = ZetaGrid {
            min: 1e-3,
            max: 10.0,
            count: 5,
            spacing: Spacing::Log,
        }
        .points()
        .unwrap();
        for (v, e) in g.iter().zip([1e-3, 1e-2, 1e-1, 1.0, 10.0]) {
            assert!((v / e - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_grids() {
        assert!(ZetaGrid::linear(0.0, 1.0, 1).points().is_err());
        assert!(ZetaGrid::linear(1.0, 1.0, 3).points().is_err());
        assert!(ZetaGrid::linear(-1.0, 1.0, 3).points().is_err());
        assert!(ZetaGrid {
            min: 0.0,
            max: 1.0,
            count: 3,
            spacing: Spacing::Log
        }
        .points()
        .is_err());
    }

    #[test]
    fn row_order_and_count() {
        let rows = sweep(
            &[0.5, 1.0],
            &ZetaGrid::linear(0.0, 5.0, 501),
            None,
            &AnalyzerSettings::default(),
        )
        .unwrap();
        assert_eq!(rows.len(), 1002);
        assert!(rows[..501].iter().all(|r| r.kappa == 0.5));
        assert!(rows[501..].iter().all(|r| r.kappa == 1.0));
        assert!(rows[..501].windows(2).all(|w| w[0].zeta < w[1].zeta));
        assert!(sweep(
            &[],
            &ZetaGrid::linear(0.0, 1.0, 2),
            None,
            &AnalyzerSettings::default()
        )
        .is_err());
    }

    #[test]
    fn figure_curves() {
        let rows = sweep(
            &[0.5, 1.0],
            &ZetaGrid::linear(0.0, 5.0, 501),
            None,
            &AnalyzerSettings::default(),
        )
        .unwrap();
        let (low, high) = rows.split_at(501);
        assert!(low.iter().all(|r| r.abs_bell() >= 2.0));
        assert!(high
            .iter()
            .filter(|r| r.zeta >= 0.31)
            .all(|r| r.abs_bell() < 2.0));
    }
}
