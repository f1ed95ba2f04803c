//! Natural units (ħ = m = c = 1, so lengths are in Compton wavelengths and
//! momenta in units of mc) and the map between dimensional configurations
//! and the dimensionless pair (ζ, κ).

use crate::error::{Error, Result};

/// Largest central momentum (in units of mc) accepted without the
/// relativistic override.
pub const NONRELATIVISTIC_LIMIT: f64 = 0.1;

/// Packet width used when only (ζ, κ) are specified.
pub const DEFAULT_WIDTH: f64 = 1000.0;

/// Dimensional parameters of the symmetric two-packet geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConfig {
    /// Initial packet width d.
    pub d: f64,
    /// Central momentum magnitude P; packets travel along ±z.
    pub p: f64,
    /// Detector half-separation Z; the detector planes sit at z = ±Z.
    pub z: f64,
    pub allow_relativistic: bool,
}

impl PhysicalConfig {
    pub fn new(d: f64, p: f64, z: f64) -> Result<Self> {
        let cfg = PhysicalConfig {
            d,
            p,
            z,
            allow_relativistic: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn new_relativistic(d: f64, p: f64, z: f64) -> Result<Self> {
        let cfg = PhysicalConfig {
            d,
            p,
            z,
            allow_relativistic: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d.is_finite() && self.d > 0.0) {
            return Err(Error::InvalidParameter {
                name: "d",
                value: self.d,
                reason: "must be finite and positive",
            });
        }
        if !(self.p.is_finite() && self.p > 0.0) {
            return Err(Error::InvalidParameter {
                name: "P",
                value: self.p,
                reason: "must be finite and positive",
            });
        }
        if !(self.z.is_finite() && self.z >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "Z",
                value: self.z,
                reason: "must be finite and non-negative",
            });
        }
        if self.p >= NONRELATIVISTIC_LIMIT && !self.allow_relativistic {
            return Err(Error::Relativistic(self.p));
        }
        Ok(())
    }

    /// Squared diffusion length at the detection time, L² = ħZ/P.
    pub fn diffusion_sq_at_detection(&self) -> f64 {
        self.z / self.p
    }
}

/// The pair (ζ, κ) = (Z/d, P·d/ħ) on which every closed-form result depends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessPoint {
    pub zeta: f64,
    pub kappa: f64,
}

impl DimensionlessPoint {
    pub fn new(zeta: f64, kappa: f64) -> Result<Self> {
        if !(zeta.is_finite() && zeta >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "zeta",
                value: zeta,
                reason: "must be finite and non-negative",
            });
        }
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidParameter {
                name: "kappa",
                value: kappa,
                reason: "must be finite and positive",
            });
        }
        Ok(DimensionlessPoint { zeta, kappa })
    }
}

pub fn to_dimensionless(cfg: &PhysicalConfig) -> DimensionlessPoint {
    DimensionlessPoint {
        zeta: cfg.z / cfg.d,
        kappa: cfg.p * cfg.d,
    }
}

/// Inverse of [`to_dimensionless`] at a chosen width `d`.
pub fn from_dimensionless(
    pt: DimensionlessPoint,
    d: f64,
    allow_relativistic: bool,
) -> Result<PhysicalConfig> {
    let cfg = PhysicalConfig {
        d,
        p: pt.kappa / d,
        z: pt.zeta * d,
        allow_relativistic,
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Arrival time of the packet peaks at the detectors, T = Z/v_g with v_g = P/m.
pub fn detection_time(cfg: &PhysicalConfig) -> Result<f64> {
    if !(cfg.p > 0.0) {
        return Err(Error::UndefinedDetectionTime(cfg.p));
    }
    Ok(cfg.z / cfg.p)
}

/// Squared diffusion length L² = ħt/m.
pub fn diffusion_sq(t: f64) -> f64 {
    t
}
