//! CHSH combination of four correlators, the transitional Bell parameter
//! B(ζ; κ) = −√2[1 + F⊥ cos Φ∥], its limits, and the threshold κ*.

use std::f64::consts::SQRT_2;

use crate::correlator::{correlator_dimensionless, correlators_numeric, sech, NumericOptions};
use crate::error::{Error, Result};
use crate::spinor::UnitVector3;
use crate::units::{from_dimensionless, DimensionlessPoint};

pub use crate::correlator::{cross_phase, overlap_factor};

/// Analyzer directions entering B = C(a,b) + C(a,b′) + C(a′,b) − C(a′,b′).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyzerSettings {
    pub a: UnitVector3,
    pub a_prime: UnitVector3,
    pub b: UnitVector3,
    pub b_prime: UnitVector3,
}

impl Default for AnalyzerSettings {
    /// â = ẑ, â′ = x̂, b̂ = (x̂ + ẑ)/√2, b̂′ = (−x̂ + ẑ)/√2.
    fn default() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        AnalyzerSettings {
            a: UnitVector3::Z,
            a_prime: UnitVector3::X,
            b: UnitVector3::new(h, 0.0, h).expect("unit"),
            b_prime: UnitVector3::new(-h, 0.0, h).expect("unit"),
        }
    }
}

impl AnalyzerSettings {
    /// (a,b), (a,b′), (a′,b), (a′,b′).
    pub fn pairs(&self) -> [(UnitVector3, UnitVector3); 4] {
        [
            (self.a, self.b),
            (self.a, self.b_prime),
            (self.a_prime, self.b),
            (self.a_prime, self.b_prime),
        ]
    }

    /// Signs of the four terms in the CHSH sum.
    pub const SIGNS: [f64; 4] = [1.0, 1.0, 1.0, -1.0];

    pub fn combine(values: [f64; 4]) -> f64 {
        values
            .iter()
            .zip(Self::SIGNS.iter())
            .map(|(v, s)| v * s)
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellDecomposition {
    pub bell: f64,
    pub f_perp: f64,
    pub phi_par: f64,
}

pub fn bell_closed(pt: &DimensionlessPoint) -> BellDecomposition {
    let f_perp = overlap_factor(pt);
    let phi_par = cross_phase(pt);
    BellDecomposition {
        bell: -SQRT_2 * (1.0 + f_perp * phi_par.cos()),
        f_perp,
        phi_par,
    }
}

/// How the four correlators are obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluation {
    Closed,
    /// Quadrature oracle at packet width `d`.
    Numeric {
        d: f64,
        allow_relativistic: bool,
        options: NumericOptions,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellValue {
    pub value: f64,
    /// Sum of the correlator error estimates; zero for closed forms.
    pub err: f64,
}

pub fn bell_from_correlators(
    pt: &DimensionlessPoint,
    settings: &AnalyzerSettings,
    method: &Evaluation,
) -> Result<BellValue> {
    let pairs = settings.pairs();
    match method {
        Evaluation::Closed => {
            let values = pairs.map(|(a, b)| correlator_dimensionless(&a, &b, pt).value);
            Ok(BellValue {
                value: AnalyzerSettings::combine(values),
                err: 0.0,
            })
        }
        Evaluation::Numeric {
            d,
            allow_relativistic,
            options,
        } => {
            let cfg = from_dimensionless(*pt, *d, *allow_relativistic)?;
            let c = correlators_numeric(&pairs, &cfg, options)?;
            Ok(BellValue {
                value: AnalyzerSettings::combine([c[0].value, c[1].value, c[2].value, c[3].value]),
                err: c.iter().map(|v| v.err).sum(),
            })
        }
    }
}

/// |B(ζ → ∞; κ)| = √2[1 + sech(4κ²)].
pub fn bell_limit_infinity(kappa: f64) -> Result<f64> {
    check_kappa(kappa)?;
    Ok(SQRT_2 * (1.0 + sech(4.0 * kappa * kappa)))
}

/// κ* = ½·√(arcosh(1/(√2 − 1))), where the separated limit equals 2.
pub fn kappa_star() -> f64 {
    0.5 * (1.0 / (SQRT_2 - 1.0)).acosh().sqrt()
}

fn check_kappa(kappa: f64) -> Result<()> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidParameter {
            name: "kappa",
            value: kappa,
            reason: "must be finite and positive",
        });
    }
    Ok(())
}

/// Upper end of the scanned separation range.
pub const CROSSING_SCAN_MAX: f64 = 1e3;
const CROSSING_SCAN_MIN: f64 = 1e-6;
const CROSSING_SCAN_POINTS: usize = 200_000;
const CROSSING_BRACKET: f64 = 1e-10;

/// Every place on ζ ∈ (0, 10³] where |B| crosses the classical value 2.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingScan {
    pub kappa: f64,
    /// Crossing locations in increasing order, each bracketed to 1e-10.
    pub crossings: Vec<f64>,
    /// |B(∞; κ)|.
    pub limit: f64,
}

impl CrossingScan {
    pub fn first(&self) -> Option<f64> {
        self.crossings.first().copied()
    }

    /// True when no crossing lies in the scanned range yet the separated
    /// limit is below 2, so |B| falls under 2 only beyond the scan.
    pub fn crossing_beyond_scan(&self) -> bool {
        self.crossings.is_empty() && self.limit < 2.0
    }
}

fn excess_over_classical(zeta: f64, kappa: f64) -> f64 {
    bell_closed(&DimensionlessPoint { zeta, kappa }).bell.abs() - 2.0
}

fn bisect(mut lo: f64, mut hi: f64, kappa: f64) -> f64 {
    let mut f_lo = excess_over_classical(lo, kappa);
    while hi - lo > CROSSING_BRACKET {
        let mid = 0.5 * (lo + hi);
        let f_mid = excess_over_classical(mid, kappa);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Scans a log-spaced grid for sign changes of |B| − 2 and refines each by
/// bisection.
pub fn scan_classical_crossings(kappa: f64) -> Result<CrossingScan> {
    check_kappa(kappa)?;
    let ratio = (CROSSING_SCAN_MAX / CROSSING_SCAN_MIN).ln() / (CROSSING_SCAN_POINTS - 1) as f64;
    let mut crossings = Vec::new();
    let mut prev_zeta = 0.0;
    let mut prev = excess_over_classical(0.0, kappa);
    for k in 0..CROSSING_SCAN_POINTS {
        let zeta = CROSSING_SCAN_MIN * (ratio * k as f64).exp();
        let cur = excess_over_classical(zeta, kappa);
        if cur == 0.0 {
            crossings.push(zeta);
        } else if prev != 0.0 && (cur > 0.0) != (prev > 0.0) {
            crossings.push(bisect(prev_zeta, zeta, kappa));
        }
        prev = cur;
        prev_zeta = zeta;
    }
    Ok(CrossingScan {
        kappa,
        crossings,
        limit: bell_limit_infinity(kappa)?,
    })
}

/// Smallest ζ > 0 at which |B(ζ; κ)| = 2, or `None` when |B| stays at or
/// above 2 over the scanned range.
pub fn classical_crossing(kappa: f64) -> Result<Option<f64>> {
    Ok(scan_classical_crossings(kappa)?.first())
}
