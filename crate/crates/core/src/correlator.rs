//! The windowed spin–spin correlator
//!
//! ```text
//! C(â, b̂) = ∬ W_A W_B Ψ†(â·Σ₁)(b̂·Σ₂)Ψ / ∬ W_A W_B Ψ†Ψ
//! ```
//!
//! evaluated two ways: by direct quadrature over the transverse detector
//! coordinates, and in closed form.

use num_complex::Complex64;

use crate::entangled::{
    singlet_at_detection, window_weight, DetectorSide, DetectorWindow, WindowProfile,
};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_many, QuadratureSpec};
use crate::spinor::{sigma_projection, SpinMode, UnitVector3};
use crate::units::{to_dimensionless, DimensionlessPoint, PhysicalConfig};

/// Largest imaginary residue, relative to the denominator, tolerated in the
/// quadrature of the (real) correlator integrands.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-9;

const DEGENERATE_DENOMINATOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Closed,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorValue {
    pub value: f64,
    pub method: Method,
    /// Quadrature error estimate; zero for closed forms.
    pub err: f64,
}

impl CorrelatorValue {
    fn closed(value: f64) -> Self {
        CorrelatorValue {
            value,
            method: Method::Closed,
            err: 0.0,
        }
    }
}

/// Settings of the quadrature oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericOptions {
    pub spin_mode: SpinMode,
    pub window_a: WindowProfile,
    pub window_b: WindowProfile,
    /// Node budget and tolerance; the axes are filled in per configuration.
    pub quadrature: QuadratureSpec,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            spin_mode: SpinMode::Leading,
            window_a: WindowProfile::Uniform,
            window_b: WindowProfile::Uniform,
            quadrature: QuadratureSpec::default(),
        }
    }
}

/// Transverse overlap factor F⊥ = sech(4κ²ζ²/(κ² + ζ²)).
pub fn overlap_factor(pt: &DimensionlessPoint) -> f64 {
    let (z2, k2) = (pt.zeta * pt.zeta, pt.kappa * pt.kappa);
    sech(4.0 * k2 * z2 / (k2 + z2))
}

/// Longitudinal cross-phase Φ∥ = 4κ³ζ/(κ² + ζ²).
pub fn cross_phase(pt: &DimensionlessPoint) -> f64 {
    let (z2, k2) = (pt.zeta * pt.zeta, pt.kappa * pt.kappa);
    4.0 * k2 * pt.kappa * pt.zeta / (k2 + z2)
}

pub fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

/// Splits â, b̂ into a_z b_z, a_x b_x + a_y b_y and a_x b_y − a_y b_x.
fn setting_terms(a: &UnitVector3, b: &UnitVector3) -> (f64, f64, f64) {
    (
        a.z() * b.z(),
        a.x() * b.x() + a.y() * b.y(),
        a.x() * b.y() - a.y() * b.x(),
    )
}

fn from_overlap(a: &UnitVector3, b: &UnitVector3, overlap: f64, phase: f64) -> f64 {
    let (zz, par, cross) = setting_terms(a, b);
    -zz - overlap * (phase.cos() * par + phase.sin() * cross)
}

/// Closed form in dimensional variables (ħ = 1):
///
/// ```text
/// C = −a_z b_z − 2e^{−X}/(1 + e^{−2X}) [cos Φ (a_x b_x + a_y b_y) + sin Φ (a_x b_y − a_y b_x)]
/// X = 4d²Z²/(d⁴ + Z²/P²),  Φ = 4d⁴PZ/(d⁴ + Z²/P²)
/// ```
pub fn correlator_closed(
    a: &UnitVector3,
    b: &UnitVector3,
    cfg: &PhysicalConfig,
) -> CorrelatorValue {
    let d2 = cfg.d * cfg.d;
    let denom = d2 * d2 + (cfg.z / cfg.p).powi(2);
    let x = 4.0 * d2 * cfg.z * cfg.z / denom;
    let phase = 4.0 * d2 * d2 * cfg.p * cfg.z / denom;
    let overlap = 2.0 * (-x).exp() / (1.0 + (-2.0 * x).exp());
    CorrelatorValue::closed(from_overlap(a, b, overlap, phase))
}

/// Closed form in (ζ, κ):
/// C = −a_z b_z − F⊥ [cos Φ∥ (a_x b_x + a_y b_y) + sin Φ∥ (a_x b_y − a_y b_x)].
pub fn correlator_dimensionless(
    a: &UnitVector3,
    b: &UnitVector3,
    pt: &DimensionlessPoint,
) -> CorrelatorValue {
    CorrelatorValue::closed(from_overlap(a, b, overlap_factor(pt), cross_phase(pt)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// ζ = 0.
    Coincident,
    /// ζ → ∞.
    Separated,
}

pub fn correlator_asymptotic(
    a: &UnitVector3,
    b: &UnitVector3,
    regime: Regime,
    kappa: f64,
) -> Result<f64> {
    let (zz, par, _) = setting_terms(a, b);
    match regime {
        Regime::Coincident => Ok(-zz - par),
        Regime::Separated => {
            if !(kappa.is_finite() && kappa > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "kappa",
                    value: kappa,
                    reason: "must be finite and positive",
                });
            }
            Ok(-zz - sech(4.0 * kappa * kappa) * par)
        }
    }
}

/// Real Gaussian width of |Ψ|² along each transverse axis on the detector
/// planes, narrowed by the window profile.
fn transverse_width(cfg: &PhysicalConfig, window: &WindowProfile) -> f64 {
    let d2 = cfg.d * cfg.d;
    let var = (d2 * d2 + (cfg.z / cfg.p).powi(2)) / (2.0 * d2);
    match window {
        WindowProfile::Uniform => var.sqrt(),
        WindowProfile::Gaussian { width } => (1.0 / (1.0 / var + 1.0 / (width * width))).sqrt(),
    }
}

/// Quadrature oracle for several setting pairs on one shared grid.
pub fn correlators_numeric(
    pairs: &[(UnitVector3, UnitVector3)],
    cfg: &PhysicalConfig,
    opts: &NumericOptions,
) -> Result<Vec<CorrelatorValue>> {
    cfg.validate()?;
    let ops: Vec<_> = pairs
        .iter()
        .map(|(a, b)| (sigma_projection(a), sigma_projection(b)))
        .collect();
    let win_a = DetectorWindow {
        side: DetectorSide::A,
        profile: opts.window_a,
    };
    let win_b = DetectorWindow {
        side: DetectorSide::B,
        profile: opts.window_b,
    };
    let wa = transverse_width(cfg, &opts.window_a);
    let wb = transverse_width(cfg, &opts.window_b);
    let spec = opts.quadrature.with_axes(vec![wa, wa, wb, wb], Vec::new());
    let cfg = *cfg;
    let mode = opts.spin_mode;

    // Coordinates are (x₁, y₁, x₂, y₂); output 0 is the denominator.
    let integrand = |x: &[f64], out: &mut [Complex64]| {
        let psi = singlet_at_detection(x[0], x[1], x[2], x[3], &cfg, mode);
        let w = window_weight(&win_a, x[0], x[1]) * window_weight(&win_b, x[2], x[3]);
        out[0] = Complex64::new(w * psi.norm_sqr(), 0.0);
        for (o, (a, b)) in out[1..].iter_mut().zip(ops.iter()) {
            *o = psi.expectation(a, b) * w;
        }
    };
    let res = integrate_many(integrand, 4, 1 + pairs.len(), &spec)?;

    let den = res.values[0];
    if den.re.abs() < DEGENERATE_DENOMINATOR {
        return Err(Error::DegenerateDenominator(den.re));
    }
    let scale = den.norm();
    if den.im.abs() > IMAGINARY_RESIDUE_TOL * scale {
        return Err(Error::ComplexResidue {
            which: "denominator",
            ratio: den.im.abs() / scale,
        });
    }
    let den_err = res.abs_err_estimate[0];
    pairs
        .iter()
        .enumerate()
        .map(|(k, _)| {
            let num = res.values[k + 1];
            if num.im.abs() > IMAGINARY_RESIDUE_TOL * scale {
                return Err(Error::ComplexResidue {
                    which: "numerator",
                    ratio: num.im.abs() / scale,
                });
            }
            let value = num.re / den.re;
            let err = (res.abs_err_estimate[k + 1] + value.abs() * den_err) / den.re.abs();
            Ok(CorrelatorValue {
                value,
                method: Method::Numeric,
                err,
            })
        })
        .collect()
}

pub fn correlator_numeric(
    a: &UnitVector3,
    b: &UnitVector3,
    cfg: &PhysicalConfig,
    opts: &NumericOptions,
) -> Result<CorrelatorValue> {
    Ok(correlators_numeric(&[(*a, *b)], cfg, opts)?[0])
}

/// Closed-form value at the configuration's (ζ, κ).
pub fn correlator_at(a: &UnitVector3, b: &UnitVector3, cfg: &PhysicalConfig) -> CorrelatorValue {
    correlator_dimensionless(a, b, &to_dimensionless(cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::from_dimensionless;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn pt(zeta: f64, kappa: f64) -> DimensionlessPoint {
        DimensionlessPoint::new(zeta, kappa).unwrap()
    }

    fn cfg(zeta: f64, kappa: f64) -> PhysicalConfig {
        from_dimensionless(pt(zeta, kappa), 1000.0, false).unwrap()
    }

    /// −sech(2)·cos(2) and −sech(2)·sin(2), from libm directly.
    fn xx_at_unit() -> f64 {
        -(2.0f64).cos() / (2.0f64).cosh()
    }
    fn xy_at_unit() -> f64 {
        -(2.0f64).sin() / (2.0f64).cosh()
    }

    #[test]
    fn frozen_values_at_unit_point() {
        assert!((xx_at_unit() - 0.11062).abs() < 1e-5);
        assert!((xy_at_unit() + 0.24169).abs() < 1e-5);
        let p = pt(1.0, 1.0);
        let c = correlator_dimensionless(&UnitVector3::X, &UnitVector3::X, &p);
        assert!((c.value - xx_at_unit()).abs() < 1e-14);
        let c = correlator_dimensionless(&UnitVector3::X, &UnitVector3::Y, &p);
        assert!((c.value - xy_at_unit()).abs() < 1e-14);
        assert_eq!(c.method, Method::Closed);
        assert_eq!(c.err, 0.0);
    }

    #[test]
    fn coincident_value_is_minus_dot_product() {
        let b = UnitVector3::new(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2).unwrap();
        let c = correlator_dimensionless(&UnitVector3::Z, &b, &pt(0.0, 0.8));
        assert!((c.value + FRAC_1_SQRT_2).abs() < 1e-15);
        for d in [10.0, 1000.0] {
            for p in [1e-4, 0.05] {
                let cfg = PhysicalConfig::new(d, p, 0.0).unwrap();
                let a = UnitVector3::normalize(0.2, -0.5, 0.4).unwrap();
                let c = correlator_closed(&a, &b, &cfg);
                assert!((c.value + a.dot(&b)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn z_term_is_unmodulated() {
        let c = correlator_closed(&UnitVector3::Z, &UnitVector3::Z, &cfg(1.0, 1.0));
        assert_eq!(c.value, -1.0);
    }

    #[test]
    fn prefactor_is_sech() {
        for x in [0.1f64, 1.0, 10.0] {
            let pre = 2.0 * (-x).exp() / (1.0 + (-2.0 * x).exp());
            assert!((pre - sech(x)).abs() < 1e-14);
        }
    }

    #[test]
    fn far_separated_value() {
        let c = correlator_dimensionless(&UnitVector3::X, &UnitVector3::X, &pt(1e6, 0.5));
        assert!((c.value + sech(1.0)).abs() < 1e-6);
        assert!((sech(1.0) - 0.64805).abs() < 1e-5);
    }

    #[test]
    fn asymptotic_forms() {
        let x = UnitVector3::X;
        assert_eq!(
            correlator_asymptotic(&x, &x, Regime::Coincident, 1.0).unwrap(),
            -1.0
        );
        let sep = correlator_asymptotic(&x, &x, Regime::Separated, 0.5).unwrap();
        assert!((sep + sech(1.0)).abs() < 1e-15);
        assert!(correlator_asymptotic(&x, &x, Regime::Separated, 0.0).is_err());

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for kappa in [0.5, 1.0] {
            let far = correlator_dimensionless(&x, &x, &pt(1e4 * kappa, kappa)).value;
            let lim = correlator_asymptotic(&x, &x, Regime::Separated, kappa).unwrap();
            assert!((far - lim).abs() < 1e-6);
            for _ in 0..10 {
                // The sin Φ∥ term decays only as 1/ζ, so compare in the x–z plane.
                let a = in_xz_plane(&mut rng);
                let b = in_xz_plane(&mut rng);
                let far = correlator_dimensionless(&a, &b, &pt(1e4 * kappa, kappa)).value;
                let lim = correlator_asymptotic(&a, &b, Regime::Separated, kappa).unwrap();
                assert!((far - lim).abs() < 1e-6);
                let near = correlator_dimensionless(&a, &b, &pt(0.0, kappa)).value;
                let lim0 = correlator_asymptotic(&a, &b, Regime::Coincident, kappa).unwrap();
                assert!((near - lim0).abs() < 1e-15);
            }
        }
    }

    fn in_xz_plane(rng: &mut impl Rng) -> UnitVector3 {
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        UnitVector3::normalize(t.cos(), 0.0, t.sin()).unwrap()
    }

    #[test]
    fn transverse_cross_term_decays_as_inverse_separation() {
        let kappa = 1.0;
        let lim = correlator_asymptotic(&UnitVector3::X, &UnitVector3::Y, Regime::Separated, kappa)
            .unwrap();
        let dev = |zeta: f64| {
            correlator_dimensionless(&UnitVector3::X, &UnitVector3::Y, &pt(zeta, kappa)).value - lim
        };
        let ratio = dev(1e4) / dev(2e4);
        assert!((ratio - 2.0).abs() < 1e-3, "{ratio}");
    }

    fn random_unit(rng: &mut impl Rng) -> UnitVector3 {
        loop {
            let v: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            if let Ok(u) = UnitVector3::normalize(v[0], v[1], v[2]) {
                return u;
            }
        }
    }

    #[test]
    fn dimensional_and_dimensionless_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let zeta = rng.gen_range(0.0..5.0);
            let kappa = rng.gen_range(0.05..3.0);
            let d = rng.gen_range(100.0..5000.0);
            let c = from_dimensionless(pt(zeta, kappa), d, false).unwrap();
            let a = random_unit(&mut rng);
            let b = random_unit(&mut rng);
            let v1 = correlator_closed(&a, &b, &c).value;
            let v2 = correlator_dimensionless(&a, &b, &to_dimensionless(&c)).value;
            assert!((v1 - v2).abs() < 1e-12, "{v1} {v2}");
        }
    }

    #[test]
    fn unit_choice_cancels() {
        // Same (ζ, κ) reached from very different dimensional scales.
        let a = UnitVector3::normalize(0.3, 0.1, 0.9).unwrap();
        let b = UnitVector3::normalize(-0.7, 0.4, 0.2).unwrap();
        let reference = correlator_dimensionless(&a, &b, &pt(0.7, 0.9)).value;
        for d in [50.0, 1000.0, 3e4] {
            let c = from_dimensionless(pt(0.7, 0.9), d, false).unwrap();
            assert!((correlator_closed(&a, &b, &c).value - reference).abs() < 1e-12);
        }
    }

    #[test]
    fn exchange_of_settings_flips_sine_term() {
        let p = pt(1.0, 1.0);
        let phase = cross_phase(&p);
        let f = overlap_factor(&p);
        let xy = correlator_dimensionless(&UnitVector3::X, &UnitVector3::Y, &p).value;
        let yx = correlator_dimensionless(&UnitVector3::Y, &UnitVector3::X, &p).value;
        assert!((xy + f * phase.sin()).abs() < 1e-15);
        assert!((yx - f * phase.sin()).abs() < 1e-15);
        assert!(xy != yx);
    }

    #[test]
    fn bounded_by_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let p = pt(rng.gen_range(0.0..3.0), rng.gen_range(1e-6..2.0));
            let a = random_unit(&mut rng);
            let b = random_unit(&mut rng);
            assert!(correlator_dimensionless(&a, &b, &p).value.abs() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn numeric_coincident_anticorrelation() {
        for kappa in [0.5, 1.0] {
            let c = correlator_numeric(
                &UnitVector3::Z,
                &UnitVector3::Z,
                &cfg(0.0, kappa),
                &NumericOptions::default(),
            )
            .unwrap();
            assert!((c.value + 1.0).abs() < 1e-8);
            assert_eq!(c.method, Method::Numeric);
        }
    }

    #[test]
    fn numeric_unit_point() {
        let c = cfg(1.0, 1.0);
        let opts = NumericOptions::default();
        let v = correlators_numeric(
            &[
                (UnitVector3::X, UnitVector3::X),
                (UnitVector3::X, UnitVector3::Y),
            ],
            &c,
            &opts,
        )
        .unwrap();
        assert!((v[0].value - xx_at_unit()).abs() < 1e-6);
        assert!((v[1].value - xy_at_unit()).abs() < 1e-6);
        assert!(v[0].err >= 0.0);
    }

    #[test]
    fn gaussian_window_barely_changes_result() {
        let c = cfg(1.0, 1.0);
        for mode in [SpinMode::Leading, SpinMode::Full] {
            let uniform = NumericOptions {
                spin_mode: mode,
                ..NumericOptions::default()
            };
            let apodized = NumericOptions {
                window_a: WindowProfile::gaussian(10.0 * c.d).unwrap(),
                window_b: WindowProfile::gaussian(10.0 * c.d).unwrap(),
                ..uniform.clone()
            };
            let u = correlator_numeric(&UnitVector3::X, &UnitVector3::X, &c, &uniform).unwrap();
            let g = correlator_numeric(&UnitVector3::X, &UnitVector3::X, &c, &apodized).unwrap();
            assert!((u.value - g.value).abs() < 1e-3 * u.value.abs());
        }
    }

    #[test]
    fn starved_quadrature_reports_non_convergence() {
        let opts = NumericOptions {
            quadrature: QuadratureSpec {
                nodes_per_axis: 8,
                max_nodes_per_axis: 8,
                ..QuadratureSpec::default()
            },
            ..NumericOptions::default()
        };
        let err = correlator_numeric(&UnitVector3::X, &UnitVector3::X, &cfg(2.0, 1.0), &opts)
            .unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }
}
