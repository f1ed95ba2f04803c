//! Single-electron Gaussian Dirac wavepacket: the Gaussian momentum
//! spectrum, the closed-form packet in position space, and a momentum-space
//! quadrature of the defining superposition used to check it.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::quadrature::{self, QuadratureSpec};
use crate::spinor::{sigma_dot_complex, small_component_phase, SpinLabel, SpinMode, Spinor4};
use crate::units::diffusion_sq;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentumSpectrum {
    /// Central momentum P₀.
    pub p0: [f64; 3],
    /// Width parameter d; the momentum spread is ħ/d.
    pub d: f64,
}

impl MomentumSpectrum {
    pub fn along_z(p: f64, d: f64) -> Self {
        MomentumSpectrum {
            p0: [0.0, 0.0, p],
            d,
        }
    }
}

/// F(P, P₀) = (2πd²)^{3/2} exp(−d²|P − P₀|²/2).
pub fn momentum_weight(p: [f64; 3], spec: &MomentumSpectrum) -> f64 {
    let q2: f64 = p
        .iter()
        .zip(spec.p0.iter())
        .map(|(a, b)| (a - b).powi(2))
        .sum();
    let d2 = spec.d * spec.d;
    (2.0 * PI * d2).powf(1.5) * (-0.5 * d2 * q2).exp()
}

/// Dispersion relation used inside the momentum superposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Dispersion {
    /// E = 1 + P²/2, the form the closed expression is derived from.
    #[default]
    Quadratic,
    /// E = √(1 + P²); sensitivity studies only.
    Relativistic,
}

impl Dispersion {
    pub fn energy(self, p2: f64) -> f64 {
        match self {
            Dispersion::Quadratic => 1.0 + 0.5 * p2,
            Dispersion::Relativistic => (1.0 + p2).sqrt(),
        }
    }
}

/// Scalar part of the closed-form packet at (r, t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketEnvelope {
    /// N · e^{−it} · Gaussian factors.
    pub value: Complex64,
    pub normalization: Complex64,
    /// L² = t in natural units.
    pub diffusion_sq: f64,
    /// Complex width d² + iL².
    pub complex_width: Complex64,
}

pub fn envelope(r: [f64; 3], t: f64, spec: &MomentumSpectrum) -> PacketEnvelope {
    let d2 = spec.d * spec.d;
    let l2 = diffusion_sq(t);
    let w = Complex64::new(d2, l2);
    let normalization = (spec.d / (PI.sqrt() * w)).powf(1.5);
    let r2: f64 = r.iter().map(|x| x * x).sum();
    let p0r: f64 = r.iter().zip(spec.p0.iter()).map(|(a, b)| a * b).sum();
    let p02: f64 = spec.p0.iter().map(|x| x * x).sum();
    let spatial = Complex64::new(-r2, 2.0 * d2 * p0r) / (2.0 * w);
    let spreading = Complex64::new(0.0, -d2 * p02 * l2) / (2.0 * w);
    let rest = Complex64::new(0.0, -t);
    PacketEnvelope {
        value: normalization * (spatial + spreading + rest).exp(),
        normalization,
        diffusion_sq: l2,
        complex_width: w,
    }
}

/// Momentum at which the Gaussian superposition is stationary for (r, t):
/// K = (d²P₀ + i r)/(d² + iL²). Moments linear in P integrate to K exactly.
pub fn local_momentum(r: [f64; 3], t: f64, spec: &MomentumSpectrum) -> [Complex64; 3] {
    let d2 = spec.d * spec.d;
    let w = Complex64::new(d2, diffusion_sq(t));
    std::array::from_fn(|k| Complex64::new(d2 * spec.p0[k], r[k]) / w)
}

/// u_s(K) = (χ_s, e^{iπ/4}(σ·K)/2 χ_s) with λc = 1.
fn spinor_at_momentum(k: [Complex64; 3], s: SpinLabel, mode: SpinMode) -> Spinor4 {
    let [a, b] = s.pauli();
    match mode {
        SpinMode::Leading => Spinor4([a, b, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)]),
        SpinMode::Full => {
            let pre = small_component_phase() * 0.5;
            let [c, d] = sigma_dot_complex(k, s);
            Spinor4([a, b, pre * c, pre * d])
        }
    }
}

/// Closed-form packet Ψ_s(r, t; P₀), unit-normalized up to the O(λc²)
/// weight of the small components.
pub fn packet_closed(
    r: [f64; 3],
    t: f64,
    spec: &MomentumSpectrum,
    s: SpinLabel,
    mode: SpinMode,
) -> Spinor4 {
    let env = envelope(r, t, spec);
    spinor_at_momentum(local_momentum(r, t, spec), s, mode).scale(env.value)
}

/// Constant that maps the literal momentum superposition onto the
/// unit-normalized closed form: (2d·π^{3/2})^{−3/2}.
pub fn superposition_normalization(d: f64) -> f64 {
    (2.0 * d * PI.powf(1.5)).powf(-1.5)
}

fn momentum_axes(spec: &MomentumSpectrum, q: &QuadratureSpec) -> QuadratureSpec {
    q.with_axes(vec![1.0 / spec.d; 3], spec.p0.to_vec())
}

fn superposition_integrand(
    r: [f64; 3],
    t: f64,
    spec: MomentumSpectrum,
    s: SpinLabel,
    mode: SpinMode,
    dispersion: Dispersion,
) -> impl Fn(&[f64], &mut [Complex64]) + Sync {
    let norm = superposition_normalization(spec.d) * (2.0 * PI).powf(-1.5);
    move |p: &[f64], out: &mut [Complex64]| {
        let pv = [p[0], p[1], p[2]];
        let p2: f64 = pv.iter().map(|x| x * x).sum();
        let pr: f64 = pv.iter().zip(r.iter()).map(|(a, b)| a * b).sum();
        let phase = Complex64::new(0.0, pr - dispersion.energy(p2) * t).exp();
        let amp = phase * (norm * momentum_weight(pv, &spec));
        let k = pv.map(|x| Complex64::new(x, 0.0));
        let u = spinor_at_momentum(k, s, mode);
        for (o, c) in out.iter_mut().zip(u.0.iter()) {
            *o = amp * c;
        }
    }
}

/// Evaluates the momentum superposition by Gauss–Hermite quadrature with
/// node doubling, rescaled by [`superposition_normalization`].
pub fn packet_quadrature(
    r: [f64; 3],
    t: f64,
    spec: &MomentumSpectrum,
    s: SpinLabel,
    mode: SpinMode,
    dispersion: Dispersion,
    q: &QuadratureSpec,
) -> Result<Spinor4> {
    let f = superposition_integrand(r, t, *spec, s, mode, dispersion);
    let res = quadrature::integrate_many(f, 3, 4, &momentum_axes(spec, q))?;
    Ok(Spinor4(std::array::from_fn(|k| res.values[k])))
}

/// Same superposition with a fixed n-point rule per axis.
pub fn packet_quadrature_fixed(
    r: [f64; 3],
    t: f64,
    spec: &MomentumSpectrum,
    s: SpinLabel,
    mode: SpinMode,
    dispersion: Dispersion,
    n: usize,
) -> Result<Spinor4> {
    let f = superposition_integrand(r, t, *spec, s, mode, dispersion);
    let axes = momentum_axes(spec, &QuadratureSpec::default());
    let v = quadrature::tensor_sum(&f, 3, 4, n, &axes)?;
    Ok(Spinor4(std::array::from_fn(|k| v[k])))
}

/// Real Gaussian width σ of |Ψ|² per axis at time t: |d² + iL²|/(√2·d).
pub fn density_width(t: f64, d: f64) -> f64 {
    Complex64::new(d * d, diffusion_sq(t)).norm() / (std::f64::consts::SQRT_2 * d)
}

/// Position-space quadrature grid that follows the packet center P₀t.
pub fn position_axes(t: f64, spec: &MomentumSpectrum, q: &QuadratureSpec) -> QuadratureSpec {
    let w = density_width(t, spec.d);
    q.with_axes(vec![w; 3], spec.p0.iter().map(|p| p * t).collect())
}

/// ∫ Ψ†Ψ d³r of the closed-form packet.
pub fn packet_norm(
    t: f64,
    spec: &MomentumSpectrum,
    s: SpinLabel,
    mode: SpinMode,
    q: &QuadratureSpec,
) -> Result<f64> {
    let spec = *spec;
    let res = quadrature::integrate(
        move |x| {
            let psi = packet_closed([x[0], x[1], x[2]], t, &spec, s, mode);
            Complex64::new(psi.norm_sqr(), 0.0)
        },
        3,
        &position_axes(t, &spec, q),
    )?;
    Ok(res.value.re)
}
