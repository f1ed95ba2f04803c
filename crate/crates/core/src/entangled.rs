//! The two-particle singlet of counter-propagating packets and the planar
//! detector windows that sample it.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spinor::{detection_spinor_mode, Matrix4, SpinLabel, SpinMode, Spinor4};
use crate::units::PhysicalConfig;
use crate::wavepacket::{packet_closed, MomentumSpectrum};

/// Amplitude Ψ_{ij} with i the Dirac index of particle 1 and j of particle 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoParticleAmplitude(pub [[Complex64; 4]; 4]);

impl TwoParticleAmplitude {
    pub fn zero() -> Self {
        TwoParticleAmplitude([[Complex64::new(0.0, 0.0); 4]; 4])
    }

    /// u ⊗ v.
    pub fn product(u: &Spinor4, v: &Spinor4) -> Self {
        TwoParticleAmplitude(std::array::from_fn(|i| {
            std::array::from_fn(|j| u.0[i] * v.0[j])
        }))
    }

    /// Relabels the particles: Ψ'_{ij} = Ψ_{ji}.
    pub fn swap_particles(&self) -> Self {
        TwoParticleAmplitude(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[j][i])
        }))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        TwoParticleAmplitude(self.0.map(|row| row.map(|c| c * s)))
    }

    pub fn add_scaled(&self, other: &Self, s: Complex64) -> Self {
        TwoParticleAmplitude(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + s * other.0[i][j])
        }))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().flatten().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Unit phase e^{iφ} minimizing |self − e^{iφ}·other|.
    pub fn relative_phase(&self, other: &Self) -> Complex64 {
        let overlap: Complex64 = other
            .0
            .iter()
            .flatten()
            .zip(self.0.iter().flatten())
            .map(|(b, a)| b.conj() * a)
            .sum();
        if overlap.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            overlap / overlap.norm()
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Ψ†(A ⊗ B)Ψ, computed as Σ_ij conj(Ψ_ij)·(A Ψ Bᵀ)_ij.
    pub fn expectation(&self, a: &Matrix4, b: &Matrix4) -> Complex64 {
        let mut bt = [[Complex64::new(0.0, 0.0); 4]; 4];
        for i in 0..4 {
            for k in 0..4 {
                let mut s = Complex64::new(0.0, 0.0);
                for l in 0..4 {
                    s += self.0[i][l] * b.0[k][l];
                }
                bt[i][k] = s;
            }
        }
        let mut total = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            for k in 0..4 {
                let mut s = Complex64::new(0.0, 0.0);
                for j in 0..4 {
                    s += a.0[i][j] * bt[j][k];
                }
                total += self.0[i][k].conj() * s;
            }
        }
        total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum WindowProfile {
    /// W ≡ 1 over the whole detector plane.
    #[default]
    Uniform,
    /// exp(−(x² + y²)/(2w²)).
    Gaussian { width: f64 },
}

impl WindowProfile {
    pub fn gaussian(width: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidParameter {
                name: "window_width",
                value: width,
                reason: "must be finite and positive",
            });
        }
        Ok(WindowProfile::Gaussian { width })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorSide {
    /// Plane z = +Z, sampling particle 1.
    A,
    /// Plane z = −Z, sampling particle 2.
    B,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorWindow {
    pub side: DetectorSide,
    pub profile: WindowProfile,
}

impl DetectorWindow {
    pub fn plane_z(&self, cfg: &PhysicalConfig) -> f64 {
        match self.side {
            DetectorSide::A => cfg.z,
            DetectorSide::B => -cfg.z,
        }
    }
}

pub fn window_weight(w: &DetectorWindow, x: f64, y: f64) -> f64 {
    match w.profile {
        WindowProfile::Uniform => 1.0,
        WindowProfile::Gaussian { width } => (-(x * x + y * y) / (2.0 * width * width)).exp(),
    }
}

/// d² + iħZ/P.
fn detection_width(cfg: &PhysicalConfig) -> Complex64 {
    Complex64::new(cfg.d * cfg.d, cfg.z / cfg.p)
}

/// Exponent of the factor multiplying the spin-exchanged term:
/// −4i d²PZ/(d² + iZ/P).
pub fn exchange_phase_exponent(cfg: &PhysicalConfig) -> Complex64 {
    Complex64::new(0.0, -4.0 * cfg.d * cfg.d * cfg.p * cfg.z) / detection_width(cfg)
}

/// Singlet amplitude at t = T with particle 1 on the plane z = Z and
/// particle 2 on z = −Z:
///
/// ```text
/// Ψ = N²/√2 · e^{−2iZ/P} · exp[(−(ρ² + 2Z²) + 2i d²PZ)/(2(d² + iZ/P))]
///     · [u↑(r₁) ⊗ u↓(r₂) − e^{−4i d²PZ/(d² + iZ/P)} u↓(r₁) ⊗ u↑(r₂)]
/// ```
///
/// with ρ² = x₁² + y₁² + x₂² + y₂².
pub fn singlet_at_detection(
    x1: f64,
    y1: f64,
    x2: f64,
    y2: f64,
    cfg: &PhysicalConfig,
    mode: SpinMode,
) -> TwoParticleAmplitude {
    let w = detection_width(cfg);
    let n = (cfg.d / (PI.sqrt() * w)).powf(1.5);
    let rho2 = x1 * x1 + y1 * y1 + x2 * x2 + y2 * y2;
    let exponent = Complex64::new(
        -(rho2 + 2.0 * cfg.z * cfg.z),
        2.0 * cfg.d * cfg.d * cfg.p * cfg.z,
    ) / (2.0 * w)
        + Complex64::new(0.0, -2.0 * cfg.z / cfg.p);
    let prefactor = n * n * FRAC_1_SQRT_2 * exponent.exp();

    let r1 = [x1, y1, cfg.z];
    let r2 = [x2, y2, -cfg.z];
    let up1 = detection_spinor_mode(SpinLabel::Up, r1, cfg, mode);
    let down2 = detection_spinor_mode(SpinLabel::Down, r2, cfg, mode);
    let down1 = detection_spinor_mode(SpinLabel::Down, r1, cfg, mode);
    let up2 = detection_spinor_mode(SpinLabel::Up, r2, cfg, mode);

    let direct = TwoParticleAmplitude::product(&up1, &down2);
    let exchanged = TwoParticleAmplitude::product(&down1, &up2);
    direct
        .add_scaled(&exchanged, -exchange_phase_exponent(cfg).exp())
        .scale(prefactor)
}

/// Antisymmetrized product of the closed-form packets with momenta ±Pẑ:
/// Ψ(r₁, r₂, t) = [Ψ↑(r₁; +Pẑ) ⊗ Ψ↓(r₂; −Pẑ) − Ψ↓(r₁; −Pẑ) ⊗ Ψ↑(r₂; +Pẑ)]/√2.
pub fn singlet_general(
    r1: [f64; 3],
    r2: [f64; 3],
    t: f64,
    cfg: &PhysicalConfig,
    mode: SpinMode,
) -> TwoParticleAmplitude {
    let forward = MomentumSpectrum::along_z(cfg.p, cfg.d);
    let backward = MomentumSpectrum::along_z(-cfg.p, cfg.d);
    let direct = TwoParticleAmplitude::product(
        &packet_closed(r1, t, &forward, SpinLabel::Up, mode),
        &packet_closed(r2, t, &backward, SpinLabel::Down, mode),
    );
    let exchanged = TwoParticleAmplitude::product(
        &packet_closed(r1, t, &backward, SpinLabel::Down, mode),
        &packet_closed(r2, t, &forward, SpinLabel::Up, mode),
    );
    direct
        .add_scaled(&exchanged, Complex64::new(-1.0, 0.0))
        .scale(Complex64::new(FRAC_1_SQRT_2, 0.0))
}
