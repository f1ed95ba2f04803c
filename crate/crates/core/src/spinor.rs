//! Four-component spinors in the Dirac representation, spin projections
//! n̂·Σ with Σ = diag(σ, σ), and the detection-time spinors of the
//! counter-propagating packets.

use std::f64::consts::FRAC_PI_4;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::PhysicalConfig;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Phase carried by the small components of the packet spinors.
pub fn small_component_phase() -> Complex64 {
    Complex64::from_polar(1.0, FRAC_PI_4)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinLabel {
    Up,
    Down,
}

impl SpinLabel {
    /// Two-component Pauli spinor χ_s.
    pub fn pauli(self) -> [Complex64; 2] {
        match self {
            SpinLabel::Up => [ONE, ZERO],
            SpinLabel::Down => [ZERO, ONE],
        }
    }
}

/// Whether the λc-suppressed lower components are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpinMode {
    #[default]
    Leading,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor4(pub [Complex64; 4]);

impl Spinor4 {
    pub const ZERO: Spinor4 = Spinor4([ZERO; 4]);

    pub fn dot(&self, other: &Spinor4) -> Complex64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scale(&self, s: Complex64) -> Spinor4 {
        Spinor4(self.0.map(|c| c * s))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest componentwise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Spinor4) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for Spinor4 {
    type Output = Spinor4;
    fn add(self, rhs: Spinor4) -> Spinor4 {
        Spinor4(std::array::from_fn(|k| self.0[k] + rhs.0[k]))
    }
}

impl Sub for Spinor4 {
    type Output = Spinor4;
    fn sub(self, rhs: Spinor4) -> Spinor4 {
        Spinor4(std::array::from_fn(|k| self.0[k] - rhs.0[k]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4(pub [[Complex64; 4]; 4]);

impl Matrix4 {
    pub fn zero() -> Self {
        Matrix4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for k in 0..4 {
            m.0[k][k] = ONE;
        }
        m
    }

    /// diag(s, s) for a 2×2 block s.
    pub fn block_diagonal(s: [[Complex64; 2]; 2]) -> Self {
        let mut m = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                m.0[r][c] = s[r][c];
                m.0[r + 2][c + 2] = s[r][c];
            }
        }
        m
    }

    /// [[0, s], [s, 0]] for a 2×2 block s.
    pub fn block_off_diagonal(s: [[Complex64; 2]; 2]) -> Self {
        let mut m = Self::zero();
        for r in 0..2 {
            for c in 0..2 {
                m.0[r][c + 2] = s[r][c];
                m.0[r + 2][c] = s[r][c];
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        Matrix4(std::array::from_fn(|r| {
            std::array::from_fn(|c| self.0[c][r].conj())
        }))
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|k| self.0[k][k]).sum()
    }

    pub fn max_abs_diff(&self, other: &Matrix4) -> f64 {
        let mut m: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                m = m.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        m
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }
}

impl Mul for Matrix4 {
    type Output = Matrix4;
    fn mul(self, rhs: Matrix4) -> Matrix4 {
        Matrix4(std::array::from_fn(|r| {
            std::array::from_fn(|c| (0..4).map(|k| self.0[r][k] * rhs.0[k][c]).sum())
        }))
    }
}

impl Mul<Spinor4> for Matrix4 {
    type Output = Spinor4;
    fn mul(self, v: Spinor4) -> Spinor4 {
        Spinor4(std::array::from_fn(|r| {
            (0..4).map(|k| self.0[r][k] * v.0[k]).sum()
        }))
    }
}

impl Add for Matrix4 {
    type Output = Matrix4;
    fn add(self, rhs: Matrix4) -> Matrix4 {
        Matrix4(std::array::from_fn(|r| {
            std::array::from_fn(|c| self.0[r][c] + rhs.0[r][c])
        }))
    }
}

/// A direction in space, normalized to within 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector3 {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitVector3 {
    pub const X: UnitVector3 = UnitVector3 {
        x: 1.0,
        y: 0.0,
        z: 0.0,
    };
    pub const Y: UnitVector3 = UnitVector3 {
        x: 0.0,
        y: 1.0,
        z: 0.0,
    };
    pub const Z: UnitVector3 = UnitVector3 {
        x: 0.0,
        y: 0.0,
        z: 1.0,
    };

    /// Accepts only vectors that are already unit length.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if !n2.is_finite() || (n2 - 1.0).abs() > 1e-12 {
            return Err(Error::NotUnit(x, y, z));
        }
        Ok(UnitVector3 { x, y, z })
    }

    /// Rescales any finite non-zero vector to unit length.
    pub fn normalize(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !n.is_finite() {
            return Err(Error::NotUnit(x, y, z));
        }
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(UnitVector3 {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &UnitVector3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }
}

pub fn pauli_x() -> [[Complex64; 2]; 2] {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub fn pauli_y() -> [[Complex64; 2]; 2] {
    [[ZERO, -I], [I, ZERO]]
}

pub fn pauli_z() -> [[Complex64; 2]; 2] {
    [[ONE, ZERO], [ZERO, -ONE]]
}

/// n·σ for a real 3-vector n (not necessarily unit).
fn pauli_dot(n: [f64; 3]) -> [[Complex64; 2]; 2] {
    let [x, y, z] = n;
    [
        [Complex64::new(z, 0.0), Complex64::new(x, -y)],
        [Complex64::new(x, y), Complex64::new(-z, 0.0)],
    ]
}

/// γ⁰ = diag(1, 1, −1, −1).
pub fn gamma0() -> Matrix4 {
    let mut m = Matrix4::identity();
    m.0[2][2] = -ONE;
    m.0[3][3] = -ONE;
    m
}

/// α_k = [[0, σ_k], [σ_k, 0]] for k = 0, 1, 2 (x, y, z).
pub fn alpha(k: usize) -> Matrix4 {
    let s = match k {
        0 => pauli_x(),
        1 => pauli_y(),
        2 => pauli_z(),
        _ => panic!("alpha index {k} out of range"),
    };
    Matrix4::block_off_diagonal(s)
}

/// Spin projection n̂·Σ with Σ = diag(σ, σ).
pub fn sigma_projection(n: &UnitVector3) -> Matrix4 {
    Matrix4::block_diagonal(pauli_dot(n.components()))
}

/// (σ·K)χ_s for a complex 3-vector K.
pub(crate) fn sigma_dot_complex(k: [Complex64; 3], s: SpinLabel) -> [Complex64; 2] {
    let [kx, ky, kz] = k;
    match s {
        SpinLabel::Up => [kz, kx + I * ky],
        SpinLabel::Down => [kx - I * ky, -kz],
    }
}

/// λc → 0 limit: the bare Pauli spinor in the upper components.
pub fn leading_order_spinor(s: SpinLabel) -> Spinor4 {
    let [a, b] = s.pauli();
    Spinor4([a, b, ZERO, ZERO])
}

/// Position-dependent spinor at the detection time t = T, with λc = 1 and
/// the common denominator d² + iZ/P:
///
/// ```text
/// u↑(r) = (1, 0, e^{iπ/4}/2 · (iz + d²P)/D, e^{iπ/4}/2 · (ix − y)/D)
/// u↓(r) = (0, 1, e^{iπ/4}/2 · (ix + y)/D, e^{iπ/4}/2 · (−iz − d²P)/D)
/// ```
pub fn detection_spinor(s: SpinLabel, r: [f64; 3], cfg: &PhysicalConfig) -> Spinor4 {
    let [x, y, z] = r;
    let denom = Complex64::new(cfg.d * cfg.d, cfg.z / cfg.p);
    let pre = small_component_phase() * 0.5 / denom;
    let d2p = cfg.d * cfg.d * cfg.p;
    match s {
        SpinLabel::Up => Spinor4([
            ONE,
            ZERO,
            pre * Complex64::new(d2p, z),
            pre * Complex64::new(-y, x),
        ]),
        SpinLabel::Down => Spinor4([
            ZERO,
            ONE,
            pre * Complex64::new(y, x),
            pre * Complex64::new(-d2p, -z),
        ]),
    }
}

pub fn detection_spinor_mode(
    s: SpinLabel,
    r: [f64; 3],
    cfg: &PhysicalConfig,
    mode: SpinMode,
) -> Spinor4 {
    match mode {
        SpinMode::Leading => leading_order_spinor(s),
        SpinMode::Full => detection_spinor(s, r, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
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
    fn sigma_z_is_diagonal() {
        let m = sigma_projection(&UnitVector3::Z);
        let mut expect = Matrix4::zero();
        for (k, v) in [1.0, -1.0, 1.0, -1.0].into_iter().enumerate() {
            expect.0[k][k] = c(v, 0.0);
        }
        assert_eq!(m, expect);
    }

    #[test]
    fn sigma_squares_to_identity() {
        let s = 1.0 / 3f64.sqrt();
        let n = UnitVector3::new(s, s, s).unwrap();
        let m = sigma_projection(&n);
        assert!((m * m).max_abs_diff(&Matrix4::identity()) < 1e-15);
        assert!(m.is_hermitian(0.0));
        assert!(m.trace().norm() < 1e-15);
    }

    #[test]
    fn sigma_x_flips_spin() {
        let v = sigma_projection(&UnitVector3::X) * leading_order_spinor(SpinLabel::Up);
        assert_eq!(v, leading_order_spinor(SpinLabel::Down));
    }

    #[test]
    fn leading_up_is_sigma_z_eigenvector() {
        let up = leading_order_spinor(SpinLabel::Up);
        assert_eq!(up, Spinor4([ONE, ZERO, ZERO, ZERO]));
        assert_eq!(
            leading_order_spinor(SpinLabel::Down),
            Spinor4([ZERO, ONE, ZERO, ZERO])
        );
        assert_eq!(sigma_projection(&UnitVector3::Z) * up, up);
    }

    #[test]
    fn unit_vector_validation() {
        assert!(UnitVector3::new(1.0, 1.0, 0.0).is_err());
        assert!(UnitVector3::new(0.6, 0.8, 0.0).is_ok());
        assert_eq!(
            UnitVector3::normalize(0.0, 0.0, 0.0),
            Err(Error::ZeroVector)
        );
        let u = UnitVector3::normalize(3.0, 0.0, 4.0).unwrap();
        assert!((u.x() - 0.6).abs() < 1e-15 && (u.z() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn projection_algebra_random_orthogonal_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let id = Matrix4::identity();
        for _ in 0..100 {
            let n = random_unit(&mut rng);
            let w = random_unit(&mut rng);
            // Gram-Schmidt against n.
            let proj = n.dot(&w);
            let Ok(m) = UnitVector3::normalize(
                w.x() - proj * n.x(),
                w.y() - proj * n.y(),
                w.z() - proj * n.z(),
            ) else {
                continue;
            };
            let a = sigma_projection(&n);
            let b = sigma_projection(&m);
            assert!(a.is_hermitian(1e-12));
            assert!((a * a).max_abs_diff(&id) < 1e-12);
            assert!((a * b + b * a).max_abs_diff(&Matrix4::zero()) < 1e-12);
        }
    }

    #[test]
    fn dirac_matrices_anticommute() {
        let beta = gamma0();
        for i in 0..3 {
            let ai = alpha(i);
            assert!((ai * ai).max_abs_diff(&Matrix4::identity()) < 1e-15);
            assert!((ai * beta + beta * ai).max_abs_diff(&Matrix4::zero()) < 1e-15);
            for j in (i + 1)..3 {
                let aj = alpha(j);
                assert!((ai * aj + aj * ai).max_abs_diff(&Matrix4::zero()) < 1e-15);
            }
        }
    }

    #[test]
    fn detection_spinor_at_origin() {
        let cfg = PhysicalConfig::new(1000.0, 0.001, 700.0).unwrap();
        let denom = c(cfg.d * cfg.d, cfg.z / cfg.p);
        let ph = small_component_phase();
        let d2p = cfg.d * cfg.d * cfg.p;

        let up = detection_spinor(SpinLabel::Up, [0.0; 3], &cfg);
        assert_eq!(up.0[0], ONE);
        assert!((up.0[2] - ph * 0.5 * d2p / denom).norm() < 1e-18);
        assert_eq!(up.0[3], ZERO);

        let down = detection_spinor(SpinLabel::Down, [0.0; 3], &cfg);
        assert_eq!(down.0[1], ONE);
        assert!((down.0[3] - ph * 0.5 * (-d2p) / denom).norm() < 1e-18);
        assert_eq!(down.0[2], ZERO);
    }

    #[test]
    fn detection_spinor_transverse_dependence() {
        let cfg = PhysicalConfig::new(1000.0, 0.001, 1000.0).unwrap();
        let base = detection_spinor(SpinLabel::Up, [0.0, 0.0, 0.0], &cfg);
        let (x, y) = (310.0, -120.0);
        let shifted = detection_spinor(SpinLabel::Up, [x, y, 0.0], &cfg);
        assert_eq!(base.0[2], shifted.0[2]);
        let ratio = shifted.0[3] / c(-y, x);
        let ratio2 = detection_spinor(SpinLabel::Up, [1.0, 0.0, 0.0], &cfg).0[3] / I;
        assert!((ratio - ratio2).norm() < 1e-18);
    }

    #[test]
    fn small_components_scale_with_inverse_width() {
        // At fixed (ζ, κ) and r/d, the small components fall as 1/d.
        let (zeta, kappa) = (1.0, 1.0);
        let mags: Vec<f64> = [1000.0, 2000.0, 4000.0]
            .iter()
            .map(|&d| {
                let cfg = PhysicalConfig::new(d, kappa / d, zeta * d).unwrap();
                let u = detection_spinor(SpinLabel::Up, [0.3 * d, -0.2 * d, zeta * d], &cfg);
                (u.0[2].norm_sqr() + u.0[3].norm_sqr()).sqrt()
            })
            .collect();
        assert!((mags[0] / mags[1] - 2.0).abs() < 1e-12);
        assert!((mags[1] / mags[2] - 2.0).abs() < 1e-12);
    }
}
