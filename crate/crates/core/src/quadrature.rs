//! Tensor-product Gauss–Hermite quadrature for Gaussian-enveloped complex
//! integrands on ℝ¹..ℝ⁴, with node-doubling error estimates.
//!
//! Each axis is mapped as `x = center + √2·width·t`, so an integrand whose
//! real envelope is `exp(−(x − center)²/(2·width²))` times a polynomial is
//! integrated exactly once the rule is large enough.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const MAX_RULE_SIZE: usize = 256;
pub const MAX_DIMS: usize = 4;

/// Gauss–Hermite rule for the weight e^{−x²}.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `weights[i] · exp(nodes[i]²)`, computed without overflow.
    pub scaled_weights: Vec<f64>,
}

/// Nodes and weights of the n-point Gauss–Hermite rule, by Newton iteration
/// on orthonormal Hermite functions (which stay bounded for large n).
pub fn hermite_rule(n: usize) -> Result<HermiteRule> {
    if !(1..=MAX_RULE_SIZE).contains(&n) {
        return Err(Error::RuleSize(n));
    }
    let pi_m4 = std::f64::consts::PI.powf(-0.25);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let mut scaled = vec![0.0; n];
    let nf = n as f64;

    // Evaluates ψ_n(z) and ψ_n'(z) for orthonormal Hermite functions.
    let eval = |z: f64| -> (f64, f64) {
        let mut p1 = pi_m4 * (-0.5 * z * z).exp();
        let mut p2 = 0.0;
        for j in 1..=n {
            let jf = j as f64;
            let p3 = p2;
            p2 = p1;
            p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
        }
        // d/dz of p_n e^{-z²/2} = √(2n) ψ_{n-1} − z ψ_n; at a root the second term vanishes.
        (p1, (2.0 * nf).sqrt() * p2 - z * p1)
    };

    let m = n.div_ceil(2);
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = eval(z);
            dp = d;
            let z1 = z;
            z = z1 - p / d;
            if (z - z1).abs() <= 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        // One polish step at the converged root.
        let (p, d) = eval(z);
        if d != 0.0 {
            z -= p / d;
            dp = eval(z).1;
        }
        if n % 2 == 1 && i == m - 1 {
            z = 0.0;
            dp = eval(0.0).1;
        }
        let sw = 2.0 / (dp * dp);
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        scaled[i] = sw;
        scaled[n - 1 - i] = sw;
        let w = sw * (-z * z).exp();
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    // Ascending order.
    nodes.reverse();
    weights.reverse();
    scaled.reverse();
    Ok(HermiteRule {
        nodes,
        weights,
        scaled_weights: scaled,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Starting rule size; doubled until converged.
    pub nodes_per_axis: usize,
    /// Gaussian width σ of the real envelope along each axis.
    pub envelope_width: Vec<f64>,
    /// Envelope center per axis; empty means all zero.
    pub center: Vec<f64>,
    pub target_rel_tol: f64,
    pub max_nodes_per_axis: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_per_axis: 16,
            envelope_width: Vec::new(),
            center: Vec::new(),
            target_rel_tol: 1e-8,
            max_nodes_per_axis: 128,
        }
    }
}

impl QuadratureSpec {
    pub fn with_axes(&self, widths: Vec<f64>, centers: Vec<f64>) -> QuadratureSpec {
        QuadratureSpec {
            envelope_width: widths,
            center: centers,
            ..self.clone()
        }
    }

    /// Checks the budget fields only (not the axes).
    pub fn validate_budget(&self) -> Result<()> {
        if self.nodes_per_axis < 8 {
            return Err(Error::QuadratureSpec(format!(
                "nodes_per_axis = {} must be at least 8",
                self.nodes_per_axis
            )));
        }
        if self.max_nodes_per_axis > MAX_RULE_SIZE {
            return Err(Error::QuadratureSpec(format!(
                "max_nodes_per_axis = {} exceeds {MAX_RULE_SIZE}",
                self.max_nodes_per_axis
            )));
        }
        if self.nodes_per_axis > self.max_nodes_per_axis {
            return Err(Error::QuadratureSpec(format!(
                "nodes_per_axis = {} exceeds max_nodes_per_axis = {}",
                self.nodes_per_axis, self.max_nodes_per_axis
            )));
        }
        if !(self.target_rel_tol > 0.0) {
            return Err(Error::QuadratureSpec(format!(
                "target_rel_tol = {} must be positive",
                self.target_rel_tol
            )));
        }
        Ok(())
    }

    fn validate(&self, dims: usize) -> Result<()> {
        self.validate_budget()?;
        if !(1..=MAX_DIMS).contains(&dims) {
            return Err(Error::QuadratureSpec(format!(
                "dimension {dims} outside 1..={MAX_DIMS}"
            )));
        }
        if self.envelope_width.len() != dims {
            return Err(Error::QuadratureSpec(format!(
                "{} envelope widths given for {dims} dimensions",
                self.envelope_width.len()
            )));
        }
        if !self.center.is_empty() && self.center.len() != dims {
            return Err(Error::QuadratureSpec(format!(
                "{} centers given for {dims} dimensions",
                self.center.len()
            )));
        }
        if let Some(w) = self
            .envelope_width
            .iter()
            .find(|w| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::QuadratureSpec(format!(
                "envelope width {w} must be finite and positive"
            )));
        }
        Ok(())
    }

    fn center(&self, axis: usize) -> f64 {
        self.center.get(axis).copied().unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub abs_err_estimate: f64,
    /// Total integrand evaluations of the finest rule used.
    pub nodes_used: usize,
}

/// Vector-valued counterpart of [`QuadResult`]; all outputs share one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiQuadResult {
    pub values: Vec<Complex64>,
    pub abs_err_estimate: Vec<f64>,
    pub nodes_per_axis: usize,
    pub nodes_used: usize,
}

/// Applies a fixed n-point tensor rule to a vector-valued integrand.
///
/// `f(point, out)` must overwrite `out`. Summation order is fixed: partial
/// sums over the inner axes are accumulated per outer-axis node and then
/// added in node order, so results do not depend on thread scheduling.
pub fn tensor_sum<F>(
    f: &F,
    dims: usize,
    outputs: usize,
    n: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<Complex64>>
where
    F: Fn(&[f64], &mut [Complex64]) + Sync,
{
    spec.validate(dims)?;
    let rule = hermite_rule(n)?;
    let axes: Vec<(Vec<f64>, Vec<f64>)> = (0..dims)
        .map(|k| {
            let scale = std::f64::consts::SQRT_2 * spec.envelope_width[k];
            let c = spec.center(k);
            let xs = rule.nodes.iter().map(|t| c + scale * t).collect();
            let ws = rule.scaled_weights.iter().map(|w| w * scale).collect();
            (xs, ws)
        })
        .collect();

    let partials: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|i0| {
            let mut acc = vec![Complex64::new(0.0, 0.0); outputs];
            let mut out = vec![Complex64::new(0.0, 0.0); outputs];
            let mut point = vec![0.0; dims];
            let mut idx = vec![0usize; dims];
            idx[0] = i0;
            point[0] = axes[0].0[i0];
            let w0 = axes[0].1[i0];
            loop {
                let mut w = w0;
                for k in 1..dims {
                    point[k] = axes[k].0[idx[k]];
                    w *= axes[k].1[idx[k]];
                }
                f(&point, &mut out);
                for (a, o) in acc.iter_mut().zip(out.iter()) {
                    *a += o * w;
                }
                // Odometer over axes 1..dims.
                let mut k = dims;
                loop {
                    if k == 1 {
                        return acc;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < n {
                        break;
                    }
                    idx[k] = 0;
                }
            }
        })
        .collect();

    let mut total = vec![Complex64::new(0.0, 0.0); outputs];
    for p in partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    Ok(total)
}

/// Integrates a vector-valued integrand, doubling the rule until
/// `max_k |v_k(n) − v_k(2n)| ≤ tol · max_k |v_k(2n)|`.
pub fn integrate_many<F>(
    f: F,
    dims: usize,
    outputs: usize,
    spec: &QuadratureSpec,
) -> Result<MultiQuadResult>
where
    F: Fn(&[f64], &mut [Complex64]) + Sync,
{
    spec.validate(dims)?;
    let mut n = spec.nodes_per_axis;
    let mut coarse = tensor_sum(&f, dims, outputs, n, spec)?;
    let mut last_err = f64::INFINITY;
    while 2 * n <= spec.max_nodes_per_axis {
        let fine = tensor_sum(&f, dims, outputs, 2 * n, spec)?;
        let errs: Vec<f64> = coarse
            .iter()
            .zip(fine.iter())
            .map(|(a, b)| (a - b).norm())
            .collect();
        let err = errs.iter().copied().fold(0.0, f64::max);
        let scale = fine.iter().map(|v| v.norm()).fold(0.0, f64::max);
        n *= 2;
        if err <= spec.target_rel_tol * scale {
            return Ok(MultiQuadResult {
                values: fine,
                abs_err_estimate: errs,
                nodes_per_axis: n,
                nodes_used: n.pow(dims as u32),
            });
        }
        last_err = err;
        coarse = fine;
    }
    Err(Error::NonConvergence {
        best: coarse,
        abs_err: last_err,
        nodes_per_axis: n,
    })
}

/// Scalar integration; see [`integrate_many`].
pub fn integrate<F>(f: F, dims: usize, spec: &QuadratureSpec) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> Complex64 + Sync,
{
    let r = integrate_many(
        |x: &[f64], out: &mut [Complex64]| out[0] = f(x),
        dims,
        1,
        spec,
    )?;
    Ok(QuadResult {
        value: r.values[0],
        abs_err_estimate: r.abs_err_estimate[0],
        nodes_used: r.nodes_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sqrt_pi() -> f64 {
        PI.sqrt()
    }

    #[test]
    fn one_point_rule() {
        let r = hermite_rule(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - sqrt_pi()).abs() < 1e-15);
    }

    #[test]
    fn two_point_second_moment() {
        let r = hermite_rule(2).unwrap();
        let m2: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x * x).sum();
        assert!((m2 - sqrt_pi() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn tenth_moment_with_twenty_nodes() {
        // ∫ x¹⁰ e^{−x²} dx = 9!!·√π/2⁵ = 945√π/32.
        let r = hermite_rule(20).unwrap();
        let m: f64 = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(x, w)| w * x.powi(10))
            .sum();
        let exact = 945.0 * sqrt_pi() / 32.0;
        assert!((m - exact).abs() / exact < 1e-13, "{m} vs {exact}");
        assert!((exact - 52.34).abs() < 0.01);
    }

    /// Moment oracle: (k−1)!!·√π/2^{k/2} for even k, zero for odd k.
    fn gaussian_moment(k: u32) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        let mut dfact = 1.0;
        let mut j = k as i64 - 1;
        while j > 1 {
            dfact *= j as f64;
            j -= 2;
        }
        dfact * sqrt_pi() / 2f64.powi(k as i32 / 2)
    }

    #[test]
    fn rules_are_exact_to_degree_2n_minus_1() {
        for n in [3usize, 5, 8, 13, 16] {
            let r = hermite_rule(n).unwrap();
            for k in 0..(2 * n as u32) {
                let m: f64 = r
                    .nodes
                    .iter()
                    .zip(&r.weights)
                    .map(|(x, w)| w * x.powi(k as i32))
                    .sum();
                let exact = gaussian_moment(k);
                let mass: f64 = r
                    .nodes
                    .iter()
                    .zip(&r.weights)
                    .map(|(x, w)| (w * x.powi(k as i32)).abs())
                    .sum();
                let tol = 1e-13 * mass.max(1.0);
                assert!((m - exact).abs() <= tol, "n={n} k={k}: {m} vs {exact}");
            }
        }
    }

    #[test]
    fn rules_are_symmetric_with_positive_weights() {
        for n in [1usize, 2, 7, 64, 128, 256] {
            let r = hermite_rule(n).unwrap();
            assert_eq!(r.nodes.len(), n);
            for i in 0..n {
                assert!((r.nodes[i] + r.nodes[n - 1 - i]).abs() < 1e-12);
                assert!(r.scaled_weights[i] > 0.0);
                assert!(r.weights[i] >= 0.0);
            }
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
            let total: f64 = r.weights.iter().sum();
            assert!((total - sqrt_pi()).abs() < 1e-12, "n={n}: {total}");
        }
    }

    #[test]
    fn rule_size_range() {
        assert_eq!(hermite_rule(0), Err(Error::RuleSize(0)));
        assert_eq!(hermite_rule(257), Err(Error::RuleSize(257)));
    }

    fn spec2(w: f64) -> QuadratureSpec {
        QuadratureSpec::default().with_axes(vec![w, w], vec![])
    }

    #[test]
    fn product_gaussian() {
        let r = integrate(
            |x| Complex64::new((-x[0] * x[0] - x[1] * x[1]).exp(), 0.0),
            2,
            &spec2(0.5f64.sqrt()),
        )
        .unwrap();
        assert!((r.value - Complex64::new(PI, 0.0)).norm() / PI < 1e-12);
        assert!(r.abs_err_estimate >= 0.0);
        assert!(r.nodes_used <= 128usize.pow(2));
    }

    #[test]
    fn complex_width_gaussian() {
        // ∫∫ exp(−(x²+y²)(1+i)/2) = 2π/(1+i) = π(1−i).
        let s = Complex64::new(0.5, 0.5);
        let r = integrate(|x| (-(x[0] * x[0] + x[1] * x[1]) * s).exp(), 2, &spec2(1.0)).unwrap();
        let exact = Complex64::new(PI, -PI);
        assert!(
            (r.value - exact).norm() / exact.norm() < 1e-9,
            "{:?}",
            r.value
        );
    }

    #[test]
    fn product_of_second_moments() {
        let r = integrate(
            |x| {
                let (a, b) = (x[0] * x[0], x[1] * x[1]);
                Complex64::new(a * b * (-a - b).exp(), 0.0)
            },
            2,
            &spec2(0.5f64.sqrt()),
        )
        .unwrap();
        assert!((r.value.re - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn four_dims_and_centers() {
        // Shifted Gaussian in 4D: ∫ exp(−|x − c|²) = π².
        let c = [1.0, -2.0, 0.5, 3.0];
        let spec = QuadratureSpec::default().with_axes(vec![0.5f64.sqrt(); 4], c.to_vec());
        let r = integrate(
            |x| {
                let r2: f64 = x.iter().zip(c.iter()).map(|(a, b)| (a - b).powi(2)).sum();
                Complex64::new((-r2).exp(), 0.0)
            },
            4,
            &spec,
        )
        .unwrap();
        assert!((r.value.re - PI * PI).abs() / (PI * PI) < 1e-12);
    }

    #[test]
    fn linearity() {
        let spec = spec2(1.0);
        let f = |x: &[f64]| {
            Complex64::new(0.0, x[0]).exp() * (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp()
        };
        let g = |x: &[f64]| {
            Complex64::new(x[1] * x[1], 0.0) * (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp()
        };
        let (a, b) = (Complex64::new(2.0, -1.0), Complex64::new(-0.5, 3.0));
        let rf = integrate(f, 2, &spec).unwrap();
        let rg = integrate(g, 2, &spec).unwrap();
        let rc = integrate(|x| a * f(x) + b * g(x), 2, &spec).unwrap();
        let bound = a.norm() * rf.abs_err_estimate
            + b.norm() * rg.abs_err_estimate
            + rc.abs_err_estimate
            + 1e-12 * rc.value.norm();
        assert!((rc.value - (a * rf.value + b * rg.value)).norm() <= bound);
    }

    #[test]
    fn non_convergence_carries_best_estimate() {
        // A wildly oscillating integrand cannot be resolved with 16 nodes.
        let spec = QuadratureSpec {
            nodes_per_axis: 8,
            max_nodes_per_axis: 16,
            ..QuadratureSpec::default()
        }
        .with_axes(vec![1.0], vec![]);
        let err = integrate(
            |x| Complex64::new(0.0, 40.0 * x[0] * x[0]).exp() * (-x[0] * x[0] / 2.0).exp(),
            1,
            &spec,
        )
        .unwrap_err();
        match err {
            Error::NonConvergence {
                best,
                abs_err,
                nodes_per_axis,
            } => {
                assert_eq!(best.len(), 1);
                assert!(best[0].norm().is_finite());
                assert!(abs_err > 0.0);
                assert_eq!(nodes_per_axis, 16);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn no_room_to_double_is_non_convergence() {
        let spec = QuadratureSpec {
            nodes_per_axis: 8,
            max_nodes_per_axis: 8,
            ..QuadratureSpec::default()
        }
        .with_axes(vec![1.0], vec![]);
        let err = integrate(
            |x| Complex64::new((-x[0] * x[0] / 2.0).exp(), 0.0),
            1,
            &spec,
        );
        assert!(matches!(err, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn spec_validation() {
        let f = |_: &[f64]| Complex64::new(1.0, 0.0);
        let bad_nodes = QuadratureSpec {
            nodes_per_axis: 4,
            ..QuadratureSpec::default()
        }
        .with_axes(vec![1.0], vec![]);
        assert!(integrate(f, 1, &bad_nodes).is_err());
        assert!(integrate(
            f,
            5,
            &QuadratureSpec::default().with_axes(vec![1.0; 5], vec![])
        )
        .is_err());
        assert!(integrate(
            f,
            2,
            &QuadratureSpec::default().with_axes(vec![1.0], vec![])
        )
        .is_err());
        assert!(integrate(
            f,
            1,
            &QuadratureSpec::default().with_axes(vec![-1.0], vec![])
        )
        .is_err());
    }

    #[test]
    fn deterministic_summation() {
        let spec = QuadratureSpec::default().with_axes(vec![1.0; 3], vec![]);
        let f = |x: &[f64]| {
            Complex64::new(x[0].sin() + x[1] * x[2], x[0] * x[1])
                * (-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) / 2.0).exp()
        };
        let a = tensor_sum(
            &|x: &[f64], o: &mut [Complex64]| o[0] = f(x),
            3,
            1,
            32,
            &spec,
        )
        .unwrap();
        let b = tensor_sum(
            &|x: &[f64], o: &mut [Complex64]| o[0] = f(x),
            3,
            1,
            32,
            &spec,
        )
        .unwrap();
        assert_eq!(a, b);
    }
}
