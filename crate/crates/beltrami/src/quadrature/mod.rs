//! Periodic trapezoid rule, hybrid Gauss-trapezoidal corrections for
//! logarithmically singular periodic integrands, adaptive Gauss-Kronrod
//! panels, and trigonometric interpolation/differentiation on the uniform
//! φ grid.

pub mod tables;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Trapezoid rule for a smooth 2π-periodic integrand; spectrally accurate.
pub fn trapezoid_periodic(f: impl Fn(f64) -> C64, n: usize) -> C64 {
    let h = TWO_PI / n as f64;
    let sum: C64 = (0..n).map(|i| f(i as f64 * h)).sum();
    sum * h
}

/// Hybrid Gauss-trapezoidal rule for ∫₀^{2π} F(φ) dφ where F has (at worst)
/// a logarithmic singularity at one grid node of the uniform n-point mesh.
///
/// Base nodes within `excluded_band` of the target are dropped and replaced
/// by off-grid correction nodes on both sides of the singularity.
#[derive(Debug, Clone)]
pub struct AlpertRule {
    pub n: usize,
    pub order: usize,
    band: usize,
    nodes: &'static [f64],
    weights: &'static [f64],
}

impl AlpertRule {
    /// Rule for an n-point periodic grid: 16th order when the grid can
    /// accommodate the wide correction band, 8th order otherwise.
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 * tables::LOG8_A + 2 {
            return Err(Error::InvalidArgument(format!(
                "grid too coarse for the log rule: n = {n}"
            )));
        }
        if n < 32 {
            Ok(Self {
                n,
                order: 8,
                band: tables::LOG8_A,
                nodes: &tables::LOG8_X,
                weights: &tables::LOG8_W,
            })
        } else {
            Ok(Self {
                n,
                order: 16,
                band: tables::LOG16_A,
                nodes: &tables::LOG16_X,
                weights: &tables::LOG16_W,
            })
        }
    }

    /// Number of base grid nodes dropped around the target (target included).
    pub fn excluded_band(&self) -> usize {
        2 * self.band - 1
    }

    /// One-sided band: nodes at cyclic distance < band are excluded.
    pub fn band(&self) -> usize {
        self.band
    }

    /// Signed correction-node offsets from the target, in units of the grid
    /// spacing, paired with their weights.
    pub fn correction_nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let plus = self.nodes.iter().zip(self.weights).map(|(&x, &w)| (x, w));
        let minus = self.nodes.iter().zip(self.weights).map(|(&x, &w)| (-x, w));
        plus.chain(minus)
    }

    /// Apply the rule.  `grid_samples[i]` holds F(2πi/n); `singular_eval` is
    /// consulted at the off-grid correction abscissae near the target.
    pub fn integrate(
        &self,
        grid_samples: &[C64],
        singular_eval: impl Fn(f64) -> C64,
        target_index: usize,
    ) -> Result<C64> {
        if grid_samples.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "expected {} grid samples, got {}",
                self.n,
                grid_samples.len()
            )));
        }
        if target_index >= self.n {
            return Err(Error::InvalidArgument(format!(
                "target index {target_index} out of range for n = {}",
                self.n
            )));
        }
        let h = TWO_PI / self.n as f64;
        let phi_t = target_index as f64 * h;
        let mut sum = C64::new(0.0, 0.0);
        for (i, &v) in grid_samples.iter().enumerate() {
            let d = cyclic_distance(i, target_index, self.n);
            if d >= self.band {
                sum += v;
            }
        }
        for (x, w) in self.correction_nodes() {
            sum += singular_eval(phi_t + x * h) * w;
        }
        Ok(sum * h)
    }
}

/// Cyclic index distance on an n-periodic grid.
pub fn cyclic_distance(i: usize, j: usize, n: usize) -> usize {
    let d = if i > j { i - j } else { j - i };
    d.min(n - d)
}

/// Adaptive Gauss-Kronrod quadrature of f over [a, b] to relative/absolute
/// tolerance `tol` (error ≤ tol·(1 + |result|)).
pub fn adaptive_gauss(f: &impl Fn(f64) -> C64, a: f64, b: f64, tol: f64) -> Result<C64> {
    const MAX_DEPTH: usize = 40;
    fn recurse(
        f: &impl Fn(f64) -> C64,
        a: f64,
        b: f64,
        tol: f64,
        depth: usize,
        worst: &mut f64,
    ) -> C64 {
        let (k15, g7) = gk_panel(f, a, b);
        let err = (k15 - g7).norm();
        if err <= tol || depth >= MAX_DEPTH {
            if depth >= MAX_DEPTH {
                *worst = worst.max(err);
            }
            return k15;
        }
        let m = 0.5 * (a + b);
        recurse(f, a, m, tol * 0.5, depth + 1, worst)
            + recurse(f, m, b, tol * 0.5, depth + 1, worst)
    }
    // first pass to scale the tolerance by the result magnitude
    let (rough, _) = gk_panel(f, a, b);
    let scaled = tol * (1.0 + rough.norm());
    let mut worst = 0.0f64;
    let result = recurse(f, a, b, scaled, 0, &mut worst);
    if worst > scaled * 16.0 {
        return Err(Error::QuadratureNoConvergence { estimate: result, error: worst });
    }
    Ok(result)
}

/// One (K15, G7) panel evaluation on [a, b].
fn gk_panel(f: &impl Fn(f64) -> C64, a: f64, b: f64) -> (C64, C64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut k15 = C64::new(0.0, 0.0);
    let mut g7 = C64::new(0.0, 0.0);
    for i in 0..15 {
        let v = f(mid + half * tables::K15_X[i]);
        k15 += v * tables::K15_W[i];
        if i % 2 == 1 {
            g7 += v * tables::G7_W[i / 2];
        }
    }
    (k15 * half, g7 * half)
}

/// Non-adaptive 15-point Gauss-Legendre panel on [a, b].
pub fn gl15_panel(f: &mut impl FnMut(f64) -> C64, a: f64, b: f64) -> C64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..15 {
        acc += f(mid + half * tables::GL15_X[i]) * tables::GL15_W[i];
    }
    acc * half
}

/// Periodic cardinal (interpolation) weight sin(n t/2)·cot(t/2)/n at signed
/// node offset t, for an even n-point uniform grid.
pub fn trig_cardinal(n: usize, t: f64) -> f64 {
    let s = (0.5 * n as f64 * t).sin();
    let half = 0.5 * t;
    if half.sin().abs() < 1e-14 {
        if ((t / TWO_PI).round() * TWO_PI - t).abs() < 1e-13 {
            1.0
        } else {
            0.0
        }
    } else {
        s * (half.cos() / half.sin()) / n as f64
    }
}

/// Trigonometric (cardinal) interpolation of uniform periodic samples;
/// exact for trigonometric polynomials of degree < n/2.  Requires even n.
pub fn trig_interp(values: &[C64], phi: f64) -> C64 {
    let n = values.len();
    debug_assert!(n % 2 == 0, "trig_interp requires an even grid");
    let h = TWO_PI / n as f64;
    let mut acc = C64::new(0.0, 0.0);
    for (j, &v) in values.iter().enumerate() {
        acc += v * trig_cardinal(n, phi - j as f64 * h);
    }
    acc
}

/// Spectral differentiation of uniform periodic samples (even n).
pub fn trig_diff(values: &[C64]) -> Vec<C64> {
    let n = values.len();
    let d = trig_diff_matrix(n);
    (0..n)
        .map(|i| (0..n).map(|j| values[j] * d[i * n + j]).sum())
        .collect()
}

/// Dense spectral differentiation matrix for an even-n periodic grid,
/// D[i][j] = ½(−1)^{i−j} cot((φ_i − φ_j)/2), zero diagonal.
///
/// Note D annihilates the Nyquist sawtooth mode (−1)^i; second derivatives
/// must therefore use [`trig_diff2_matrix`] rather than D².
pub fn trig_diff_matrix(n: usize) -> Vec<f64> {
    assert!(n % 2 == 0, "spectral differentiation grid must be even");
    let h = TWO_PI / n as f64;
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let k = i as i64 - j as i64;
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let arg = 0.5 * (i as f64 - j as f64) * h;
            d[i * n + j] = 0.5 * sign * (arg.cos() / arg.sin());
        }
    }
    d
}

/// Dense spectral second-derivative matrix for an even-n periodic grid:
/// off-diagonal −(−1)^{i−j} / (2 sin²((φ_i − φ_j)/2)), diagonal
/// −n²/12 − 1/6.
pub fn trig_diff2_matrix(n: usize) -> Vec<f64> {
    assert!(n % 2 == 0, "spectral differentiation grid must be even");
    let h = TWO_PI / n as f64;
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                d[i * n + j] = -((n * n) as f64) / 12.0 - 1.0 / 6.0;
                continue;
            }
            let k = i as i64 - j as i64;
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let s = (0.5 * (i as f64 - j as f64) * h).sin();
            d[i * n + j] = -sign / (2.0 * s * s);
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn trapezoid_spectral() {
        let v = trapezoid_periodic(|t| c(t.sin().powi(2)), 20);
        assert!((v.re - std::f64::consts::PI).abs() < 1e-14);
        let v = trapezoid_periodic(|_| c(1.0), 4);
        assert!((v.re - TWO_PI).abs() < 1e-14);
        let v = trapezoid_periodic(|t| (C64::new(0.0, 3.0 * t)).exp(), 16);
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn alpert_weight_sum_matches_trapezoid() {
        // applied to the constant 1 the rule must reproduce 2π
        for n in [32usize, 50, 100] {
            let rule = AlpertRule::new(n).unwrap();
            let ones = vec![c(1.0); n];
            let v = rule.integrate(&ones, |_| c(1.0), 0).unwrap();
            assert!((v.re - TWO_PI).abs() < 1e-13, "n={n}: {}", v.re);
        }
        for n in [16usize, 20, 31] {
            let rule = AlpertRule::new(n).unwrap();
            assert_eq!(rule.order, 8);
            let ones = vec![c(1.0); n];
            let v = rule.integrate(&ones, |_| c(1.0), 3).unwrap();
            assert!((v.re - TWO_PI).abs() < 1e-13);
        }
    }

    #[test]
    fn alpert_classical_log_identities() {
        // ∫ log(4 sin²(t/2)) dt = 0 and ∫ log|2 sin(t/2)| cos t dt = −π
        let n = 50;
        let rule = AlpertRule::new(n).unwrap();
        let h = TWO_PI / n as f64;
        let f0 = |t: f64| c((4.0 * (0.5 * t).sin().powi(2)).ln());
        let f1 = |t: f64| c((2.0 * (0.5 * t).sin()).abs().ln() * t.cos());
        let g0: Vec<C64> = (0..n).map(|i| if i == 0 { c(0.0) } else { f0(i as f64 * h) }).collect();
        let g1: Vec<C64> = (0..n).map(|i| if i == 0 { c(0.0) } else { f1(i as f64 * h) }).collect();
        let v0 = rule.integrate(&g0, f0, 0).unwrap();
        let v1 = rule.integrate(&g1, f1, 0).unwrap();
        assert!(v0.norm() < 1e-10, "{}", v0.norm());
        assert!((v1.re + std::f64::consts::PI).abs() < 1e-10);
    }

    #[test]
    fn alpert_convergence_order() {
        // self-convergence on a tougher log integrand; order-16 rule must
        // gain at least 2^10 per grid doubling while above roundoff
        let f = |t: f64| {
            c((2.0 * (0.5 * t).sin()).abs().ln() * (6.0 * t).cos() * (2.0 * t).cos().exp())
        };
        let run = |n: usize| {
            let rule = AlpertRule::new(n).unwrap();
            let h = TWO_PI / n as f64;
            let g: Vec<C64> = (0..n).map(|i| if i == 0 { c(0.0) } else { f(i as f64 * h) }).collect();
            rule.integrate(&g, f, 0).unwrap()
        };
        let reference = run(800);
        let e50 = (run(50) - reference).norm();
        let e100 = (run(100) - reference).norm();
        assert!(e50 > 1e-12, "coarse error already at roundoff: {e50}");
        assert!(e100 < e50 / 1024.0, "rate too low: {e50} -> {e100}");
    }

    #[test]
    fn alpert_reduces_to_trapezoid_on_smooth() {
        // with no singular part the rule agrees with the plain trapezoid
        let n = 50;
        let rule = AlpertRule::new(n).unwrap();
        let f = |t: f64| c((t.cos()).exp());
        let h = TWO_PI / n as f64;
        let g: Vec<C64> = (0..n).map(|i| f(i as f64 * h)).collect();
        let v = rule.integrate(&g, f, 7).unwrap();
        let t = trapezoid_periodic(f, n);
        assert!((v - t).norm() < 1e-13);
    }

    #[test]
    fn adaptive_gauss_basics() {
        let one = adaptive_gauss(&|_| c(1.0), 0.0, 1.0, 1e-12).unwrap();
        assert!((one.re - 1.0).abs() < 1e-14);
        let sqrt = adaptive_gauss(&|t: f64| c(1.0 / t.sqrt()), 1e-12, 1.0, 1e-10).unwrap();
        assert!((sqrt.re - (2.0 - 2e-6)).abs() < 1e-8, "{}", sqrt.re);
        let osc = adaptive_gauss(&|t: f64| c((40.0 * t).cos()), 0.0, TWO_PI, 1e-12).unwrap();
        assert!(osc.norm() < 1e-11);
    }

    #[test]
    fn adaptive_gauss_agrees_with_trapezoid_on_periodic() {
        let f = |t: f64| C64::new((t.cos()).exp() * (3.0 * t).sin(), (2.0 * t).cos());
        let a = adaptive_gauss(&f, 0.0, TWO_PI, 1e-13).unwrap();
        let t = trapezoid_periodic(f, 64);
        assert!((a - t).norm() < 1e-12);
    }

    #[test]
    fn trig_interp_exactness() {
        let n = 16;
        let h = TWO_PI / n as f64;
        let vals: Vec<C64> = (0..n).map(|i| c((i as f64 * h).cos())).collect();
        let v = trig_interp(&vals, 0.3);
        assert!((v.re - 0.3f64.cos()).abs() < 1e-13);
        // node reproduction
        let v = trig_interp(&vals, 5.0 * h);
        assert!((v.re - (5.0 * h).cos()).abs() < 1e-13);
    }

    #[test]
    fn trig_diff_basics() {
        let n = 16;
        let h = TWO_PI / n as f64;
        let vals: Vec<C64> = (0..n).map(|i| c((i as f64 * h).sin())).collect();
        let d = trig_diff(&vals);
        for i in 0..n {
            assert!((d[i].re - (i as f64 * h).cos()).abs() < 1e-13);
        }
        let constant = vec![c(4.2); n];
        for v in trig_diff(&constant) {
            assert!(v.norm() < 1e-13);
        }
    }
}
