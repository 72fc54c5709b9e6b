//! Per-mode exterior calculus on the boundary: surface gradient, 90°
//! rotation (the ⋆₂ / n̂× operator), the modal Laplace–Beltrami operator,
//! and its mean-zero partial inverse R0.
//!
//! A scalar density on the surface is expanded as r(φ)·e^{imθ}; all
//! operators below act on the φ-profile for one fixed Fourier mode m.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::geometry::{FrameSample, SurfaceOfRevolution};
use crate::quadrature::{trig_diff2_matrix, trig_diff_matrix, trig_interp};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// The uniform φ grid on a surface of revolution with cached frames.
#[derive(Clone)]
pub struct SurfaceGrid {
    pub surface: SurfaceOfRevolution,
    pub n: usize,
    pub h: f64,
    pub phi: Vec<f64>,
    /// Frames at (θ = 0, φ_i).
    pub frames: Vec<FrameSample>,
}

impl SurfaceGrid {
    pub fn new(surface: &SurfaceOfRevolution, n: usize) -> Result<Self> {
        if n % 2 != 0 || n < 16 {
            return Err(Error::InvalidArgument(format!("grid size must be even and >= 16, got {n}")));
        }
        let h = TWO_PI / n as f64;
        let phi: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
        let frames = phi.iter().map(|&p| surface.frame_at(0.0, p)).collect();
        Ok(Self { surface: surface.clone(), n, h, phi, frames })
    }

    /// Quadrature weight of node i for surface integrals of modal profiles:
    /// ρσ·h (one azimuthal period contributes a further factor 2π).
    pub fn areal_weight(&self, i: usize) -> f64 {
        self.frames[i].areal * self.h
    }

    /// Weighted sum ∑ f_i ρ_i σ_i h of a profile.
    pub fn weighted_sum(&self, values: &[C64]) -> C64 {
        values.iter().enumerate().map(|(i, v)| v * self.areal_weight(i)).sum()
    }
}

/// Scalar density profile of one Fourier mode.
#[derive(Debug, Clone)]
pub struct ModalScalar {
    pub m: i32,
    pub values: Vec<C64>,
}

/// Tangential field profile of one Fourier mode, in physical
/// (orthonormal-frame) components: a along θ̂, b along φ̂.
#[derive(Debug, Clone)]
pub struct ModalTangentField {
    pub m: i32,
    pub a: Vec<C64>,
    pub b: Vec<C64>,
}

impl ModalTangentField {
    pub fn zeros(m: i32, n: usize) -> Self {
        Self { m, a: vec![C64::new(0.0, 0.0); n], b: vec![C64::new(0.0, 0.0); n] }
    }

    /// Resample both components onto a finer uniform grid.
    pub fn upsample(&self, n_up: usize) -> Self {
        let h = TWO_PI / n_up as f64;
        let a = (0..n_up).map(|i| trig_interp(&self.a, i as f64 * h)).collect();
        let b = (0..n_up).map(|i| trig_interp(&self.b, i as f64 * h)).collect();
        Self { m: self.m, a, b }
    }
}

/// Surface gradient of r(φ)e^{imθ}: a = i m r / ρ, b = r′ / σ.
pub fn surface_gradient(grid: &SurfaceGrid, r: &ModalScalar) -> ModalTangentField {
    let n = grid.n;
    let d = trig_diff_matrix(n);
    let mut a = vec![C64::new(0.0, 0.0); n];
    let mut b = vec![C64::new(0.0, 0.0); n];
    for i in 0..n {
        let mut db = C64::new(0.0, 0.0);
        for j in 0..n {
            db += r.values[j] * d[i * n + j];
        }
        a[i] = C64::new(0.0, r.m as f64) * r.values[i] / grid.frames[i].rho;
        b[i] = db / grid.frames[i].sigma;
    }
    ModalTangentField { m: r.m, a, b }
}

/// 90° rotation v ↦ n̂ × v: (a, b) ↦ (−b, a).
pub fn rotate90(v: &ModalTangentField) -> ModalTangentField {
    ModalTangentField { m: v.m, a: v.b.iter().map(|x| -x).collect(), b: v.a.clone() }
}

/// Spectral collocation matrix of the modal Laplace–Beltrami operator,
/// Δ_m r = (ρσ)⁻¹ ∂φ((ρ/σ) ∂φ r) − m² r / ρ².
///
/// The divergence form is expanded to c′∂φ + c∂φ² (c = ρ/σ, c′ computed
/// spectrally) so that the second derivative can use the direct spectral
/// matrix; composing two first-derivative matrices would annihilate the
/// Nyquist mode and leave a spurious kernel.
pub fn laplace_beltrami_matrix(grid: &SurfaceGrid, m: i32) -> DMatrix<f64> {
    let n = grid.n;
    let d = trig_diff_matrix(n);
    let d2 = trig_diff2_matrix(n);
    let c: Vec<f64> = grid.frames.iter().map(|f| f.rho / f.sigma).collect();
    let c_d: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| c[j] * d[i * n + j]).sum())
        .collect();
    let m2 = (m as f64) * (m as f64);
    DMatrix::<f64>::from_fn(n, n, |i, j| {
        let mut v = (c_d[i] * d[i * n + j] + c[i] * d2[i * n + j]) / grid.frames[i].areal;
        if i == j {
            v -= m2 / (grid.frames[i].rho * grid.frames[i].rho);
        }
        v
    })
}

/// Partial inverse of Δ_m.
///
/// For m ≠ 0 the operator is invertible and this is a plain LU inverse.
/// For m = 0 the constants span the kernel and the range is the mean-zero
/// subspace; the inverse is realized through the bordered system
/// [Δ₀, 𝟙; wᵀ, 0] which pins the additive constant.
pub struct R0 {
    pub m: i32,
    n: usize,
    lu: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    weights: Vec<f64>,
}

impl R0 {
    pub fn new(grid: &SurfaceGrid, m: i32) -> Result<Self> {
        let n = grid.n;
        let lap = laplace_beltrami_matrix(grid, m);
        let weights: Vec<f64> = (0..n).map(|i| grid.areal_weight(i)).collect();
        let lu = if m == 0 {
            let mut bordered = DMatrix::<f64>::zeros(n + 1, n + 1);
            bordered.view_mut((0, 0), (n, n)).copy_from(&lap);
            for i in 0..n {
                bordered[(i, n)] = 1.0;
                bordered[(n, i)] = weights[i];
            }
            bordered.lu()
        } else {
            lap.lu()
        };
        Ok(Self { m, n, lu, weights })
    }

    /// Solve Δ_m u = r.  For m = 0 the input must have (weighted) mean zero
    /// and the output is returned mean-zero.
    pub fn apply(&self, r: &ModalScalar) -> Result<ModalScalar> {
        if r.m != self.m {
            return Err(Error::InvalidArgument(format!(
                "R0 built for mode {} applied to mode {}",
                self.m, r.m
            )));
        }
        if r.values.len() != self.n {
            return Err(Error::InvalidArgument("grid size mismatch".into()));
        }
        let size = if self.m == 0 { self.n + 1 } else { self.n };
        let solve_real = |rhs: Vec<f64>| -> Result<Vec<f64>> {
            let v = nalgebra::DVector::from_vec(rhs);
            self.lu
                .solve(&v)
                .map(|s| s.as_slice().to_vec())
                .ok_or_else(|| Error::Linalg("singular Laplace-Beltrami system".into()))
        };
        if self.m == 0 {
            let mean: C64 =
                r.values.iter().enumerate().map(|(i, v)| v * self.weights[i]).sum();
            let scale: f64 = r.values.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
            if mean.norm() > 1e-10 * scale * self.weights.iter().sum::<f64>() {
                return Err(Error::InvalidArgument(format!(
                    "R0 at mode 0 requires mean-zero input (weighted mean {mean})"
                )));
            }
        }
        let mut rhs_re = vec![0.0; size];
        let mut rhs_im = vec![0.0; size];
        for i in 0..self.n {
            rhs_re[i] = r.values[i].re;
            rhs_im[i] = r.values[i].im;
        }
        let sre = solve_real(rhs_re)?;
        let sim = solve_real(rhs_im)?;
        let values = (0..self.n).map(|i| C64::new(sre[i], sim[i])).collect();
        Ok(ModalScalar { m: self.m, values })
    }

    /// Crate-internal solve against an arbitrary right-hand side; for m = 0
    /// the weighted mean is projected out first (the bordered system then
    /// returns R0 of the projected input).
    pub(crate) fn solve_projected(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        if self.m == 0 {
            let total: f64 = self.weights.iter().sum();
            let mean: C64 = rhs
                .iter()
                .enumerate()
                .map(|(i, v)| v * self.weights[i])
                .sum::<C64>()
                / total;
            let proj: Vec<C64> = rhs.iter().map(|v| v - mean).collect();
            Ok(self.apply(&ModalScalar { m: 0, values: proj })?.values)
        } else {
            Ok(self.apply(&ModalScalar { m: self.m, values: rhs.to_vec() })?.values)
        }
    }
}
