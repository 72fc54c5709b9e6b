//! Axisymmetric surface description: positions, orthonormal frames, metric
//! factors, the harmonic 1-form basis, and the A/B homology cycles.
//!
//! A surface of revolution is generated by a closed curve
//! φ ↦ (ρ(φ), z(φ)) in the half-plane ρ > 0, swept in the azimuthal angle θ:
//!
//! ```text
//! x(θ,φ) = (ρ(φ) cos θ, ρ(φ) sin θ, z(φ)).
//! ```
//!
//! The orientation convention is fixed once here: θ̂ × φ̂ = n̂ with n̂ the
//! outward normal.  Every 90°-rotation (Hodge ⋆₂) downstream derives from
//! this choice.

use std::sync::Arc;

use crate::error::{Error, Result};

/// Position/frame/metric data at one boundary point.
#[derive(Debug, Clone, Copy)]
pub struct FrameSample {
    pub position: [f64; 3],
    pub theta_hat: [f64; 3],
    pub phi_hat: [f64; 3],
    pub n_hat: [f64; 3],
    /// Distance to the axis of revolution.
    pub rho: f64,
    /// Arc-length factor of the generating curve, σ = √(ρ′² + z′²).
    pub sigma: f64,
    /// Area element per unit dθ dφ, equal to ρσ.
    pub areal: f64,
}

type CurveFn = dyn Fn(f64) -> f64 + Send + Sync;

/// Surface of revolution given by a 2π-periodic generating curve with
/// analytic derivatives.
#[derive(Clone)]
pub struct SurfaceOfRevolution {
    rho: Arc<CurveFn>,
    z: Arc<CurveFn>,
    rho_d: Arc<CurveFn>,
    z_d: Arc<CurveFn>,
}

impl SurfaceOfRevolution {
    /// Build from closed-form callables.  The derivatives must be supplied
    /// analytically; numerical differentiation of the generating curve would
    /// pollute the metric factors.
    pub fn new(
        rho: impl Fn(f64) -> f64 + Send + Sync + 'static,
        z: impl Fn(f64) -> f64 + Send + Sync + 'static,
        rho_d: impl Fn(f64) -> f64 + Send + Sync + 'static,
        z_d: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let s = Self {
            rho: Arc::new(rho),
            z: Arc::new(z),
            rho_d: Arc::new(rho_d),
            z_d: Arc::new(z_d),
        };
        // reject pole-touching or degenerate curves
        let n = 257;
        for i in 0..n {
            let phi = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
            if (s.rho)(phi) <= 0.0 {
                return Err(Error::Geometry(format!(
                    "generating curve touches the axis: rho({phi}) = {}",
                    (s.rho)(phi)
                )));
            }
            if s.sigma(phi) <= 0.0 {
                return Err(Error::Geometry(format!("singular parameterization at phi = {phi}")));
            }
        }
        Ok(s)
    }

    pub fn rho(&self, phi: f64) -> f64 {
        (self.rho)(phi)
    }

    pub fn z(&self, phi: f64) -> f64 {
        (self.z)(phi)
    }

    pub fn rho_d(&self, phi: f64) -> f64 {
        (self.rho_d)(phi)
    }

    pub fn z_d(&self, phi: f64) -> f64 {
        (self.z_d)(phi)
    }

    pub fn sigma(&self, phi: f64) -> f64 {
        let rd = (self.rho_d)(phi);
        let zd = (self.z_d)(phi);
        rd.hypot(zd)
    }

    pub fn position(&self, theta: f64, phi: f64) -> [f64; 3] {
        let rho = self.rho(phi);
        [rho * theta.cos(), rho * theta.sin(), self.z(phi)]
    }

    /// Orthonormal frame and metric factors at (θ, φ).
    pub fn frame_at(&self, theta: f64, phi: f64) -> FrameSample {
        let rho = self.rho(phi);
        let z = self.z(phi);
        let rd = self.rho_d(phi);
        let zd = self.z_d(phi);
        let sigma = rd.hypot(zd);
        let (st, ct) = theta.sin_cos();
        let theta_hat = [-st, ct, 0.0];
        let phi_hat = [rd * ct / sigma, rd * st / sigma, zd / sigma];
        // n̂ = θ̂ × φ̂, outward for a counterclockwise generating curve
        let n_hat = [zd * ct / sigma, zd * st / sigma, -rd / sigma];
        FrameSample {
            position: [rho * ct, rho * st, z],
            theta_hat,
            phi_hat,
            n_hat,
            rho,
            sigma,
            areal: rho * sigma,
        }
    }

    /// Basis of the two-dimensional space of harmonic (closed and co-closed)
    /// tangential vector fields on a genus-1 surface of revolution:
    /// jH1 = θ̂/ρ and jH2 = n̂ × jH1 = φ̂/ρ.
    pub fn harmonic_basis_at(&self, theta: f64, phi: f64) -> ([f64; 3], [f64; 3]) {
        let f = self.frame_at(theta, phi);
        let jh1 = [f.theta_hat[0] / f.rho, f.theta_hat[1] / f.rho, f.theta_hat[2] / f.rho];
        let jh2 = [f.phi_hat[0] / f.rho, f.phi_hat[1] / f.rho, f.phi_hat[2] / f.rho];
        (jh1, jh2)
    }
}

/// Torus with unit generating circle: ρ(φ) = major_offset + cos φ, z = sin φ.
pub fn make_torus(major_offset: f64) -> Result<SurfaceOfRevolution> {
    if major_offset <= 1.0 {
        return Err(Error::Geometry(format!(
            "major_offset must exceed 1 (got {major_offset}); the generating circle would touch the axis"
        )));
    }
    SurfaceOfRevolution::new(
        move |phi: f64| major_offset + phi.cos(),
        |phi: f64| phi.sin(),
        |phi: f64| -phi.sin(),
        |phi: f64| phi.cos(),
    )
}

/// Which homology generator: A bounds a cross-section disk inside the solid,
/// B bounds a disk in the complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleKind {
    A,
    B,
}

/// Discretized homology cycle: per-node position, unit tangent, line element.
#[derive(Debug, Clone)]
pub struct Cycle {
    pub kind: CycleKind,
    pub nodes: Vec<CycleNode>,
}

#[derive(Debug, Clone, Copy)]
pub struct CycleNode {
    pub position: [f64; 3],
    pub tangent: [f64; 3],
    /// Line element per node for the periodic trapezoid rule.
    pub line_element: f64,
}

impl Cycle {
    pub fn total_length(&self) -> f64 {
        self.nodes.iter().map(|n| n.line_element).sum()
    }
}

/// Uniform nodes along the A-cycle (θ = 0, φ ∈ [0,2π)) or the B-cycle
/// (φ = π, θ ∈ [0,2π)).
pub fn cycle_nodes(s: &SurfaceOfRevolution, kind: CycleKind, n: usize) -> Result<Cycle> {
    if n < 8 {
        return Err(Error::InvalidArgument(format!("cycle needs at least 8 nodes, got {n}")));
    }
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let nodes = (0..n)
        .map(|i| {
            let t = i as f64 * h;
            match kind {
                CycleKind::A => {
                    let f = s.frame_at(0.0, t);
                    CycleNode { position: f.position, tangent: f.phi_hat, line_element: f.sigma * h }
                }
                CycleKind::B => {
                    let f = s.frame_at(t, std::f64::consts::PI);
                    CycleNode { position: f.position, tangent: f.theta_hat, line_element: f.rho * h }
                }
            }
        })
        .collect();
    Ok(Cycle { kind, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
    }

    fn norm(v: [f64; 3]) -> f64 {
        (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
    }

    fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    #[test]
    fn torus_positions() {
        let t = make_torus(2.0).unwrap();
        assert!(norm(sub(t.position(0.0, 0.0), [3.0, 0.0, 0.0])) < 1e-15);
        assert!(
            norm(sub(t.position(std::f64::consts::FRAC_PI_2, std::f64::consts::PI), [0.0, 1.0, 0.0]))
                < 1e-14
        );
    }

    #[test]
    fn degenerate_torus_rejected() {
        assert!(make_torus(1.0).is_err());
        assert!(make_torus(0.5).is_err());
    }

    #[test]
    fn frame_at_reference_point() {
        let t = make_torus(2.0).unwrap();
        let f = t.frame_at(0.0, 0.0);
        assert!(norm(sub(f.n_hat, [1.0, 0.0, 0.0])) < 1e-15);
        assert!(norm(sub(f.theta_hat, [0.0, 1.0, 0.0])) < 1e-15);
        assert!(norm(sub(f.phi_hat, [0.0, 0.0, 1.0])) < 1e-15);
        assert!((f.areal - 3.0).abs() < 1e-15);
    }

    #[test]
    fn frame_orthonormal_and_right_handed() {
        let t = make_torus(2.0).unwrap();
        // deterministic low-discrepancy sweep over (θ, φ)
        let mut u = 0.5f64;
        let mut v = 0.25f64;
        for _ in 0..10_000 {
            u = (u + 0.6180339887498949) % 1.0;
            v = (v + 0.7548776662466927) % 1.0;
            let f = t.frame_at(2.0 * std::f64::consts::PI * u, 2.0 * std::f64::consts::PI * v);
            assert!((norm(f.theta_hat) - 1.0).abs() < 1e-12);
            assert!((norm(f.phi_hat) - 1.0).abs() < 1e-12);
            assert!((norm(f.n_hat) - 1.0).abs() < 1e-12);
            assert!(dot(f.theta_hat, f.phi_hat).abs() < 1e-12);
            assert!(dot(f.theta_hat, f.n_hat).abs() < 1e-12);
            assert!(dot(f.phi_hat, f.n_hat).abs() < 1e-12);
            assert!(norm(sub(cross(f.theta_hat, f.phi_hat), f.n_hat)) < 1e-12);
        }
    }

    #[test]
    fn harmonic_basis_reference_values() {
        let t = make_torus(2.0).unwrap();
        let (jh1, jh2) = t.harmonic_basis_at(0.0, 0.0);
        assert!(norm(sub(jh1, [0.0, 1.0 / 3.0, 0.0])) < 1e-15);
        assert!(norm(sub(jh2, [0.0, 0.0, 1.0 / 3.0])) < 1e-15);
        // jH2 = n̂ × jH1 everywhere
        let mut u = 0.3f64;
        for _ in 0..200 {
            u = (u + 0.6180339887498949) % 1.0;
            let th = 2.0 * std::f64::consts::PI * u;
            let ph = 2.0 * std::f64::consts::PI * ((u * 7.0) % 1.0);
            let f = t.frame_at(th, ph);
            let (jh1, jh2) = t.harmonic_basis_at(th, ph);
            assert!(norm(sub(cross(f.n_hat, jh1), jh2)) < 1e-12);
        }
    }

    #[test]
    fn cycle_lengths_and_plane() {
        let t = make_torus(2.0).unwrap();
        let a = cycle_nodes(&t, CycleKind::A, 100).unwrap();
        let b = cycle_nodes(&t, CycleKind::B, 100).unwrap();
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((a.total_length() - two_pi).abs() < 1e-10);
        assert!((b.total_length() - two_pi).abs() < 1e-10);
        for node in &a.nodes {
            assert_eq!(node.position[1], 0.0);
        }
        assert!(cycle_nodes(&t, CycleKind::A, 4).is_err());
    }

    #[test]
    fn harmonic_basis_cycle_periods() {
        // ∮_B jH1 = 2π, ∮_A jH1 = 0; ∮_B jH2 = 0 and ∮_A jH2 = ∫σ/ρ dφ,
        // which is 2π/√3 for the offset-2 torus.
        let t = make_torus(2.0).unwrap();
        let a = cycle_nodes(&t, CycleKind::A, 400).unwrap();
        let b = cycle_nodes(&t, CycleKind::B, 400).unwrap();
        let period = |c: &Cycle, which: usize| -> f64 {
            c.nodes
                .iter()
                .map(|nd| {
                    let phi = nd.position[2].atan2(
                        (nd.position[0].hypot(nd.position[1])) - 2.0,
                    );
                    let theta = nd.position[1].atan2(nd.position[0]);
                    let (jh1, jh2) = t.harmonic_basis_at(theta, phi);
                    let j = if which == 1 { jh1 } else { jh2 };
                    dot(j, nd.tangent) * nd.line_element
                })
                .sum()
        };
        let two_pi = 2.0 * std::f64::consts::PI;
        assert!((period(&b, 1) - two_pi).abs() < 1e-10);
        assert!(period(&a, 1).abs() < 1e-10);
        assert!(period(&b, 2).abs() < 1e-10);
        assert!((period(&a, 2) - two_pi / 3f64.sqrt()).abs() < 1e-9);
    }
}
