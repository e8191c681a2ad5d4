use crate::assembly::BoundarySpec;
use std::f64::consts::PI;

/// Decaying vortex on the unit square: `ψ = sin πx sin πy e^{−2π²t/Re}`,
/// `ω = 2π²ψ`. The convective term vanishes identically, so this solves
/// the full Navier–Stokes equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexDecay {
    pub reynolds: f64,
}

impl VortexDecay {
    pub fn new(reynolds: f64) -> Self {
        Self { reynolds }
    }

    fn decay(&self, t: f64) -> f64 {
        (-2.0 * PI * PI * t / self.reynolds).exp()
    }

    pub fn psi(&self, x: f64, y: f64, t: f64) -> f64 {
        (PI * x).sin() * (PI * y).sin() * self.decay(t)
    }

    pub fn psi_gradient(&self, x: f64, y: f64, t: f64) -> (f64, f64) {
        let e = self.decay(t);
        (
            PI * (PI * x).cos() * (PI * y).sin() * e,
            PI * (PI * x).sin() * (PI * y).cos() * e,
        )
    }

    pub fn omega(&self, x: f64, y: f64, t: f64) -> f64 {
        2.0 * PI * PI * self.psi(x, y, t)
    }

    /// `(u, v) = (ψ_y, −ψ_x)`.
    pub fn velocity(&self, x: f64, y: f64, t: f64) -> (f64, f64) {
        let (px, py) = self.psi_gradient(x, y, t);
        (py, -px)
    }

    pub fn psi_boundary(&self) -> BoundarySpec {
        let (a, b) = (*self, *self);
        BoundarySpec::dirichlet(move |x, y, t| a.psi(x, y, t))
            .with_gradient(move |x, y, t| b.psi_gradient(x, y, t))
            .with_analytic_normals(true)
    }

    pub fn omega_boundary(&self) -> BoundarySpec {
        let (a, b) = (*self, *self);
        BoundarySpec::dirichlet(move |x, y, t| a.omega(x, y, t))
            .with_gradient(move |x, y, t| {
                let (px, py) = b.psi_gradient(x, y, t);
                (2.0 * PI * PI * px, 2.0 * PI * PI * py)
            })
            .with_analytic_normals(true)
    }
}
