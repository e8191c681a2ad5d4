//! Test problems with exact solutions, and error measures against them.

mod vortex;

pub use vortex::VortexDecay;

use crate::assembly::{BoundarySpec, CoefficientField, CoefficientFunctions, PointCoefficients};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grid::{
    problem2_mapping, transform_with_metrics, Bounds, Grid2D, GridField, Mapping, MetricField,
};
use crate::operators::SolutionState;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// Value and derivatives of an exact solution at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub u: f64,
    pub ux: f64,
    pub uy: f64,
    pub uxx: f64,
    pub uxy: f64,
    pub uyy: f64,
    pub ut: f64,
}

type JetFn = Arc<dyn Fn(f64, f64, f64) -> Jet + Send + Sync>;

/// A scalar problem `φ_t − α₁φ_xx − βφ_xy − α₂φ_yy + c₁φ_x + c₂φ_y + dφ = s`
/// in physical coordinates, an exact solution, and the map from the
/// computational unit square (or `bounds`) to the physical domain.
#[derive(Clone)]
pub struct TestProblem {
    name: String,
    coefficients: Arc<dyn CoefficientFunctions>,
    exact: JetFn,
    mapping: Option<Arc<dyn Mapping>>,
    bounds: Bounds,
    steady: bool,
    analytic_normals: bool,
}

impl fmt::Debug for TestProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestProblem")
            .field("name", &self.name)
            .field("mapping", &self.mapping.as_ref().map(|m| m.name().to_owned()))
            .field("bounds", &self.bounds)
            .field("steady", &self.steady)
            .field("analytic_normals", &self.analytic_normals)
            .finish()
    }
}

impl TestProblem {
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Close the Padé systems with exact normal derivatives on the boundary
    /// instead of one-sided differences.
    pub fn with_analytic_normals(mut self, on: bool) -> Self {
        self.analytic_normals = on;
        self
    }

    pub fn is_steady(&self) -> bool {
        self.steady
    }

    pub fn mapping(&self) -> Option<&dyn Mapping> {
        self.mapping.as_deref()
    }

    /// Computational domain.
    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    pub fn grid(&self, m: usize, n: usize) -> Result<Grid2D> {
        Grid2D::new(self.bounds, m, n)
    }

    /// Physical coefficients (with the forcing as `s`).
    pub fn physical_coefficients(&self, x: f64, y: f64, t: f64) -> PointCoefficients {
        self.coefficients.at(x, y, t)
    }

    pub fn exact_jet(&self, x: f64, y: f64, t: f64) -> Jet {
        (self.exact)(x, y, t)
    }

    pub fn exact(&self, x: f64, y: f64, t: f64) -> f64 {
        (self.exact)(x, y, t).u
    }

    fn to_physical(&self, xi: f64, eta: f64) -> (f64, f64) {
        match &self.mapping {
            Some(m) => m.forward(xi, eta),
            None => (xi, eta),
        }
    }

    /// `φ_t + Lφ − s` for the exact solution: zero up to rounding when the
    /// problem data are consistent.
    pub fn consistency_residual(&self, x: f64, y: f64, t: f64) -> f64 {
        let p = self.coefficients.at(x, y, t);
        let e = (self.exact)(x, y, t);
        e.ut - p.alpha1 * e.uxx - p.beta * e.uxy - p.alpha2 * e.uyy + p.c1 * e.ux + p.c2 * e.uy + p.d * e.u
            - p.s
    }

    pub fn metrics(&self, grid: Grid2D) -> Result<Option<MetricField>> {
        self.mapping
            .as_ref()
            .map(|m| MetricField::new(m.as_ref(), grid))
            .transpose()
    }

    /// Coefficients on the computational grid at time `t`.
    pub fn coefficients(&self, grid: Grid2D, t: f64) -> Result<CoefficientField> {
        self.coefficients_with(grid, None, t)
    }

    /// As [`TestProblem::coefficients`], reusing precomputed metrics.
    pub fn coefficients_with(
        &self,
        grid: Grid2D,
        metrics: Option<&MetricField>,
        t: f64,
    ) -> Result<CoefficientField> {
        let field = match (&self.mapping, metrics) {
            (None, _) => CoefficientField::sample(grid, self.coefficients.as_ref(), t),
            (Some(_), Some(mf)) => return transform_with_metrics(mf, self.coefficients.as_ref(), t),
            (Some(m), None) => {
                let mf = MetricField::new(m.as_ref(), grid)?;
                return transform_with_metrics(&mf, self.coefficients.as_ref(), t);
            }
        };
        field.validate()?;
        Ok(field)
    }

    /// Dirichlet data from the exact solution, with the analytic tangential
    /// gradient expressed in computational coordinates.
    pub fn boundary(&self) -> BoundarySpec {
        let value = self.clone();
        let grad = self.clone();
        let spec = BoundarySpec::dirichlet(move |xi, eta, t| {
            let (x, y) = value.to_physical(xi, eta);
            value.exact(x, y, t)
        });
        let analytic_metrics = self
            .mapping
            .as_ref()
            .is_none_or(|m| m.metrics(self.bounds.x_min, self.bounds.y_min).is_some());
        if !analytic_metrics {
            return spec;
        }
        let normals = self.analytic_normals;
        spec.with_analytic_normals(normals)
            .with_gradient(move |xi, eta, t| {
                let (x, y) = grad.to_physical(xi, eta);
                let e = (grad.exact)(x, y, t);
                match &grad.mapping {
                    None => (e.ux, e.uy),
                    Some(m) => {
                        let mt = m.metrics(xi, eta).expect("analytic metrics");
                        (e.ux * mt.x_xi + e.uy * mt.y_xi, e.ux * mt.x_eta + e.uy * mt.y_eta)
                    }
                }
            })
    }

    /// Exact solution sampled at the physical image of every node.
    pub fn exact_field(&self, grid: Grid2D, t: f64) -> GridField {
        GridField::from_fn(grid, |xi, eta| {
            let (x, y) = self.to_physical(xi, eta);
            self.exact(x, y, t)
        })
    }

    /// Exact `φ` with Padé-consistent gradients under the problem's own
    /// boundary closure.
    pub fn initial_state(&self, grid: Grid2D, t: f64, exec: Execution) -> Result<SolutionState> {
        let closure = self.boundary().closure(&grid, t)?;
        SolutionState::from_phi(self.exact_field(grid, t), &closure, exec)
    }

    /// Error norms of `numerical` against the exact solution at `t`.
    pub fn errors(&self, numerical: &GridField, t: f64) -> Result<ErrorNorms> {
        error_norms(numerical, &self.exact_field(*numerical.grid(), t))
    }
}

/// Problem 1: `u = e^{−πt}(x²−y²)cosh(x+y)` on the unit square with
/// `β = −(1−x)(1−y)e^{x+y}`, `c₁ = 10x(1−y)`, `c₂ = −10y`.
pub fn problem1() -> TestProblem {
    let exact = |x: f64, y: f64, t: f64| {
        let e = (-PI * t).exp();
        let p = x * x - y * y;
        let (c, s) = ((x + y).cosh(), (x + y).sinh());
        let u = e * p * c;
        Jet {
            u,
            ux: e * (2.0 * x * c + p * s),
            uy: e * (-2.0 * y * c + p * s),
            uxx: e * (2.0 * c + 4.0 * x * s + p * c),
            uyy: e * (-2.0 * c - 4.0 * y * s + p * c),
            uxy: e * (2.0 * (x - y) * s + p * c),
            ut: -PI * u,
        }
    };
    let coefficients = move |x: f64, y: f64, t: f64| {
        let mut p = PointCoefficients {
            alpha1: 1.0,
            alpha2: 1.0,
            beta: -(1.0 - x) * (1.0 - y) * (x + y).exp(),
            c1: 10.0 * x * (1.0 - y),
            c2: -10.0 * y,
            d: 0.0,
            s: 0.0,
        };
        let e = exact(x, y, t);
        p.s = e.ut - e.uxx - p.beta * e.uxy - e.uyy + p.c1 * e.ux + p.c2 * e.uy;
        p
    };
    TestProblem {
        name: "problem1".into(),
        coefficients: Arc::new(coefficients),
        exact: Arc::new(exact),
        mapping: None,
        bounds: Bounds::unit(),
        steady: false,
        analytic_normals: true,
    }
}

/// Problem 2: the steady boundary-layer problem under the curve
/// `y = 1/(1 − 0.3 sin 6x)`, solved on the stretched grid with `λ = 0.9`.
pub fn problem2(epsilon: f64) -> Result<TestProblem> {
    problem2_with_stretch(epsilon, 0.9)
}

pub fn problem2_with_stretch(epsilon: f64, lambda: f64) -> Result<TestProblem> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let mapping = problem2_mapping(lambda)?;
    let m = 1.0 + 1.0 / epsilon;
    let n = 1.0 / epsilon;
    // a(x) = 1.8 cos 6x / ((1 − 0.3 sin 6x)(2 − 0.3 sin 6x)); q'/q = −a
    let walls = |x: f64| {
        let s = (6.0 * x).sin();
        let c = (6.0 * x).cos();
        let (a, b) = (1.0 - 0.3 * s, 2.0 - 0.3 * s);
        let ab = a * b;
        let drift = 1.8 * c / ab;
        let drift_x = -10.8 * s / ab + 3.24 * c * c * (a + b) / (ab * ab);
        (a / b, drift, drift_x)
    };
    let exact = move |x: f64, y: f64, _t: f64| {
        let (q, drift, _) = walls(x);
        let r = -drift;
        let tt = (y - x).exp();
        let b = (m * (1.0 + y).ln() + n * q.ln()).exp();
        let (_, _, drift_x) = walls(x);
        let rx = -drift_x;
        let yp = 1.0 + y;
        Jet {
            u: tt + b,
            ux: -tt + b * n * r,
            uy: tt + b * m / yp,
            uxx: tt + b * (n * n * r * r + n * rx),
            uxy: -tt + b * n * r * m / yp,
            uyy: tt + b * m * (m - 1.0) / (yp * yp),
            ut: 0.0,
        }
    };
    let coefficients = move |x: f64, y: f64, _t: f64| {
        let (q, drift, drift_x) = walls(x);
        let tt = (y - x).exp();
        let b = (m * (1.0 + y).ln() + n * q.ln()).exp();
        PointCoefficients {
            alpha1: epsilon,
            alpha2: epsilon,
            beta: 0.0,
            c1: -drift,
            c2: 1.0 / (1.0 + y),
            d: 0.0,
            s: tt * (-2.0 * epsilon + drift + 1.0 / (1.0 + y)) + drift_x * b,
        }
    };
    Ok(TestProblem {
        name: "problem2".into(),
        coefficients: Arc::new(coefficients),
        exact: Arc::new(exact),
        mapping: Some(Arc::new(mapping)),
        bounds: Bounds::unit(),
        steady: true,
        analytic_normals: true,
    })
}

/// Mean, root-mean-square and maximum absolute node-wise error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

impl ErrorNorms {
    pub fn as_array(&self) -> [f64; 3] {
        [self.l1, self.l2, self.linf]
    }
}

/// Norms of `numerical − exact` over every node, boundary included.
pub fn error_norms(numerical: &GridField, exact: &GridField) -> Result<ErrorNorms> {
    numerical.check_same_grid(exact)?;
    let count = numerical.values().len() as f64;
    let (mut s1, mut s2, mut max) = (0.0, 0.0, 0.0_f64);
    for (a, b) in numerical.values().iter().zip(exact.values().iter()) {
        let e = (a - b).abs();
        s1 += e;
        s2 += e * e;
        max = max.max(e);
    }
    Ok(ErrorNorms {
        l1: s1 / count,
        l2: (s2 / count).sqrt(),
        linf: max,
    })
}

/// `log₂(err_coarse / err_fine)`.
pub fn convergence_order(err_coarse: f64, err_fine: f64) -> Result<f64> {
    if !(err_coarse > 0.0 && err_fine > 0.0) || !err_coarse.is_finite() || !err_fine.is_finite() {
        return Err(Error::UndefinedOrder {
            coarse: err_coarse,
            fine: err_fine,
        });
    }
    Ok((err_coarse / err_fine).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Independent derivative oracle: sixth-order central differences of u.
    fn fd_jet(f: impl Fn(f64, f64, f64) -> f64, x: f64, y: f64, t: f64, h: f64) -> Jet {
        let d1 = |g: &dyn Fn(f64) -> f64, z: f64| {
            (45.0 * (g(z + h) - g(z - h)) - 9.0 * (g(z + 2.0 * h) - g(z - 2.0 * h))
                + (g(z + 3.0 * h) - g(z - 3.0 * h)))
                / (60.0 * h)
        };
        let d2 = |g: &dyn Fn(f64) -> f64, z: f64| {
            (270.0 * (g(z + h) + g(z - h)) - 27.0 * (g(z + 2.0 * h) + g(z - 2.0 * h))
                + 2.0 * (g(z + 3.0 * h) + g(z - 3.0 * h))
                - 490.0 * g(z))
                / (180.0 * h * h)
        };
        Jet {
            u: f(x, y, t),
            ux: d1(&|z| f(z, y, t), x),
            uy: d1(&|z| f(x, z, t), y),
            uxx: d2(&|z| f(z, y, t), x),
            uyy: d2(&|z| f(x, z, t), y),
            uxy: d1(&|z| d1(&|w| f(w, z, t), x), y),
            ut: d1(&|z| f(x, y, z), t),
        }
    }

    fn assert_jet_close(a: Jet, b: Jet, tol: f64) {
        for (p, q) in [
            (a.ux, b.ux),
            (a.uy, b.uy),
            (a.uxx, b.uxx),
            (a.uxy, b.uxy),
            (a.uyy, b.uyy),
            (a.ut, b.ut),
        ] {
            assert!((p - q).abs() <= tol * q.abs().max(1.0), "{p} vs {q}");
        }
    }

    #[test]
    fn problem1_values_and_ellipticity() {
        let p = problem1();
        assert!((p.exact(1.0, 0.0, 0.0) - 1f64.cosh()).abs() < 1e-15);
        let mut max_beta = 0.0_f64;
        for j in 0..=200 {
            for i in 0..=200 {
                let c = p.physical_coefficients(i as f64 / 200.0, j as f64 / 200.0, 0.0);
                max_beta = max_beta.max(c.beta.abs());
                assert!(c.is_positive_definite());
            }
        }
        assert!((max_beta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn problem1_jet_matches_finite_differences() {
        let p = problem1();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let (x, y, t) = (rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
            let fd = fd_jet(|x, y, t| p.exact(x, y, t), x, y, t, 1e-2);
            assert_jet_close(p.exact_jet(x, y, t), fd, 1e-8);
        }
    }

    #[test]
    fn problem_data_are_self_consistent() {
        let p1 = problem1();
        let p2 = problem2(0.01).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let (x, y, t) = (rng.random::<f64>(), rng.random::<f64>(), rng.random::<f64>());
            let s = p1.physical_coefficients(x, y, t).s;
            assert!(p1.consistency_residual(x, y, t).abs() <= 1e-10 * s.abs().max(1.0));
            let top = 1.0 / (1.0 - 0.3 * (6.0 * x).sin());
            let yy = y * top;
            let s = p2.physical_coefficients(x, yy, 0.0).s;
            assert!(p2.consistency_residual(x, yy, 0.0).abs() <= 1e-10 * s.abs().max(1.0));
        }
    }

    #[test]
    fn problem2_jet_matches_finite_differences() {
        let p = problem2(0.05).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let x = rng.random_range(0.05..0.95);
            let y = rng.random_range(0.05..0.9);
            let fd = fd_jet(|x, y, t| p.exact(x, y, t), x, y, 0.0, 2e-3);
            assert_jet_close(p.exact_jet(x, y, 0.0), fd, 1e-6);
        }
    }

    #[test]
    fn problem2_exact_values_and_boundary_layer() {
        let p = problem2(0.01).unwrap();
        let v = p.exact(0.0, 0.0, 0.0);
        assert!((v - 1.0).abs() < 1e-29);
        assert!((v - 1.0 - 0.5f64.powi(100)).abs() < 1e-16);
        // O(1) change within a few ε of the top wall, negligible change below
        let x: f64 = 0.3;
        let top = 1.0 / (1.0 - 0.3 * (6.0 * x).sin());
        let t = |y: f64| (y - x).exp();
        let layer = |y: f64| p.exact(x, y, 0.0) - t(y);
        assert!(layer(top) > 1.0);
        assert!(layer(top - 0.1) < 0.02 * layer(top));
        assert!(layer(top - 0.4) < 1e-6);
        assert!(matches!(problem2(0.0), Err(Error::Domain(_))));
        assert!(matches!(problem2(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn problem2_transformed_coefficients_have_mixed_term() {
        let p = problem2(0.01).unwrap();
        let g = p.grid(16, 16).unwrap();
        let c = p.coefficients(g, 0.0).unwrap();
        assert!(c.beta.max_abs() > 0.0);
        c.validate().unwrap();
    }

    #[test]
    fn norms_follow_their_definitions() {
        let g = Grid2D::unit(4, 4).unwrap();
        let a = GridField::zeros(g);
        let mut b = GridField::zeros(g);
        assert_eq!(error_norms(&a, &b).unwrap().as_array(), [0.0; 3]);
        b[(2, 2)] = 1.0;
        let e = error_norms(&a, &b).unwrap();
        assert_eq!(e.linf, 1.0);
        assert!((e.l1 - 1.0 / 25.0).abs() < 1e-15);
        assert!((e.l2 - 0.2).abs() < 1e-15);
        assert!(error_norms(&a, &GridField::zeros(Grid2D::unit(4, 5).unwrap())).is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(convergence_order(16.0, 1.0).unwrap(), 4.0);
        assert!((convergence_order(2.338e-6, 1.590e-7).unwrap() - 3.88).abs() < 5e-3);
        assert!((convergence_order(8.050e-7, 2.088e-7).unwrap() - 1.95).abs() < 5e-3);
        assert!(convergence_order(0.0, 1.0).is_err());
        assert!(convergence_order(1.0, -1.0).is_err());
    }

    #[test]
    fn constructors_are_deterministic() {
        let (a, b) = (problem1(), problem1());
        for (x, y, t) in [(0.1, 0.2, 0.3), (0.9, 0.4, 0.0)] {
            assert_eq!(a.physical_coefficients(x, y, t), b.physical_coefficients(x, y, t));
            assert_eq!(a.exact_jet(x, y, t), b.exact_jet(x, y, t));
        }
    }
}
