use super::Grid2D;
use crate::error::{Error, Result};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

/// First and second derivatives of the forward map `(ξ, η) → (x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MetricTerms {
    pub x_xi: f64,
    pub x_eta: f64,
    pub y_xi: f64,
    pub y_eta: f64,
    pub x_xixi: f64,
    pub x_xieta: f64,
    pub x_etaeta: f64,
    pub y_xixi: f64,
    pub y_xieta: f64,
    pub y_etaeta: f64,
}

impl MetricTerms {
    pub fn identity() -> Self {
        Self {
            x_xi: 1.0,
            y_eta: 1.0,
            ..Self::default()
        }
    }

    /// `J = x_ξ y_η − x_η y_ξ`.
    pub fn jacobian(&self) -> f64 {
        self.x_xi * self.y_eta - self.x_eta * self.y_xi
    }

    /// Derivatives of the inverse map `(x, y) → (ξ, η)`, first and second order.
    pub fn inverse(&self) -> InverseMetrics {
        let jac = self.jacobian();
        let xi_x = self.y_eta / jac;
        let xi_y = -self.x_eta / jac;
        let eta_x = -self.y_xi / jac;
        let eta_y = self.x_xi / jac;

        // K[a][i] = ∂ξ^a/∂x^i, hess[b][c][d] = ∂²x^b/∂ξ^c∂ξ^d.
        let kinv = [[xi_x, xi_y], [eta_x, eta_y]];
        let hess = [
            [[self.x_xixi, self.x_xieta], [self.x_xieta, self.x_etaeta]],
            [[self.y_xixi, self.y_xieta], [self.y_xieta, self.y_etaeta]],
        ];
        // ∂²ξ^a/∂x^i∂x^j = −K[a][b] hess[b][c][d] K[c][i] K[d][j]
        let second = |a: usize, i: usize, j: usize| {
            let mut acc = 0.0;
            for (b, hb) in hess.iter().enumerate() {
                for (c, hbc) in hb.iter().enumerate() {
                    for (d, hbcd) in hbc.iter().enumerate() {
                        acc += kinv[a][b] * hbcd * kinv[c][i] * kinv[d][j];
                    }
                }
            }
            -acc
        };
        InverseMetrics {
            jacobian: jac,
            xi_x,
            xi_y,
            eta_x,
            eta_y,
            xi_xx: second(0, 0, 0),
            xi_xy: second(0, 0, 1),
            xi_yy: second(0, 1, 1),
            eta_xx: second(1, 0, 0),
            eta_xy: second(1, 0, 1),
            eta_yy: second(1, 1, 1),
        }
    }
}

/// Derivatives of the computational coordinates with respect to the
/// physical ones.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InverseMetrics {
    pub jacobian: f64,
    pub xi_x: f64,
    pub xi_y: f64,
    pub eta_x: f64,
    pub eta_y: f64,
    pub xi_xx: f64,
    pub xi_xy: f64,
    pub xi_yy: f64,
    pub eta_xx: f64,
    pub eta_xy: f64,
    pub eta_yy: f64,
}

impl InverseMetrics {
    /// `∇²ξ`.
    pub fn laplacian_xi(&self) -> f64 {
        self.xi_xx + self.xi_yy
    }

    /// `∇²η`.
    pub fn laplacian_eta(&self) -> f64 {
        self.eta_xx + self.eta_yy
    }
}

/// Where a [`MetricField`]'s derivatives came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    FiniteDifference,
}

/// A non-singular map from the computational rectangle to the physical plane.
///
/// Mappings that know their derivatives return them from [`Mapping::metrics`];
/// otherwise the metric terms are differenced from [`Mapping::forward`] on
/// the grid (see [`MetricField::new`]).
pub trait Mapping: Send + Sync + fmt::Debug {
    fn name(&self) -> &str;

    fn forward(&self, xi: f64, eta: f64) -> (f64, f64);

    fn metrics(&self, _xi: f64, _eta: f64) -> Option<MetricTerms> {
        None
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl Mapping for Identity {
    fn name(&self) -> &str {
        "identity"
    }

    fn forward(&self, xi: f64, eta: f64) -> (f64, f64) {
        (xi, eta)
    }

    fn metrics(&self, _xi: f64, _eta: f64) -> Option<MetricTerms> {
        Some(MetricTerms::identity())
    }
}

/// `x = ½e^{πξ}cos(πη)`, `y = ½e^{πξ}sin(πη)`: conformal polar-type map used
/// for grids around a unit-diameter cylinder.
#[derive(Debug, Clone, Copy, Default)]
pub struct LogPolar;

impl Mapping for LogPolar {
    fn name(&self) -> &str {
        "log-polar"
    }

    fn forward(&self, xi: f64, eta: f64) -> (f64, f64) {
        let r = 0.5 * (PI * xi).exp();
        (r * (PI * eta).cos(), r * (PI * eta).sin())
    }

    fn metrics(&self, xi: f64, eta: f64) -> Option<MetricTerms> {
        let (x, y) = self.forward(xi, eta);
        let p2 = PI * PI;
        Some(MetricTerms {
            x_xi: PI * x,
            x_eta: -PI * y,
            y_xi: PI * y,
            y_eta: PI * x,
            x_xixi: p2 * x,
            x_xieta: -p2 * y,
            x_etaeta: -p2 * x,
            y_xixi: p2 * y,
            y_xieta: p2 * x,
            y_etaeta: -p2 * y,
        })
    }
}

/// `x = ξ`, `y = (η + (λ/π) sin πη) / (1 − 0.3 sin 6ξ)`: maps the unit square
/// onto the region under the curve `y = 1/(1 − 0.3 sin 6x)`, clustering
/// nodes towards the curved top wall as `λ → 1`.
#[derive(Debug, Clone, Copy)]
pub struct StretchedChannel {
    lambda: f64,
}

impl StretchedChannel {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    fn wall(xi: f64) -> (f64, f64, f64) {
        let s = (6.0 * xi).sin();
        let c = (6.0 * xi).cos();
        (1.0 - 0.3 * s, -1.8 * c, 10.8 * s)
    }

    fn stretch(&self, eta: f64) -> (f64, f64, f64) {
        let l = self.lambda;
        (
            eta + l / PI * (PI * eta).sin(),
            1.0 + l * (PI * eta).cos(),
            -l * PI * (PI * eta).sin(),
        )
    }
}

/// The boundary-layer stretching map; `lambda` must lie in `[0, 1)`.
pub fn problem2_mapping(lambda: f64) -> Result<StretchedChannel> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(Error::NonMonotoneMapping(format!(
            "stretch parameter must lie in [0, 1), got {lambda}"
        )));
    }
    Ok(StretchedChannel { lambda })
}

impl Mapping for StretchedChannel {
    fn name(&self) -> &str {
        "problem2-stretch"
    }

    fn forward(&self, xi: f64, eta: f64) -> (f64, f64) {
        let (a, _, _) = Self::wall(xi);
        let (g, _, _) = self.stretch(eta);
        (xi, g / a)
    }

    fn metrics(&self, xi: f64, eta: f64) -> Option<MetricTerms> {
        let (a, da, dda) = Self::wall(xi);
        let (g, dg, ddg) = self.stretch(eta);
        let a2 = a * a;
        Some(MetricTerms {
            x_xi: 1.0,
            y_xi: -g * da / a2,
            y_eta: dg / a,
            y_xixi: -g * (dda / a2 - 2.0 * da * da / (a2 * a)),
            y_xieta: -dg * da / a2,
            y_etaeta: ddg / a,
            ..MetricTerms::default()
        })
    }
}

/// A mapping known only through its forward function; metric terms are
/// always obtained by finite differences on the grid.
#[derive(Clone)]
pub struct FnMapping {
    name: String,
    forward: Arc<dyn Fn(f64, f64) -> (f64, f64) + Send + Sync>,
}

impl FnMapping {
    pub fn new(
        name: impl Into<String>,
        forward: impl Fn(f64, f64) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            forward: Arc::new(forward),
        }
    }
}

impl fmt::Debug for FnMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnMapping").field("name", &self.name).finish()
    }
}

impl Mapping for FnMapping {
    fn name(&self) -> &str {
        &self.name
    }

    fn forward(&self, xi: f64, eta: f64) -> (f64, f64) {
        (self.forward)(xi, eta)
    }
}

/// Physical coordinates and metric terms at every node of a grid.
#[derive(Debug, Clone)]
pub struct MetricField {
    grid: Grid2D,
    provenance: Provenance,
    physical: Vec<(f64, f64)>,
    terms: Vec<MetricTerms>,
    inverse: Vec<InverseMetrics>,
}

impl MetricField {
    /// Evaluate metrics on `grid`: analytic when the mapping supplies them,
    /// otherwise fourth-order differences of the forward map (one-sided
    /// near the boundary, which needs at least 5 intervals per direction).
    pub fn new(mapping: &dyn Mapping, grid: Grid2D) -> Result<Self> {
        let (nx, ny) = grid.shape();
        let idx = |i: usize, j: usize| j * nx + i;
        let mut physical = vec![(0.0, 0.0); nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                physical[idx(i, j)] = mapping.forward(grid.x(i), grid.y(j));
            }
        }

        let analytic = mapping.metrics(grid.x(0), grid.y(0)).is_some();
        let terms = if analytic {
            let mut terms = Vec::with_capacity(nx * ny);
            for j in 0..ny {
                for i in 0..nx {
                    terms.push(mapping.metrics(grid.x(i), grid.y(j)).ok_or_else(|| {
                        Error::Configuration(format!(
                            "mapping '{}' supplies metrics only at some nodes",
                            mapping.name()
                        ))
                    })?);
                }
            }
            terms
        } else {
            fd_metrics(&grid, &physical)?
        };

        let mut inverse = Vec::with_capacity(terms.len());
        for j in 0..ny {
            for i in 0..nx {
                let t = &terms[idx(i, j)];
                let jac = t.jacobian();
                if !jac.is_finite() || jac.abs() < 1e-300 {
                    return Err(Error::SingularMapping { i, j, jacobian: jac });
                }
                inverse.push(t.inverse());
            }
        }

        Ok(Self {
            grid,
            provenance: if analytic {
                Provenance::Analytic
            } else {
                Provenance::FiniteDifference
            },
            physical,
            terms,
            inverse,
        })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        j * (self.grid.m() + 1) + i
    }

    /// Physical coordinates of node `(i, j)`.
    pub fn physical(&self, i: usize, j: usize) -> (f64, f64) {
        self.physical[self.idx(i, j)]
    }

    pub fn terms(&self, i: usize, j: usize) -> &MetricTerms {
        &self.terms[self.idx(i, j)]
    }

    pub fn inverse(&self, i: usize, j: usize) -> &InverseMetrics {
        &self.inverse[self.idx(i, j)]
    }

    pub fn jacobian(&self, i: usize, j: usize) -> f64 {
        self.inverse(i, j).jacobian
    }
}

// Fourth-order first-derivative weights: centred, and one-sided for the
// first two nodes (mirror for the last two).
const D1_CENTRED: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
const D1_EDGE0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
const D1_EDGE1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];
// Fourth-order second-derivative weights (denominator 12 h²).
const D2_CENTRED: [f64; 5] = [-1.0, 16.0, -30.0, 16.0, -1.0];
const D2_EDGE0: [f64; 6] = [45.0, -154.0, 214.0, -156.0, 61.0, -10.0];
const D2_EDGE1: [f64; 6] = [10.0, -15.0, -4.0, 14.0, -6.0, 1.0];

fn diff1(line: &[f64], spacing: f64) -> Vec<f64> {
    let n = line.len();
    let s = 12.0 * spacing;
    (0..n)
        .map(|i| {
            let dot = |w: &[f64], start: usize, sign: f64| -> f64 {
                w.iter()
                    .enumerate()
                    .map(|(q, wq)| {
                        let node = if sign > 0.0 { start + q } else { start - q };
                        wq * line[node]
                    })
                    .sum::<f64>()
                    * sign
            };
            let v = if i == 0 {
                dot(&D1_EDGE0, 0, 1.0)
            } else if i == 1 {
                dot(&D1_EDGE1, 0, 1.0)
            } else if i == n - 1 {
                dot(&D1_EDGE0, n - 1, -1.0)
            } else if i == n - 2 {
                dot(&D1_EDGE1, n - 1, -1.0)
            } else {
                dot(&D1_CENTRED, i - 2, 1.0)
            };
            v / s
        })
        .collect()
}

fn diff2(line: &[f64], spacing: f64) -> Vec<f64> {
    let n = line.len();
    let s = 12.0 * spacing * spacing;
    let fwd =
        |w: &[f64], start: usize| -> f64 { w.iter().enumerate().map(|(q, wq)| wq * line[start + q]).sum() };
    let bwd =
        |w: &[f64], start: usize| -> f64 { w.iter().enumerate().map(|(q, wq)| wq * line[start - q]).sum() };
    (0..n)
        .map(|i| {
            let v = if i == 0 {
                fwd(&D2_EDGE0, 0)
            } else if i == 1 {
                fwd(&D2_EDGE1, 0)
            } else if i == n - 1 {
                bwd(&D2_EDGE0, n - 1)
            } else if i == n - 2 {
                bwd(&D2_EDGE1, n - 1)
            } else {
                fwd(&D2_CENTRED, i - 2)
            };
            v / s
        })
        .collect()
}

fn fd_metrics(grid: &Grid2D, physical: &[(f64, f64)]) -> Result<Vec<MetricTerms>> {
    if grid.m() < 5 || grid.n() < 5 {
        return Err(Error::InvalidGrid(
            "finite-difference metrics need at least 5 intervals per direction".into(),
        ));
    }
    let (nx, ny) = grid.shape();
    let idx = |i: usize, j: usize| j * nx + i;
    let comp = |c: usize| -> Vec<f64> { physical.iter().map(|p| if c == 0 { p.0 } else { p.1 }).collect() };

    // Derivatives along ξ (rows of constant j) and η (columns of constant i).
    let along_xi = |f: &[f64], second: bool| -> Vec<f64> {
        let mut out = vec![0.0; nx * ny];
        for j in 0..ny {
            let line: Vec<f64> = (0..nx).map(|i| f[idx(i, j)]).collect();
            let d = if second {
                diff2(&line, grid.h())
            } else {
                diff1(&line, grid.h())
            };
            for i in 0..nx {
                out[idx(i, j)] = d[i];
            }
        }
        out
    };
    let along_eta = |f: &[f64], second: bool| -> Vec<f64> {
        let mut out = vec![0.0; nx * ny];
        for i in 0..nx {
            let line: Vec<f64> = (0..ny).map(|j| f[idx(i, j)]).collect();
            let d = if second {
                diff2(&line, grid.k())
            } else {
                diff1(&line, grid.k())
            };
            for j in 0..ny {
                out[idx(i, j)] = d[j];
            }
        }
        out
    };

    let x = comp(0);
    let y = comp(1);
    let x_xi = along_xi(&x, false);
    let x_eta = along_eta(&x, false);
    let y_xi = along_xi(&y, false);
    let y_eta = along_eta(&y, false);
    let x_xixi = along_xi(&x, true);
    let x_etaeta = along_eta(&x, true);
    let y_xixi = along_xi(&y, true);
    let y_etaeta = along_eta(&y, true);
    let x_xieta = along_eta(&x_xi, false);
    let y_xieta = along_eta(&y_xi, false);

    Ok((0..nx * ny)
        .map(|p| MetricTerms {
            x_xi: x_xi[p],
            x_eta: x_eta[p],
            y_xi: y_xi[p],
            y_eta: y_eta[p],
            x_xixi: x_xixi[p],
            x_xieta: x_xieta[p],
            x_etaeta: x_etaeta[p],
            y_xixi: y_xixi[p],
            y_xieta: y_xieta[p],
            y_etaeta: y_etaeta[p],
        })
        .collect())
}
