use crate::error::{Error, Result};
use crate::grid::{Grid2D, GridField};
use crate::operators::{AxisKind, GradientClosure};
use ndarray::Array1;
use std::fmt;
use std::sync::Arc;

/// Boundary data `g(x, y, t)` on the computational grid.
pub type ScalarFn = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;
/// Analytic gradient `(g_x, g_y)` of the boundary data.
pub type GradientFn = Arc<dyn Fn(f64, f64, f64) -> (f64, f64) + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Left,
    Right,
    Bottom,
    Top,
}

impl Edge {
    pub const ALL: [Edge; 4] = [Edge::Left, Edge::Right, Edge::Bottom, Edge::Top];

    fn slot(self) -> usize {
        self as usize
    }
}

/// Condition `b₁φ + b₂∂_nφ = g` on one edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EdgeKind {
    Dirichlet,
    Neumann,
    Robin { b1: f64, b2: f64 },
    Periodic,
}

/// Boundary conditions for all four edges plus the data they use.
#[derive(Clone)]
pub struct BoundarySpec {
    kinds: [EdgeKind; 4],
    g: Option<ScalarFn>,
    gradient: Option<GradientFn>,
    analytic_normals: bool,
}

impl fmt::Debug for BoundarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundarySpec")
            .field("kinds", &self.kinds)
            .field("has_g", &self.g.is_some())
            .field("has_gradient", &self.gradient.is_some())
            .field("analytic_normals", &self.analytic_normals)
            .finish()
    }
}

impl BoundarySpec {
    /// Dirichlet data `g` on every edge.
    pub fn dirichlet(g: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            kinds: [EdgeKind::Dirichlet; 4],
            g: Some(Arc::new(g)),
            gradient: None,
            analytic_normals: false,
        }
    }

    pub fn homogeneous() -> Self {
        Self::dirichlet(|_, _, _| 0.0)
    }

    /// Doubly periodic: no boundary data at all.
    pub fn periodic() -> Self {
        Self {
            kinds: [EdgeKind::Periodic; 4],
            g: None,
            gradient: None,
            analytic_normals: false,
        }
    }

    /// Supply `∇g` so tangential boundary derivatives are exact.
    pub fn with_gradient(
        mut self,
        gradient: impl Fn(f64, f64, f64) -> (f64, f64) + Send + Sync + 'static,
    ) -> Self {
        self.gradient = Some(Arc::new(gradient));
        self
    }

    /// Also take normal derivatives on Dirichlet edges from the analytic
    /// gradient instead of one-sided differences of interior values.
    pub fn with_analytic_normals(mut self, on: bool) -> Self {
        self.analytic_normals = on;
        self
    }

    pub fn analytic_normals(&self) -> bool {
        self.analytic_normals && self.gradient.is_some()
    }

    pub fn with_edge(mut self, edge: Edge, kind: EdgeKind) -> Self {
        self.kinds[edge.slot()] = kind;
        self
    }

    pub fn kind(&self, edge: Edge) -> EdgeKind {
        self.kinds[edge.slot()]
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    /// Axis topology implied by the edge kinds.
    pub fn axes(&self) -> Result<(AxisKind, AxisKind)> {
        let axis = |a: Edge, b: Edge, name: &str| {
            let pa = self.kind(a) == EdgeKind::Periodic;
            let pb = self.kind(b) == EdgeKind::Periodic;
            match (pa, pb) {
                (true, true) => Ok(AxisKind::Periodic),
                (false, false) => Ok(AxisKind::Bounded),
                _ => Err(Error::Configuration(format!(
                    "periodic {name} edges must come in pairs"
                ))),
            }
        };
        Ok((
            axis(Edge::Left, Edge::Right, "x")?,
            axis(Edge::Bottom, Edge::Top, "y")?,
        ))
    }

    /// Reject conditions the discretization cannot assemble.
    pub fn validate(&self) -> Result<(AxisKind, AxisKind)> {
        for edge in Edge::ALL {
            match self.kind(edge) {
                EdgeKind::Neumann | EdgeKind::Robin { .. } => {
                    return Err(Error::Unsupported(format!(
                        "{:?} condition on {edge:?} edge; only Dirichlet and periodic edges are assembled",
                        self.kind(edge)
                    )))
                }
                EdgeKind::Dirichlet if self.g.is_none() => {
                    return Err(Error::Configuration(format!(
                        "Dirichlet edge {edge:?} has no boundary data"
                    )))
                }
                _ => {}
            }
        }
        self.axes()
    }

    fn edge_nodes(grid: &Grid2D, edge: Edge) -> Vec<(usize, usize)> {
        match edge {
            Edge::Left => (0..=grid.n()).map(|j| (0, j)).collect(),
            Edge::Right => (0..=grid.n()).map(|j| (grid.m(), j)).collect(),
            Edge::Bottom => (0..=grid.m()).map(|i| (i, 0)).collect(),
            Edge::Top => (0..=grid.m()).map(|i| (i, grid.n())).collect(),
        }
    }

    /// Overwrite Dirichlet edge values of `phi` with `g(·, t)`.
    pub fn apply_values(&self, phi: &mut GridField, t: f64) -> Result<()> {
        self.validate()?;
        let grid = *phi.grid();
        let Some(g) = &self.g else { return Ok(()) };
        for edge in Edge::ALL {
            if self.kind(edge) == EdgeKind::Dirichlet {
                for (i, j) in Self::edge_nodes(&grid, edge) {
                    phi[(i, j)] = g(grid.x(i), grid.y(j), t);
                }
            }
        }
        Ok(())
    }

    /// Field that is zero inside and carries the Dirichlet data on the edges.
    pub fn template(&self, grid: Grid2D, t: f64) -> Result<GridField> {
        let mut phi = GridField::zeros(grid);
        self.apply_values(&mut phi, t)?;
        Ok(phi)
    }

    /// Padé closure at time `t`; tangential derivatives along Dirichlet
    /// edges come from the analytic gradient when one was supplied.
    pub fn closure(&self, grid: &Grid2D, t: f64) -> Result<GradientClosure> {
        let (xa, ya) = self.validate()?;
        let mut c = GradientClosure::with_axes(xa, ya);
        if let Some(grad) = &self.gradient {
            let along_x = |j: usize| {
                Some(Array1::from_iter(
                    (0..=grid.m()).map(|i| grad(grid.x(i), grid.y(j), t).0),
                ))
            };
            let along_y = |i: usize| {
                Some(Array1::from_iter(
                    (0..=grid.n()).map(|j| grad(grid.x(i), grid.y(j), t).1),
                ))
            };
            if self.kind(Edge::Bottom) == EdgeKind::Dirichlet {
                c.bottom_phi_x = along_x(0);
            }
            if self.kind(Edge::Top) == EdgeKind::Dirichlet {
                c.top_phi_x = along_x(grid.n());
            }
            if self.kind(Edge::Left) == EdgeKind::Dirichlet {
                c.left_phi_y = along_y(0);
            }
            if self.kind(Edge::Right) == EdgeKind::Dirichlet {
                c.right_phi_y = along_y(grid.m());
            }
            if self.analytic_normals {
                let normal_x = |i: usize| {
                    Some(Array1::from_iter(
                        (0..=grid.n()).map(|j| grad(grid.x(i), grid.y(j), t).0),
                    ))
                };
                let normal_y = |j: usize| {
                    Some(Array1::from_iter(
                        (0..=grid.m()).map(|i| grad(grid.x(i), grid.y(j), t).1),
                    ))
                };
                if xa == AxisKind::Bounded {
                    c.left_phi_x = normal_x(0);
                    c.right_phi_x = normal_x(grid.m());
                }
                if ya == AxisKind::Bounded {
                    c.bottom_phi_y = normal_y(0);
                    c.top_phi_y = normal_y(grid.n());
                }
            }
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dirichlet_values_fill_only_edges() {
        let g = Grid2D::unit(4, 4).unwrap();
        let bc = BoundarySpec::dirichlet(|x, y, t| x + 2.0 * y + t);
        let phi = bc.template(g, 1.0).unwrap();
        assert_eq!(phi[(0, 2)], 2.0);
        assert_eq!(phi[(4, 4)], 4.0);
        assert_eq!(phi[(2, 2)], 0.0);
    }

    #[test]
    fn neumann_and_robin_are_unsupported() {
        let bc = BoundarySpec::homogeneous().with_edge(Edge::Top, EdgeKind::Neumann);
        assert!(matches!(bc.validate(), Err(Error::Unsupported(_))));
        let bc = BoundarySpec::homogeneous().with_edge(Edge::Left, EdgeKind::Robin { b1: 1.0, b2: 1.0 });
        assert!(matches!(bc.validate(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn unpaired_periodic_edge_is_rejected() {
        let bc = BoundarySpec::homogeneous().with_edge(Edge::Left, EdgeKind::Periodic);
        assert!(matches!(bc.validate(), Err(Error::Configuration(_))));
        let bc = BoundarySpec::homogeneous()
            .with_edge(Edge::Left, EdgeKind::Periodic)
            .with_edge(Edge::Right, EdgeKind::Periodic);
        assert_eq!(bc.validate().unwrap(), (AxisKind::Periodic, AxisKind::Bounded));
    }

    #[test]
    fn gradient_feeds_tangential_closure() {
        let g = Grid2D::unit(4, 4).unwrap();
        let bc = BoundarySpec::dirichlet(|x, y, _| x * y).with_gradient(|x, y, _| (y, x));
        let c = bc.closure(&g, 0.0).unwrap();
        assert_eq!(c.top_phi_x.as_ref().unwrap()[2], 1.0);
        assert_eq!(c.right_phi_y.as_ref().unwrap()[3], 1.0);
        assert_eq!(c.bottom_phi_x.as_ref().unwrap()[2], 0.0);
    }
}
