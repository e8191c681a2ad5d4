//! Uniform node-centred computational grids, grid functions, mappings from
//! the computational rectangle to a physical domain, and the chain-rule
//! transformation of scalar PDE coefficients.

mod mapping;
mod transform;

pub use mapping::{
    problem2_mapping, FnMapping, Identity, InverseMetrics, LogPolar, Mapping, MetricField, MetricTerms,
    Provenance, StretchedChannel,
};
pub use transform::{transform_scalar_pde, transform_with_metrics, TransformedCoefficients};

use crate::error::{Error, Result};
use ndarray::Array2;
use std::ops::{Index, IndexMut};

/// Axis-aligned rectangle `[x_min, x_max] × [y_min, y_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Bounds {
    pub const fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Self {
        Self {
            x_min,
            x_max,
            y_min,
            y_max,
        }
    }

    pub const fn unit() -> Self {
        Self::new(0.0, 1.0, 0.0, 1.0)
    }
}

/// Uniform grid with `m` intervals in x and `n` in y, nodes `0..=m` × `0..=n`
/// including the boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    m: usize,
    n: usize,
    bounds: Bounds,
    h: f64,
    k: f64,
}

impl Grid2D {
    pub fn new(bounds: Bounds, m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 intervals per direction, got {m}×{n}"
            )));
        }
        let finite = [bounds.x_min, bounds.x_max, bounds.y_min, bounds.y_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || bounds.x_max <= bounds.x_min || bounds.y_max <= bounds.y_min {
            return Err(Error::InvalidGrid(format!("degenerate bounds {bounds:?}")));
        }
        Ok(Self {
            m,
            n,
            bounds,
            h: (bounds.x_max - bounds.x_min) / m as f64,
            k: (bounds.y_max - bounds.y_min) / n as f64,
        })
    }

    /// Unit square with `m × n` intervals.
    pub fn unit(m: usize, n: usize) -> Result<Self> {
        Self::new(Bounds::unit(), m, n)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    /// Array shape `(m + 1, n + 1)` of every field on this grid.
    pub fn shape(&self) -> (usize, usize) {
        (self.m + 1, self.n + 1)
    }

    pub fn node_count(&self) -> usize {
        (self.m + 1) * (self.n + 1)
    }

    pub fn x(&self, i: usize) -> f64 {
        self.bounds.x_min + i as f64 * self.h
    }

    pub fn y(&self, j: usize) -> f64 {
        self.bounds.y_min + j as f64 * self.k
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x(i), self.y(j))
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.m || j == self.n
    }
}

/// Real values at every node of a [`Grid2D`], indexed `[(i, j)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    grid: Grid2D,
    values: Array2<f64>,
}

impl GridField {
    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            grid,
            values: Array2::zeros(grid.shape()),
        }
    }

    pub fn constant(grid: Grid2D, value: f64) -> Self {
        Self {
            grid,
            values: Array2::from_elem(grid.shape(), value),
        }
    }

    /// Sample `f(x, y)` at every node.
    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = Array2::from_shape_fn(grid.shape(), |(i, j)| f(grid.x(i), grid.y(j)));
        Self { grid, values }
    }

    pub fn from_array(grid: Grid2D, values: Array2<f64>) -> Result<Self> {
        if values.dim() != grid.shape() {
            return Err(Error::ShapeMismatch {
                expected: grid.shape(),
                found: values.dim(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut Array2<f64> {
        &mut self.values
    }

    pub fn into_values(self) -> Array2<f64> {
        self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// `self + a · other`, element-wise.
    pub fn axpy(&self, a: f64, other: &GridField) -> Result<GridField> {
        self.check_same_grid(other)?;
        let mut out = self.clone();
        out.values.scaled_add(a, &other.values);
        Ok(out)
    }

    /// Largest absolute node-wise difference.
    pub fn max_abs_diff(&self, other: &GridField) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs())))
    }

    pub(crate) fn check_same_grid(&self, other: &GridField) -> Result<()> {
        if self.values.dim() != other.values.dim() {
            return Err(Error::ShapeMismatch {
                expected: self.values.dim(),
                found: other.values.dim(),
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for GridField {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.values[[idx.0, idx.1]]
    }
}

impl IndexMut<(usize, usize)> for GridField {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut f64 {
        &mut self.values[[idx.0, idx.1]]
    }
}

/// Build a uniform grid on `bounds`.
pub fn build_uniform_grid(bounds: Bounds, m: usize, n: usize) -> Result<Grid2D> {
    Grid2D::new(bounds, m, n)
}
