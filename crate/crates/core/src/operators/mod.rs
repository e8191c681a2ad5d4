//! Central difference operators and the compact fourth-order
//! approximations of second and mixed derivatives built on Padé gradients.

mod pade;
pub mod tridiag;

pub(crate) use pade::ONE_SIDED;
pub use pade::{compact_gradients, pade_gradient_x, pade_gradient_y, EndClosure, GradientClosure};

use crate::error::{Error, Result};
use crate::grid::{Grid2D, GridField};

/// Whether an axis has physical ends or wraps around.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AxisKind {
    #[default]
    Bounded,
    Periodic,
}

/// `φ` together with its Padé gradients `φ_x`, `φ_y`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionState {
    pub phi: GridField,
    pub phi_x: GridField,
    pub phi_y: GridField,
}

impl SolutionState {
    pub fn new(phi: GridField, phi_x: GridField, phi_y: GridField) -> Result<Self> {
        phi.check_same_grid(&phi_x)?;
        phi.check_same_grid(&phi_y)?;
        Ok(Self { phi, phi_x, phi_y })
    }

    pub fn zeros(grid: Grid2D) -> Self {
        Self {
            phi: GridField::zeros(grid),
            phi_x: GridField::zeros(grid),
            phi_y: GridField::zeros(grid),
        }
    }

    /// Sample `φ` and its exact gradient.
    pub fn from_exact(
        grid: Grid2D,
        phi: impl Fn(f64, f64) -> f64,
        phi_x: impl Fn(f64, f64) -> f64,
        phi_y: impl Fn(f64, f64) -> f64,
    ) -> Self {
        Self {
            phi: GridField::from_fn(grid, phi),
            phi_x: GridField::from_fn(grid, phi_x),
            phi_y: GridField::from_fn(grid, phi_y),
        }
    }

    pub fn grid(&self) -> &Grid2D {
        self.phi.grid()
    }
}

fn check_interior(g: &Grid2D, i: usize, j: usize) -> Result<()> {
    if i == 0 || j == 0 || i >= g.m() || j >= g.n() {
        return Err(Error::OutOfStencil { i, j });
    }
    Ok(())
}

// Unchecked kernels shared by the assembly and solver hot loops.
#[inline]
pub(crate) fn dx(f: &GridField, i: usize, j: usize) -> f64 {
    (f[(i + 1, j)] - f[(i - 1, j)]) / (2.0 * f.grid().h())
}

#[inline]
pub(crate) fn dy(f: &GridField, i: usize, j: usize) -> f64 {
    (f[(i, j + 1)] - f[(i, j - 1)]) / (2.0 * f.grid().k())
}

#[inline]
pub(crate) fn dxx(f: &GridField, i: usize, j: usize) -> f64 {
    let h = f.grid().h();
    (f[(i + 1, j)] - 2.0 * f[(i, j)] + f[(i - 1, j)]) / (h * h)
}

#[inline]
pub(crate) fn dyy(f: &GridField, i: usize, j: usize) -> f64 {
    let k = f.grid().k();
    (f[(i, j + 1)] - 2.0 * f[(i, j)] + f[(i, j - 1)]) / (k * k)
}

#[inline]
pub(crate) fn dxy(f: &GridField, i: usize, j: usize) -> f64 {
    let g = f.grid();
    (f[(i + 1, j + 1)] - f[(i + 1, j - 1)] - f[(i - 1, j + 1)] + f[(i - 1, j - 1)]) / (4.0 * g.h() * g.k())
}

/// `(f_{i+1,j} − f_{i−1,j}) / 2h`.
pub fn delta_x(f: &GridField, i: usize, j: usize) -> Result<f64> {
    check_interior(f.grid(), i, j)?;
    Ok(dx(f, i, j))
}

/// `(f_{i,j+1} − f_{i,j−1}) / 2k`.
pub fn delta_y(f: &GridField, i: usize, j: usize) -> Result<f64> {
    check_interior(f.grid(), i, j)?;
    Ok(dy(f, i, j))
}

pub fn delta2_x(f: &GridField, i: usize, j: usize) -> Result<f64> {
    check_interior(f.grid(), i, j)?;
    Ok(dxx(f, i, j))
}

pub fn delta2_y(f: &GridField, i: usize, j: usize) -> Result<f64> {
    check_interior(f.grid(), i, j)?;
    Ok(dyy(f, i, j))
}

pub fn delta_x_delta_y(f: &GridField, i: usize, j: usize) -> Result<f64> {
    check_interior(f.grid(), i, j)?;
    Ok(dxy(f, i, j))
}

/// `∂_xx φ ≈ 2δ²_x φ − δ_x φ_x`.
pub fn compact_second_x(state: &SolutionState, i: usize, j: usize) -> Result<f64> {
    check_interior(state.grid(), i, j)?;
    Ok(2.0 * dxx(&state.phi, i, j) - dx(&state.phi_x, i, j))
}

/// `∂_yy φ ≈ 2δ²_y φ − δ_y φ_y`.
pub fn compact_second_y(state: &SolutionState, i: usize, j: usize) -> Result<f64> {
    check_interior(state.grid(), i, j)?;
    Ok(2.0 * dyy(&state.phi, i, j) - dy(&state.phi_y, i, j))
}

/// `∂_xy φ ≈ δ_x φ_y + δ_y φ_x − δ_xδ_y φ`.
pub fn compact_mixed(state: &SolutionState, i: usize, j: usize) -> Result<f64> {
    check_interior(state.grid(), i, j)?;
    Ok(dx(&state.phi_y, i, j) + dy(&state.phi_x, i, j) - dxy(&state.phi, i, j))
}

fn interior_map(grid: Grid2D, f: impl Fn(usize, usize) -> f64) -> GridField {
    let mut out = GridField::zeros(grid);
    for j in 1..grid.n() {
        for i in 1..grid.m() {
            out[(i, j)] = f(i, j);
        }
    }
    out
}

/// Whole-field variants: interior nodes evaluated, boundary nodes left at 0.
pub mod field {
    use super::*;

    pub fn delta_x(f: &GridField) -> GridField {
        interior_map(*f.grid(), |i, j| dx(f, i, j))
    }

    pub fn delta_y(f: &GridField) -> GridField {
        interior_map(*f.grid(), |i, j| dy(f, i, j))
    }

    pub fn delta2_x(f: &GridField) -> GridField {
        interior_map(*f.grid(), |i, j| dxx(f, i, j))
    }

    pub fn delta2_y(f: &GridField) -> GridField {
        interior_map(*f.grid(), |i, j| dyy(f, i, j))
    }

    pub fn delta_x_delta_y(f: &GridField) -> GridField {
        interior_map(*f.grid(), |i, j| dxy(f, i, j))
    }

    pub fn compact_second_x(s: &SolutionState) -> GridField {
        interior_map(*s.grid(), |i, j| 2.0 * dxx(&s.phi, i, j) - dx(&s.phi_x, i, j))
    }

    pub fn compact_second_y(s: &SolutionState) -> GridField {
        interior_map(*s.grid(), |i, j| 2.0 * dyy(&s.phi, i, j) - dy(&s.phi_y, i, j))
    }

    pub fn compact_mixed(s: &SolutionState) -> GridField {
        interior_map(*s.grid(), |i, j| {
            dx(&s.phi_y, i, j) + dy(&s.phi_x, i, j) - dxy(&s.phi, i, j)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;

    #[test]
    fn central_differences_on_simple_fields() {
        let g = Grid2D::unit(10, 10).unwrap();
        let c = GridField::constant(g, 2.5);
        let sq = GridField::from_fn(g, |x, _| x * x);
        let xy = GridField::from_fn(g, |x, y| x * y);
        for (i, j) in [(1, 1), (5, 7), (9, 9)] {
            for op in [delta_x, delta_y, delta2_x, delta2_y, delta_x_delta_y] {
                assert_eq!(op(&c, i, j).unwrap(), 0.0);
            }
            assert!((delta2_x(&sq, i, j).unwrap() - 2.0).abs() < 1e-12);
            assert!((delta_x_delta_y(&xy, i, j).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn boundary_nodes_are_out_of_stencil() {
        let g = Grid2D::unit(6, 6).unwrap();
        let f = GridField::zeros(g);
        let s = SolutionState::zeros(g);
        assert_eq!(delta_x(&f, 0, 3), Err(Error::OutOfStencil { i: 0, j: 3 }));
        assert!(delta2_y(&f, 3, 6).is_err());
        assert!(compact_mixed(&s, 6, 1).is_err());
        assert!(compact_second_x(&s, 2, 0).is_err());
    }

    #[test]
    fn compact_second_derivative_of_cubic_is_exact() {
        let g = Grid2D::unit(8, 8).unwrap();
        let s = SolutionState::from_exact(g, |x, _| x.powi(3), |x, _| 3.0 * x * x, |_, _| 0.0);
        for j in 1..8 {
            for i in 1..8 {
                let v = compact_second_x(&s, i, j).unwrap();
                assert!((v - 6.0 * g.x(i)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn compact_mixed_of_bilinear_and_separable() {
        let g = Grid2D::unit(8, 8).unwrap();
        let s = SolutionState::from_exact(g, |x, y| x * y, |_, y| y, |x, _| x);
        assert!((compact_mixed(&s, 3, 4).unwrap() - 1.0).abs() < 1e-12);
        let s = SolutionState::from_exact(g, |x, _| x.sin(), |x, _| x.cos(), |_, _| 0.0);
        assert!(compact_mixed(&s, 3, 4).unwrap().abs() < 1e-13);
    }

    fn max_interior(f: &GridField, exact: impl Fn(f64, f64) -> f64) -> f64 {
        let g = f.grid();
        let mut e = 0.0_f64;
        for j in 1..g.n() {
            for i in 1..g.m() {
                e = e.max((f[(i, j)] - exact(g.x(i), g.y(j))).abs());
            }
        }
        e
    }

    #[test]
    fn compact_second_x_is_fourth_order() {
        use std::f64::consts::PI;
        let err = |m| {
            let g = Grid2D::unit(m, m).unwrap();
            let s =
                SolutionState::from_exact(g, |x, _| (PI * x).sin(), |x, _| PI * (PI * x).cos(), |_, _| 0.0);
            max_interior(&field::compact_second_x(&s), |x, _| -PI * PI * (PI * x).sin())
        };
        let r = err(16) / err(32);
        assert!((14.0..=18.0).contains(&r), "ratio {r}");
    }

    #[test]
    fn compact_mixed_is_fourth_order() {
        let err = |m| {
            let g = Grid2D::unit(m, m).unwrap();
            let s = SolutionState::from_exact(
                g,
                |x, y| x.sin() * y.sin(),
                |x, y| x.cos() * y.sin(),
                |x, y| x.sin() * y.cos(),
            );
            max_interior(&field::compact_mixed(&s), |x, y| x.cos() * y.cos())
        };
        let r = err(16) / err(32);
        assert!((14.0..=18.0).contains(&r), "ratio {r}");
    }

    #[test]
    fn padé_fed_second_derivatives_exact_for_cubics() {
        // gradients from Padé with one-sided normal ends: exact on cubics
        let g = Grid2D::unit(9, 9).unwrap();
        let f = |x: f64, y: f64| 1.0 + x - 2.0 * y + x * x * y - 3.0 * y.powi(3) + x.powi(3);
        let s = SolutionState::from_phi(
            GridField::from_fn(g, f),
            &GradientClosure::bounded(),
            Execution::Sequential,
        )
        .unwrap();
        let sxx = field::compact_second_x(&s);
        let syy = field::compact_second_y(&s);
        let sxy = field::compact_mixed(&s);
        assert!(max_interior(&sxx, |x, y| 2.0 * y + 6.0 * x) < 1e-11 * 8.0);
        assert!(max_interior(&syy, |_, y| -18.0 * y) < 1e-11 * 18.0);
        assert!(max_interior(&sxy, |x, _| 2.0 * x) < 1e-11 * 2.0);
    }

    #[test]
    fn mixed_is_symmetric_under_transposition() {
        let g = Grid2D::unit(10, 10).unwrap();
        let f = |x: f64, y: f64| (2.0 * x).sin() * (y * y + x).exp();
        let closure = GradientClosure::bounded();
        let a = SolutionState::from_phi(GridField::from_fn(g, f), &closure, Execution::Sequential).unwrap();
        let b = SolutionState::from_phi(
            GridField::from_fn(g, |x, y| f(y, x)),
            &closure,
            Execution::Sequential,
        )
        .unwrap();
        let ma = field::compact_mixed(&a);
        let mb = field::compact_mixed(&b);
        for j in 1..10 {
            for i in 1..10 {
                assert!((ma[(i, j)] - mb[(j, i)]).abs() < 1e-12 * ma.max_abs());
            }
        }
    }
}
