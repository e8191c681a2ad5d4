use crate::error::{Error, Result};
use crate::grid::{Grid2D, GridField};

/// Coefficients of `−α₁φ_xx − βφ_xy − α₂φ_yy + c₁φ_x + c₂φ_y + dφ = s` at
/// one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointCoefficients {
    pub alpha1: f64,
    pub alpha2: f64,
    pub beta: f64,
    pub c1: f64,
    pub c2: f64,
    pub d: f64,
    pub s: f64,
}

impl PointCoefficients {
    /// `α₁ > 0`, `α₂ > 0` and `β² < 4α₁α₂`.
    pub fn is_positive_definite(&self) -> bool {
        self.alpha1 > 0.0 && self.alpha2 > 0.0 && self.beta * self.beta < 4.0 * self.alpha1 * self.alpha2
    }

    pub fn is_finite(&self) -> bool {
        [
            self.alpha1,
            self.alpha2,
            self.beta,
            self.c1,
            self.c2,
            self.d,
            self.s,
        ]
        .iter()
        .all(|v| v.is_finite())
    }
}

/// Coefficients as functions of position and time.
pub trait CoefficientFunctions: Send + Sync {
    fn at(&self, x: f64, y: f64, t: f64) -> PointCoefficients;
}

impl<F> CoefficientFunctions for F
where
    F: Fn(f64, f64, f64) -> PointCoefficients + Send + Sync,
{
    fn at(&self, x: f64, y: f64, t: f64) -> PointCoefficients {
        self(x, y, t)
    }
}

/// All coefficient fields of the equation, sampled at one time level.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientField {
    pub alpha1: GridField,
    pub alpha2: GridField,
    pub beta: GridField,
    pub c1: GridField,
    pub c2: GridField,
    pub d: GridField,
    pub s: GridField,
    pub time: f64,
}

impl CoefficientField {
    pub fn from_point_fn(grid: Grid2D, time: f64, f: impl Fn(usize, usize) -> PointCoefficients) -> Self {
        let mut out = Self::constant(grid, PointCoefficients::default(), time);
        for j in 0..=grid.n() {
            for i in 0..=grid.m() {
                out.set(i, j, f(i, j));
            }
        }
        out
    }

    /// Sample `functions` at the grid nodes at time `t`.
    pub fn sample(grid: Grid2D, functions: &dyn CoefficientFunctions, t: f64) -> Self {
        Self::from_point_fn(grid, t, |i, j| functions.at(grid.x(i), grid.y(j), t))
    }

    pub fn constant(grid: Grid2D, p: PointCoefficients, time: f64) -> Self {
        let c = |v| GridField::constant(grid, v);
        Self {
            alpha1: c(p.alpha1),
            alpha2: c(p.alpha2),
            beta: c(p.beta),
            c1: c(p.c1),
            c2: c(p.c2),
            d: c(p.d),
            s: c(p.s),
            time,
        }
    }

    pub fn grid(&self) -> &Grid2D {
        self.alpha1.grid()
    }

    pub fn at(&self, i: usize, j: usize) -> PointCoefficients {
        PointCoefficients {
            alpha1: self.alpha1[(i, j)],
            alpha2: self.alpha2[(i, j)],
            beta: self.beta[(i, j)],
            c1: self.c1[(i, j)],
            c2: self.c2[(i, j)],
            d: self.d[(i, j)],
            s: self.s[(i, j)],
        }
    }

    pub fn set(&mut self, i: usize, j: usize, p: PointCoefficients) {
        self.alpha1[(i, j)] = p.alpha1;
        self.alpha2[(i, j)] = p.alpha2;
        self.beta[(i, j)] = p.beta;
        self.c1[(i, j)] = p.c1;
        self.c2[(i, j)] = p.c2;
        self.d[(i, j)] = p.d;
        self.s[(i, j)] = p.s;
    }

    pub fn min_d(&self) -> f64 {
        self.d.values().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Check finiteness and positive definiteness at every node.
    pub fn validate(&self) -> Result<()> {
        let g = *self.grid();
        for f in [&self.alpha2, &self.beta, &self.c1, &self.c2, &self.d, &self.s] {
            self.alpha1.check_same_grid(f)?;
        }
        for j in 0..=g.n() {
            for i in 0..=g.m() {
                let p = self.at(i, j);
                if !p.is_finite() {
                    return Err(Error::IllPosed {
                        i,
                        j,
                        reason: "non-finite coefficient".into(),
                    });
                }
                if !p.is_positive_definite() {
                    return Err(Error::IllPosed {
                        i,
                        j,
                        reason: format!(
                            "not positive definite: alpha1={}, alpha2={}, beta={}",
                            p.alpha1, p.alpha2, p.beta
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_flags_the_offending_node() {
        let g = Grid2D::unit(4, 4).unwrap();
        let laplace = PointCoefficients {
            alpha1: 1.0,
            alpha2: 1.0,
            ..Default::default()
        };
        let mut c = CoefficientField::constant(g, laplace, 0.0);
        assert!(c.validate().is_ok());
        c.beta[(2, 3)] = 2.0;
        assert!(matches!(c.validate(), Err(Error::IllPosed { i: 2, j: 3, .. })));
        c.beta[(2, 3)] = 0.0;
        c.alpha2[(1, 1)] = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn sampling_closures() {
        let g = Grid2D::unit(4, 4).unwrap();
        let f = |x: f64, y: f64, t: f64| PointCoefficients {
            alpha1: 1.0,
            alpha2: 1.0,
            d: x + y + t,
            ..Default::default()
        };
        let c = CoefficientField::sample(g, &f, 1.0);
        assert_eq!(c.at(4, 4).d, 3.0);
        assert_eq!(c.min_d(), 1.0);
        assert_eq!(c.time, 1.0);
    }
}
