//! Iterative and dense solvers for the coupled `(φ, φ_x, φ_y)` systems.
//!
//! The iterative path is flexible GMRES on the compact rows with the Padé
//! gradients eliminated: every operator application recovers `φ_x, φ_y`
//! from `φ` by the tridiagonal solves, so the Padé rows hold exactly at
//! every iterate. It is right-preconditioned by an approximate inverse of
//! the second-order nine-point discretization of the same operator.

mod oracle;
mod precond;
mod system;

pub use oracle::dense_oracle_solve;
pub use system::{BlockSystem, UnknownLayout};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::operators::SolutionState;
use precond::{dot, norm2, NinePoint};
use std::fmt;
use std::str::FromStr;

/// How the nine-point preconditioning system is approximately inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InnerSolver {
    /// BiCGSTAB, itself preconditioned by alternating line relaxation.
    #[default]
    Krylov,
    /// Alternating x/y line Gauss–Seidel sweeps alone.
    LineRelax,
}

impl FromStr for InnerSolver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "krylov" => Ok(Self::Krylov),
            "line-relax" => Ok(Self::LineRelax),
            other => Err(Error::Configuration(format!(
                "unknown inner solver `{other}` (expected krylov or line-relax)"
            ))),
        }
    }
}

impl fmt::Display for InnerSolver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Krylov => "krylov",
            Self::LineRelax => "line-relax",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Bound on `‖rhs − T(φ)‖∞ / ‖rhs − T(boundary data)‖∞`.
    pub tolerance: f64,
    /// Cap on outer Krylov iterations, counted across restarts.
    pub max_outer: usize,
    /// Line relaxation factor, in `[0.3, 1]`.
    pub relaxation: f64,
    pub inner: InnerSolver,
    /// Krylov subspace size before restart.
    pub restart: usize,
    /// Line-relaxation passes per preconditioner application.
    pub sweeps: usize,
    pub exec: Execution,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_outer: 100,
            relaxation: 1.0,
            inner: InnerSolver::Krylov,
            restart: 30,
            sweeps: 2,
            exec: Execution::default(),
        }
    }
}

impl SolverConfig {
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_outer(mut self, max_outer: usize) -> Self {
        self.max_outer = max_outer;
        self
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Configuration(format!(
                "solver tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_outer < 1 || self.restart < 1 || self.sweeps < 1 {
            return Err(Error::Configuration(
                "iteration limits, restart length and sweeps must be at least 1".into(),
            ));
        }
        if !(0.3..=1.0).contains(&self.relaxation) {
            return Err(Error::Configuration(format!(
                "relaxation {} outside [0.3, 1]",
                self.relaxation
            )));
        }
        Ok(())
    }
}

/// Outcome of a converged solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// Relative ∞-norm residual recomputed from the returned state.
    pub residual: f64,
    /// Relative 2-norm residual estimate after each Krylov step.
    pub history: Vec<f64>,
}

/// Solve `system` from `initial` (only its interior values are used).
pub fn solve_block(
    system: &BlockSystem,
    initial: &SolutionState,
    cfg: &SolverConfig,
) -> Result<(SolutionState, SolveReport)> {
    cfg.validate()?;
    let exec = cfg.exec;
    let n = system.layout.len();
    let b = system.effective_rhs(exec)?;
    let scale = {
        let s = system::inf_norm(&b);
        if s > 0.0 {
            s
        } else {
            1.0
        }
    };
    let mut x = system.layout.gather(&initial.phi);
    let mut state = system.state_from_unknowns(&x, exec)?;
    let mut residual = system.residual(&state)?;
    let mut history = Vec::new();
    let mut iterations = 0;
    if residual <= cfg.tolerance {
        return Ok((
            state,
            SolveReport {
                iterations,
                residual,
                history,
            },
        ));
    }

    let p = NinePoint::new(system);
    let precondition = |v: &[f64], z: &mut [f64]| match cfg.inner {
        InnerSolver::LineRelax => p.line_relax(v, z, cfg.sweeps, cfg.relaxation),
        InnerSolver::Krylov => p.bicgstab(v, z, 1e-2, 50, cfg.relaxation),
    };

    let m = cfg.restart;
    let mut r = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
    let mut zs: Vec<Vec<f64>> = Vec::with_capacity(m);
    // stop the Arnoldi process once the 2-norm estimate bounds the ∞-norm
    let target = cfg.tolerance * scale;

    loop {
        system.apply_linear(&x, exec, &mut w)?;
        for q in 0..n {
            r[q] = b[q] - w[q];
        }
        let beta = norm2(&r);
        basis.clear();
        zs.clear();
        basis.push(r.iter().map(|v| v / beta).collect());
        let mut hess = vec![vec![0.0; m]; m + 1];
        let mut cs = vec![0.0; m];
        let mut sn = vec![0.0; m];
        let mut g = vec![0.0; m + 1];
        g[0] = beta;
        let mut used = 0;

        for k in 0..m {
            let mut z = vec![0.0; n];
            precondition(&basis[k], &mut z);
            system.apply_linear(&z, exec, &mut w)?;
            zs.push(z);
            for (i, v) in basis.iter().enumerate() {
                let hik = dot(&w, v);
                hess[i][k] = hik;
                for q in 0..n {
                    w[q] -= hik * v[q];
                }
            }
            let hnext = norm2(&w);
            hess[k + 1][k] = hnext;
            for i in 0..k {
                let t = cs[i] * hess[i][k] + sn[i] * hess[i + 1][k];
                hess[i + 1][k] = -sn[i] * hess[i][k] + cs[i] * hess[i + 1][k];
                hess[i][k] = t;
            }
            let denom = hess[k][k].hypot(hess[k + 1][k]);
            if denom == 0.0 {
                used = k;
                break;
            }
            cs[k] = hess[k][k] / denom;
            sn[k] = hess[k + 1][k] / denom;
            hess[k][k] = denom;
            hess[k + 1][k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            iterations += 1;
            used = k + 1;
            history.push(g[k + 1].abs() / scale);
            if g[k + 1].abs() <= target || hnext == 0.0 || iterations >= cfg.max_outer {
                break;
            }
            basis.push(w.iter().map(|v| v / hnext).collect());
        }

        let mut y = vec![0.0; used];
        for i in (0..used).rev() {
            let mut acc = g[i];
            for (c, yc) in y.iter().enumerate().skip(i + 1) {
                acc -= hess[i][c] * yc;
            }
            y[i] = acc / hess[i][i];
        }
        for (yi, z) in y.iter().zip(&zs) {
            for q in 0..n {
                x[q] += yi * z[q];
            }
        }

        state = system.state_from_unknowns(&x, exec)?;
        residual = system.residual(&state)?;
        if !residual.is_finite() {
            return Err(Error::NonConvergence {
                iterations,
                residual,
                history,
            });
        }
        if residual <= cfg.tolerance {
            return Ok((
                state,
                SolveReport {
                    iterations,
                    residual,
                    history,
                },
            ));
        }
        if iterations >= cfg.max_outer || used == 0 {
            return Err(Error::NonConvergence {
                iterations,
                residual,
                history,
            });
        }
    }
}
