//! The compact operator `A_{h,k}`, the steady system `A_{h,k}φ = s` and the
//! θ-weighted time step.

mod boundary;
mod coefficients;
pub mod stencil;

pub use boundary::{BoundarySpec, Edge, EdgeKind, GradientFn, ScalarFn};
pub use coefficients::{CoefficientField, CoefficientFunctions, PointCoefficients};
pub use stencil::{compact_weights, low_order_weights};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::grid::GridField;
use crate::operators::{AxisKind, SolutionState};
use crate::solver::{solve_block, BlockSystem, SolveReport, SolverConfig, UnknownLayout};
use stencil::{implicit_compact, implicit_low, OFFSETS};

/// Weighting `ι`, step `δt` and final time of the θ-scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeIntegratorConfig {
    pub iota: f64,
    pub dt: f64,
    pub t_end: f64,
}

impl Default for TimeIntegratorConfig {
    fn default() -> Self {
        Self {
            iota: 0.5,
            dt: 1e-3,
            t_end: 1.0,
        }
    }
}

impl TimeIntegratorConfig {
    pub fn new(iota: f64, dt: f64, t_end: f64) -> Result<Self> {
        let cfg = Self { iota, dt, t_end };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Largest step `≤ dt_max` that divides `t_end` into whole steps.
    pub fn fitted(iota: f64, dt_max: f64, t_end: f64) -> Result<Self> {
        if !(dt_max > 0.0 && t_end > 0.0) {
            return Err(Error::Configuration(format!(
                "need dt > 0 and t_end > 0, got dt={dt_max}, t_end={t_end}"
            )));
        }
        let steps = (t_end / dt_max * (1.0 - 1e-12)).ceil().max(1.0);
        Self::new(iota, t_end / steps, t_end)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.iota) {
            return Err(Error::Configuration(format!("iota {} outside [0, 1]", self.iota)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Configuration(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Configuration(format!("bad final time {}", self.t_end)));
        }
        Ok(())
    }

    /// Number of steps to reach `t_end`, rounding to the nearest whole step.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    /// Sufficient stability condition when the reaction term is negative:
    /// `δt < −1 / (ι · min d)`.
    pub fn check_reaction(&self, coeffs: &CoefficientField) -> Result<()> {
        let d_min = coeffs.min_d();
        if d_min < 0.0 && self.iota > 0.0 {
            let bound = -1.0 / (self.iota * d_min);
            if self.dt >= bound {
                return Err(Error::Configuration(format!(
                    "dt = {} violates dt < {bound} required by min d = {d_min}",
                    self.dt
                )));
            }
        }
        Ok(())
    }
}

fn check_interior(coeffs: &CoefficientField, i: usize, j: usize) -> Result<()> {
    let g = coeffs.grid();
    if i == 0 || j == 0 || i >= g.m() || j >= g.n() {
        return Err(Error::OutOfStencil { i, j });
    }
    Ok(())
}

/// `A_{h,k}φ` at interior node `(i, j)`.
pub fn apply_discrete_operator(
    coeffs: &CoefficientField,
    state: &SolutionState,
    i: usize,
    j: usize,
) -> Result<f64> {
    check_interior(coeffs, i, j)?;
    coeffs.alpha1.check_same_grid(&state.phi)?;
    let g = coeffs.grid();
    let w = compact_weights(&coeffs.at(i, j), g.h(), g.k());
    let fields = [&state.phi, &state.phi_x, &state.phi_y];
    let mut acc = 0.0;
    for (f, field) in fields.iter().enumerate() {
        for (s, &(di, dj)) in OFFSETS.iter().enumerate() {
            acc += w[f * 9 + s] * field[((i as isize + di) as usize, (j as isize + dj) as usize)];
        }
    }
    Ok(acc)
}

/// `A_{h,k}φ` on every interior node (boundary nodes left at 0).
pub fn discrete_operator_field(
    coeffs: &CoefficientField,
    state: &SolutionState,
    exec: Execution,
) -> Result<GridField> {
    let grid = *coeffs.grid();
    coeffs.alpha1.check_same_grid(&state.phi)?;
    let system = stencil_system(coeffs, AxisKind::Bounded, AxisKind::Bounded, |_| 0.0)?;
    let values = system.apply(state, exec);
    let mut out = GridField::zeros(grid);
    system.layout().scatter(&values, &mut out);
    Ok(out)
}

fn stencil_system(
    coeffs: &CoefficientField,
    xa: AxisKind,
    ya: AxisKind,
    rhs: impl Fn(usize) -> f64,
) -> Result<BlockSystem> {
    let grid = *coeffs.grid();
    let layout = UnknownLayout::new(grid, xa, ya);
    let (h, k) = (grid.h(), grid.k());
    let n = layout.len();
    let mut weights = Vec::with_capacity(n);
    let mut low = Vec::with_capacity(n);
    for u in 0..n {
        let (i, j) = layout.node(u);
        let p = coeffs.at(i, j);
        weights.push(compact_weights(&p, h, k));
        low.push(low_order_weights(&p, h, k));
    }
    let rhs = (0..n).map(rhs).collect();
    BlockSystem::new(
        layout,
        weights,
        low,
        rhs,
        GridField::zeros(grid),
        crate::operators::GradientClosure::with_axes(xa, ya),
    )
}

/// Assemble `A_{h,k}φ = s` with the boundary conditions of `bc` evaluated
/// at `coeffs.time`.
pub fn assemble_steady(coeffs: &CoefficientField, bc: &BoundarySpec) -> Result<BlockSystem> {
    coeffs.validate()?;
    let (xa, ya) = bc.validate()?;
    let grid = *coeffs.grid();
    let layout = UnknownLayout::new(grid, xa, ya);
    let s: Vec<f64> = (0..layout.len())
        .map(|u| {
            let (i, j) = layout.node(u);
            coeffs.s[(i, j)]
        })
        .collect();
    let mut system = stencil_system(coeffs, xa, ya, |u| s[u])?;
    system.template = bc.template(grid, coeffs.time)?;
    system.closure = bc.closure(&grid, coeffs.time)?;
    Ok(system)
}

/// Assemble `[I + ιδtA^{n+1}]φ^{n+1} = [I − (1−ι)δtA^n]φ^n + δt(ιs^{n+1} + (1−ι)s^n)`.
pub fn assemble_theta(
    state_n: &SolutionState,
    coeffs_n: &CoefficientField,
    coeffs_np1: &CoefficientField,
    bc: &BoundarySpec,
    cfg: &TimeIntegratorConfig,
    exec: Execution,
) -> Result<BlockSystem> {
    cfg.validate()?;
    coeffs_n.validate()?;
    coeffs_np1.validate()?;
    cfg.check_reaction(coeffs_n)?;
    cfg.check_reaction(coeffs_np1)?;
    let (xa, ya) = bc.validate()?;
    let (iota, dt) = (cfg.iota, cfg.dt);

    let explicit = stencil_system(coeffs_n, xa, ya, |_| 0.0)?;
    let a_n = explicit.apply(state_n, exec);
    let layout = explicit.layout().clone();
    let rhs: Vec<f64> = (0..layout.len())
        .map(|u| {
            let (i, j) = layout.node(u);
            state_n.phi[(i, j)] - (1.0 - iota) * dt * a_n[u]
                + dt * (iota * coeffs_np1.s[(i, j)] + (1.0 - iota) * coeffs_n.s[(i, j)])
        })
        .collect();

    let implicit = stencil_system(coeffs_np1, xa, ya, |_| 0.0)?;
    let scale = iota * dt;
    let weights = implicit
        .weights()
        .iter()
        .map(|w| implicit_compact(w, scale))
        .collect();
    let low = implicit.low.iter().map(|w| implicit_low(w, scale)).collect();
    let grid = *coeffs_np1.grid();
    let t1 = coeffs_np1.time;
    BlockSystem::new(
        layout,
        weights,
        low,
        rhs,
        bc.template(grid, t1)?,
        bc.closure(&grid, t1)?,
    )
}

/// Advance `state_n` by one θ-step.
///
/// With `ι = 0` the implicit matrix is the identity, so the new interior
/// values are the right-hand side and no iteration is run.
pub fn step_theta(
    state_n: &SolutionState,
    coeffs_n: &CoefficientField,
    coeffs_np1: &CoefficientField,
    bc: &BoundarySpec,
    cfg: &TimeIntegratorConfig,
    solver: &SolverConfig,
) -> Result<(SolutionState, SolveReport)> {
    let system = assemble_theta(state_n, coeffs_n, coeffs_np1, bc, cfg, solver.exec)?;
    if cfg.iota == 0.0 {
        let state = system.state_from_unknowns(system.rhs(), solver.exec)?;
        let residual = system.residual(&state)?;
        return Ok((
            state,
            SolveReport {
                iterations: 0,
                residual,
                history: Vec::new(),
            },
        ));
    }
    solve_block(&system, state_n, solver)
}

/// Solve the steady problem from a zero initial guess.
pub fn solve_steady(
    coeffs: &CoefficientField,
    bc: &BoundarySpec,
    solver: &SolverConfig,
) -> Result<(SolutionState, SolveReport)> {
    let system = assemble_steady(coeffs, bc)?;
    solve_block(&system, &SolutionState::zeros(*coeffs.grid()), solver)
}
