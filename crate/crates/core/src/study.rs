//! Experiment drivers: time marching a test problem, steady solves, and
//! grid or time-step refinement tables.

use crate::assembly::{assemble_steady, step_theta, TimeIntegratorConfig};
use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::grid::Grid2D;
use crate::operators::SolutionState;
use crate::problems::{convergence_order, ErrorNorms, TestProblem};
use crate::solver::{solve_block, SolveReport, SolverConfig};

/// Final state of a run together with solver statistics.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub state: SolutionState,
    pub time: f64,
    pub steps: usize,
    pub total_iterations: usize,
    /// Largest final residual over all solves.
    pub max_residual: f64,
}

/// March `problem` from its exact initial data to `time.t_end`.
pub fn march(
    problem: &TestProblem,
    grid: Grid2D,
    time: &TimeIntegratorConfig,
    solver: &SolverConfig,
) -> Result<RunOutcome> {
    time.validate()?;
    let bc = problem.boundary();
    let metrics = problem.metrics(grid)?;
    let steps = time.steps();
    let mut state = problem.initial_state(grid, 0.0, solver.exec)?;
    let mut coeffs = problem.coefficients_with(grid, metrics.as_ref(), 0.0)?;
    let mut total_iterations = 0;
    let mut max_residual = 0.0_f64;
    for n in 0..steps {
        let t1 = (n + 1) as f64 * time.dt;
        let next = problem.coefficients_with(grid, metrics.as_ref(), t1)?;
        let (s, report) = step_theta(&state, &coeffs, &next, &bc, time, solver)?;
        total_iterations += report.iterations;
        max_residual = max_residual.max(report.residual);
        state = s;
        coeffs = next;
    }
    Ok(RunOutcome {
        state,
        time: steps as f64 * time.dt,
        steps,
        total_iterations,
        max_residual,
    })
}

/// Solve a steady problem directly on `grid`.
pub fn solve_steady_problem(
    problem: &TestProblem,
    grid: Grid2D,
    solver: &SolverConfig,
) -> Result<(SolutionState, SolveReport)> {
    let coeffs = problem.coefficients(grid, 0.0)?;
    let system = assemble_steady(&coeffs, &problem.boundary())?;
    solve_block(&system, &SolutionState::zeros(grid), solver)
}

/// How the time step follows the grid in a spatial refinement study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtRule {
    /// `δt = h²`.
    SquareOfH,
    Fixed(f64),
}

impl DtRule {
    pub fn dt(&self, grid: &Grid2D) -> f64 {
        match *self {
            DtRule::SquareOfH => grid.h() * grid.h(),
            DtRule::Fixed(dt) => dt,
        }
    }
}

/// One refinement level: its label, error norms and observed orders
/// relative to the previous row.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub label: String,
    pub errors: ErrorNorms,
    pub orders: Option<[f64; 3]>,
    pub max_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    fn from_levels(levels: Vec<(String, ErrorNorms, f64)>) -> Result<Self> {
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels.len());
        for (label, errors, max_residual) in levels {
            let orders = match rows.last() {
                None => None,
                Some(prev) => {
                    let p = prev.errors.as_array();
                    let c = errors.as_array();
                    Some([
                        convergence_order(p[0], c[0])?,
                        convergence_order(p[1], c[1])?,
                        convergence_order(p[2], c[2])?,
                    ])
                }
            };
            rows.push(ConvergenceRow {
                label,
                errors,
                orders,
                max_residual,
            });
        }
        Ok(Self { rows })
    }
}

/// Spatial refinement: one run per grid of `m × m` intervals.
pub fn run_spatial_convergence(
    problem: &TestProblem,
    intervals: &[usize],
    t_end: f64,
    dt_rule: DtRule,
    iota: f64,
    solver: &SolverConfig,
) -> Result<ConvergenceTable> {
    if intervals.is_empty() {
        return Err(Error::Configuration("need at least one grid".into()));
    }
    let levels = map_indexed(solver.exec, intervals.len(), |q| -> Result<_> {
        let m = intervals[q];
        let grid = problem.grid(m, m)?;
        let label = format!("{}x{}", m + 1, m + 1);
        if problem.is_steady() {
            let (state, report) = solve_steady_problem(problem, grid, solver)?;
            let e = problem.errors(&state.phi, 0.0)?;
            return Ok((label, e, report.residual));
        }
        let time = TimeIntegratorConfig::fitted(iota, dt_rule.dt(&grid), t_end)?;
        let out = march(problem, grid, &time, solver)?;
        Ok((label, problem.errors(&out.state.phi, out.time)?, out.max_residual))
    });
    ConvergenceTable::from_levels(levels.into_iter().collect::<Result<_>>()?)
}

/// Temporal refinement on a fixed `m × m` grid.
pub fn run_temporal_convergence(
    problem: &TestProblem,
    m: usize,
    dts: &[f64],
    t_end: f64,
    iota: f64,
    solver: &SolverConfig,
) -> Result<ConvergenceTable> {
    if dts.is_empty() {
        return Err(Error::Configuration("need at least one time step".into()));
    }
    let grid = problem.grid(m, m)?;
    let levels = map_indexed(solver.exec, dts.len(), |q| -> Result<_> {
        let time = TimeIntegratorConfig::new(iota, dts[q], t_end)?;
        if (time.steps() as f64 * time.dt - t_end).abs() > 1e-9 * t_end.max(1.0) {
            return Err(Error::Configuration(format!(
                "dt = {} does not divide t_end = {t_end}",
                dts[q]
            )));
        }
        let out = march(problem, grid, &time, solver)?;
        Ok((
            format!("dt={}", dts[q]),
            problem.errors(&out.state.phi, out.time)?,
            out.max_residual,
        ))
    });
    ConvergenceTable::from_levels(levels.into_iter().collect::<Result<_>>()?)
}
