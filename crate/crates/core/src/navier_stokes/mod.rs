//! Stream-function/vorticity Navier–Stokes on a mapped grid.
//!
//! Each time step alternates a θ-step of the vorticity transport equation
//! with a steady compact solve for the stream function, rebuilding the
//! convection coefficients from the recovered velocities until successive
//! vorticity iterates agree.

use crate::assembly::{assemble_steady, step_theta, BoundarySpec, TimeIntegratorConfig};
use crate::error::{Error, Result};
use crate::grid::{Grid2D, GridField, Mapping, MetricField, TransformedCoefficients};
use crate::operators::SolutionState;
use crate::problems::VortexDecay;
use crate::solver::{solve_block, SolveReport, SolverConfig};

/// Stream function, vorticity and physical velocities at one time.
#[derive(Debug, Clone)]
pub struct FlowState {
    pub psi: SolutionState,
    pub omega: SolutionState,
    pub u: GridField,
    pub v: GridField,
    pub time: f64,
}

impl FlowState {
    /// Assemble a state, recovering `(u, v)` from `psi`.
    pub fn new(psi: SolutionState, omega: SolutionState, model: &FlowModel, time: f64) -> Result<Self> {
        let (u, v) = velocity_recover(&psi, &model.metrics)?;
        Ok(Self {
            psi,
            omega,
            u,
            v,
            time,
        })
    }

    pub fn grid(&self) -> &Grid2D {
        self.psi.grid()
    }
}

#[derive(Debug, Clone)]
pub struct NsConfig {
    pub reynolds: f64,
    pub dt: f64,
    pub t_end: f64,
    pub iota: f64,
    pub coupling_tolerance: f64,
    pub max_coupling_iterations: usize,
    /// With `false` the vorticity equation is advanced with zero velocity.
    pub convection: bool,
    pub solver: SolverConfig,
}

impl Default for NsConfig {
    fn default() -> Self {
        Self {
            reynolds: 100.0,
            dt: 1e-3,
            t_end: 0.1,
            iota: 0.5,
            coupling_tolerance: 1e-8,
            max_coupling_iterations: 50,
            convection: true,
            solver: SolverConfig::default().with_tolerance(1e-12),
        }
    }
}

impl NsConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.reynolds > 0.0 && self.reynolds.is_finite()) {
            return Err(Error::Configuration(format!(
                "Re must be positive, got {}",
                self.reynolds
            )));
        }
        if !(self.coupling_tolerance > 0.0 && self.max_coupling_iterations > 0) {
            return Err(Error::Configuration(
                "coupling tolerance and iteration limit must be positive".into(),
            ));
        }
        self.time()?;
        self.solver.validate()
    }

    /// Time stepping with `dt` shrunk, if needed, to divide `t_end`.
    pub fn time(&self) -> Result<TimeIntegratorConfig> {
        TimeIntegratorConfig::fitted(self.iota, self.dt, self.t_end)
    }
}

/// Metrics and the fixed parts of the transformed equations.
#[derive(Debug, Clone)]
pub struct FlowModel {
    pub metrics: MetricField,
    pub coefficients: TransformedCoefficients,
}

impl FlowModel {
    pub fn new(mapping: &dyn Mapping, grid: Grid2D, reynolds: f64) -> Result<Self> {
        let metrics = MetricField::new(mapping, grid)?;
        let coefficients = TransformedCoefficients::new(&metrics, reynolds)?;
        Ok(Self {
            metrics,
            coefficients,
        })
    }

    pub fn grid(&self) -> &Grid2D {
        self.metrics.grid()
    }
}

/// Dirichlet data for both fields, in computational coordinates.
#[derive(Debug, Clone)]
pub struct FlowBoundary {
    pub psi: BoundarySpec,
    pub omega: BoundarySpec,
}

/// Solve the stream-function equation with vorticity `omega` as forcing.
pub fn streamfunction_solve(
    omega: &GridField,
    model: &FlowModel,
    bc: &BoundarySpec,
    t: f64,
    initial: Option<&SolutionState>,
    solver: &SolverConfig,
) -> Result<(SolutionState, SolveReport)> {
    let coeffs = model.coefficients.streamfunction_field(omega, t);
    let system = assemble_steady(&coeffs, bc)?;
    let start = match initial {
        Some(s) => s.clone(),
        None => SolutionState::zeros(*omega.grid()),
    };
    solve_block(&system, &start, solver)
}

/// Physical velocities `u = ψ_y`, `v = −ψ_x` from the stored compact
/// gradients of `ψ` through the chain rule.
pub fn velocity_recover(psi: &SolutionState, metrics: &MetricField) -> Result<(GridField, GridField)> {
    let grid = *psi.grid();
    if metrics.grid() != &grid {
        return Err(Error::ShapeMismatch {
            expected: metrics.grid().shape(),
            found: grid.shape(),
        });
    }
    let mut u = GridField::zeros(grid);
    let mut v = GridField::zeros(grid);
    for j in 0..=grid.n() {
        for i in 0..=grid.m() {
            let im = metrics.inverse(i, j);
            if im.jacobian == 0.0 || im.jacobian.is_nan() {
                return Err(Error::SingularMapping {
                    i,
                    j,
                    jacobian: im.jacobian,
                });
            }
            let (pxi, peta) = (psi.phi_x[(i, j)], psi.phi_y[(i, j)]);
            u[(i, j)] = pxi * im.xi_y + peta * im.eta_y;
            v[(i, j)] = -(pxi * im.xi_x + peta * im.eta_x);
        }
    }
    Ok((u, v))
}

/// One θ-step of the vorticity equation from `flow`, with level-(n+1)
/// convection built from `(u_next, v_next)`.
pub fn vorticity_step(
    flow: &FlowState,
    model: &FlowModel,
    bc: &BoundarySpec,
    u_next: &GridField,
    v_next: &GridField,
    cfg: &NsConfig,
) -> Result<(SolutionState, SolveReport)> {
    let time = cfg.time()?;
    let zero = GridField::zeros(*flow.grid());
    let (u0, v0, u1, v1) = if cfg.convection {
        (&flow.u, &flow.v, u_next, v_next)
    } else {
        (&zero, &zero, &zero, &zero)
    };
    let tc = &model.coefficients;
    let c_n = tc.vorticity_field(&model.metrics, u0, v0, flow.time);
    let c_np1 = tc.vorticity_field(&model.metrics, u1, v1, flow.time + time.dt);
    c_np1.validate()?;
    step_theta(&flow.omega, &c_n, &c_np1, bc, &time, &cfg.solver)
}

/// Statistics of one coupled step.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingReport {
    pub iterations: usize,
    /// `‖ω_k − ω_{k−1}‖∞` per inner iteration.
    pub changes: Vec<f64>,
    pub max_residual: f64,
}

/// Advance `flow` by one step, iterating vorticity transport and the
/// stream-function solve to a self-consistent `ω`.
pub fn couple_step(
    flow: &FlowState,
    model: &FlowModel,
    bcs: &FlowBoundary,
    cfg: &NsConfig,
) -> Result<(FlowState, CouplingReport)> {
    let t1 = flow.time + cfg.time()?.dt;
    let mut u = flow.u.clone();
    let mut v = flow.v.clone();
    let mut psi = flow.psi.clone();
    let mut previous = flow.omega.phi.clone();
    let mut changes = Vec::new();
    let mut max_residual = 0.0_f64;
    for it in 1..=cfg.max_coupling_iterations {
        let (omega, r1) = vorticity_step(flow, model, &bcs.omega, &u, &v, cfg)?;
        let (p, r2) = streamfunction_solve(&omega.phi, model, &bcs.psi, t1, Some(&psi), &cfg.solver)?;
        max_residual = max_residual.max(r1.residual).max(r2.residual);
        psi = p;
        (u, v) = velocity_recover(&psi, &model.metrics)?;
        let change = omega.phi.max_abs_diff(&previous)?;
        changes.push(change);
        previous = omega.phi.clone();
        if change < cfg.coupling_tolerance {
            let next = FlowState {
                psi,
                omega,
                u,
                v,
                time: t1,
            };
            return Ok((
                next,
                CouplingReport {
                    iterations: it,
                    changes,
                    max_residual,
                },
            ));
        }
    }
    Err(Error::CouplingNonConvergence {
        iterations: cfg.max_coupling_iterations,
        change: changes.last().copied().unwrap_or(f64::NAN),
        history: changes,
    })
}

/// `½∫(u² + v²) dA` by the trapezoidal rule in computational coordinates.
pub fn kinetic_energy(flow: &FlowState, metrics: &MetricField) -> f64 {
    let g = *flow.grid();
    let mut e = 0.0;
    for j in 0..=g.n() {
        for i in 0..=g.m() {
            let wx = if i == 0 || i == g.m() { 0.5 } else { 1.0 };
            let wy = if j == 0 || j == g.n() { 0.5 } else { 1.0 };
            let speed2 = flow.u[(i, j)].powi(2) + flow.v[(i, j)].powi(2);
            e += wx * wy * speed2 * metrics.jacobian(i, j).abs();
        }
    }
    0.5 * e * g.h() * g.k()
}

/// Per-step diagnostics of a simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowDiagnostics {
    pub time: f64,
    pub kinetic_energy: f64,
    pub max_omega: f64,
    pub coupling_iterations: usize,
}

/// March from `initial` to `cfg.t_end`, recording diagnostics after each step.
pub fn simulate(
    initial: FlowState,
    model: &FlowModel,
    bcs: &FlowBoundary,
    cfg: &NsConfig,
) -> Result<(FlowState, Vec<FlowDiagnostics>)> {
    cfg.validate()?;
    let steps = cfg.time()?.steps();
    let mut flow = initial;
    let mut log = Vec::with_capacity(steps);
    for _ in 0..steps {
        let (next, report) = couple_step(&flow, model, bcs, cfg)?;
        flow = next;
        log.push(FlowDiagnostics {
            time: flow.time,
            kinetic_energy: kinetic_energy(&flow, &model.metrics),
            max_omega: flow.omega.phi.max_abs(),
            coupling_iterations: report.iterations,
        });
    }
    Ok((flow, log))
}

impl VortexDecay {
    pub fn flow_boundary(&self) -> FlowBoundary {
        FlowBoundary {
            psi: self.psi_boundary(),
            omega: self.omega_boundary(),
        }
    }

    /// Exact state at time `t` on the unit square, with Padé gradients.
    pub fn flow_state(&self, model: &FlowModel, t: f64) -> Result<FlowState> {
        let grid = *model.grid();
        let bcs = self.flow_boundary();
        let exec = crate::exec::Execution::default();
        let psi = SolutionState::from_phi(
            GridField::from_fn(grid, |x, y| self.psi(x, y, t)),
            &bcs.psi.closure(&grid, t)?,
            exec,
        )?;
        let omega = SolutionState::from_phi(
            GridField::from_fn(grid, |x, y| self.omega(x, y, t)),
            &bcs.omega.closure(&grid, t)?,
            exec,
        )?;
        FlowState::new(psi, omega, model, t)
    }
}

/// Maximum errors of a vortex-decay run against the exact fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VortexErrors {
    pub psi: f64,
    pub omega: f64,
    pub velocity: f64,
}

pub fn vortex_errors(vortex: &VortexDecay, flow: &FlowState) -> VortexErrors {
    let g = *flow.grid();
    let t = flow.time;
    let mut e = VortexErrors {
        psi: 0.0,
        omega: 0.0,
        velocity: 0.0,
    };
    for j in 0..=g.n() {
        for i in 0..=g.m() {
            let (x, y) = g.node(i, j);
            let (u, v) = vortex.velocity(x, y, t);
            e.psi = e.psi.max((flow.psi.phi[(i, j)] - vortex.psi(x, y, t)).abs());
            e.omega = e
                .omega
                .max((flow.omega.phi[(i, j)] - vortex.omega(x, y, t)).abs());
            e.velocity = e
                .velocity
                .max((flow.u[(i, j)] - u).abs())
                .max((flow.v[(i, j)] - v).abs());
        }
    }
    e
}

/// Run the decaying vortex on an `m × m` identity-mapped unit square.
pub fn run_vortex(m: usize, cfg: &NsConfig) -> Result<(FlowState, Vec<FlowDiagnostics>, VortexErrors)> {
    let vortex = VortexDecay::new(cfg.reynolds);
    let model = FlowModel::new(&crate::grid::Identity, Grid2D::unit(m, m)?, cfg.reynolds)?;
    let initial = vortex.flow_state(&model, 0.0)?;
    let (flow, log) = simulate(initial, &model, &vortex.flow_boundary(), cfg)?;
    let errors = vortex_errors(&vortex, &flow);
    Ok((flow, log, errors))
}
