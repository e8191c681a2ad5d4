use hoc2d::assembly::{assemble_steady, BoundarySpec, CoefficientField, PointCoefficients};
use hoc2d::grid::Grid2D;
use hoc2d::operators::SolutionState;
use hoc2d::problems::problem2;
use hoc2d::solver::{dense_oracle_solve, solve_block, SolverConfig};

#[test]
fn zero_data_gives_zero_solution() {
    let grid = Grid2D::unit(4, 4).unwrap();
    let laplace = PointCoefficients {
        alpha1: 1.0,
        alpha2: 1.0,
        ..Default::default()
    };
    let system = assemble_steady(
        &CoefficientField::constant(grid, laplace, 0.0),
        &BoundarySpec::homogeneous(),
    )
    .unwrap();
    let (state, report) =
        solve_block(&system, &SolutionState::zeros(grid), &SolverConfig::default()).unwrap();
    assert_eq!(report.iterations, 0);
    assert_eq!(state.phi.max_abs(), 0.0);
    assert_eq!(dense_oracle_solve(&system).unwrap().phi.max_abs(), 0.0);
}

#[test]
fn boundary_layer_system_matches_dense_solve() {
    let p = problem2(0.01).unwrap();
    let grid = p.grid(16, 16).unwrap();
    let system = assemble_steady(&p.coefficients(grid, 0.0).unwrap(), &p.boundary()).unwrap();
    let cfg = SolverConfig::default().with_tolerance(1e-12);
    let (iterative, _) = solve_block(&system, &SolutionState::zeros(grid), &cfg).unwrap();
    let direct = dense_oracle_solve(&system).unwrap();
    assert!(iterative.phi.max_abs_diff(&direct.phi).unwrap() < 1e-9);
    assert!(iterative.phi_x.max_abs_diff(&direct.phi_x).unwrap() < 1e-7);
}
