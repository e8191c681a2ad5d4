use crate::config::Config;
use crate::{CliError, Output};
use hoc2d::analysis::{dispersion_table, stability_scan, DEFAULT_KAPPA2_K};
use hoc2d::assembly::{PointCoefficients, TimeIntegratorConfig};
use hoc2d::navier_stokes::{run_vortex, NsConfig};
use hoc2d::output::{convergence_csv, dispersion_csv, Cell, CsvTable};
use hoc2d::problems::{problem1, problem2_with_stretch, TestProblem};
use hoc2d::solver::SolverConfig;
use hoc2d::study::{march, run_spatial_convergence, run_temporal_convergence, solve_steady_problem, DtRule};
use std::time::SystemTime;

fn emit(table: CsvTable, name: &str, out: &Output) -> Result<(), CliError> {
    let table = if out.timestamp {
        table.meta("generated", humantime::format_rfc3339_seconds(SystemTime::now()))
    } else {
        table
    };
    std::fs::create_dir_all(&out.dir).map_err(|e| CliError::Io(format!("{}: {e}", out.dir.display())))?;
    let path = out.dir.join(name);
    let file = std::fs::File::create(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    table
        .write_to(std::io::BufWriter::new(file))
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    out.say(format!("wrote {}", path.display()));
    Ok(())
}

const PROBLEM_KEYS: &[&str] = &["problem", "epsilon", "lambda", "iota", "t_end"];

fn problem(cfg: &Config) -> Result<TestProblem, CliError> {
    match cfg.get_str("problem", "problem1") {
        "problem1" => Ok(problem1()),
        "problem2" => Ok(problem2_with_stretch(
            cfg.get("epsilon", 0.01)?,
            cfg.get("lambda", 0.9)?,
        )?),
        "ns-vortex" => Err(CliError::Config(
            "ns-vortex is a flow problem; use the ns-vortex subcommand".into(),
        )),
        other => Err(CliError::Config(format!(
            "unknown problem `{other}` (expected problem1 or problem2)"
        ))),
    }
}

pub fn convergence(cfg: &Config, out: &Output) -> Result<(), CliError> {
    let keys: Vec<&str> = PROBLEM_KEYS
        .iter()
        .copied()
        .chain(["mode", "grids", "dt_rule", "dt", "grid.M"])
        .collect();
    cfg.check_keys(&keys)?;
    let p = problem(cfg)?;
    let solver = cfg.solver(SolverConfig::default())?;
    let t_end: f64 = cfg.get("t_end", 0.25)?;
    let iota: f64 = cfg.get("iota", 0.5)?;
    let mode = cfg.get_str("mode", "spatial");
    let mut table;
    let label;
    match mode {
        "spatial" => {
            let grids: Vec<usize> = cfg.get_list("grids", &[10, 20, 40])?;
            let rule = match cfg.get_str("dt_rule", "h2") {
                "h2" => DtRule::SquareOfH,
                "fixed" => DtRule::Fixed(cfg.get("dt", 0.01)?),
                other => {
                    return Err(CliError::Config(format!(
                        "dt_rule `{other}`: expected h2 or fixed"
                    )))
                }
            };
            let result = run_spatial_convergence(&p, &grids, t_end, rule, iota, &solver)?;
            label = "grid";
            table = convergence_csv(&result, label).meta("max_residual", max_residual(&result));
            table = table.meta("dt_rule", format!("{rule:?}"));
        }
        "temporal" => {
            let m: usize = cfg.get("grid.M", 30)?;
            let dts: Vec<f64> = cfg.get_list("dt", &[0.01, 0.005, 0.0025])?;
            let result = run_temporal_convergence(&p, m, &dts, t_end, iota, &solver)?;
            label = "dt";
            table = convergence_csv(&result, label)
                .meta("max_residual", max_residual(&result))
                .meta("grid", format!("{0}x{0}", m + 1));
        }
        other => {
            return Err(CliError::Config(format!(
                "mode `{other}`: expected spatial or temporal"
            )))
        }
    }
    table.metadata.splice(
        0..0,
        [
            ("problem".to_owned(), p.name().to_owned()),
            ("mode".to_owned(), mode.to_owned()),
            ("t_end".to_owned(), t_end.to_string()),
            ("iota".to_owned(), iota.to_string()),
            ("solver_tolerance".to_owned(), solver.tolerance.to_string()),
        ],
    );
    if !out.quiet {
        println!(
            "{:>10} {:>12} {:>6} {:>12} {:>6} {:>12} {:>6}",
            label, "L1", "", "L2", "", "Linf", ""
        );
        for row in &table.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Number(v) if v.abs() < 50.0 && v.abs() > 0.5 => format!("{v:.2}"),
                    Cell::Number(v) => format!("{v:.3e}"),
                    Cell::Text(s) => s.clone(),
                    Cell::Empty => "-".into(),
                })
                .collect();
            println!(
                "{:>10} {:>12} {:>6} {:>12} {:>6} {:>12} {:>6}",
                cells[0], cells[1], cells[2], cells[3], cells[4], cells[5], cells[6]
            );
        }
    }
    emit(table, "convergence.csv", out)
}

fn max_residual(t: &hoc2d::study::ConvergenceTable) -> f64 {
    t.rows.iter().map(|r| r.max_residual).fold(0.0, f64::max)
}

pub fn field(cfg: &Config, out: &Output) -> Result<(), CliError> {
    let keys: Vec<&str> = PROBLEM_KEYS
        .iter()
        .copied()
        .chain(["grid.M", "grid.N", "dt"])
        .collect();
    cfg.check_keys(&keys)?;
    let p = problem(cfg)?;
    let solver = cfg.solver(SolverConfig::default())?;
    let m: usize = cfg.get("grid.M", 32)?;
    let n: usize = cfg.get("grid.N", m)?;
    let grid = p.grid(m, n)?;
    let (state, t, residual) = if p.is_steady() {
        let (s, r) = solve_steady_problem(&p, grid, &solver)?;
        (s, 0.0, r.residual)
    } else {
        let t_end: f64 = cfg.get("t_end", 0.25)?;
        let dt: f64 = cfg.get("dt", grid.h() * grid.h())?;
        let time = TimeIntegratorConfig::fitted(cfg.get("iota", 0.5)?, dt, t_end)?;
        let run = march(&p, grid, &time, &solver)?;
        (run.state, run.time, run.max_residual)
    };
    let exact = p.exact_field(grid, t);
    let mut table = CsvTable::new(["x", "y", "value", "exact", "error"]);
    let mut max_err = 0.0_f64;
    for j in 0..=n {
        for i in 0..=m {
            let (xi, eta) = grid.node(i, j);
            let (x, y) = p.mapping().map_or((xi, eta), |mp| mp.forward(xi, eta));
            let (v, e) = (state.phi[(i, j)], exact[(i, j)]);
            max_err = max_err.max((v - e).abs());
            table
                .rows
                .push(vec![x.into(), y.into(), v.into(), e.into(), (v - e).into()]);
        }
    }
    let table = table
        .meta("problem", p.name())
        .meta("grid", format!("{}x{}", m + 1, n + 1))
        .meta("time", t)
        .meta("solver_residual", residual)
        .meta("max_error", hoc2d::output::format_number(max_err));
    out.say(format!("max error {max_err:.3e} at t = {t}"));
    emit(table, "field.csv", out)
}

pub fn dispersion(cfg: &Config, out: &Output) -> Result<(), CliError> {
    cfg.check_keys(&["resolution", "kappa2_k"])?;
    let k2: Vec<f64> = cfg.get_list("kappa2_k", &DEFAULT_KAPPA2_K)?;
    let resolution: usize = cfg.get("resolution", 200)?;
    let samples = dispersion_table(&k2, resolution)?;
    out.say(format!(
        "{} samples over {} values of kappa2_k",
        samples.len(),
        k2.len()
    ));
    emit(
        dispersion_csv(&samples).meta("normalization", "h = k = 1"),
        "dispersion.csv",
        out,
    )
}

pub fn stability(cfg: &Config, out: &Output) -> Result<(), CliError> {
    cfg.check_keys(&[
        "alpha1",
        "alpha2",
        "beta",
        "c1",
        "c2",
        "d",
        "h",
        "k",
        "dt",
        "iota",
        "resolution",
    ])?;
    let p = PointCoefficients {
        alpha1: cfg.get("alpha1", 1.0)?,
        alpha2: cfg.get("alpha2", 1.0)?,
        beta: cfg.get("beta", 0.0)?,
        c1: cfg.get("c1", 0.0)?,
        c2: cfg.get("c2", 0.0)?,
        d: cfg.get("d", 0.0)?,
        s: 0.0,
    };
    let (h, k, dt, iota): (f64, f64, f64, f64) = (
        cfg.get("h", 0.1)?,
        cfg.get("k", 0.1)?,
        cfg.get("dt", 0.01)?,
        cfg.get("iota", 0.5)?,
    );
    let resolution: usize = cfg.get("resolution", 64)?;
    let exec = cfg.solver(SolverConfig::default())?.exec;
    let r = stability_scan(&p, h, k, dt, iota, resolution, exec)?;
    let mut table = CsvTable::new(["max_g", "theta_x", "theta_y", "growth_rate", "stable"]);
    table.rows.push(vec![
        r.max_g.into(),
        r.argmax.0.into(),
        r.argmax.1.into(),
        r.growth_rate.into(),
        Cell::Text(r.is_stable(1e-12).to_string()),
    ]);
    let table = [
        ("alpha1", p.alpha1),
        ("alpha2", p.alpha2),
        ("beta", p.beta),
        ("c1", p.c1),
        ("c2", p.c2),
        ("d", p.d),
        ("h", h),
        ("k", k),
        ("dt", dt),
        ("iota", iota),
    ]
    .into_iter()
    .fold(table, |t, (key, v)| t.meta(key, v))
    .meta("resolution", resolution);
    out.say(format!(
        "max |G| = {:.15} at ({:.4}, {:.4})",
        r.max_g, r.argmax.0, r.argmax.1
    ));
    emit(table, "stability.csv", out)
}

pub fn ns_vortex(cfg: &Config, out: &Output) -> Result<(), CliError> {
    cfg.check_keys(&[
        "re",
        "dt",
        "t_end",
        "grid.M",
        "grid.N",
        "mapping",
        "coupling.tolerance",
        "coupling.max_iterations",
    ])?;
    if cfg.get_str("mapping", "identity") != "identity" {
        return Err(CliError::Config(
            "the decaying vortex is defined on the unit square; only mapping = identity applies".into(),
        ));
    }
    let m: usize = cfg.get("grid.M", 32)?;
    if cfg.get::<usize>("grid.N", m)? != m {
        return Err(CliError::Config("ns-vortex needs grid.N = grid.M".into()));
    }
    let defaults = NsConfig::default();
    let ns = NsConfig {
        reynolds: cfg.get("re", 10.0)?,
        dt: cfg.get("dt", 1.0 / (m * m) as f64)?,
        t_end: cfg.get("t_end", 0.1)?,
        coupling_tolerance: cfg.get("coupling.tolerance", defaults.coupling_tolerance)?,
        max_coupling_iterations: cfg.get("coupling.max_iterations", defaults.max_coupling_iterations)?,
        solver: cfg.solver(defaults.solver)?,
        ..defaults
    };
    ns.validate()?;
    let (flow, log, errors) = run_vortex(m, &ns)?;

    let mut series = CsvTable::new(["time", "kinetic_energy", "max_omega", "coupling_iterations"]);
    for d in &log {
        series.rows.push(vec![
            d.time.into(),
            d.kinetic_energy.into(),
            d.max_omega.into(),
            (d.coupling_iterations as f64).into(),
        ]);
    }
    let fmt = hoc2d::output::format_number;
    let meta = |t: CsvTable| {
        t.meta("problem", "ns-vortex")
            .meta("re", ns.reynolds)
            .meta("grid", format!("{0}x{0}", m + 1))
            .meta("dt", ns.time().map(|c| c.dt).unwrap_or(ns.dt))
            .meta("iota", ns.iota)
            .meta("coupling_tolerance", ns.coupling_tolerance)
            .meta("max_error_psi", fmt(errors.psi))
            .meta("max_error_omega", fmt(errors.omega))
    };
    let mut snapshot = CsvTable::new(["x", "y", "psi", "omega", "u", "v"]);
    let g = *flow.grid();
    for j in 0..=g.n() {
        for i in 0..=g.m() {
            let (x, y) = g.node(i, j);
            snapshot.rows.push(
                [
                    x,
                    y,
                    flow.psi.phi[(i, j)],
                    flow.omega.phi[(i, j)],
                    flow.u[(i, j)],
                    flow.v[(i, j)],
                ]
                .into_iter()
                .map(Cell::Number)
                .collect(),
            );
        }
    }
    out.say(format!(
        "t = {}: max error psi {:.3e}, omega {:.3e}, velocity {:.3e}",
        flow.time, errors.psi, errors.omega, errors.velocity
    ));
    emit(meta(series), "ns_vortex.csv", out)?;
    emit(meta(snapshot).meta("time", flow.time), "ns_vortex_field.csv", out)
}
