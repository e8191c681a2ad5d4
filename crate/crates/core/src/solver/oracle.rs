use super::system::BlockSystem;
use crate::assembly::stencil::OFFSETS;
use crate::error::{Error, Result};
use crate::grid::GridField;
use crate::operators::{AxisKind, SolutionState, ONE_SIDED};
use nalgebra::{DMatrix, DVector};

const MAX_UNKNOWNS: usize = 20_000;

/// Direct LU solution of the monolithic matrix in all three fields at every
/// stored node: Dirichlet rows, compact rows, Padé rows and their end
/// closures written out explicitly.
pub fn dense_oracle_solve(system: &BlockSystem) -> Result<SolutionState> {
    let grid = *system.grid();
    let layout = &system.layout;
    let (xa, ya) = layout.axes();
    let xp = xa == AxisKind::Periodic;
    let yp = ya == AxisKind::Periodic;
    let (m, n) = (grid.m(), grid.n());
    let cx = if xp { m } else { m + 1 };
    let cy = if yp { n } else { n + 1 };
    let nodes = cx * cy;
    let size = 3 * nodes;
    if size > MAX_UNKNOWNS {
        return Err(Error::Configuration(format!(
            "dense oracle limited to {MAX_UNKNOWNS} unknowns, system has {size}"
        )));
    }

    let col = |f: usize, i: isize, j: isize| {
        let (wi, wj) = layout.wrap(i, j);
        let wi = if xp { wi % m } else { wi };
        let wj = if yp { wj % n } else { wj };
        f * nodes + wj * cx + wi
    };
    let mut a = DMatrix::<f64>::zeros(size, size);
    let mut rhs = DVector::<f64>::zeros(size);
    let closure = &system.closure;
    let (h, k) = (grid.h(), grid.k());

    for j in 0..cy {
        for i in 0..cx {
            let (ii, jj) = (i as isize, j as isize);

            // φ row
            let row = col(0, ii, jj);
            match layout.index(i, j) {
                Some(u) => {
                    let w = &system.weights[u];
                    for f in 0..3 {
                        for (s, &(di, dj)) in OFFSETS.iter().enumerate() {
                            a[(row, col(f, ii + di, jj + dj))] += w[f * 9 + s];
                        }
                    }
                    rhs[row] = system.rhs[u];
                }
                None => {
                    a[(row, row)] = 1.0;
                    rhs[row] = system.template[(i, j)];
                }
            }

            // φ_x row
            let row = col(1, ii, jj);
            let edge_x = match (yp, j) {
                (false, 0) => closure.bottom_phi_x.as_ref(),
                (false, jn) if jn == n => closure.top_phi_x.as_ref(),
                _ => None,
            };
            let normal_x = match (xp, i) {
                (false, 0) => closure
                    .left_phi_x
                    .as_ref()
                    .zip(closure.right_phi_x.as_ref())
                    .map(|p| p.0),
                (false, im) if im == m => closure
                    .left_phi_x
                    .as_ref()
                    .zip(closure.right_phi_x.as_ref())
                    .map(|p| p.1),
                _ => None,
            };
            if let Some(vals) = edge_x {
                a[(row, row)] = 1.0;
                rhs[row] = vals[i];
            } else if let Some(vals) = normal_x {
                a[(row, row)] = 1.0;
                rhs[row] = vals[j];
            } else {
                pade_row(&mut a, row, xp, i, m, h, |q| col(1, q, jj), |q| col(0, q, jj));
            }

            // φ_y row
            let row = col(2, ii, jj);
            let edge_y = match (xp, i) {
                (false, 0) => closure.left_phi_y.as_ref(),
                (false, im) if im == m => closure.right_phi_y.as_ref(),
                _ => None,
            };
            let normal_y = match (yp, j) {
                (false, 0) => closure
                    .bottom_phi_y
                    .as_ref()
                    .zip(closure.top_phi_y.as_ref())
                    .map(|p| p.0),
                (false, jn) if jn == n => closure
                    .bottom_phi_y
                    .as_ref()
                    .zip(closure.top_phi_y.as_ref())
                    .map(|p| p.1),
                _ => None,
            };
            if let Some(vals) = edge_y {
                a[(row, row)] = 1.0;
                rhs[row] = vals[j];
            } else if let Some(vals) = normal_y {
                a[(row, row)] = 1.0;
                rhs[row] = vals[i];
            } else {
                pade_row(&mut a, row, yp, j, n, k, |q| col(2, ii, q), |q| col(0, ii, q));
            }
        }
    }

    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::OracleFailure("singular block matrix".into()))?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::OracleFailure("non-finite solution".into()));
    }

    let mut fields = [
        GridField::zeros(grid),
        GridField::zeros(grid),
        GridField::zeros(grid),
    ];
    for (f, field) in fields.iter_mut().enumerate() {
        for j in 0..=n {
            for i in 0..=m {
                field[(i, j)] = sol[col(f, i as isize, j as isize)];
            }
        }
    }
    let [phi, phi_x, phi_y] = fields;
    Ok(SolutionState { phi, phi_x, phi_y })
}

/// Padé row along one line at position `p` of `0..=len`: periodic wrap,
/// one-sided ends, or the interior `(1, 4, 1)` relation.
#[allow(clippy::too_many_arguments)]
fn pade_row(
    a: &mut DMatrix<f64>,
    row: usize,
    periodic: bool,
    p: usize,
    len: usize,
    spacing: f64,
    grad: impl Fn(isize) -> usize,
    phi: impl Fn(isize) -> usize,
) {
    let p = p as isize;
    let last = len as isize;
    if !periodic && p == 0 {
        a[(row, grad(0))] += 1.0;
        for (q, w) in ONE_SIDED.iter().enumerate() {
            a[(row, phi(q as isize))] -= w / (12.0 * spacing);
        }
    } else if !periodic && p == last {
        a[(row, grad(last))] += 1.0;
        for (q, w) in ONE_SIDED.iter().enumerate() {
            a[(row, phi(last - q as isize))] += w / (12.0 * spacing);
        }
    } else {
        a[(row, grad(p - 1))] += 1.0;
        a[(row, grad(p))] += 4.0;
        a[(row, grad(p + 1))] += 1.0;
        a[(row, phi(p + 1))] -= 3.0 / spacing;
        a[(row, phi(p - 1))] += 3.0 / spacing;
    }
}
