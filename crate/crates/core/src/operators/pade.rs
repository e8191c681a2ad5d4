//! Fourth-order Padé recovery of first derivatives,
//! `(I + h²/6 δ²) φ' = δ φ`, one tridiagonal solve per grid line.

use super::tridiag::{solve_cyclic, PadeFactor};
use super::{AxisKind, SolutionState};
use crate::error::{Error, Result};
use crate::exec::{for_each_lane_mut, Execution};
use crate::grid::GridField;
use ndarray::{Array1, ArrayView1, ArrayViewMut1, Axis};

/// Fourth-order one-sided first-derivative weights at the first node of a
/// line (denominator `12 h`).
pub(crate) const ONE_SIDED: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];

/// How the two end values of every line are closed.
#[derive(Debug, Clone, PartialEq)]
pub enum EndClosure {
    /// Five-point fourth-order one-sided differences of the line values.
    OneSided,
    /// End derivatives supplied per line (`start[l]`, `end[l]` for line `l`).
    Given { start: Vec<f64>, end: Vec<f64> },
    /// The line wraps: node `len - 1` duplicates node `0`.
    Periodic,
}

#[derive(Debug, Clone, Copy)]
enum LineEnds {
    OneSided,
    Given(f64, f64),
    Periodic,
}

fn one_sided_start(line: &ArrayView1<f64>, spacing: f64) -> f64 {
    ONE_SIDED
        .iter()
        .enumerate()
        .map(|(q, w)| w * line[q])
        .sum::<f64>()
        / (12.0 * spacing)
}

fn one_sided_end(line: &ArrayView1<f64>, spacing: f64) -> f64 {
    let last = line.len() - 1;
    -ONE_SIDED
        .iter()
        .enumerate()
        .map(|(q, w)| w * line[last - q])
        .sum::<f64>()
        / (12.0 * spacing)
}

/// Solve the Padé system along one line of `len = m + 1` nodes.
fn pade_line(
    src: ArrayView1<f64>,
    spacing: f64,
    ends: LineEnds,
    factor: &PadeFactor,
    out: &mut ArrayViewMut1<f64>,
) {
    let len = src.len();
    let scale = 3.0 / spacing;
    match ends {
        LineEnds::Periodic => {
            let n = len - 1;
            let mut rhs: Vec<f64> = (0..n)
                .map(|i| {
                    let ip = (i + 1) % n;
                    let im = (i + n - 1) % n;
                    scale * (src[ip] - src[im])
                })
                .collect();
            let ones = vec![1.0; n];
            let ok = solve_cyclic(&ones, &vec![4.0; n], &ones, &mut rhs);
            debug_assert!(ok, "cyclic Padé matrix is diagonally dominant");
            for i in 0..n {
                out[i] = rhs[i];
            }
            out[n] = rhs[0];
        }
        _ => {
            let (first, last) = match ends {
                LineEnds::Given(a, b) => (a, b),
                _ => (one_sided_start(&src, spacing), one_sided_end(&src, spacing)),
            };
            let n = len - 2;
            let mut rhs: Vec<f64> = (1..=n).map(|i| scale * (src[i + 1] - src[i - 1])).collect();
            rhs[0] -= first;
            rhs[n - 1] -= last;
            factor.solve_in_place(&mut rhs);
            out[0] = first;
            out[len - 1] = last;
            for i in 0..n {
                out[i + 1] = rhs[i];
            }
        }
    }
}

fn check_line_length(len: usize, closure: &EndClosure) -> Result<()> {
    // one-sided closures read five nodes; Padé interior needs at least three
    let min = match closure {
        EndClosure::OneSided => 5,
        EndClosure::Given { .. } => 4,
        EndClosure::Periodic => 4,
    };
    if len < min {
        return Err(Error::InvalidGrid(format!(
            "Padé line of {len} nodes is too short (need {min})"
        )));
    }
    Ok(())
}

fn line_ends(closure: &EndClosure, line: usize) -> Result<LineEnds> {
    Ok(match closure {
        EndClosure::OneSided => LineEnds::OneSided,
        EndClosure::Periodic => LineEnds::Periodic,
        EndClosure::Given { start, end } => LineEnds::Given(
            *start
                .get(line)
                .ok_or_else(|| Error::Configuration(format!("missing start closure for line {line}")))?,
            *end.get(line)
                .ok_or_else(|| Error::Configuration(format!("missing end closure for line {line}")))?,
        ),
    })
}

fn gradient_along(phi: &GridField, closure: &EndClosure, axis_x: bool, exec: Execution) -> Result<GridField> {
    let grid = *phi.grid();
    let (len, lines, spacing) = if axis_x {
        (grid.m() + 1, grid.n() + 1, grid.h())
    } else {
        (grid.n() + 1, grid.m() + 1, grid.k())
    };
    check_line_length(len, closure)?;
    let ends: Vec<LineEnds> = (0..lines).map(|l| line_ends(closure, l)).collect::<Result<_>>()?;
    let factor = PadeFactor::new(len - 2);
    let lane_axis = if axis_x { Axis(1) } else { Axis(0) };

    let mut out = GridField::zeros(grid);
    let src = phi.values();
    for_each_lane_mut(exec, out.values_mut(), lane_axis, |l, mut lane| {
        pade_line(src.index_axis(lane_axis, l), spacing, ends[l], &factor, &mut lane);
    });
    Ok(out)
}

/// `φ_x` on every row `j` from the Padé system along x.
pub fn pade_gradient_x(phi: &GridField, closure: &EndClosure) -> Result<GridField> {
    gradient_along(phi, closure, true, Execution::default())
}

/// `φ_y` on every column `i` from the Padé system along y.
pub fn pade_gradient_y(phi: &GridField, closure: &EndClosure) -> Result<GridField> {
    gradient_along(phi, closure, false, Execution::default())
}

/// Boundary treatment for the pair of Padé gradient solves.
///
/// Lines crossing a bounded axis are closed with one-sided normal
/// derivatives unless normal data are supplied. Along the boundary edges
/// themselves, the tangential derivative is taken from the supplied edge
/// arrays when present (analytic Dirichlet data); otherwise the edge line
/// gets its own Padé solve.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientClosure {
    pub x_axis: AxisKind,
    pub y_axis: AxisKind,
    /// `φ_x` along `j = 0`, length `m + 1`.
    pub bottom_phi_x: Option<Array1<f64>>,
    /// `φ_x` along `j = n`.
    pub top_phi_x: Option<Array1<f64>>,
    /// `φ_y` along `i = 0`, length `n + 1`.
    pub left_phi_y: Option<Array1<f64>>,
    /// `φ_y` along `i = m`.
    pub right_phi_y: Option<Array1<f64>>,
    /// `φ_x` at `i = 0` for every row `j`, replacing the one-sided closure.
    pub left_phi_x: Option<Array1<f64>>,
    /// `φ_x` at `i = m` for every row.
    pub right_phi_x: Option<Array1<f64>>,
    /// `φ_y` at `j = 0` for every column `i`.
    pub bottom_phi_y: Option<Array1<f64>>,
    /// `φ_y` at `j = n` for every column.
    pub top_phi_y: Option<Array1<f64>>,
}

impl GradientClosure {
    /// One-sided closures everywhere, no analytic edge data.
    pub fn bounded() -> Self {
        Self::with_axes(AxisKind::Bounded, AxisKind::Bounded)
    }

    pub fn periodic() -> Self {
        Self::with_axes(AxisKind::Periodic, AxisKind::Periodic)
    }

    pub fn with_axes(x_axis: AxisKind, y_axis: AxisKind) -> Self {
        Self {
            x_axis,
            y_axis,
            bottom_phi_x: None,
            top_phi_x: None,
            left_phi_y: None,
            right_phi_y: None,
            left_phi_x: None,
            right_phi_x: None,
            bottom_phi_y: None,
            top_phi_y: None,
        }
    }

    /// The closure for a field vanishing on every Dirichlet edge: supplied
    /// boundary derivatives become zeros.
    pub fn homogeneous(&self) -> Self {
        let zero = |a: &Option<Array1<f64>>| a.as_ref().map(|v| Array1::zeros(v.len()));
        Self {
            x_axis: self.x_axis,
            y_axis: self.y_axis,
            bottom_phi_x: zero(&self.bottom_phi_x),
            top_phi_x: zero(&self.top_phi_x),
            left_phi_y: zero(&self.left_phi_y),
            right_phi_y: zero(&self.right_phi_y),
            left_phi_x: zero(&self.left_phi_x),
            right_phi_x: zero(&self.right_phi_x),
            bottom_phi_y: zero(&self.bottom_phi_y),
            top_phi_y: zero(&self.top_phi_y),
        }
    }

    fn end_closure(axis: AxisKind, start: &Option<Array1<f64>>, end: &Option<Array1<f64>>) -> EndClosure {
        match (axis, start, end) {
            (AxisKind::Periodic, _, _) => EndClosure::Periodic,
            (AxisKind::Bounded, Some(a), Some(b)) => EndClosure::Given {
                start: a.to_vec(),
                end: b.to_vec(),
            },
            (AxisKind::Bounded, _, _) => EndClosure::OneSided,
        }
    }
}

/// Padé-consistent `(φ_x, φ_y)` for `phi` under `closure`.
pub fn compact_gradients(
    phi: &GridField,
    closure: &GradientClosure,
    exec: Execution,
) -> Result<(GridField, GridField)> {
    let grid = *phi.grid();
    let x_ends = GradientClosure::end_closure(closure.x_axis, &closure.left_phi_x, &closure.right_phi_x);
    let y_ends = GradientClosure::end_closure(closure.y_axis, &closure.bottom_phi_y, &closure.top_phi_y);
    let mut phi_x = gradient_along(phi, &x_ends, true, exec)?;
    let mut phi_y = gradient_along(phi, &y_ends, false, exec)?;

    let overwrite = |field: &mut GridField, data: &Option<Array1<f64>>, axis: Axis, at: usize| {
        if let Some(values) = data {
            if values.len() != field.values().len_of(Axis(1 - axis.index())) {
                return Err(Error::Configuration(format!(
                    "edge gradient data has length {}",
                    values.len()
                )));
            }
            field.values_mut().index_axis_mut(axis, at).assign(values);
        }
        Ok(())
    };
    if closure.y_axis == AxisKind::Bounded {
        overwrite(&mut phi_x, &closure.bottom_phi_x, Axis(1), 0)?;
        overwrite(&mut phi_x, &closure.top_phi_x, Axis(1), grid.n())?;
    }
    if closure.x_axis == AxisKind::Bounded {
        overwrite(&mut phi_y, &closure.left_phi_y, Axis(0), 0)?;
        overwrite(&mut phi_y, &closure.right_phi_y, Axis(0), grid.m())?;
    }
    Ok((phi_x, phi_y))
}

impl SolutionState {
    /// Wrap `phi` with gradients recovered by [`compact_gradients`].
    pub fn from_phi(phi: GridField, closure: &GradientClosure, exec: Execution) -> Result<Self> {
        let (phi_x, phi_y) = compact_gradients(&phi, closure, exec)?;
        Ok(Self { phi, phi_x, phi_y })
    }
}
