use crate::assembly::stencil::OFFSETS;
use crate::error::{Error, Result};
use crate::exec::{fill_indexed, Execution};
use crate::grid::{Grid2D, GridField};
use crate::operators::{compact_gradients, AxisKind, GradientClosure, SolutionState};

pub(crate) const NONE: usize = usize::MAX;

/// Which nodes carry an equation row, and in what order.
///
/// Bounded axes contribute their interior nodes; periodic axes contribute
/// nodes `0..m` (node `m` duplicates node `0`). Ordering is lexicographic
/// with `i` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct UnknownLayout {
    grid: Grid2D,
    x_axis: AxisKind,
    y_axis: AxisKind,
    i0: usize,
    j0: usize,
    nx: usize,
    ny: usize,
}

impl UnknownLayout {
    pub fn new(grid: Grid2D, x_axis: AxisKind, y_axis: AxisKind) -> Self {
        let span = |axis, n: usize| match axis {
            AxisKind::Bounded => (1, n - 1),
            AxisKind::Periodic => (0, n),
        };
        let (i0, nx) = span(x_axis, grid.m());
        let (j0, ny) = span(y_axis, grid.n());
        Self {
            grid,
            x_axis,
            y_axis,
            i0,
            j0,
            nx,
            ny,
        }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn axes(&self) -> (AxisKind, AxisKind) {
        (self.x_axis, self.y_axis)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Unknowns per x-line and number of x-lines.
    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.ny)
    }

    pub fn node(&self, idx: usize) -> (usize, usize) {
        (self.i0 + idx % self.nx, self.j0 + idx / self.nx)
    }

    /// Wrap a possibly out-of-range node index onto the stored grid.
    #[inline]
    pub(crate) fn wrap(&self, i: isize, j: isize) -> (usize, usize) {
        let wi = match self.x_axis {
            AxisKind::Periodic => i.rem_euclid(self.grid.m() as isize) as usize,
            AxisKind::Bounded => i as usize,
        };
        let wj = match self.y_axis {
            AxisKind::Periodic => j.rem_euclid(self.grid.n() as isize) as usize,
            AxisKind::Bounded => j as usize,
        };
        (wi, wj)
    }

    /// Row index of node `(i, j)` if it carries an equation.
    pub fn index(&self, i: usize, j: usize) -> Option<usize> {
        let (i, j) = self.wrap(i as isize, j as isize);
        if i < self.i0 || j < self.j0 || i >= self.i0 + self.nx || j >= self.j0 + self.ny {
            return None;
        }
        Some((j - self.j0) * self.nx + (i - self.i0))
    }

    pub fn gather(&self, field: &GridField) -> Vec<f64> {
        (0..self.len())
            .map(|u| {
                let (i, j) = self.node(u);
                field[(i, j)]
            })
            .collect()
    }

    /// Write `x` into the unknown nodes of `field`, then refresh periodic
    /// duplicate nodes.
    pub fn scatter(&self, x: &[f64], field: &mut GridField) {
        for (u, &v) in x.iter().enumerate() {
            let (i, j) = self.node(u);
            field[(i, j)] = v;
        }
        sync_periodic(field, self.x_axis, self.y_axis);
    }

    /// Neighbour row indices for every row, `NONE` where the neighbour is a
    /// boundary node.
    pub(crate) fn neighbours(&self) -> Vec<[usize; 9]> {
        (0..self.len())
            .map(|u| {
                let (i, j) = self.node(u);
                OFFSETS.map(|(di, dj)| {
                    let (ni, nj) = self.wrap(i as isize + di, j as isize + dj);
                    self.index(ni, nj).unwrap_or(NONE)
                })
            })
            .collect()
    }
}

pub(crate) fn sync_periodic(field: &mut GridField, x_axis: AxisKind, y_axis: AxisKind) {
    let g = *field.grid();
    if x_axis == AxisKind::Periodic {
        for j in 0..=g.n() {
            field[(g.m(), j)] = field[(0, j)];
        }
    }
    if y_axis == AxisKind::Periodic {
        for i in 0..=g.m() {
            field[(i, g.n())] = field[(i, 0)];
        }
    }
}

/// Linear system in `(φ, φ_x, φ_y)`: one compact row per unknown node,
/// Padé rows implied by the gradient closure, Dirichlet values held in the
/// boundary template.
#[derive(Debug, Clone)]
pub struct BlockSystem {
    pub(crate) layout: UnknownLayout,
    pub(crate) weights: Vec<[f64; 27]>,
    pub(crate) low: Vec<[f64; 9]>,
    pub(crate) rhs: Vec<f64>,
    pub(crate) template: GridField,
    pub(crate) closure: GradientClosure,
    pub(crate) neighbours: Vec<[usize; 9]>,
}

impl BlockSystem {
    pub fn new(
        layout: UnknownLayout,
        weights: Vec<[f64; 27]>,
        low: Vec<[f64; 9]>,
        rhs: Vec<f64>,
        template: GridField,
        closure: GradientClosure,
    ) -> Result<Self> {
        let n = layout.len();
        if weights.len() != n || low.len() != n || rhs.len() != n {
            return Err(Error::Configuration(format!(
                "block system with {n} rows got {} weights, {} preconditioner rows, {} rhs",
                weights.len(),
                low.len(),
                rhs.len()
            )));
        }
        if template.grid() != layout.grid() {
            return Err(Error::Configuration("template grid differs from layout".into()));
        }
        let neighbours = layout.neighbours();
        Ok(Self {
            layout,
            weights,
            low,
            rhs,
            template,
            closure,
            neighbours,
        })
    }

    pub fn layout(&self) -> &UnknownLayout {
        &self.layout
    }

    pub fn grid(&self) -> &Grid2D {
        self.layout.grid()
    }

    pub fn weights(&self) -> &[[f64; 27]] {
        &self.weights
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn template(&self) -> &GridField {
        &self.template
    }

    pub fn closure(&self) -> &GradientClosure {
        &self.closure
    }

    /// Row values `Σ w · (φ, φ_x, φ_y)` for a state.
    pub fn apply(&self, state: &SolutionState, exec: Execution) -> Vec<f64> {
        let mut out = vec![0.0; self.layout.len()];
        self.apply_into(state, exec, &mut out);
        out
    }

    pub(crate) fn apply_into(&self, state: &SolutionState, exec: Execution, out: &mut [f64]) {
        let fields = [&state.phi, &state.phi_x, &state.phi_y];
        let layout = &self.layout;
        fill_indexed(exec, out, |u| {
            let (i, j) = layout.node(u);
            let w = &self.weights[u];
            let mut acc = 0.0;
            for (f, field) in fields.iter().enumerate() {
                for (s, &(di, dj)) in OFFSETS.iter().enumerate() {
                    let c = w[f * 9 + s];
                    if c != 0.0 {
                        acc += c * field[layout.wrap(i as isize + di, j as isize + dj)];
                    }
                }
            }
            acc
        });
    }

    /// Full field with the boundary template and interior values `x`.
    pub fn field_from_unknowns(&self, x: &[f64]) -> GridField {
        let mut phi = self.template.clone();
        self.layout.scatter(x, &mut phi);
        phi
    }

    /// State for `phi` with gradients from the system's own closure.
    pub fn state_from_phi(&self, phi: GridField, exec: Execution) -> Result<SolutionState> {
        SolutionState::from_phi(phi, &self.closure, exec)
    }

    pub fn state_from_unknowns(&self, x: &[f64], exec: Execution) -> Result<SolutionState> {
        self.state_from_phi(self.field_from_unknowns(x), exec)
    }

    /// `rhs − T(boundary data alone)`, the right-hand side seen by the
    /// interior unknowns.
    pub(crate) fn effective_rhs(&self, exec: Execution) -> Result<Vec<f64>> {
        let state = self.state_from_phi(self.template.clone(), exec)?;
        let t = self.apply(&state, exec);
        Ok(self.rhs.iter().zip(&t).map(|(b, v)| b - v).collect())
    }

    /// Linear part: rows for interior values `x` with zero boundary data.
    pub(crate) fn apply_linear(&self, x: &[f64], exec: Execution, out: &mut [f64]) -> Result<()> {
        let mut phi = GridField::zeros(*self.grid());
        self.layout.scatter(x, &mut phi);
        let (phi_x, phi_y) = compact_gradients(&phi, &self.closure.homogeneous(), exec)?;
        self.apply_into(&SolutionState { phi, phi_x, phi_y }, exec, out);
        Ok(())
    }

    /// Scale against which residuals are measured: `‖rhs − T(boundary)‖∞`,
    /// or 1 when that vanishes.
    pub(crate) fn residual_scale(&self, exec: Execution) -> Result<f64> {
        let b = self.effective_rhs(exec)?;
        let s = inf_norm(&b);
        Ok(if s > 0.0 { s } else { 1.0 })
    }

    /// Relative ∞-norm residual of the compact rows at `state`, computed
    /// from scratch.
    pub fn residual(&self, state: &SolutionState) -> Result<f64> {
        let exec = Execution::default();
        let t = self.apply(state, exec);
        let r = self
            .rhs
            .iter()
            .zip(&t)
            .fold(0.0_f64, |acc, (b, v)| acc.max((b - v).abs()));
        Ok(r / self.residual_scale(exec)?)
    }
}

pub(crate) fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_counts_and_wraps() {
        let g = Grid2D::unit(6, 5).unwrap();
        let l = UnknownLayout::new(g, AxisKind::Bounded, AxisKind::Bounded);
        assert_eq!(l.len(), 5 * 4);
        assert_eq!(l.node(0), (1, 1));
        assert_eq!(l.index(0, 3), None);
        assert_eq!(l.index(2, 1), Some(1));

        let p = UnknownLayout::new(g, AxisKind::Periodic, AxisKind::Bounded);
        assert_eq!(p.len(), 6 * 4);
        assert_eq!(p.index(6, 1), p.index(0, 1));
        assert_eq!(p.wrap(-1, 2), (5, 2));
        let nb = p.neighbours();
        assert_eq!(nb[0][1], p.index(5, 1).unwrap());
        assert_eq!(nb[0][0], NONE);
    }

    #[test]
    fn scatter_refreshes_duplicates() {
        let g = Grid2D::unit(4, 4).unwrap();
        let l = UnknownLayout::new(g, AxisKind::Periodic, AxisKind::Periodic);
        let x: Vec<f64> = (0..l.len()).map(|v| v as f64).collect();
        let mut f = GridField::zeros(g);
        l.scatter(&x, &mut f);
        assert_eq!(l.gather(&f), x);
        assert_eq!(f[(4, 2)], f[(0, 2)]);
        assert_eq!(f[(4, 4)], f[(0, 0)]);
    }
}
