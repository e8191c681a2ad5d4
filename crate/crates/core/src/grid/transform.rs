use super::{Grid2D, GridField, Mapping, MetricField};
use crate::assembly::{CoefficientField, CoefficientFunctions, PointCoefficients};
use crate::error::Result;

/// Chain-rule image of one physical coefficient set at a node with inverse
/// metrics `im`.
///
/// The physical operator `−a11 u_xx − a12 u_xy − a22 u_yy + c1 u_x + c2 u_y + d u`
/// becomes the same form in `(ξ, η)`; the second derivatives of the inverse
/// map feed the first-order coefficients.
pub(crate) fn transform_point(p: &PointCoefficients, im: &super::InverseMetrics) -> PointCoefficients {
    let (a11, a12, a22) = (p.alpha1, p.beta, p.alpha2);
    PointCoefficients {
        alpha1: a11 * im.xi_x * im.xi_x + a12 * im.xi_x * im.xi_y + a22 * im.xi_y * im.xi_y,
        alpha2: a11 * im.eta_x * im.eta_x + a12 * im.eta_x * im.eta_y + a22 * im.eta_y * im.eta_y,
        beta: 2.0 * a11 * im.xi_x * im.eta_x
            + a12 * (im.xi_x * im.eta_y + im.xi_y * im.eta_x)
            + 2.0 * a22 * im.xi_y * im.eta_y,
        c1: -(a11 * im.xi_xx + a12 * im.xi_xy + a22 * im.xi_yy) + p.c1 * im.xi_x + p.c2 * im.xi_y,
        c2: -(a11 * im.eta_xx + a12 * im.eta_xy + a22 * im.eta_yy) + p.c1 * im.eta_x + p.c2 * im.eta_y,
        d: p.d,
        s: p.s,
    }
}

/// Sample physical coefficients (functions of physical `x, y, t`) through
/// `mapping` and return the equivalent coefficients on the computational
/// grid at time `t`.
pub fn transform_scalar_pde(
    mapping: &dyn Mapping,
    grid: Grid2D,
    physical: &dyn CoefficientFunctions,
    t: f64,
) -> Result<CoefficientField> {
    let metrics = MetricField::new(mapping, grid)?;
    transform_with_metrics(&metrics, physical, t)
}

/// [`transform_scalar_pde`] with precomputed metrics.
pub fn transform_with_metrics(
    metrics: &MetricField,
    physical: &dyn CoefficientFunctions,
    t: f64,
) -> Result<CoefficientField> {
    let grid = *metrics.grid();
    let field = CoefficientField::from_point_fn(grid, t, |i, j| {
        let (x, y) = metrics.physical(i, j);
        transform_point(&physical.at(x, y, t), metrics.inverse(i, j))
    });
    field.validate()?;
    Ok(field)
}

/// Coefficients of the stream-function and vorticity equations after the
/// change of variables.
///
/// Stream function: `−a1 ψ_ξξ − e1 ψ_ξη − b1 ψ_ηη + c1 ψ_ξ + d1 ψ_η = ω`.
/// Vorticity: `ω_t − a2 ω_ξξ − e2 ω_ξη − b2 ω_ηη + c2 ω_ξ + d2 ω_η = 0`, where
/// `c2, d2` carry the velocity-dependent convection and are rebuilt from
/// `(u, v)` by [`TransformedCoefficients::vorticity_convection`].
#[derive(Debug, Clone)]
pub struct TransformedCoefficients {
    pub a1: GridField,
    pub e1: GridField,
    pub b1: GridField,
    pub c1: GridField,
    pub d1: GridField,
    pub a2: GridField,
    pub e2: GridField,
    pub b2: GridField,
    reynolds: f64,
}

impl TransformedCoefficients {
    pub fn new(metrics: &MetricField, reynolds: f64) -> Result<Self> {
        let grid = *metrics.grid();
        let mut fields: [GridField; 5] = std::array::from_fn(|_| GridField::zeros(grid));
        for j in 0..=grid.n() {
            for i in 0..=grid.m() {
                let p = transform_point(&laplacian_point(), metrics.inverse(i, j));
                for (f, v) in fields.iter_mut().zip([p.alpha1, p.beta, p.alpha2, p.c1, p.c2]) {
                    f[(i, j)] = v;
                }
            }
        }
        let [a1, e1, b1, c1, d1] = fields;
        let scale = |f: &GridField| {
            let mut g = f.clone();
            g.values_mut().mapv_inplace(|v| v / reynolds);
            g
        };
        let out = Self {
            a2: scale(&a1),
            e2: scale(&e1),
            b2: scale(&b1),
            a1,
            e1,
            b1,
            c1,
            d1,
            reynolds,
        };
        out.streamfunction_field(&GridField::zeros(grid), 0.0)
            .validate()?;
        Ok(out)
    }

    pub fn reynolds(&self) -> f64 {
        self.reynolds
    }

    /// `(c2, d2)` for the vorticity equation given physical velocities.
    pub fn vorticity_convection(
        &self,
        metrics: &MetricField,
        u: &GridField,
        v: &GridField,
    ) -> (GridField, GridField) {
        let grid = *metrics.grid();
        let mut c2 = GridField::zeros(grid);
        let mut d2 = GridField::zeros(grid);
        for j in 0..=grid.n() {
            for i in 0..=grid.m() {
                let im = metrics.inverse(i, j);
                let (uu, vv) = (u[(i, j)], v[(i, j)]);
                c2[(i, j)] = self.c1[(i, j)] / self.reynolds + uu * im.xi_x + vv * im.xi_y;
                d2[(i, j)] = self.d1[(i, j)] / self.reynolds + uu * im.eta_x + vv * im.eta_y;
            }
        }
        (c2, d2)
    }

    /// Coefficient field of the stream-function equation with forcing `ω`.
    pub fn streamfunction_field(&self, omega: &GridField, t: f64) -> CoefficientField {
        CoefficientField {
            alpha1: self.a1.clone(),
            alpha2: self.b1.clone(),
            beta: self.e1.clone(),
            c1: self.c1.clone(),
            c2: self.d1.clone(),
            d: GridField::zeros(*omega.grid()),
            s: omega.clone(),
            time: t,
        }
    }

    /// Coefficient field of the vorticity equation for velocities `(u, v)`.
    pub fn vorticity_field(
        &self,
        metrics: &MetricField,
        u: &GridField,
        v: &GridField,
        t: f64,
    ) -> CoefficientField {
        let (c2, d2) = self.vorticity_convection(metrics, u, v);
        let grid = *u.grid();
        CoefficientField {
            alpha1: self.a2.clone(),
            alpha2: self.b2.clone(),
            beta: self.e2.clone(),
            c1: c2,
            c2: d2,
            d: GridField::zeros(grid),
            s: GridField::zeros(grid),
            time: t,
        }
    }
}

fn laplacian_point() -> PointCoefficients {
    PointCoefficients {
        alpha1: 1.0,
        alpha2: 1.0,
        ..PointCoefficients::default()
    }
}
