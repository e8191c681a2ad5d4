//! Dispersion characteristics of mixed-derivative discretizations and von
//! Neumann amplification factors of the θ-scheme with constant coefficients.

use crate::assembly::PointCoefficients;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use std::f64::consts::PI;

/// `λ = −κ₁κ₂` for `φ_xy` (with `h = k = 1`).
pub fn characteristic_exact(k1h: f64, k2k: f64) -> f64 {
    -k1h * k2k
}

/// Characteristic of the compact mixed-derivative approximation.
pub fn characteristic_4oc_m(k1h: f64, k2k: f64) -> f64 {
    -k1h.sin() * k2k.sin() * (3.0 / (2.0 + k1h.cos()) + 3.0 / (2.0 + k2k.cos()) - 1.0)
}

/// Second-order central `δ_xδ_y`.
pub fn characteristic_2oc(k1h: f64, k2k: f64) -> f64 {
    -k1h.sin() * k2k.sin()
}

/// Fourth-order wide-stencil approximation.
pub fn characteristic_4ow(k1h: f64, k2k: f64) -> f64 {
    -k1h.sin() * k2k.sin() * (4.0 - k1h.cos()) * (4.0 - k2k.cos()) / 9.0
}

/// All four characteristics at one wavenumber pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSample {
    pub kappa1_h: f64,
    pub kappa2_k: f64,
    pub lambda_exact: f64,
    pub lambda_4oc_m: f64,
    pub lambda_2oc: f64,
    pub lambda_4ow: f64,
}

impl DispersionSample {
    pub fn at(kappa1_h: f64, kappa2_k: f64) -> Self {
        Self {
            kappa1_h,
            kappa2_k,
            lambda_exact: characteristic_exact(kappa1_h, kappa2_k),
            lambda_4oc_m: characteristic_4oc_m(kappa1_h, kappa2_k),
            lambda_2oc: characteristic_2oc(kappa1_h, kappa2_k),
            lambda_4ow: characteristic_4ow(kappa1_h, kappa2_k),
        }
    }
}

/// The `κ₂k` values plotted in the reference dispersion figure.
pub const DEFAULT_KAPPA2_K: [f64; 4] = [0.5, 1.0, 1.5, 2.0];

/// For each `κ₂k`, `resolution` evenly spaced samples of `κ₁h` from 0 to π.
pub fn dispersion_table(kappa2_k: &[f64], resolution: usize) -> Result<Vec<DispersionSample>> {
    if resolution < 2 {
        return Err(Error::Configuration(
            "dispersion resolution must be at least 2".into(),
        ));
    }
    let step = PI / (resolution - 1) as f64;
    Ok(kappa2_k
        .iter()
        .flat_map(|&k2| (0..resolution).map(move |q| DispersionSample::at(q as f64 * step, k2)))
        .collect())
}

/// The bounded trigonometric factor in the mixed term of `F_R`.
pub fn r_function(theta_x: f64, theta_y: f64) -> f64 {
    let (cx, cy) = (theta_x.cos(), theta_y.cos());
    2.0 * (8.0 + cx + cy - cx * cy) * (theta_x / 2.0).cos() * (theta_y / 2.0).cos()
        / ((5.0 + cx) * (2.0 + cx) * (5.0 + cy) * (2.0 + cy)).sqrt()
}

fn check_definite(p: &PointCoefficients) -> Result<()> {
    if p.is_positive_definite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "diffusion not positive definite: alpha1 = {}, alpha2 = {}, beta = {}",
            p.alpha1, p.alpha2, p.beta
        )))
    }
}

/// Real and imaginary parts of the discrete symbol, `F = F_R + d + iF_I`.
/// `F_R` excludes the reaction term.
pub fn symbol_f(p: &PointCoefficients, h: f64, k: f64, theta_x: f64, theta_y: f64) -> Result<(f64, f64)> {
    check_definite(p)?;
    let (cx, cy) = (theta_x.cos(), theta_y.cos());
    let (sx2, sy2) = ((theta_x / 2.0).sin(), (theta_y / 2.0).sin());
    let gx = ((5.0 + cx) / (2.0 + cx)).sqrt();
    let gy = ((5.0 + cy) / (2.0 + cy)).sqrt();
    let fr = 2.0 * p.alpha1 / (h * h) * sx2 * sx2 * gx * gx
        + 2.0 * p.alpha2 / (k * k) * sy2 * sy2 * gy * gy
        + 2.0 * p.beta / (h * k) * sx2 * sy2 * gx * gy * r_function(theta_x, theta_y);
    Ok((fr, imaginary_part(p, h, k, theta_x, theta_y)))
}

fn imaginary_part(p: &PointCoefficients, h: f64, k: f64, theta_x: f64, theta_y: f64) -> f64 {
    p.c1 * 3.0 * theta_x.sin() / (h * (2.0 + theta_x.cos()))
        + p.c2 * 3.0 * theta_y.sin() / (k * (2.0 + theta_y.cos()))
}

/// The symbol assembled term by term from the Fourier images of the
/// difference operators and Padé gradients, before simplification.
pub fn symbol_f_unfactored(
    p: &PointCoefficients,
    h: f64,
    k: f64,
    theta_x: f64,
    theta_y: f64,
) -> Result<(f64, f64)> {
    check_definite(p)?;
    let (sx, sy) = (theta_x.sin() / h, theta_y.sin() / k);
    let px = 3.0 * theta_x.sin() / (h * (2.0 + theta_x.cos()));
    let py = 3.0 * theta_y.sin() / (k * (2.0 + theta_y.cos()));
    let fr = 2.0 * p.alpha1 * (2.0 - 2.0 * theta_x.cos()) / (h * h)
        + 2.0 * p.alpha2 * (2.0 - 2.0 * theta_y.cos()) / (k * k)
        - p.beta * sx * sy
        + (-p.alpha1 * sx + p.beta * sy) * px
        + (-p.alpha2 * sy + p.beta * sx) * py;
    Ok((fr, imaginary_part(p, h, k, theta_x, theta_y)))
}

/// `|G| = |1 − (1−ι)δtF| / |1 + ιδtF|` for the θ-scheme.
pub fn amplification(
    p: &PointCoefficients,
    h: f64,
    k: f64,
    dt: f64,
    iota: f64,
    theta_x: f64,
    theta_y: f64,
) -> Result<f64> {
    let (fr, fi) = symbol_f(p, h, k, theta_x, theta_y)?;
    let re = fr + p.d;
    let den = (1.0 + iota * dt * re).hypot(iota * dt * fi);
    if den <= f64::EPSILON {
        return Err(Error::SingularAmplification);
    }
    let num = (1.0 - (1.0 - iota) * dt * re).hypot((1.0 - iota) * dt * fi);
    Ok(num / den)
}

/// Everything behind one `|G|` evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilitySample {
    pub theta_x: f64,
    pub theta_y: f64,
    pub f_r: f64,
    pub f_i: f64,
    pub g_magnitude: f64,
    pub coefficients: PointCoefficients,
    pub h: f64,
    pub k: f64,
    pub dt: f64,
    pub iota: f64,
}

impl StabilitySample {
    pub fn evaluate(
        p: &PointCoefficients,
        h: f64,
        k: f64,
        dt: f64,
        iota: f64,
        theta_x: f64,
        theta_y: f64,
    ) -> Result<Self> {
        let (f_r, f_i) = symbol_f(p, h, k, theta_x, theta_y)?;
        Ok(Self {
            theta_x,
            theta_y,
            f_r,
            f_i,
            g_magnitude: amplification(p, h, k, dt, iota, theta_x, theta_y)?,
            coefficients: *p,
            h,
            k,
            dt,
            iota,
        })
    }
}

/// Result of scanning `|G|` over the phase-angle torus.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub max_g: f64,
    pub argmax: (f64, f64),
    pub resolution: usize,
    /// Observed `K` in `|G| ≤ 1 + Kδt` (zero when `max_g ≤ 1`).
    pub growth_rate: f64,
}

impl StabilityReport {
    pub fn is_stable(&self, slack: f64) -> bool {
        self.max_g <= 1.0 + slack
    }
}

/// Maximum of `|G|` over a uniform `resolution²` grid on `[0, 2π)²`.
/// Ties go to the lexicographically first `(θ_x, θ_y)`.
pub fn stability_scan(
    p: &PointCoefficients,
    h: f64,
    k: f64,
    dt: f64,
    iota: f64,
    resolution: usize,
    exec: Execution,
) -> Result<StabilityReport> {
    if resolution < 8 {
        return Err(Error::Configuration(format!(
            "stability scan needs resolution >= 8, got {resolution}"
        )));
    }
    if !(0.0..=1.0).contains(&iota) || ![dt, h, k].iter().all(|&v| v > 0.0) {
        return Err(Error::Configuration(
            "need 0 <= iota <= 1 and positive dt, h, k".into(),
        ));
    }
    check_definite(p)?;
    let step = 2.0 * PI / resolution as f64;
    let rows = map_indexed(exec, resolution, |ix| -> Result<(f64, usize)> {
        let tx = ix as f64 * step;
        let mut best = (f64::NEG_INFINITY, 0);
        for iy in 0..resolution {
            let g = amplification(p, h, k, dt, iota, tx, iy as f64 * step)?;
            if g > best.0 {
                best = (g, iy);
            }
        }
        Ok(best)
    });
    let mut max_g = f64::NEG_INFINITY;
    let mut argmax = (0.0, 0.0);
    for (ix, row) in rows.into_iter().enumerate() {
        let (g, iy) = row?;
        if g > max_g {
            max_g = g;
            argmax = (ix as f64 * step, iy as f64 * step);
        }
    }
    Ok(StabilityReport {
        max_g,
        argmax,
        resolution,
        growth_rate: ((max_g - 1.0) / dt).max(0.0),
    })
}
