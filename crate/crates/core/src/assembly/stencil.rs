//! Per-node stencil weights.
//!
//! Compact weights are laid out as `f * 9 + (di + 1) * 3 + (dj + 1)` where
//! `f` selects the field (`0 = φ`, `1 = φ_x`, `2 = φ_y`) and `(di, dj)` the
//! neighbour offset. Low-order weights use the same `(di, dj)` slots on `φ`
//! alone.

use super::PointCoefficients;

pub const CENTRE: usize = 4;

#[inline]
pub const fn slot(di: isize, dj: isize) -> usize {
    ((di + 1) * 3 + (dj + 1)) as usize
}

/// `(di, dj)` for each of the nine slots.
pub const OFFSETS: [(isize, isize); 9] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 0),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

/// Weights of the fourth-order compact operator
/// `(−2α₁δ²_x − 2α₂δ²_y + βδ_xδ_y + d)φ + (α₁δ_x − βδ_y + c₁)φ_x + (α₂δ_y − βδ_x + c₂)φ_y`.
pub fn compact_weights(p: &PointCoefficients, h: f64, k: f64) -> [f64; 27] {
    let mut w = [0.0; 27];
    let (a1, a2, b) = (p.alpha1, p.alpha2, p.beta);
    let phi = |w: &mut [f64; 27], di, dj, v| w[slot(di, dj)] += v;
    let px = |w: &mut [f64; 27], di, dj, v| w[9 + slot(di, dj)] += v;
    let py = |w: &mut [f64; 27], di, dj, v| w[18 + slot(di, dj)] += v;

    let ax = a1 / (h * h);
    let ay = a2 / (k * k);
    phi(&mut w, -1, 0, -2.0 * ax);
    phi(&mut w, 1, 0, -2.0 * ax);
    phi(&mut w, 0, -1, -2.0 * ay);
    phi(&mut w, 0, 1, -2.0 * ay);
    phi(&mut w, 0, 0, 4.0 * ax + 4.0 * ay + p.d);
    let bxy = b / (4.0 * h * k);
    phi(&mut w, 1, 1, bxy);
    phi(&mut w, -1, -1, bxy);
    phi(&mut w, 1, -1, -bxy);
    phi(&mut w, -1, 1, -bxy);

    px(&mut w, 1, 0, a1 / (2.0 * h));
    px(&mut w, -1, 0, -a1 / (2.0 * h));
    px(&mut w, 0, 1, -b / (2.0 * k));
    px(&mut w, 0, -1, b / (2.0 * k));
    px(&mut w, 0, 0, p.c1);

    py(&mut w, 0, 1, a2 / (2.0 * k));
    py(&mut w, 0, -1, -a2 / (2.0 * k));
    py(&mut w, 1, 0, -b / (2.0 * h));
    py(&mut w, -1, 0, b / (2.0 * h));
    py(&mut w, 0, 0, p.c2);
    w
}

/// Second-order nine-point weights of
/// `−α₁δ²_x − βδ_xδ_y − α₂δ²_y + c₁δ_x + c₂δ_y + d`, used as preconditioner.
pub fn low_order_weights(p: &PointCoefficients, h: f64, k: f64) -> [f64; 9] {
    let mut w = [0.0; 9];
    let ax = p.alpha1 / (h * h);
    let ay = p.alpha2 / (k * k);
    w[slot(-1, 0)] = -ax - p.c1 / (2.0 * h);
    w[slot(1, 0)] = -ax + p.c1 / (2.0 * h);
    w[slot(0, -1)] = -ay - p.c2 / (2.0 * k);
    w[slot(0, 1)] = -ay + p.c2 / (2.0 * k);
    w[CENTRE] = 2.0 * ax + 2.0 * ay + p.d;
    let bxy = p.beta / (4.0 * h * k);
    w[slot(1, 1)] = -bxy;
    w[slot(-1, -1)] = -bxy;
    w[slot(1, -1)] = bxy;
    w[slot(-1, 1)] = bxy;
    w
}

/// `scale · w + I`: the implicit θ-step weights.
pub(crate) fn implicit_compact(w: &[f64; 27], scale: f64) -> [f64; 27] {
    let mut out = w.map(|v| v * scale);
    out[CENTRE] += 1.0;
    out
}

pub(crate) fn implicit_low(w: &[f64; 9], scale: f64) -> [f64; 9] {
    let mut out = w.map(|v| v * scale);
    out[CENTRE] += 1.0;
    out
}
