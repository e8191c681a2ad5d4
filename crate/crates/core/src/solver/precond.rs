//! Approximate inverses of the second-order nine-point matrix `P`.

use super::system::{BlockSystem, NONE};
use crate::assembly::stencil::{slot, CENTRE};
use crate::operators::tridiag::{solve_cyclic, solve_tridiagonal};
use crate::operators::AxisKind;

pub(crate) struct NinePoint<'a> {
    low: &'a [[f64; 9]],
    nb: &'a [[usize; 9]],
    nx: usize,
    ny: usize,
    x_periodic: bool,
    y_periodic: bool,
}

impl<'a> NinePoint<'a> {
    pub(crate) fn new(system: &'a BlockSystem) -> Self {
        let (nx, ny) = system.layout.dims();
        let (xa, ya) = system.layout.axes();
        Self {
            low: &system.low,
            nb: &system.neighbours,
            nx,
            ny,
            x_periodic: xa == AxisKind::Periodic,
            y_periodic: ya == AxisKind::Periodic,
        }
    }

    pub(crate) fn apply(&self, x: &[f64], out: &mut [f64]) {
        for (u, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for s in 0..9 {
                let v = self.nb[u][s];
                if v != NONE {
                    acc += self.low[u][s] * x[v];
                }
            }
            *o = acc;
        }
    }

    /// Sum of couplings to `z` outside the line through `u`.
    fn off_line(&self, u: usize, z: &[f64], line_slots: &[usize; 3]) -> f64 {
        let mut acc = 0.0;
        for s in 0..9 {
            if line_slots.contains(&s) {
                continue;
            }
            let v = self.nb[u][s];
            if v != NONE {
                acc += self.low[u][s] * z[v];
            }
        }
        acc
    }

    fn solve_line(
        &self,
        rows: &[usize],
        slots: &[usize; 3],
        periodic: bool,
        b: &[f64],
        z: &mut [f64],
        omega: f64,
    ) {
        let n = rows.len();
        let mut lower = Vec::with_capacity(n);
        let mut diag = Vec::with_capacity(n);
        let mut upper = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for &u in rows {
            lower.push(self.low[u][slots[0]]);
            diag.push(self.low[u][slots[1]]);
            upper.push(self.low[u][slots[2]]);
            rhs.push(b[u] - self.off_line(u, z, slots));
        }
        let ok = if periodic {
            solve_cyclic(&lower, &diag, &upper, &mut rhs)
        } else {
            solve_tridiagonal(&lower, &diag, &upper, &mut rhs)
        };
        if !ok {
            // point Jacobi fallback for a singular line
            for (q, &u) in rows.iter().enumerate() {
                let d = self.low[u][CENTRE];
                rhs[q] = if d != 0.0 { b[u] / d } else { 0.0 };
            }
        }
        for (q, &u) in rows.iter().enumerate() {
            z[u] = (1.0 - omega) * z[u] + omega * rhs[q];
        }
    }

    /// One Gauss–Seidel pass of x-line solves, bottom to top.
    pub(crate) fn x_sweep(&self, b: &[f64], z: &mut [f64], omega: f64) {
        let slots = [slot(-1, 0), CENTRE, slot(1, 0)];
        let mut rows = vec![0; self.nx];
        for jl in 0..self.ny {
            for (q, r) in rows.iter_mut().enumerate() {
                *r = jl * self.nx + q;
            }
            self.solve_line(&rows, &slots, self.x_periodic, b, z, omega);
        }
    }

    /// One Gauss–Seidel pass of y-line solves, left to right.
    pub(crate) fn y_sweep(&self, b: &[f64], z: &mut [f64], omega: f64) {
        let slots = [slot(0, -1), CENTRE, slot(0, 1)];
        let mut rows = vec![0; self.ny];
        for il in 0..self.nx {
            for (q, r) in rows.iter_mut().enumerate() {
                *r = q * self.nx + il;
            }
            self.solve_line(&rows, &slots, self.y_periodic, b, z, omega);
        }
    }

    /// `sweeps` alternating x/y line passes from a zero start.
    pub(crate) fn line_relax(&self, b: &[f64], z: &mut [f64], sweeps: usize, omega: f64) {
        z.iter_mut().for_each(|v| *v = 0.0);
        for _ in 0..sweeps {
            self.x_sweep(b, z, omega);
            self.y_sweep(b, z, omega);
        }
    }

    /// BiCGSTAB on `P`, preconditioned by one alternating line pass.
    pub(crate) fn bicgstab(&self, b: &[f64], z: &mut [f64], tol: f64, max_iter: usize, omega: f64) {
        let n = b.len();
        z.iter_mut().for_each(|v| *v = 0.0);
        let bnorm = norm2(b);
        if bnorm == 0.0 {
            return;
        }
        let mut r = b.to_vec();
        let r_hat = r.clone();
        let mut p = vec![0.0; n];
        let mut v = vec![0.0; n];
        let mut p_hat = vec![0.0; n];
        let mut s_hat = vec![0.0; n];
        let mut t = vec![0.0; n];
        let (mut rho, mut alpha, mut w) = (1.0, 1.0, 1.0);
        for _ in 0..max_iter {
            let rho_new = dot(&r_hat, &r);
            if rho_new == 0.0 || w == 0.0 {
                break;
            }
            let beta = (rho_new / rho) * (alpha / w);
            rho = rho_new;
            for q in 0..n {
                p[q] = r[q] + beta * (p[q] - w * v[q]);
            }
            self.line_relax(&p, &mut p_hat, 1, omega);
            self.apply(&p_hat, &mut v);
            let denom = dot(&r_hat, &v);
            if denom == 0.0 {
                break;
            }
            alpha = rho / denom;
            for q in 0..n {
                r[q] -= alpha * v[q];
                z[q] += alpha * p_hat[q];
            }
            if norm2(&r) <= tol * bnorm {
                return;
            }
            self.line_relax(&r, &mut s_hat, 1, omega);
            self.apply(&s_hat, &mut t);
            let tt = dot(&t, &t);
            if tt == 0.0 {
                break;
            }
            w = dot(&t, &r) / tt;
            for q in 0..n {
                z[q] += w * s_hat[q];
                r[q] -= w * t[q];
            }
            if norm2(&r) <= tol * bnorm {
                return;
            }
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}
