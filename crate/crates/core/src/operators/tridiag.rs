//! Tridiagonal solvers: the constant (1, 4, 1) Padé matrix, a general
//! Thomas recurrence and its cyclic variant.

/// Precomputed forward-elimination factors for the `n × n` matrix with
/// rows `(1, 4, 1)`. Strictly diagonally dominant, so no pivoting.
#[derive(Debug, Clone)]
pub struct PadeFactor {
    upper: Vec<f64>,
    inv_pivot: Vec<f64>,
}

impl PadeFactor {
    pub fn new(n: usize) -> Self {
        let mut upper = Vec::with_capacity(n);
        let mut inv_pivot = Vec::with_capacity(n);
        let mut prev = 0.0;
        for _ in 0..n {
            let pivot = 4.0 - prev;
            debug_assert!(pivot > 3.0);
            let inv = 1.0 / pivot;
            inv_pivot.push(inv);
            prev = inv;
            upper.push(inv);
        }
        Self { upper, inv_pivot }
    }

    pub fn len(&self) -> usize {
        self.upper.len()
    }

    pub fn is_empty(&self) -> bool {
        self.upper.is_empty()
    }

    /// Solve in place; `rhs.len()` must equal [`PadeFactor::len`].
    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = self.len();
        debug_assert_eq!(rhs.len(), n);
        if n == 0 {
            return;
        }
        rhs[0] *= self.inv_pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.upper[i] * rhs[i + 1];
        }
    }
}

/// Thomas algorithm for `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
/// `lower[0]` and `upper[n-1]` are ignored. Returns `false` on a zero pivot.
pub fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) -> bool {
    let n = rhs.len();
    if n == 0 {
        return true;
    }
    let mut c = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 {
        return false;
    }
    c[0] = upper[0] / pivot;
    rhs[0] /= pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c[i - 1];
        if pivot == 0.0 {
            return false;
        }
        c[i] = if i + 1 < n { upper[i] / pivot } else { 0.0 };
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    true
}

/// Periodic tridiagonal system with the wrap-around couplings
/// `lower[0]` (row 0, column n-1) and `upper[n-1]` (row n-1, column 0),
/// solved by Sherman–Morrison. Needs `n ≥ 3`.
pub fn solve_cyclic(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) -> bool {
    let n = rhs.len();
    if n < 3 {
        return false;
    }
    let alpha = upper[n - 1];
    let beta = lower[0];
    let gamma = -diag[0];
    let mut d = diag.to_vec();
    d[0] -= gamma;
    d[n - 1] -= alpha * beta / gamma;

    let mut lo = lower.to_vec();
    lo[0] = 0.0;
    let mut up = upper.to_vec();
    up[n - 1] = 0.0;

    if !solve_tridiagonal(&lo, &d, &up, rhs) {
        return false;
    }
    let mut z = vec![0.0; n];
    z[0] = gamma;
    z[n - 1] = alpha;
    if !solve_tridiagonal(&lo, &d, &up, &mut z) {
        return false;
    }
    let fact = (rhs[0] + beta * rhs[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
    for (x, zi) in rhs.iter_mut().zip(&z) {
        *x -= fact * zi;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matvec(lower: &[f64], diag: &[f64], upper: &[f64], x: &[f64], cyclic: bool) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let mut v = diag[i] * x[i];
                if i > 0 {
                    v += lower[i] * x[i - 1];
                } else if cyclic {
                    v += lower[0] * x[n - 1];
                }
                if i + 1 < n {
                    v += upper[i] * x[i + 1];
                } else if cyclic {
                    v += upper[n - 1] * x[0];
                }
                v
            })
            .collect()
    }

    #[test]
    fn pade_factor_matches_general_thomas() {
        let n = 9;
        let rhs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
        let mut a = rhs.clone();
        PadeFactor::new(n).solve_in_place(&mut a);
        let mut b = rhs.clone();
        assert!(solve_tridiagonal(
            &vec![1.0; n],
            &vec![4.0; n],
            &vec![1.0; n],
            &mut b
        ));
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-15);
        }
        let back = matvec(&vec![1.0; n], &vec![4.0; n], &vec![1.0; n], &a, false);
        for (x, y) in back.iter().zip(&rhs) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn cyclic_solve_inverts_periodic_matrix() {
        let n = 7;
        let lower: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * i as f64).collect();
        let diag = vec![5.0; n];
        let upper: Vec<f64> = (0..n).map(|i| 0.9 - 0.05 * i as f64).collect();
        let x: Vec<f64> = (0..n).map(|i| (i as f64).cos()).collect();
        let mut rhs = matvec(&lower, &diag, &upper, &x, true);
        assert!(solve_cyclic(&lower, &diag, &upper, &mut rhs));
        for (a, b) in rhs.iter().zip(&x) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
