//! Execution mode for the data-parallel kernels.
//!
//! Every kernel that fans out over independent grid lines or sample points
//! takes an [`Execution`]. With the `parallel` feature disabled the parallel
//! mode silently runs sequentially, so results never depend on the feature.
//! Only order-independent work is parallelized: each output element is
//! written by exactly one task, and reductions are exact (max), so parallel
//! and sequential runs are bitwise identical.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// True when work will actually be spread over the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Apply `f` to every lane of `out` along `axis`, passing the lane index.
pub(crate) fn for_each_lane_mut<F>(exec: Execution, out: &mut ndarray::Array2<f64>, axis: ndarray::Axis, f: F)
where
    F: Fn(usize, ndarray::ArrayViewMut1<'_, f64>) + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use ndarray::parallel::prelude::*;
        out.axis_iter_mut(axis)
            .into_par_iter()
            .enumerate()
            .for_each(|(idx, lane)| f(idx, lane));
        return;
    }
    let _ = exec;
    for (idx, lane) in out.axis_iter_mut(axis).enumerate() {
        f(idx, lane);
    }
}

/// Map `f` over `0..n`, collecting results in index order.
pub(crate) fn map_indexed<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// Fill a slice element-wise from its index.
pub(crate) fn fill_indexed<F>(exec: Execution, out: &mut [f64], f: F)
where
    F: Fn(usize) -> f64 + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        out.par_iter_mut().enumerate().for_each(|(i, v)| *v = f(i));
        return;
    }
    let _ = exec;
    for (i, v) in out.iter_mut().enumerate() {
        *v = f(i);
    }
}
