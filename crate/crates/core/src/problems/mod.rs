//! Benchmark objectives with analytic derivatives and known constants.

mod kernel;
mod logsumexp;
mod quadratic;

pub use kernel::{
    generate_kernel_data, make_kernel_logistic, make_kernel_multinomial, KernelDataset,
    KernelProblemSpec,
};
pub use logsumexp::{make_logsumexp, LogSumExpSpec};
pub use quadratic::{make_illposed_quadratic, make_random_quadratic, QuadraticSpec};

use nalgebra::DVector;

use crate::Rng;

/// Largest eigenvalue of a symmetric PSD operator given by `matvec`,
/// by power iteration on a seeded start vector.
pub(crate) fn power_iteration(
    dim: usize,
    matvec: impl Fn(&DVector<f64>) -> DVector<f64>,
    tol: f64,
    max_iter: usize,
) -> f64 {
    let mut rng = Rng::new(0xC0FF_EE00);
    let mut v = rng.normal_vector(dim);
    let norm = v.norm();
    if norm == 0.0 {
        return 0.0;
    }
    v /= norm;
    let mut lambda = 0.0f64;
    for _ in 0..max_iter {
        let w = matvec(&v);
        let wnorm = w.norm();
        if wnorm == 0.0 {
            return 0.0;
        }
        let next = v.dot(&w);
        v = w / wnorm;
        if (next - lambda).abs() <= tol * next.abs().max(1.0) {
            return next;
        }
        lambda = next;
    }
    lambda
}
