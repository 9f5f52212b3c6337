//! Smooth objective bundles and the finite-difference oracles used to
//! validate their analytic derivatives.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use nalgebra::DVector;

use crate::{ensure_finite, Error, Result, Rng};

type ValueFn = dyn Fn(&DVector<f64>) -> f64 + Send + Sync;
type GradFn = dyn Fn(&DVector<f64>) -> DVector<f64> + Send + Sync;
type HvpFn = dyn Fn(&DVector<f64>, &DVector<f64>) -> DVector<f64> + Send + Sync;

/// A smooth convex objective: value, gradient, optional Hessian-vector
/// product, a Lipschitz constant for the gradient, and optional strong
/// convexity / reference-minimum data.
///
/// Instances are immutable once built and safe to evaluate concurrently.
/// Evaluation counters use atomics so purity of the maps themselves is
/// preserved.
pub struct Objective {
    dim: usize,
    value: Box<ValueFn>,
    gradient: Box<GradFn>,
    hvp: Option<Box<HvpFn>>,
    lipschitz: f64,
    strong_mu: Option<f64>,
    reference_min: Option<f64>,
    minimizer: Option<DVector<f64>>,
    value_evals: AtomicU64,
    gradient_evals: AtomicU64,
    hvp_evals: AtomicU64,
}

impl std::fmt::Debug for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Objective")
            .field("dim", &self.dim)
            .field("lipschitz", &self.lipschitz)
            .field("strong_mu", &self.strong_mu)
            .field("reference_min", &self.reference_min)
            .field("has_hvp", &self.hvp.is_some())
            .finish()
    }
}

impl Objective {
    pub fn new(
        dim: usize,
        value: impl Fn(&DVector<f64>) -> f64 + Send + Sync + 'static,
        gradient: impl Fn(&DVector<f64>) -> DVector<f64> + Send + Sync + 'static,
        lipschitz: f64,
    ) -> Self {
        assert!(dim > 0, "objective dimension must be positive");
        assert!(
            lipschitz.is_finite() && lipschitz >= 0.0,
            "lipschitz constant must be finite and nonnegative"
        );
        Objective {
            dim,
            value: Box::new(value),
            gradient: Box::new(gradient),
            hvp: None,
            lipschitz,
            strong_mu: None,
            reference_min: None,
            minimizer: None,
            value_evals: AtomicU64::new(0),
            gradient_evals: AtomicU64::new(0),
            hvp_evals: AtomicU64::new(0),
        }
    }

    pub fn with_hvp(
        mut self,
        hvp: impl Fn(&DVector<f64>, &DVector<f64>) -> DVector<f64> + Send + Sync + 'static,
    ) -> Self {
        self.hvp = Some(Box::new(hvp));
        self
    }

    pub fn with_strong_mu(mut self, mu: f64) -> Self {
        assert!(
            mu > 0.0 && mu <= self.lipschitz,
            "strong convexity parameter must satisfy 0 < mu <= L"
        );
        self.strong_mu = Some(mu);
        self
    }

    pub fn with_reference_min(mut self, fstar: f64) -> Self {
        self.reference_min = Some(fstar);
        self
    }

    pub fn with_minimizer(mut self, xstar: DVector<f64>) -> Self {
        assert_eq!(xstar.len(), self.dim);
        self.minimizer = Some(xstar);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn strong_mu(&self) -> Option<f64> {
        self.strong_mu
    }

    pub fn reference_min(&self) -> Option<f64> {
        self.reference_min
    }

    pub fn minimizer(&self) -> Option<&DVector<f64>> {
        self.minimizer.as_ref()
    }

    pub fn has_hvp(&self) -> bool {
        self.hvp.is_some()
    }

    pub fn value(&self, x: &DVector<f64>) -> f64 {
        self.value_evals.fetch_add(1, Ordering::Relaxed);
        (self.value)(x)
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        self.gradient_evals.fetch_add(1, Ordering::Relaxed);
        (self.gradient)(x)
    }

    /// Analytic Hessian-vector product, if the bundle provides one.
    pub fn hvp(&self, x: &DVector<f64>, v: &DVector<f64>) -> Option<DVector<f64>> {
        self.hvp.as_ref().map(|h| {
            self.hvp_evals.fetch_add(1, Ordering::Relaxed);
            h(x, v)
        })
    }

    /// Hessian-vector product with central-difference fallback on the
    /// gradient. Fails when the fallback is disabled and no analytic
    /// product is available.
    pub fn hvp_or_fd(
        &self,
        x: &DVector<f64>,
        v: &DVector<f64>,
        allow_fd: bool,
    ) -> Result<DVector<f64>> {
        if let Some(h) = self.hvp(x, v) {
            return Ok(h);
        }
        if !allow_fd {
            return Err(Error::MissingHvp);
        }
        fd_hvp(self, x, v, DEFAULT_FD_STEP)
    }

    /// (value, gradient, hvp) evaluation counts since construction.
    pub fn eval_counts(&self) -> (u64, u64, u64) {
        (
            self.value_evals.load(Ordering::Relaxed),
            self.gradient_evals.load(Ordering::Relaxed),
            self.hvp_evals.load(Ordering::Relaxed),
        )
    }

    pub fn reset_eval_counts(&self) {
        self.value_evals.store(0, Ordering::Relaxed);
        self.gradient_evals.store(0, Ordering::Relaxed);
        self.hvp_evals.store(0, Ordering::Relaxed);
    }

    /// Shared handle; construction helpers return plain objectives, runs
    /// that fan out take `Arc<Objective>`.
    pub fn into_shared(self) -> Arc<Objective> {
        Arc::new(self)
    }
}

/// Default finite-difference step before magnitude scaling.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Central-difference gradient, entrywise `(f(x+h e_i) - f(x-h e_i)) / 2h`
/// with `h = step * max(1, |x|_inf)`.
pub fn fd_gradient(obj: &Objective, x: &DVector<f64>, step: f64) -> Result<DVector<f64>> {
    if step <= 0.0 {
        return Err(Error::InvalidArgument("fd step must be positive".into()));
    }
    if x.len() != obj.dim() {
        return Err(Error::DimensionMismatch {
            context: "fd_gradient",
            expected: obj.dim(),
            got: x.len(),
        });
    }
    let h = step * x.amax().max(1.0);
    let mut g = DVector::zeros(x.len());
    let mut xp = x.clone();
    for i in 0..x.len() {
        xp[i] = x[i] + h;
        let fp = obj.value(&xp);
        xp[i] = x[i] - h;
        let fm = obj.value(&xp);
        xp[i] = x[i];
        let d = (fp - fm) / (2.0 * h);
        if !d.is_finite() {
            return Err(Error::NonFinite {
                context: "fd_gradient",
                index: i,
            });
        }
        g[i] = d;
    }
    Ok(g)
}

/// Central-difference Hessian-vector product along `v`:
/// `(grad(x+hv) - grad(x-hv)) / 2h` with `h = step / |v|`.
pub fn fd_hvp(obj: &Objective, x: &DVector<f64>, v: &DVector<f64>, step: f64) -> Result<DVector<f64>> {
    if step <= 0.0 {
        return Err(Error::InvalidArgument("fd step must be positive".into()));
    }
    let vnorm = v.norm();
    if vnorm == 0.0 {
        return Err(Error::InvalidArgument(
            "fd_hvp requires a nonzero direction".into(),
        ));
    }
    let h = step / vnorm;
    let gp = obj.gradient(&(x + v * h));
    let gm = obj.gradient(&(x - v * h));
    let out = (gp - gm) / (2.0 * h);
    ensure_finite("fd_hvp", &out)?;
    Ok(out)
}

/// Largest relative gradient error over `npoints` seeded sample points.
///
/// Points are drawn standard normal around `center` (origin when absent)
/// and the analytic gradient is compared against [`fd_gradient`], with the
/// error measured relative to `max(1, |grad|)`.
pub fn max_gradient_error(
    obj: &Objective,
    center: Option<&DVector<f64>>,
    npoints: usize,
    rng: &mut Rng,
) -> f64 {
    let mut worst = 0.0f64;
    for _ in 0..npoints {
        let mut x = rng.normal_vector(obj.dim());
        if let Some(c) = center {
            x += c;
        }
        let g = obj.gradient(&x);
        let fd = fd_gradient(obj, &x, DEFAULT_FD_STEP).expect("fd gradient");
        let err = (&g - &fd).norm() / g.norm().max(1.0);
        worst = worst.max(err);
    }
    worst
}

/// Largest relative Hessian-vector-product error over seeded points and
/// directions; returns `None` when the bundle has no analytic product.
pub fn max_hvp_error(obj: &Objective, npoints: usize, rng: &mut Rng) -> Option<f64> {
    if !obj.has_hvp() {
        return None;
    }
    let mut worst = 0.0f64;
    for _ in 0..npoints {
        let x = rng.normal_vector(obj.dim());
        let v = rng.normal_vector(obj.dim());
        let hv = obj.hvp(&x, &v).expect("hvp");
        let fd = fd_hvp(obj, &x, &v, DEFAULT_FD_STEP).expect("fd hvp");
        let err = (&hv - &fd).norm() / hv.norm().max(1.0);
        worst = worst.max(err);
    }
    Some(worst)
}

/// Worst violation of `2 mu (f(x) - f*) <= |grad f(x)|^2 (1 + slack)` over
/// seeded points; only meaningful when `mu` and a reference minimum are set.
pub fn max_pl_violation(obj: &Objective, npoints: usize, rng: &mut Rng) -> Option<f64> {
    let mu = obj.strong_mu()?;
    let fstar = obj.reference_min()?;
    let mut worst = 0.0f64;
    for _ in 0..npoints {
        let x = rng.normal_vector(obj.dim());
        let lhs = 2.0 * mu * (obj.value(&x) - fstar);
        let rhs = obj.gradient(&x).norm_squared();
        worst = worst.max(lhs - rhs * (1.0 + 1e-8));
    }
    Some(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn half_norm_squared(dim: usize) -> Objective {
        Objective::new(
            dim,
            |x| 0.5 * x.norm_squared(),
            |x| x.clone(),
            1.0,
        )
        .with_hvp(|_, v| v.clone())
        .with_strong_mu(1.0)
        .with_reference_min(0.0)
    }

    #[test]
    fn fd_gradient_quadratic_near_exact() {
        let obj = half_norm_squared(2);
        let x = DVector::from_vec(vec![1.0, 2.0]);
        let g = fd_gradient(&obj, &x, 1e-5).unwrap();
        assert_abs_diff_eq!(g[0], 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(g[1], 2.0, epsilon = 1e-9);
    }

    #[test]
    fn fd_gradient_constant_is_zero() {
        let obj = Objective::new(3, |_| 4.0, |x| DVector::zeros(x.len()), 1.0);
        let x = DVector::from_vec(vec![0.3, -2.0, 7.0]);
        let g = fd_gradient(&obj, &x, 1e-5).unwrap();
        assert_eq!(g, DVector::zeros(3));
    }

    #[test]
    fn fd_hvp_quadratic_exact_and_homogeneous() {
        // f(x) = 1/2 x'Ax with A = [[2,1],[1,3]]
        let a = nalgebra::DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let a2 = a.clone();
        let obj = Objective::new(
            2,
            move |x| 0.5 * (x.transpose() * &a * x)[(0, 0)],
            move |x| &a2 * x,
            3.5,
        );
        let x = DVector::from_vec(vec![0.7, -1.1]);
        let v = DVector::from_vec(vec![1.0, 2.0]);
        let hv = fd_hvp(&obj, &x, &v, 1e-5).unwrap();
        assert_abs_diff_eq!(hv[0], 4.0, epsilon = 1e-8);
        assert_abs_diff_eq!(hv[1], 7.0, epsilon = 1e-8);

        // scaling the direction scales the result exactly
        let hv3 = fd_hvp(&obj, &x, &(&v * 3.0), 1e-5).unwrap();
        assert_abs_diff_eq!(hv3[0], 3.0 * hv[0], epsilon = 1e-13);
        assert_abs_diff_eq!(hv3[1], 3.0 * hv[1], epsilon = 1e-13);
    }

    #[test]
    fn fd_hvp_rejects_zero_direction() {
        let obj = half_norm_squared(2);
        let x = DVector::from_vec(vec![1.0, 1.0]);
        let err = fd_hvp(&obj, &x, &DVector::zeros(2), 1e-5);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn eval_counters_track_calls() {
        let obj = half_norm_squared(2);
        let x = DVector::from_vec(vec![1.0, 1.0]);
        obj.value(&x);
        obj.gradient(&x);
        obj.gradient(&x);
        let (v, g, h) = obj.eval_counts();
        assert_eq!((v, g, h), (1, 2, 0));
    }

    #[test]
    fn pl_inequality_holds_for_strongly_convex_quadratic() {
        let obj = half_norm_squared(4);
        let mut rng = Rng::new(11);
        let viol = max_pl_violation(&obj, 20, &mut rng).unwrap();
        assert!(viol <= 0.0, "PL violation {viol}");
    }
}
