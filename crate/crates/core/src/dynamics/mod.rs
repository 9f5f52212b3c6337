//! Continuous-time dynamics: the damped inertial ODE, restart-event
//! detection, and restarted-trajectory assembly.
//!
//! The second-order equation is integrated as the first-order system
//! `(x, v)` with `v' = -(alpha/t) v - beta H(x) v - c(t) grad f(x)`,
//! where `c = 1` for the plain variant and `c = gamma + r/t` for the
//! high-resolution one. Trajectories are "lazy": each segment starts with
//! the leading-order expansion of the zero-initial-velocity solution at a
//! small `t0 > 0`, which sidesteps the `alpha/t` singularity.

mod dopri5;

pub use dopri5::{AcceptedStep, DenseOutput, Dopri5, Tolerances};

use std::cell::RefCell;
use std::sync::Arc;

use nalgebra::DVector;

use crate::theory::ParamTuple;
use crate::{ensure_finite, Error, Objective, Result};

/// Which second-order equation to integrate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OdeVariant {
    /// `x'' + (a/t) x' + b H x' + grad f = 0`
    DinAvd,
    /// `x'' + (a/t) x' + b H x' + (gamma + r/t) grad f = 0`
    HrDinAvd { gamma: f64, r_coeff: f64 },
}

/// The ODE together with its objective and damping parameters.
#[derive(Debug, Clone)]
pub struct OdeSpec {
    pub objective: Arc<Objective>,
    pub alpha: f64,
    pub beta: f64,
    pub variant: OdeVariant,
    /// fall back to finite-difference Hessian products when the objective
    /// has no analytic one
    pub allow_fd_hvp: bool,
}

impl OdeSpec {
    pub fn new(objective: Arc<Objective>, alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
        }
        if !(beta >= 0.0) {
            return Err(Error::InvalidArgument(format!("beta must be nonnegative, got {beta}")));
        }
        Ok(OdeSpec {
            objective,
            alpha,
            beta,
            variant: OdeVariant::DinAvd,
            allow_fd_hvp: true,
        })
    }

    /// High-resolution variant; `r` defaults to `alpha beta / 2` when `None`.
    pub fn high_resolution(mut self, gamma: f64, r_coeff: Option<f64>) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::InvalidArgument(format!("gamma must be positive, got {gamma}")));
        }
        let r = r_coeff.unwrap_or(self.alpha * self.beta / 2.0);
        self.variant = OdeVariant::HrDinAvd { gamma, r_coeff: r };
        Ok(self)
    }

    /// Scheme parameters of this ODE for a given restart weight.
    pub fn theory_params(&self, lambda: f64) -> Result<ParamTuple> {
        ParamTuple::new(
            self.alpha,
            self.beta,
            lambda,
            self.objective.strong_mu(),
            self.objective.lipschitz(),
        )
    }

    /// `tau2` of the envelope, used to scale the segment start time.
    fn tau2_scale(&self) -> f64 {
        let l = self.objective.lipschitz().max(f64::MIN_POSITIVE);
        let r = (self.alpha + 3.0) / (self.alpha + 2.0);
        -r * self.beta + (r * r * self.beta * self.beta + (self.alpha + 3.0) / l).sqrt()
    }
}

/// Restart criterion attached to a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RestartKind {
    /// `1/2 d/dt |v|^2 + lambda (a/t) |v|^2 <= 0`
    ExtendedSpeed { lambda: f64 },
    /// `d/dt f(x(t)) >= 0`
    FunctionValue,
    /// never restart
    None,
}

#[derive(Debug, Clone, Copy)]
pub struct RestartPolicy {
    pub kind: RestartKind,
    /// relative time tolerance of the event bisection
    pub event_tol: f64,
    /// events are ignored before this local time; default `10 t0`
    pub min_event_time: Option<f64>,
}

impl RestartPolicy {
    pub fn extended_speed(lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidArgument(format!(
                "lambda must lie in [0,1], got {lambda}"
            )));
        }
        Ok(RestartPolicy {
            kind: RestartKind::ExtendedSpeed { lambda },
            event_tol: 1e-9,
            min_event_time: None,
        })
    }

    pub fn function_value() -> Self {
        RestartPolicy {
            kind: RestartKind::FunctionValue,
            event_tol: 1e-9,
            min_event_time: None,
        }
    }

    pub fn none() -> Self {
        RestartPolicy {
            kind: RestartKind::None,
            event_tol: 1e-9,
            min_event_time: None,
        }
    }

    pub fn with_event_tol(mut self, tol: f64) -> Self {
        self.event_tol = tol;
        self
    }
}

/// Acceleration of the system at `(t, x, v)`.
pub fn rhs(spec: &OdeSpec, t: f64, x: &DVector<f64>, v: &DVector<f64>) -> Result<DVector<f64>> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("rhs needs t > 0, got {t}")));
    }
    let grad = spec.objective.gradient(x);
    let mut acc = v * (-spec.alpha / t);
    if spec.beta > 0.0 {
        let hv = spec.objective.hvp_or_fd(x, v, spec.allow_fd_hvp)?;
        acc -= hv * spec.beta;
    }
    match spec.variant {
        OdeVariant::DinAvd => acc -= &grad,
        OdeVariant::HrDinAvd { gamma, r_coeff } => acc -= grad * (gamma + r_coeff / t),
    }
    Ok(acc)
}

/// The extended-speed criterion functional
/// `<v, x''> + lambda (a/t) |v|^2`; the restart fires when it drops to 0.
pub fn speed_functional(
    spec: &OdeSpec,
    lambda: f64,
    t: f64,
    x: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<f64> {
    let acc = rhs(spec, t, x, v)?;
    Ok(v.dot(&acc) + lambda * spec.alpha / t * v.norm_squared())
}

/// `d/dt f(x(t)) = <grad f(x), v>`; the function-value restart fires when
/// it reaches 0 from below.
pub fn fv_functional(spec: &OdeSpec, x: &DVector<f64>, v: &DVector<f64>) -> f64 {
    spec.objective.gradient(x).dot(v)
}

/// Why a segment ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentEnd {
    SpeedRestart,
    FvRestart,
    Horizon,
    Converged,
}

/// One recorded point along a segment (local time).
#[derive(Debug, Clone)]
pub struct Sample {
    pub t: f64,
    pub x: DVector<f64>,
    pub v: DVector<f64>,
    pub fval: f64,
}

impl Sample {
    pub fn speed_squared(&self) -> f64 {
        self.v.norm_squared()
    }
}

/// One flight between restarts, in local (per-segment) time.
#[derive(Debug, Clone)]
pub struct TrajectorySegment {
    pub start_state: DVector<f64>,
    pub t0: f64,
    pub samples: Vec<Sample>,
    pub end: SegmentEnd,
    pub end_time: f64,
    pub end_x: DVector<f64>,
    pub end_v: DVector<f64>,
}

/// Numeric knobs for segment integration.
#[derive(Debug, Clone, Copy)]
pub struct SegmentSettings {
    /// local start time; the lazy solution is expanded from 0 to here
    pub t0: f64,
    pub tolerances: Tolerances,
    /// absolute gradient-norm stopping threshold
    pub grad_stop: f64,
    /// record every k-th accepted step
    pub output_stride: usize,
    pub max_steps: u64,
}

impl SegmentSettings {
    /// Defaults: `t0 = 1e-3 tau2`, tolerances 1e-9, gradient stop relative
    /// to the gradient at the run's start state.
    pub fn for_spec(spec: &OdeSpec, z0: &DVector<f64>) -> Self {
        let g0 = spec.objective.gradient(z0).norm();
        SegmentSettings {
            t0: 1e-3 * spec.tau2_scale(),
            tolerances: Tolerances::default(),
            grad_stop: 1e-12 * g0.max(1.0),
            output_stride: 1,
            max_steps: 20_000_000,
        }
    }

    pub fn with_tolerances(mut self, atol: f64, rtol: f64) -> Self {
        self.tolerances = Tolerances { atol, rtol };
        self
    }
}

/// Integrates one segment from `z` until the policy's event, the local
/// `horizon`, or gradient convergence.
///
/// The initial velocity is the leading term of the lazy expansion,
/// `v(t0) = -t0 grad f(z) / (alpha + 1)`.
pub fn integrate_segment(
    spec: &OdeSpec,
    z: &DVector<f64>,
    policy: &RestartPolicy,
    horizon: f64,
    settings: &SegmentSettings,
) -> Result<TrajectorySegment> {
    ensure_finite("segment start state", z)?;
    let t0 = settings.t0;
    if !(horizon > t0) {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} must exceed the segment start time {t0}"
        )));
    }
    let n = z.len();
    let grad0 = spec.objective.gradient(z);

    // stationary start: nothing to integrate
    if grad0.norm() <= settings.grad_stop {
        return Ok(TrajectorySegment {
            start_state: z.clone(),
            t0,
            samples: vec![Sample {
                t: t0,
                x: z.clone(),
                v: DVector::zeros(n),
                fval: spec.objective.value(z),
            }],
            end: SegmentEnd::Converged,
            end_time: t0,
            end_x: z.clone(),
            end_v: DVector::zeros(n),
        });
    }

    let v0 = &grad0 * (-t0 / (spec.alpha + 1.0));
    let mut y0 = DVector::zeros(2 * n);
    y0.rows_mut(0, n).copy_from(z);
    y0.rows_mut(n, n).copy_from(&v0);

    // rhs failures inside the stepper closure surface through this cell
    let rhs_error: RefCell<Option<Error>> = RefCell::new(None);
    let f = |t: f64, y: &DVector<f64>| -> DVector<f64> {
        let x = y.rows(0, n).into_owned();
        let v = y.rows(n, n).into_owned();
        let mut dy = DVector::zeros(2 * n);
        dy.rows_mut(0, n).copy_from(&v);
        match rhs(spec, t, &x, &v) {
            Ok(acc) => dy.rows_mut(n, n).copy_from(&acc),
            Err(e) => {
                rhs_error.borrow_mut().get_or_insert(e);
                dy.rows_mut(n, n).fill(f64::NAN);
            }
        }
        dy
    };
    let mut solver = Dopri5::new(f, t0, y0, horizon, settings.tolerances);

    let event_guard = policy.min_event_time.unwrap_or(10.0 * t0);
    let event_value_at = |t: f64, y: &DVector<f64>| -> Result<f64> {
        let x = y.rows(0, n).into_owned();
        let v = y.rows(n, n).into_owned();
        match policy.kind {
            RestartKind::ExtendedSpeed { lambda } => speed_functional(spec, lambda, t, &x, &v),
            RestartKind::FunctionValue => Ok(-fv_functional(spec, &x, &v)),
            RestartKind::None => Ok(f64::INFINITY),
        }
    };

    let mut samples = vec![Sample {
        t: t0,
        x: z.clone(),
        v: v0,
        fval: spec.objective.value(z),
    }];
    let mut prev_event: Option<f64> = None;
    let mut steps: u64 = 0;

    loop {
        let step = match solver.step() {
            Ok(s) => s,
            Err(e) => return Err(rhs_error.borrow_mut().take().unwrap_or(e)),
        };
        if let Some(e) = rhs_error.borrow_mut().take() {
            return Err(e);
        }
        steps += 1;
        if steps > settings.max_steps {
            return Err(Error::IntegratorFailure {
                t: step.t,
                detail: format!("exceeded the step budget ({})", settings.max_steps),
            });
        }

        let t_new = step.t;
        let y_new = solver.y().clone();
        let x_new = y_new.rows(0, n).into_owned();
        let v_new = y_new.rows(n, n).into_owned();
        ensure_finite("integrated state", &x_new)?;

        // event detection on accepted steps past the guard
        if !matches!(policy.kind, RestartKind::None) && t_new >= event_guard {
            let e_new = event_value_at(t_new, &y_new)?;
            if let Some(e_prev) = prev_event {
                if e_prev > 0.0 && e_new <= 0.0 {
                    let (t_ev, x_ev, v_ev) = locate_event(
                        &event_value_at,
                        &step.dense,
                        step.t_prev,
                        t_new,
                        policy.event_tol,
                        n,
                    )?;
                    let end = match policy.kind {
                        RestartKind::ExtendedSpeed { .. } => SegmentEnd::SpeedRestart,
                        RestartKind::FunctionValue => SegmentEnd::FvRestart,
                        RestartKind::None => unreachable!(),
                    };
                    samples.push(Sample {
                        t: t_ev,
                        x: x_ev.clone(),
                        v: v_ev.clone(),
                        fval: spec.objective.value(&x_ev),
                    });
                    return Ok(TrajectorySegment {
                        start_state: z.clone(),
                        t0,
                        samples,
                        end,
                        end_time: t_ev,
                        end_x: x_ev,
                        end_v: v_ev,
                    });
                }
            }
            prev_event = Some(e_new);
        }

        if steps % settings.output_stride as u64 == 0 {
            samples.push(Sample {
                t: t_new,
                x: x_new.clone(),
                v: v_new.clone(),
                fval: spec.objective.value(&x_new),
            });
        }

        // gradient convergence
        if spec.objective.gradient(&x_new).norm() <= settings.grad_stop {
            return Ok(TrajectorySegment {
                start_state: z.clone(),
                t0,
                samples,
                end: SegmentEnd::Converged,
                end_time: t_new,
                end_x: x_new,
                end_v: v_new,
            });
        }

        if solver.done() {
            return Ok(TrajectorySegment {
                start_state: z.clone(),
                t0,
                samples,
                end: SegmentEnd::Horizon,
                end_time: t_new,
                end_x: x_new,
                end_v: v_new,
            });
        }
    }
}

/// Bisection for the event time inside a bracketing accepted step, on the
/// dense-output interpolant.
fn locate_event(
    event_value_at: &dyn Fn(f64, &DVector<f64>) -> Result<f64>,
    dense: &DenseOutput,
    mut lo: f64,
    mut hi: f64,
    event_tol: f64,
    n: usize,
) -> Result<(f64, DVector<f64>, DVector<f64>)> {
    for _ in 0..60 {
        if hi - lo <= event_tol * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let y_mid = dense.eval(mid);
        if event_value_at(mid, &y_mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t_ev = hi;
    let y_ev = dense.eval(t_ev);
    Ok((t_ev, y_ev.rows(0, n).into_owned(), y_ev.rows(n, n).into_owned()))
}

/// A restarted run: segments in order, with the global restart times.
#[derive(Debug, Clone)]
pub struct RestartedTrajectory {
    pub segments: Vec<TrajectorySegment>,
    /// global offset at which each segment starts (first entry 0)
    pub segment_offsets: Vec<f64>,
    /// global times of the restart events, one per completed restart
    pub restart_times: Vec<f64>,
    pub policy: RestartPolicy,
}

impl RestartedTrajectory {
    /// Global-time view of all samples: `(t, fval, speed^2, segment index)`.
    pub fn flat_samples(&self) -> Vec<(f64, f64, f64, usize)> {
        let mut out = Vec::new();
        for (k, seg) in self.segments.iter().enumerate() {
            let off = self.segment_offsets[k];
            for s in &seg.samples {
                out.push((off + s.t, s.fval, s.speed_squared(), k));
            }
        }
        out
    }

    /// Objective values at the start of each segment (`z_0, z_1, ...`),
    /// plus the final state of the last segment.
    pub fn junction_values(&self, objective: &Objective) -> Vec<f64> {
        let mut vals: Vec<f64> = self
            .segments
            .iter()
            .map(|s| objective.value(&s.start_state))
            .collect();
        if let Some(last) = self.segments.last() {
            vals.push(objective.value(&last.end_x));
        }
        vals
    }

    /// Per-restart gap ratios `(f(z_{k+1}) - f*) / (f(z_k) - f*)`.
    pub fn contraction_ratios(&self, objective: &Objective, fstar: f64) -> Vec<f64> {
        let vals = self.junction_values(objective);
        vals.windows(2)
            .map(|w| (w[1] - fstar) / (w[0] - fstar))
            .collect()
    }
}

/// Runs the restart loop from `z0` until the global `horizon` or
/// convergence. Segment `k+1` starts from the event state of segment `k`.
pub fn restarted_trajectory(
    spec: &OdeSpec,
    z0: &DVector<f64>,
    policy: &RestartPolicy,
    horizon: f64,
    settings: &SegmentSettings,
) -> Result<RestartedTrajectory> {
    ensure_finite("initial state", z0)?;
    let mut segments = Vec::new();
    let mut segment_offsets = Vec::new();
    let mut restart_times = Vec::new();
    let mut z = z0.clone();
    let mut offset = 0.0;

    loop {
        let remaining = horizon - offset;
        if remaining <= settings.t0 * (1.0 + 1e-9) {
            break;
        }
        let seg = integrate_segment(spec, &z, policy, remaining, settings).map_err(|e| match e {
            Error::IntegratorFailure { t, detail } => Error::IntegratorFailure {
                t,
                detail: format!("segment {}: {detail}", segments.len()),
            },
            other => other,
        })?;
        let end = seg.end;
        let end_time = seg.end_time;
        z = seg.end_x.clone();
        segment_offsets.push(offset);
        segments.push(seg);
        match end {
            SegmentEnd::SpeedRestart | SegmentEnd::FvRestart => {
                offset += end_time;
                restart_times.push(offset);
            }
            SegmentEnd::Horizon | SegmentEnd::Converged => break,
        }
    }

    Ok(RestartedTrajectory {
        segments,
        segment_offsets,
        restart_times,
        policy: *policy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::make_illposed_quadratic;
    use crate::theory::{tau3, Tau3};
    use approx::assert_abs_diff_eq;

    fn scalar_quadratic() -> Arc<Objective> {
        Objective::new(1, |x| 0.5 * x[0] * x[0], |x| x.clone(), 1.0)
            .with_hvp(|_, v| v.clone())
            .with_strong_mu(1.0)
            .with_reference_min(0.0)
            .into_shared()
    }

    #[test]
    fn rhs_hand_value() {
        // f = x^2/2 in 1-d, x = 1, v = 0, t = 1, alpha = 3, beta = 1: a = -1
        let spec = OdeSpec::new(scalar_quadratic(), 3.0, 1.0).unwrap();
        let a = rhs(
            &spec,
            1.0,
            &DVector::from_vec(vec![1.0]),
            &DVector::from_vec(vec![0.0]),
        )
        .unwrap();
        assert_abs_diff_eq!(a[0], -1.0, epsilon = 1e-15);
    }

    #[test]
    fn rhs_beta_zero_drops_hessian_term() {
        let spec = OdeSpec::new(scalar_quadratic(), 3.0, 0.0).unwrap();
        let x = DVector::from_vec(vec![2.0]);
        let v = DVector::from_vec(vec![0.5]);
        let a = rhs(&spec, 2.0, &x, &v).unwrap();
        assert_abs_diff_eq!(a[0], -3.0 / 2.0 * 0.5 - 2.0, epsilon = 1e-15);
    }

    #[test]
    fn hr_variant_matches_din_when_terms_vanish() {
        // gamma = 1, r = 0, beta = 0 reduces exactly to the plain equation
        let obj = scalar_quadratic();
        let din = OdeSpec::new(obj.clone(), 3.0, 0.0).unwrap();
        let hr = OdeSpec::new(obj, 3.0, 0.0)
            .unwrap()
            .high_resolution(1.0, Some(0.0))
            .unwrap();
        let mut rng = crate::Rng::new(8);
        for _ in 0..20 {
            let x = rng.normal_vector(1);
            let v = rng.normal_vector(1);
            let t = rng.uniform_in(0.1, 5.0);
            let a = rhs(&din, t, &x, &v).unwrap();
            let b = rhs(&hr, t, &x, &v).unwrap();
            assert!((a[0] - b[0]).abs() <= 1e-14 * a[0].abs().max(1.0));
        }
    }

    #[test]
    fn functionals_vanish_at_zero_velocity() {
        let spec = OdeSpec::new(scalar_quadratic(), 3.0, 1.0).unwrap();
        let x = DVector::from_vec(vec![1.5]);
        let v = DVector::zeros(1);
        assert_eq!(speed_functional(&spec, 0.3, 1.0, &x, &v).unwrap(), 0.0);
        assert_eq!(fv_functional(&spec, &x, &v), 0.0);
    }

    #[test]
    fn fv_functional_negative_along_descent() {
        let spec = OdeSpec::new(scalar_quadratic(), 3.0, 1.0).unwrap();
        let x = DVector::from_vec(vec![2.0]);
        let v = -spec.objective.gradient(&x);
        assert!(fv_functional(&spec, &x, &v) < 0.0);
    }

    #[test]
    fn segment_from_minimizer_converges_immediately() {
        let spec = OdeSpec::new(scalar_quadratic(), 3.0, 0.0).unwrap();
        let z = DVector::zeros(1);
        let settings = SegmentSettings::for_spec(&spec, &z);
        let seg = integrate_segment(&spec, &z, &RestartPolicy::none(), 10.0, &settings).unwrap();
        assert_eq!(seg.end, SegmentEnd::Converged);
        assert_eq!(seg.samples.len(), 1);
    }

    #[test]
    fn scalar_speed_event_after_tau3_and_values_decrease() {
        // 1-d f = x^2/2, alpha = 3, beta = 0, lambda = 0: tau3 = sqrt(6/5)
        let spec = OdeSpec::new(scalar_quadratic(), 3.0, 0.0).unwrap();
        let z = DVector::from_vec(vec![1.0]);
        let settings = SegmentSettings::for_spec(&spec, &z);
        let policy = RestartPolicy::extended_speed(0.0).unwrap();
        let seg = integrate_segment(&spec, &z, &policy, 50.0, &settings).unwrap();
        assert_eq!(seg.end, SegmentEnd::SpeedRestart);

        let p = spec.theory_params(0.0).unwrap();
        let t3 = match tau3(&p) {
            Tau3::Root(t) => t,
            _ => unreachable!(),
        };
        assert!(
            seg.end_time >= t3 - 10.0 * policy.event_tol,
            "event at {} before tau3 = {}",
            seg.end_time,
            t3
        );

        // function values nonincreasing along the segment (within slack)
        let scale = seg.samples[0].fval.abs().max(1.0);
        for w in seg.samples.windows(2) {
            assert!(w[1].fval <= w[0].fval + 1e-9 * scale);
        }
    }

    #[test]
    fn policy_none_runs_to_horizon() {
        let spec = OdeSpec::new(scalar_quadratic(), 3.0, 1.0).unwrap();
        let z = DVector::from_vec(vec![1.0]);
        let settings = SegmentSettings::for_spec(&spec, &z);
        let run = restarted_trajectory(&spec, &z, &RestartPolicy::none(), 5.0, &settings).unwrap();
        assert_eq!(run.segments.len(), 1);
        assert!(run.restart_times.is_empty());
        assert_eq!(run.segments[0].end, SegmentEnd::Horizon);
    }

    #[test]
    fn restart_times_increase_and_junctions_match() {
        let obj = make_illposed_quadratic(10.0).unwrap().into_shared();
        let spec = OdeSpec::new(obj, 3.0, 1.0).unwrap();
        let z0 = DVector::from_vec(vec![1.0, 1.0, 1.0]);
        let settings = SegmentSettings::for_spec(&spec, &z0);
        let policy = RestartPolicy::extended_speed(0.0).unwrap();
        let run = restarted_trajectory(&spec, &z0, &policy, 5.0, &settings).unwrap();
        assert!(run.restart_times.len() >= 2);
        for w in run.restart_times.windows(2) {
            assert!(w[0] < w[1]);
        }
        for k in 1..run.segments.len() {
            let prev_end = &run.segments[k - 1].end_x;
            let next_start = &run.segments[k].start_state;
            assert_eq!(prev_end, next_start);
        }
    }

    #[test]
    fn missing_hvp_with_fd_disabled_errors() {
        let obj = Objective::new(1, |x| 0.5 * x[0] * x[0], |x| x.clone(), 1.0).into_shared();
        let mut spec = OdeSpec::new(obj, 3.0, 1.0).unwrap();
        spec.allow_fd_hvp = false;
        let e = rhs(
            &spec,
            1.0,
            &DVector::from_vec(vec![1.0]),
            &DVector::from_vec(vec![1.0]),
        );
        assert!(matches!(e, Err(Error::MissingHvp)));
    }
}
