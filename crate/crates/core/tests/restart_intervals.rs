//! Restart-interval invariants of the continuous scheme: every interval
//! sits between the certified lower bound and (when available) the upper
//! bound, the first restart time grows with lambda up to the
//! function-value time, and the envelope across restarts is log-linear.

use inertial_restart::dynamics::{
    integrate_segment, restarted_trajectory, OdeSpec, RestartPolicy, SegmentSettings,
};
use inertial_restart::problems::make_illposed_quadratic;
use inertial_restart::theory::{t_upper_best, tau3, ParamTuple};
use inertial_restart::DVector;

fn illposed_spec(beta: f64) -> (OdeSpec, DVector<f64>) {
    let obj = make_illposed_quadratic(10.0).unwrap().into_shared();
    let spec = OdeSpec::new(obj, 3.0, beta).unwrap();
    let z0 = DVector::from_element(3, 1.0);
    (spec, z0)
}

#[test]
fn intervals_bracketed_by_tau3_and_t_upper() {
    let (spec, z0) = illposed_spec(1.0);
    let settings = SegmentSettings::for_spec(&spec, &z0);
    for &lam in &[0.0, 1.0 / 6.0] {
        let policy = RestartPolicy::extended_speed(lam).unwrap();
        let run = restarted_trajectory(&spec, &z0, &policy, 30.0, &settings).unwrap();
        assert!(run.restart_times.len() >= 5, "want several restarts");

        let params = ParamTuple::new(3.0, 1.0, lam, Some(1.0), 100.0).unwrap();
        let t3 = tau3(&params).expect_root();
        let (_, bound) = t_upper_best(&params).unwrap();
        let eps = 10.0 * policy.event_tol;

        let mut prev = 0.0;
        for &t in &run.restart_times {
            let interval = t - prev;
            assert!(
                interval >= t3 - eps,
                "interval {interval} below tau3 {t3} at lambda {lam}"
            );
            if let Some(ln_bound) = bound.ln() {
                assert!(
                    interval.ln() <= ln_bound + eps,
                    "interval {interval} above the upper bound at lambda {lam}"
                );
            }
            prev = t;
        }
    }
}

#[test]
fn first_restart_monotone_in_lambda_up_to_fv() {
    let (spec, z0) = illposed_spec(1.0);
    let settings = SegmentSettings::for_spec(&spec, &z0);
    let mut times = Vec::new();
    for &lam in &[0.0, 1.0 / 12.0, 1.0 / 6.0, 1.0] {
        let policy = RestartPolicy::extended_speed(lam).unwrap();
        let seg = integrate_segment(&spec, &z0, &policy, 100.0, &settings).unwrap();
        times.push(seg.end_time);
    }
    let fv = integrate_segment(&spec, &z0, &RestartPolicy::function_value(), 100.0, &settings)
        .unwrap()
        .end_time;
    for w in times.windows(2) {
        assert!(w[0] <= w[1] + 1e-8, "speed times not monotone: {times:?}");
    }
    assert!(
        *times.last().unwrap() <= fv + 1e-8,
        "lambda=1 speed time {} beyond fv time {fv}",
        times.last().unwrap()
    );
}

#[test]
fn function_values_nonincreasing_within_segments() {
    let (spec, z0) = illposed_spec(1.0);
    let settings = SegmentSettings::for_spec(&spec, &z0);
    let policy = RestartPolicy::extended_speed(1.0 / 6.0).unwrap();
    let run = restarted_trajectory(&spec, &z0, &policy, 20.0, &settings).unwrap();
    let scale = spec.objective.value(&z0);
    for seg in &run.segments {
        for w in seg.samples.windows(2) {
            assert!(
                w[1].fval <= w[0].fval + 1e-9 * scale,
                "fval rose inside a segment at t = {}",
                w[1].t
            );
        }
    }
}
