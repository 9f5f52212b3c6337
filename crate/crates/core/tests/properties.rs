//! Property tests over randomized parameters.

use inertial_restart::analysis::fit_linear_rate;
use inertial_restart::discrete::{restart_criterion, AlgoConfig};
use inertial_restart::objective::{max_pl_violation, Objective};
use inertial_restart::problems::{make_illposed_quadratic, make_random_quadratic};
use inertial_restart::theory::{
    g_func, h_func, q_factor, tau1, tau2, tau3, ParamTuple, Tau3,
};
use inertial_restart::Rng;
use proptest::prelude::*;

fn arb_params() -> impl Strategy<Value = ParamTuple> {
    (
        0.5f64..8.0,          // alpha
        0.0f64..2.0,          // beta
        0.0f64..1.0,          // lambda scale within [0, 1/(2 alpha)]
        1e-3f64..0.5,         // mu / L
        0.05f64..20.0,        // L
    )
        .prop_map(|(alpha, beta, lam_scale, ratio, l)| {
            let lambda = lam_scale / (2.0 * alpha);
            ParamTuple::new(alpha, beta, lambda, Some(ratio * l), l).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn envelope_anchors_and_ordering(p in arb_params()) {
        prop_assert!((h_func(tau2(&p), &p) - 0.5).abs() <= 1e-12);
        prop_assert!(h_func(tau1(&p), &p).abs() <= 1e-12);
        let t3 = match tau3(&p) {
            Tau3::Root(t) => t,
            Tau3::NoGuaranteedLowerBound => {
                return Err(TestCaseError::fail("no root in the guaranteed range"))
            }
        };
        prop_assert!(0.0 < t3 && t3 < tau2(&p) && tau2(&p) < tau1(&p));
        // G changes sign across tau3
        prop_assert!(g_func(t3 * 0.999, &p).unwrap() > 0.0);
        prop_assert!(g_func((t3 * 1.001).min(tau2(&p)), &p).unwrap() < 0.0);
    }

    #[test]
    fn contraction_factor_within_unit_interval(p in arb_params()) {
        let q = q_factor(&p).unwrap();
        prop_assert!(0.0 < q && q < 1.0, "Q = {q} for {p:?}");
    }

    #[test]
    fn restart_criterion_monotone_in_lambda(
        delta_next in 0.0f64..2.0,
        delta in 0.01f64..2.0,
        j in 1usize..40,
        alpha in 1.0f64..6.0,
    ) {
        // if the criterion fires for some lambda it fires for every
        // smaller lambda: the threshold factor decreases in lambda
        let obj = make_illposed_quadratic(10.0).unwrap();
        let mut cfg = AlgoConfig::for_objective(&obj);
        cfg.alpha = alpha;
        let lambdas = [0.0, 1.0 / (4.0 * alpha), 1.0 / (2.0 * alpha)];
        let fired: Vec<bool> = lambdas
            .iter()
            .map(|&l| {
                cfg.lambda = l;
                restart_criterion(delta_next, delta, j, &cfg)
            })
            .collect();
        for w in fired.windows(2) {
            prop_assert!(w[0] || !w[1], "fired pattern not monotone: {fired:?}");
        }
    }

    #[test]
    fn exact_rate_recovered(a in 0.01f64..100.0, b in 1e-4f64..0.5) {
        let series: Vec<(f64, f64)> = (0..=120)
            .map(|k| (k as f64, a * (-b * k as f64).exp()))
            .collect();
        let fit = fit_linear_rate(&series, 1e-300, 0.0).unwrap();
        prop_assert!((fit.a_coef - a).abs() <= 1e-8 * a);
        prop_assert!((fit.b_coef - b).abs() <= 1e-8 * b.max(1e-8));
    }

    #[test]
    fn integer_vector_arithmetic_exact(
        xs in proptest::collection::vec(-100i32..100, 1..20),
        ys in proptest::collection::vec(-100i32..100, 1..20),
    ) {
        let n = xs.len().min(ys.len());
        let x = inertial_restart::DVector::from_iterator(n, xs[..n].iter().map(|&v| v as f64));
        let y = inertial_restart::DVector::from_iterator(n, ys[..n].iter().map(|&v| v as f64));
        let sum = &x + &y;
        let dot = x.dot(&y);
        let expect_dot: i64 = xs[..n].iter().zip(&ys[..n]).map(|(&a, &b)| a as i64 * b as i64).sum();
        prop_assert_eq!(dot, expect_dot as f64);
        for i in 0..n {
            prop_assert_eq!(sum[i], (xs[i] + ys[i]) as f64);
        }
    }
}

#[test]
fn pl_inequality_on_strongly_convex_instances() {
    let mut rng = Rng::new(321);
    let instances: Vec<Objective> = vec![
        make_illposed_quadratic(10.0).unwrap(),
        make_random_quadratic(30, 0.05, 1.5, &mut rng).unwrap(),
    ];
    for obj in &instances {
        let viol = max_pl_violation(obj, 25, &mut rng).unwrap();
        assert!(viol <= 0.0, "PL violated by {viol}");
    }
}
