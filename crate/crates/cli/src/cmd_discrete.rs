//! `discrete`: the inertial gradient algorithm on the benchmark problems.

use std::path::PathBuf;

use clap::Args;
use inertial_restart::analysis::reference_min;
use inertial_restart::discrete::AlgoConfig;
use inertial_restart::problems::{
    make_illposed_quadratic, make_logsumexp, make_random_quadratic,
};
use inertial_restart::report::RunHeader;
use inertial_restart::{DVector, Rng};

use crate::config::{out_dir, parse_lambda_list, resolve, resolve_opt, FileCfg};
use crate::suite::Suite;
use crate::Failure;

#[derive(Args)]
pub struct DiscreteArgs {
    /// illposed | randquad | logsumexp
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    rho: Option<f64>,
    /// dimension (randquad, logsumexp)
    #[arg(long)]
    n: Option<usize>,
    /// number of log-sum-exp terms
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    eig_low: Option<f64>,
    #[arg(long)]
    eig_high: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// defaults to 1/sqrt(L)
    #[arg(long)]
    beta: Option<f64>,
    /// step size; defaults to 1/sqrt(L)
    #[arg(long = "h")]
    step: Option<f64>,
    #[arg(long = "N")]
    iterations: Option<usize>,
    #[arg(long)]
    lambdas: Option<String>,
    /// extended | fv | none
    #[arg(long)]
    policy: Option<String>,
    /// add a warm-started companion run per lambda
    #[arg(long)]
    warm: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// iteration budget for the run-based reference minimum
    /// (defaults to 10 N)
    #[arg(long)]
    ref_budget: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: DiscreteArgs) -> Result<i32, Failure> {
    let mut file = FileCfg::load(args.config.as_deref())?;
    let problem = resolve(args.problem, file.take_string("problem"), "illposed".into());
    let rho_default = if problem == "logsumexp" { 10.0 } else { 10.0 };
    let rho = resolve(args.rho, file.take("rho")?, rho_default);
    let n_default = if problem == "logsumexp" { 50 } else { 500 };
    let n = resolve(args.n, file.take("n")?, n_default);
    let m = resolve(args.m, file.take("m")?, 20);
    let eig_low = resolve(args.eig_low, file.take("eig_low")?, 1e-6);
    let eig_high = resolve(args.eig_high, file.take("eig_high")?, 1.0);
    let alpha = resolve(args.alpha, file.take("alpha")?, 3.0);
    let beta = resolve_opt(args.beta, file.take("beta")?);
    let step = resolve_opt(args.step, file.take("h")?);
    let iterations = resolve(args.iterations, file.take("N")?, 3000);
    let lambdas_raw = resolve(args.lambdas, file.take_string("lambdas"), "0,1/4a,1/2a".into());
    let policy = resolve(args.policy, file.take_string("policy"), "extended".into());
    let warm = args.warm || file.take::<bool>("warm")?.unwrap_or(false);
    let seed = resolve(args.seed, file.take("seed")?, 7);
    let ref_budget = resolve(args.ref_budget, file.take("ref_budget")?, 10 * iterations);
    let dir = out_dir(args.out_dir, file.take_string("out_dir"));
    file.finish()?;

    let lambdas = parse_lambda_list(&lambdas_raw, alpha)?;
    let mut rng = Rng::new(seed);

    // problem + start point; the paper's convention: all-ones for the
    // ill-posed example, seeded Gaussian otherwise
    let (mut objective, x0) = match problem.as_str() {
        "illposed" => (make_illposed_quadratic(rho)?, DVector::from_element(3, 1.0)),
        "randquad" => {
            let obj = make_random_quadratic(n, eig_low, eig_high, &mut rng)?;
            let x0 = rng.normal_vector(n);
            (obj, x0)
        }
        "logsumexp" => {
            let obj = make_logsumexp(n, m, rho, &mut rng)?;
            let x0 = rng.normal_vector(n);
            (obj, x0)
        }
        other => return Err(Failure::Usage(format!("unknown problem '{other}'"))),
    };

    if objective.reference_min().is_none() {
        let refmin = reference_min(&objective, &x0, ref_budget)?;
        if refmin.unbounded_suspect {
            eprintln!(
                "warning: reference run never flattened; the objective may be unbounded below \
                 (reference = best observed value {})",
                refmin.value
            );
        }
        println!("reference minimum (run-based): {}", refmin.value);
        objective = objective.with_reference_min(refmin.value);
    }

    let mut base_cfg = AlgoConfig::for_objective(&objective).with_iterations(iterations);
    base_cfg.alpha = alpha;
    if let Some(b) = beta {
        base_cfg.beta = b;
    }
    if let Some(h) = step {
        base_cfg.step = h;
    }

    let header_base = {
        let problem = problem.clone();
        let policy = policy.clone();
        let lambdas_raw = lambdas_raw.clone();
        let (h, b) = (base_cfg.step, base_cfg.beta);
        move |run_label: &str| {
            RunHeader::new()
                .kv("subcommand", "discrete")
                .kv("problem", &problem)
                .kv("run", run_label)
                .kv("rho", rho)
                .kv("n", n)
                .kv("m", m)
                .kv("alpha", alpha)
                .kv("beta", b)
                .kv("h", h)
                .kv("N", iterations)
                .kv("lambdas", &lambdas_raw)
                .kv("policy", &policy)
                .kv("warm", warm)
                .kv("seed", seed)
                .with_timestamp_now()
        }
    };

    let suite = Suite {
        problem,
        objective: objective.into_shared(),
        x0,
        base_cfg,
        lambdas,
        policy,
        warm,
    };
    suite.run(&dir, &header_base)?;
    println!("outputs in {}", dir.display());
    Ok(0)
}
