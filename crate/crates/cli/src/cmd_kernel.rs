//! `kernel`: sketched kernel logistic / multinomial regression runs.

use std::path::PathBuf;

use clap::Args;
use inertial_restart::analysis::reference_min;
use inertial_restart::discrete::AlgoConfig;
use inertial_restart::problems::{
    generate_kernel_data, make_kernel_logistic, make_kernel_multinomial,
};
use inertial_restart::report::RunHeader;
use inertial_restart::{DVector, Rng};

use crate::config::{out_dir, parse_lambda_list, resolve, resolve_opt, FileCfg};
use crate::suite::Suite;
use crate::Failure;

#[derive(Args)]
pub struct KernelArgs {
    /// logistic | multinomial
    #[arg(long)]
    task: Option<String>,
    /// number of samples
    #[arg(long)]
    n: Option<usize>,
    /// feature dimension
    #[arg(long)]
    d: Option<usize>,
    /// sketch size
    #[arg(long)]
    m: Option<usize>,
    /// number of classes (multinomial)
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long = "h")]
    step: Option<f64>,
    #[arg(long = "N")]
    iterations: Option<usize>,
    #[arg(long)]
    lambdas: Option<String>,
    /// extended | fv | none
    #[arg(long)]
    policy: Option<String>,
    #[arg(long)]
    warm: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    ref_budget: Option<usize>,
    /// export the generated dataset as CSV here
    #[arg(long)]
    export_data: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: KernelArgs) -> Result<i32, Failure> {
    let mut file = FileCfg::load(args.config.as_deref())?;
    let task = resolve(args.task, file.take_string("task"), "logistic".into());
    let n = resolve(args.n, file.take("n")?, 1 << 10);
    let d = resolve(args.d, file.take("d")?, 50);
    let m = resolve(args.m, file.take("m")?, 1 << 7);
    let q = resolve(args.q, file.take("q")?, 3);
    let theta = resolve(args.theta, file.take("theta")?, 1e-4);
    let alpha = resolve(args.alpha, file.take("alpha")?, 3.0);
    let beta = resolve_opt(args.beta, file.take("beta")?);
    let step = resolve_opt(args.step, file.take("h")?);
    let iterations = resolve(args.iterations, file.take("N")?, 2000);
    let lambdas_raw = resolve(args.lambdas, file.take_string("lambdas"), "0,1/4a,1/2a".into());
    let policy = resolve(args.policy, file.take_string("policy"), "extended".into());
    let warm = args.warm || file.take::<bool>("warm")?.unwrap_or(false);
    let seed = resolve(args.seed, file.take("seed")?, 7);
    let ref_budget = resolve(args.ref_budget, file.take("ref_budget")?, 10 * iterations);
    let dir = out_dir(args.out_dir, file.take_string("out_dir"));
    file.finish()?;

    let lambdas = parse_lambda_list(&lambdas_raw, alpha)?;
    let mut rng = Rng::new(seed);

    let (label_q, spec) = match task.as_str() {
        "logistic" => (2, generate_kernel_data(n, d, 2, m, theta, &mut rng)?),
        "multinomial" => (q, generate_kernel_data(n, d, q, m, theta, &mut rng)?),
        other => return Err(Failure::Usage(format!("unknown task '{other}'"))),
    };
    if let Some(path) = &args.export_data {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(inertial_restart::Error::from)?;
        }
        std::fs::write(path, spec.dataset.to_csv()).map_err(inertial_restart::Error::from)?;
        println!("dataset exported to {}", path.display());
    }

    let mut objective = match task.as_str() {
        "logistic" => make_kernel_logistic(&spec)?,
        _ => make_kernel_multinomial(&spec, label_q)?,
    };
    let x0 = DVector::zeros(objective.dim());

    let refmin = reference_min(&objective, &x0, ref_budget)?;
    if refmin.unbounded_suspect {
        eprintln!("warning: reference run never flattened (reference = {})", refmin.value);
    }
    println!("reference minimum (run-based): {}", refmin.value);
    objective = objective.with_reference_min(refmin.value);

    let mut base_cfg = AlgoConfig::for_objective(&objective).with_iterations(iterations);
    base_cfg.alpha = alpha;
    if let Some(b) = beta {
        base_cfg.beta = b;
    }
    if let Some(h) = step {
        base_cfg.step = h;
    }

    let problem = format!("kernel_{task}");
    let header_base = {
        let problem = problem.clone();
        let policy = policy.clone();
        let lambdas_raw = lambdas_raw.clone();
        let (h, b, l) = (base_cfg.step, base_cfg.beta, objective.lipschitz());
        move |run_label: &str| {
            RunHeader::new()
                .kv("subcommand", "kernel")
                .kv("problem", &problem)
                .kv("run", run_label)
                .kv("n", n)
                .kv("d", d)
                .kv("m", m)
                .kv("q", label_q)
                .kv("theta", theta)
                .kv("L", l)
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
