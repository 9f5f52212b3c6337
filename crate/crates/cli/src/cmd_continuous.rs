//! `continuous`: restarted ODE runs plus rate fits.

use std::path::PathBuf;

use clap::Args;
use inertial_restart::analysis::{make_table, GapSeries, DEFAULT_BURN_IN, DEFAULT_GAP_FLOOR};
use inertial_restart::dynamics::{
    restarted_trajectory, OdeSpec, RestartKind, RestartPolicy, SegmentSettings,
};
use inertial_restart::problems::{make_illposed_quadratic, make_random_quadratic, QuadraticSpec};
use inertial_restart::report::{
    continuous_sample_rows, long_format_rows, restart_rows, write_csv, write_table_csv, RunHeader,
    CONTINUOUS_COLUMNS, LONG_COLUMNS, RESTART_COLUMNS,
};
use inertial_restart::{DMatrix, DVector, Objective, Rng};

use crate::config::{lambda_label, out_dir, parse_lambda_list, resolve, resolve_opt, FileCfg};
use crate::Failure;

#[derive(Args)]
pub struct ContinuousArgs {
    /// illposed | sphere | randquad
    #[arg(long)]
    problem: Option<String>,
    /// conditioning of the ill-posed quadratic
    #[arg(long)]
    rho: Option<f64>,
    /// dimension of the random quadratic
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    eig_low: Option<f64>,
    #[arg(long)]
    eig_high: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// comma list; accepts floats, p/q, and p/qa resolved against alpha
    #[arg(long)]
    lambdas: Option<String>,
    /// speed | fv | none
    #[arg(long)]
    policy: Option<String>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    event_tol: Option<f64>,
    #[arg(long)]
    atol: Option<f64>,
    #[arg(long)]
    rtol: Option<f64>,
    /// record every k-th accepted step
    #[arg(long)]
    stride: Option<usize>,
    /// din-avd | hr-din-avd
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    r_coeff: Option<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: ContinuousArgs) -> Result<i32, Failure> {
    let mut file = FileCfg::load(args.config.as_deref())?;
    let problem = resolve(args.problem, file.take_string("problem"), "illposed".into());
    let rho = resolve(args.rho, file.take("rho")?, 10.0);
    let n = resolve(args.n, file.take("n")?, 40);
    let eig_low = resolve(args.eig_low, file.take("eig_low")?, 1e-6);
    let eig_high = resolve(args.eig_high, file.take("eig_high")?, 1.0);
    let alpha = resolve(args.alpha, file.take("alpha")?, 3.0);
    let beta = resolve(args.beta, file.take("beta")?, 1.0);
    let lambdas_raw = resolve(args.lambdas, file.take_string("lambdas"), "0,1/4a,1/2a".into());
    let policy_name = resolve(args.policy, file.take_string("policy"), "speed".into());
    let horizon = resolve(args.horizon, file.take("horizon")?, 200.0);
    let seed = resolve(args.seed, file.take("seed")?, 7);
    let event_tol = resolve(args.event_tol, file.take("event_tol")?, 1e-9);
    let atol = resolve(args.atol, file.take("atol")?, 1e-9);
    let rtol = resolve(args.rtol, file.take("rtol")?, 1e-9);
    let stride = resolve(args.stride, file.take("stride")?, 1);
    let variant = resolve(args.variant, file.take_string("variant"), "din-avd".into());
    let gamma = resolve(args.gamma, file.take("gamma")?, 1.0);
    let r_coeff = resolve_opt(args.r_coeff, file.take("r_coeff")?);
    let dir = out_dir(args.out_dir, file.take_string("out_dir"));
    file.finish()?;

    let lambdas = parse_lambda_list(&lambdas_raw, alpha)?;
    let (objective, z0): (Objective, DVector<f64>) = match problem.as_str() {
        "illposed" => (
            make_illposed_quadratic(rho)?,
            DVector::from_element(3, 1.0),
        ),
        "sphere" => {
            let eye = DMatrix::<f64>::identity(3, 3);
            (
                QuadraticSpec::new(eye, DVector::zeros(3))?.objective()?,
                DVector::from_element(3, 1.0),
            )
        }
        "randquad" => {
            let mut rng = Rng::new(seed);
            (
                make_random_quadratic(n, eig_low, eig_high, &mut rng)?,
                DVector::from_element(n, 1.0),
            )
        }
        other => return Err(Failure::Usage(format!("unknown problem '{other}'"))),
    };
    let reference = objective
        .reference_min()
        .expect("quadratic problems carry a closed-form minimum");

    let mut spec = OdeSpec::new(objective.into_shared(), alpha, beta)?;
    match variant.as_str() {
        "din-avd" => {}
        "hr-din-avd" => spec = spec.high_resolution(gamma, r_coeff)?,
        other => return Err(Failure::Usage(format!("unknown variant '{other}'"))),
    }
    let mut settings = SegmentSettings::for_spec(&spec, &z0).with_tolerances(atol, rtol);
    settings.output_stride = stride.max(1);

    let header_base = |run_label: &str| {
        RunHeader::new()
            .kv("subcommand", "continuous")
            .kv("problem", &problem)
            .kv("variant", &variant)
            .kv("run", run_label)
            .kv("rho", rho)
            .kv("n", n)
            .kv("alpha", alpha)
            .kv("beta", beta)
            .kv("policy", &policy_name)
            .kv("horizon", horizon)
            .kv("seed", seed)
            .kv("event_tol", event_tol)
            .kv("atol", atol)
            .kv("rtol", rtol)
            .kv("stride", stride)
            .with_timestamp_now()
    };

    // one run per lambda for the speed policy, a single run otherwise
    let runs: Vec<(String, Option<f64>, RestartPolicy)> = match policy_name.as_str() {
        "speed" => lambdas
            .iter()
            .map(|&l| {
                Ok((
                    format!("extended-speed_lam{}", lambda_label(l)),
                    Some(l),
                    RestartPolicy::extended_speed(l)?.with_event_tol(event_tol),
                ))
            })
            .collect::<Result<_, inertial_restart::Error>>()?,
        "fv" => vec![(
            "function-value".into(),
            None,
            RestartPolicy::function_value().with_event_tol(event_tol),
        )],
        "none" => vec![("none".into(), None, RestartPolicy::none().with_event_tol(event_tol))],
        other => return Err(Failure::Usage(format!("unknown policy '{other}'"))),
    };

    let mut series = Vec::new();
    let mut long_rows = Vec::new();
    for (label, lambda, policy) in &runs {
        let run = restarted_trajectory(&spec, &z0, policy, horizon, &settings)?;
        let samples = continuous_sample_rows(&run, Some(reference));
        write_csv(
            &dir.join(format!("{problem}_continuous_{label}.csv")),
            &header_base(label),
            CONTINUOUS_COLUMNS,
            &samples,
        )?;
        write_csv(
            &dir.join(format!("{problem}_continuous_{label}_restarts.csv")),
            &header_base(label),
            RESTART_COLUMNS,
            &restart_rows(&run, Some(reference)),
        )?;
        let points: Vec<(f64, f64)> = run
            .flat_samples()
            .into_iter()
            .map(|(t, fval, _, _)| (t, fval - reference))
            .collect();
        long_rows.extend(long_format_rows(label, &points));
        println!(
            "{label}: {} segments, {} restarts, first restart at {:?}",
            run.segments.len(),
            run.restart_times.len(),
            run.restart_times.first()
        );
        series.push(GapSeries {
            policy: match policy.kind {
                RestartKind::ExtendedSpeed { .. } => "extended-speed".into(),
                RestartKind::FunctionValue => "function-value".into(),
                RestartKind::None => "none".into(),
            },
            lambda: *lambda,
            reference,
            points,
        });
    }

    let table = make_table(&problem, series, DEFAULT_GAP_FLOOR, DEFAULT_BURN_IN)?;
    print!("{}", table.text());
    write_table_csv(
        &dir.join(format!("{problem}_continuous_summary.csv")),
        &header_base("summary"),
        &table,
    )?;
    write_csv(
        &dir.join(format!("{problem}_continuous_long.csv")),
        &header_base("long"),
        LONG_COLUMNS,
        &long_rows,
    )?;
    println!("outputs in {}", dir.display());
    Ok(0)
}
