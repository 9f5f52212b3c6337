//! `theory`: evaluate tau1/tau2/tau3, Q, M and the restart-time bounds.

use std::path::PathBuf;

use clap::Args;
use inertial_restart::report::{write_csv, RunHeader};
use inertial_restart::theory::{ParamTuple, TheoryReport};

use crate::config::{resolve, resolve_opt, FileCfg};
use crate::Failure;

#[derive(Args)]
pub struct TheoryArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    /// Lipschitz constant of the gradient
    #[arg(long = "L", visible_alias = "lipschitz")]
    lipschitz: Option<f64>,
    /// strong convexity parameter (optional; bounds and Q need it)
    #[arg(long)]
    mu: Option<f64>,
    /// evaluate the restart-time upper bound at this tau as well
    #[arg(long)]
    tau: Option<f64>,
    /// write the report as CSV here
    #[arg(long)]
    csv: Option<PathBuf>,
    /// flat key=value config file (flags win)
    #[arg(long)]
    config: Option<PathBuf>,
}

pub fn run(args: TheoryArgs) -> Result<i32, Failure> {
    let mut file = FileCfg::load(args.config.as_deref())?;
    let alpha = resolve_opt(args.alpha, file.take("alpha")?)
        .ok_or_else(|| Failure::Usage("--alpha is required".into()))?;
    let beta = resolve(args.beta, file.take("beta")?, 0.0);
    let lambda = resolve(args.lambda, file.take("lambda")?, 0.0);
    let lipschitz = resolve_opt(args.lipschitz, file.take("L")?)
        .ok_or_else(|| Failure::Usage("--L is required".into()))?;
    let mu = resolve_opt(args.mu, file.take("mu")?);
    let tau = resolve_opt(args.tau, file.take("tau")?);
    file.finish()?;

    let params = ParamTuple::new(alpha, beta, lambda, mu, lipschitz)?;
    let report = TheoryReport::compute(params, tau)?;

    for line in report.text_lines() {
        println!("{line}");
    }
    println!();
    println!("{}", TheoryReport::CSV_HEADER);
    println!("{}", report.csv_row());

    if let Some(path) = &args.csv {
        let header = RunHeader::new()
            .kv("subcommand", "theory")
            .kv("alpha", alpha)
            .kv("beta", beta)
            .kv("lambda", lambda)
            .kv("L", lipschitz)
            .kv("mu", mu.map_or_else(|| "na".into(), |m: f64| m.to_string()))
            .with_timestamp_now();
        write_csv(path, &header, TheoryReport::CSV_HEADER, &[report.csv_row()])?;
        println!("wrote {}", path.display());
    }

    // out-of-range lambda leaves the bound columns as markers
    if !params.lambda_in_guaranteed_range() {
        eprintln!(
            "note: lambda = {lambda} exceeds 1/(2 alpha) = {}; no upper bound or contraction \
             factor is available in this regime",
            1.0 / (2.0 * alpha)
        );
        return Ok(1);
    }
    Ok(0)
}
