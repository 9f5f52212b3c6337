//! Shared runner for discrete experiment sweeps: one run per
//! (policy, lambda), optional warm-start companions, CSVs and a summary
//! table.

use std::path::Path;
use std::sync::Arc;

use inertial_restart::analysis::{make_table, GapSeries, DEFAULT_BURN_IN, DEFAULT_GAP_FLOOR};
use inertial_restart::discrete::{
    run_algorithm1, run_with_warm_start, AlgoConfig, DiscreteRestart,
};
use inertial_restart::report::{
    discrete_rows, long_format_rows, write_csv, write_table_csv, RunHeader, DISCRETE_COLUMNS,
    LONG_COLUMNS,
};
use inertial_restart::{DVector, Objective};

use crate::config::lambda_label;
use crate::Failure;

pub struct Suite {
    pub problem: String,
    /// carries the reference minimum
    pub objective: Arc<Objective>,
    pub x0: DVector<f64>,
    pub base_cfg: AlgoConfig,
    pub lambdas: Vec<f64>,
    /// extended | fv | none
    pub policy: String,
    pub warm: bool,
}

impl Suite {
    pub fn run(&self, dir: &Path, header_base: &dyn Fn(&str) -> RunHeader) -> Result<(), Failure> {
        let reference = self
            .objective
            .reference_min()
            .expect("suite objectives carry a reference minimum");

        let mut jobs: Vec<(String, String, Option<f64>, AlgoConfig, bool)> = Vec::new();
        match self.policy.as_str() {
            "extended" => {
                for &l in &self.lambdas {
                    let cfg = self
                        .base_cfg
                        .with_lambda(l)
                        .with_restart(DiscreteRestart::ExtendedSpeed);
                    jobs.push((
                        format!("extended-speed_lam{}", lambda_label(l)),
                        "extended-speed".into(),
                        Some(l),
                        cfg,
                        false,
                    ));
                    if self.warm {
                        let mut warm_cfg = cfg;
                        warm_cfg.warm_start = true;
                        jobs.push((
                            format!("warm-extended_lam{}", lambda_label(l)),
                            "warm-extended".into(),
                            Some(l),
                            warm_cfg,
                            true,
                        ));
                    }
                }
            }
            "fv" => jobs.push((
                "function-value".into(),
                "function-value".into(),
                None,
                self.base_cfg.with_restart(DiscreteRestart::FunctionValue),
                false,
            )),
            "none" => jobs.push((
                "none".into(),
                "none".into(),
                None,
                self.base_cfg.with_restart(DiscreteRestart::None),
                false,
            )),
            other => return Err(Failure::Usage(format!("unknown policy '{other}'"))),
        }

        let mut series = Vec::new();
        let mut long_rows = Vec::new();
        for (label, policy_name, lambda, cfg, warm) in jobs {
            let log = if warm {
                run_with_warm_start(&self.objective, &self.x0, &cfg)?
            } else {
                run_algorithm1(&self.objective, &self.x0, &cfg)?
            };
            if log.no_warm_trigger {
                println!("{label}: no-warm-trigger (function-value phase never fired)");
            }
            write_csv(
                &dir.join(format!("{}_discrete_{label}.csv", self.problem)),
                &header_base(&label),
                DISCRETE_COLUMNS,
                &discrete_rows(&log),
            )?;
            let points: Vec<(f64, f64)> = log
                .gap_series()
                .expect("reference minimum is attached");
            long_rows.extend(long_format_rows(&label, &points));
            println!("{label}: {} restarts over {} iterations", log.restart_count(), log.records.len() - 1);
            series.push(GapSeries {
                policy: policy_name,
                lambda,
                reference,
                points,
            });
        }

        let table = make_table(&self.problem, series, DEFAULT_GAP_FLOOR, DEFAULT_BURN_IN)?;
        print!("{}", table.text());
        write_table_csv(
            &dir.join(format!("{}_discrete_summary.csv", self.problem)),
            &header_base("summary"),
            &table,
        )?;
        write_csv(
            &dir.join(format!("{}_discrete_long.csv", self.problem)),
            &header_base("long"),
            LONG_COLUMNS,
            &long_rows,
        )?;
        Ok(())
    }
}
