//! Log-linear rate fitting (`gap ~ A exp(-B k)`), reference minima for
//! objectives without a closed-form optimum, and the summary tables.

use nalgebra::DVector;

use crate::discrete::{run_algorithm1, AlgoConfig, DiscreteRestart};
use crate::{Error, Objective, Result};

pub const DEFAULT_GAP_FLOOR: f64 = 1e-13;
pub const DEFAULT_BURN_IN: f64 = 0.1;

/// Least-squares fit of `log(gap)` against the index or time axis.
#[derive(Debug, Clone, Copy)]
pub struct RateFit {
    /// `A = exp(intercept)`
    pub a_coef: f64,
    /// `B = -slope`
    pub b_coef: f64,
    pub r_squared: f64,
    pub fit_range: (f64, f64),
    pub n_points: usize,
}

/// Ordinary least squares of `log(gap)` on the axis, over the points that
/// survive the burn-in cut (first `burn_in` fraction of the series) and
/// the positivity floor (`gap > gap_floor`).
pub fn fit_linear_rate(
    series: &[(f64, f64)],
    gap_floor: f64,
    burn_in: f64,
) -> Result<RateFit> {
    if !(gap_floor > 0.0) {
        return Err(Error::InvalidArgument("gap_floor must be positive".into()));
    }
    if !(0.0..1.0).contains(&burn_in) {
        return Err(Error::InvalidArgument("burn_in must lie in [0,1)".into()));
    }
    let skip = (burn_in * series.len() as f64).floor() as usize;
    let usable: Vec<(f64, f64)> = series[skip.min(series.len())..]
        .iter()
        .copied()
        .filter(|&(_, g)| g > gap_floor)
        .collect();
    if usable.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "{} usable points after burn-in and floor filtering (need 10)",
            usable.len()
        )));
    }

    let n = usable.len() as f64;
    let mean_x = usable.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = usable.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, g) in &usable {
        let dx = x - mean_x;
        sxx += dx * dx;
        sxy += dx * (g.ln() - mean_y);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = mean_y - slope * mean_x;

    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for &(x, g) in &usable {
        let y = g.ln();
        let resid = y - (intercept + slope * x);
        ss_res += resid * resid;
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 0.0 };

    Ok(RateFit {
        a_coef: intercept.exp(),
        b_coef: -slope,
        r_squared,
        fit_range: (usable[0].0, usable[usable.len() - 1].0),
        n_points: usable.len(),
    })
}

/// A reference optimum, possibly flagged when the run never flattened
/// (the objective may be unbounded below).
#[derive(Debug, Clone, Copy)]
pub struct ReferenceMin {
    pub value: f64,
    pub unbounded_suspect: bool,
}

/// Best value over a long extended-speed run (`lambda = 1/(2 alpha)`).
/// Objectives that already carry a closed-form reference return it
/// unchanged.
pub fn reference_min(obj: &Objective, x0: &DVector<f64>, budget: usize) -> Result<ReferenceMin> {
    if let Some(fstar) = obj.reference_min() {
        return Ok(ReferenceMin {
            value: fstar,
            unbounded_suspect: false,
        });
    }
    let cfg = AlgoConfig::for_objective(obj)
        .with_lambda(1.0 / 6.0)
        .with_iterations(budget)
        .with_restart(DiscreteRestart::ExtendedSpeed);
    let log = run_algorithm1(obj, x0, &cfg)?;

    // running best at the 80% / 90% / 100% marks, to spot a floor-less decay
    let fvals: Vec<f64> = log.records.iter().map(|r| r.fval).collect();
    let best_at = |frac: f64| -> f64 {
        let upto = ((fvals.len() as f64 * frac) as usize).max(1).min(fvals.len());
        fvals[..upto].iter().copied().fold(f64::INFINITY, f64::min)
    };
    let (b80, b90, b100) = (best_at(0.8), best_at(0.9), best_at(1.0));
    let d1 = b80 - b90;
    let d2 = b90 - b100;
    let scale = b100.abs().max(1.0);
    let unbounded_suspect = d2 > 1e-12 * scale && d2 >= 0.5 * d1;

    Ok(ReferenceMin {
        value: b100,
        unbounded_suspect,
    })
}

/// One labeled gap series destined for a summary table.
#[derive(Debug, Clone)]
pub struct GapSeries {
    pub policy: String,
    pub lambda: Option<f64>,
    /// the reference optimum the gaps were computed against
    pub reference: f64,
    pub points: Vec<(f64, f64)>,
}

/// Fitted coefficients for a set of runs of one problem.
#[derive(Debug, Clone)]
pub struct RateTable {
    pub problem: String,
    pub columns: Vec<(GapSeries, RateFit)>,
}

/// Fits every series and assembles the table. All series must share the
/// same reference value.
pub fn make_table(
    problem: &str,
    series: Vec<GapSeries>,
    gap_floor: f64,
    burn_in: f64,
) -> Result<RateTable> {
    if series.is_empty() {
        return Err(Error::InvalidArgument("no series to tabulate".into()));
    }
    let reference = series[0].reference;
    if series.iter().any(|s| s.reference != reference) {
        return Err(Error::InvalidArgument(
            "series reference minima disagree; runs are not comparable".into(),
        ));
    }
    let mut columns = Vec::with_capacity(series.len());
    for s in series {
        let fit = fit_linear_rate(&s.points, gap_floor, burn_in)?;
        columns.push((s, fit));
    }
    Ok(RateTable {
        problem: problem.to_string(),
        columns,
    })
}

impl RateTable {
    pub const CSV_HEADER: &'static str = "problem,policy,lambda,A,B,R2,n_points";

    pub fn csv_rows(&self) -> Vec<String> {
        self.columns
            .iter()
            .map(|(s, fit)| {
                format!(
                    "{},{},{},{},{},{},{}",
                    self.problem,
                    s.policy,
                    s.lambda.map_or_else(|| "na".into(), |l: f64| l.to_string()),
                    fit.a_coef,
                    fit.b_coef,
                    fit.r_squared,
                    fit.n_points
                )
            })
            .collect()
    }

    /// Aligned text block: one column per run, rows A, B, R^2.
    pub fn text(&self) -> String {
        let labels: Vec<String> = self
            .columns
            .iter()
            .map(|(s, _)| match s.lambda {
                Some(l) => format!("{} l={:.4}", s.policy, l),
                None => s.policy.clone(),
            })
            .collect();
        let mut out = format!("{}\n", self.problem);
        out.push_str(&format!("{:<8}", ""));
        for l in &labels {
            out.push_str(&format!("{l:>22}"));
        }
        out.push('\n');
        for (name, pick) in [
            ("A", 0usize),
            ("B", 1),
            ("R2", 2),
        ] {
            out.push_str(&format!("{name:<8}"));
            for (_, fit) in &self.columns {
                let v = match pick {
                    0 => fit.a_coef,
                    1 => fit.b_coef,
                    _ => fit.r_squared,
                };
                out.push_str(&format!("{v:>22.6e}"));
            }
            out.push('\n');
        }
        out
    }
}
