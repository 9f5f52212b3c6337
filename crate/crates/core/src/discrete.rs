//! The discrete counterpart of the restarted dynamics: an inertial
//! gradient algorithm with a gradient-correction term,
//!
//! ```text
//! y_k     = x_k + (1 - a/(j+a)) (x_k - x_{k-1}) - b h (g(x_k) - g(x_{k-1}))
//! x_{k+1} = y_k - h^2 g(y_k)
//! ```
//!
//! where `j` is the momentum counter. The extended speed restart fires
//! whenever `|x_{k+1} - x_k|^2 < (1 - 2 a l / j) |x_k - x_{k-1}|^2`;
//! the function-value heuristic fires when `f(x_{k+1}) >= f(x_k)`.
//! A restart makes `x_{k+1}` a cold start: `j` returns to 1 and the
//! momentum history is cleared (`x_k = x_{k-1}` for the next update),
//! mirroring the zero-velocity relaunch of the continuous scheme.

use nalgebra::DVector;

use crate::{Error, Objective, Result};

/// Restart rule for the discrete algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscreteRestart {
    ExtendedSpeed,
    FunctionValue,
    None,
}

impl std::fmt::Display for DiscreteRestart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DiscreteRestart::ExtendedSpeed => write!(f, "extended-speed"),
            DiscreteRestart::FunctionValue => write!(f, "function-value"),
            DiscreteRestart::None => write!(f, "none"),
        }
    }
}

/// Algorithm parameters.
#[derive(Debug, Clone, Copy)]
pub struct AlgoConfig {
    pub alpha: f64,
    pub beta: f64,
    /// step size `h`; the update uses `h^2` on the corrected point
    pub step: f64,
    pub lambda: f64,
    pub iterations: usize,
    pub restart: DiscreteRestart,
    pub warm_start: bool,
}

impl AlgoConfig {
    /// The usual benchmark setting: `alpha = 3`, `beta = h = 1/sqrt(L)`.
    pub fn for_objective(obj: &Objective) -> Self {
        let h = 1.0 / obj.lipschitz().sqrt();
        AlgoConfig {
            alpha: 3.0,
            beta: h,
            step: h,
            lambda: 0.0,
            iterations: 1000,
            restart: DiscreteRestart::ExtendedSpeed,
            warm_start: false,
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_iterations(mut self, n: usize) -> Self {
        self.iterations = n;
        self
    }

    pub fn with_restart(mut self, restart: DiscreteRestart) -> Self {
        self.restart = restart;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be at least 1, got {}",
                self.alpha
            )));
        }
        if !(self.beta >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "beta must be nonnegative, got {}",
                self.beta
            )));
        }
        if !(self.step > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "step must be positive, got {}",
                self.step
            )));
        }
        let lam_max = 1.0 / (2.0 * self.alpha);
        if !(0.0..=lam_max * (1.0 + 1e-12)).contains(&self.lambda) {
            return Err(Error::InvalidArgument(format!(
                "lambda must lie in [0, 1/(2 alpha) = {lam_max}], got {}",
                self.lambda
            )));
        }
        Ok(())
    }
}

/// One row of the iterate log.
#[derive(Debug, Clone, Copy)]
pub struct IterateRecord {
    pub k: usize,
    pub fval: f64,
    /// `f(x_k) - f*`, present only when the objective carries a reference
    pub gap: Option<f64>,
    /// `|x_k - x_{k-1}|^2`
    pub delta_sq: f64,
    /// momentum counter in effect after processing this iterate
    pub j: usize,
    pub restarted: bool,
    /// 1 = function-value warm phase, 2 = main phase (plain runs use 1)
    pub phase: u8,
}

/// Full run record.
#[derive(Debug, Clone)]
pub struct IterateLog {
    pub records: Vec<IterateRecord>,
    pub config: AlgoConfig,
    /// warm-start phase 1 ran out of iterations without a trigger
    pub no_warm_trigger: bool,
    /// wall-clock duration of the run (metadata; never written to CSV)
    pub wall_seconds: f64,
}

impl IterateLog {
    /// `(k, gap)` pairs when a reference minimum is attached.
    pub fn gap_series(&self) -> Option<Vec<(f64, f64)>> {
        self.records
            .iter()
            .map(|r| r.gap.map(|g| (r.k as f64, g)))
            .collect()
    }

    pub fn fval_series(&self) -> Vec<(f64, f64)> {
        self.records.iter().map(|r| (r.k as f64, r.fval)).collect()
    }

    pub fn restart_count(&self) -> usize {
        self.records.iter().filter(|r| r.restarted).count()
    }
}

/// One update of the inertial scheme. `grad_k` and `grad_km1` are the
/// bookkept gradients at `x_k` and `x_{k-1}`; the only fresh gradient here
/// is the one at the corrected point `y`.
pub fn igahd_step(
    obj: &Objective,
    x_k: &DVector<f64>,
    x_km1: &DVector<f64>,
    grad_k: &DVector<f64>,
    grad_km1: &DVector<f64>,
    j: usize,
    cfg: &AlgoConfig,
) -> DVector<f64> {
    debug_assert!(j >= 1);
    let momentum = 1.0 - cfg.alpha / (j as f64 + cfg.alpha);
    let mut y = x_k + (x_k - x_km1) * momentum;
    if cfg.beta > 0.0 {
        y -= (grad_k - grad_km1) * (cfg.beta * cfg.step);
    }
    let grad_y = obj.gradient(&y);
    y - grad_y * (cfg.step * cfg.step)
}

/// The extended speed restart test:
/// `|Delta_{k+1}|^2 < (1 - 2 a l / j) |Delta_k|^2` (strict).
pub fn restart_criterion(delta_next_sq: f64, delta_sq: f64, j: usize, cfg: &AlgoConfig) -> bool {
    let factor = 1.0 - 2.0 * cfg.alpha * cfg.lambda / j as f64;
    delta_next_sq < factor * delta_sq
}

struct CoreRun {
    records: Vec<IterateRecord>,
    final_x: DVector<f64>,
    /// global index at which the run stopped on a restart trigger
    triggered_at: Option<usize>,
}

/// Shared iteration loop. Starts from `x_0 = x_{-1} = x0`, `j = 1`, runs up
/// to `n_iters` updates, optionally stopping at the first restart trigger.
fn run_core(
    obj: &Objective,
    x0: &DVector<f64>,
    cfg: &AlgoConfig,
    restart: DiscreteRestart,
    n_iters: usize,
    phase: u8,
    k_offset: usize,
    stop_on_trigger: bool,
) -> Result<CoreRun> {
    let fstar = obj.reference_min();
    let gap_of = |f: f64| fstar.map(|s| f - s);

    let mut x_km1 = x0.clone();
    let mut x_k = x0.clone();
    let mut grad_km1 = obj.gradient(x0);
    let mut grad_k = grad_km1.clone();
    let mut fval_k = obj.value(x0);
    let mut delta_sq = 0.0f64;
    let mut j: usize = 1;

    let mut records = Vec::with_capacity(n_iters + 1);
    if k_offset == 0 {
        records.push(IterateRecord {
            k: 0,
            fval: fval_k,
            gap: gap_of(fval_k),
            delta_sq,
            j,
            restarted: false,
            phase,
        });
    }

    for step in 1..=n_iters {
        let k = k_offset + step;
        let x_next = igahd_step(obj, &x_k, &x_km1, &grad_k, &grad_km1, j, cfg);
        if x_next.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { iteration: k });
        }
        let grad_next = obj.gradient(&x_next);
        let fval_next = obj.value(&x_next);
        let delta_next_sq = (&x_next - &x_k).norm_squared();

        let restarted = match restart {
            DiscreteRestart::ExtendedSpeed => restart_criterion(delta_next_sq, delta_sq, j, cfg),
            DiscreteRestart::FunctionValue => fval_next >= fval_k,
            DiscreteRestart::None => false,
        };
        if restarted {
            j = 1;
        } else {
            j += 1;
        }

        records.push(IterateRecord {
            k,
            fval: fval_next,
            gap: gap_of(fval_next),
            delta_sq: delta_next_sq,
            j,
            restarted,
            phase,
        });

        if restarted && stop_on_trigger {
            return Ok(CoreRun {
                records,
                final_x: x_next,
                triggered_at: Some(k),
            });
        }

        if let Some(gap) = gap_of(fval_next) {
            if gap <= 1e-15 {
                return Ok(CoreRun {
                    records,
                    final_x: x_next,
                    triggered_at: None,
                });
            }
        }

        // a restart is a cold start from x_{k+1}: momentum history and
        // the gradient difference are cleared, exactly as the continuous
        // scheme re-launches a lazy solution with zero velocity; the zero
        // baseline also makes an immediate re-fire impossible
        if restarted {
            x_km1 = x_next.clone();
            grad_km1 = grad_next.clone();
            delta_sq = 0.0;
        } else {
            x_km1 = x_k;
            grad_km1 = grad_k;
            delta_sq = delta_next_sq;
        }
        x_k = x_next;
        grad_k = grad_next;
        fval_k = fval_next;
    }

    Ok(CoreRun {
        records,
        final_x: x_k,
        triggered_at: None,
    })
}

/// Runs the algorithm with the configured restart rule for
/// `cfg.iterations` updates.
pub fn run_algorithm1(obj: &Objective, x0: &DVector<f64>, cfg: &AlgoConfig) -> Result<IterateLog> {
    cfg.validate()?;
    if cfg.iterations < 2 {
        return Err(Error::InvalidArgument(
            "need at least 2 iterations".into(),
        ));
    }
    crate::ensure_finite("discrete start point", x0)?;
    let started = std::time::Instant::now();
    let core = run_core(obj, x0, cfg, cfg.restart, cfg.iterations, 1, 0, false)?;
    Ok(IterateLog {
        records: core.records,
        config: *cfg,
        no_warm_trigger: false,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Warm-started run: phase 1 iterates under the function-value rule until
/// its first trigger, whose iterate then seeds a fresh extended-speed run
/// (momentum and history reset) for the remaining budget.
pub fn run_with_warm_start(
    obj: &Objective,
    x0: &DVector<f64>,
    cfg: &AlgoConfig,
) -> Result<IterateLog> {
    cfg.validate()?;
    if !cfg.warm_start {
        return Err(Error::InvalidArgument(
            "run_with_warm_start needs cfg.warm_start = true".into(),
        ));
    }
    crate::ensure_finite("discrete start point", x0)?;
    let started = std::time::Instant::now();
    let n = cfg.iterations;
    let phase1 = run_core(obj, x0, cfg, DiscreteRestart::FunctionValue, n, 1, 0, true)?;
    match phase1.triggered_at {
        Some(k_w) if k_w < n => {
            let phase2 = run_core(
                obj,
                &phase1.final_x,
                cfg,
                DiscreteRestart::ExtendedSpeed,
                n - k_w,
                2,
                k_w,
                false,
            )?;
            let mut records = phase1.records;
            records.extend(phase2.records);
            Ok(IterateLog {
                records,
                config: *cfg,
                no_warm_trigger: false,
                wall_seconds: started.elapsed().as_secs_f64(),
            })
        }
        triggered => Ok(IterateLog {
            records: phase1.records,
            config: *cfg,
            // a trigger on the very last iteration leaves no phase-2 budget
            // but is still a trigger
            no_warm_trigger: triggered.is_none(),
            wall_seconds: started.elapsed().as_secs_f64(),
        }),
    }
}
