//! Smoothed max: `f(x) = rho log sum_i exp((a_i'x - b_i)/rho)`.
//! Convex, L-smooth, not strongly convex.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Objective, Result, Rng};

use super::power_iteration;

/// Rows `a_i` (stacked as an m-by-n matrix), shifts `b_i`, smoothing `rho`.
#[derive(Debug, Clone)]
pub struct LogSumExpSpec {
    pub rows: DMatrix<f64>,
    pub shifts: DVector<f64>,
    pub rho: f64,
}

impl LogSumExpSpec {
    pub fn new(rows: DMatrix<f64>, shifts: DVector<f64>, rho: f64) -> Result<Self> {
        if rows.nrows() == 0 {
            return Err(Error::InvalidArgument("need at least one row".into()));
        }
        if shifts.len() != rows.nrows() {
            return Err(Error::DimensionMismatch {
                context: "logsumexp shifts",
                expected: rows.nrows(),
                got: shifts.len(),
            });
        }
        if !(rho > 0.0) {
            return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
        }
        Ok(LogSumExpSpec { rows, shifts, rho })
    }

    /// Softmax weights of the shifted scores at `x` (max-shifted, so the
    /// weights are exact and sum to one).
    pub fn softmax(&self, x: &DVector<f64>) -> DVector<f64> {
        let s = (&self.rows * x - &self.shifts) / self.rho;
        let m = s.max();
        let mut w = s.map(|si| (si - m).exp());
        let total = w.sum();
        w /= total;
        w
    }

    pub fn objective(&self) -> Objective {
        let l = power_iteration(
            self.rows.nrows(),
            |v| &self.rows * (self.rows.transpose() * v),
            1e-10,
            100_000,
        ) / self.rho;

        let spec_v = self.clone();
        let spec_g = self.clone();
        let spec_h = self.clone();
        Objective::new(
            self.rows.ncols(),
            move |x| {
                let s = (&spec_v.rows * x - &spec_v.shifts) / spec_v.rho;
                let m = s.max();
                let total: f64 = s.iter().map(|si| (si - m).exp()).sum();
                spec_v.rho * (m + total.ln())
            },
            move |x| spec_g.rows.transpose() * spec_g.softmax(x),
            l,
        )
        .with_hvp(move |x, v| {
            // (1/rho) A' (diag(w) - w w') A v
            let w = spec_h.softmax(x);
            let av = &spec_h.rows * v;
            let wav = w.component_mul(&av);
            let mixed = w.dot(&av);
            (spec_h.rows.transpose() * (wav - &w * mixed)) / spec_h.rho
        })
    }
}

/// Seeded instance with standard Gaussian rows and shifts.
pub fn make_logsumexp(n: usize, m: usize, rho: f64, rng: &mut Rng) -> Result<Objective> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("n and m must be positive".into()));
    }
    if !(rho > 0.0) {
        return Err(Error::InvalidArgument(format!("rho must be positive, got {rho}")));
    }
    let rows = DMatrix::from_fn(m, n, |_, _| rng.normal());
    let shifts = rng.normal_vector(m);
    Ok(LogSumExpSpec::new(rows, shifts, rho)?.objective())
}
