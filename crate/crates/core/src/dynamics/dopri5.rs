//! Dormand-Prince 5(4) embedded pair with PI step control and a
//! fourth-order dense-output interpolant (the classic DOPRI5 scheme of
//! Hairer, Norsett and Wanner). FSAL: the last stage of an accepted step
//! is the first stage of the next.

use nalgebra::DVector;

use crate::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// error coefficients b5 - b4
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// dense-output coefficients
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFE: f64 = 0.9;
const FACC1: f64 = 5.0; // max step increase
const FACC2: f64 = 0.1; // max step decrease
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { atol: 1e-9, rtol: 1e-9 }
    }
}

/// Continuous extension over one accepted step; `eval` is 4th-order
/// accurate anywhere in `[t0, t0+h]`.
#[derive(Debug, Clone)]
pub struct DenseOutput {
    t0: f64,
    h: f64,
    rcont: [DVector<f64>; 5],
}

impl DenseOutput {
    pub fn eval(&self, t: f64) -> DVector<f64> {
        let theta = (t - self.t0) / self.h;
        let theta1 = 1.0 - theta;
        &self.rcont[0]
            + (&self.rcont[1]
                + (&self.rcont[2] + (&self.rcont[3] + &self.rcont[4] * theta1) * theta) * theta1)
                * theta
    }
}

/// One accepted step: the interval it covered and its dense output.
#[derive(Debug, Clone)]
pub struct AcceptedStep {
    pub t_prev: f64,
    pub t: f64,
    pub dense: DenseOutput,
}

/// Adaptive integrator for `y' = f(t, y)` from `t0` to `t_end`.
pub struct Dopri5<F> {
    f: F,
    t: f64,
    t_end: f64,
    y: DVector<f64>,
    k1: DVector<f64>,
    h: f64,
    tol: Tolerances,
    err_old: f64,
    last_rejected: bool,
    pub steps_accepted: u64,
    pub steps_rejected: u64,
}

impl<F> Dopri5<F>
where
    F: FnMut(f64, &DVector<f64>) -> DVector<f64>,
{
    pub fn new(mut f: F, t0: f64, y0: DVector<f64>, t_end: f64, tol: Tolerances) -> Self {
        assert!(t_end > t0, "integration interval must be nonempty");
        let k1 = f(t0, &y0);
        let h = initial_step(&mut f, t0, &y0, &k1, &tol, t_end - t0);
        Dopri5 {
            f,
            t: t0,
            t_end,
            y: y0,
            k1,
            h,
            tol,
            err_old: 1e-4,
            last_rejected: false,
            steps_accepted: 0,
            steps_rejected: 0,
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn done(&self) -> bool {
        self.t >= self.t_end * (1.0 - 1e-14)
    }

    /// Advances by one accepted step (retrying internally on rejections).
    pub fn step(&mut self) -> Result<AcceptedStep> {
        loop {
            let h = self.h.min(self.t_end - self.t);
            if h <= self.t.abs() * f64::EPSILON * 16.0 {
                return Err(Error::IntegratorFailure {
                    t: self.t,
                    detail: format!("step size underflow (h = {h})"),
                });
            }
            let (t, y) = (self.t, &self.y);
            let k1 = &self.k1;

            let k2 = (self.f)(t + C2 * h, &(y + k1 * (A21 * h)));
            let k3 = (self.f)(t + C3 * h, &(y + (k1 * A31 + &k2 * A32) * h));
            let k4 = (self.f)(t + C4 * h, &(y + (k1 * A41 + &k2 * A42 + &k3 * A43) * h));
            let k5 = (self.f)(
                t + C5 * h,
                &(y + (k1 * A51 + &k2 * A52 + &k3 * A53 + &k4 * A54) * h),
            );
            let k6 = (self.f)(
                t + h,
                &(y + (k1 * A61 + &k2 * A62 + &k3 * A63 + &k4 * A64 + &k5 * A65) * h),
            );
            let y_new =
                y + (k1 * A71 + &k3 * A73 + &k4 * A74 + &k5 * A75 + &k6 * A76) * h;
            let k7 = (self.f)(t + h, &y_new);

            let err_vec = (k1 * E1 + &k3 * E3 + &k4 * E4 + &k5 * E5 + &k6 * E6 + &k7 * E7) * h;
            let mut err = 0.0;
            for i in 0..y.len() {
                let sc = self.tol.atol + self.tol.rtol * y[i].abs().max(y_new[i].abs());
                let r = err_vec[i] / sc;
                err += r * r;
            }
            err = (err / y.len() as f64).sqrt();
            if !err.is_finite() {
                return Err(Error::IntegratorFailure {
                    t,
                    detail: "non-finite error estimate (diverging state)".into(),
                });
            }

            let fac11 = err.powf(EXPO1);
            if err <= 1.0 {
                // accept
                self.err_old = err.max(1e-4);
                let mut fac = fac11 / self.err_old.powf(BETA);
                fac = (fac / SAFE).clamp(FACC2, FACC1);
                let mut h_new = h / fac;
                if self.last_rejected {
                    h_new = h_new.min(h);
                }
                self.last_rejected = false;

                let ydiff = &y_new - y;
                let bspl = k1 * h - &ydiff;
                let rcont = [
                    y.clone(),
                    ydiff.clone(),
                    bspl.clone(),
                    -(&k7) * h + ydiff - bspl,
                    (k1 * D1 + &k3 * D3 + &k4 * D4 + &k5 * D5 + &k6 * D6 + &k7 * D7) * h,
                ];

                let t_prev = self.t;
                self.t = t + h;
                self.y = y_new;
                self.k1 = k7;
                self.h = h_new;
                self.steps_accepted += 1;
                return Ok(AcceptedStep {
                    t_prev,
                    t: self.t,
                    dense: DenseOutput { t0: t_prev, h, rcont },
                });
            }
            // reject and retry with a smaller step
            self.h = h / (fac11 / SAFE).min(FACC1);
            self.last_rejected = true;
            self.steps_rejected += 1;
        }
    }
}

/// Hairer's starting-step heuristic.
fn initial_step<F>(
    f: &mut F,
    t0: f64,
    y0: &DVector<f64>,
    f0: &DVector<f64>,
    tol: &Tolerances,
    h_max: f64,
) -> f64
where
    F: FnMut(f64, &DVector<f64>) -> DVector<f64>,
{
    let n = y0.len() as f64;
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..y0.len() {
        let sc = tol.atol + tol.rtol * y0[i].abs();
        d0 += (y0[i] / sc) * (y0[i] / sc);
        d1 += (f0[i] / sc) * (f0[i] / sc);
    }
    d0 = (d0 / n).sqrt();
    d1 = (d1 / n).sqrt();
    let mut h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h0 = h0.min(h_max);

    let y1 = y0 + f0 * h0;
    let f1 = f(t0 + h0, &y1);
    let mut d2 = 0.0;
    for i in 0..y0.len() {
        let sc = tol.atol + tol.rtol * y0[i].abs();
        let r = (f1[i] - f0[i]) / sc;
        d2 += r * r;
    }
    d2 = (d2 / n).sqrt() / h0;

    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    h1.min(100.0 * h0).min(h_max)
}
