//! Closed-form constants of the extended speed restart scheme.
//!
//! For damping parameters `(alpha, beta)`, extension weight `lambda` and an
//! `L`-smooth, `mu`-strongly convex objective, the scheme admits explicit
//! scalars: `tau1` (the positive zero of the envelope `H`), `tau2` (where
//! `H = 1/2`), `tau3` (the zero of `G`, a guaranteed lower bound on every
//! restart time), `M(tau)` and the derived upper bounds on the restart time,
//! and the per-restart contraction factor `Q`. This module evaluates all of
//! them; nothing here touches trajectories.

use crate::{Error, Result};

/// Scheme parameters. `mu` is optional; operations that need strong
/// convexity return [`Error::MissingMu`] when it is absent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamTuple {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
    pub mu: Option<f64>,
    pub lipschitz: f64,
}

impl ParamTuple {
    pub fn new(alpha: f64, beta: f64, lambda: f64, mu: Option<f64>, lipschitz: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidArgument(format!("beta must be nonnegative, got {beta}")));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidArgument(format!("lambda must lie in [0,1], got {lambda}")));
        }
        if !(lipschitz > 0.0 && lipschitz.is_finite()) {
            return Err(Error::InvalidArgument(format!("L must be positive, got {lipschitz}")));
        }
        if let Some(m) = mu {
            if !(m > 0.0 && m <= lipschitz) {
                return Err(Error::InvalidArgument(format!(
                    "mu must satisfy 0 < mu <= L, got mu={m}, L={lipschitz}"
                )));
            }
        }
        Ok(ParamTuple { alpha, beta, lambda, mu, lipschitz })
    }

    /// The exponent `p = 2 alpha lambda` governing the upper-bound cases.
    pub fn p(&self) -> f64 {
        2.0 * self.alpha * self.lambda
    }

    /// True when the contraction analysis applies (`lambda <= 1/(2 alpha)`).
    pub fn lambda_in_guaranteed_range(&self) -> bool {
        self.p() <= 1.0 + 1e-14
    }

    fn mu(&self) -> Result<f64> {
        self.mu.ok_or(Error::MissingMu)
    }
}

/// The concave quadratic envelope
/// `H(t) = 1 - beta L t/(alpha+2) - L t^2/(2(alpha+3))`.
pub fn h_func(t: f64, p: &ParamTuple) -> f64 {
    1.0 - p.beta * p.lipschitz * t / (p.alpha + 2.0)
        - p.lipschitz * t * t / (2.0 * (p.alpha + 3.0))
}

/// Unique positive zero of `H`.
pub fn tau1(p: &ParamTuple) -> f64 {
    let r = (p.alpha + 3.0) / (p.alpha + 2.0);
    -r * p.beta + (r * r * p.beta * p.beta + 2.0 * (p.alpha + 3.0) / p.lipschitz).sqrt()
}

/// Unique point in `(0, tau1)` with `H = 1/2`.
pub fn tau2(p: &ParamTuple) -> f64 {
    let r = (p.alpha + 3.0) / (p.alpha + 2.0);
    -r * p.beta + (r * r * p.beta * p.beta + (p.alpha + 3.0) / p.lipschitz).sqrt()
}

/// The lower-bound polynomial
/// `G = (1+al)H^2 - a(1-l)(1-H)^2 - bLt - Lt^2/2 - |1+a(2l-1)| H(1-H)`,
/// positive at 0 and strictly decreasing on `(0, tau2)`.
///
/// Defined for `t < tau1` (where `H > 0`).
pub fn g_func(t: f64, p: &ParamTuple) -> Result<f64> {
    if t < 0.0 || t >= tau1(p) {
        return Err(Error::Domain {
            quantity: "G",
            detail: format!("t = {t} outside [0, tau1 = {})", tau1(p)),
        });
    }
    let h = h_func(t, p);
    let (a, l) = (p.alpha, p.lambda);
    Ok((1.0 + a * l) * h * h
        - a * (1.0 - l) * (1.0 - h) * (1.0 - h)
        - p.beta * p.lipschitz * t
        - p.lipschitz * t * t / 2.0
        - (1.0 + a * (2.0 * l - 1.0)).abs() * h * (1.0 - h))
}

/// Lower bound on the restarting time: the zero of `G` on `(0, tau2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tau3 {
    Root(f64),
    /// `G` shows no sign change on `(0, tau2)`; no lower bound is certified.
    NoGuaranteedLowerBound,
}

impl Tau3 {
    pub fn value(&self) -> Option<f64> {
        match self {
            Tau3::Root(t) => Some(*t),
            Tau3::NoGuaranteedLowerBound => None,
        }
    }

    pub fn expect_root(&self) -> f64 {
        self.value().expect("tau3 root exists for these parameters")
    }
}

/// `tau3` via the closed forms where they apply, bisection otherwise.
///
/// Case I (`alpha >= 1 + 2 alpha lambda`, ties included) and case II
/// (`beta = 0` otherwise) have radical expressions; the general
/// `beta > 0` case falls back to [`tau3_bisection`].
pub fn tau3(p: &ParamTuple) -> Tau3 {
    if p.alpha >= 1.0 + 2.0 * p.alpha * p.lambda {
        Tau3::Root(tau3_case_i(p))
    } else if p.beta == 0.0 {
        Tau3::Root(tau3_case_ii(p))
    } else {
        tau3_bisection(p)
    }
}

/// Closed form when `alpha >= 1 + 2 alpha lambda`: `G` collapses to a
/// quadratic in `t`.
fn tau3_case_i(p: &ParamTuple) -> f64 {
    let (a, l) = (p.alpha, p.lambda);
    let c = (2.0 * a + 3.0) * (a + 3.0) / (2.0 * (a + 2.0) * (a + 2.0));
    -c * p.beta
        + (c * c * p.beta * p.beta + (1.0 + a * l) * (a + 3.0) / (p.lipschitz * (a + 2.0))).sqrt()
}

/// Closed form for `beta = 0`, `alpha < 1 + 2 alpha lambda`: `G` is a
/// quadratic in `L t^2`.
fn tau3_case_ii(p: &ParamTuple) -> f64 {
    let (a, l) = (p.alpha, p.lambda);
    let denom = 2.0 * a * l - a + 1.0;
    let disc = (2.0 * a * a * l + 6.0 * a * l + 2.0 * a + 7.0).sqrt();
    ((a + 3.0) * (2.0 * a * l + 3.0 - disc) / (denom * p.lipschitz)).sqrt()
}

/// Bisection for the zero of `G` on `(0, tau2)`, to relative width 1e-12.
/// `G(0) = 1 + alpha lambda > 0`; when `G(tau2) > 0` there is no certified
/// sign change and [`Tau3::NoGuaranteedLowerBound`] is returned.
pub fn tau3_bisection(p: &ParamTuple) -> Tau3 {
    let t2 = tau2(p);
    let g_hi = g_func(t2, p).expect("tau2 < tau1");
    if g_hi > 0.0 {
        return Tau3::NoGuaranteedLowerBound;
    }
    let (mut lo, mut hi) = (0.0f64, t2);
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g_func(mid, p).expect("mid < tau1") > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Tau3::Root(0.5 * (lo + hi))
}

/// `Psi(t) = (2 - 1/H(t))^2`, nonincreasing on `[0, tau2)`.
pub fn psi(t: f64, p: &ParamTuple) -> Result<f64> {
    if t < 0.0 || t >= tau2(p) {
        return Err(Error::Domain {
            quantity: "Psi",
            detail: format!("t = {t} outside [0, tau2 = {})", tau2(p)),
        });
    }
    let h = h_func(t, p);
    let w = 2.0 - 1.0 / h;
    Ok(w * w)
}

/// `M(tau) = (alpha+1)^2 H(tau)^2 / (2 mu tau^(p+2) (2H(tau)-1)^2)`,
/// the integral budget behind the restart-time upper bounds.
pub fn m_tau(tau: f64, p: &ParamTuple) -> Result<f64> {
    let mu = p.mu()?;
    if tau <= 0.0 || tau >= tau2(p) {
        return Err(Error::Domain {
            quantity: "M",
            detail: format!("tau = {tau} outside (0, tau2 = {})", tau2(p)),
        });
    }
    let h = h_func(tau, p);
    let a1 = p.alpha + 1.0;
    Ok(a1 * a1 * h * h / (2.0 * mu * tau.powf(p.p() + 2.0) * (2.0 * h - 1.0) * (2.0 * h - 1.0)))
}

/// Upper bound on the restarting time. The exponential branches overflow
/// `f64` for realistic parameters, so the bound is carried as its natural
/// logarithm; `value()` may round to infinity but `ln()` never does.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UpperBound {
    Finite { ln: f64 },
    /// `p = 2 alpha lambda > 1` (or a vanishing `beta mu` branch): the
    /// integral argument yields no bound.
    NoBoundAvailable,
}

impl UpperBound {
    fn from_ln(ln: f64) -> Self {
        UpperBound::Finite { ln }
    }

    pub fn ln(&self) -> Option<f64> {
        match self {
            UpperBound::Finite { ln } => Some(*ln),
            UpperBound::NoBoundAvailable => None,
        }
    }

    /// The bound as an `f64`; +inf when it exceeds the representable range.
    pub fn value(&self) -> Option<f64> {
        self.ln().map(f64::exp)
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, UpperBound::Finite { .. })
    }
}

impl std::fmt::Display for UpperBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UpperBound::NoBoundAvailable => write!(f, "no-bound-available"),
            UpperBound::Finite { ln } => {
                let v = ln.exp();
                if v.is_finite() {
                    write!(f, "{v}")
                } else {
                    // beyond f64 range: print from the base-10 logarithm
                    let log10 = ln / std::f64::consts::LN_10;
                    let exp10 = log10.floor();
                    let mantissa = 10f64.powf(log10 - exp10);
                    write!(f, "{mantissa:.6}e+{exp10:.0}")
                }
            }
        }
    }
}

/// Upper bound on the restarting time for a fixed `tau in (0, tau2)`.
///
/// Cases by `p = 2 alpha lambda`: `p = 0` takes the better of the
/// logarithmic and linear branches (only the former when `beta = 0`);
/// `p in (0,1)` and `p = 1` need `beta mu > 0`; `p > 1` has no bound.
pub fn t_upper(p: &ParamTuple, tau: f64) -> Result<UpperBound> {
    let mu = p.mu()?;
    let pexp = p.p();
    if pexp > 1.0 + 1e-14 {
        return Ok(UpperBound::NoBoundAvailable);
    }
    let m = m_tau(tau, p)?;
    let bm = p.beta * mu;
    if pexp == 0.0 {
        let ln_exp_branch = tau.ln() + m / p.alpha;
        if bm > 0.0 {
            let linear_branch = tau + m / bm;
            Ok(UpperBound::from_ln(ln_exp_branch.min(linear_branch.ln())))
        } else {
            Ok(UpperBound::from_ln(ln_exp_branch))
        }
    } else if bm == 0.0 {
        // the p in (0,1] branches are carried entirely by the beta mu term
        Ok(UpperBound::NoBoundAvailable)
    } else if pexp < 1.0 - 1e-14 {
        Ok(UpperBound::from_ln(
            ((1.0 - pexp) * m / bm).ln() / (1.0 - pexp),
        ))
    } else {
        // p = 1 (lambda = 1/(2 alpha)), up to roundoff in 2*alpha*lambda
        Ok(UpperBound::from_ln(tau.ln() + m / bm))
    }
}

/// Minimizes [`t_upper`] over a 200-point log grid
/// `tau in (0.01 tau2, 0.99 tau2)`; returns the minimizing `tau` and bound.
pub fn t_upper_best(p: &ParamTuple) -> Result<(f64, UpperBound)> {
    let t2 = tau2(p);
    let lo = 0.01 * t2;
    let hi = 0.99 * t2;
    let ratio = hi / lo;
    let mut best: Option<(f64, f64)> = None;
    for i in 0..200 {
        let tau = lo * ratio.powf(i as f64 / 199.0);
        match t_upper(p, tau)? {
            UpperBound::NoBoundAvailable => return Ok((tau, UpperBound::NoBoundAvailable)),
            UpperBound::Finite { ln } => {
                if best.map_or(true, |(_, b)| ln < b) {
                    best = Some((tau, ln));
                }
            }
        }
    }
    let (tau, ln) = best.expect("grid is nonempty");
    Ok((tau, UpperBound::from_ln(ln)))
}

/// Per-restart contraction factor
/// `Q = 1 - [a(1-l)/2 + b mu tau3/3] * 2 mu tau3^2 Psi(tau3) / (a+1)^2`,
/// valid for `lambda <= 1/(2 alpha)` and `mu > 0`.
pub fn q_factor(p: &ParamTuple) -> Result<f64> {
    let mu = p.mu()?;
    if !p.lambda_in_guaranteed_range() {
        return Err(Error::Domain {
            quantity: "Q",
            detail: format!(
                "lambda = {} exceeds 1/(2 alpha) = {}; no contraction factor is established",
                p.lambda,
                1.0 / (2.0 * p.alpha)
            ),
        });
    }
    let t3 = match tau3(p) {
        Tau3::Root(t) => t,
        Tau3::NoGuaranteedLowerBound => return Err(Error::NoGuaranteedLowerBound),
    };
    let psi3 = psi(t3, p)?;
    let a1 = p.alpha + 1.0;
    Ok(1.0
        - (p.alpha * (1.0 - p.lambda) / 2.0 + p.beta * mu * t3 / 3.0)
            * (2.0 * mu * t3 * t3 * psi3 / (a1 * a1)))
}

/// Everything the `theory` CLI subcommand prints for one parameter tuple.
#[derive(Debug, Clone)]
pub struct TheoryReport {
    pub params: ParamTuple,
    pub p: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub tau3: Tau3,
    pub q_factor: Option<f64>,
    /// feasible only when `mu` is known
    pub m_at_best_tau: Option<f64>,
    pub best_tau: Option<f64>,
    pub t_upper_best: Option<UpperBound>,
    /// bound at a caller-supplied `tau`, when one was given
    pub t_upper_user: Option<(f64, UpperBound)>,
}

impl TheoryReport {
    pub fn compute(params: ParamTuple, user_tau: Option<f64>) -> Result<TheoryReport> {
        let t3 = tau3(&params);
        let q = q_factor(&params).ok();
        let (best_tau, m_best, tub) = if params.mu.is_some() {
            match t_upper_best(&params)? {
                (tau, UpperBound::NoBoundAvailable) => (Some(tau), None, Some(UpperBound::NoBoundAvailable)),
                (tau, b) => (Some(tau), Some(m_tau(tau, &params)?), Some(b)),
            }
        } else {
            (None, None, None)
        };
        let t_upper_user = match user_tau {
            Some(tau) => Some((tau, t_upper(&params, tau)?)),
            None => None,
        };
        Ok(TheoryReport {
            params,
            p: params.p(),
            tau1: tau1(&params),
            tau2: tau2(&params),
            tau3: t3,
            q_factor: q,
            m_at_best_tau: m_best,
            best_tau,
            t_upper_best: tub,
            t_upper_user,
        })
    }

    pub const CSV_HEADER: &'static str = "alpha,beta,lambda,mu,L,tau1,tau2,tau3,Q,p,T_upper";

    pub fn csv_row(&self) -> String {
        let mu = self
            .params
            .mu
            .map_or_else(|| "na".to_string(), |m| m.to_string());
        let tau3 = self
            .tau3
            .value()
            .map_or_else(|| "no-guaranteed-lower-bound".to_string(), |t| t.to_string());
        let q = self
            .q_factor
            .map_or_else(|| "na".to_string(), |q| q.to_string());
        let tu = self
            .t_upper_best
            .map_or_else(|| "na".to_string(), |b| b.to_string());
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.params.alpha,
            self.params.beta,
            self.params.lambda,
            mu,
            self.params.lipschitz,
            self.tau1,
            self.tau2,
            tau3,
            q,
            self.p,
            tu
        )
    }

    /// Aligned key/value lines for terminal output.
    pub fn text_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("{:<12} {}", "alpha", self.params.alpha),
            format!("{:<12} {}", "beta", self.params.beta),
            format!("{:<12} {}", "lambda", self.params.lambda),
            format!(
                "{:<12} {}",
                "mu",
                self.params.mu.map_or_else(|| "na".into(), |m: f64| m.to_string())
            ),
            format!("{:<12} {}", "L", self.params.lipschitz),
            format!("{:<12} {}", "p = 2al", self.p),
            format!("{:<12} {:.12}", "tau1", self.tau1),
            format!("{:<12} {:.12}", "tau2", self.tau2),
        ];
        match self.tau3 {
            Tau3::Root(t) => lines.push(format!("{:<12} {:.12}", "tau3", t)),
            Tau3::NoGuaranteedLowerBound => {
                lines.push(format!("{:<12} no-guaranteed-lower-bound", "tau3"))
            }
        }
        match self.q_factor {
            Some(q) => lines.push(format!("{:<12} {:.12}", "Q", q)),
            None => lines.push(format!("{:<12} na (lambda > 1/(2 alpha) or mu unknown)", "Q")),
        }
        if let (Some(tau), Some(m)) = (self.best_tau, self.m_at_best_tau) {
            lines.push(format!("{:<12} {:.6} (grid argmin)", "tau*", tau));
            lines.push(format!("{:<12} {:.6}", "M(tau*)", m));
        }
        if let Some(b) = &self.t_upper_best {
            lines.push(format!("{:<12} {}", "T_upper", b));
        }
        if let Some((tau, b)) = &self.t_upper_user {
            lines.push(format!("{:<12} {} (at tau = {})", "T_upper(tau)", b, tau));
        }
        lines
    }
}
