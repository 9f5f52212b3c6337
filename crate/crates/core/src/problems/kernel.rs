//! Kernel regularized learning, sketched to `m` coordinates.
//!
//! The full problem lives on an RBF Gram matrix `K` over `n` samples; a
//! selection sketch `G` (m distinct rows of the identity) restricts the
//! coefficients to `R^m`, so only the sampled rows `GK` and the core
//! `G K G'` are ever formed.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Objective, Result, Rng};

use super::power_iteration;

/// RBF kernel `exp(-1/2 |a - b|^2)`.
pub fn rbf(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (-0.5 * (a - b).norm_squared()).exp()
}

/// Feature matrix (one sample per row) plus integer labels.
/// Binary tasks use labels in `{0,1}`; q-class tasks use `{1..q}`.
#[derive(Debug, Clone)]
pub struct KernelDataset {
    pub features: DMatrix<f64>,
    pub labels: Vec<usize>,
}

impl KernelDataset {
    pub fn n(&self) -> usize {
        self.features.nrows()
    }

    pub fn dim(&self) -> usize {
        self.features.ncols()
    }

    /// Gram minor `K[idx, idx]`, used to spot-check positive
    /// semidefiniteness without forming the full matrix.
    pub fn gram_minor(&self, idx: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(idx.len(), idx.len(), |i, j| {
            rbf(
                &self.features.row(idx[i]).transpose(),
                &self.features.row(idx[j]).transpose(),
            )
        })
    }

    /// CSV export: header row, then one sample per line with the feature
    /// columns followed by the label column.
    pub fn to_csv(&self) -> String {
        let d = self.dim();
        let mut out = String::new();
        for j in 0..d {
            out.push_str(&format!("f{j},"));
        }
        out.push_str("label\n");
        for i in 0..self.n() {
            for j in 0..d {
                out.push_str(&format!("{},", self.features[(i, j)]));
            }
            out.push_str(&format!("{}\n", self.labels[i]));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty dataset csv".into()))?;
        let d = header.split(',').count() - 1;
        let mut rows: Vec<f64> = Vec::new();
        let mut labels = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != d + 1 {
                return Err(Error::Parse(format!(
                    "line {}: expected {} fields, got {}",
                    lineno + 2,
                    d + 1,
                    fields.len()
                )));
            }
            for f in &fields[..d] {
                rows.push(
                    f.parse::<f64>()
                        .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 2)))?,
                );
            }
            labels.push(
                fields[d]
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 2)))?,
            );
        }
        let n = labels.len();
        if n == 0 {
            return Err(Error::Parse("dataset csv has no samples".into()));
        }
        Ok(KernelDataset {
            features: DMatrix::from_row_slice(n, d, &rows),
            labels,
        })
    }
}

/// A sketched kernel problem: dataset, the `m` sampled coordinates, and
/// the ridge weight `theta`.
#[derive(Debug, Clone)]
pub struct KernelProblemSpec {
    pub dataset: KernelDataset,
    pub sketch: Vec<usize>,
    pub theta: f64,
}

impl KernelProblemSpec {
    pub fn m(&self) -> usize {
        self.sketch.len()
    }

    /// `(GK, GKG')`: the sampled kernel rows and the sketched core.
    fn sketch_gram(&self) -> (DMatrix<f64>, DMatrix<f64>) {
        let n = self.dataset.n();
        let m = self.m();
        let feats = &self.dataset.features;
        let gk = DMatrix::from_fn(m, n, |i, j| {
            rbf(
                &feats.row(self.sketch[i]).transpose(),
                &feats.row(j).transpose(),
            )
        });
        let gkg = DMatrix::from_fn(m, m, |i, j| gk[(i, self.sketch[j])]);
        (gk, gkg)
    }
}

/// Simulated data from a Gaussian teacher: standard normal features, and
/// labels sampled from the teacher's logistic (q = 2, labels `{0,1}`) or
/// softmax (q >= 3, labels `{1..q}`) probabilities. The sketch is `m`
/// distinct indices drawn uniformly.
pub fn generate_kernel_data(
    n: usize,
    d: usize,
    q: usize,
    m: usize,
    theta: f64,
    rng: &mut Rng,
) -> Result<KernelProblemSpec> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument("n and d must be positive".into()));
    }
    if q < 2 {
        return Err(Error::InvalidArgument(format!("need q >= 2, got {q}")));
    }
    if m == 0 || m > n {
        return Err(Error::InvalidArgument(format!(
            "sketch size must satisfy 1 <= m <= n, got m={m}, n={n}"
        )));
    }
    if !(theta > 0.0) {
        return Err(Error::InvalidArgument(format!("theta must be positive, got {theta}")));
    }
    let features = DMatrix::from_fn(n, d, |_, _| rng.normal());
    let labels = if q == 2 {
        let teacher = rng.normal_vector(d);
        (0..n)
            .map(|i| {
                let score = features.row(i).transpose().dot(&teacher);
                let p = 1.0 / (1.0 + (-score).exp());
                usize::from(rng.uniform() < p)
            })
            .collect()
    } else {
        let teachers = DMatrix::from_fn(d, q - 1, |_, _| rng.normal());
        (0..n)
            .map(|i| {
                let scores = features.row(i) * &teachers;
                let mx = scores.max().max(0.0);
                let mut weights: Vec<f64> = scores.iter().map(|s| (s - mx).exp()).collect();
                weights.push((-mx).exp()); // reference category q
                let total: f64 = weights.iter().sum();
                let u = rng.uniform() * total;
                let mut acc = 0.0;
                for (j, w) in weights.iter().enumerate() {
                    acc += w;
                    if u < acc {
                        return j + 1;
                    }
                }
                q
            })
            .collect()
    };
    let sketch = rng.sample_distinct(n, m);
    Ok(KernelProblemSpec {
        dataset: KernelDataset { features, labels },
        sketch,
        theta,
    })
}

/// Sketched kernel logistic regression over `x in R^m`:
/// negative log-likelihood of `sigma((K G' x)_i)` plus
/// `theta/2 x' G K G' x`.
pub fn make_kernel_logistic(spec: &KernelProblemSpec) -> Result<Objective> {
    if let Some(bad) = spec.dataset.labels.iter().find(|&&b| b > 1) {
        return Err(Error::InvalidArgument(format!(
            "logistic task needs binary labels in {{0,1}}, found {bad}"
        )));
    }
    let (gk, gkg) = spec.sketch_gram();
    let labels: DVector<f64> = DVector::from_iterator(
        spec.dataset.n(),
        spec.dataset.labels.iter().map(|&b| b as f64),
    );
    let theta = spec.theta;
    let l = theta * power_iteration(spec.m(), |v| &gkg * v, 1e-10, 100_000)
        + 0.25 * power_iteration(spec.m(), |v| &gk * (gk.transpose() * v), 1e-10, 100_000);

    let (gk_v, gkg_v, labels_v) = (gk.clone(), gkg.clone(), labels.clone());
    Ok(Objective::new(
        spec.m(),
        move |x| {
            let eta = gk_v.transpose() * x;
            let loss: f64 = eta
                .iter()
                .zip(labels_v.iter())
                .map(|(&e, &b)| e.max(0.0) - b * e + (-e.abs()).exp().ln_1p())
                .sum();
            loss + 0.5 * theta * (&gkg_v * x).dot(x)
        },
        move |x| {
            let eta = gk.transpose() * x;
            let p = eta.map(|e| 1.0 / (1.0 + (-e).exp()));
            &gk * (p - &labels) + &gkg * x * theta
        },
        l,
    ))
}

/// Per-row class probabilities of the sketched multinomial model, with the
/// q-th category as reference: an n-by-(q-1) matrix; the reference
/// probability is one minus the row sum.
pub fn multinomial_probabilities(
    gk: &DMatrix<f64>,
    coeffs: &DMatrix<f64>,
) -> DMatrix<f64> {
    let eta = gk.transpose() * coeffs;
    let n = eta.nrows();
    let qm1 = eta.ncols();
    let mut p = DMatrix::zeros(n, qm1);
    for i in 0..n {
        let mx = eta.row(i).max().max(0.0);
        let mut denom = (-mx).exp();
        for j in 0..qm1 {
            denom += (eta[(i, j)] - mx).exp();
        }
        for j in 0..qm1 {
            p[(i, j)] = (eta[(i, j)] - mx).exp() / denom;
        }
    }
    p
}

/// Sketched kernel multinomial regression over `vec(X)`, `X in R^{m x (q-1)}`,
/// with the q-th category as reference.
pub fn make_kernel_multinomial(spec: &KernelProblemSpec, q: usize) -> Result<Objective> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("need q >= 2, got {q}")));
    }
    if let Some(bad) = spec
        .dataset
        .labels
        .iter()
        .find(|&&b| b == 0 || b > q)
    {
        return Err(Error::InvalidArgument(format!(
            "multinomial labels must lie in 1..={q}, found {bad}"
        )));
    }
    let (gk, gkg) = spec.sketch_gram();
    let labels = spec.dataset.labels.clone();
    let m = spec.m();
    let n = spec.dataset.n();
    let theta = spec.theta;
    let l = theta * power_iteration(m, |v| &gkg * v, 1e-10, 100_000)
        + 0.5 * power_iteration(m, |v| &gk * (gk.transpose() * v), 1e-10, 100_000);

    let (gk_v, gkg_v, labels_v) = (gk.clone(), gkg.clone(), labels.clone());
    Ok(Objective::new(
        m * (q - 1),
        move |x| {
            let coeffs = DMatrix::from_column_slice(m, q - 1, x.as_slice());
            let eta = gk_v.transpose() * &coeffs;
            let mut loss = 0.0;
            for i in 0..n {
                let mx = eta.row(i).max().max(0.0);
                let mut denom = (-mx).exp();
                for j in 0..(q - 1) {
                    denom += (eta[(i, j)] - mx).exp();
                }
                let log_denom = mx + denom.ln();
                let b = labels_v[i];
                // -log p_{i,b}: eta of the reference class is zero
                let eta_b = if b < q { eta[(i, b - 1)] } else { 0.0 };
                loss += log_denom - eta_b;
            }
            let mut reg = 0.0;
            for j in 0..(q - 1) {
                let col = coeffs.column(j);
                reg += (&gkg_v * col).dot(&col);
            }
            loss + 0.5 * theta * reg
        },
        move |x| {
            let coeffs = DMatrix::from_column_slice(m, q - 1, x.as_slice());
            let p = multinomial_probabilities(&gk, &coeffs);
            let mut b = DMatrix::zeros(n, q - 1);
            for (i, &lab) in labels.iter().enumerate() {
                if lab < q {
                    b[(i, lab - 1)] = 1.0;
                }
            }
            let grad = &gk * (p - b) + &gkg * coeffs * theta;
            DVector::from_column_slice(grad.as_slice())
        },
        l,
    ))
}
