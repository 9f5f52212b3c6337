//! Quadratic objectives `f(x) = 1/2 x'Ax + b'x` with A symmetric positive
//! definite, including the 3-d ill-conditioned diagonal example.

use nalgebra::{DMatrix, DVector};

use crate::{Error, Objective, Result, Rng};

/// Symmetric positive-definite quadratic data.
#[derive(Debug, Clone)]
pub struct QuadraticSpec {
    pub matrix: DMatrix<f64>,
    pub offset: DVector<f64>,
}

impl QuadraticSpec {
    /// Validates symmetry (within 1e-12 of the matrix scale) and positive
    /// definiteness, then computes exact eigen-extremes for `mu` and `L`.
    pub fn new(matrix: DMatrix<f64>, offset: DVector<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || matrix.ncols() != n || offset.len() != n {
            return Err(Error::InvalidArgument(
                "quadratic matrix must be square and match the offset length".into(),
            ));
        }
        let scale = matrix.amax().max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if (matrix[(i, j)] - matrix[(j, i)]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(QuadraticSpec { matrix, offset })
    }

    /// Builds the objective, computing `mu`, `L` by symmetric
    /// eigendecomposition and the minimizer by direct solve.
    pub fn objective(&self) -> Result<Objective> {
        let eigs = self.matrix.clone().symmetric_eigenvalues();
        let mu = eigs.min();
        let l = eigs.max();
        if mu <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "matrix is not positive definite (lambda_min = {mu})"
            )));
        }
        quadratic_objective(self.matrix.clone(), self.offset.clone(), mu, l)
    }
}

/// Assembles the objective bundle given the exact `mu`, `L` and with the
/// minimizer from a refined Cholesky solve of `A x* = -b`.
fn quadratic_objective(a: DMatrix<f64>, b: DVector<f64>, mu: f64, l: f64) -> Result<Objective> {
    let chol = a
        .clone()
        .cholesky()
        .ok_or_else(|| Error::InvalidArgument("matrix is not positive definite".into()))?;
    let mut xstar = chol.solve(&(-&b));
    // two rounds of iterative refinement keep the residual near roundoff
    for _ in 0..2 {
        let residual = &a * &xstar + &b;
        xstar -= chol.solve(&residual);
    }
    let fstar = 0.5 * (&a * &xstar).dot(&xstar) + b.dot(&xstar);

    let (a_val, b_val) = (a.clone(), b.clone());
    let (a_grad, b_grad) = (a.clone(), b);
    let a_hvp = a;
    Ok(Objective::new(
        a_val.nrows(),
        move |x| 0.5 * (&a_val * x).dot(x) + b_val.dot(x),
        move |x| &a_grad * x + &b_grad,
        l,
    )
    .with_hvp(move |_, v| &a_hvp * v)
    .with_strong_mu(mu)
    .with_reference_min(fstar)
    .with_minimizer(xstar))
}

/// The 3-dimensional diagonal quadratic
/// `f(x) = 1/2 (x1^2 + rho x2^2 + rho^2 x3^2)` with conditioning `rho^2`.
pub fn make_illposed_quadratic(rho: f64) -> Result<Objective> {
    if !(rho > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "ill-posed quadratic needs rho > 1, got {rho}"
        )));
    }
    let d = DVector::from_vec(vec![1.0, rho, rho * rho]);
    let d_val = d.clone();
    let d_grad = d.clone();
    let d_hvp = d;
    Ok(Objective::new(
        3,
        move |x| 0.5 * x.iter().zip(d_val.iter()).map(|(xi, di)| di * xi * xi).sum::<f64>(),
        move |x| x.component_mul(&d_grad),
        rho * rho,
    )
    .with_hvp(move |_, v| v.component_mul(&d_hvp))
    .with_strong_mu(1.0)
    .with_reference_min(0.0)
    .with_minimizer(DVector::zeros(3)))
}

/// Random SPD quadratic: `A = Q diag(lambda) Q'` with eigenvalues drawn
/// uniformly in `(eig_low, eig_high)`, `Q` a seeded Haar-like rotation
/// (QR of a Gaussian matrix with sign-fixed diagonal), and `b` standard
/// Gaussian. `mu` and `L` are the chosen extreme eigenvalues.
pub fn make_random_quadratic(
    n: usize,
    eig_low: f64,
    eig_high: f64,
    rng: &mut Rng,
) -> Result<Objective> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if !(0.0 < eig_low && eig_low < eig_high) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < eig_low < eig_high, got ({eig_low}, {eig_high})"
        )));
    }
    let eigs = DVector::from_fn(n, |_, _| rng.uniform_in(eig_low, eig_high));
    let q = random_orthogonal(n, rng);
    let b = rng.normal_vector(n);

    let mut a = &q * DMatrix::from_diagonal(&eigs) * q.transpose();
    // symmetrize away the last-ulp asymmetry of the triple product
    for i in 0..n {
        for j in (i + 1)..n {
            let s = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = s;
            a[(j, i)] = s;
        }
    }
    quadratic_objective(a, b, eigs.min(), eigs.max())
}

/// Haar-like random rotation: QR of a Gaussian matrix, with the sign of
/// each diagonal entry of R folded into Q so the factorization is unique.
fn random_orthogonal(n: usize, rng: &mut Rng) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.normal());
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}
