//! Preconditioned conjugate gradients over abstract operators.

use crate::error::{Error, Result};

/// A linear map applied as `y = Op x`. Implemented by the coefficient operators,
/// by the inverse tau preconditioners and by any `Fn(&[f64], &mut [f64])`.
pub trait LinearOperator {
    fn apply(&self, x: &[f64], y: &mut [f64]);
}

impl<F> LinearOperator for F
where
    F: Fn(&[f64], &mut [f64]),
{
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self(x, y)
    }
}

/// The identity, for unpreconditioned CG.
#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl LinearOperator for Identity {
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcgOptions {
    pub tol: f64,
    pub maxit: usize,
}

impl Default for PcgOptions {
    fn default() -> Self {
        PcgOptions {
            tol: 1e-8,
            maxit: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveStats {
    pub iterations: usize,
    /// `||r_k|| / ||r_0||` for k = 0, 1, ...; the first entry is 1 unless `b = 0`.
    pub relative_residuals: Vec<f64>,
    pub converged: bool,
    /// `||b - A x|| / ||b||` recomputed from scratch at exit.
    pub true_relative_residual: f64,
}

impl SolveStats {
    pub fn final_relative_residual(&self) -> f64 {
        *self.relative_residuals.last().unwrap_or(&0.0)
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Solves `A x = b` from the zero initial guess, stopping at the first iterate with
/// `||r_k|| / ||r_0|| < tol`. Both `a` and `pinv` must be symmetric positive definite.
///
/// Running out of iterations is not an error: the last iterate is returned with
/// `converged = false`. Non-finite values or a breakdown of the recurrence abort.
pub fn pcg<A, P>(a: &A, pinv: &P, b: &[f64], opts: PcgOptions) -> Result<(Vec<f64>, SolveStats)>
where
    A: LinearOperator + ?Sized,
    P: LinearOperator + ?Sized,
{
    if !(opts.tol > 0.0) {
        return Err(Error::param("tol", format!("must be positive, got {}", opts.tol)));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { iteration: 0 });
    }
    let n = b.len();
    let mut x = vec![0.0; n];
    let r0 = norm(b);
    if r0 == 0.0 {
        return Ok((
            x,
            SolveStats {
                iterations: 0,
                relative_residuals: vec![0.0],
                converged: true,
                true_relative_residual: 0.0,
            },
        ));
    }

    let mut r = b.to_vec();
    let mut z = vec![0.0; n];
    let mut q = vec![0.0; n];
    pinv.apply(&r, &mut z);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut history = vec![1.0];
    let mut converged = false;
    let mut it = 0;

    while it < opts.maxit {
        it += 1;
        a.apply(&p, &mut q);
        let pq = dot(&p, &q);
        if !pq.is_finite() || !rz.is_finite() || pq <= 0.0 {
            return Err(Error::NonFinite { iteration: it });
        }
        let step = rz / pq;
        for i in 0..n {
            x[i] += step * p[i];
            r[i] -= step * q[i];
        }
        let rel = norm(&r) / r0;
        if !rel.is_finite() {
            return Err(Error::NonFinite { iteration: it });
        }
        history.push(rel);
        if rel < opts.tol {
            converged = true;
            break;
        }
        pinv.apply(&r, &mut z);
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }

    a.apply(&x, &mut q);
    let true_rel = b.iter().zip(&q).map(|(bi, qi)| (bi - qi).powi(2)).sum::<f64>().sqrt() / r0;
    if converged && true_rel > 10.0 * opts.tol {
        converged = false;
    }
    Ok((
        x,
        SolveStats {
            iterations: it,
            relative_residuals: history,
            converged,
            true_relative_residual: true_rel,
        },
    ))
}

/// [`pcg`] that turns non-convergence into an error.
pub fn pcg_strict<A, P>(a: &A, pinv: &P, b: &[f64], opts: PcgOptions) -> Result<(Vec<f64>, SolveStats)>
where
    A: LinearOperator + ?Sized,
    P: LinearOperator + ?Sized,
{
    let (x, stats) = pcg(a, pinv, b, opts)?;
    if !stats.converged {
        return Err(Error::NotConverged {
            iterations: stats.iterations,
            residual: stats.final_relative_residual().max(stats.true_relative_residual),
        });
    }
    Ok((x, stats))
}
