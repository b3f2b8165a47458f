#![allow(dead_code)]
//! Dense reference constructions shared by the integration tests. Everything here
//! is built entrywise from the defining formulas, independent of the fast paths.

use std::f64::consts::PI;

use fracsolve::{DenseMatrix, FracOperator1D, FracOperator2D};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_vec(r: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()
}

pub fn to_na(a: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice())
}

pub fn mul(a: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (a * DVector::from_column_slice(v)).as_slice().to_vec()
}

/// `||a - b||_inf / max(||b||_inf, tiny)`
pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let num = a.iter().zip(b).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
    let den = b.iter().fold(0.0_f64, |m, y| m.max(y.abs())).max(1e-300);
    num / den
}

pub fn toeplitz(c: &[f64]) -> DMatrix<f64> {
    let m = c.len();
    DMatrix::from_fn(m, m, |i, j| c[i.abs_diff(j)])
}

/// `sqrt(2/(M+1)) sin(i j pi / (M+1))`, 1-based indices.
pub fn dst(m: usize) -> DMatrix<f64> {
    let h = m as f64 + 1.0;
    DMatrix::from_fn(m, m, |i, j| {
        (2.0 / h).sqrt() * ((i + 1) as f64 * (j + 1) as f64 * PI / h).sin()
    })
}

/// `c_0 + 2 sum_{k>=1} c_k cos(k j pi / (M+1))`, summed directly.
pub fn tau_eigs_direct(c: &[f64]) -> Vec<f64> {
    let m = c.len();
    let h = m as f64 + 1.0;
    (1..=m)
        .map(|j| {
            c[0] + 2.0
                * (1..m)
                    .map(|k| c[k] * (k as f64 * j as f64 * PI / h).cos())
                    .sum::<f64>()
        })
        .collect()
}

pub fn spectral(s: &DMatrix<f64>, lambda: &[f64]) -> DMatrix<f64> {
    s * DMatrix::from_diagonal(&DVector::from_column_slice(lambda)) * s
}

pub fn op1d(op: &FracOperator1D) -> DMatrix<f64> {
    let m = op.dim();
    let t = toeplitz(op.axis.g.first_column()) * op.axis.cbar;
    DMatrix::identity(m, m) * op.params.shift() - t * op.params.diffusion()
}

pub fn op2d(op: &FracOperator2D) -> DMatrix<f64> {
    let (m1, m2) = op.shape();
    let t1 = toeplitz(op.axis1.g.first_column()) * op.axis1.cbar;
    let t2 = toeplitz(op.axis2.g.first_column()) * op.axis2.cbar;
    let t = t1.kronecker(&DMatrix::identity(m2, m2)) + DMatrix::identity(m1, m1).kronecker(&t2);
    DMatrix::identity(m1 * m2, m1 * m2) * op.params.shift() - t * op.params.diffusion()
}

/// `tau(A)` of a 1D operator, assembled as `S diag(lambda) S` with directly summed
/// eigenvalues.
pub fn tau1d(op: &FracOperator1D) -> DMatrix<f64> {
    let c = op.axis.g.first_column();
    let k = op.params.diffusion() * op.axis.cbar;
    let lambda: Vec<f64> = tau_eigs_direct(c)
        .into_iter()
        .map(|l| op.params.shift() - k * l)
        .collect();
    spectral(&dst(c.len()), &lambda)
}

pub fn tau2d(op: &FracOperator2D) -> DMatrix<f64> {
    let (m1, m2) = op.shape();
    let t1 = spectral(&dst(m1), &tau_eigs_direct(op.axis1.g.first_column())) * op.axis1.cbar;
    let t2 = spectral(&dst(m2), &tau_eigs_direct(op.axis2.g.first_column())) * op.axis2.cbar;
    let t = t1.kronecker(&DMatrix::identity(m2, m2)) + DMatrix::identity(m1, m1).kronecker(&t2);
    DMatrix::identity(m1 * m2, m1 * m2) * op.params.shift() - t * op.params.diffusion()
}

/// Random symmetric Toeplitz first column with a dominant diagonal.
pub fn rand_column(r: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let mut c = rand_vec(r, m);
    c[0] = 2.0 + r.gen_range(0.0..1.0);
    c
}
