//! Dense symmetric eigenvalues (Jacobi rotations) and the cluster diagnostics for
//! preconditioned spectra.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::operator::FracOperator;
use crate::tau::TauPrecond;

/// Largest dimension accepted by [`sym_eigs`].
pub const EIG_LIMIT: usize = 4096;
/// Largest 1D size accepted by [`precond_spectrum`].
pub const SPECTRUM_LIMIT_1D: usize = 1 << 9;
/// Largest per-axis size accepted by [`precond_spectrum`] in 2D.
pub const SPECTRUM_LIMIT_2D: usize = 1 << 5;

const OFF_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 60;

fn off_norm_sq(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j] * a[i * n + j];
            }
        }
    }
    s
}

/// Round-robin pairing: in every round each index appears in at most one pair,
/// and over `m - 1` rounds every pair appears once (`m` even).
fn round_robin(m: usize, round: usize) -> impl Iterator<Item = (usize, usize)> {
    let k = m - 1;
    (0..m / 2).map(move |i| {
        if i == 0 {
            (round % k, k)
        } else {
            ((round + i) % k, (round + k - i) % k)
        }
    })
}

/// All eigenvalues of a real symmetric matrix, ascending.
///
/// Cyclic Jacobi with a round-robin ordering: each round applies `n/2` disjoint
/// rotations, first to rows, then to columns. Iterates until the off-diagonal
/// Frobenius norm is at most `1e-12 ||A||_F`.
pub fn sym_eigs(a: &DenseMatrix) -> Result<Vec<f64>> {
    let n = a.require_square()?;
    if n > EIG_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: EIG_LIMIT,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let scale = a.max_abs().max(1.0);
    let asym = a.asymmetry();
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetric(asym));
    }
    let mut w = a.as_slice().to_vec();
    let total = a.frobenius();
    let target = (OFF_TOL * total).powi(2);
    let skip = OFF_TOL * total / n as f64;

    let m = n + n % 2;
    let mut rot: Vec<(usize, usize, f64, f64)> = Vec::with_capacity(m / 2);
    let mut sweeps = 0;
    while off_norm_sq(&w, n) > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::param("matrix", "Jacobi iteration did not converge"));
        }
        sweeps += 1;
        for round in 0..m - 1 {
            rot.clear();
            for (p, q) in round_robin(m, round) {
                if p >= n || q >= n {
                    continue;
                }
                let (p, q) = (p.min(q), p.max(q));
                let apq = w[p * n + q];
                if apq.abs() <= skip {
                    continue;
                }
                let theta = (w[q * n + q] - w[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                rot.push((p, q, c, t * c));
            }
            if rot.is_empty() {
                continue;
            }
            // rows: A <- J^T A
            for &(p, q, c, s) in &rot {
                let (lo, hi) = w.split_at_mut(q * n);
                let rp = &mut lo[p * n..(p + 1) * n];
                let rq = &mut hi[..n];
                for (x, y) in rp.iter_mut().zip(rq.iter_mut()) {
                    let (xp, xq) = (*x, *y);
                    *x = c * xp - s * xq;
                    *y = s * xp + c * xq;
                }
            }
            // columns: A <- A J
            for row in w.chunks_exact_mut(n) {
                for &(p, q, c, s) in &rot {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = c * xp - s * xq;
                    row[q] = s * xp + c * xq;
                }
            }
            for &(p, q, _, _) in &rot {
                w[p * n + q] = 0.0;
                w[q * n + p] = 0.0;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| w[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Eigenvalues of `P^{-1/2} A P^{-1/2}` (the spectrum of `P^{-1} A`), ascending.
pub fn precond_spectrum(op: &FracOperator, p: &TauPrecond) -> Result<Vec<f64>> {
    check_spectrum_size(op)?;
    let n = op.dim();
    if p.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: p.dim(),
        });
    }
    let a = op.to_dense()?;
    // rows of C^T = P^{-1/2} A[:, j]; A is symmetric so its rows are its columns
    let mut ct = Vec::with_capacity(n * n);
    for j in 0..n {
        ct.extend(p.apply_inv_sqrt(a.row(j))?);
    }
    let c = DenseMatrix::from_row_major(n, n, ct)?.transpose();
    let mut b = Vec::with_capacity(n * n);
    for i in 0..n {
        b.extend(p.apply_inv_sqrt(c.row(i))?);
    }
    let b = DenseMatrix::from_row_major(n, n, b)?;
    let sym = b.axpby(0.5, &b.transpose(), 0.5)?;
    sym_eigs(&sym)
}

/// Eigenvalues of the unpreconditioned coefficient matrix, ascending.
pub fn plain_spectrum(op: &FracOperator) -> Result<Vec<f64>> {
    check_spectrum_size(op)?;
    sym_eigs(&op.to_dense()?)
}

/// Eigenvalues of `A - P`, ascending.
pub fn tau_error_spectrum(op: &FracOperator, p: &TauPrecond) -> Result<Vec<f64>> {
    check_spectrum_size(op)?;
    let diff = op.to_dense()?.axpby(1.0, &p.to_dense(), -1.0)?;
    let sym = diff.axpby(0.5, &diff.transpose(), 0.5)?;
    sym_eigs(&sym)
}

fn check_spectrum_size(op: &FracOperator) -> Result<()> {
    match op {
        FracOperator::OneD(o) if o.dim() > SPECTRUM_LIMIT_1D => Err(Error::TooLarge {
            size: o.dim(),
            limit: SPECTRUM_LIMIT_1D,
        }),
        FracOperator::TwoD(o) if o.axis1.m.max(o.axis2.m) > SPECTRUM_LIMIT_2D => {
            Err(Error::TooLarge {
                size: o.axis1.m.max(o.axis2.m),
                limit: SPECTRUM_LIMIT_2D,
            })
        }
        _ => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport {
    pub center: f64,
    /// ascending
    pub radii: Vec<f64>,
    /// fraction of eigenvalues in `[center - r, center + r]`, one per radius
    pub fractions: Vec<f64>,
    /// `(radius, number of eigenvalues outside the interval)`
    pub outlier_count_at: Vec<(f64, usize)>,
}

impl ClusterReport {
    pub fn outliers(&self, radius: f64) -> Option<usize> {
        self.outlier_count_at
            .iter()
            .find(|(r, _)| *r == radius)
            .map(|&(_, c)| c)
    }
}

pub fn cluster_report(eigs: &[f64], center: f64, radii: &[f64]) -> Result<ClusterReport> {
    if eigs.is_empty() {
        return Err(Error::param("eigs", "must be nonempty"));
    }
    let mut radii = radii.to_vec();
    if radii.iter().any(|r| !(*r >= 0.0)) {
        return Err(Error::param("radii", "must be nonnegative"));
    }
    radii.sort_by(f64::total_cmp);
    let n = eigs.len();
    let mut fractions = Vec::with_capacity(radii.len());
    let mut outlier_count_at = Vec::with_capacity(radii.len());
    for &r in &radii {
        let inside = eigs.iter().filter(|&&e| (e - center).abs() <= r).count();
        fractions.push(inside as f64 / n as f64);
        outlier_count_at.push((r, n - inside));
    }
    Ok(ClusterReport {
        center,
        radii,
        fractions,
        outlier_count_at,
    })
}
