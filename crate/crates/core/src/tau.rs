//! The tau algebra: matrices diagonalised by the DST-I matrix
//! `S = [sqrt(2/(M+1)) sin(i j pi / (M+1))]`, and the tau preconditioners built on it.
//!
//! For a symmetric Toeplitz `T` with first column `c`, `tau(T) = T - H` where `H` is
//! the Hankel matrix with first column `[c_2, ..., c_{M-1}, 0, 0]` and last column
//! its flip; entrywise (1-based) `H_ij = c_{i+j} + c_{2(M+1)-(i+j)}` with `c_k = 0`
//! outside `0..M`. Its eigenvalues are `c_0 + 2 sum_k c_k cos(k j pi / (M+1))`.

use rustfft::num_complex::Complex64;

use crate::dense::DenseMatrix;
use crate::error::{check_len, Error, Result};
use crate::fft::{self, FftPair};
use crate::krylov::LinearOperator;
use crate::operator::{transpose, FracOperator, FracOperator1D, FracOperator2D};
use crate::toeplitz::SymToeplitz;

/// Largest size accepted by [`tau_dense`].
pub const TAU_DENSE_LIMIT: usize = 512;

/// Fast DST-I of one size, computed through the odd extension of length `2(M+1)`.
#[derive(Debug, Clone)]
pub struct Dst1Plan {
    m: usize,
    plan: FftPair,
    scale: f64,
}

impl Dst1Plan {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::param("M", "transform size must be positive"));
        }
        Ok(Dst1Plan {
            m,
            plan: fft::plan(2 * (m + 1)),
            scale: (2.0 / (m as f64 + 1.0)).sqrt(),
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.m, v.len())?;
        let mut out = vec![0.0; self.m];
        self.apply_rows(v, &mut out);
        Ok(out)
    }

    /// Transforms every contiguous length-M row of `input`. Two real rows share one
    /// complex transform: the odd extension of `a + i b` maps to `2 S b - 2 i S a`
    /// (up to the normalisation).
    pub(crate) fn apply_rows(&self, input: &[f64], output: &mut [f64]) {
        let m = self.m;
        let len = 2 * (m + 1);
        let rows = input.len() / m;
        debug_assert_eq!(rows * m, input.len());
        let pairs = rows.div_ceil(2);
        let mut buf = vec![Complex64::new(0.0, 0.0); pairs * len];
        for p in 0..pairs {
            let chunk = &mut buf[p * len..(p + 1) * len];
            let r0 = &input[2 * p * m..(2 * p + 1) * m];
            let r1 = (2 * p + 1 < rows).then(|| &input[(2 * p + 1) * m..(2 * p + 2) * m]);
            for n in 0..m {
                let z = Complex64::new(r0[n], r1.map_or(0.0, |r| r[n]));
                chunk[n + 1] = z;
                chunk[len - n - 1] = -z;
            }
        }
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.plan.forward.get_inplace_scratch_len()];
        self.plan.forward.process_with_scratch(&mut buf, &mut scratch);
        let half = 0.5 * self.scale;
        for p in 0..pairs {
            let chunk = &buf[p * len + 1..p * len + 1 + m];
            for (o, z) in output[2 * p * m..(2 * p + 1) * m].iter_mut().zip(chunk) {
                *o = -z.im * half;
            }
            if 2 * p + 1 < rows {
                for (o, z) in output[(2 * p + 1) * m..(2 * p + 2) * m].iter_mut().zip(chunk) {
                    *o = z.re * half;
                }
            }
        }
    }

    /// The transform matrix itself, for oracle comparisons.
    pub fn to_dense(&self) -> DenseMatrix {
        dst1_matrix(self.m)
    }
}

/// `S_M` assembled entrywise from the sine formula.
pub fn dst1_matrix(m: usize) -> DenseMatrix {
    let h = std::f64::consts::PI / (m as f64 + 1.0);
    let s = (2.0 / (m as f64 + 1.0)).sqrt();
    DenseMatrix::from_fn(m, m, |i, j| s * (((i + 1) * (j + 1)) as f64 * h).sin())
}

/// Eigenvalues of `tau(T)` ordered by sine mode `j = 1..=M`, via one FFT of the even
/// extension of the first column.
pub fn tau_eigs(t: &SymToeplitz) -> Vec<f64> {
    let m = t.dim();
    let len = 2 * (m + 1);
    let c = t.first_column();
    let mut z = vec![0.0; len];
    z[0] = c[0];
    for k in 1..m {
        z[k] = c[k];
        z[len - k] = c[k];
    }
    let spec = fft::real_dft_re(&z);
    spec[1..=m].to_vec()
}

/// Dense `tau(T)` (oracle sizes only).
pub fn tau_dense(t: &SymToeplitz) -> Result<DenseMatrix> {
    let m = t.dim();
    if m > TAU_DENSE_LIMIT {
        return Err(Error::TooLarge {
            size: m,
            limit: TAU_DENSE_LIMIT,
        });
    }
    let wrap = 2 * (m + 1);
    Ok(DenseMatrix::from_fn(m, m, |i, j| {
        let (i1, j1) = (i + 1, j + 1);
        let hankel = t.coeff(i1 + j1) + t.coeff(wrap - (i1 + j1));
        t.coeff(i.abs_diff(j)) - hankel
    }))
}

fn check_positive(lambda: &[f64]) -> Result<()> {
    match lambda.iter().position(|&l| !(l > 0.0)) {
        Some(index) => Err(Error::NonPositivePreconditioner {
            index,
            value: lambda[index],
        }),
        None => Ok(()),
    }
}

/// `P = (1 + s h_t) I - eps^2 h_t cbar tau(G)`, stored as its eigenvalues.
#[derive(Debug, Clone)]
pub struct TauPrecond1D {
    lambda: Vec<f64>,
    plan: Dst1Plan,
}

impl TauPrecond1D {
    pub fn new(op: &FracOperator1D) -> Result<Self> {
        let k = op.params.diffusion() * op.axis.cbar;
        let shift = op.params.shift();
        let lambda: Vec<f64> = tau_eigs(&op.axis.g).into_iter().map(|t| shift - k * t).collect();
        Self::from_eigenvalues(lambda)
    }

    /// Preconditioner `S diag(lambda) S` from its eigenvalues.
    pub fn from_eigenvalues(lambda: Vec<f64>) -> Result<Self> {
        check_positive(&lambda)?;
        let plan = Dst1Plan::new(lambda.len())?;
        Ok(TauPrecond1D { lambda, plan })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.lambda
    }

    fn spectral_apply(&self, v: &[f64], out: &mut [f64], f: impl Fn(f64) -> f64) {
        let mut tmp = vec![0.0; v.len()];
        self.plan.apply_rows(v, &mut tmp);
        for (t, &l) in tmp.iter_mut().zip(&self.lambda) {
            *t *= f(l);
        }
        self.plan.apply_rows(&tmp, out);
    }

    /// `P^{-1} v`
    pub fn solve(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), v.len())?;
        let mut out = vec![0.0; v.len()];
        self.spectral_apply(v, &mut out, |l| 1.0 / l);
        Ok(out)
    }

    /// `P v`
    pub fn apply_forward(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), v.len())?;
        let mut out = vec![0.0; v.len()];
        self.spectral_apply(v, &mut out, |l| l);
        Ok(out)
    }

    /// `P^{-1/2} v`
    pub fn apply_inv_sqrt(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), v.len())?;
        let mut out = vec![0.0; v.len()];
        self.spectral_apply(v, &mut out, |l| 1.0 / l.sqrt());
        Ok(out)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let s = self.plan.to_dense();
        s.matmul(&DenseMatrix::diag(&self.lambda))
            .and_then(|sd| sd.matmul(&s))
            .expect("square factors")
    }
}

/// Two-level tau preconditioner with eigenvalues
/// `(1 + s h_t) - eps^2 h_t (cbar_1 lambda^1_i + cbar_2 lambda^2_j)` on an `M_1 x M_2` grid.
#[derive(Debug, Clone)]
pub struct TauPrecond2D {
    m1: usize,
    m2: usize,
    lambda: Vec<f64>,
    plan1: Dst1Plan,
    plan2: Dst1Plan,
}

impl TauPrecond2D {
    pub fn new(op: &FracOperator2D) -> Result<Self> {
        let (m1, m2) = op.shape();
        let l1 = tau_eigs(&op.axis1.g);
        let l2 = tau_eigs(&op.axis2.g);
        let d = op.params.diffusion();
        let shift = op.params.shift();
        let mut lambda = Vec::with_capacity(m1 * m2);
        for &a in &l1 {
            for &b in &l2 {
                lambda.push(shift - d * (op.axis1.cbar * a + op.axis2.cbar * b));
            }
        }
        Self::from_eigenvalues(m1, m2, lambda)
    }

    pub fn from_eigenvalues(m1: usize, m2: usize, lambda: Vec<f64>) -> Result<Self> {
        check_len(m1 * m2, lambda.len())?;
        check_positive(&lambda)?;
        Ok(TauPrecond2D {
            m1,
            m2,
            lambda,
            plan1: Dst1Plan::new(m1)?,
            plan2: Dst1Plan::new(m2)?,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.m1 * self.m2
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.m1, self.m2)
    }

    /// Row-major `M_1 x M_2` grid of eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.lambda
    }

    /// `(S_1 ⊗ S_2) v` on a row-major grid.
    pub fn two_level_dst(&self, v: &[f64], out: &mut [f64]) {
        let (m1, m2) = (self.m1, self.m2);
        let mut rows = vec![0.0; v.len()];
        self.plan2.apply_rows(v, &mut rows);
        let mut t = vec![0.0; v.len()];
        transpose(&rows, m1, m2, &mut t);
        self.plan1.apply_rows(&t, &mut rows);
        transpose(&rows, m2, m1, out);
    }

    fn spectral_apply(&self, v: &[f64], out: &mut [f64], f: impl Fn(f64) -> f64) {
        let mut tmp = vec![0.0; v.len()];
        self.two_level_dst(v, &mut tmp);
        for (t, &l) in tmp.iter_mut().zip(&self.lambda) {
            *t *= f(l);
        }
        self.two_level_dst(&tmp, out);
    }

    pub fn solve(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), v.len())?;
        let mut out = vec![0.0; v.len()];
        self.spectral_apply(v, &mut out, |l| 1.0 / l);
        Ok(out)
    }

    pub fn apply_forward(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), v.len())?;
        let mut out = vec![0.0; v.len()];
        self.spectral_apply(v, &mut out, |l| l);
        Ok(out)
    }

    pub fn apply_inv_sqrt(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), v.len())?;
        let mut out = vec![0.0; v.len()];
        self.spectral_apply(v, &mut out, |l| 1.0 / l.sqrt());
        Ok(out)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let s = dst1_matrix(self.m1).kron(&dst1_matrix(self.m2));
        s.matmul(&DenseMatrix::diag(&self.lambda))
            .and_then(|sd| sd.matmul(&s))
            .expect("square factors")
    }
}

/// Tau preconditioner of either dimension.
#[derive(Debug, Clone)]
pub enum TauPrecond {
    OneD(TauPrecond1D),
    TwoD(TauPrecond2D),
}

impl TauPrecond {
    pub fn for_operator(op: &FracOperator) -> Result<Self> {
        Ok(match op {
            FracOperator::OneD(op) => TauPrecond::OneD(TauPrecond1D::new(op)?),
            FracOperator::TwoD(op) => TauPrecond::TwoD(TauPrecond2D::new(op)?),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            TauPrecond::OneD(p) => p.dim(),
            TauPrecond::TwoD(p) => p.dim(),
        }
    }

    pub fn eigenvalues(&self) -> &[f64] {
        match self {
            TauPrecond::OneD(p) => p.eigenvalues(),
            TauPrecond::TwoD(p) => p.eigenvalues(),
        }
    }

    pub fn solve(&self, v: &[f64]) -> Result<Vec<f64>> {
        match self {
            TauPrecond::OneD(p) => p.solve(v),
            TauPrecond::TwoD(p) => p.solve(v),
        }
    }

    pub fn apply_forward(&self, v: &[f64]) -> Result<Vec<f64>> {
        match self {
            TauPrecond::OneD(p) => p.apply_forward(v),
            TauPrecond::TwoD(p) => p.apply_forward(v),
        }
    }

    pub fn apply_inv_sqrt(&self, v: &[f64]) -> Result<Vec<f64>> {
        match self {
            TauPrecond::OneD(p) => p.apply_inv_sqrt(v),
            TauPrecond::TwoD(p) => p.apply_inv_sqrt(v),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            TauPrecond::OneD(p) => p.to_dense(),
            TauPrecond::TwoD(p) => p.to_dense(),
        }
    }
}

/// As a [`LinearOperator`] the preconditioners act as `P^{-1}`.
impl LinearOperator for TauPrecond1D {
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.spectral_apply(x, y, |l| 1.0 / l);
    }
}

impl LinearOperator for TauPrecond2D {
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.spectral_apply(x, y, |l| 1.0 / l);
    }
}

impl LinearOperator for TauPrecond {
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        match self {
            TauPrecond::OneD(p) => LinearOperator::apply(p, x, y),
            TauPrecond::TwoD(p) => LinearOperator::apply(p, x, y),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{Axis, StepParams};
    use crate::toeplitz::build_g;
    use crate::weights::{FracOrder, Scheme};

    fn order(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn dst_size_one() {
        let p = Dst1Plan::new(1).unwrap();
        let out = p.apply(&[3.0]).unwrap();
        assert!((out[0] - 3.0).abs() < 1e-15);
    }

    #[test]
    fn dst_unit_vector_matches_formula() {
        let p = Dst1Plan::new(8).unwrap();
        let mut e = vec![0.0; 8];
        e[0] = 1.0;
        let out = p.apply(&e).unwrap();
        let s = dst1_matrix(8);
        for (k, o) in out.iter().enumerate() {
            assert!((o - s[(k, 0)]).abs() < 1e-13);
        }
    }

    #[test]
    fn dst_involution() {
        for m in [1, 2, 7, 8, 31, 33] {
            let p = Dst1Plan::new(m).unwrap();
            let v: Vec<f64> = (0..m).map(|i| ((i * 7 + 3) as f64).sin()).collect();
            let back = p.apply(&p.apply(&v).unwrap()).unwrap();
            let err: f64 = back.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-12, "m={m}: {err}");
        }
    }

    #[test]
    fn tau_eigs_identity_and_laplacian() {
        let mut c = vec![0.0; 6];
        c[0] = 1.0;
        assert!(tau_eigs(&SymToeplitz::new(c).unwrap())
            .iter()
            .all(|l| (l - 1.0).abs() < 1e-14));

        let t = SymToeplitz::new(vec![2.0, -1.0, 0.0]).unwrap();
        let l = tau_eigs(&t);
        let s2 = std::f64::consts::SQRT_2;
        let want = [2.0 - s2, 2.0, 2.0 + s2];
        for (a, b) in l.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        // bandwidth <= 1: no Hankel correction
        let d = tau_dense(&t).unwrap();
        assert!(d.max_abs_diff(&t.to_dense()) == 0.0);
    }

    #[test]
    fn tau_dense_corner_corrections() {
        let c = vec![4.0, 3.0, 2.0, 1.0];
        let t = SymToeplitz::new(c.clone()).unwrap();
        let d = tau_dense(&t).unwrap();
        assert_eq!(d[(0, 0)], c[0] - c[2]);
        assert_eq!(d[(3, 3)], c[0] - c[2]);
        assert_eq!(d[(0, 1)], c[1] - c[3]);
        assert!(d.asymmetry() == 0.0);
    }

    #[test]
    fn tau_dense_diagonalised_by_dst() {
        let g = build_g(order(1.5), Scheme::Pq10, 8).unwrap();
        let s = dst1_matrix(8);
        let recon = s
            .matmul(&DenseMatrix::diag(&tau_eigs(&g)))
            .unwrap()
            .matmul(&s)
            .unwrap();
        assert!(recon.max_abs_diff(&tau_dense(&g).unwrap()) < 1e-12);
    }

    #[test]
    fn scalar_preconditioner_halves() {
        let p = TauPrecond1D::from_eigenvalues(vec![2.0; 9]).unwrap();
        let v: Vec<f64> = (0..9).map(|i| i as f64).collect();
        for (a, b) in p.solve(&v).unwrap().iter().zip(&v) {
            assert!((a - b / 2.0).abs() < 1e-13);
        }
        assert!(TauPrecond1D::from_eigenvalues(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn zero_eps_preconditioner() {
        let axis = Axis::on_interval(order(1.5), Scheme::Pq10, 15, 0.0, 1.0).unwrap();
        let op = FracOperator1D::new(axis, Scheme::Pq10, StepParams::new(0.25, 0.0, 2.0).unwrap());
        let p = TauPrecond1D::new(&op).unwrap();
        assert!(p.eigenvalues().iter().all(|&l| (l - 1.5).abs() < 1e-15));
    }

    #[test]
    fn separable_eigenvector_2d() {
        let a1 = Axis::on_interval(order(1.2), Scheme::Pq10, 4, 0.0, 1.0).unwrap();
        let a2 = Axis::on_interval(order(1.8), Scheme::Pq10, 5, 0.0, 1.0).unwrap();
        let op = FracOperator2D::new(a1, a2, Scheme::Pq10, StepParams::new(0.1, 0.3, 1.0).unwrap());
        let p = TauPrecond2D::new(&op).unwrap();
        let (s1, s2) = (dst1_matrix(4), dst1_matrix(5));
        let (i, j) = (2, 3);
        let v: Vec<f64> = (0..4)
            .flat_map(|r| {
                let (s1, s2) = (&s1, &s2);
                (0..5).map(move |c| s1[(r, i)] * s2[(c, j)])
            })
            .collect();
        let out = p.solve(&v).unwrap();
        let lam = p.eigenvalues()[i * 5 + j];
        for (o, x) in out.iter().zip(&v) {
            assert!((o - x / lam).abs() < 1e-13);
        }
    }
}
