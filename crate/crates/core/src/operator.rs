//! The time-stepping coefficient operators
//! `A = (1 + s h_t) I - eps^2 h_t T`, with `T = cbar G` in one dimension and
//! `T = cbar_1 G_1 ⊗ I + I ⊗ cbar_2 G_2` in two.

use std::f64::consts::PI;

use crate::dense::DenseMatrix;
use crate::error::{check_len, Error, Result};
use crate::krylov::LinearOperator;
use crate::toeplitz::{build_g, SymToeplitz};
use crate::weights::{FracOrder, Scheme};

/// Largest matrix size for which dense assembly is allowed.
pub const DENSE_LIMIT: usize = 4096;

/// Scaling `-1 / (2 h^alpha cos(alpha pi / 2))` of the discrete Riesz operator.
pub fn cbar(alpha: FracOrder, h_x: f64) -> Result<f64> {
    if !(h_x > 0.0 && h_x.is_finite()) {
        return Err(Error::param("h_x", format!("must be positive, got {h_x}")));
    }
    let a = alpha.get();
    Ok(-1.0 / (2.0 * h_x.powf(a) * (a * PI / 2.0).cos()))
}

/// Time-discretisation constants shared by all operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepParams {
    pub h_t: f64,
    pub eps: f64,
    pub s: f64,
}

impl StepParams {
    pub fn new(h_t: f64, eps: f64, s: f64) -> Result<Self> {
        if !(h_t > 0.0 && h_t.is_finite()) {
            return Err(Error::param("h_t", format!("must be positive, got {h_t}")));
        }
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::param("eps", format!("must be nonnegative, got {eps}")));
        }
        if !(s >= 0.0 && s.is_finite()) {
            return Err(Error::param("s", format!("must be nonnegative, got {s}")));
        }
        Ok(StepParams { h_t, eps, s })
    }

    /// `1 + s h_t`
    #[inline]
    pub fn shift(&self) -> f64 {
        1.0 + self.s * self.h_t
    }

    /// `eps^2 h_t`
    #[inline]
    pub fn diffusion(&self) -> f64 {
        self.eps * self.eps * self.h_t
    }
}

/// One spatial axis: order, interior size and mesh width.
#[derive(Debug, Clone)]
pub struct Axis {
    pub alpha: FracOrder,
    pub m: usize,
    pub h_x: f64,
    pub cbar: f64,
    pub g: SymToeplitz,
}

impl Axis {
    pub fn new(alpha: FracOrder, scheme: Scheme, m: usize, h_x: f64) -> Result<Self> {
        Ok(Axis {
            alpha,
            m,
            h_x,
            cbar: cbar(alpha, h_x)?,
            g: build_g(alpha, scheme, m)?,
        })
    }

    /// Axis over the interval `(a, b)` with `m` interior nodes, `h = (b - a) / (m + 1)`.
    pub fn on_interval(alpha: FracOrder, scheme: Scheme, m: usize, a: f64, b: f64) -> Result<Self> {
        if !(b > a) {
            return Err(Error::param("domain", format!("need a < b, got ({a}, {b})")));
        }
        Self::new(alpha, scheme, m, (b - a) / (m as f64 + 1.0))
    }
}

#[derive(Debug, Clone)]
pub struct FracOperator1D {
    pub scheme: Scheme,
    pub axis: Axis,
    pub params: StepParams,
}

impl FracOperator1D {
    pub fn new(axis: Axis, scheme: Scheme, params: StepParams) -> Self {
        FracOperator1D {
            scheme,
            axis,
            params,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.axis.m
    }

    /// Discrete Riesz derivative `cbar G v`.
    pub fn apply_riesz(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), v.len())?;
        let mut out = vec![0.0; v.len()];
        self.axis.g.matvec_rows(v, &mut out, self.axis.cbar)?;
        Ok(out)
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        check_len(self.dim(), v.len())?;
        check_len(self.dim(), out.len())?;
        let k = -self.params.diffusion() * self.axis.cbar;
        self.axis.g.matvec_rows(v, out, k)?;
        let shift = self.params.shift();
        for (o, &x) in out.iter_mut().zip(v) {
            *o += shift * x;
        }
        Ok(())
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        let m = self.dim();
        if m > DENSE_LIMIT {
            return Err(Error::TooLarge {
                size: m,
                limit: DENSE_LIMIT,
            });
        }
        let g = self.axis.g.to_dense();
        let k = -self.params.diffusion() * self.axis.cbar;
        g.axpby(k, &DenseMatrix::identity(m), self.params.shift())
    }
}

#[derive(Debug, Clone)]
pub struct FracOperator2D {
    pub scheme: Scheme,
    pub axis1: Axis,
    pub axis2: Axis,
    pub params: StepParams,
}

/// Transpose of a row-major `rows x cols` block.
pub(crate) fn transpose(src: &[f64], rows: usize, cols: usize, dst: &mut [f64]) {
    for i in 0..rows {
        for j in 0..cols {
            dst[j * rows + i] = src[i * cols + j];
        }
    }
}

impl FracOperator2D {
    pub fn new(axis1: Axis, axis2: Axis, scheme: Scheme, params: StepParams) -> Self {
        FracOperator2D {
            scheme,
            axis1,
            axis2,
            params,
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.axis1.m * self.axis2.m
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.axis1.m, self.axis2.m)
    }

    /// `(cbar_1 G_1 ⊗ I + I ⊗ cbar_2 G_2) v` with `v` row-major `M_1 x M_2`
    /// (row index = first axis).
    pub fn apply_riesz(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.dim(), v.len())?;
        let mut out = vec![0.0; v.len()];
        self.riesz_scaled(v, &mut out, 1.0);
        Ok(out)
    }

    fn riesz_scaled(&self, v: &[f64], out: &mut [f64], scale: f64) {
        let (m1, m2) = self.shape();
        // second axis: contiguous rows of length M_2
        self.axis2
            .g
            .matvec_rows(v, out, scale * self.axis2.cbar)
            .expect("row length checked");
        // first axis: transpose to M_2 x M_1, apply, transpose back
        let mut vt = vec![0.0; v.len()];
        transpose(v, m1, m2, &mut vt);
        let mut wt = vec![0.0; v.len()];
        self.axis1
            .g
            .matvec_rows(&vt, &mut wt, scale * self.axis1.cbar)
            .expect("row length checked");
        for i in 0..m1 {
            for j in 0..m2 {
                out[i * m2 + j] += wt[j * m1 + i];
            }
        }
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        check_len(self.dim(), v.len())?;
        check_len(self.dim(), out.len())?;
        self.riesz_scaled(v, out, -self.params.diffusion());
        let shift = self.params.shift();
        for (o, &x) in out.iter_mut().zip(v) {
            *o += shift * x;
        }
        Ok(())
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        let n = self.dim();
        if n > DENSE_LIMIT {
            return Err(Error::TooLarge {
                size: n,
                limit: DENSE_LIMIT,
            });
        }
        let (m1, m2) = self.shape();
        let t1 = self.axis1.g.to_dense().scale(self.axis1.cbar);
        let t2 = self.axis2.g.to_dense().scale(self.axis2.cbar);
        let t = t1
            .kron(&DenseMatrix::identity(m2))
            .axpby(1.0, &DenseMatrix::identity(m1).kron(&t2), 1.0)?;
        t.axpby(-self.params.diffusion(), &DenseMatrix::identity(n), self.params.shift())
    }
}

/// A coefficient operator of either dimension.
#[derive(Debug, Clone)]
pub enum FracOperator {
    OneD(FracOperator1D),
    TwoD(FracOperator2D),
}

impl FracOperator {
    pub fn dim(&self) -> usize {
        match self {
            FracOperator::OneD(op) => op.dim(),
            FracOperator::TwoD(op) => op.dim(),
        }
    }

    pub fn params(&self) -> StepParams {
        match self {
            FracOperator::OneD(op) => op.params,
            FracOperator::TwoD(op) => op.params,
        }
    }

    /// Area (or length) of one grid cell.
    pub fn cell_measure(&self) -> f64 {
        match self {
            FracOperator::OneD(op) => op.axis.h_x,
            FracOperator::TwoD(op) => op.axis1.h_x * op.axis2.h_x,
        }
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        match self {
            FracOperator::OneD(op) => op.apply(v),
            FracOperator::TwoD(op) => op.apply(v),
        }
    }

    pub fn apply_riesz(&self, v: &[f64]) -> Result<Vec<f64>> {
        match self {
            FracOperator::OneD(op) => op.apply_riesz(v),
            FracOperator::TwoD(op) => op.apply_riesz(v),
        }
    }

    pub fn to_dense(&self) -> Result<DenseMatrix> {
        match self {
            FracOperator::OneD(op) => op.to_dense(),
            FracOperator::TwoD(op) => op.to_dense(),
        }
    }
}

impl LinearOperator for FracOperator1D {
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.apply_into(x, y).expect("operator dimension");
    }
}

impl LinearOperator for FracOperator2D {
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.apply_into(x, y).expect("operator dimension");
    }
}

impl LinearOperator for FracOperator {
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        match self {
            FracOperator::OneD(op) => LinearOperator::apply(op, x, y),
            FracOperator::TwoD(op) => LinearOperator::apply(op, x, y),
        }
    }
}
