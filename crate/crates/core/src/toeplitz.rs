//! Symmetric Toeplitz matrices stored by their first column and applied in
//! O(M log M) through circulant embedding.

use std::sync::Arc;

use rustfft::num_complex::Complex64;

use crate::dense::DenseMatrix;
use crate::error::{check_len, Error, Result};
use crate::fft::{self, FftPair};
use crate::weights::{wsgd_weights, FracOrder, Scheme};

/// Eigenvalues of the circulant that embeds a symmetric Toeplitz matrix,
/// together with the transform plan for its length.
#[derive(Debug)]
struct CirculantEmbedding {
    m: usize,
    /// length of the circulant, the next power of two >= 2M
    len: usize,
    eig: Vec<f64>,
    plan: FftPair,
}

impl CirculantEmbedding {
    fn new(c: &[f64]) -> Self {
        let m = c.len();
        let len = (2 * m).next_power_of_two();
        let mut col = vec![0.0; len];
        col[..m].copy_from_slice(c);
        for k in 1..m {
            col[len - k] = c[k];
        }
        // circulant of a symmetric column has a real spectrum
        let eig = fft::real_dft_re(&col);
        CirculantEmbedding {
            m,
            len,
            eig,
            plan: fft::plan(len),
        }
    }

    /// Applies the Toeplitz block to every length-`m` row of `input`, writing `scale * T row`
    /// into the matching row of `output`. Rows are packed two at a time into one complex
    /// transform; the circulant is real and symmetric, so real and imaginary channels stay apart.
    fn apply_rows(&self, input: &[f64], output: &mut [f64], scale: f64) {
        let (m, len) = (self.m, self.len);
        let rows = input.len() / m;
        let pairs = rows.div_ceil(2);
        let mut buf = vec![Complex64::new(0.0, 0.0); pairs * len];
        for p in 0..pairs {
            let chunk = &mut buf[p * len..p * len + m];
            let r0 = &input[2 * p * m..(2 * p + 1) * m];
            if 2 * p + 1 < rows {
                let r1 = &input[(2 * p + 1) * m..(2 * p + 2) * m];
                for ((z, &a), &b) in chunk.iter_mut().zip(r0).zip(r1) {
                    *z = Complex64::new(a, b);
                }
            } else {
                for (z, &a) in chunk.iter_mut().zip(r0) {
                    *z = Complex64::new(a, 0.0);
                }
            }
        }
        let mut scratch = vec![Complex64::new(0.0, 0.0); self.plan.scratch_len()];
        self.plan.forward.process_with_scratch(&mut buf, &mut scratch);
        for chunk in buf.chunks_exact_mut(len) {
            for (z, &e) in chunk.iter_mut().zip(&self.eig) {
                *z *= e;
            }
        }
        self.plan.inverse.process_with_scratch(&mut buf, &mut scratch);
        let norm = scale / len as f64;
        for p in 0..pairs {
            let chunk = &buf[p * len..p * len + m];
            let o0 = &mut output[2 * p * m..(2 * p + 1) * m];
            for (o, z) in o0.iter_mut().zip(chunk) {
                *o = z.re * norm;
            }
            if 2 * p + 1 < rows {
                let o1 = &mut output[(2 * p + 1) * m..(2 * p + 2) * m];
                for (o, z) in o1.iter_mut().zip(chunk) {
                    *o = z.im * norm;
                }
            }
        }
    }
}

/// Real symmetric Toeplitz matrix, entry `(i, j) = c[|i - j|]`.
#[derive(Debug, Clone)]
pub struct SymToeplitz {
    c: Arc<[f64]>,
    embed: Arc<CirculantEmbedding>,
}

impl SymToeplitz {
    pub fn new(first_column: Vec<f64>) -> Result<Self> {
        if first_column.is_empty() {
            return Err(Error::param("first_column", "must be nonempty"));
        }
        if first_column.iter().any(|x| !x.is_finite()) {
            return Err(Error::param("first_column", "entries must be finite"));
        }
        let embed = Arc::new(CirculantEmbedding::new(&first_column));
        Ok(SymToeplitz {
            c: first_column.into(),
            embed,
        })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn first_column(&self) -> &[f64] {
        &self.c
    }

    /// Coefficient `c_k`, zero outside `0..M`.
    #[inline]
    pub fn coeff(&self, k: usize) -> f64 {
        self.c.get(k).copied().unwrap_or(0.0)
    }

    /// Length of the circulant used for fast products.
    pub fn embedding_len(&self) -> usize {
        self.embed.len
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.matvec_into(v, &mut out)?;
        Ok(out)
    }

    pub fn matvec_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        check_len(self.dim(), v.len())?;
        check_len(self.dim(), out.len())?;
        self.embed.apply_rows(v, out, 1.0);
        Ok(())
    }

    /// `out_r = scale * T in_r` for every contiguous row `r` of length M.
    pub fn matvec_rows(&self, input: &[f64], output: &mut [f64], scale: f64) -> Result<()> {
        let m = self.dim();
        if input.len() % m != 0 {
            return Err(Error::DimensionMismatch {
                expected: (input.len() / m + 1) * m,
                got: input.len(),
            });
        }
        check_len(input.len(), output.len())?;
        if !input.is_empty() {
            self.embed.apply_rows(input, output, scale);
        }
        Ok(())
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let m = self.dim();
        DenseMatrix::from_fn(m, m, |i, j| self.c[i.abs_diff(j)])
    }
}

impl PartialEq for SymToeplitz {
    fn eq(&self, other: &Self) -> bool {
        self.c == other.c
    }
}

/// First column of `G = 𝒢 + 𝒢ᵀ`, where 𝒢 is the lower-Hessenberg Toeplitz matrix
/// with `omega_1` on the diagonal and `omega_0` on the superdiagonal:
/// `c_0 = 2 omega_1`, `c_1 = omega_0 + omega_2`, `c_k = omega_{k+1}`.
pub fn g_first_column(alpha: FracOrder, scheme: Scheme, m: usize) -> Result<Vec<f64>> {
    if m < 2 {
        return Err(Error::param("M", format!("need M >= 2, got {m}")));
    }
    let wv = wsgd_weights(alpha, scheme, m);
    let w = wv.as_slice();
    let mut c = Vec::with_capacity(m);
    c.push(2.0 * w[1]);
    c.push(w[0] + w[2]);
    c.extend_from_slice(&w[3..=m]);
    Ok(c)
}

/// The symmetric Toeplitz matrix `G_{alpha,M}` of the discrete Riesz operator.
pub fn build_g(alpha: FracOrder, scheme: Scheme, m: usize) -> Result<SymToeplitz> {
    SymToeplitz::new(g_first_column(alpha, scheme, m)?)
}
