//! Fast solvers for the space-fractional Allen-Cahn equation discretized with
//! weighted and shifted Grünwald-Letnikov differences.
//!
//! The coefficient matrices are symmetric Toeplitz (1D) or sums of Kronecker
//! products of Toeplitz factors (2D). They are applied through circulant embedding
//! and FFTs, and inverted with conjugate gradients preconditioned by tau matrices
//! diagonalized by the discrete sine transform.

pub mod dense;
pub mod error;
pub mod experiment;
mod fft;
pub mod krylov;
pub mod operator;
pub mod sim;
pub mod spectra;
pub mod symbol;
pub mod tau;
pub mod toeplitz;
pub mod weights;

pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use krylov::{pcg, pcg_strict, Identity, LinearOperator, PcgOptions, SolveStats};
pub use operator::{cbar, Axis, FracOperator, FracOperator1D, FracOperator2D, StepParams};
pub use spectra::{cluster_report, precond_spectrum, sym_eigs, ClusterReport};
pub use symbol::{esd_compare, symbol_eval, symbol_samples, SampleGrid, SymbolFn, SymbolForm};
pub use tau::{tau_eigs, Dst1Plan, TauPrecond, TauPrecond1D, TauPrecond2D};
pub use toeplitz::{build_g, SymToeplitz};
pub use weights::{gl_coeffs, weight_report, wsgd_weights, FracOrder, Scheme, WeightVector};
