//! Generating functions of `G_{alpha,M}` and eigenvalue-distribution comparisons.
//!
//! The coefficient form `f_{alpha,n}(x) = 2 sum_{k=0}^{n} omega_k cos((k-1) x)` is the
//! reference; the closed forms are evaluated as published and checked against it.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::operator::FracOperator1D;
use crate::weights::{wsgd_weights, FracOrder, Scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolForm {
    ClosedForm,
    /// Truncated cosine series using `omega_0 ..= omega_n_terms`.
    CoefficientSum { n_terms: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolFn {
    pub alpha: FracOrder,
    pub scheme: Scheme,
    pub form: SymbolForm,
}

impl SymbolFn {
    pub fn closed(alpha: FracOrder, scheme: Scheme) -> Self {
        SymbolFn {
            alpha,
            scheme,
            form: SymbolForm::ClosedForm,
        }
    }

    pub fn truncated(alpha: FracOrder, scheme: Scheme, n_terms: usize) -> Self {
        SymbolFn {
            alpha,
            scheme,
            form: SymbolForm::CoefficientSum { n_terms },
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        symbol_eval(self, x)
    }
}

/// Folds `x` into `[0, pi]` using 2π-periodicity and evenness.
fn fold(x: f64) -> f64 {
    let mut y = x.abs() % (2.0 * PI);
    if y > PI {
        y = 2.0 * PI - y;
    }
    y
}

fn closed_form(alpha: f64, scheme: Scheme, x: f64) -> f64 {
    let amp = 2f64.powf(alpha + 1.0) * (x / 2.0).sin().abs().powf(alpha);
    let phase = alpha / 2.0 * (x - PI);
    let bracket = match scheme {
        Scheme::Pq10 => alpha / 2.0 * (phase - x).cos() + (2.0 - alpha) / 2.0 * phase.cos(),
        // as published; see `closed_form_discrepancy`
        Scheme::Pq1m1 => alpha / 2.0 * (phase - x).sin() * x.sin() + phase.cos() * x.cos(),
    };
    amp * bracket
}

fn coefficient_sum(w: &[f64], x: f64) -> f64 {
    2.0 * w
        .iter()
        .enumerate()
        .map(|(k, &wk)| wk * ((k as f64 - 1.0) * x).cos())
        .sum::<f64>()
}

pub fn symbol_eval(s: &SymbolFn, x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::param("x", "must be finite"));
    }
    let x = fold(x);
    Ok(match s.form {
        SymbolForm::ClosedForm => closed_form(s.alpha.get(), s.scheme, x),
        SymbolForm::CoefficientSum { n_terms } => {
            coefficient_sum(wsgd_weights(s.alpha, s.scheme, n_terms).as_slice(), x)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleGrid {
    /// `x_j = j pi / (M + 1)`, `j = 1..=M`: the sine-transform nodes.
    Tau,
    /// `x_j = j pi / M`, `j = 1..=M`: equispaced points of `(0, pi]`.
    Uniform,
}

impl SampleGrid {
    pub fn nodes(self, m: usize) -> Vec<f64> {
        match self {
            SampleGrid::Tau => (1..=m).map(|j| j as f64 * PI / (m as f64 + 1.0)).collect(),
            SampleGrid::Uniform => (1..=m).map(|j| j as f64 * PI / m as f64).collect(),
        }
    }
}

impl std::str::FromStr for SampleGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau" => Ok(SampleGrid::Tau),
            "uniform" => Ok(SampleGrid::Uniform),
            other => Err(Error::param("grid", format!("`{other}` is not one of uniform, tau"))),
        }
    }
}

pub fn symbol_samples(s: &SymbolFn, m: usize, grid: SampleGrid) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::param("M", "need at least one sample"));
    }
    let nodes = grid.nodes(m);
    match s.form {
        SymbolForm::ClosedForm => Ok(nodes
            .into_iter()
            .map(|x| closed_form(s.alpha.get(), s.scheme, x))
            .collect()),
        SymbolForm::CoefficientSum { n_terms } => {
            let wv = wsgd_weights(s.alpha, s.scheme, n_terms);
            Ok(nodes.into_iter().map(|x| coefficient_sum(wv.as_slice(), x)).collect())
        }
    }
}

/// Samples of the symbol of the coefficient matrix, `(1 + s h_t) - eps^2 h_t cbar f(x)`.
pub fn operator_symbol_samples(op: &FracOperator1D, grid: SampleGrid) -> Result<Vec<f64>> {
    let f = SymbolFn::closed(op.axis.alpha, op.scheme);
    let k = op.params.diffusion() * op.axis.cbar;
    Ok(symbol_samples(&f, op.dim(), grid)?
        .into_iter()
        .map(|v| op.params.shift() - k * v)
        .collect())
}

/// Largest `|closed form - coefficient sum|` over `points` equispaced nodes of `[0, pi]`.
pub fn closed_form_discrepancy(
    alpha: FracOrder,
    scheme: Scheme,
    n_terms: usize,
    points: usize,
) -> Result<f64> {
    if points < 2 {
        return Err(Error::param("points", "need at least two nodes"));
    }
    let closed = SymbolFn::closed(alpha, scheme);
    let trunc = SymbolFn::truncated(alpha, scheme, n_terms);
    let mut worst = 0.0_f64;
    for i in 0..points {
        let x = PI * i as f64 / (points - 1) as f64;
        worst = worst.max((closed.eval(x)? - trunc.eval(x)?).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionReport {
    pub sorted_eigs: Vec<f64>,
    pub sorted_samples: Vec<f64>,
    pub sup_diff: f64,
    /// Mean absolute difference of the sorted lists, i.e. the 1-Wasserstein distance
    /// between the two empirical distributions.
    pub wasserstein1: f64,
}

pub fn esd_compare(eigs: &[f64], samples: &[f64]) -> Result<DistributionReport> {
    if eigs.len() != samples.len() {
        return Err(Error::DimensionMismatch {
            expected: eigs.len(),
            got: samples.len(),
        });
    }
    if eigs.is_empty() {
        return Err(Error::param("eigs", "must be nonempty"));
    }
    let mut a = eigs.to_vec();
    let mut b = samples.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let diffs = a.iter().zip(&b).map(|(x, y)| (x - y).abs());
    let sup_diff = diffs.clone().fold(0.0, f64::max);
    let wasserstein1 = diffs.sum::<f64>() / a.len() as f64;
    Ok(DistributionReport {
        sorted_eigs: a,
        sorted_samples: b,
        sup_diff,
        wasserstein1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tau::tau_eigs;
    use crate::toeplitz::build_g;

    fn order(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn zero_at_origin() {
        for a in [1.1, 1.5, 1.9] {
            for sch in Scheme::ALL {
                assert!(SymbolFn::closed(order(a), sch).eval(0.0).unwrap().abs() < 1e-10);
            }
        }
    }

    #[test]
    fn value_at_pi() {
        let f = SymbolFn::closed(order(1.5), Scheme::Pq10);
        let want = 2f64.powf(2.5) * (1.0 - 1.5);
        assert!((f.eval(PI).unwrap() - want).abs() < 1e-12);
        assert!((want + 2.828427124746190).abs() < 1e-12);
    }

    #[test]
    fn coefficient_sum_is_even() {
        let f = SymbolFn::truncated(order(1.4), Scheme::Pq1m1, 300);
        for x in [0.1, 0.7, 2.0, 3.1] {
            assert_eq!(f.eval(x).unwrap(), f.eval(-x).unwrap());
        }
    }

    #[test]
    fn single_tau_node() {
        let f = SymbolFn::closed(order(1.5), Scheme::Pq10);
        let s = symbol_samples(&f, 1, SampleGrid::Tau).unwrap();
        assert_eq!(s, vec![f.eval(PI / 2.0).unwrap()]);
    }

    #[test]
    fn uniform_samples_nonpositive() {
        let f = SymbolFn::closed(order(1.5), Scheme::Pq10);
        assert!(symbol_samples(&f, 128, SampleGrid::Uniform)
            .unwrap()
            .iter()
            .all(|&v| v <= 0.0));
    }

    #[test]
    fn truncated_samples_are_tau_eigenvalues() {
        let m = 8;
        let g = build_g(order(1.5), Scheme::Pq10, m).unwrap();
        let f = SymbolFn::truncated(order(1.5), Scheme::Pq10, m);
        let s = symbol_samples(&f, m, SampleGrid::Tau).unwrap();
        for (a, b) in s.iter().zip(tau_eigs(&g)) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn esd_identical_and_mismatch() {
        let x = vec![3.0, 1.0, 2.0];
        let r = esd_compare(&x, &x).unwrap();
        assert_eq!(r.sup_diff, 0.0);
        assert_eq!(r.sorted_eigs, vec![1.0, 2.0, 3.0]);
        assert!(esd_compare(&x, &x[..2]).is_err());
    }

    #[test]
    fn non_finite_angle_rejected() {
        let f = SymbolFn::closed(order(1.5), Scheme::Pq10);
        assert!(f.eval(f64::NAN).is_err());
    }
}
