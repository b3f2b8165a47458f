//! Grünwald-Letnikov coefficients and the weighted-and-shifted (WSGD) weights
//! built from them.
//!
//! Weights come from the three-term recurrence
//! `g_k = (1 - (alpha + 1) / k) g_{k-1}`, never from gamma functions. Every
//! factor in the recurrence lies in (-1, 1) for k >= 2, so the sequence is
//! computed with benign rounding in O(n).

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, OnceLock, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fractional order of the Riesz derivative, restricted to the open interval (1, 2).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(into = "f64")]
pub struct FracOrder(f64);

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_finite() && alpha > 1.0 && alpha < 2.0 {
            Ok(FracOrder(alpha))
        } else {
            Err(Error::InvalidOrder(alpha))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl From<FracOrder> for f64 {
    fn from(a: FracOrder) -> f64 {
        a.0
    }
}

impl<'de> Deserialize<'de> for FracOrder {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        FracOrder::new(v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for FracOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shift pair (p, q) of the WSGD formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// (p, q) = (1, 0)
    #[serde(rename = "pq10")]
    Pq10,
    /// (p, q) = (1, -1)
    #[serde(rename = "pq1m1")]
    Pq1m1,
}

impl Scheme {
    pub const ALL: [Scheme; 2] = [Scheme::Pq10, Scheme::Pq1m1];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Pq10 => "pq10",
            Scheme::Pq1m1 => "pq1m1",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pq10" | "10" | "(1,0)" => Ok(Scheme::Pq10),
            "pq1m1" | "1m1" | "(1,-1)" => Ok(Scheme::Pq1m1),
            other => Err(Error::param(
                "scheme",
                format!("`{other}` is not one of pq10, pq1m1"),
            )),
        }
    }
}

/// Grünwald-Letnikov coefficients `g_0 ..= g_n`.
pub fn gl_coeffs(alpha: FracOrder, n: usize) -> Vec<f64> {
    let a1 = alpha.get() + 1.0;
    let mut g = Vec::with_capacity(n + 1);
    g.push(1.0);
    for k in 1..=n {
        let prev = g[k - 1];
        g.push((1.0 - a1 / k as f64) * prev);
    }
    g
}

/// Truncated WSGD weight sequence `omega_0 ..= omega_n` for one scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    pub alpha: FracOrder,
    pub scheme: Scheme,
    pub w: Vec<f64>,
}

impl WeightVector {
    #[inline]
    pub fn len(&self) -> usize {
        self.w.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.w.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    /// Running sums `sum_{k<=m} omega_k` for every m.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.w
            .iter()
            .scan(0.0, |acc, &x| {
                *acc += x;
                Some(*acc)
            })
            .collect()
    }
}

fn compute_weights(alpha: FracOrder, scheme: Scheme, n: usize) -> Vec<f64> {
    let a = alpha.get();
    let g = gl_coeffs(alpha, n);
    match scheme {
        Scheme::Pq10 => {
            let (c0, c1) = (a / 2.0, (2.0 - a) / 2.0);
            (0..=n)
                .map(|k| if k == 0 { c0 * g[0] } else { c0 * g[k] + c1 * g[k - 1] })
                .collect()
        }
        Scheme::Pq1m1 => {
            let (c0, c2) = ((a + 2.0) / 4.0, (2.0 - a) / 4.0);
            (0..=n)
                .map(|k| if k < 2 { c0 * g[k] } else { c0 * g[k] + c2 * g[k - 2] })
                .collect()
        }
    }
}

type CacheKey = (u64, Scheme, usize);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<WeightVector>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<WeightVector>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// WSGD weights `omega_0 ..= omega_n`, memoised per `(alpha, scheme, n)`.
pub fn wsgd_weights(alpha: FracOrder, scheme: Scheme, n: usize) -> Arc<WeightVector> {
    let key = (alpha.get().to_bits(), scheme, n);
    if let Some(hit) = cache().read().expect("weight cache poisoned").get(&key) {
        return Arc::clone(hit);
    }
    let wv = Arc::new(WeightVector {
        alpha,
        scheme,
        w: compute_weights(alpha, scheme, n),
    });
    let mut guard = cache().write().expect("weight cache poisoned");
    Arc::clone(guard.entry(key).or_insert(wv))
}

/// One named inequality from the structural weight lemma.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub holds: bool,
}

/// Sign, monotonicity and partial-sum properties of a truncated weight sequence.
#[derive(Debug, Clone)]
pub struct WeightReport {
    pub alpha: FracOrder,
    pub scheme: Scheme,
    pub partial_sums: Vec<f64>,
    pub sign_flags: Vec<Check>,
    pub monotonicity_flags: Vec<Check>,
    pub partial_sum_flags: Vec<Check>,
    /// `|sum_{k<=m} omega_k|`
    pub tail: f64,
}

impl WeightReport {
    pub fn all_hold(&self) -> bool {
        self.checks().all(|c| c.holds)
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.sign_flags
            .iter()
            .chain(&self.monotonicity_flags)
            .chain(&self.partial_sum_flags)
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks().filter(|c| !c.holds).map(|c| c.name).collect()
    }
}

fn nonincreasing<'a>(mut it: impl Iterator<Item = &'a f64>) -> bool {
    let Some(mut prev) = it.next().copied() else {
        return true;
    };
    for &x in it {
        if x > prev {
            return false;
        }
        prev = x;
    }
    true
}

/// Evaluates every lemma inequality on `omega_0 ..= omega_m`.
pub fn weight_report(alpha: FracOrder, scheme: Scheme, m: usize) -> Result<WeightReport> {
    if m < 3 {
        return Err(Error::param("m", format!("need m >= 3, got {m}")));
    }
    let wv = wsgd_weights(alpha, scheme, m);
    let w = wv.as_slice();
    let ps = wv.partial_sums();

    let check = |name, holds| Check { name, holds };
    let (sign_flags, monotonicity_flags, partial_sum_flags) = match scheme {
        Scheme::Pq10 => {
            let sign = vec![
                check("omega_0 > 0", w[0] > 0.0),
                check("omega_1 < 0", w[1] < 0.0),
                check("omega_k >= 0 for k >= 3", w[3..].iter().all(|&x| x >= 0.0)),
            ];
            let chain: Vec<f64> = std::iter::once(1.0)
                .chain(std::iter::once(w[0]))
                .chain(w[3..].iter().copied())
                .collect();
            let mono = vec![check(
                "1 >= omega_0 >= omega_3 >= omega_4 >= ... >= 0",
                nonincreasing(chain.iter()) && *chain.last().unwrap() >= 0.0,
            )];
            let psum = vec![check(
                "partial sums < 0 for m >= 2",
                ps[2..].iter().all(|&s| s < 0.0),
            )];
            (sign, mono, psum)
        }
        Scheme::Pq1m1 => {
            let sign = vec![
                check("omega_0 > 0", w[0] > 0.0),
                check("omega_1 < 0", w[1] < 0.0),
                check("omega_2 > 0", w[2] > 0.0),
                check("omega_3 < 0", w[3] < 0.0),
            ];
            let chain: Vec<f64> = std::iter::once(1.0)
                .chain(w.iter().step_by(2).copied())
                .collect();
            let mono = vec![check(
                "1 >= omega_0 >= omega_2 >= omega_4 >= ... >= 0",
                nonincreasing(chain.iter()) && *chain.last().unwrap() >= 0.0,
            )];
            let psum = vec![check(
                "partial sums < 0 for m = 1 or m >= 3",
                ps[1] < 0.0 && ps[3..].iter().all(|&s| s < 0.0),
            )];
            (sign, mono, psum)
        }
    };

    let tail = ps[m].abs();
    Ok(WeightReport {
        alpha,
        scheme,
        partial_sums: ps,
        sign_flags,
        monotonicity_flags,
        partial_sum_flags,
        tail,
    })
}

/// Least-squares slope of `-log|sum_{k<=m} omega_k|` against `log m` over the given truncation points.
///
/// For the WSGD weights the partial sums decay like `m^{-alpha}`, so the fitted
/// exponent should sit close to alpha.
pub fn tail_decay_exponent(alpha: FracOrder, scheme: Scheme, ms: &[usize]) -> Result<f64> {
    if ms.len() < 2 {
        return Err(Error::param("ms", "need at least two truncation points"));
    }
    let max_m = *ms.iter().max().unwrap();
    let ps = wsgd_weights(alpha, scheme, max_m).partial_sums();
    let pts: Vec<(f64, f64)> = ms
        .iter()
        .map(|&m| ((m as f64).ln(), ps[m].abs().ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(-sxy / sxx)
}

/// Checks the absolute-summability bound `sum |omega_k| <= |omega_1| + |omega_2| + |omega_1 + omega_2|`
/// on the truncated sequence. Returns `(lhs, rhs)`.
pub fn wiener_bound(alpha: FracOrder, scheme: Scheme, n: usize) -> (f64, f64) {
    let wv = wsgd_weights(alpha, scheme, n.max(2));
    let w = wv.as_slice();
    let lhs: f64 = w.iter().map(|x| x.abs()).sum();
    let rhs = w[1].abs() + w[2].abs() + (w[1] + w[2]).abs();
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(a: f64) -> FracOrder {
        FracOrder::new(a).unwrap()
    }

    #[test]
    fn order_rejects_endpoints() {
        for bad in [1.0, 2.0, 0.5, 2.5, f64::NAN, f64::INFINITY] {
            assert!(FracOrder::new(bad).is_err(), "{bad}");
        }
        assert!(FracOrder::new(1.000001).is_ok());
    }

    #[test]
    fn gl_small_cases() {
        assert_eq!(gl_coeffs(order(1.5), 0), vec![1.0]);
        for a in [1.1, 1.5, 1.9] {
            assert_eq!(gl_coeffs(order(a), 1)[1], -a);
        }
        assert!((gl_coeffs(order(1.5), 2)[2] - 0.375).abs() < 1e-15);
    }

    #[test]
    fn gl_alternating_decay() {
        for a in [1.05, 1.2, 1.5, 1.8, 1.95] {
            let g = gl_coeffs(order(a), 2000);
            assert!(g[1] < 0.0);
            assert!(g[2..].iter().all(|&x| x > 0.0));
            assert!(g[1..].windows(2).all(|p| p[1].abs() <= p[0].abs()));
        }
    }

    #[test]
    fn first_weights_match_closed_forms() {
        let a = 1.5;
        let w = wsgd_weights(order(a), Scheme::Pq10, 4);
        assert!((w.w[0] - 0.75).abs() < 1e-15);
        assert!((w.w[1] + 0.875).abs() < 1e-15);
        assert!((w.w[2] - a * (a * a + a - 4.0) / 4.0).abs() < 1e-15);

        let w = wsgd_weights(order(a), Scheme::Pq1m1, 4);
        assert!((w.w[0] - 0.875).abs() < 1e-15);
        assert!((w.w[1] + a * (2.0 + a) / 4.0).abs() < 1e-15);
        assert!((w.w[2] - (a * a * a + a * a - 4.0 * a + 4.0) / 8.0).abs() < 1e-15);
        // third weight: alpha (2 - alpha) (alpha^2 + alpha - 8) / 24
        assert!((w.w[3] - a * (2.0 - a) * (a * a + a - 8.0) / 24.0).abs() < 1e-15);
    }

    #[test]
    fn cache_returns_shared_vector() {
        let a = wsgd_weights(order(1.37), Scheme::Pq10, 100);
        let b = wsgd_weights(order(1.37), Scheme::Pq10, 100);
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn report_small_partial_sums() {
        let r = weight_report(order(1.5), Scheme::Pq10, 3).unwrap();
        assert!(r.partial_sums[2] < 0.0);
        let r = weight_report(order(1.5), Scheme::Pq1m1, 3).unwrap();
        assert!(r.partial_sums[1] < 0.0);
        assert!(weight_report(order(1.5), Scheme::Pq10, 2).is_err());
    }

    #[test]
    fn tail_shrinks() {
        let small = weight_report(order(1.2), Scheme::Pq10, 1_000).unwrap().tail;
        let large = weight_report(order(1.2), Scheme::Pq10, 100_000).unwrap().tail;
        assert!(large < small);
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!("PQ10".parse::<Scheme>().unwrap(), Scheme::Pq10);
        assert_eq!("pq1m1".parse::<Scheme>().unwrap(), Scheme::Pq1m1);
        assert!("pq0m1".parse::<Scheme>().is_err());
    }
}
