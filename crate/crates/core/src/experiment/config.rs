//! JSON configuration files merged with command-line overrides. Flags win.

use std::path::Path;
use std::str::FromStr;

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{PotentialParams, Problem, SimConfig, SolverMode};
use crate::weights::{FracOrder, Scheme};

/// Environment variable consulted for the seed when neither flag nor file sets it.
pub const SEED_ENV: &str = "FRACSOLVE_SEED";

fn read_json<T: for<'de> Deserialize<'de> + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))
        }
    }
}

fn order(v: f64) -> Result<FracOrder> {
    FracOrder::new(v)
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

/// Settings of a single simulation. Unset fields fall back to the defaults of the
/// chosen problem (problem 1 when none is given).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct RunOverrides {
    /// Benchmark problem 1-5 [default: 1]
    #[arg(long)]
    pub problem: Option<u32>,
    /// Fractional order in (1,2) [default: 1.5]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Order along the second axis (2D) [default: alpha]
    #[arg(long)]
    pub alpha2: Option<f64>,
    /// pq10 or pq1m1 [default: pq10]
    #[arg(long)]
    pub scheme: Option<Scheme>,
    /// Interior nodes per axis [default: 255, 63, 256, 128, 128 for problems 1-5]
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: Option<usize>,
    /// Interior nodes along the second axis [default: M]
    #[arg(long = "M2")]
    #[serde(rename = "M2")]
    pub m2: Option<usize>,
    /// Time steps [default: 16, 16, 128, 1000, 1000]
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// Final time [default: 1, 1, 12, 60, 60]
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: Option<f64>,
    /// Interface width [default: 0.3 for problems 1-2, 0.02 otherwise]
    #[arg(long)]
    pub eps: Option<f64>,
    /// Stabilization [default: theta/(1-u*^2) - theta_c, about 8.0]
    #[arg(long)]
    pub s: Option<f64>,
    /// Potential temperature [default: 0.8]
    #[arg(long)]
    pub theta: Option<f64>,
    /// Critical temperature [default: 1.6]
    #[arg(long = "theta-c")]
    pub theta_c: Option<f64>,
    /// Seed of the random initial field [default: $FRACSOLVE_SEED or 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// cg or pcg [default: pcg]
    #[arg(long)]
    pub solver: Option<SolverMode>,
    /// Snapshot times, comma separated; t = 0 is always stored
    #[arg(long, value_delimiter = ',')]
    pub snapshots: Option<Vec<f64>>,
    /// Relative residual tolerance [default: 1e-8]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Iteration cap per solve [default: 10000]
    #[arg(long)]
    pub maxit: Option<usize>,
}

macro_rules! merge_fields {
    ($base:expr, $top:expr; $($f:ident),*) => {
        $( if $top.$f.is_some() { $base.$f = $top.$f.clone(); } )*
    };
}

impl RunOverrides {
    /// `self` overridden by every field set in `top`.
    pub fn merged(mut self, top: &RunOverrides) -> Self {
        merge_fields!(self, top; problem, alpha, alpha2, scheme, m, m2, n, t, eps, s,
            theta, theta_c, seed, solver, snapshots, tol, maxit);
        self
    }

    pub fn resolve(&self) -> Result<SimConfig> {
        let problem = Problem::from_id(self.problem.unwrap_or(1))?;
        let mut c = SimConfig::for_problem(problem);
        if let Some(a) = self.alpha {
            c.alpha = order(a)?;
        }
        if let Some(a) = self.alpha2 {
            c.alpha2 = Some(order(a)?);
        }
        if let Some(s) = self.scheme {
            c.scheme = s;
        }
        if let Some(m) = self.m {
            c.m = m;
        }
        c.m2 = self.m2.or(c.m2);
        if let Some(t) = self.t {
            // default snapshots past the new horizon are dropped; the final time follows T
            if c.snapshot_times.last() == Some(&c.t_final) {
                c.snapshot_times.pop();
                c.snapshot_times.retain(|&s| s < t);
                c.snapshot_times.push(t);
            }
            c.t_final = t;
        }
        if let Some(n) = self.n {
            c.n_steps = n;
        }
        if let Some(e) = self.eps {
            c.eps = e;
        }
        c.s = self.s.or(c.s);
        c.potential = PotentialParams {
            theta: self.theta.unwrap_or(c.potential.theta),
            theta_c: self.theta_c.unwrap_or(c.potential.theta_c),
            ..c.potential
        };
        c.seed = match self.seed {
            Some(s) => s,
            None => env_seed()?.unwrap_or(0),
        };
        if let Some(m) = self.solver {
            c.solver = m;
        }
        if let Some(s) = &self.snapshots {
            c.snapshot_times = s.clone();
        }
        if let Some(t) = self.tol {
            c.tol = t;
        }
        if let Some(m) = self.maxit {
            c.maxit = m;
        }
        c.validate()?;
        Ok(c)
    }
}

/// Reads `path` (if any), applies `flags` on top and resolves a full configuration.
pub fn parse_run_config(path: Option<&Path>, flags: &RunOverrides) -> Result<SimConfig> {
    let file: RunOverrides = read_json(path)?;
    file.merged(flags).resolve()
}

/// One order (1D) or a pair of orders (2D), written `a` or `a:b` on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AlphaSpec {
    Single(f64),
    Pair([f64; 2]),
}

impl AlphaSpec {
    pub fn orders(self) -> Result<(FracOrder, Option<FracOrder>)> {
        match self {
            AlphaSpec::Single(a) => Ok((order(a)?, None)),
            AlphaSpec::Pair([a, b]) => Ok((order(a)?, Some(order(b)?))),
        }
    }
}

impl std::fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlphaSpec::Single(a) => write!(f, "{a}"),
            AlphaSpec::Pair([a, b]) => write!(f, "{a}:{b}"),
        }
    }
}

impl FromStr for AlphaSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::param("alphas", format!("`{t}` is not a number")))
        };
        match s.split_once(':') {
            None => Ok(AlphaSpec::Single(num(s)?)),
            Some((a, b)) => Ok(AlphaSpec::Pair([num(a)?, num(b)?])),
        }
    }
}

/// Settings of an iteration-count sweep.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct TableOverrides {
    /// table1 (1D, problem 1) or table2 (2D, problem 2) [default: table1]
    #[arg(long)]
    pub experiment: Option<String>,
    /// Orders, comma separated; `a:b` pairs in 2D [default: the published rows]
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<AlphaSpec>>,
    /// Schemes, comma separated [default: pq10,pq1m1]
    #[arg(long, value_delimiter = ',')]
    pub schemes: Option<Vec<Scheme>>,
    /// Interior sizes M, comma separated, strictly increasing
    /// [default: 2^6-1 .. 2^13-1 in 1D, 2^5-1 .. 2^8-1 in 2D]
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Solvers, comma separated [default: cg,pcg]
    #[arg(long, value_delimiter = ',')]
    pub solvers: Option<Vec<SolverMode>>,
    /// [default: 0.3]
    #[arg(long)]
    pub eps: Option<f64>,
    /// [default: 16]
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n: Option<usize>,
    /// [default: 1]
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: Option<f64>,
    /// [default: theta/(1-u*^2) - theta_c]
    #[arg(long)]
    pub s: Option<f64>,
    /// [default: 0.8]
    #[arg(long)]
    pub theta: Option<f64>,
    /// [default: 1.6]
    #[arg(long = "theta-c")]
    pub theta_c: Option<f64>,
    /// Allow sizes beyond 2^13 (1D) or 2^8 (2D)
    #[arg(long)]
    #[serde(default)]
    pub large: bool,
}

impl TableOverrides {
    pub fn merged(mut self, top: &TableOverrides) -> Self {
        merge_fields!(self, top; experiment, alphas, schemes, sizes, solvers, eps, n, t, s,
            theta, theta_c);
        self.large |= top.large;
        self
    }

    pub fn resolve(&self) -> Result<super::ExperimentMatrix> {
        use super::ExperimentMatrix;
        let mut x = match self.experiment.as_deref().unwrap_or("table1") {
            "table1" => ExperimentMatrix::table1(),
            "table2" => ExperimentMatrix::table2(),
            other => {
                return Err(Error::param(
                    "experiment",
                    format!("`{other}` is not one of table1, table2"),
                ))
            }
        };
        if let Some(a) = &self.alphas {
            x.alphas = a.clone();
        }
        if let Some(s) = &self.schemes {
            x.schemes = s.clone();
        }
        if let Some(s) = &self.sizes {
            x.sizes = s.clone();
        }
        if let Some(s) = &self.solvers {
            x.solvers = s.clone();
        }
        if let Some(e) = self.eps {
            x.eps = e;
        }
        if let Some(n) = self.n {
            x.n_steps = n;
        }
        if let Some(t) = self.t {
            x.t_final = t;
        }
        x.s = self.s.or(x.s);
        x.potential.theta = self.theta.unwrap_or(x.potential.theta);
        x.potential.theta_c = self.theta_c.unwrap_or(x.potential.theta_c);
        x.large = self.large;
        x.validate()?;
        Ok(x)
    }
}

pub fn parse_table_config(
    path: Option<&Path>,
    flags: &TableOverrides,
) -> Result<super::ExperimentMatrix> {
    let file: TableOverrides = read_json(path)?;
    file.merged(flags).resolve()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_problem_one() {
        let c = RunOverrides::default().resolve().unwrap();
        assert_eq!(c.problem, Problem::Smooth1D);
        assert_eq!((c.eps, c.n_steps, c.t_final), (0.3, 16, 1.0));
    }

    #[test]
    fn flags_win() {
        let file: RunOverrides = serde_json::from_str(r#"{"alpha": 1.5, "M": 31}"#).unwrap();
        let flags = RunOverrides {
            alpha: Some(1.8),
            ..Default::default()
        };
        let c = file.merged(&flags).resolve().unwrap();
        assert_eq!(c.alpha.get(), 1.8);
        assert_eq!(c.m, 31);
    }

    #[test]
    fn bad_alpha_names_interval() {
        let flags = RunOverrides {
            alpha: Some(2.5),
            ..Default::default()
        };
        let msg = flags.resolve().unwrap_err().to_string();
        assert!(msg.contains("(1,2)"), "{msg}");
    }

    #[test]
    fn unknown_key_named() {
        let err = serde_json::from_str::<RunOverrides>(r#"{"alpah": 1.5}"#).unwrap_err();
        assert!(err.to_string().contains("alpah"));
    }

    #[test]
    fn alpha_spec_parsing() {
        assert_eq!("1.5".parse::<AlphaSpec>().unwrap(), AlphaSpec::Single(1.5));
        assert_eq!("1.1:1.9".parse::<AlphaSpec>().unwrap(), AlphaSpec::Pair([1.1, 1.9]));
        let v: Vec<AlphaSpec> = serde_json::from_str("[1.2, [1.1, 1.3]]").unwrap();
        assert_eq!(v[1], AlphaSpec::Pair([1.1, 1.3]));
        assert!("x".parse::<AlphaSpec>().is_err());
    }
}
