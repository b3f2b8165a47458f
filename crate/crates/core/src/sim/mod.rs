//! The stabilized semi-implicit time stepper
//! `((1 + s h_t) I - eps^2 h_t T) u^{n+1} = (1 + s h_t) u^n - h_t f(u^n)`.

mod initial;
mod potential;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krylov::{pcg, Identity, PcgOptions, SolveStats};
use crate::operator::{Axis, FracOperator, FracOperator1D, FracOperator2D, StepParams};
use crate::tau::TauPrecond;
use crate::weights::{FracOrder, Scheme};

pub use initial::{initial_condition, interior_nodes, Grid, Problem};
pub use potential::{potential_F, potential_f, PotentialParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverMode {
    Cg,
    Pcg,
}

impl SolverMode {
    pub const ALL: [SolverMode; 2] = [SolverMode::Cg, SolverMode::Pcg];

    pub fn as_str(self) -> &'static str {
        match self {
            SolverMode::Cg => "cg",
            SolverMode::Pcg => "pcg",
        }
    }
}

impl std::fmt::Display for SolverMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SolverMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cg" => Ok(SolverMode::Cg),
            "pcg" => Ok(SolverMode::Pcg),
            other => Err(Error::param("solver", format!("`{other}` is not one of cg, pcg"))),
        }
    }
}

/// Everything needed to reproduce one simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub problem: Problem,
    pub alpha: FracOrder,
    /// Order along the second axis; defaults to `alpha`.
    pub alpha2: Option<FracOrder>,
    pub scheme: Scheme,
    /// Interval `(a, b)` of every axis.
    pub domain: [f64; 2],
    /// Interior nodes along the first axis.
    #[serde(rename = "M")]
    pub m: usize,
    /// Interior nodes along the second axis; defaults to `M`.
    #[serde(rename = "M2")]
    pub m2: Option<usize>,
    #[serde(rename = "T")]
    pub t_final: f64,
    #[serde(rename = "N")]
    pub n_steps: usize,
    pub eps: f64,
    /// Stabilization; defaults to [`PotentialParams::default_stabilization`].
    pub s: Option<f64>,
    pub potential: PotentialParams,
    pub seed: u64,
    /// Requested snapshot times; `t = 0` is always stored.
    pub snapshot_times: Vec<f64>,
    pub solver: SolverMode,
    pub tol: f64,
    pub maxit: usize,
}

impl SimConfig {
    /// Parameters of the benchmark problem as used in the experiments.
    pub fn for_problem(problem: Problem) -> Self {
        let alpha = FracOrder::new(1.5).unwrap();
        let base = SimConfig {
            problem,
            alpha,
            alpha2: None,
            scheme: Scheme::Pq10,
            domain: [0.0, 1.0],
            m: 255,
            m2: None,
            t_final: 1.0,
            n_steps: 16,
            eps: 0.3,
            s: None,
            potential: PotentialParams::default(),
            seed: 0,
            snapshot_times: vec![1.0],
            solver: SolverMode::Pcg,
            tol: PcgOptions::default().tol,
            maxit: PcgOptions::default().maxit,
        };
        match problem {
            Problem::Smooth1D => base,
            Problem::Sine2D => SimConfig { m: 63, ..base },
            Problem::Interface1D => SimConfig {
                m: 256,
                t_final: 12.0,
                n_steps: 128,
                eps: 0.02,
                snapshot_times: vec![3.0, 6.0, 9.0, 12.0],
                ..base
            },
            Problem::Star | Problem::Spinodal => SimConfig {
                m: 128,
                t_final: 60.0,
                n_steps: 1000,
                eps: 0.02,
                snapshot_times: vec![0.06, 19.98, 40.02, 60.0],
                ..base
            },
        }
    }

    pub fn dimension(&self) -> usize {
        self.problem.dimension()
    }

    pub fn h_t(&self) -> f64 {
        self.t_final / self.n_steps.max(1) as f64
    }

    pub fn stabilization(&self) -> f64 {
        self.s.unwrap_or_else(|| self.potential.default_stabilization())
    }

    /// `(M_1, M_2)`, with `M_2 = 1` in 1D.
    pub fn shape(&self) -> (usize, usize) {
        if self.dimension() == 1 {
            (self.m, 1)
        } else {
            (self.m, self.m2.unwrap_or(self.m))
        }
    }

    pub fn grid(&self) -> Grid {
        let [a, b] = self.domain;
        let (m1, m2) = self.shape();
        Grid {
            x1: interior_nodes(a, b, m1),
            x2: (self.dimension() == 2).then(|| interior_nodes(a, b, m2)),
        }
    }

    pub fn pcg_options(&self) -> PcgOptions {
        PcgOptions {
            tol: self.tol,
            maxit: self.maxit,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let [a, b] = self.domain;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::param("domain", format!("need a < b, got [{a}, {b}]")));
        }
        if self.m < 2 || self.m2.is_some_and(|m| m < 2) {
            return Err(Error::param("M", "need at least 2 interior nodes per axis"));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::param("T", format!("must be positive, got {}", self.t_final)));
        }
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return Err(Error::param("eps", format!("must be nonnegative, got {}", self.eps)));
        }
        if let Some(s) = self.s {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::param("s", format!("must be nonnegative, got {s}")));
            }
        }
        if !(self.tol > 0.0) || self.maxit == 0 {
            return Err(Error::param("tol", "need tol > 0 and maxit > 0"));
        }
        self.potential.validate()?;
        for &t in &self.snapshot_times {
            if !(t >= 0.0 && t <= self.t_final * (1.0 + 1e-12)) {
                return Err(Error::param(
                    "snapshot_times",
                    format!("{t} lies outside [0, {}]", self.t_final),
                ));
            }
        }
        Ok(())
    }

    pub fn build_operator(&self) -> Result<FracOperator> {
        self.validate()?;
        let params = StepParams::new(self.h_t(), self.eps, self.stabilization())?;
        let [a, b] = self.domain;
        let (m1, m2) = self.shape();
        let ax1 = Axis::on_interval(self.alpha, self.scheme, m1, a, b)?;
        Ok(if self.dimension() == 1 {
            FracOperator::OneD(FracOperator1D::new(ax1, self.scheme, params))
        } else {
            let alpha2 = self.alpha2.unwrap_or(self.alpha);
            let ax2 = Axis::on_interval(alpha2, self.scheme, m2, a, b)?;
            FracOperator::TwoD(FracOperator2D::new(ax1, ax2, self.scheme, params))
        })
    }

    /// `(step index, label)` of every stored snapshot, ascending, starting at step 0.
    pub fn snapshot_steps(&self) -> Vec<(usize, String)> {
        let h = self.h_t();
        let mut out = vec![(0, "0".to_string())];
        for &t in &self.snapshot_times {
            let n = ((t / h).round() as usize).min(self.n_steps);
            if out.iter().all(|(k, _)| *k != n) {
                out.push((n, format_time(t)));
            }
        }
        out.sort_by_key(|(k, _)| *k);
        out
    }
}

/// Shortest decimal form of a time, used in snapshot file names.
pub fn format_time(t: f64) -> String {
    format!("{t}")
}

/// One time step from `u`. With `precond = None` the solve is plain CG.
/// A solve that fails to reach the tolerance is an error.
pub fn step(
    u: &[f64],
    op: &FracOperator,
    precond: Option<&TauPrecond>,
    p: &PotentialParams,
    opts: PcgOptions,
) -> Result<(Vec<f64>, SolveStats)> {
    let params = op.params();
    let shift = params.shift();
    let b: Vec<f64> = u.iter().map(|&v| shift * v - params.h_t * p.f(v)).collect();
    if b.len() != op.dim() {
        return Err(Error::DimensionMismatch {
            expected: op.dim(),
            got: b.len(),
        });
    }
    let (x, stats) = match precond {
        Some(pc) => pcg(op, pc, &b, opts)?,
        None => pcg(op, &Identity, &b, opts)?,
    };
    if !stats.converged {
        return Err(Error::NotConverged {
            iterations: stats.iterations,
            residual: stats.final_relative_residual().max(stats.true_relative_residual),
        });
    }
    Ok((x, stats))
}

/// `E_h(u) = -(eps^2/2) |cell| u^T T u + |cell| sum_i F(u_i)`.
pub fn discrete_energy(u: &[f64], op: &FracOperator, p: &PotentialParams) -> Result<f64> {
    let tu = op.apply_riesz(u)?;
    let eps = op.params().eps;
    let quad: f64 = u.iter().zip(&tu).map(|(a, b)| a * b).sum();
    let pot: f64 = u.iter().map(|&v| p.big_f(v)).sum();
    Ok(op.cell_measure() * (-0.5 * eps * eps * quad + pot))
}

/// Largest absolute forward difference quotient, with zero boundary values.
pub fn max_gradient(u: &[f64], shape: (usize, usize), h: f64) -> f64 {
    let (m1, m2) = shape;
    let at = |i: isize, j: isize| -> f64 {
        if i < 0 || j < 0 || i >= m1 as isize || j >= m2 as isize {
            0.0
        } else {
            u[i as usize * m2 + j as usize]
        }
    };
    let mut g = 0.0_f64;
    for i in -1..m1 as isize {
        for j in 0..m2 as isize {
            g = g.max((at(i + 1, j) - at(i, j)).abs());
        }
    }
    if m2 > 1 {
        for i in 0..m1 as isize {
            for j in -1..m2 as isize {
                g = g.max((at(i, j + 1) - at(i, j)).abs());
            }
        }
    }
    g / h
}

pub fn max_abs(u: &[f64]) -> f64 {
    u.iter().fold(0.0, |m, v| m.max(v.abs()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub label: String,
    pub step: usize,
    pub time: f64,
    pub field: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub shape: (usize, usize),
    pub snapshots: Vec<Snapshot>,
    pub energy_series: Vec<(f64, f64)>,
    pub max_series: Vec<(f64, f64)>,
    /// Krylov iterations of each step.
    pub pcg_iters: Vec<usize>,
    pub final_state: Vec<f64>,
}

impl Trajectory {
    /// Mean iterations per step, rounded half up.
    pub fn mean_iterations(&self) -> usize {
        let n = self.pcg_iters.len();
        if n == 0 {
            return 0;
        }
        let sum: usize = self.pcg_iters.iter().sum();
        (2 * sum + n) / (2 * n)
    }
}

/// Operator, preconditioner and potential of one configuration, built once.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: SimConfig,
    op: FracOperator,
    precond: Option<TauPrecond>,
}

impl Simulation {
    pub fn new(config: &SimConfig) -> Result<Self> {
        let op = config.build_operator()?;
        let precond = match config.solver {
            SolverMode::Pcg => Some(TauPrecond::for_operator(&op)?),
            SolverMode::Cg => None,
        };
        Ok(Simulation {
            config: config.clone(),
            op,
            precond,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn operator(&self) -> &FracOperator {
        &self.op
    }

    pub fn preconditioner(&self) -> Option<&TauPrecond> {
        self.precond.as_ref()
    }

    pub fn initial_state(&self) -> Result<Vec<f64>> {
        let c = &self.config;
        initial_condition(c.problem, &c.grid(), c.eps, c.seed)
    }

    pub fn step(&self, u: &[f64]) -> Result<(Vec<f64>, SolveStats)> {
        step(
            u,
            &self.op,
            self.precond.as_ref(),
            &self.config.potential,
            self.config.pcg_options(),
        )
    }

    pub fn energy(&self, u: &[f64]) -> Result<f64> {
        discrete_energy(u, &self.op, &self.config.potential)
    }

    pub fn run(&self) -> Result<Trajectory> {
        self.run_from(self.initial_state()?)
    }

    pub fn run_from(&self, u0: Vec<f64>) -> Result<Trajectory> {
        let c = &self.config;
        if u0.len() != self.op.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.op.dim(),
                got: u0.len(),
            });
        }
        let h = c.h_t();
        let schedule = c.snapshot_steps();
        let mut next = schedule.iter().peekable();
        let mut snapshots = Vec::with_capacity(schedule.len());
        let mut energy_series = Vec::with_capacity(c.n_steps + 1);
        let mut max_series = Vec::with_capacity(c.n_steps + 1);
        let mut pcg_iters = Vec::with_capacity(c.n_steps);
        let mut u = u0;

        for n in 0..=c.n_steps {
            if n > 0 {
                let (x, stats) = self.step(&u)?;
                u = x;
                pcg_iters.push(stats.iterations);
            }
            let t = n as f64 * h;
            energy_series.push((t, self.energy(&u)?));
            max_series.push((t, max_abs(&u)));
            while let Some((k, label)) = next.peek() {
                if *k != n {
                    break;
                }
                snapshots.push(Snapshot {
                    label: label.clone(),
                    step: n,
                    time: t,
                    field: u.clone(),
                });
                next.next();
            }
        }
        Ok(Trajectory {
            shape: c.shape(),
            snapshots,
            energy_series,
            max_series,
            pcg_iters,
            final_state: u,
        })
    }
}

/// Builds and runs `config`.
pub fn run(config: &SimConfig) -> Result<Trajectory> {
    Simulation::new(config)?.run()
}
