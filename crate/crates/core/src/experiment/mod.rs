//! Iteration-count sweeps, simulation runs and their on-disk layout
//! `out/<experiment>/<cell-id>/...` with a `manifest.json` per experiment.

mod config;
mod output;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{PotentialParams, Problem, SimConfig, Simulation, SolverMode, Trajectory};
use crate::weights::Scheme;

pub use config::{
    parse_run_config, parse_table_config, AlphaSpec, RunOverrides, TableOverrides, SEED_ENV,
};
pub use output::{
    fmt_f64, read_f64_le, write_csv, write_f64_le, write_json, write_series, write_trajectory,
    SnapshotMeta,
};

/// Largest default `M + 1` of a 1D sweep.
pub const MAX_SIZE_1D: usize = 1 << 13;
/// Largest default `M_i + 1` of a 2D sweep.
pub const MAX_SIZE_2D: usize = 1 << 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentMatrix {
    pub name: String,
    pub dimension: usize,
    pub alphas: Vec<AlphaSpec>,
    pub schemes: Vec<Scheme>,
    /// Interior sizes `M` (per axis in 2D), strictly increasing.
    pub sizes: Vec<usize>,
    pub solvers: Vec<SolverMode>,
    pub eps: f64,
    #[serde(rename = "N")]
    pub n_steps: usize,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub s: Option<f64>,
    pub potential: PotentialParams,
    pub large: bool,
}

fn pow2_sizes(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|p| (1usize << p) - 1).collect()
}

impl ExperimentMatrix {
    /// The 1D sweep on problem 1: `alpha` in {1.2, 1.5, 1.8}, `M + 1 = 2^6 .. 2^13`.
    pub fn table1() -> Self {
        ExperimentMatrix {
            name: "table1".into(),
            dimension: 1,
            alphas: [1.2, 1.5, 1.8].map(AlphaSpec::Single).to_vec(),
            schemes: Scheme::ALL.to_vec(),
            sizes: pow2_sizes(6, 13),
            solvers: SolverMode::ALL.to_vec(),
            eps: 0.3,
            n_steps: 16,
            t_final: 1.0,
            s: None,
            potential: PotentialParams::default(),
            large: false,
        }
    }

    /// The 2D sweep on problem 2 with `M_1 = M_2`, `M_i + 1 = 2^5 .. 2^8`.
    pub fn table2() -> Self {
        ExperimentMatrix {
            name: "table2".into(),
            dimension: 2,
            alphas: [[1.1, 1.3], [1.5, 1.6], [1.7, 1.9], [1.1, 1.9]]
                .map(AlphaSpec::Pair)
                .to_vec(),
            sizes: pow2_sizes(5, 8),
            ..Self::table1()
        }
    }

    pub fn problem(&self) -> Problem {
        if self.dimension == 1 {
            Problem::Smooth1D
        } else {
            Problem::Sine2D
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty()
            || self.schemes.is_empty()
            || self.sizes.is_empty()
            || self.solvers.is_empty()
        {
            return Err(Error::param("matrix", "every axis must be nonempty"));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("sizes", "must be strictly increasing"));
        }
        for a in &self.alphas {
            a.orders()?;
            if self.dimension == 1 && matches!(a, AlphaSpec::Pair(_)) {
                return Err(Error::param("alphas", "1D sweeps take single orders"));
            }
        }
        let cap = if self.dimension == 1 { MAX_SIZE_1D } else { MAX_SIZE_2D };
        let top = self.sizes[self.sizes.len() - 1];
        if !self.large && top + 1 > cap {
            return Err(Error::param(
                "sizes",
                format!("M + 1 = {} exceeds {cap}; pass --large to allow it", top + 1),
            ));
        }
        for cell in self.cells() {
            cell.config(self).validate()?;
        }
        Ok(())
    }

    pub fn cells(&self) -> Vec<CellSpec> {
        let mut out = Vec::new();
        for &alpha in &self.alphas {
            for &m in &self.sizes {
                for &scheme in &self.schemes {
                    for &solver in &self.solvers {
                        out.push(CellSpec {
                            alpha,
                            m,
                            scheme,
                            solver,
                        });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellSpec {
    pub alpha: AlphaSpec,
    pub m: usize,
    pub scheme: Scheme,
    pub solver: SolverMode,
}

impl CellSpec {
    /// Directory name of the cell, e.g. `a1.8_pq10_M511_pcg`.
    pub fn id(&self) -> String {
        let a = match self.alpha {
            AlphaSpec::Single(a) => format!("a{a}"),
            AlphaSpec::Pair([a, b]) => format!("a{a}-{b}"),
        };
        format!("{a}_{}_M{}_{}", self.scheme, self.m, self.solver)
    }

    pub fn config(&self, x: &ExperimentMatrix) -> SimConfig {
        let (alpha, alpha2) = self
            .alpha
            .orders()
            .unwrap_or((crate::weights::FracOrder::new(1.5).unwrap(), None));
        SimConfig {
            alpha,
            alpha2,
            scheme: self.scheme,
            m: self.m,
            m2: None,
            eps: x.eps,
            n_steps: x.n_steps,
            t_final: x.t_final,
            s: x.s,
            potential: x.potential,
            solver: self.solver,
            snapshot_times: vec![],
            ..SimConfig::for_problem(x.problem())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub cell: CellSpec,
    /// Per-step iteration counts, or the failure message.
    pub outcome: std::result::Result<Vec<usize>, String>,
}

impl CellResult {
    /// Rounded (half up) mean iterations, `None` if the cell failed.
    pub fn mean_iterations(&self) -> Option<usize> {
        let it = self.outcome.as_ref().ok()?;
        let n = it.len();
        if n == 0 {
            return Some(0);
        }
        Some((2 * it.iter().sum::<usize>() + n) / (2 * n))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableResult {
    pub matrix: ExperimentMatrix,
    pub cells: Vec<CellResult>,
}

impl TableResult {
    pub fn get(&self, alpha: AlphaSpec, m: usize, scheme: Scheme, solver: SolverMode) -> Option<&CellResult> {
        self.cells.iter().find(|c| {
            c.cell.alpha == alpha && c.cell.m == m && c.cell.scheme == scheme && c.cell.solver == solver
        })
    }

    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.outcome.is_err()).count()
    }

    /// Header and rows in the published layout: one row per (order, size), one
    /// column per (scheme, solver).
    pub fn to_rows(&self) -> (Vec<String>, Vec<Vec<String>>) {
        let x = &self.matrix;
        let mut header: Vec<String> = if x.dimension == 1 {
            vec!["alpha".into(), "M_plus_1".into()]
        } else {
            vec!["alpha1".into(), "alpha2".into(), "M_plus_1".into()]
        };
        for sch in &x.schemes {
            for sol in &x.solvers {
                header.push(format!("{sch}_{sol}"));
            }
        }
        let mut rows = Vec::new();
        for &alpha in &x.alphas {
            for &m in &x.sizes {
                let mut row = match alpha {
                    AlphaSpec::Single(a) => vec![a.to_string()],
                    AlphaSpec::Pair([a, b]) => vec![a.to_string(), b.to_string()],
                };
                row.push((m + 1).to_string());
                for &sch in &x.schemes {
                    for &sol in &x.solvers {
                        row.push(
                            self.get(alpha, m, sch, sol)
                                .and_then(CellResult::mean_iterations)
                                .map_or_else(|| "fail".to_string(), |v| v.to_string()),
                        );
                    }
                }
                rows.push(row);
            }
        }
        (header, rows)
    }
}

fn run_cell(cell: CellSpec, x: &ExperimentMatrix) -> CellResult {
    let outcome = Simulation::new(&cell.config(x))
        .and_then(|s| s.run())
        .map(|tr| tr.pcg_iters)
        .map_err(|e| e.to_string());
    CellResult { cell, outcome }
}

/// Runs every cell of `matrix` (up to `jobs` at a time). Failed cells are recorded,
/// not propagated.
pub fn run_table(matrix: &ExperimentMatrix, jobs: usize) -> Result<TableResult> {
    matrix.validate()?;
    let cells = matrix.cells();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let results = pool.install(|| cells.into_par_iter().map(|c| run_cell(c, matrix)).collect());
    Ok(TableResult {
        matrix: matrix.clone(),
        cells: results,
    })
}

#[derive(Serialize)]
struct Manifest<'a, T: Serialize> {
    experiment: &'a str,
    version: &'a str,
    config: &'a T,
}

/// Writes `<out>/<name>/manifest.json`, `table.csv` and `<cell-id>/iters.csv`.
/// Returns the experiment directory.
pub fn write_table(out: &Path, result: &TableResult) -> Result<PathBuf> {
    let dir = out.join(&result.matrix.name);
    std::fs::create_dir_all(&dir)?;
    write_json(
        &dir.join("manifest.json"),
        &Manifest {
            experiment: &result.matrix.name,
            version: env!("CARGO_PKG_VERSION"),
            config: &result.matrix,
        },
    )?;
    let (header, rows) = result.to_rows();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(&dir.join("table.csv"), &header, &rows)?;
    for c in &result.cells {
        let cell_dir = dir.join(c.cell.id());
        std::fs::create_dir_all(&cell_dir)?;
        match &c.outcome {
            Ok(it) => write_csv(
                &cell_dir.join("iters.csv"),
                &["step", "iterations"],
                it.iter()
                    .enumerate()
                    .map(|(k, v)| vec![(k + 1).to_string(), v.to_string()]),
            )?,
            Err(msg) => std::fs::write(cell_dir.join("error.txt"), format!("{msg}\n"))?,
        }
    }
    Ok(dir)
}

/// Runs one simulation and writes its series, snapshots and `manifest.json` to `out`.
pub fn run_to_dir(config: &SimConfig, out: &Path) -> Result<Trajectory> {
    let tr = Simulation::new(config)?.run()?;
    write_trajectory(out, config, &tr)?;
    write_json(
        &out.join("manifest.json"),
        &Manifest {
            experiment: &format!("problem{}", config.problem),
            version: env!("CARGO_PKG_VERSION"),
            config,
        },
    )?;
    Ok(tr)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> ExperimentMatrix {
        ExperimentMatrix {
            alphas: vec![AlphaSpec::Single(1.5)],
            sizes: vec![15, 31],
            n_steps: 2,
            ..ExperimentMatrix::table1()
        }
    }

    #[test]
    fn defaults_validate() {
        ExperimentMatrix::table1().validate().unwrap();
        ExperimentMatrix::table2().validate().unwrap();
        assert_eq!(ExperimentMatrix::table1().cells().len(), 3 * 8 * 2 * 2);
    }

    #[test]
    fn size_rules() {
        let mut x = tiny();
        x.sizes = vec![31, 15];
        assert!(x.validate().is_err());
        x.sizes = vec![(1 << 14) - 1];
        assert!(x.validate().is_err());
        x.large = true;
        x.validate().unwrap();
        x.sizes.clear();
        assert!(x.validate().is_err());
    }

    #[test]
    fn table_layout() {
        let r = run_table(&tiny(), 1).unwrap();
        let (h, rows) = r.to_rows();
        assert_eq!(h, ["alpha", "M_plus_1", "pq10_cg", "pq10_pcg", "pq1m1_cg", "pq1m1_pcg"]);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1][1], "32");
        assert_eq!(r.failures(), 0);
    }

    #[test]
    fn failed_cells_are_marked() {
        let mut x = tiny();
        x.sizes = vec![15];
        x.solvers = vec![SolverMode::Cg];
        x.schemes = vec![Scheme::Pq10];
        let mut r = run_table(&x, 1).unwrap();
        r.cells[0].outcome = Err("boom".into());
        assert_eq!(r.to_rows().1[0][2], "fail");
    }

    #[test]
    fn cell_ids() {
        let c = CellSpec {
            alpha: AlphaSpec::Pair([1.1, 1.9]),
            m: 31,
            scheme: Scheme::Pq1m1,
            solver: SolverMode::Pcg,
        };
        assert_eq!(c.id(), "a1.1-1.9_pq1m1_M31_pcg");
    }
}
