use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use fracsolve::experiment::{
    fmt_f64, parse_run_config, parse_table_config, run_table, run_to_dir, write_table, RunOverrides,
    TableOverrides,
};
use fracsolve::spectra::{plain_spectrum, precond_spectrum, tau_error_spectrum};
use fracsolve::symbol::{esd_compare, symbol_samples, SampleGrid, SymbolFn};
use fracsolve::toeplitz::build_g;
use fracsolve::weights::{gl_coeffs, wsgd_weights, FracOrder, Scheme};
use fracsolve::{sym_eigs, Error, Result, TauPrecond};

#[derive(Parser)]
#[command(name = "fracsolve", version, about = "Tau-preconditioned solvers for the space-fractional Allen-Cahn equation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpectrumMode {
    /// eigenvalues of A
    Plain,
    /// eigenvalues of P^{-1} A
    Precond,
    /// eigenvalues of A - P
    Error,
}

#[derive(Subcommand)]
enum Cmd {
    /// Grünwald-Letnikov and WSGD weights: k, g_k, omega_k, partial_sum
    Weights {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value = "pq10")]
        scheme: Scheme,
        /// largest index
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Symbol samples: x, f_closed, f_coeff
    Symbol {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value = "pq10")]
        scheme: Scheme,
        #[arg(long = "M", default_value_t = 128)]
        m: usize,
        #[arg(long, default_value = "uniform")]
        grid: SampleGrid,
        /// terms of the cosine series
        #[arg(long, default_value_t = 10_000)]
        terms: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sorted eigenvalues of G next to sorted symbol samples: index, eig, sample
    Esd {
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value = "pq10")]
        scheme: Scheme,
        #[arg(long = "M", default_value_t = 128)]
        m: usize,
        #[arg(long, default_value = "uniform")]
        grid: SampleGrid,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dense spectrum of the coefficient matrix of a problem: index, eigenvalue
    Spectrum {
        #[command(flatten)]
        run: RunOverrides,
        #[arg(long, value_enum, default_value = "precond")]
        mode: SpectrumMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time per Toeplitz product, FFT versus dense: M, fast_seconds, dense_seconds
    MatvecBench {
        #[arg(long = "M", value_delimiter = ',', default_value = "255,1023,4095,16383,65535")]
        m: Vec<usize>,
        #[arg(long, default_value_t = 1.5)]
        alpha: f64,
        #[arg(long, default_value = "pq10")]
        scheme: Scheme,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one problem and write energy.csv, maxval.csv, iters.csv and snapshots
    Run {
        #[command(flatten)]
        run: RunOverrides,
        /// JSON file with the same keys as the flags
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out/run")]
        out: PathBuf,
    },
    /// Iteration-count sweep; writes <out>/<experiment>/table.csv
    Table {
        #[command(flatten)]
        table: TableOverrides,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// cells run concurrently
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn emit(out: Option<&Path>, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            fracsolve::experiment::write_csv(p, header, rows)
        }
        None => {
            let mut w = std::io::stdout().lock();
            writeln!(w, "{}", header.join(","))?;
            for r in rows {
                writeln!(w, "{}", r.join(","))?;
            }
            Ok(())
        }
    }
}

fn indexed(values: &[f64]) -> Vec<Vec<String>> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| vec![i.to_string(), fmt_f64(*v)])
        .collect()
}

fn time_per_call(reps: usize, mut f: impl FnMut()) -> f64 {
    f();
    let t = Instant::now();
    for _ in 0..reps {
        f();
    }
    t.elapsed().as_secs_f64() / reps as f64
}

fn execute(cmd: Cmd) -> Result<u8> {
    match cmd {
        Cmd::Weights { alpha, scheme, n, out } => {
            let a = FracOrder::new(alpha)?;
            let g = gl_coeffs(a, n);
            let w = wsgd_weights(a, scheme, n);
            let ps = w.partial_sums();
            let rows = (0..=n)
                .map(|k| vec![k.to_string(), fmt_f64(g[k]), fmt_f64(w.as_slice()[k]), fmt_f64(ps[k])])
                .collect();
            emit(out.as_deref(), &["k", "g_k", "omega_k", "partial_sum"], rows)?;
        }
        Cmd::Symbol { alpha, scheme, m, grid, terms, out } => {
            let a = FracOrder::new(alpha)?;
            let closed = symbol_samples(&SymbolFn::closed(a, scheme), m, grid)?;
            let coeff = symbol_samples(&SymbolFn::truncated(a, scheme, terms), m, grid)?;
            let rows = grid
                .nodes(m)
                .into_iter()
                .zip(closed.iter().zip(&coeff))
                .map(|(x, (c, s))| vec![fmt_f64(x), fmt_f64(*c), fmt_f64(*s)])
                .collect();
            emit(out.as_deref(), &["x", "f_closed", "f_coeff"], rows)?;
        }
        Cmd::Esd { alpha, scheme, m, grid, out } => {
            let a = FracOrder::new(alpha)?;
            let eigs = sym_eigs(&build_g(a, scheme, m)?.to_dense())?;
            let samples = symbol_samples(&SymbolFn::closed(a, scheme), m, grid)?;
            let r = esd_compare(&eigs, &samples)?;
            eprintln!("sup_diff {} wasserstein1 {}", r.sup_diff, r.wasserstein1);
            let rows = (0..m)
                .map(|i| vec![i.to_string(), fmt_f64(r.sorted_eigs[i]), fmt_f64(r.sorted_samples[i])])
                .collect();
            emit(out.as_deref(), &["index", "eig", "sample"], rows)?;
        }
        Cmd::Spectrum { run, mode, out } => {
            let cfg = run.resolve()?;
            let op = cfg.build_operator()?;
            let eigs = match mode {
                SpectrumMode::Plain => plain_spectrum(&op)?,
                SpectrumMode::Precond => precond_spectrum(&op, &TauPrecond::for_operator(&op)?)?,
                SpectrumMode::Error => tau_error_spectrum(&op, &TauPrecond::for_operator(&op)?)?,
            };
            emit(out.as_deref(), &["index", "eigenvalue"], indexed(&eigs))?;
        }
        Cmd::MatvecBench { m, alpha, scheme, reps, out } => {
            let a = FracOrder::new(alpha)?;
            let mut rows = Vec::new();
            for &size in &m {
                let g = build_g(a, scheme, size)?;
                let v: Vec<f64> = (0..size).map(|i| ((i * 7919) % 101) as f64 / 101.0).collect();
                let mut y = vec![0.0; size];
                let fast = time_per_call(reps, || g.matvec_into(&v, &mut y).unwrap());
                let dense = if size <= 4096 {
                    let d = g.to_dense();
                    fmt_f64(time_per_call(reps, || {
                        std::hint::black_box(d.matvec(&v).unwrap());
                    }))
                } else {
                    "NA".to_string()
                };
                rows.push(vec![size.to_string(), fmt_f64(fast), dense]);
            }
            emit(out.as_deref(), &["M", "fast_seconds", "dense_seconds"], rows)?;
        }
        Cmd::Run { run, config, out } => {
            let cfg = parse_run_config(config.as_deref(), &run)?;
            let tr = run_to_dir(&cfg, &out)?;
            println!(
                "problem {} finished: {} steps, mean iterations {}, output in {}",
                cfg.problem,
                tr.pcg_iters.len(),
                tr.mean_iterations(),
                out.display()
            );
        }
        Cmd::Table { table, config, out, jobs } => {
            let x = parse_table_config(config.as_deref(), &table)?;
            let r = run_table(&x, jobs)?;
            let dir = write_table(&out, &r)?;
            let (h, rows) = r.to_rows();
            println!("{}", h.join(","));
            for row in rows {
                println!("{}", row.join(","));
            }
            eprintln!("written to {}", dir.display());
            if r.failures() > 0 {
                eprintln!("{} cell(s) failed", r.failures());
                return Ok(2);
            }
        }
    }
    Ok(0)
}

fn exit_code(e: &Error) -> u8 {
    if e.is_solver_failure() {
        2
    } else {
        1
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
