//! Spectrum of the tau-preconditioned matrix and of A - P.

use fracsolve::spectra::{cluster_report, precond_spectrum, tau_error_spectrum};
use fracsolve::sim::{Problem, SimConfig};
use fracsolve::TauPrecond;

fn main() -> fracsolve::Result<()> {
    let radii = [0.01, 0.05, 0.1];
    println!("{:>5} {:>10} {:>10} {:>10} {:>10}", "M", "min", "max", "out(0.1)", "A-P in 0.05");
    for m in [32, 64, 128, 256] {
        let c = SimConfig {
            m,
            ..SimConfig::for_problem(Problem::Smooth1D)
        };
        let op = c.build_operator()?;
        let p = TauPrecond::for_operator(&op)?;
        let e = precond_spectrum(&op, &p)?;
        let r = cluster_report(&e, 1.0, &radii)?;
        let d = cluster_report(&tau_error_spectrum(&op, &p)?, 0.0, &[0.05])?;
        println!("{m:>5} {:>10.4} {:>10.4} {:>10} {:>10.4}",
            e[0], e[m - 1], r.outliers(0.1).unwrap(), d.fractions[0]);
    }
    Ok(())
}
