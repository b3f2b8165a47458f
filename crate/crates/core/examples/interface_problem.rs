//! Interface sharpening with the fractional order: energy decay, the maximum bound
//! and the steepest slope at the final time.

use fracsolve::sim::{max_gradient, run, Problem, SimConfig};
use fracsolve::FracOrder;

fn main() -> fracsolve::Result<()> {
    println!("{:>5} {:>14} {:>14} {:>10} {:>10}", "alpha", "E(0)", "E(T)", "max|u|", "max|u_x|");
    for a in [1.25, 1.5, 1.75, 1.9] {
        let c = SimConfig {
            alpha: FracOrder::new(a)?,
            ..SimConfig::for_problem(Problem::Interface1D)
        };
        let tr = run(&c)?;
        let h = (c.domain[1] - c.domain[0]) / (c.m + 1) as f64;
        let umax = tr.max_series.iter().map(|&(_, m)| m).fold(0.0, f64::max);
        println!(
            "{a:>5} {:>14.6e} {:>14.6e} {umax:>10.5} {:>10.2}",
            tr.energy_series[0].1,
            tr.energy_series.last().unwrap().1,
            max_gradient(&tr.final_state, tr.shape, h)
        );
    }
    Ok(())
}
