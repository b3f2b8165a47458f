//! Spinodal decomposition from seeded noise.

use fracsolve::sim::{Problem, SimConfig, Simulation};

fn main() -> fracsolve::Result<()> {
    let c = SimConfig {
        m: 64,
        n_steps: 300,
        t_final: 18.0,
        seed: 42,
        snapshot_times: vec![],
        ..SimConfig::for_problem(Problem::Spinodal)
    };
    let sim = Simulation::new(&c)?;
    let mut u = sim.initial_state()?;
    for n in 1..=c.n_steps {
        u = sim.step(&u)?.0;
        if n % 50 == 0 {
            let mean = u.iter().sum::<f64>() / u.len() as f64;
            let phase = u.iter().filter(|&&v| v > 0.0).count() as f64 / u.len() as f64;
            println!("t = {:>5.1}  E = {:.6e}  mean = {mean:+.2e}  u>0 fraction = {phase:.3}",
                n as f64 * c.h_t(), sim.energy(&u)?);
        }
    }
    Ok(())
}
