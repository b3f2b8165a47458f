//! One linear solve of the stepping system with CG and with tau-preconditioned CG.

use fracsolve::{pcg, Axis, FracOperator2D, FracOrder, Identity, PcgOptions, Scheme, StepParams, TauPrecond2D};

fn main() -> fracsolve::Result<()> {
    let params = StepParams::new(1.0 / 16.0, 0.3, 8.0)?;
    let m = 255;
    let axis = |a: f64| Axis::on_interval(FracOrder::new(a).unwrap(), Scheme::Pq10, m, 0.0, 1.0);
    let op = FracOperator2D::new(axis(1.1)?, axis(1.9)?, Scheme::Pq10, params);
    let p = TauPrecond2D::new(&op)?;
    let b: Vec<f64> = (0..op.dim()).map(|i| ((i * 7919) % 1000) as f64 / 1000.0 - 0.5).collect();
    let opts = PcgOptions::default();

    let (_, cg) = pcg(&op, &Identity, &b, opts)?;
    let (_, tau) = pcg(&op, &p, &b, opts)?;
    println!("{m}x{m} grid, alpha = (1.1, 1.9)");
    println!("CG      {:>5} iterations", cg.iterations);
    println!("tau-PCG {:>5} iterations", tau.iterations);
    println!("preconditioner eigenvalues in [{:.3}, {:.3e}]",
        p.eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min),
        p.eigenvalues().iter().cloned().fold(0.0, f64::max));
    Ok(())
}
