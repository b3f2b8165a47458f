//! FFT Toeplitz products against dense products as M grows.

use std::hint::black_box;
use std::time::Instant;

use fracsolve::toeplitz::build_g;
use fracsolve::{FracOrder, Scheme};

fn main() -> fracsolve::Result<()> {
    let alpha = FracOrder::new(1.5)?;
    println!("{:>7} {:>12} {:>12}", "M", "fft (s)", "dense (s)");
    for p in 6..=16 {
        let m = (1usize << p) - 1;
        let g = build_g(alpha, Scheme::Pq10, m)?;
        let v: Vec<f64> = (0..m).map(|i| (i as f64).sin()).collect();
        let reps = 10;
        let t = Instant::now();
        for _ in 0..reps {
            black_box(g.matvec(&v)?);
        }
        let fast = t.elapsed().as_secs_f64() / reps as f64;
        let dense = if m <= 4096 {
            let d = g.to_dense();
            let t = Instant::now();
            for _ in 0..reps {
                black_box(d.matvec(&v)?);
            }
            format!("{:.3e}", t.elapsed().as_secs_f64() / reps as f64)
        } else {
            "-".into()
        };
        println!("{m:>7} {fast:>12.3e} {dense:>12}");
    }
    Ok(())
}
