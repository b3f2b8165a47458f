//! Prints the WSGD weights and checks their sign and partial-sum structure.

use fracsolve::weights::{tail_decay_exponent, weight_report, wsgd_weights};
use fracsolve::{FracOrder, Scheme};

fn main() -> fracsolve::Result<()> {
    let alpha = FracOrder::new(1.5)?;
    for scheme in Scheme::ALL {
        let w = wsgd_weights(alpha, scheme, 6);
        println!("{scheme}: omega_0..6 = {:.6?}", w.as_slice());
        println!("  partial sums = {:.6?}", &w.partial_sums()[..7]);
        let report = weight_report(alpha, scheme, 10_000)?;
        for c in report.checks() {
            println!("  {:<40} {}", c.name, if c.holds { "holds" } else { "FAILS" });
        }
        let slope = tail_decay_exponent(alpha, scheme, &[1000, 2000, 4000, 8000])?;
        println!("  |omega_k| decays like k^-(1+{slope:.3})");
    }
    Ok(())
}
