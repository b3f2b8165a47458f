//! Eigenvalues of the Riesz Toeplitz matrix against uniform samples of its symbol.

use fracsolve::spectra::sym_eigs;
use fracsolve::symbol::{esd_compare, symbol_samples, SampleGrid, SymbolFn};
use fracsolve::toeplitz::build_g;
use fracsolve::{FracOrder, Scheme};

fn main() -> fracsolve::Result<()> {
    let alpha = FracOrder::new(1.5)?;
    let f = SymbolFn::closed(alpha, Scheme::Pq10);
    println!("f(0) = {:.3e}, f(pi) = {:.6}", f.eval(0.0)?, f.eval(std::f64::consts::PI)?);
    println!("{:>5} {:>12} {:>12}", "M", "sup diff", "W1");
    for m in [16, 32, 64, 128, 256] {
        let eigs = sym_eigs(&build_g(alpha, Scheme::Pq10, m)?.to_dense())?;
        let samples = symbol_samples(&f, m, SampleGrid::Uniform)?;
        let r = esd_compare(&eigs, &samples)?;
        println!("{m:>5} {:>12.4e} {:>12.4e}", r.sup_diff, r.wasserstein1);
    }
    Ok(())
}
