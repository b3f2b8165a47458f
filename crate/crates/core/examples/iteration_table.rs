//! Mean CG and tau-PCG iterations over a grid of orders and sizes.

use fracsolve::experiment::{run_table, AlphaSpec, ExperimentMatrix};

fn main() -> fracsolve::Result<()> {
    let x = ExperimentMatrix {
        alphas: vec![AlphaSpec::Single(1.2), AlphaSpec::Single(1.8)],
        sizes: (6..=10).map(|p| (1 << p) - 1).collect(),
        ..ExperimentMatrix::table1()
    };
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let result = run_table(&x, jobs)?;
    let (header, rows) = result.to_rows();
    println!("{}", header.join("\t"));
    for row in rows {
        println!("{}", row.join("\t"));
    }
    Ok(())
}
