//! Numeric trade-off curve for N identical qubits, checked against the
//! closed form on the fly.
//!
//! ```sh
//! cargo run --example qubit_tradeoff
//! ```

use mdm_tradeoff::analytic::qubit_tradeoff_f;
use mdm_tradeoff::solver::{linspace, tradeoff_sweep};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let copies = 2;
    let grid = linspace(0.05, 0.95, 10);
    let points = tradeoff_sweep(copies, 2, &grid)?;

    println!("trade-off curve for {copies} identical qubits");
    println!(
        "{:>6} {:>10} {:>10} {:>12} {:>9}",
        "p", "G", "F", "F(closed)", "residual"
    );
    let mut worst = 0.0f64;
    for pt in &points {
        let closed = qubit_tradeoff_f(copies, pt.estimation_fidelity)?;
        let residual = (closed - pt.output_fidelity).abs();
        worst = worst.max(residual);
        println!(
            "{:>6.3} {:>10.6} {:>10.6} {:>12.6} {:>9.2e}",
            pt.p, pt.estimation_fidelity, pt.output_fidelity, closed, residual
        );
    }
    println!("\nworst residual: {worst:.3e}");

    let n = copies as f64;
    println!(
        "curve endpoints: estimation (G,F) = ({:.4}, {:.4}), intact copy (G,F) = ({:.4}, 1)",
        (n + 1.0) / (n + 2.0),
        (n + 1.0) / (n + 2.0),
        n / (n + 1.0),
    );
    Ok(())
}
