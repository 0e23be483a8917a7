//! The qubit mixture decomposes into two singleton eigenvalues plus N
//! two-by-two blocks; this example prints the analytic spectrum next to the
//! dense diagonalization.
//!
//! ```sh
//! cargo run --example block_spectrum
//! ```

use mdm_tradeoff::analytic::{qubit_block, scalar_eigs};
use mdm_tradeoff::operators::build_rp;
use mdm_tradeoff::solver::spectrum;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let copies = 4;
    let p = 0.6;
    let denom = ((copies + 1) * (copies + 2)) as f64;

    let (lambda0, lambda_last) = scalar_eigs(copies, p);
    let mut analytic = vec![
        (lambda0, "singleton |N,0>|1>".to_string()),
        (lambda_last, "singleton |N,N>|0>".to_string()),
    ];
    for k in 1..=copies {
        let block = qubit_block(copies, k, p)?;
        let (mu1, mu2) = block.eigenvalues();
        analytic.push((mu1 / denom, format!("block k={k}, upper")));
        analytic.push((mu2 / denom, format!("block k={k}, lower")));
    }
    analytic.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let numeric = spectrum(&build_rp(copies, 2, p)?)?;

    println!("spectrum of R_p for N={copies} qubits at p={p}\n");
    println!(
        "{:>14} {:>14} {:>10}   origin",
        "numeric", "analytic", "residual"
    );
    for (value, (expected, label)) in numeric.iter().zip(analytic.iter()) {
        println!(
            "{:>14.10} {:>14.10} {:>10.2e}   {label}",
            value,
            expected,
            (value - expected).abs()
        );
    }

    let top = qubit_block(copies, 1, p)?;
    let (alpha, beta) = top.top_eigenvector();
    println!("\ndominant block k=1 eigenvector: alpha = {alpha:.6}, beta = {beta:.6}");
    Ok(())
}
