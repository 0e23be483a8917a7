//! Cross-validate the exact symmetric-subspace constructions against the
//! Haar Monte Carlo oracle: the sampled group average defining R_F, the
//! fidelity forms, and the completeness average.
//!
//! ```sh
//! cargo run --release --example monte_carlo_oracle
//! ```

use mdm_tradeoff::haar_mc::{mc_completeness, mc_fidelities, mc_rf};
use mdm_tradeoff::operators::build_rf;
use mdm_tradeoff::solver::endpoint_maps;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed = 2024;
    let samples = 100_000;

    for (copies, levels) in [(1usize, 2usize), (2, 3)] {
        let exact = build_rf(copies, levels)?;
        let estimate = mc_rf(copies, levels, samples, seed)?;
        println!(
            "R_F (N={copies}, d={levels}): Frobenius distance {:.4e} at S={samples}, seed {seed}",
            estimate.frobenius_distance(exact.matrix())
        );

        let n = copies as f64;
        let d = levels as f64;
        let (estimation, identity) = endpoint_maps(copies, levels)?;
        let (f, g) = mc_fidelities(&estimation, samples, seed + 1)?;
        println!(
            "  estimation endpoint: F = {:.5} +- {:.1e} (exact {:.5}), G = {:.5} +- {:.1e}",
            f.value,
            f.stderr,
            (n + 1.0) / (n + d),
            g.value,
            g.stderr
        );
        let (f, g) = mc_fidelities(&identity, samples, seed + 2)?;
        println!(
            "  intact-copy endpoint: F = {:.5} +- {:.1e} (exact 1), G = {:.5} +- {:.1e} (exact {:.5})",
            f.value,
            f.stderr,
            g.value,
            g.stderr,
            n / (n + d - 1.0)
        );

        let completeness = mc_completeness(&estimation, 50_000, seed + 3)?;
        println!(
            "  completeness deviation from identity: {:.4e} at S={}\n",
            completeness.value, completeness.samples
        );
    }
    Ok(())
}
