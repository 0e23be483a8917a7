//! The two extreme maps of the trade-off: pure estimation and the map that
//! leaves one copy untouched, with all three parametrizations of the family
//! connecting them.
//!
//! ```sh
//! cargo run --example endpoint_maps
//! ```

use mdm_tradeoff::analytic::convert_params;
use mdm_tradeoff::operators::{build_rf, build_rg_from_rf};
use mdm_tradeoff::solver::{endpoint_maps, fidelities};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (copies, levels) in [(1usize, 2usize), (2, 2), (2, 3), (2, 5)] {
        let rf = build_rf(copies, levels)?;
        let rg = build_rg_from_rf(&rf);
        let (estimation, identity) = endpoint_maps(copies, levels)?;

        let (f, g) = fidelities(&estimation, &rf, &rg)?;
        println!("N={copies} d={levels}");
        println!("  estimation endpoint: F = {f:.6}, G = {g:.6} (alpha = 1)");

        let (f, g) = fidelities(&identity, &rf, &rg)?;
        let alpha = identity.alpha();
        println!("  intact-copy endpoint: F = {f:.6}, G = {g:.6} (alpha = {alpha:.6})");

        let params = convert_params(copies, levels, alpha, identity.beta())?;
        print!(
            "  superposition weights: alpha_bar = {:.6}, beta_bar = {:.6}",
            params.alpha_bar, params.beta_bar
        );
        if let (Some(ap), Some(bp)) = (params.alpha_prime, params.beta_prime) {
            print!(", alpha' = {ap:.6}, beta' = {bp:.6}");
        }
        println!("\n");
    }
    println!("alpha' = 0 / alpha_bar = 0 exposes the intact-copy map as the pure");
    println!("second branch of the superposition.");
    Ok(())
}
