//! One simulated series: driver means, error sizes and the model identity.

use density_nw::prelude::*;
use density_nw::simulation::{chain_residual, noise_to_signal};

fn main() -> Result<()> {
    let config = DgpConfig::default().with_seed(42);
    let sim = generate_series(&config)?;
    println!("{} densities on {} grid points", sim.densities.len(), config.grid.n_points());
    println!("noise-to-signal ratio {:.5}", noise_to_signal(&sim)?);
    println!("max |clr f_t+1 - clr m(f_t) - eta_t| = {:.2e}", chain_residual(&sim)?);

    for t in (0..config.length).step_by(25) {
        let f = &sim.densities.densities()[t];
        let mean: f64 = {
            let xf: Vec<f64> = f.grid().points().zip(f.values()).map(|(x, v)| x * v).collect();
            f.grid().integrate(&xf)
        };
        println!(
            "t = {:>3}: driver mean {:+.3}, density mean {:+.3}, |f|_B {:.3}",
            t + 1,
            config.driver_mean(t + 1),
            mean,
            bayes_norm(f)
        );
    }

    let u = GriddedDensity::uniform(config.grid);
    let tri = convolution_operator(&u, &u, 0.5)?;
    println!("uniform convolved with uniform peaks at {:.4}", tri.values()[100]);
    Ok(())
}
