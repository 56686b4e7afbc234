//! Kernel density estimates of truncated-normal draws at growing sample sizes.

use density_nw::kde::covering_grid;
use density_nw::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn draws(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let normal = Normal::new(0.2, 0.3).unwrap();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x: f64 = normal.sample(rng);
        if (-1.0..=1.0).contains(&x) {
            out.push(x);
        }
    }
    out
}

fn main() -> Result<()> {
    let grid = Grid::new(-1.0, 1.0, 201)?;
    let truth = truncated_normal_density(0.2, 0.3, grid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in [100, 1_000, 10_000] {
        let sample = Sample::new(draws(&mut rng, n))?;
        let h = silverman_rot(&sample)?;
        let est = kde_estimate(&sample, &KdeConfig::new(grid))?;
        println!(
            "n = {n:>6}: h = {h:.4}, sym KLD = {:.5}, Bayes distance = {:.4}",
            sym_kld(&est, &truth)?,
            bayes_dist(&est, &truth)?
        );
    }

    // count data: log-shift first, then estimate on a grid that covers the sample
    let counts = Sample::new(vec![0.0, 1.0, 1.0, 2.0, 3.0, 5.0, 8.0, 13.0, 0.0, 2.0])?;
    let logged = Preprocessing::LogShift(0.1).apply(counts)?;
    let grid = covering_grid(std::slice::from_ref(&logged), 201)?;
    let est = kde_estimate(&logged, &KdeConfig::new(grid))?;
    println!(
        "log-shifted counts on [{:.3}, {:.3}], mass {:.6}",
        grid.a(),
        grid.b(),
        est.integral()
    );
    Ok(())
}
