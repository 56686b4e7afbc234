//! Desk-scale Monte-Carlo comparison of Bayes NW against the random walk.
//!
//! Usage: `cargo run --release --example table1_replications -- [reps] [sigma] [rho0]`

use std::time::Instant;

use density_nw::simulation::{run_replications, DgpConfig};

fn main() -> density_nw::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let reps: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(20);
    let sigma: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(0.1);
    let rho0: f64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(0.5);

    let config = DgpConfig::default().with_sigma(sigma).with_rho0(rho0);
    let start = Instant::now();
    let table = run_replications(&config, reps, 50)?;
    println!("sigma = {sigma}, rho0 = {rho0}, {reps} replications, length {}", config.length);
    for method in table.methods() {
        let k = table.klds(&method);
        let sd = {
            let m = k.iter().sum::<f64>() / k.len() as f64;
            (k.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (k.len().max(2) - 1) as f64).sqrt()
        };
        println!("{method:>9}: mean KLD {:.5} (sd {sd:.5})", table.mean_kld(&method).unwrap());
    }
    println!("mean nsr {:.4}", table.mean_nsr());
    println!("elapsed {:.1?}", start.elapsed());
    Ok(())
}
