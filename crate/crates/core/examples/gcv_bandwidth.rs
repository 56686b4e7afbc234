//! Leave-one-pair-out bandwidth scores across the default candidate grid.

use density_nw::prelude::*;
use density_nw::regression::{default_candidates, log_spaced};

fn main() -> Result<()> {
    let sim = generate_series(&DgpConfig::default().with_seed(11).with_length(100))?;
    let series = &sim.densities;

    let auto = gcv_select_default(series, RegressionKernel::default())?;
    for (h, score) in auto.candidates.iter().zip(&auto.scores) {
        let mark = if *h == auto.h_reg { " <-" } else { "" };
        println!("h = {h:>8.4}  score = {score:>12.4}{mark}");
    }

    let defaults = default_candidates(series);
    let (lo, hi) = (defaults[0], defaults[defaults.len() - 1]);
    let coarse = gcv_select_bandwidth(series, RegressionKernel::default(), &log_spaced(lo, 2.0 * hi, 6))?;
    println!("coarse grid picks h = {:.4}", coarse.h_reg);
    Ok(())
}
