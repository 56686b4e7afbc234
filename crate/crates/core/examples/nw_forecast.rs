//! Multi-step Bayes Nadaraya-Watson forecast of a simulated density series.

use density_nw::prelude::*;

fn main() -> Result<()> {
    let sim = generate_series(&DgpConfig::default().with_seed(3))?;
    let train = sim.densities.prefix(140)?;
    let selection = gcv_select_default(&train, RegressionKernel::default())?;
    println!("selected h_reg = {:.4}", selection.h_reg);

    let fc = forecast_sequence(&train, 10, selection.h_reg)?;
    let rw = random_walk_forecast(&train, 10)?;
    let truth = &sim.densities.densities()[140..];
    println!("step  h_used  enlarged  KLD(NW)  KLD(RW)");
    for (i, step) in fc.steps.iter().enumerate() {
        println!(
            "{:>4}  {:.4}  {:>8}  {:.5}  {:.5}",
            step.step,
            step.h_used,
            step.enlarged,
            sym_kld(&fc.forecasts.densities()[i], &truth[i])?,
            sym_kld(&rw.densities()[i], &truth[i])?
        );
    }
    Ok(())
}
