//! Raw panel of daily counts: log-shift, kernel density estimation per day,
//! then backtest and a three-day forecast.

use std::fmt::Write as _;

use density_nw::io::read_raw_panel;
use density_nw::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

fn main() -> Result<()> {
    let days = 40;
    let units = 96;
    let mut rng = ChaCha8Rng::seed_from_u64(2020);
    let mut counts = vec![vec![0.0; days]; units];
    for d in 0..days {
        let wave = 4.0 + 30.0 * (-((d as f64 - 20.0) / 8.0).powi(2)).exp();
        for (u, row) in counts.iter_mut().enumerate() {
            let scale = 0.5 + (u % 7) as f64 / 4.0;
            row[d] = Poisson::new(wave * scale).unwrap().sample(&mut rng);
        }
    }
    let mut csv = (1..=days).map(|d| format!("day{d}")).collect::<Vec<_>>().join(",");
    csv.push('\n');
    for row in &counts {
        let line: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        writeln!(csv, "{}", line.join(",")).unwrap();
    }

    let panel = read_raw_panel(csv.as_bytes(), PanelLayout::Wide, Preprocessing::LogShift(0.1))?;
    let series = panel.to_density_series(201, None)?;
    println!(
        "{} daily densities of ln(count + 0.1) on [{:.2}, {:.2}]",
        series.len(),
        series.grid().a(),
        series.grid().b()
    );

    for method in [&BayesNwForecaster::default() as &dyn Forecaster, &RandomWalkForecaster] {
        let r = expanding_window_backtest(&series, 25, method)?;
        println!(
            "{:>8}: mean KLD {:.4}, median {:.4}, failed {}",
            r.method, r.summary.mean, r.summary.median, r.failed
        );
    }

    let sel = gcv_select_default(&series, RegressionKernel::default())?;
    let fc = forecast_sequence(&series, 3, sel.h_reg)?;
    for s in &fc.steps {
        println!("step {}: h_used {:.4}{}", s.step, s.h_used, if s.enlarged { " (widened)" } else { "" });
    }
    Ok(())
}
