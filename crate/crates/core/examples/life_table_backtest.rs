//! Density-matrix ingestion and an expanding-window backtest, on a synthetic
//! life table of death counts (ages 0..110+, radix 100000).

use std::io::Write;

use density_nw::evaluation::write_summary_csv;
use density_nw::prelude::*;

fn synthetic_life_table(years: std::ops::Range<i32>) -> String {
    let mut out = String::from("year");
    for age in 0..=110 {
        out.push_str(&format!(",{age}{}", if age == 110 { "+" } else { "" }));
    }
    out.push('\n');
    for (k, year) in years.enumerate() {
        // modal age drifts upward, infant mortality falls
        let mode = 72.0 + 0.25 * k as f64;
        let raw: Vec<f64> = (0..=110)
            .map(|a| {
                let a = a as f64;
                let senescent = (-(a - mode).powi(2) / (2.0 * 11.0f64.powi(2))).exp();
                let infant = 0.2 * (0.97f64).powi(k as i32) * (-a).exp();
                senescent + infant + 1e-4
            })
            .collect();
        let total: f64 = raw.iter().sum();
        out.push_str(&year.to_string());
        for v in raw {
            out.push_str(&format!(",{:.0}", 100_000.0 * v / total));
        }
        out.push('\n');
    }
    out
}

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("density_nw_life_table");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("deaths.csv");
    std::fs::File::create(&path)?.write_all(synthetic_life_table(1960..2010).as_bytes())?;

    let series = ingest_density_matrix(&path, 100_000.0)?;
    println!("{} years on ages {}..{}", series.len(), series.grid().a(), series.grid().b());

    let reports = [
        expanding_window_backtest(&series, 35, &BayesNwForecaster::default())?,
        expanding_window_backtest(&series, 35, &RandomWalkForecaster)?,
    ];
    let mut buf = Vec::new();
    write_summary_csv(&reports, &mut buf)?;
    print!("{}", String::from_utf8_lossy(&buf));
    Ok(())
}
