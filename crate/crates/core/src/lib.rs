//! Forecasting time series of probability densities.
//!
//! Densities live on a shared uniform [`grid::Grid`] and are treated as
//! elements of a Bayes Hilbert space: perturbation and powering replace
//! addition and scalar multiplication, and the centred log-ratio transform
//! ([`bayes::clr`]) maps them isometrically to zero-integral functions. The
//! forecaster ([`regression`]) is a Nadaraya–Watson regression of each density
//! on its predecessor with weights driven by Bayes distances, so every
//! forecast is a valid density by construction.
//!
//! ```
//! use density_nw::prelude::*;
//!
//! let cfg = DgpConfig::default().with_length(40).with_seed(1);
//! let sim = generate_series(&cfg).unwrap();
//! let sel = gcv_select_default(&sim.densities, RegressionKernel::default()).unwrap();
//! let fc = forecast_sequence(&sim.densities, 2, sel.h_reg).unwrap();
//! assert_eq!(fc.forecasts.len(), 2);
//! ```

pub mod bayes;
pub mod error;
pub mod evaluation;
pub mod grid;
pub mod io;
pub mod kde;
pub mod regression;
pub mod run;
pub mod series;
pub mod simulation;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::bayes::{bayes_dist, bayes_inner, bayes_norm, clr, clr_inv, perturb, perturb_sub, power};
    pub use crate::error::{Error, Result};
    pub use crate::evaluation::{
        bayes_mise, expanding_window_backtest, sym_kld, BacktestReport, BayesNwForecaster, Forecaster,
        RandomWalkForecaster, Summary,
    };
    pub use crate::grid::{ClrFunction, Grid, GridFunction, GriddedDensity};
    pub use crate::io::{ingest_density_matrix, ingest_raw_panel, PanelLayout, Preprocessing, RawPanel};
    pub use crate::kde::{kde_estimate, silverman_rot, KdeConfig, Sample};
    pub use crate::regression::{
        bayes_nw_predict, forecast_sequence, gcv_select_bandwidth, gcv_select_default, nw_weights,
        random_walk_forecast, NeighborhoodPolicy, RegressionKernel,
    };
    pub use crate::series::DensitySeries;
    pub use crate::simulation::{
        convolution_operator, generate_series, run_replications, trig_error, truncated_normal_density, DgpConfig,
    };
}
