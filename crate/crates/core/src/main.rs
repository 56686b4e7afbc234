use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use density_nw::run::{run, Mode, RunConfig};
use density_nw::Error;

#[derive(Parser)]
#[command(version, about = "Forecast time series of densities with Bayes-space Nadaraya-Watson regression")]
struct Cli {
    #[command(subcommand)]
    mode: Command,
    /// Flat key = value config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    reps: Option<usize>,
    #[arg(long, global = true)]
    horizon: Option<usize>,
    #[arg(long, global = true)]
    initial_train: Option<usize>,
    /// none | log_shift:c
    #[arg(long, global = true)]
    preprocess: Option<String>,
    #[arg(long, global = true)]
    radix: Option<f64>,
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Any config key, as key=value; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Monte-Carlo replications of the simulated density process.
    Simulate,
    /// Expanding-window backtest of Bayes NW and random walk.
    Backtest,
    /// Multi-step forecast from the full input series.
    Forecast,
}

fn overrides(cli: &Cli) -> Result<Vec<(String, String)>, Error> {
    let mut out = Vec::new();
    for kv in &cli.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    let quote = |s: String| format!("{s:?}");
    let flags = [
        ("seed", cli.seed.map(|v| v.to_string())),
        ("out", cli.out.as_ref().map(|p| quote(p.display().to_string()))),
        ("reps", cli.reps.map(|v| v.to_string())),
        ("horizon", cli.horizon.map(|v| v.to_string())),
        ("initial_train", cli.initial_train.map(|v| v.to_string())),
        ("preprocess", cli.preprocess.clone().map(quote)),
        ("radix", cli.radix.map(|v| format!("{v:?}"))),
        ("input", cli.input.as_ref().map(|p| quote(p.display().to_string()))),
    ];
    out.extend(flags.into_iter().filter_map(|(k, v)| v.map(|v| (k.to_string(), v))));
    Ok(out)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let mode = match cli.mode {
        Command::Simulate => Mode::Simulate,
        Command::Backtest => Mode::Backtest,
        Command::Forecast => Mode::Forecast,
    };
    let result = overrides(&cli)
        .and_then(|o| RunConfig::load(mode, cli.config.as_deref(), &o))
        .and_then(|c| run(&c));
    match result {
        Ok(output) => {
            for f in output.files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let record = serde_json::json!({
                "error": e.kind(),
                "exit_code": e.exit_code(),
                "message": e.to_string(),
            });
            eprintln!("{record}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
