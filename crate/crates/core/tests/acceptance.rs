//! One test per acceptance criterion. Each prints a single `PASS`/`FAIL` line
//! before asserting, so `cargo test --test acceptance -- --nocapture` doubles
//! as a report.

use std::fs;
use std::time::Instant;

use density_nw::grid::INTEGRAL_TOL;
use density_nw::prelude::*;
use density_nw::run::{run, Mode, RunConfig};
use density_nw::simulation::random_density;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn verdict(id: u32, title: &str, ok: bool, detail: String) {
    println!("criterion {id:>2} {title}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} {title} failed: {detail}");
}

fn grid() -> Grid {
    Grid::new(-1.0, 1.0, 201).unwrap()
}

fn sup(a: &GriddedDensity, b: &GriddedDensity) -> f64 {
    a.max_abs_diff(b).unwrap()
}

#[test]
fn c01_bayes_space_algebra() {
    let start = Instant::now();
    let g = grid();
    let e = GriddedDensity::uniform(g);
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (f1, f2, f3) = (random_density(&mut rng, g), random_density(&mut rng, g), random_density(&mut rng, g));
        let a: f64 = rng.random_range(-2.0..2.0);
        let b: f64 = rng.random_range(-2.0..2.0);
        let checks = [
            sup(&perturb(&f1, &f2).unwrap(), &perturb(&f2, &f1).unwrap()),
            sup(
                &perturb(&perturb(&f1, &f2).unwrap(), &f3).unwrap(),
                &perturb(&f1, &perturb(&f2, &f3).unwrap()).unwrap(),
            ),
            sup(&perturb(&f1, &e).unwrap(), &f1),
            sup(&perturb_sub(&f1, &f1).unwrap(), &e),
            sup(
                &power(a, &perturb(&f1, &f2).unwrap()).unwrap(),
                &perturb(&power(a, &f1).unwrap(), &power(a, &f2).unwrap()).unwrap(),
            ),
            sup(
                &power(a + b, &f1).unwrap(),
                &perturb(&power(a, &f1).unwrap(), &power(b, &f1).unwrap()).unwrap(),
            ),
            sup(&power(a, &power(b, &f1).unwrap()).unwrap(), &power(a * b, &f1).unwrap()),
            sup(&power(1.0, &f1).unwrap(), &f1),
        ];
        worst = checks.into_iter().fold(worst, f64::max);
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        1,
        "Bayes-space algebra",
        worst < 1e-10 && secs < 5.0,
        format!("worst law violation {worst:.2e}, {secs:.2} s"),
    );
}

#[test]
fn c02_clr_isometry() {
    let g = grid();
    let w = g.weights();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst_norm: f64 = 0.0;
    let mut worst_inner: f64 = 0.0;
    for k in 0..100 {
        let (f, h) = (random_density(&mut rng, g), random_density(&mut rng, g));
        let lhs = bayes_norm(&perturb_sub(&f, &h).unwrap());
        let d: Vec<f64> = clr(&f).values().iter().zip(clr(&h).values()).map(|(x, y)| x - y).collect();
        let rhs = g.integrate(&d.iter().map(|v| v * v).collect::<Vec<_>>()).sqrt();
        worst_norm = worst_norm.max((lhs - rhs).abs());

        if k < 10 {
            // (1 / 2(b - a)) ∫∫ ln(f(u)/f(v)) ln(h(u)/h(v)) du dv
            let (lf, lh): (Vec<f64>, Vec<f64>) =
                f.values().iter().zip(h.values()).map(|(x, y)| (x.ln(), y.ln())).unzip();
            let mut double = 0.0;
            for i in 0..g.n_points() {
                for j in 0..g.n_points() {
                    double += w[i] * w[j] * (lf[i] - lf[j]) * (lh[i] - lh[j]);
                }
            }
            double /= 2.0 * g.width();
            worst_inner = worst_inner.max((double - bayes_inner(&f, &h).unwrap()).abs());
        }
    }
    verdict(
        2,
        "clr isometry",
        worst_norm < 1e-8 && worst_inner < 1e-6,
        format!("norm gap {worst_norm:.2e}, double-integral gap {worst_inner:.2e}"),
    );
}

#[test]
fn c03_analytic_clr() {
    let g = grid();
    let c = clr(&truncated_normal_density(0.0, 0.5, g).unwrap());
    let err = g
        .points()
        .zip(c.values())
        .map(|(u, v)| (v - (-2.0 * u * u + 2.0 / 3.0)).abs())
        .fold(0.0, f64::max);
    verdict(3, "analytic clr of TN(0, 0.5^2)", err < 1e-6, format!("sup error {err:.2e}"));
}

/// Inverse-CDF sampler over grid cells, uniform within a cell.
struct CellSampler {
    edges: Vec<f64>,
    cdf: Vec<f64>,
}

impl CellSampler {
    fn new(f: &GriddedDensity) -> Self {
        let g = f.grid();
        let v = f.values();
        let mut cdf = vec![0.0];
        for i in 0..v.len() - 1 {
            cdf.push(cdf[i] + 0.5 * (v[i] + v[i + 1]) * g.spacing());
        }
        let total = *cdf.last().unwrap();
        cdf.iter_mut().for_each(|c| *c /= total);
        Self { edges: g.points().collect(), cdf }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let cell = self.cdf.partition_point(|&c| c <= u).clamp(1, self.cdf.len() - 1) - 1;
        let t: f64 = rng.random();
        self.edges[cell] + t * (self.edges[cell + 1] - self.edges[cell])
    }
}

fn monte_carlo_pushforward(f: &GriddedDensity, g: &GriddedDensity, rho0: f64, draws: usize, seed: u64) -> GriddedDensity {
    let grid = *f.grid();
    let (sf, sg) = (CellSampler::new(f), CellSampler::new(g));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = grid.spacing();
    let n = grid.n_points();
    let mut counts = vec![0.0; n];
    for _ in 0..draws {
        let z = rho0 * sf.draw(&mut rng) + (1.0 - rho0) * sg.draw(&mut rng);
        let bin = (((z - grid.a()) / h).round() as usize).min(n - 1);
        counts[bin] += 1.0;
    }
    // end bins are half as wide
    let values = counts
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let width = if i == 0 || i == n - 1 { 0.5 * h } else { h };
            c / (draws as f64 * width)
        })
        .collect();
    GriddedDensity::from_values(grid, values).unwrap()
}

#[test]
fn c04_convolution_operator() {
    let g = grid();
    let u = GriddedDensity::uniform(g);
    let tri = convolution_operator(&u, &u, 0.5).unwrap();
    let tri_err = g
        .points()
        .zip(tri.values())
        .map(|(y, v)| (v - (1.0 - y.abs())).abs())
        .fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let configs = [
        (truncated_normal_density(0.3, 0.4, g).unwrap(), truncated_normal_density(-0.5, 0.6, g).unwrap(), 0.3),
        (random_density(&mut rng, g), truncated_normal_density(0.8, 0.5, g).unwrap(), 0.7),
    ];
    let klds: Vec<f64> = configs
        .iter()
        .enumerate()
        .map(|(k, (f, h, rho))| {
            let mc = monte_carlo_pushforward(f, h, *rho, 1_000_000, 40 + k as u64);
            sym_kld(&mc, &convolution_operator(f, h, *rho).unwrap()).unwrap()
        })
        .collect();
    verdict(
        4,
        "convolution operator",
        tri_err < 2e-2 && klds.iter().all(|k| *k < 0.01),
        format!("triangular sup error {tri_err:.2e}, Monte-Carlo sym KLD {:.2e} / {:.2e}", klds[0], klds[1]),
    );
}

fn tn_sample(rng: &mut ChaCha8Rng, mu: f64, nu: f64, n: usize) -> Sample {
    let normal = Normal::new(mu, nu).unwrap();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x: f64 = normal.sample(rng);
        if (-1.0..=1.0).contains(&x) {
            out.push(x);
        }
    }
    Sample::new(out).unwrap()
}

#[test]
fn c05_kde_consistency() {
    let start = Instant::now();
    let g = grid();
    let truth = truncated_normal_density(0.0, 0.5, g).unwrap();
    let mise = |n: usize, seed: u64| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let est: Vec<GriddedDensity> = (0..50)
            .map(|_| kde_estimate(&tn_sample(&mut rng, 0.0, 0.5, n), &KdeConfig::new(g)).unwrap())
            .collect();
        let truths = DensitySeries::new(vec![truth.clone(); 50]).unwrap();
        bayes_mise(&DensitySeries::new(est).unwrap(), &truths).unwrap()
    };
    let (m100, m1000) = (mise(100, 500), mise(1000, 501));
    let mut rng = ChaCha8Rng::seed_from_u64(502);
    let big = kde_estimate(&tn_sample(&mut rng, 0.0, 0.5, 10_000), &KdeConfig::new(g)).unwrap();
    let kld = sym_kld(&big, &truth).unwrap();
    let secs = start.elapsed().as_secs_f64();
    verdict(
        5,
        "KDE consistency",
        m1000 < m100 && kld < 0.01 && secs < 60.0,
        format!("Bayes MISE {m100:.4} -> {m1000:.4}, n=10000 sym KLD {kld:.2e}, {secs:.1} s"),
    );
}

fn is_valid_density(f: &GriddedDensity) -> bool {
    f.values().iter().all(|v| v.is_finite() && *v > 0.0) && (f.integral() - 1.0).abs() < INTEGRAL_TOL
}

#[test]
fn c06_estimator_contracts() {
    let sim = generate_series(&DgpConfig::default().with_seed(606).with_length(70)).unwrap();
    let series = &sim.densities;
    let train = &series.densities()[..series.len() - 1];
    let mut worst_sum: f64 = 0.0;
    let sel = gcv_select_default(series, RegressionKernel::default()).unwrap();
    for scale in [1.0, 2.0, 5.0, 50.0] {
        for q in series.densities().iter().step_by(7) {
            if let Ok(w) = nw_weights(train, q, scale * sel.h_reg, RegressionKernel::default()) {
                worst_sum = worst_sum.max((w.iter().sum::<f64>() - 1.0).abs());
            }
        }
    }

    let mut checked = 0;
    let mut invalid = 0;
    let noisy = generate_series(&DgpConfig::default().with_seed(607).with_sigma(0.5).with_length(60)).unwrap();
    for s in [series, &noisy.densities] {
        for m in [&BayesNwForecaster::default() as &dyn Forecaster, &RandomWalkForecaster] {
            let report = expanding_window_backtest(s, 40, m).unwrap();
            for f in report.forecasts.iter().flatten() {
                checked += 1;
                invalid += usize::from(!is_valid_density(f));
            }
        }
    }
    let fc = forecast_sequence(series, 10, sel.h_reg).unwrap();
    for f in fc.forecasts.iter() {
        checked += 1;
        invalid += usize::from(!is_valid_density(f));
    }
    verdict(
        6,
        "estimator contracts",
        worst_sum < 1e-12 && invalid == 0 && checked > 0,
        format!("weight-sum gap {worst_sum:.1e}, {invalid} invalid of {checked} forecasts"),
    );
}

#[test]
fn c07_desk_scale_replication() {
    let start = Instant::now();
    let table = run_replications(&DgpConfig::default().with_sigma(0.1).with_rho0(0.5), 20, 50).unwrap();
    let nw = table.mean_kld("bayes_nw").unwrap();
    let rw = table.mean_kld("rw").unwrap();
    verdict(
        7,
        "desk-scale replication (sigma 0.1, rho0 0.5)",
        (0.002..=0.03).contains(&nw) && nw < rw,
        format!(
            "Bayes NW mean KLD {nw:.4}, RW mean KLD {rw:.4}, nsr {:.4}, {:.0} s",
            table.mean_nsr(),
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn c08_error_size_trend() {
    let base = DgpConfig::default().with_rho0(0.5);
    let low = run_replications(&base.clone().with_sigma(0.1), 10, 50).unwrap();
    let high = run_replications(&base.with_sigma(0.5), 10, 50).unwrap();
    let (l, h) = (low.mean_kld("bayes_nw").unwrap(), high.mean_kld("bayes_nw").unwrap());
    verdict(
        8,
        "error-size trend",
        h > l,
        format!("Bayes NW mean KLD {l:.4} at sigma 0.1, {h:.4} at sigma 0.5"),
    );
}

fn life_table(rows: usize) -> String {
    let mut out = String::from("year");
    for age in 0..=100 {
        out.push_str(&format!(",{age}{}", if age == 100 { "+" } else { "" }));
    }
    out.push('\n');
    for k in 0..rows {
        let mode = 70.0 + 0.3 * k as f64;
        out.push_str(&(1970 + k).to_string());
        let raw: Vec<f64> = (0..=100)
            .map(|a| (-(a as f64 - mode).powi(2) / 200.0).exp() + 0.002 * (1.0 + (k as f64 * 0.9 + a as f64).sin()))
            .collect();
        let total: f64 = raw.iter().sum();
        for v in raw {
            out.push_str(&format!(",{:.0}", 1e5 * v / total));
        }
        out.push('\n');
    }
    out
}

#[test]
fn c09_density_matrix_backtest() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("deaths.csv");
    fs::write(&input, life_table(30)).unwrap();
    let out = tmp.path().join("out");
    let overrides = [
        ("input".to_string(), format!("{:?}", input.to_str().unwrap())),
        ("radix".to_string(), "100000".to_string()),
        ("out".to_string(), format!("{:?}", out.to_str().unwrap())),
    ];
    let config = RunConfig::load(Mode::Backtest, None, &overrides).unwrap();
    run(&config).unwrap();
    let summary = fs::read_to_string(out.join("backtest_summary.csv")).unwrap();
    let rows: Vec<Vec<&str>> = summary.lines().map(|l| l.split(',').collect()).collect();
    let labels: Vec<&str> = rows[1..7].iter().map(|r| r[0]).collect();
    let header_ok = rows[0] == ["Statistic", "bayes_nw", "rw"];
    let values_ok = rows[1..7]
        .iter()
        .all(|r| r[1..].iter().all(|v| v.parse::<f64>().is_ok_and(|x| x.is_finite() && x >= 0.0)));
    let ok = header_ok && labels == Summary::LABELS && values_ok;
    verdict(
        9,
        "density-matrix ingestion and backtest",
        ok,
        format!("summary rows {}", labels.join(" | ")),
    );
}

#[test]
fn c10_determinism() {
    let tmp = tempfile::tempdir().unwrap();
    let input = tmp.path().join("deaths.csv");
    fs::write(&input, life_table(20)).unwrap();
    let quoted = |p: &std::path::Path| format!("{:?}", p.to_str().unwrap());
    let mut identical = true;
    let mut compared = 0;
    for (mode, extra) in [
        (Mode::Simulate, vec![("seed", "9".to_string()), ("reps", "3".into()), ("length", "40".into()), ("test_len", "8".into())]),
        (Mode::Backtest, vec![("input", quoted(&input)), ("radix", "100000".into())]),
    ] {
        let mut outputs = Vec::new();
        for run_id in 0..2 {
            let out = tmp.path().join(format!("{mode:?}-{run_id}"));
            let mut overrides: Vec<(String, String)> = extra.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            overrides.push(("out".into(), quoted(&out)));
            let files = run(&RunConfig::load(mode, None, &overrides).unwrap()).unwrap().files;
            outputs.push(files.iter().map(|f| fs::read(f).unwrap()).collect::<Vec<_>>());
        }
        compared += outputs[0].len();
        identical &= outputs[0] == outputs[1];
    }
    verdict(
        10,
        "determinism",
        identical && compared == 5,
        format!("{compared} output files compared byte for byte"),
    );
}
