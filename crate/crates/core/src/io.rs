//! CSV ingestion and emission.
//!
//! Two input schemas are supported and always chosen explicitly:
//!
//! * a density matrix, `period,<x_0>,…,<x_{n-1}>` with one row of nonnegative
//!   values per period; the header coordinates define a uniform grid and a
//!   trailing `+` on a coordinate (as in `110+`) is ignored;
//! * a raw panel of per-period observations, either wide (one column per
//!   period, columns may differ in length) or long (`period,value` rows).

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::evaluation::fmt_f64;
use crate::grid::{Grid, GriddedDensity};
use crate::kde::{covering_grid, kde_estimate, log_shift_transform, KdeConfig, Sample};
use crate::series::DensitySeries;

/// Shift used by `log_shift` when no constant is given.
pub const DEFAULT_LOG_SHIFT: f64 = 0.1;

/// Transformation applied to raw observations before density estimation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Preprocessing {
    #[default]
    None,
    /// `x ↦ ln(x + c)`; requires nonnegative observations.
    LogShift(f64),
}

impl Preprocessing {
    pub fn apply(&self, sample: Sample) -> Result<Sample> {
        match *self {
            Preprocessing::None => Ok(sample),
            Preprocessing::LogShift(c) => log_shift_transform(&sample, c),
        }
    }
}

impl FromStr for Preprocessing {
    type Err = Error;

    /// Accepts `none`, `log_shift`, `log_shift:c` and `log_shift(c)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("none") {
            return Ok(Preprocessing::None);
        }
        let rest = s
            .strip_prefix("log_shift")
            .ok_or_else(|| Error::Config(format!("unknown preprocessing `{s}`")))?;
        let arg = if rest.is_empty() {
            None
        } else if let Some(c) = rest.strip_prefix(':') {
            Some(c)
        } else if let Some(c) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            Some(c)
        } else {
            return Err(Error::Config(format!("unknown preprocessing `{s}`")));
        };
        let c = match arg {
            None => DEFAULT_LOG_SHIFT,
            Some(c) => c
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad log-shift constant `{c}`")))?,
        };
        if !(c > 0.0 && f64::is_finite(c)) {
            return Err(Error::Config(format!("log-shift constant must be positive, got {c}")));
        }
        Ok(Preprocessing::LogShift(c))
    }
}

impl fmt::Display for Preprocessing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preprocessing::None => write!(f, "none"),
            Preprocessing::LogShift(c) => write!(f, "log_shift:{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PanelLayout {
    /// Header of period labels, one column of observations per period.
    #[default]
    Wide,
    /// `period,value` rows.
    Long,
}

impl FromStr for PanelLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "wide" => Ok(PanelLayout::Wide),
            "long" => Ok(PanelLayout::Long),
            other => Err(Error::Config(format!("unknown panel layout `{other}`"))),
        }
    }
}

/// One cross-sectional sample per period, in time order.
#[derive(Debug, Clone, PartialEq)]
pub struct RawPanel {
    periods: Vec<(String, Sample)>,
}

impl RawPanel {
    pub fn new(periods: Vec<(String, Sample)>) -> Result<Self> {
        if periods.len() < 2 {
            return Err(Error::SeriesTooShort {
                needed: 2,
                got: periods.len(),
            });
        }
        Ok(Self { periods })
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    pub fn periods(&self) -> &[(String, Sample)] {
        &self.periods
    }

    pub fn labels(&self) -> Vec<String> {
        self.periods.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn samples(&self) -> Vec<Sample> {
        self.periods.iter().map(|(_, s)| s.clone()).collect()
    }

    /// Kernel density estimates on a grid covering every sample. `bandwidth`
    /// of `None` uses the rule of thumb per period.
    pub fn to_density_series(&self, n_points: usize, bandwidth: Option<f64>) -> Result<DensitySeries> {
        let samples = self.samples();
        let grid = covering_grid(&samples, n_points)?;
        let mut config = KdeConfig::new(grid);
        config.bandwidth = bandwidth;
        let densities = samples
            .iter()
            .map(|s| kde_estimate(s, &config))
            .collect::<Result<Vec<_>>>()?;
        DensitySeries::new(densities)?.with_labels(self.labels())
    }
}

fn line_of(record: &csv::StringRecord) -> usize {
    record.position().map_or(0, |p| p.line() as usize)
}

fn parse_number(field: &str, line: usize) -> Result<f64> {
    let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
        line,
        msg: format!("`{field}` is not a number"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse {
            line,
            msg: format!("non-finite value `{field}`"),
        });
    }
    Ok(v)
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input)
}

/// Parses a raw panel and applies `preprocessing` to every sample.
pub fn read_raw_panel<R: Read>(input: R, layout: PanelLayout, preprocessing: Preprocessing) -> Result<RawPanel> {
    let mut rdr = reader(input);
    let header = rdr.headers()?.clone();
    let mut periods: Vec<(String, Vec<f64>)> = Vec::new();
    match layout {
        PanelLayout::Wide => {
            periods = header.iter().map(|l| (l.to_string(), Vec::new())).collect();
            for record in rdr.records() {
                let record = record?;
                let line = line_of(&record);
                if record.len() > periods.len() {
                    return Err(Error::RaggedMatrix {
                        line,
                        expected: periods.len(),
                        got: record.len(),
                    });
                }
                for (k, field) in record.iter().enumerate() {
                    if !field.is_empty() {
                        periods[k].1.push(parse_number(field, line)?);
                    }
                }
            }
        }
        PanelLayout::Long => {
            if header.len() != 2 {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("long panel needs 2 columns, header has {}", header.len()),
                });
            }
            for record in rdr.records() {
                let record = record?;
                let line = line_of(&record);
                if record.len() != 2 {
                    return Err(Error::RaggedMatrix {
                        line,
                        expected: 2,
                        got: record.len(),
                    });
                }
                let label = &record[0];
                let value = parse_number(&record[1], line)?;
                match periods.iter_mut().find(|(l, _)| l == label) {
                    Some((_, v)) => v.push(value),
                    None => periods.push((label.to_string(), vec![value])),
                }
            }
        }
    }
    let periods = periods
        .into_iter()
        .map(|(label, values)| {
            let sample = Sample::new(values).and_then(|s| preprocessing.apply(s))?;
            Ok((label, sample))
        })
        .collect::<Result<Vec<_>>>()?;
    RawPanel::new(periods)
}

pub fn ingest_raw_panel(path: &Path, layout: PanelLayout, preprocessing: Preprocessing) -> Result<RawPanel> {
    read_raw_panel(File::open(path)?, layout, preprocessing)
}

fn grid_from_header(header: &csv::StringRecord) -> Result<Grid> {
    let coords = header
        .iter()
        .skip(1)
        .map(|field| {
            let f = field.strip_suffix('+').unwrap_or(field);
            parse_number(f, 1)
        })
        .collect::<Result<Vec<_>>>()?;
    let n = coords.len();
    if n < 3 {
        return Err(Error::Parse {
            line: 1,
            msg: format!("need at least 3 grid coordinates, got {n}"),
        });
    }
    let grid = Grid::new(coords[0], coords[n - 1], n).map_err(|e| Error::Parse {
        line: 1,
        msg: e.to_string(),
    })?;
    let tol = 1e-6 * grid.spacing();
    for (i, (&c, x)) in coords.iter().zip(grid.points()).enumerate() {
        if (c - x).abs() > tol {
            return Err(Error::Parse {
                line: 1,
                msg: format!("grid coordinates are not uniformly spaced at column {}", i + 2),
            });
        }
    }
    Ok(grid)
}

/// Parses a density matrix; each row is divided by `radix`, floored and
/// renormalised on the header grid.
pub fn read_density_matrix<R: Read>(input: R, radix: f64) -> Result<DensitySeries> {
    if !(radix > 0.0 && radix.is_finite()) {
        return Err(Error::Config(format!("radix must be positive, got {radix}")));
    }
    let mut rdr = reader(input);
    let header = rdr.headers()?.clone();
    let grid = grid_from_header(&header)?;
    let mut labels = Vec::new();
    let mut densities = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = line_of(&record);
        if record.len() != header.len() {
            return Err(Error::RaggedMatrix {
                line,
                expected: header.len(),
                got: record.len(),
            });
        }
        let values = record
            .iter()
            .skip(1)
            .map(|f| {
                let v = parse_number(f, line)?;
                if v < 0.0 {
                    return Err(Error::NegativeEntry { line, value: v });
                }
                Ok(v / radix)
            })
            .collect::<Result<Vec<_>>>()?;
        let density = GriddedDensity::from_values(grid, values).map_err(|e| Error::Parse {
            line,
            msg: e.to_string(),
        })?;
        labels.push(record[0].to_string());
        densities.push(density);
    }
    if densities.is_empty() {
        return Err(Error::SeriesTooShort { needed: 1, got: 0 });
    }
    DensitySeries::new(densities)?.with_labels(labels)
}

pub fn ingest_density_matrix(path: &Path, radix: f64) -> Result<DensitySeries> {
    read_density_matrix(File::open(path)?, radix)
}

/// Writes `series` in the density-matrix layout, using its labels (or 1-based
/// indices) in the first column.
pub fn write_density_matrix<W: Write>(series: &DensitySeries, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut header = vec!["period".to_string()];
    header.extend(series.grid().points().map(|x| x.to_string()));
    out.write_record(&header)?;
    for (i, d) in series.iter().enumerate() {
        let mut row = vec![series.label(i)];
        row.extend(d.values().iter().map(|&v| fmt_f64(v)));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}
