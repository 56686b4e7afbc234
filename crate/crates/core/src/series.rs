use crate::bayes::clr;
use crate::error::{Error, Result};
use crate::grid::{ClrFunction, Grid, GriddedDensity};

/// Time-ordered densities sharing one grid, with optional period labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DensitySeries {
    grid: Grid,
    densities: Vec<GriddedDensity>,
    labels: Option<Vec<String>>,
}

impl DensitySeries {
    pub fn new(densities: Vec<GriddedDensity>) -> Result<Self> {
        let first = densities.first().ok_or(Error::SeriesTooShort { needed: 1, got: 0 })?;
        let grid = *first.grid();
        if densities.iter().any(|d| *d.grid() != grid) {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid,
            densities,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.densities.len() {
            return Err(Error::LengthMismatch {
                expected: self.densities.len(),
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.densities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.densities.is_empty()
    }

    pub fn densities(&self) -> &[GriddedDensity] {
        &self.densities
    }

    pub fn get(&self, i: usize) -> Option<&GriddedDensity> {
        self.densities.get(i)
    }

    pub fn last(&self) -> &GriddedDensity {
        self.densities.last().expect("series is never empty")
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of period `i`, falling back to its 1-based index.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => (i + 1).to_string(),
        }
    }

    /// The first `len` densities.
    pub fn prefix(&self, len: usize) -> Result<Self> {
        if len == 0 || len > self.len() {
            return Err(Error::InvalidParameter(format!(
                "prefix length {len} outside 1..={}",
                self.len()
            )));
        }
        Ok(Self {
            grid: self.grid,
            densities: self.densities[..len].to_vec(),
            labels: self.labels.as_ref().map(|l| l[..len].to_vec()),
        })
    }

    pub fn push(&mut self, density: GriddedDensity, label: Option<String>) -> Result<()> {
        if *density.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        if let Some(labels) = &mut self.labels {
            labels.push(label.unwrap_or_else(|| (labels.len() + 1).to_string()));
        }
        self.densities.push(density);
        Ok(())
    }

    pub fn clr_images(&self) -> Vec<ClrFunction> {
        self.densities.iter().map(clr).collect()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GriddedDensity> {
        self.densities.iter()
    }
}

impl<'a> IntoIterator for &'a DensitySeries {
    type Item = &'a GriddedDensity;
    type IntoIter = std::slice::Iter<'a, GriddedDensity>;

    fn into_iter(self) -> Self::IntoIter {
        self.densities.iter()
    }
}
