//! Empirical cumulative distribution over Monte-Carlo samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    #[serde(rename = "dB")]
    Db,
    Meters,
}

impl Unit {
    pub fn label(self) -> &'static str {
        match self {
            Unit::Db => "dB",
            Unit::Meters => "m",
        }
    }
}

/// Sorted samples with right-continuous empirical CDF and lower quantiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfTable {
    sorted: Vec<f64>,
    unit: Unit,
}

impl CdfTable {
    pub fn new(mut samples: Vec<f64>, unit: Unit) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        if let Some(bad) = samples.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite sample {bad}")));
        }
        samples.sort_by(f64::total_cmp);
        Ok(CdfTable {
            sorted: samples,
            unit,
        })
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.sorted
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }

    /// Fraction of samples `<= x`.
    pub fn cdf(&self, x: f64) -> f64 {
        let count = self.sorted.partition_point(|&s| s <= x);
        count as f64 / self.sorted.len() as f64
    }

    /// Smallest sample whose empirical CDF reaches `p`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Probability(p));
        }
        let n = self.sorted.len();
        let nf = n as f64;
        let mut idx = ((p * nf).ceil() as usize).clamp(1, n) - 1;
        // guard against p * n rounding one step high
        while idx > 0 && (idx as f64) / nf >= p {
            idx -= 1;
        }
        while idx + 1 < n && ((idx + 1) as f64) / nf < p {
            idx += 1;
        }
        Ok(self.sorted[idx])
    }

    /// (value, cdf) for every sample in ascending order.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let nf = self.sorted.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(move |(i, &v)| (v, (i + 1) as f64 / nf))
    }
}

/// Builds a [`CdfTable`] from raw samples.
pub fn empirical_cdf(samples: &[f64], unit: Unit) -> Result<CdfTable> {
    CdfTable::new(samples.to_vec(), unit)
}
