//! Sample-size formulas, the FI samplers (coverage, modified coverage,
//! reservoir) and discrete-distribution helpers.

mod coverage;
mod distributions;
mod reservoir;
mod sizes;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::itemset::Itemset;

pub use coverage::{coverage_sample, powerset_weights};
pub use distributions::{multinomial, multivariate_hypergeom};
pub use reservoir::{reservoir, Reservoir, ReservoirAlgo};
pub use sizes::{
    coverage_sample_size, db_sample_size, kl_divergence, pbec_size_bounds, pbec_size_bounds_exact, reservoir_sample_size,
};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleParams {
    pub eps_db: f64,
    pub delta_db: f64,
    pub eps_fi: f64,
    pub delta_fi: f64,
    /// Smallest relative PBEC size that must be estimated well.
    pub rho: f64,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams {
            eps_db: 0.01,
            delta_db: 0.05,
            eps_fi: 0.1,
            delta_fi: 0.05,
            rho: 0.001,
        }
    }
}

impl SampleParams {
    pub fn validate(&self) -> Result<()> {
        for (n, v) in [
            ("eps_db", self.eps_db),
            ("delta_db", self.delta_db),
            ("eps_fi", self.eps_fi),
            ("delta_fi", self.delta_fi),
            ("rho", self.rho),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::param(format!("{n} must be in (0,1), got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleSource {
    CoverageExact,
    CoverageModified,
    Reservoir,
}

impl SampleSource {
    pub fn name(self) -> &'static str {
        match self {
            SampleSource::CoverageExact => "coverage-exact",
            SampleSource::CoverageModified => "coverage-modified",
            SampleSource::Reservoir => "reservoir",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FiSample {
    pub itemsets: Vec<Itemset>,
    pub source: SampleSource,
    /// Stream length seen (reservoir only).
    pub total_seen: u64,
    /// Set when a reservoir saw fewer items than requested.
    pub short: bool,
}

impl FiSample {
    pub fn len(&self) -> usize {
        self.itemsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.itemsets.is_empty()
    }

    /// FIMI lines preceded by a header comment.
    pub fn dump(&self, seed: u64) -> String {
        let mut s = format!(
            "# source={} seed={} total_seen={} n={}\n",
            self.source.name(),
            seed,
            self.total_seen,
            self.len()
        );
        for u in &self.itemsets {
            let _ = writeln!(s, "{u}");
        }
        s
    }
}
