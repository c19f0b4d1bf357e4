//! Seeded sample points over a chart's admissible domain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chart::{Domain, Exclusion, MetricChart};
use crate::error::{Error, Result};

/// Rejection attempts allowed per requested point.
const ATTEMPTS_PER_POINT: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct SamplePlan {
    pub count: usize,
    pub seed: u64,
    pub bounds: Vec<(f64, f64)>,
    pub exclusions: Vec<Exclusion>,
}

/// Serializable summary of a plan, for reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanSummary {
    pub count: usize,
    pub seed: u64,
    pub bounds: Vec<(f64, f64)>,
    pub exclusions: usize,
}

impl SamplePlan {
    pub fn new(domain: &Domain, count: usize, seed: u64) -> Self {
        SamplePlan {
            count,
            seed,
            bounds: domain.bounds.clone(),
            exclusions: domain.exclusions.clone(),
        }
    }

    pub fn for_chart(chart: &MetricChart, count: usize, seed: u64) -> Self {
        Self::new(chart.domain(), count, seed)
    }

    pub fn domain(&self) -> Domain {
        Domain {
            bounds: self.bounds.clone(),
            exclusions: self.exclusions.clone(),
        }
    }

    pub fn summary(&self) -> PlanSummary {
        PlanSummary {
            count: self.count,
            seed: self.seed,
            bounds: self.bounds.clone(),
            exclusions: self.exclusions.len(),
        }
    }

    /// Draw `count` admissible points. The same plan always yields the same
    /// points.
    pub fn points(&self) -> Result<Vec<Vec<f64>>> {
        let domain = self.domain();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let budget = self.count.max(1) * ATTEMPTS_PER_POINT;
        let mut out = Vec::with_capacity(self.count);
        let mut attempts = 0;
        while out.len() < self.count {
            if attempts == budget {
                return Err(Error::NoAdmissibleSamples { attempts });
            }
            attempts += 1;
            let p: Vec<f64> = self
                .bounds
                .iter()
                .map(|&(lo, hi)| if lo == hi { lo } else { rng.gen_range(lo..hi) })
                .collect();
            if domain.admits(&p) {
                out.push(p);
            }
        }
        if out.is_empty() {
            return Err(Error::NoAdmissibleSamples { attempts });
        }
        Ok(out)
    }
}
