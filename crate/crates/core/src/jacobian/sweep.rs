use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{assemble_with, rank_certificate_with, sample_stratum, SamplerOptions};
use crate::cpoly::ZeroConfig;
use crate::error::Result;
use crate::rng::{stream, sub_seed};
use crate::strata::Structure;
use crate::tol::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub index: usize,
    pub seed: u64,
    pub config: ZeroConfig,
    pub ratio: f64,
    pub rank: usize,
    pub full_rank: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankSweepReport {
    pub stratum: Structure,
    pub records: Vec<SweepRecord>,
}

impl RankSweepReport {
    /// Smallest `σ_min/σ_max` over the samples.
    pub fn min_ratio(&self) -> Option<f64> {
        self.records.iter().map(|r| r.ratio).min_by(f64::total_cmp)
    }

    /// Indices of samples whose numerical rank is below `m - 1`.
    pub fn deficient(&self) -> Vec<usize> {
        self.records.iter().filter(|r| !r.full_rank).map(|r| r.index).collect()
    }
}

/// Samples the stratum, assembles `J` for each draw and certifies its rank.
pub fn rank_sweep(stratum: &Structure, samples: usize, seed: u64, tol: &Tolerances) -> Result<RankSweepReport> {
    let opts = SamplerOptions::default();
    let records = (0..samples)
        .into_par_iter()
        .map(|index| {
            let mut rng = stream(seed, index as u64);
            let point = sample_stratum(stratum, &mut rng, &opts)?;
            let j = assemble_with(&point.config, &point.crit, tol)?;
            let cert = rank_certificate_with(&j, tol.rank_threshold);
            Ok(SweepRecord {
                index,
                seed: sub_seed(seed, index as u64),
                config: point.config,
                ratio: cert.ratio(),
                rank: cert.rank,
                full_rank: cert.is_full(stratum.m() - 1),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RankSweepReport {
        stratum: stratum.clone(),
        records,
    })
}
