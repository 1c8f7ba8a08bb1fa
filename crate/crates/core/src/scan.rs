//! Empirical sharpness exploration of the depth bound.
//!
//! For each `(n, r, trial)` the scan draws a series with contact order `r`
//! and measures the effective depth at the full Jordan block `J_n(0)` and at
//! a direct sum `J_n(0) (+) J_k(0) (+) ...` of distinct smaller blocks.
//! Every trial has its own RNG stream, so results do not depend on the order
//! in which trials run.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::depth::analyze_depth;
use crate::error::{Error, Result};
use crate::random;
use crate::scalar::GaussianRational;
use crate::series::TruncSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockStructure {
    Single,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub n_range: RangeInclusive<usize>,
    pub r_range: RangeInclusive<usize>,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub n: usize,
    pub r: usize,
    pub trial: usize,
    pub structure: BlockStructure,
    pub blocks: Vec<usize>,
    pub coeffs_hash: String,
    pub bound: usize,
    pub effective: usize,
    pub sharp: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub n: usize,
    pub r: usize,
    pub structure: BlockStructure,
    pub trials: usize,
    pub sharp: usize,
    pub frequency: f64,
}

fn coeffs_hash(series: &TruncSeries<GaussianRational>) -> String {
    let mut hasher = Sha256::new();
    for c in series.coeffs() {
        hasher.update(c.to_string().as_bytes());
        hasher.update(b";");
    }
    let digest = hasher.finalize();
    digest[..8].iter().map(|b| format!("{b:02x}")).collect()
}

fn run_trial(n: usize, r: usize, trial: usize, seed: u64) -> Result<Vec<ScanRecord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 42) | ((r as u64) << 21) | trial as u64);

    let cap = (n - 1).max(r);
    let series = random::series_with_order(&mut rng, r, cap);
    let hash = coeffs_hash(&series);

    let mut layouts = vec![(BlockStructure::Single, vec![n])];
    if n >= 2 {
        layouts.push((BlockStructure::Mixed, random::mixed_block_sizes(&mut rng, n)));
    }
    layouts
        .into_iter()
        .map(|(structure, blocks)| {
            let report = analyze_depth(&series, &random::jordan_sum(&blocks))?;
            Ok(ScanRecord {
                n,
                r,
                trial,
                structure,
                blocks,
                coeffs_hash: hash.clone(),
                bound: report.bound,
                effective: report.effective_index,
                sharp: report.sharp,
            })
        })
        .collect()
}

/// Runs the scan; records are ordered by `(n, r, trial, structure)`.
pub fn sharpness_scan(config: &ScanConfig) -> Result<Vec<ScanRecord>> {
    if config.n_range.is_empty() || config.r_range.is_empty() {
        return Err(Error::Unsupported("scan ranges must be nonempty".into()));
    }
    if *config.n_range.start() == 0 || *config.r_range.start() == 0 {
        return Err(Error::Unsupported("scan ranges must start at 1 or above".into()));
    }
    let jobs: Vec<(usize, usize, usize)> = config
        .n_range
        .clone()
        .flat_map(|n| {
            config
                .r_range
                .clone()
                .flat_map(move |r| (0..config.trials).map(move |t| (n, r, t)))
        })
        .collect();
    let batches = jobs
        .par_iter()
        .map(|&(n, r, t)| run_trial(n, r, t, config.seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(batches.into_iter().flatten().collect())
}

/// Sharpness frequency per `(n, r, structure)`.
pub fn summarize(records: &[ScanRecord]) -> Vec<ScanSummary> {
    let mut groups: BTreeMap<(usize, usize, BlockStructure), (usize, usize)> = BTreeMap::new();
    for rec in records {
        let e = groups.entry((rec.n, rec.r, rec.structure)).or_default();
        e.0 += 1;
        e.1 += rec.sharp as usize;
    }
    groups
        .into_iter()
        .map(|((n, r, structure), (trials, sharp))| ScanSummary {
            n,
            r,
            structure,
            trials,
            sharp,
            frequency: sharp as f64 / trials as f64,
        })
        .collect()
}
