//! Exact minimization on a rayon worker pool.

use std::sync::atomic::AtomicU64;

use dpchroma_core::dpfunction::{ChunkResult, DpSearch, Minimizer};
use dpchroma_core::{DPValue, Graph};
use rayon::prelude::*;

use crate::cache::Cache;
use crate::error::CliError;

/// Rank ranges per worker. Orbit representatives cluster under a few
/// first-edge classes, so ranges are cut much finer than the pool.
const CHUNKS_PER_JOB: usize = 256;

pub struct Parallel {
    budget: u64,
    jobs: usize,
    pool: rayon::ThreadPool,
    cache: Option<Cache>,
}

impl Parallel {
    pub fn new(budget: u64, jobs: usize, cache: Option<Cache>) -> Result<Self, CliError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
        Ok(Parallel {
            budget,
            jobs: jobs.max(1),
            pool,
            cache,
        })
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }
}

impl Minimizer for Parallel {
    fn minimize<'g>(&self, graph: &'g Graph, m: usize) -> dpchroma_core::Result<DPValue<'g>> {
        // Builds the cover space first so the budget applies to cache hits too.
        let search = DpSearch::new(graph, m, self.budget, true)?;
        if let Some(hit) = self.cache.as_ref().and_then(|c| c.load(graph, m, true)) {
            return Ok(hit);
        }
        let zero = AtomicU64::new(u64::MAX);
        let ranges = search.chunks(if self.jobs == 1 { 1 } else { self.jobs * CHUNKS_PER_JOB });
        let results: Vec<ChunkResult> = self.pool.install(|| {
            ranges
                .par_iter()
                .map(|&(lo, hi)| search.search_range(lo, hi, &zero))
                .collect()
        });
        let value = search.finish(&results);
        if let Some(cache) = &self.cache {
            // A cache that cannot be written only costs recomputation later.
            let _ = cache.store(&value);
        }
        Ok(value)
    }
}
