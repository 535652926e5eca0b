use crate::{ExitSample, McConfig, McError, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::VecDeque;

/// Paths simulated per parallel batch of a stream.
const BATCH: u64 = 4096;

/// Simulates one path from a dedicated generator.
pub trait PathSampler: Sync {
    fn sample_path(&self, path: u64, rng: &mut ChaCha8Rng) -> Result<ExitSample>;
}

/// Generator of path `index`: stream `index` of the ChaCha8 seeded by `seed`.
pub(crate) fn path_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Pull-based stream of exit samples in path order. Batches are produced in
/// parallel; consumption is single-threaded.
pub struct ExitStream<S: PathSampler> {
    sampler: S,
    cfg: McConfig,
    next: u64,
    buffer: VecDeque<Result<ExitSample>>,
}

impl<S: PathSampler> ExitStream<S> {
    pub fn new(sampler: S, cfg: McConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(ExitStream {
            sampler,
            cfg,
            next: 0,
            buffer: VecDeque::new(),
        })
    }

    pub fn config(&self) -> &McConfig {
        &self.cfg
    }

    fn refill(&mut self) {
        let end = (self.next + BATCH).min(self.cfg.n_paths);
        let seed = self.cfg.seed;
        let sampler = &self.sampler;
        let batch: Vec<Result<ExitSample>> = (self.next..end)
            .into_par_iter()
            .map(|i| sampler.sample_path(i, &mut path_rng(seed, i)))
            .collect();
        self.buffer.extend(batch);
        self.next = end;
    }
}

impl<S: PathSampler> Iterator for ExitStream<S> {
    type Item = Result<ExitSample>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.buffer.is_empty() && self.next < self.cfg.n_paths {
            self.refill();
        }
        self.buffer.pop_front()
    }
}

/// Samples of a finished run; paths that hit the step budget are counted,
/// not kept.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub samples: Vec<ExitSample>,
    pub budget_failures: u64,
}

impl SampleSet {
    /// Number of simulated paths, exited or not.
    pub fn paths(&self) -> u64 {
        self.samples.len() as u64 + self.budget_failures
    }
}

/// Drains a stream. Budget failures are tallied; other errors abort.
pub fn collect<S: PathSampler>(stream: ExitStream<S>) -> Result<SampleSet> {
    let mut samples = Vec::new();
    let mut budget_failures = 0;
    for s in stream {
        match s {
            Ok(s) => samples.push(s),
            Err(McError::BudgetExceeded { .. }) => budget_failures += 1,
            Err(e) => return Err(e),
        }
    }
    if budget_failures > 0 {
        log::warn!("{budget_failures} paths did not exit within the step budget");
    }
    Ok(SampleSet {
        samples,
        budget_failures,
    })
}
