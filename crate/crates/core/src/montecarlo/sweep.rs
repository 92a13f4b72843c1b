use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampler::{sample_states, SampledState, SamplerConfig};
use crate::error::Result;
use crate::metrology::{avg_qfi, QfiConfig};
use crate::quantifiers::{coherence, log_negativity};
use crate::states::StateClass;

/// One scatter point: a sampled probe and its figures of merit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub index: usize,
    pub class_tag: StateClass,
    pub n_a: f64,
    pub avg_qfi: f64,
    /// Present for single-mode classes.
    pub coherence: Option<f64>,
    /// Present for two-mode classes.
    pub log_negativity: Option<f64>,
    pub raw_parameters: BTreeMap<String, f64>,
    pub state_seed: u64,
}

pub fn evaluate(sample: &SampledState, n_a: f64, cfg: &QfiConfig) -> Result<SweepRecord> {
    let state = &sample.state;
    let single = state.n_modes() == 1;
    Ok(SweepRecord {
        index: sample.index,
        class_tag: sample.spec.class_tag,
        n_a,
        avg_qfi: avg_qfi(state, cfg)?,
        coherence: if single { Some(coherence(state)?) } else { None },
        log_negativity: if single { None } else { Some(log_negativity(state)?) },
        raw_parameters: sample.spec.parameters.clone(),
        state_seed: sample.state_seed,
    })
}

/// Samples `count` states and evaluates each, in index order. The output is
/// independent of the rayon pool size.
pub fn run_sweep_with(
    class: StateClass,
    n_a: f64,
    count: usize,
    seed: u64,
    qfi: &QfiConfig,
    sampler: &SamplerConfig,
) -> Result<Vec<SweepRecord>> {
    qfi.validate()?;
    let samples = sample_states(class, n_a, count, seed, sampler)?;
    samples.par_iter().map(|s| evaluate(s, n_a, qfi)).collect()
}

pub fn run_sweep(class: StateClass, n_a: f64, count: usize, seed: u64, cfg: &QfiConfig) -> Result<Vec<SweepRecord>> {
    run_sweep_with(class, n_a, count, seed, cfg, &SamplerConfig::default())
}
