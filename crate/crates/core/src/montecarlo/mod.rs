//! Random probe sampling, sweeps, lower envelopes and the exponential fit.

mod envelope;
mod fit;
mod sampler;
mod sweep;

pub use envelope::{lower_envelope, lower_envelope_xy, DEFAULT_BINS};
pub use fit::{fit_exponential, FitOptions, FitResult};
pub use sampler::{sample_class, sample_one, sample_states, state_seed, SampledState, SamplerConfig};
pub use sweep::{evaluate, run_sweep, run_sweep_with, SweepRecord};
