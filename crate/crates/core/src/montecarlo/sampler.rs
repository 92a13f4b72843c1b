//! Seeded sampling of each probe class at a fixed mode-A photon number.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantifiers::log_negativity;
use crate::states::{GaussianState, StateClass, StateClassSpec};
use crate::symplectic::{is_bona_fide, DEFAULT_PHYSICALITY_TOL};

/// Ranges and limits of the sampling measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    /// Mode-B diagonal entries are drawn from `[1, 1 + 2 n_A · b_range_factor]`.
    pub b_range_factor: f64,
    /// Rejection attempts per state before giving up.
    pub attempt_cap: usize,
    /// Consecutive rejections after which the correlation box is halved
    /// (two-mode general class only).
    pub shrink_after: usize,
    pub physicality_tol: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            b_range_factor: 5.0,
            attempt_cap: 10_000,
            shrink_after: 100,
            physicality_tol: DEFAULT_PHYSICALITY_TOL,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.b_range_factor >= 0.0) || !self.b_range_factor.is_finite() {
            return Err(Error::Config("b_range_factor must be finite and >= 0".into()));
        }
        if self.attempt_cap == 0 || self.shrink_after == 0 {
            return Err(Error::Config("attempt_cap and shrink_after must be >= 1".into()));
        }
        if !(self.physicality_tol >= 0.0) {
            return Err(Error::Config("physicality_tol must be >= 0".into()));
        }
        Ok(())
    }
}

/// One sampled probe with the seed that regenerates it.
#[derive(Debug, Clone)]
pub struct SampledState {
    pub index: usize,
    pub state_seed: u64,
    pub spec: StateClassSpec,
    pub state: GaussianState,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-record seed derived from the run seed and the record index.
pub fn state_seed(seed: u64, index: usize) -> u64 {
    splitmix64(splitmix64(seed) ^ (index as u64).wrapping_mul(0xd605_bbb5_8c8a_bbb5))
}

/// Mode-A energy split shared by the single-mode and two-mode classes:
/// a fraction `u_d` of the photons goes into displacement, the rest is split
/// between squeezing and thermal noise.
struct ModeA {
    nu: f64,
    r: f64,
    phi: f64,
    eps_x: f64,
    eps_y: f64,
}

fn displacement<R: Rng>(rng: &mut R, photons: f64) -> (f64, f64) {
    let psi = rng.random_range(0.0..2.0 * PI);
    let amp = 2.0 * photons.sqrt();
    (amp * psi.cos(), amp * psi.sin())
}

fn energy_split<R: Rng>(rng: &mut R, n_a: f64) -> ModeA {
    let u_d: f64 = rng.random();
    let u_s: f64 = rng.random();
    let (eps_x, eps_y) = displacement(rng, n_a * u_d);
    let n_rem = n_a * (1.0 - u_d);
    let cosh2r = 1.0 + 2.0 * n_rem * u_s;
    let nu = (1.0 + 2.0 * n_rem) / cosh2r;
    let phi = rng.random_range(0.0..PI);
    ModeA {
        nu,
        r: 0.5 * cosh2r.acosh(),
        phi,
        eps_x,
        eps_y,
    }
}

fn b_range(n_a: f64, cfg: &SamplerConfig) -> (f64, f64) {
    (1.0, 1.0 + 2.0 * n_a * cfg.b_range_factor)
}

fn uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        lo + (hi - lo) * rng.random::<f64>()
    } else {
        lo
    }
}

fn exhausted(class: StateClass, attempts: usize) -> Error {
    Error::SamplingExhausted { class, attempts }
}

/// Draws one state of `class` with mode-A photon number `n_a`.
pub fn sample_one<R: Rng>(
    class: StateClass,
    n_a: f64,
    rng: &mut R,
    cfg: &SamplerConfig,
) -> Result<(StateClassSpec, GaussianState)> {
    let spec = match class {
        StateClass::SingleGeneral => {
            let m = energy_split(rng, n_a);
            StateClassSpec::new(
                class,
                [
                    ("nu", m.nu),
                    ("r", m.r),
                    ("phi", m.phi),
                    ("eps_x", m.eps_x),
                    ("eps_y", m.eps_y),
                ],
            )
        }
        StateClass::SingleCoherent => {
            let u_d: f64 = rng.random();
            let (eps_x, eps_y) = displacement(rng, n_a * u_d);
            let a = 1.0 + 2.0 * n_a * (1.0 - u_d);
            StateClassSpec::new(class, [("a", a), ("eps_x", eps_x), ("eps_y", eps_y)])
        }
        StateClass::SingleThermal => StateClassSpec::new(class, [("n", n_a)]),
        StateClass::SinglePureSqueezed => {
            let phi = rng.random_range(0.0..PI);
            StateClassSpec::new(class, [("r", n_a.sqrt().asinh()), ("phi", phi)])
        }
        StateClass::TwoModeGeneral => return sample_two_mode_general(n_a, rng, cfg),
        StateClass::SeparableStandard => {
            let u: f64 = rng.random();
            let (lo, hi) = b_range(n_a, cfg);
            let b2 = uniform(rng, lo, hi);
            StateClassSpec::new(
                class,
                [
                    ("a1", 1.0 + 4.0 * n_a * u),
                    ("b1", 1.0 + 4.0 * n_a * (1.0 - u)),
                    ("b2", b2),
                ],
            )
        }
        StateClass::Discordant => {
            let u_d: f64 = rng.random();
            let (eps_x, eps_y) = displacement(rng, n_a * u_d);
            let a = 1.0 + 2.0 * n_a * (1.0 - u_d);
            let (lo, hi) = b_range(n_a, cfg);
            let b = uniform(rng, lo, hi);
            // c² ≤ (a − 1)(b − 1) keeps γ = c·I physical.
            let c_max = ((a - 1.0) * (b - 1.0)).max(0.0).sqrt();
            let c = uniform(rng, -c_max, c_max);
            StateClassSpec::new(
                class,
                [("a", a), ("b", b), ("c", c), ("eps_x", eps_x), ("eps_y", eps_y)],
            )
        }
        StateClass::EntangledStandard => return sample_entangled(n_a, rng, cfg),
        StateClass::Tmsv => StateClassSpec::new(class, [("r", n_a.sqrt().asinh())]),
    };
    let state = spec.build()?;
    Ok((spec, state))
}

/// Mode A from the energy split, `b2` uniform, `(c, d)` uniform in a box
/// scaled by `√(a1 b2)` and `√(b1 b2)` and accepted when physical.
fn sample_two_mode_general<R: Rng>(
    n_a: f64,
    rng: &mut R,
    cfg: &SamplerConfig,
) -> Result<(StateClassSpec, GaussianState)> {
    let class = StateClass::TwoModeGeneral;
    let m = energy_split(rng, n_a);
    let single = StateClassSpec::new(StateClass::SingleGeneral, [("nu", m.nu), ("r", m.r), ("phi", m.phi)]).build()?;
    let sa = single.sigma();
    let (a1, b1, g) = (sa.get(0, 0), sa.get(1, 1), sa.get(0, 1));
    let (lo, hi) = b_range(n_a, cfg);
    let b2 = uniform(rng, lo, hi);
    let (c_max, d_max) = ((a1 * b2).sqrt(), (b1 * b2).sqrt());

    let mut scale = 1.0;
    for attempt in 1..=cfg.attempt_cap {
        let c = scale * uniform(rng, -c_max, c_max);
        let d = scale * uniform(rng, -d_max, d_max);
        let spec = StateClassSpec::new(
            class,
            [
                ("a1", a1),
                ("b1", b1),
                ("g", g),
                ("b2", b2),
                ("c", c),
                ("d", d),
                ("eps_x", m.eps_x),
                ("eps_y", m.eps_y),
            ],
        );
        if let Ok(state) = spec.build() {
            if is_bona_fide(state.sigma(), cfg.physicality_tol) {
                return Ok((spec, state));
            }
        }
        if attempt % cfg.shrink_after == 0 {
            scale *= 0.5;
        }
    }
    Err(exhausted(class, cfg.attempt_cap))
}

/// `a = 2n_A + 1`, `b` uniform, and `c` uniform over the interval where the
/// state is both physical and entangled:
/// `(a−1)(b−1) < c² ≤ min((a−1)(b+1), (a+1)(b−1))`.
fn sample_entangled<R: Rng>(n_a: f64, rng: &mut R, cfg: &SamplerConfig) -> Result<(StateClassSpec, GaussianState)> {
    let class = StateClass::EntangledStandard;
    let a = 2.0 * n_a + 1.0;
    let (lo, hi) = b_range(n_a, cfg);
    for _ in 0..cfg.attempt_cap {
        let b = uniform(rng, lo, hi);
        let c_lo = ((a - 1.0) * (b - 1.0)).sqrt();
        let c_hi = ((a - 1.0) * (b + 1.0)).min((a + 1.0) * (b - 1.0)).sqrt();
        if !(c_hi > c_lo) {
            continue;
        }
        let c = uniform(rng, c_lo, c_hi);
        let spec = StateClassSpec::new(class, [("a", a), ("b", b), ("c", c)]);
        let Ok(state) = spec.build() else { continue };
        if log_negativity(&state).is_ok_and(|e| e > 0.0) {
            return Ok((spec, state));
        }
    }
    Err(exhausted(class, cfg.attempt_cap))
}

/// Draws `count` states; record `i` depends only on `(seed, i)`.
pub fn sample_states(
    class: StateClass,
    n_a: f64,
    count: usize,
    seed: u64,
    cfg: &SamplerConfig,
) -> Result<Vec<SampledState>> {
    if !(n_a >= 0.0) || !n_a.is_finite() {
        return Err(Error::InvalidParameter(format!("n_A = {n_a} must be finite and >= 0")));
    }
    if count == 0 {
        return Err(Error::InvalidParameter("count must be >= 1".into()));
    }
    cfg.validate()?;
    (0..count)
        .into_par_iter()
        .map(|index| {
            let s = state_seed(seed, index);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let (spec, state) = sample_one(class, n_a, &mut rng, cfg)?;
            Ok(SampledState {
                index,
                state_seed: s,
                spec,
                state,
            })
        })
        .collect()
}

/// Convenience form returning only the states, with default ranges.
pub fn sample_class(class: StateClass, n_a: f64, count: usize, seed: u64) -> Result<Vec<GaussianState>> {
    Ok(sample_states(class, n_a, count, seed, &SamplerConfig::default())?
        .into_iter()
        .map(|s| s.state)
        .collect())
}
