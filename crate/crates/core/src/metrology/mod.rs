//! Finite-difference QFI of the squeezing parameter, its phase average, and
//! the closed-form bound curves.

mod bounds;
mod fidelity;

pub use bounds::{avg_precision_bound, bound, BoundCurve};
pub use fidelity::gaussian_fidelity;

use serde::{Deserialize, Serialize};

use crate::channels::encoding_map;
use crate::error::{Error, Result};
use crate::states::GaussianState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QfiConfig {
    /// Finite-difference step in the squeezing parameter.
    pub d_epsilon: f64,
    /// Trapezoid nodes on `θ ∈ [0, π)`.
    pub theta_nodes: usize,
    /// Combine steps `dε` and `dε/2` to cancel the `O(dε²)` term.
    pub richardson: bool,
    /// Squeezing value around which the QFI is evaluated.
    pub base_epsilon: f64,
}

impl Default for QfiConfig {
    fn default() -> Self {
        Self {
            d_epsilon: 1e-3,
            theta_nodes: 128,
            richardson: true,
            base_epsilon: 0.0,
        }
    }
}

impl QfiConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.d_epsilon > 0.0 && self.d_epsilon.is_finite()) {
            return Err(Error::Config(format!(
                "d_epsilon must be positive, got {}",
                self.d_epsilon
            )));
        }
        if self.theta_nodes < 16 || !self.theta_nodes.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "theta_nodes must be even and >= 16, got {}",
                self.theta_nodes
            )));
        }
        if !self.base_epsilon.is_finite() {
            return Err(Error::Config("base_epsilon must be finite".into()));
        }
        Ok(())
    }
}

/// `8 (1 − √F(ρ_ε0, ρ_ε0+h)) / h²` at one step size.
fn bures_quotient(base: &GaussianState, probe: &GaussianState, eps0: f64, h: f64, theta: f64) -> Result<f64> {
    let shifted = encoding_map(probe, eps0 + h, theta);
    let f = gaussian_fidelity(base, &shifted)?;
    Ok(8.0 * (1.0 - f.sqrt()) / (h * h))
}

/// QFI for `ε` at a fixed acquired phase `θ`.
pub fn qfi_theta(probe: &GaussianState, theta: f64, cfg: &QfiConfig) -> Result<f64> {
    let eps0 = cfg.base_epsilon;
    let h = cfg.d_epsilon;
    let base = encoding_map(probe, eps0, theta);
    let coarse = bures_quotient(&base, probe, eps0, h, theta)?;
    let value = if cfg.richardson {
        let fine = bures_quotient(&base, probe, eps0, 0.5 * h, theta)?;
        (4.0 * fine - coarse) / 3.0
    } else {
        coarse
    };
    Ok(value.max(0.0))
}

/// Phase-averaged QFI, `(1/2π) ∫₀^{2π} H(θ) dθ`.
///
/// The integrand has period π, so a uniform trapezoid on `[0, π)` gives the
/// full-period average and converges spectrally.
pub fn avg_qfi(probe: &GaussianState, cfg: &QfiConfig) -> Result<f64> {
    cfg.validate()?;
    let n = cfg.theta_nodes;
    let step = std::f64::consts::PI / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        sum += qfi_theta(probe, k as f64 * step, cfg)?;
    }
    Ok(sum / n as f64)
}
