//! Closed-form curves bounding the phase-averaged QFI.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BoundCurve {
    /// `4n² + 4n + 2`, attained by pure squeezed and two-mode squeezed vacua.
    UpperSingle,
    /// `4(2n+1)² / (1 + (2n+1)²)`, attained by thermal states.
    LowerSingle,
    /// `4n + 2`, the best coherent-state value.
    CoherentMax,
    /// `3 − 1/(1+2n) + 2n`, the best uncorrelated standard-form value.
    SeparableMax,
    /// `2 + 8n(1+n) / (1 + (2 + 4n − ν̃)ν̃)` with `ν̃ = e^{−E_N}`.
    EntangledVsNegativity,
}

impl BoundCurve {
    pub const ALL: [BoundCurve; 5] = [
        BoundCurve::UpperSingle,
        BoundCurve::LowerSingle,
        BoundCurve::CoherentMax,
        BoundCurve::SeparableMax,
        BoundCurve::EntangledVsNegativity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundCurve::UpperSingle => "upper-single",
            BoundCurve::LowerSingle => "lower-single",
            BoundCurve::CoherentMax => "coherent-max",
            BoundCurve::SeparableMax => "separable-max",
            BoundCurve::EntangledVsNegativity => "entangled-vs-negativity",
        }
    }
}

/// Evaluates a bound curve. `e_n` is required only for
/// [`BoundCurve::EntangledVsNegativity`].
pub fn bound(curve: BoundCurve, n_a: f64, e_n: Option<f64>) -> Result<f64> {
    if !(n_a >= 0.0) || !n_a.is_finite() {
        return Err(Error::InvalidParameter(format!("n_A = {n_a} must be finite and >= 0")));
    }
    let n = n_a;
    Ok(match curve {
        BoundCurve::UpperSingle => 4.0 * n * n + 4.0 * n + 2.0,
        BoundCurve::LowerSingle => {
            let v = 2.0 * n + 1.0;
            4.0 * v * v / (1.0 + v * v)
        }
        BoundCurve::CoherentMax => 4.0 * n + 2.0,
        BoundCurve::SeparableMax => 3.0 - 1.0 / (1.0 + 2.0 * n) + 2.0 * n,
        BoundCurve::EntangledVsNegativity => {
            let e_n = e_n.ok_or(Error::MissingNegativity)?;
            if !(e_n >= 0.0) || !e_n.is_finite() {
                return Err(Error::InvalidParameter(format!("E_N = {e_n} must be finite and >= 0")));
            }
            let nu = (-e_n).exp();
            2.0 + 8.0 * n * (1.0 + n) / (1.0 + (2.0 + 4.0 * n - nu) * nu)
        }
    })
}

/// Cramér–Rao floor `1/√(M H̄)` on the average estimation error.
pub fn avg_precision_bound(avg_qfi: f64, repetitions: u64) -> Result<f64> {
    if !(avg_qfi > 0.0) {
        return Err(Error::NonPositiveQfi(avg_qfi));
    }
    if repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be >= 1".into()));
    }
    Ok(1.0 / (repetitions as f64 * avg_qfi).sqrt())
}
