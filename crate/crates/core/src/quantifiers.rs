//! Entropy, Coherence and logarithmic negativity of Gaussian states.

use crate::error::{Error, Result};
use crate::states::GaussianState;
use crate::symplectic::{pt_min_symplectic_eigenvalue, symplectic_eigenvalues, DEFAULT_PHYSICALITY_TOL};

/// `x log₂ x` with `0 log₂ 0 = 0`.
fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Entropy in bits of a mode with symplectic eigenvalue `ν`.
pub fn mode_entropy(nu: f64) -> f64 {
    xlog2x((nu + 1.0) / 2.0) - xlog2x((nu - 1.0) / 2.0)
}

/// Von Neumann entropy in bits, summed over the symplectic spectrum.
pub fn von_neumann_entropy(state: &GaussianState) -> Result<f64> {
    von_neumann_entropy_tol(state, DEFAULT_PHYSICALITY_TOL)
}

pub fn von_neumann_entropy_tol(state: &GaussianState, tol: f64) -> Result<f64> {
    let mut s = 0.0;
    for nu in symplectic_eigenvalues(state.sigma()) {
        if nu < 1.0 - tol {
            return Err(Error::UnphysicalState { nu });
        }
        s += mode_entropy(nu.max(1.0));
    }
    Ok(s)
}

/// Entropy in bits of a thermal state with mean photon number `n`.
pub fn thermal_entropy(n: f64) -> f64 {
    xlog2x(n + 1.0) - xlog2x(n)
}

/// Relative-entropy Coherence in bits: the gap between the entropy of the
/// thermal reference with the same per-mode photon numbers and `S(ρ)`.
pub fn coherence(state: &GaussianState) -> Result<f64> {
    let s = von_neumann_entropy(state)?;
    let reference: f64 = state
        .mean_photon_per_mode()
        .into_iter()
        .map(|n| thermal_entropy(n.max(0.0)))
        .sum();
    Ok(reference - s)
}

/// `E_N = max(0, −ln ν̃)` in natural-log units.
pub fn log_negativity(state: &GaussianState) -> Result<f64> {
    if state.n_modes() != 2 {
        return Err(Error::UnsupportedDimension {
            n_modes: state.n_modes(),
        });
    }
    let nu = pt_min_symplectic_eigenvalue(state.sigma())?;
    Ok((-nu.ln()).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{apply, rotation};
    use crate::states::{coherent, pure_squeezed, squeezed_thermal, thermal, tmsv, vacuum, StateClass, StateClassSpec};
    use approx::assert_relative_eq;

    #[test]
    fn entropy_examples() {
        assert_eq!(von_neumann_entropy(&vacuum(1).unwrap()).unwrap(), 0.0);
        assert_relative_eq!(
            von_neumann_entropy(&thermal(1.0).unwrap()).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        assert!(von_neumann_entropy(&tmsv(0.9).unwrap()).unwrap().abs() < 1e-7);
    }

    #[test]
    fn coherence_examples() {
        assert_eq!(coherence(&vacuum(1).unwrap()).unwrap(), 0.0);
        assert_relative_eq!(coherence(&coherent(2.0, 0.0).unwrap()).unwrap(), 2.0, epsilon = 1e-12);
        for n in [0.0, 0.3, 1.0, 7.5, 100.0] {
            assert!(coherence(&thermal(n).unwrap()).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn squeezing_adds_coherence() {
        // A pure squeezed state with n̄ = 1 has C equal to the thermal entropy at n̄ = 1.
        let s = pure_squeezed(1f64.asinh(), 0.4, 0.0, 0.0).unwrap();
        assert_relative_eq!(coherence(&s).unwrap(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn entropy_rotation_invariant() {
        let s = squeezed_thermal(2.3, 0.5, 0.2, 1.0, 0.0).unwrap();
        let e0 = von_neumann_entropy(&s).unwrap();
        for th in [0.3, 1.7, 2.9] {
            let r = apply(&s, &rotation(th), 0).unwrap();
            assert_relative_eq!(von_neumann_entropy(&r).unwrap(), e0, epsilon = 1e-9);
        }
    }

    #[test]
    fn negativity_examples() {
        let t = tmsv(0.5 * 3f64.acosh()).unwrap();
        assert_relative_eq!(
            log_negativity(&t).unwrap(),
            -(3.0 - 2.0 * 2f64.sqrt()).ln(),
            epsilon = 1e-9
        );
        for r in [0.1, 0.7, 2.0] {
            assert_relative_eq!(log_negativity(&tmsv(r).unwrap()).unwrap(), 2.0 * r, epsilon = 1e-9);
        }
        let sep = StateClassSpec::new(StateClass::SeparableStandard, [("a1", 0.5), ("b1", 4.0), ("b2", 2.0)])
            .build()
            .unwrap();
        assert_eq!(log_negativity(&sep).unwrap(), 0.0);
        assert!(matches!(
            log_negativity(&vacuum(1).unwrap()),
            Err(Error::UnsupportedDimension { .. })
        ));
    }
}
