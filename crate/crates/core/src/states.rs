//! Gaussian states and constructors for the studied probe classes.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symplectic::{check_bona_fide, CovarianceMatrix, DEFAULT_PHYSICALITY_TOL};

/// Covariance matrix plus displacement vector (first moments per mode).
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    sigma: CovarianceMatrix,
    displacement: Vec<f64>,
}

impl GaussianState {
    /// Validates the displacement length and the uncertainty relation at the
    /// default tolerance.
    pub fn new(sigma: CovarianceMatrix, displacement: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(sigma, displacement, DEFAULT_PHYSICALITY_TOL)
    }

    pub fn with_tolerance(sigma: CovarianceMatrix, displacement: Vec<f64>, tol: f64) -> Result<Self> {
        if displacement.len() != sigma.dim() {
            return Err(Error::InvalidParameter(format!(
                "displacement has length {}, expected {}",
                displacement.len(),
                sigma.dim()
            )));
        }
        if displacement.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("non-finite displacement".into()));
        }
        check_bona_fide(&sigma, tol)?;
        Ok(Self { sigma, displacement })
    }

    /// For outputs of symplectic maps, which preserve physicality.
    pub(crate) fn from_parts_unchecked(sigma: CovarianceMatrix, displacement: Vec<f64>) -> Self {
        Self { sigma, displacement }
    }

    pub fn sigma(&self) -> &CovarianceMatrix {
        &self.sigma
    }

    pub fn displacement(&self) -> &[f64] {
        &self.displacement
    }

    pub fn n_modes(&self) -> usize {
        self.sigma.n_modes()
    }

    /// Mean excitation number of each mode:
    /// `(tr σ_kk − 2)/4 + (ε_x,k² + ε_p,k²)/4`.
    pub fn mean_photon_per_mode(&self) -> Vec<f64> {
        (0..self.n_modes())
            .map(|k| {
                let tr = self.sigma.get(2 * k, 2 * k) + self.sigma.get(2 * k + 1, 2 * k + 1);
                let dx = self.displacement[2 * k];
                let dp = self.displacement[2 * k + 1];
                (tr - 2.0) / 4.0 + (dx * dx + dp * dp) / 4.0
            })
            .collect()
    }

    pub fn to_snapshot(&self, spec: Option<&StateClassSpec>) -> StateSnapshot {
        StateSnapshot {
            n_modes: self.n_modes(),
            sigma: self.sigma.to_row_major(),
            displacement: self.displacement.clone(),
            class_tag: spec.map(|s| s.class_tag),
            parameters: spec.map(|s| s.parameters.clone()).unwrap_or_default(),
        }
    }

    pub fn from_snapshot(snap: &StateSnapshot) -> Result<Self> {
        let sigma = CovarianceMatrix::from_row_slice(snap.n_modes, &snap.sigma)?;
        Self::new(sigma, snap.displacement.clone())
    }
}

/// Serializable form of a state used for reproducibility records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSnapshot {
    pub n_modes: usize,
    pub sigma: Vec<f64>,
    pub displacement: Vec<f64>,
    pub class_tag: Option<StateClass>,
    pub parameters: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum StateClass {
    SingleGeneral,
    SingleCoherent,
    SingleThermal,
    SinglePureSqueezed,
    TwoModeGeneral,
    SeparableStandard,
    Discordant,
    EntangledStandard,
    Tmsv,
}

impl StateClass {
    pub const ALL: [StateClass; 9] = [
        StateClass::SingleGeneral,
        StateClass::SingleCoherent,
        StateClass::SingleThermal,
        StateClass::SinglePureSqueezed,
        StateClass::TwoModeGeneral,
        StateClass::SeparableStandard,
        StateClass::Discordant,
        StateClass::EntangledStandard,
        StateClass::Tmsv,
    ];

    pub fn n_modes(self) -> usize {
        match self {
            StateClass::SingleGeneral
            | StateClass::SingleCoherent
            | StateClass::SingleThermal
            | StateClass::SinglePureSqueezed => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StateClass::SingleGeneral => "single-general",
            StateClass::SingleCoherent => "single-coherent",
            StateClass::SingleThermal => "single-thermal",
            StateClass::SinglePureSqueezed => "single-pure-squeezed",
            StateClass::TwoModeGeneral => "two-mode-general",
            StateClass::SeparableStandard => "separable-standard",
            StateClass::Discordant => "discordant",
            StateClass::EntangledStandard => "entangled-standard",
            StateClass::Tmsv => "tmsv",
        }
    }

    /// Parameters a class spec must carry. Displacements and `g` default to 0.
    pub fn required_parameters(self) -> &'static [&'static str] {
        match self {
            StateClass::SingleGeneral => &["nu", "r", "phi"],
            StateClass::SingleCoherent => &["a"],
            StateClass::SingleThermal => &["n"],
            StateClass::SinglePureSqueezed => &["r", "phi"],
            StateClass::TwoModeGeneral => &["a1", "b1", "b2", "c", "d"],
            StateClass::SeparableStandard => &["a1", "b1", "b2"],
            StateClass::Discordant => &["a", "b", "c"],
            StateClass::EntangledStandard => &["a", "b", "c"],
            StateClass::Tmsv => &["r"],
        }
    }
}

impl fmt::Display for StateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A class tag with its free parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateClassSpec {
    pub class_tag: StateClass,
    pub parameters: BTreeMap<String, f64>,
}

impl StateClassSpec {
    pub fn new<'a>(class_tag: StateClass, params: impl IntoIterator<Item = (&'a str, f64)>) -> Self {
        Self {
            class_tag,
            parameters: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        }
    }

    fn req(&self, key: &str) -> Result<f64> {
        let v = *self
            .parameters
            .get(key)
            .ok_or_else(|| Error::InvalidParameter(format!("{} requires parameter `{key}`", self.class_tag)))?;
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("`{key}` is not finite")));
        }
        Ok(v)
    }

    fn opt(&self, key: &str) -> Result<f64> {
        match self.parameters.get(key) {
            Some(v) if v.is_finite() => Ok(*v),
            Some(_) => Err(Error::InvalidParameter(format!("`{key}` is not finite"))),
            None => Ok(0.0),
        }
    }

    fn displacement(&self) -> Result<(f64, f64)> {
        Ok((self.opt("eps_x")?, self.opt("eps_y")?))
    }

    pub fn build(&self) -> Result<GaussianState> {
        match self.class_tag.n_modes() {
            1 => single_mode_from_class(self),
            _ => two_mode_from_class(self),
        }
    }
}

fn at_least_one(name: &str, v: f64) -> Result<()> {
    if v < 1.0 {
        Err(Error::InvalidParameter(format!("`{name}` = {v} must be >= 1")))
    } else {
        Ok(())
    }
}

fn rotation2(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, s, -s, c)
}

fn single(sigma: Matrix2<f64>, eps_x: f64, eps_p: f64) -> Result<GaussianState> {
    // Symmetrize exactly so rounding in the rotation cannot trip the check.
    let off = 0.5 * (sigma[(0, 1)] + sigma[(1, 0)]);
    let m = DMatrix::from_row_slice(2, 2, &[sigma[(0, 0)], off, off, sigma[(1, 1)]]);
    GaussianState::new(CovarianceMatrix::new(m)?, vec![eps_x, eps_p])
}

pub fn vacuum(n_modes: usize) -> Result<GaussianState> {
    let sigma = CovarianceMatrix::identity(n_modes)?;
    Ok(GaussianState::from_parts_unchecked(sigma, vec![0.0; 2 * n_modes]))
}

/// Single-mode thermal state with `σ = (2n̄ + 1) I`.
pub fn thermal(n_bar: f64) -> Result<GaussianState> {
    if !(n_bar >= 0.0) || !n_bar.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "mean photon number {n_bar} must be finite and >= 0"
        )));
    }
    let v = 2.0 * n_bar + 1.0;
    single(Matrix2::new(v, 0.0, 0.0, v), 0.0, 0.0)
}

pub fn coherent(eps_x: f64, eps_p: f64) -> Result<GaussianState> {
    single(Matrix2::identity(), eps_x, eps_p)
}

/// `σ = R(φ) diag(e^{2r}, e^{−2r}) R(φ)ᵀ` with the given displacement.
pub fn pure_squeezed(r: f64, phi: f64, eps_x: f64, eps_p: f64) -> Result<GaussianState> {
    squeezed_thermal(1.0, r, phi, eps_x, eps_p)
}

/// Euler form `R(φ) diag(ν e^{2r}, ν e^{−2r}) R(φ)ᵀ`, which covers every
/// physical single-mode covariance matrix for `ν ≥ 1`.
pub fn squeezed_thermal(nu: f64, r: f64, phi: f64, eps_x: f64, eps_p: f64) -> Result<GaussianState> {
    if !(nu >= 1.0) {
        return Err(Error::InvalidParameter(format!("ν = {nu} must be >= 1")));
    }
    let rot = rotation2(phi);
    let d = Matrix2::new(nu * (2.0 * r).exp(), 0.0, 0.0, nu * (-2.0 * r).exp());
    single(rot * d * rot.transpose(), eps_x, eps_p)
}

/// Two-mode squeezed vacuum: `a = b = cosh 2r`, `γ = diag(sinh 2r, −sinh 2r)`.
pub fn tmsv(r: f64) -> Result<GaussianState> {
    let a = (2.0 * r).cosh();
    let c = (2.0 * r).sinh();
    entangled_cm(a, a, c)
}

fn four(rows: [[f64; 4]; 4], eps: [f64; 4]) -> Result<GaussianState> {
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    GaussianState::new(CovarianceMatrix::from_row_slice(2, &flat)?, eps.to_vec())
}

fn entangled_cm(a: f64, b: f64, c: f64) -> Result<GaussianState> {
    four(
        [[a, 0.0, c, 0.0], [0.0, a, 0.0, -c], [c, 0.0, b, 0.0], [0.0, -c, 0.0, b]],
        [0.0; 4],
    )
}

fn single_mode_from_class(spec: &StateClassSpec) -> Result<GaussianState> {
    let (ex, ey) = spec.displacement()?;
    match spec.class_tag {
        StateClass::SingleGeneral => squeezed_thermal(spec.req("nu")?, spec.req("r")?, spec.req("phi")?, ex, ey),
        StateClass::SingleCoherent => {
            let a = spec.req("a")?;
            at_least_one("a", a)?;
            single(Matrix2::new(a, 0.0, 0.0, a), ex, ey)
        }
        StateClass::SingleThermal => thermal(spec.req("n")?),
        StateClass::SinglePureSqueezed => pure_squeezed(spec.req("r")?, spec.req("phi")?, ex, ey),
        other => Err(Error::UnsupportedDimension {
            n_modes: other.n_modes(),
        }),
    }
}

/// Builds a two-mode state from the covariance template of its class.
///
/// `TwoModeGeneral` follows the template with `b2` on both mode-B diagonal
/// entries and the `g` coupling only inside mode A; it does not span every
/// two-mode covariance matrix. All classes except `EntangledStandard` and
/// `Tmsv` carry the displacement `(eps_x, eps_y, 0, 0)`.
pub fn two_mode_from_class(spec: &StateClassSpec) -> Result<GaussianState> {
    let (ex, ey) = spec.displacement()?;
    let eps = [ex, ey, 0.0, 0.0];
    match spec.class_tag {
        StateClass::TwoModeGeneral => {
            let (a1, b1, b2) = (spec.req("a1")?, spec.req("b1")?, spec.req("b2")?);
            let (c, d, g) = (spec.req("c")?, spec.req("d")?, spec.opt("g")?);
            four(
                [[a1, g, c, 0.0], [g, b1, 0.0, d], [c, 0.0, b2, 0.0], [0.0, d, 0.0, b2]],
                eps,
            )
        }
        StateClass::SeparableStandard => {
            let (a1, b1, b2) = (spec.req("a1")?, spec.req("b1")?, spec.req("b2")?);
            four(
                [
                    [a1, 0.0, 0.0, 0.0],
                    [0.0, b1, 0.0, 0.0],
                    [0.0, 0.0, b2, 0.0],
                    [0.0, 0.0, 0.0, b2],
                ],
                eps,
            )
        }
        StateClass::Discordant => {
            let (a, b, c) = (spec.req("a")?, spec.req("b")?, spec.req("c")?);
            at_least_one("a", a)?;
            at_least_one("b", b)?;
            four(
                [[a, 0.0, c, 0.0], [0.0, a, 0.0, c], [c, 0.0, b, 0.0], [0.0, c, 0.0, b]],
                eps,
            )
        }
        StateClass::EntangledStandard => {
            let (a, b, c) = (spec.req("a")?, spec.req("b")?, spec.req("c")?);
            at_least_one("a", a)?;
            at_least_one("b", b)?;
            if c < 0.0 {
                return Err(Error::InvalidParameter(format!("`c` = {c} must be >= 0")));
            }
            entangled_cm(a, b, c)
        }
        StateClass::Tmsv => tmsv(spec.req("r")?),
        other => Err(Error::UnsupportedDimension {
            n_modes: other.n_modes(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::{invariants, is_bona_fide, symplectic_eigenvalues};
    use approx::assert_relative_eq;

    #[test]
    fn mean_photons() {
        assert_eq!(vacuum(1).unwrap().mean_photon_per_mode(), vec![0.0]);
        assert_eq!(vacuum(2).unwrap().mean_photon_per_mode(), vec![0.0, 0.0]);
        assert_relative_eq!(thermal(1.0).unwrap().mean_photon_per_mode()[0], 1.0);
        let coh = coherent(2.0, 0.0).unwrap();
        assert_relative_eq!(coh.mean_photon_per_mode()[0], 1.0);
        assert_relative_eq!(symplectic_eigenvalues(coh.sigma())[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn squeezed_vacuum_template() {
        let r = 1f64.asinh();
        let s = pure_squeezed(r, 0.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(s.sigma().get(0, 0), 3.0 + 2.0 * 2f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(s.sigma().get(1, 1), 3.0 - 2.0 * 2f64.sqrt(), epsilon = 1e-12);
        assert_eq!(s.sigma().get(0, 1), 0.0);
        assert_relative_eq!(s.mean_photon_per_mode()[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_inputs_reduce() {
        assert_eq!(thermal(0.0).unwrap(), vacuum(1).unwrap());
        assert_eq!(tmsv(0.0).unwrap(), vacuum(2).unwrap());
        assert!(matches!(thermal(-0.1), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn tmsv_is_pure() {
        let s = tmsv(1.5).unwrap();
        for nu in symplectic_eigenvalues(s.sigma()) {
            assert_relative_eq!(nu, 1.0, epsilon = 1e-9);
        }
        let r = 0.5 * 3f64.acosh();
        let s = tmsv(r).unwrap();
        assert_relative_eq!(s.sigma().get(0, 0), 3.0, epsilon = 1e-12);
        assert_relative_eq!(s.sigma().get(0, 2), 8f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(s.mean_photon_per_mode()[0], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn class_templates() {
        let ent = StateClassSpec::new(
            StateClass::EntangledStandard,
            [("a", 3.0), ("b", 3.0), ("c", 8f64.sqrt())],
        )
        .build()
        .unwrap();
        assert_relative_eq!(ent.mean_photon_per_mode()[0], 1.0);
        assert_relative_eq!(ent.sigma().get(1, 3), -8f64.sqrt());

        let sep = StateClassSpec::new(StateClass::SeparableStandard, [("a1", 3.0), ("b1", 3.0), ("b2", 1.0)])
            .build()
            .unwrap();
        assert_eq!(invariants(sep.sigma()).unwrap().C, 0.0);

        let disc = StateClassSpec::new(
            StateClass::Discordant,
            [("a", 1.0), ("b", 2.0), ("c", 0.0), ("eps_x", 2.0)],
        )
        .build()
        .unwrap();
        assert_eq!(disc.displacement(), &[2.0, 0.0, 0.0, 0.0]);
        assert_relative_eq!(disc.mean_photon_per_mode()[0], 1.0);
    }

    #[test]
    fn unphysical_template_reports_eigenvalue() {
        let err = StateClassSpec::new(StateClass::EntangledStandard, [("a", 3.0), ("b", 3.0), ("c", 3.0)])
            .build()
            .unwrap_err();
        match err {
            Error::NotBonaFide {
                min_symplectic_eigenvalue,
            } => assert!(min_symplectic_eigenvalue < 1.0),
            e => panic!("unexpected {e}"),
        }
        let missing = StateClassSpec::new(StateClass::Discordant, [("a", 3.0)]).build();
        assert!(matches!(missing, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn constructors_are_bona_fide() {
        let states = [
            vacuum(1).unwrap(),
            thermal(2.5).unwrap(),
            coherent(1.0, -3.0).unwrap(),
            pure_squeezed(0.8, 1.1, 0.3, 0.2).unwrap(),
            squeezed_thermal(2.0, -0.4, 2.9, 0.0, 0.0).unwrap(),
            tmsv(2.0).unwrap(),
        ];
        for s in &states {
            assert!(is_bona_fide(s.sigma(), 1e-9));
        }
    }

    #[test]
    fn snapshot_round_trip() {
        let spec = StateClassSpec::new(StateClass::Tmsv, [("r", 0.3)]);
        let s = spec.build().unwrap();
        let snap = s.to_snapshot(Some(&spec));
        let json = serde_json::to_string(&snap).unwrap();
        assert!(json.contains("\"class_tag\":\"tmsv\""));
        let back: StateSnapshot = serde_json::from_str(&json).unwrap();
        assert_eq!(GaussianState::from_snapshot(&back).unwrap(), s);
    }
}
