//! Truncated Fock-basis engine used to cross-check the Gaussian formulas.
//!
//! States are prepared in an enlarged space of `2 × cutoff` levels per mode
//! and then truncated to `cutoff`, so the reported trace deficit measures the
//! population actually lost to truncation.

mod ops;
mod suite;

pub use suite::{default_recipes, oracle_suite, OracleCheck, OracleConfig};

use faer::{c64, Mat, Side};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrology::QfiConfig;
use crate::states::{self, GaussianState};
use ops::{dense_expm, ladder, squeeze_generator, vec_expm_action, Ladder2};

/// Largest trace deficit accepted for a truncated state.
pub const MAX_TRACE_DEFICIT: f64 = 1e-8;
pub const MIN_CUTOFF: usize = 8;

/// Fock-space preparations with a known Gaussian counterpart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FockRecipe {
    Thermal {
        n_bar: f64,
    },
    /// `D(α)|0⟩` with `α = re + i·im`.
    Coherent {
        re: f64,
        im: f64,
    },
    /// `exp[(r/2)(a² − a†²)]|0⟩`.
    SqueezedVacuum {
        r: f64,
    },
    /// The squeezer above applied to a thermal state of symplectic eigenvalue `nu`.
    SqueezedThermal {
        r: f64,
        nu: f64,
    },
    /// `exp[r(a†b† − ab)]|00⟩`.
    Tmsv {
        r: f64,
    },
}

impl FockRecipe {
    pub fn n_modes(&self) -> usize {
        match self {
            FockRecipe::Tmsv { .. } => 2,
            _ => 1,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            FockRecipe::Thermal { n_bar } => format!("thermal(n={n_bar})"),
            FockRecipe::Coherent { re, im } => format!("coherent(alpha={re}{im:+}i)"),
            FockRecipe::SqueezedVacuum { r } => format!("squeezed_vacuum(r={r:.6})"),
            FockRecipe::SqueezedThermal { r, nu } => format!("squeezed_thermal(r={r},nu={nu})"),
            FockRecipe::Tmsv { r } => format!("tmsv(r={r:.6})"),
        }
    }

    /// The same state as a covariance matrix and displacement.
    ///
    /// With quadratures `x = a + a†`, `p = −i(a − a†)`, the squeezer
    /// `exp[(r/2)(a² − a†²)]` contracts `x` by `e^{−r}`.
    pub fn gaussian(&self) -> Result<GaussianState> {
        match *self {
            FockRecipe::Thermal { n_bar } => states::thermal(n_bar),
            FockRecipe::Coherent { re, im } => states::coherent(2.0 * re, 2.0 * im),
            FockRecipe::SqueezedVacuum { r } => states::pure_squeezed(-r, 0.0, 0.0, 0.0),
            FockRecipe::SqueezedThermal { r, nu } => states::squeezed_thermal(nu, -r, 0.0, 0.0, 0.0),
            FockRecipe::Tmsv { r } => states::tmsv(r),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            FockRecipe::Thermal { n_bar } => n_bar >= 0.0 && n_bar.is_finite(),
            FockRecipe::Coherent { re, im } => re.is_finite() && im.is_finite(),
            FockRecipe::SqueezedVacuum { r } | FockRecipe::Tmsv { r } => r.is_finite(),
            FockRecipe::SqueezedThermal { r, nu } => r.is_finite() && nu >= 1.0 && nu.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("invalid recipe {}", self.label())))
        }
    }
}

#[derive(Debug, Clone)]
enum Repr {
    /// `ρ = |ψ⟩⟨ψ|`, with `ψ` left unnormalized after truncation.
    Pure(Vec<c64>),
    Mixed(Mat<c64>),
}

/// A density matrix truncated to `cutoff` levels per mode.
#[derive(Debug, Clone)]
pub struct FockDensityMatrix {
    repr: Repr,
    cutoff: usize,
    n_modes: usize,
    trace_deficit: f64,
}

impl FockDensityMatrix {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn trace_deficit(&self) -> f64 {
        self.trace_deficit
    }

    pub fn dim(&self) -> usize {
        self.cutoff.pow(self.n_modes as u32)
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.repr, Repr::Pure(_))
    }

    pub fn to_dense(&self) -> Mat<c64> {
        match &self.repr {
            Repr::Mixed(m) => m.clone(),
            Repr::Pure(v) => Mat::from_fn(v.len(), v.len(), |i, j| v[i] * v[j].conj()),
        }
    }

    pub fn element(&self, i: usize, j: usize) -> c64 {
        match &self.repr {
            Repr::Mixed(m) => m[(i, j)],
            Repr::Pure(v) => v[i] * v[j].conj(),
        }
    }

    /// Density matrix with its pure-state shortcut dropped, for cross-checks.
    pub fn as_mixed(&self) -> FockDensityMatrix {
        FockDensityMatrix {
            repr: Repr::Mixed(self.to_dense()),
            ..self.clone()
        }
    }
}

/// A state in the enlarged preparation space.
enum Ext {
    Pure { psi: Vec<c64>, dim: usize, modes: usize },
    Mixed { rho: Mat<c64> },
}

fn ext_dim(cutoff: usize) -> usize {
    2 * cutoff
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < MIN_CUTOFF {
        Err(Error::InvalidParameter(format!(
            "cutoff {cutoff} is below the minimum of {MIN_CUTOFF}"
        )))
    } else {
        Ok(())
    }
}

fn thermal_populations(n_bar: f64, dim: usize) -> Vec<f64> {
    let q = n_bar / (n_bar + 1.0);
    let mut p = Vec::with_capacity(dim);
    let mut cur = 1.0 / (n_bar + 1.0);
    for _ in 0..dim {
        p.push(cur);
        cur *= q;
    }
    p
}

fn prepare(recipe: &FockRecipe, cutoff: usize) -> Result<Ext> {
    recipe.validate()?;
    check_cutoff(cutoff)?;
    let e = ext_dim(cutoff);
    let vacuum_col = |u: &Mat<c64>| (0..e).map(|i| u[(i, 0)]).collect::<Vec<_>>();
    Ok(match *recipe {
        FockRecipe::Thermal { n_bar } => {
            let p = thermal_populations(n_bar, e);
            Ext::Mixed {
                rho: Mat::from_fn(e, e, |i, j| {
                    if i == j {
                        c64::new(p[i], 0.0)
                    } else {
                        c64::new(0.0, 0.0)
                    }
                }),
            }
        }
        FockRecipe::Coherent { re, im } => {
            let a = ladder(e);
            let alpha = c64::new(re, im);
            let gen = Mat::from_fn(e, e, |i, j| alpha * a[(j, i)].conj() - alpha.conj() * a[(i, j)]);
            Ext::Pure {
                psi: vacuum_col(&dense_expm(&gen)),
                dim: e,
                modes: 1,
            }
        }
        FockRecipe::SqueezedVacuum { r } => {
            let u = dense_expm(&squeeze_generator(e, r));
            Ext::Pure {
                psi: vacuum_col(&u),
                dim: e,
                modes: 1,
            }
        }
        FockRecipe::SqueezedThermal { r, nu } => {
            let u = dense_expm(&squeeze_generator(e, r));
            let p = thermal_populations((nu - 1.0) / 2.0, e);
            let up = Mat::from_fn(e, e, |i, j| u[(i, j)] * p[j]);
            Ext::Mixed { rho: &up * u.adjoint() }
        }
        FockRecipe::Tmsv { r } => {
            let mut psi = vec![c64::new(0.0, 0.0); e * e];
            psi[0] = c64::new(1.0, 0.0);
            let lad = Ladder2::new(e);
            let psi = vec_expm_action(&psi, r.abs() * (e as f64), |v| lad.tmsv_generator(v, r));
            Ext::Pure { psi, dim: e, modes: 2 }
        }
    })
}

impl Ext {
    /// `exp(−iθ n_A)` on mode A.
    fn rotate(&mut self, theta: f64) {
        let phase = |k: usize| c64::from_polar(1.0, -theta * k as f64);
        match self {
            Ext::Pure { psi, dim, modes } => {
                let stride = if *modes == 2 { *dim } else { 1 };
                for (idx, z) in psi.iter_mut().enumerate() {
                    *z *= phase((idx / stride) % *dim);
                }
            }
            Ext::Mixed { rho } => {
                let n = rho.nrows();
                for j in 0..n {
                    for i in 0..n {
                        rho[(i, j)] *= phase(i) * phase(j).conj();
                    }
                }
            }
        }
    }

    /// The unitary whose action on the quadratures of mode A is
    /// `diag(e^{ε}, e^{−ε})`, i.e. `exp[(−ε/2)(a² − a†²)]`.
    fn squeeze(&mut self, eps: f64) {
        if eps == 0.0 {
            return;
        }
        match self {
            Ext::Pure { psi, dim, modes: 1 } => {
                let u = dense_expm(&squeeze_generator(*dim, -eps));
                let v = Mat::from_fn(*dim, 1, |i, _| psi[i]);
                let out = &u * &v;
                *psi = (0..*dim).map(|i| out[(i, 0)]).collect();
            }
            Ext::Pure { psi, dim, .. } => {
                let lad = Ladder2::new(*dim);
                let bound = eps.abs() * (*dim as f64);
                *psi = vec_expm_action(psi, bound, |v| lad.squeeze_a_generator(v, -eps));
            }
            Ext::Mixed { rho } => {
                let u = dense_expm(&squeeze_generator(rho.nrows(), -eps));
                *rho = &u * &*rho * u.adjoint();
            }
        }
    }

    fn truncate(self, cutoff: usize) -> Result<FockDensityMatrix> {
        let (repr, n_modes, trace) = match self {
            Ext::Pure { psi, dim, modes } => {
                let v: Vec<c64> = if modes == 2 {
                    (0..cutoff * cutoff)
                        .map(|k| psi[(k / cutoff) * dim + k % cutoff])
                        .collect()
                } else {
                    psi[..cutoff].to_vec()
                };
                let tr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
                (Repr::Pure(v), modes, tr)
            }
            Ext::Mixed { rho } => {
                let m = Mat::from_fn(cutoff, cutoff, |i, j| rho[(i, j)]);
                let tr: f64 = (0..cutoff).map(|i| m[(i, i)].re).sum();
                (Repr::Mixed(m), 1, tr)
            }
        };
        let trace_deficit = (1.0 - trace).max(0.0);
        if trace_deficit > MAX_TRACE_DEFICIT {
            return Err(Error::CutoffTooSmall {
                cutoff,
                trace_deficit,
                suggested_cutoff: suggest_cutoff(cutoff, trace_deficit),
            });
        }
        Ok(FockDensityMatrix {
            repr,
            cutoff,
            n_modes,
            trace_deficit,
        })
    }
}

/// Assumes a geometric photon-number tail.
fn suggest_cutoff(cutoff: usize, deficit: f64) -> usize {
    if !(deficit > 0.0 && deficit < 1.0) {
        return 2 * cutoff;
    }
    let target = (0.1 * MAX_TRACE_DEFICIT).ln();
    let scaled = (cutoff as f64 * target / deficit.ln()).ceil() as usize;
    scaled.max(cutoff + 1)
}

pub fn build_fock(recipe: &FockRecipe, cutoff: usize) -> Result<FockDensityMatrix> {
    prepare(recipe, cutoff)?.truncate(cutoff)
}

/// The recipe state after the encoding `R(θ)⁻¹ S(ε) R(θ)` on mode A. The
/// final counter-rotation is omitted; it is a fixed unitary and leaves
/// fidelities unchanged.
pub fn encoded_fock(recipe: &FockRecipe, cutoff: usize, eps: f64, theta: f64) -> Result<FockDensityMatrix> {
    let mut ext = prepare(recipe, cutoff)?;
    ext.rotate(theta);
    ext.squeeze(eps);
    ext.truncate(cutoff)
}

fn hermitian_eigenvalues(m: &Mat<c64>) -> Result<Vec<f64>> {
    m.self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::NumericalFailure(format!("eigendecomposition failed: {e:?}")))
}

/// `√ρ` for a positive semidefinite Hermitian matrix.
fn sqrt_psd(m: &Mat<c64>) -> Result<Mat<c64>> {
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::NumericalFailure(format!("eigendecomposition failed: {e:?}")))?;
    let u = evd.U();
    let s = evd.S().column_vector();
    let n = m.nrows();
    let mut roots = Vec::with_capacity(n);
    for k in 0..n {
        let lam = s[k].re;
        if lam < -1e-8 {
            return Err(Error::NumericalFailure(format!("negative eigenvalue {lam:.3e}")));
        }
        roots.push(lam.max(0.0).sqrt());
    }
    let us = Mat::from_fn(n, n, |i, j| u[(i, j)] * roots[j]);
    Ok(&us * u.adjoint())
}

fn check_pair(a: &FockDensityMatrix, b: &FockDensityMatrix) -> Result<()> {
    if a.n_modes != b.n_modes {
        return Err(Error::ModeMismatch {
            left: a.n_modes,
            right: b.n_modes,
        });
    }
    if a.cutoff != b.cutoff {
        return Err(Error::InvalidParameter(format!(
            "cutoff mismatch: {} vs {}",
            a.cutoff, b.cutoff
        )));
    }
    Ok(())
}

/// `⟨ψ|ρ|ψ⟩`.
fn expectation(psi: &[c64], rho: &FockDensityMatrix) -> f64 {
    match &rho.repr {
        Repr::Pure(phi) => psi.iter().zip(phi).map(|(a, b)| a.conj() * b).sum::<c64>().norm_sqr(),
        Repr::Mixed(m) => {
            let n = psi.len();
            let mut acc = c64::new(0.0, 0.0);
            for j in 0..n {
                let mut col = c64::new(0.0, 0.0);
                for i in 0..n {
                    col += psi[i].conj() * m[(i, j)];
                }
                acc += col * psi[j];
            }
            acc.re
        }
    }
}

/// Uhlmann fidelity `(Tr √(√ρ1 ρ2 √ρ1))²`, computed as the squared trace
/// norm of `√ρ1 √ρ2`. A pure argument reduces it to an expectation value.
pub fn fidelity_fock(a: &FockDensityMatrix, b: &FockDensityMatrix) -> Result<f64> {
    check_pair(a, b)?;
    match (&a.repr, &b.repr) {
        (Repr::Pure(psi), _) => Ok(expectation(psi, b)),
        (_, Repr::Pure(psi)) => Ok(expectation(psi, a)),
        (Repr::Mixed(m1), Repr::Mixed(m2)) => {
            let prod = &sqrt_psd(m1)? * &sqrt_psd(m2)?;
            let sv = prod
                .singular_values()
                .map_err(|e| Error::NumericalFailure(format!("SVD failed: {e:?}")))?;
            let t: f64 = sv.iter().sum();
            Ok(t * t)
        }
    }
}

fn entropy_of(eigs: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &l in eigs {
        if l < -1e-8 {
            return Err(Error::NumericalFailure(format!("negative eigenvalue {l:.3e}")));
        }
        if l > 0.0 {
            s -= l * l.log2();
        }
    }
    Ok(s)
}

/// `−Σ λ log₂ λ` over the eigenvalues of the truncated matrix.
pub fn entropy_fock(rho: &FockDensityMatrix) -> Result<f64> {
    match &rho.repr {
        Repr::Pure(v) => entropy_of(&[v.iter().map(|z| z.norm_sqr()).sum()]),
        Repr::Mixed(m) => entropy_of(&hermitian_eigenvalues(m)?),
    }
}

/// `ρ^{T_B}` with elements `⟨m n|ρ^{T_B}|m' n'⟩ = ⟨m n'|ρ|m' n⟩`.
pub fn partial_transpose_fock(rho: &FockDensityMatrix) -> Result<Mat<c64>> {
    if rho.n_modes != 2 {
        return Err(Error::UnsupportedDimension { n_modes: rho.n_modes });
    }
    let d = rho.cutoff;
    Ok(Mat::from_fn(d * d, d * d, |row, col| {
        let (m, n) = (row / d, row % d);
        let (mp, np) = (col / d, col % d);
        rho.element(m * d + np, mp * d + n)
    }))
}

/// `max(0, ln(‖ρ^{T_B}‖₁ / Tr ρ))`.
///
/// For pure states the trace norm is `(Σ s_k)²` over the Schmidt
/// coefficients, taken as singular values of the amplitude matrix; mixed
/// states go through the eigenvalues of the reshuffled matrix.
pub fn negativity_fock(rho: &FockDensityMatrix) -> Result<f64> {
    if rho.n_modes != 2 {
        return Err(Error::UnsupportedDimension { n_modes: rho.n_modes });
    }
    let (norm, trace) = match &rho.repr {
        Repr::Pure(v) => {
            let d = rho.cutoff;
            let amp = Mat::from_fn(d, d, |m, n| v[m * d + n]);
            let sv = amp
                .singular_values()
                .map_err(|e| Error::NumericalFailure(format!("SVD failed: {e:?}")))?;
            let s1: f64 = sv.iter().sum();
            (s1 * s1, sv.iter().map(|s| s * s).sum::<f64>())
        }
        Repr::Mixed(m) => {
            let eigs = hermitian_eigenvalues(&partial_transpose_fock(rho)?)?;
            let tr: f64 = (0..m.nrows()).map(|i| m[(i, i)].re).sum();
            (eigs.iter().map(|l| l.abs()).sum::<f64>(), tr)
        }
    };
    Ok((norm / trace).ln().max(0.0))
}

/// Per-phase QFI from Fock-space fidelities, using the same step sizes and
/// Richardson rule as [`crate::metrology::qfi_theta`].
pub fn qfi_fock(recipe: &FockRecipe, theta: f64, cutoff: usize, cfg: &QfiConfig) -> Result<f64> {
    if !(cfg.d_epsilon > 0.0 && cfg.d_epsilon.is_finite()) {
        return Err(Error::InvalidParameter("d_epsilon must be positive".into()));
    }
    let eps0 = cfg.base_epsilon;
    let h = cfg.d_epsilon;
    let base = encoded_fock(recipe, cutoff, eps0, theta)?;
    let quotient = |h: f64| -> Result<f64> {
        let shifted = encoded_fock(recipe, cutoff, eps0 + h, theta)?;
        let f = fidelity_fock(&base, &shifted)?.min(1.0);
        Ok(8.0 * (1.0 - f.sqrt()) / (h * h))
    };
    let coarse = quotient(h)?;
    let value = if cfg.richardson {
        (4.0 * quotient(0.5 * h)? - coarse) / 3.0
    } else {
        coarse
    };
    Ok(value.max(0.0))
}

/// [`qfi_fock`] averaged over `cfg.theta_nodes` uniform phases in `[0, π)`.
pub fn avg_qfi_fock(recipe: &FockRecipe, cutoff: usize, cfg: &QfiConfig) -> Result<f64> {
    cfg.validate()?;
    let n = cfg.theta_nodes;
    let step = std::f64::consts::PI / n as f64;
    let mut sum = 0.0;
    for k in 0..n {
        sum += qfi_fock(recipe, k as f64 * step, cutoff, cfg)?;
    }
    Ok(sum / n as f64)
}
