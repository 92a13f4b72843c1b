//! Symplectic linear algebra on one- and two-mode covariance matrices.
//!
//! Units follow the convention in which the vacuum covariance matrix is the
//! identity (ħ = 2).

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on the symmetry of a covariance matrix.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Default tolerance for the uncertainty relation `ν ≥ 1 − tol`.
pub const DEFAULT_PHYSICALITY_TOL: f64 = 1e-9;

fn check_modes(n_modes: usize) -> Result<()> {
    if n_modes == 1 || n_modes == 2 {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension { n_modes })
    }
}

/// Real symmetric `2N × 2N` matrix of second quadrature moments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCm", into = "RawCm")]
pub struct CovarianceMatrix {
    entries: DMatrix<f64>,
    n_modes: usize,
}

#[derive(Serialize, Deserialize)]
struct RawCm {
    n_modes: usize,
    entries: Vec<f64>,
}

impl TryFrom<RawCm> for CovarianceMatrix {
    type Error = Error;
    fn try_from(raw: RawCm) -> Result<Self> {
        CovarianceMatrix::from_row_slice(raw.n_modes, &raw.entries)
    }
}

impl From<CovarianceMatrix> for RawCm {
    fn from(cm: CovarianceMatrix) -> Self {
        RawCm {
            n_modes: cm.n_modes,
            entries: cm.to_row_major(),
        }
    }
}

impl CovarianceMatrix {
    /// Validates shape and symmetry. Physicality is not checked here.
    pub fn new(entries: DMatrix<f64>) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c || r % 2 != 0 || r == 0 {
            return Err(Error::InvalidMatrix(format!(
                "expected a square 2N x 2N matrix, got {r} x {c}"
            )));
        }
        let n_modes = r / 2;
        check_modes(n_modes)?;
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        for i in 0..r {
            for j in (i + 1)..r {
                let diff = (entries[(i, j)] - entries[(j, i)]).abs();
                if diff > SYMMETRY_TOL {
                    return Err(Error::InvalidMatrix(format!(
                        "not symmetric: |σ[{i},{j}] − σ[{j},{i}]| = {diff:.3e}"
                    )));
                }
            }
        }
        Ok(Self { entries, n_modes })
    }

    pub fn from_row_slice(n_modes: usize, data: &[f64]) -> Result<Self> {
        check_modes(n_modes)?;
        let dim = 2 * n_modes;
        if data.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for {n_modes} mode(s), got {}",
                dim * dim,
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(dim, dim, data))
    }

    pub fn identity(n_modes: usize) -> Result<Self> {
        check_modes(n_modes)?;
        Ok(Self {
            entries: DMatrix::identity(2 * n_modes, 2 * n_modes),
            n_modes,
        })
    }

    /// Builds the matrix without checks; callers guarantee exact symmetry.
    pub(crate) fn from_symmetric_unchecked(entries: DMatrix<f64>) -> Self {
        let n_modes = entries.nrows() / 2;
        Self { entries, n_modes }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.entries
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push(self.entries[(i, j)]);
            }
        }
        out
    }

    /// The 2×2 block at block-row `i`, block-column `j`.
    pub fn block(&self, i: usize, j: usize) -> Matrix2<f64> {
        let e = &self.entries;
        Matrix2::new(
            e[(2 * i, 2 * j)],
            e[(2 * i, 2 * j + 1)],
            e[(2 * i + 1, 2 * j)],
            e[(2 * i + 1, 2 * j + 1)],
        )
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }
}

/// Block-diagonal symplectic form, one `[[0, 1], [−1, 0]]` block per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    entries: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn n_modes(&self) -> usize {
        self.entries.nrows() / 2
    }
}

/// Two-mode symplectic invariants of `σ = [[α, γ], [γᵀ, β]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct Invariants {
    pub A: f64,
    pub B: f64,
    pub C: f64,
    pub D: f64,
}

impl Invariants {
    /// `A + B + 2C`, invariant under local symplectic operations.
    pub fn seralian(&self) -> f64 {
        self.A + self.B + 2.0 * self.C
    }

    /// `A + B − 2C`, the seralian of the partially transposed matrix.
    pub fn seralian_pt(&self) -> f64 {
        self.A + self.B - 2.0 * self.C
    }
}

pub fn omega(n_modes: usize) -> Result<SymplecticForm> {
    check_modes(n_modes)?;
    let d = 2 * n_modes;
    let mut entries = DMatrix::zeros(d, d);
    for k in 0..n_modes {
        entries[(2 * k, 2 * k + 1)] = 1.0;
        entries[(2 * k + 1, 2 * k)] = -1.0;
    }
    Ok(SymplecticForm { entries })
}

/// Moduli of the eigenvalues of `iΩσ`, one per mode, ascending.
///
/// Computed from the full complex spectrum of the real matrix `Ωσ`, whose
/// eigenvalues are `±iν_k`, so the moduli come in equal pairs.
pub fn symplectic_eigenvalues(sigma: &CovarianceMatrix) -> Vec<f64> {
    let om = omega(sigma.n_modes()).expect("validated mode count");
    let m = om.matrix() * sigma.matrix();
    let mut moduli: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| a.total_cmp(b));
    moduli.chunks(2).map(|pair| 0.5 * (pair[0] + pair[1])).collect()
}

/// `σ + iΩ ≥ 0`, tested as `σ > 0` together with `ν_min ≥ 1 − tol`. The
/// symplectic spectrum alone cannot flag an indefinite `σ`.
pub fn is_bona_fide(sigma: &CovarianceMatrix, tol: f64) -> bool {
    check_bona_fide(sigma, tol).is_ok()
}

/// Smallest symplectic eigenvalue, or an error carrying it when it violates
/// the uncertainty relation. An indefinite `σ` has no symplectic spectrum and
/// is reported with `min_symplectic_eigenvalue = 0`.
pub fn check_bona_fide(sigma: &CovarianceMatrix, tol: f64) -> Result<f64> {
    if sigma.matrix().clone().cholesky().is_none() {
        return Err(Error::NotBonaFide {
            min_symplectic_eigenvalue: 0.0,
        });
    }
    let nu_min = symplectic_eigenvalues(sigma)[0];
    if nu_min >= 1.0 - tol {
        Ok(nu_min)
    } else {
        Err(Error::NotBonaFide {
            min_symplectic_eigenvalue: nu_min,
        })
    }
}

/// Conjugation by `diag(1, 1, 1, −1)`: flips the sign of mode B's momentum.
pub fn partial_transpose(sigma: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    if sigma.n_modes() != 2 {
        return Err(Error::UnsupportedDimension {
            n_modes: sigma.n_modes(),
        });
    }
    let mut m = sigma.matrix().clone();
    for k in 0..4 {
        if k != 3 {
            m[(3, k)] = -m[(3, k)];
            m[(k, 3)] = -m[(k, 3)];
        }
    }
    Ok(CovarianceMatrix::from_symmetric_unchecked(m))
}

pub fn invariants(sigma: &CovarianceMatrix) -> Result<Invariants> {
    if sigma.n_modes() != 2 {
        return Err(Error::UnsupportedDimension {
            n_modes: sigma.n_modes(),
        });
    }
    Ok(Invariants {
        A: sigma.block(0, 0).determinant(),
        B: sigma.block(1, 1).determinant(),
        C: sigma.block(0, 1).determinant(),
        D: sigma.matrix().determinant(),
    })
}

/// Smallest symplectic eigenvalue `ν̃` of the partially transposed matrix,
/// from `2ν̃² = H − √(H² − 4D)` with `H = A + B − 2C`.
///
/// Evaluated in the rationalized form `ν̃² = 2D / (H + √(H² − 4D))`, which
/// avoids cancellation when `ν̃` is small.
pub fn pt_min_symplectic_eigenvalue(sigma: &CovarianceMatrix) -> Result<f64> {
    let inv = invariants(sigma)?;
    let h = inv.seralian_pt();
    let disc = h * h - 4.0 * inv.D;
    let scale = (h * h).max(1.0);
    if disc < -1e-9 * scale {
        return Err(Error::NumericalDomain(format!("H² − 4D = {disc:.3e} is negative")));
    }
    let denom = h + disc.max(0.0).sqrt();
    if denom <= 0.0 {
        return Err(Error::NumericalDomain(format!(
            "H + √(H² − 4D) = {denom:.3e} is not positive"
        )));
    }
    Ok((2.0 * inv.D / denom).max(0.0).sqrt())
}
