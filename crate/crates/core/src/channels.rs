//! Rotation and squeezing transforms and the squeezing-encoding map.

use nalgebra::{DMatrix, Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::states::GaussianState;
use crate::symplectic::{omega, CovarianceMatrix};

/// A real `2N × 2N` matrix acting as `σ → SσSᵀ`, `ε → Sε`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    entries: DMatrix<f64>,
}

impl SymplecticTransform {
    /// Accepts `m` only if `mΩmᵀ = Ω` within `1e-12`.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let (r, c) = m.shape();
        if r != c || r % 2 != 0 {
            return Err(Error::InvalidMatrix(format!("transform is {r} x {c}")));
        }
        let om = omega(r / 2)?;
        let err = (&m * om.matrix() * m.transpose() - om.matrix()).amax();
        if err > 1e-12 {
            return Err(Error::InvalidMatrix(format!("not symplectic: |SΩSᵀ − Ω| = {err:.3e}")));
        }
        Ok(Self { entries: m })
    }

    fn from_2x2(m: Matrix2<f64>) -> Self {
        Self {
            entries: DMatrix::from_row_slice(2, 2, &[m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]),
        }
    }

    fn as_2x2(&self) -> Matrix2<f64> {
        let e = &self.entries;
        Matrix2::new(e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)])
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn n_modes(&self) -> usize {
        self.entries.nrows() / 2
    }

    /// `self · other`, i.e. `other` acts first.
    pub fn compose(&self, other: &SymplecticTransform) -> Result<SymplecticTransform> {
        if self.n_modes() != other.n_modes() {
            return Err(Error::ModeMismatch {
                left: self.n_modes(),
                right: other.n_modes(),
            });
        }
        Ok(Self {
            entries: &self.entries * &other.entries,
        })
    }

    /// `S⁻¹ = −Ω Sᵀ Ω`.
    pub fn inverse(&self) -> SymplecticTransform {
        let om = omega(self.n_modes()).expect("transform has 1 or 2 modes");
        Self {
            entries: -(om.matrix() * self.entries.transpose() * om.matrix()),
        }
    }
}

fn rotation_2x2(theta: f64) -> Matrix2<f64> {
    let (s, c) = theta.sin_cos();
    Matrix2::new(c, s, -s, c)
}

pub fn rotation(theta: f64) -> SymplecticTransform {
    SymplecticTransform::from_2x2(rotation_2x2(theta))
}

pub fn squeezer(eps: f64) -> SymplecticTransform {
    SymplecticTransform::from_2x2(Matrix2::new(eps.exp(), 0.0, 0.0, (-eps).exp()))
}

/// Applies a single-mode transform `s` to `target_mode`, leaving the rest
/// untouched.
pub fn apply(state: &GaussianState, s: &SymplecticTransform, target_mode: usize) -> Result<GaussianState> {
    if s.n_modes() != 1 {
        return Err(Error::UnsupportedDimension { n_modes: s.n_modes() });
    }
    if target_mode >= state.n_modes() {
        return Err(Error::IndexOutOfRange {
            index: target_mode,
            n_modes: state.n_modes(),
        });
    }
    Ok(apply_local(state, &s.as_2x2(), target_mode))
}

/// Block-wise local action: `σ_kk → Tσ_kkTᵀ`, `σ_kj → Tσ_kj`; other blocks
/// are copied verbatim.
fn apply_local(state: &GaussianState, t: &Matrix2<f64>, k: usize) -> GaussianState {
    let sigma = state.sigma();
    let n = state.n_modes();
    let mut m = sigma.matrix().clone();

    let diag = t * sigma.block(k, k) * t.transpose();
    let off = 0.5 * (diag[(0, 1)] + diag[(1, 0)]);
    m[(2 * k, 2 * k)] = diag[(0, 0)];
    m[(2 * k + 1, 2 * k + 1)] = diag[(1, 1)];
    m[(2 * k, 2 * k + 1)] = off;
    m[(2 * k + 1, 2 * k)] = off;

    for j in (0..n).filter(|&j| j != k) {
        let cross = t * sigma.block(k, j);
        for a in 0..2 {
            for b in 0..2 {
                m[(2 * k + a, 2 * j + b)] = cross[(a, b)];
                m[(2 * j + b, 2 * k + a)] = cross[(a, b)];
            }
        }
    }

    let mut eps = state.displacement().to_vec();
    let v = t * Vector2::new(eps[2 * k], eps[2 * k + 1]);
    eps[2 * k] = v[0];
    eps[2 * k + 1] = v[1];

    GaussianState::from_parts_unchecked(CovarianceMatrix::from_symmetric_unchecked(m), eps)
}

/// The single-mode transform `R(θ)⁻¹ S(ε) R(θ)`.
pub fn encoding_transform(eps: f64, theta: f64) -> SymplecticTransform {
    SymplecticTransform::from_2x2(encoding_2x2(eps, theta))
}

/// Formed as `I + Rᵀ (S − I) R` so that `ε = 0` gives the identity exactly
/// and small `ε` keeps full relative precision in `T − I`.
fn encoding_2x2(eps: f64, theta: f64) -> Matrix2<f64> {
    let r = rotation_2x2(theta);
    let s_minus_i = Matrix2::new(eps.exp_m1(), 0.0, 0.0, (-eps).exp_m1());
    Matrix2::identity() + r.transpose() * s_minus_i * r
}

/// Squeezes mode A by `ε` along the axis set by the acquired phase `θ`.
/// Mode B, if present, is left bit-identical.
pub fn encoding_map(state: &GaussianState, eps: f64, theta: f64) -> GaussianState {
    apply_local(state, &encoding_2x2(eps, theta), 0)
}
