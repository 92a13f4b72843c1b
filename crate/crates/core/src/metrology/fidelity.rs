//! Closed-form Uhlmann fidelity between one- or two-mode Gaussian states.
//!
//! Near pure states the two-mode formula takes the square root of a
//! quantity that vanishes quadratically in the distance between the states,
//! so plain `f64` loses most of its digits exactly where finite-difference
//! QFI needs them. Determinants and the radicand are therefore evaluated in
//! double-double arithmetic.

use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::states::GaussianState;

type Dd = TwoFloat;
type M4 = [[Dd; 4]; 4];

fn dd(x: f64) -> Dd {
    Dd::from(x)
}

fn det2(a: Dd, b: Dd, c: Dd, d: Dd) -> Dd {
    a * d - b * c
}

/// 4×4 determinant by Laplace expansion along the first two rows.
fn det4(m: &M4) -> Dd {
    const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let mut acc = dd(0.0);
    for &(i, j) in &PAIRS {
        let (k, l) = complement(i, j);
        let top = det2(m[0][i], m[0][j], m[1][i], m[1][j]);
        let bot = det2(m[2][k], m[2][l], m[3][k], m[3][l]);
        // Sign of the permutation (i, j, k, l).
        let sign = if (i + j + 1) % 2 == 0 { 1.0 } else { -1.0 };
        acc += top * bot * sign;
    }
    acc
}

fn complement(i: usize, j: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&x| x != i && x != j);
    (rest.next().unwrap(), rest.next().unwrap())
}

fn to_dd4(m: &[[f64; 4]; 4]) -> M4 {
    let mut out = [[dd(0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = dd(m[i][j]);
        }
    }
    out
}

/// `Ωσ` for the two-mode form; exact in `f64` since it only permutes and
/// negates entries.
fn omega_times(m: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for k in 0..2 {
        for j in 0..4 {
            out[2 * k][j] = m[2 * k + 1][j];
            out[2 * k + 1][j] = -m[2 * k][j];
        }
    }
    out
}

/// `Σ_k a_k b_k` in double-double with exact products.
fn dot_dd(a: [f64; 4], b: [f64; 4]) -> Dd {
    let mut acc = Dd::new_mul(a[0], b[0]);
    for k in 1..4 {
        acc += Dd::new_mul(a[k], b[k]);
    }
    acc
}

/// `A + B + 2C` of a two-mode matrix, in double-double.
fn seralian(m: &M4) -> Dd {
    let a = det2(m[0][0], m[0][1], m[1][0], m[1][1]);
    let b = det2(m[2][2], m[2][3], m[3][2], m[3][3]);
    let c = det2(m[0][2], m[0][3], m[1][2], m[1][3]);
    a + b + c * 2.0
}

fn as_array4(v: &[f64]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = v[4 * i + j];
        }
    }
    out
}

/// `F` without the displacement factor, for two-mode matrices.
fn two_mode_f0(s1: &[[f64; 4]; 4], s2: &[[f64; 4]; 4]) -> f64 {
    let d1 = to_dd4(s1);
    let d2 = to_dd4(s2);

    let mut sum = [[dd(0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            sum[i][j] = Dd::new_add(s1[i][j], s2[i][j]);
        }
    }
    let delta = det4(&sum) / 16.0;

    // Γ = det(Ωσ1Ωσ2 − I) / 16.
    let o1 = omega_times(s1);
    let o2 = omega_times(s2);
    let mut prod = [[dd(0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let col = [o2[0][j], o2[1][j], o2[2][j], o2[3][j]];
            prod[i][j] = dot_dd(o1[i], col);
            if i == j {
                prod[i][j] -= 1.0;
            }
        }
    }
    let gamma = (det4(&prod) / 16.0).max(dd(0.0));

    // Λ = det(σ1 + iΩ) det(σ2 + iΩ) / 16, each factor being D − Δ + 1.
    let l1 = det4(&d1) - seralian(&d1) + 1.0;
    let l2 = det4(&d2) - seralian(&d2) + 1.0;
    let lambda = (l1 * l2 / 16.0).max(dd(0.0));

    let s = gamma.sqrt() + lambda.sqrt();
    let disc = (s * s - delta).max(dd(0.0));
    ((s + disc.sqrt()) / delta).hi()
}

/// `F` without the displacement factor, for single-mode matrices.
fn single_mode_f0(s1: &Matrix2<f64>, s2: &Matrix2<f64>) -> f64 {
    let det = |m: &Matrix2<f64>| Dd::new_mul(m[(0, 0)], m[(1, 1)]) - Dd::new_mul(m[(0, 1)], m[(1, 0)]);
    let sum = |i: usize, j: usize| Dd::new_add(s1[(i, j)], s2[(i, j)]);
    let big_delta = sum(0, 0) * sum(1, 1) - sum(0, 1) * sum(1, 0);
    let small_delta = ((det(s1) - 1.0) * (det(s2) - 1.0)).max(dd(0.0));
    let root = (big_delta + small_delta).sqrt();
    // 2 / (√(Δ+δ) − √δ), rationalized.
    ((root + small_delta.sqrt()) * 2.0 / big_delta).hi()
}

/// `exp(−½ δᵀ (σ1 + σ2)⁻¹ δ)` with `δ = ε1 − ε2`.
fn displacement_factor(a: &GaussianState, b: &GaussianState) -> Result<f64> {
    let da = a.displacement();
    let db = b.displacement();
    if da.iter().zip(db).all(|(x, y)| x == y) {
        return Ok(1.0);
    }
    let sa = a.sigma().to_row_major();
    let sb = b.sigma().to_row_major();
    let quad = match a.n_modes() {
        1 => {
            let m = Matrix2::from_row_slice(&sa) + Matrix2::from_row_slice(&sb);
            let d = Vector2::new(da[0] - db[0], da[1] - db[1]);
            let x = m
                .cholesky()
                .ok_or_else(|| Error::NumericalFailure("σ1 + σ2 not positive definite".into()))?
                .solve(&d);
            d.dot(&x)
        }
        _ => {
            let m = Matrix4::from_row_slice(&sa) + Matrix4::from_row_slice(&sb);
            let d = Vector4::from_iterator(da.iter().zip(db).map(|(x, y)| x - y));
            let x = m
                .cholesky()
                .ok_or_else(|| Error::NumericalFailure("σ1 + σ2 not positive definite".into()))?
                .solve(&d);
            d.dot(&x)
        }
    };
    Ok((-0.5 * quad).exp())
}

/// Uhlmann fidelity `(Tr √(√ρ1 ρ2 √ρ1))²` of two Gaussian states.
pub fn gaussian_fidelity(s1: &GaussianState, s2: &GaussianState) -> Result<f64> {
    if s1.n_modes() != s2.n_modes() {
        return Err(Error::ModeMismatch {
            left: s1.n_modes(),
            right: s2.n_modes(),
        });
    }
    let f0 = match s1.n_modes() {
        1 => single_mode_f0(&s1.sigma().block(0, 0), &s2.sigma().block(0, 0)),
        _ => two_mode_f0(
            &as_array4(&s1.sigma().to_row_major()),
            &as_array4(&s2.sigma().to_row_major()),
        ),
    };
    if !f0.is_finite() {
        return Err(Error::NumericalFailure(format!("fidelity evaluated to {f0}")));
    }
    let f = f0 * displacement_factor(s1, s2)?;
    Ok(f.clamp(0.0, 1.0))
}
