//! Least-squares fit of `A1·exp(B1·x) + A2`.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct FitResult {
    pub A1: f64,
    pub A2: f64,
    pub B1: f64,
    /// Mean squared residual.
    pub mse: f64,
    /// Standard deviation of the squared residuals.
    pub delta_mse: f64,
    pub n_a: f64,
    pub n_points: usize,
    pub converged: bool,
}

impl FitResult {
    pub fn eval(&self, x: f64) -> f64 {
        self.A1 * (self.B1 * x).exp() + self.A2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Starting `(A1, A2, B1)`; chosen from the data when absent.
    pub init: Option<(f64, f64, f64)>,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            init: None,
            max_iter: 200,
            tol: 1e-12,
        }
    }
}

const DAMPING_CEILING: f64 = 1e12;

fn loss(points: &[(f64, f64)], p: &Vector3<f64>) -> f64 {
    points
        .iter()
        .map(|&(x, y)| {
            let r = y - (p[0] * (p[2] * x).exp() + p[1]);
            r * r
        })
        .sum::<f64>()
        / points.len() as f64
}

/// For fixed `B1` the model is linear in `(A1, A2)`.
fn linear_part(points: &[(f64, f64)], b1: f64) -> Option<(f64, f64)> {
    let mut m = Matrix2::zeros();
    let mut v = Vector2::zeros();
    for &(x, y) in points {
        let e = (b1 * x).exp();
        let row = Vector2::new(e, 1.0);
        m += row * row.transpose();
        v += row * y;
    }
    let sol = m.lu().solve(&v)?;
    Some((sol[0], sol[1]))
}

/// Scans `B1` on a coarse grid and keeps the best linear fit.
fn initial_guess(points: &[(f64, f64)]) -> Vector3<f64> {
    let span = points.iter().map(|p| p.0.abs()).fold(0.0, f64::max).max(1e-12);
    let mut best = (f64::INFINITY, Vector3::new(1.0, 0.0, 1.0));
    for k in -40..=40 {
        if k == 0 {
            continue;
        }
        let b1 = k as f64 * 0.25 / span;
        if let Some((a1, a2)) = linear_part(points, b1) {
            let p = Vector3::new(a1, a2, b1);
            let l = loss(points, &p);
            if l.is_finite() && l < best.0 {
                best = (l, p);
            }
        }
    }
    best.1
}

/// Damped Gauss–Newton with step halving.
pub fn fit_exponential(points: &[(f64, f64)], n_a: f64, opts: &FitOptions) -> Result<FitResult> {
    if points.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "need at least 4 points, got {}",
            points.len()
        )));
    }
    if opts.max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be >= 1".into()));
    }
    if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
        return Err(Error::InvalidParameter("non-finite point".into()));
    }
    let n = points.len() as f64;
    let mean = points.iter().map(|p| p.1).sum::<f64>() / n;
    let spread = points.iter().map(|p| (p.1 - mean).abs()).fold(0.0, f64::max);
    if spread <= 1e-14 * mean.abs().max(1.0) {
        // Flat data: the exponential term is unidentifiable.
        let b1 = opts.init.map_or(0.0, |i| i.2);
        return Ok(finish(points, Vector3::new(0.0, mean, b1), n_a, true));
    }

    let mut p = match opts.init {
        Some((a1, a2, b1)) => Vector3::new(a1, a2, b1),
        None => initial_guess(points),
    };
    let mut current = loss(points, &p);
    let mut converged = false;
    let mut lambda = 0.0;

    for _ in 0..opts.max_iter {
        let mut jtj = Matrix3::zeros();
        let mut jtr = Vector3::zeros();
        for &(x, y) in points {
            let e = (p[2] * x).exp();
            let r = y - (p[0] * e + p[1]);
            let j = Vector3::new(e, 1.0, p[0] * x * e);
            jtj += j * j.transpose();
            jtr += j * r;
        }

        let mut accepted = false;
        loop {
            let mut a = jtj;
            for k in 0..3 {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-300);
            }
            if let Some(delta) = a.cholesky().map(|c| c.solve(&jtr)) {
                let mut t = 1.0;
                while t > 1e-10 {
                    let trial = p + delta * t;
                    let l = loss(points, &trial);
                    if l.is_finite() && l <= current {
                        let step = (delta * t).norm();
                        p = trial;
                        let improvement = current - l;
                        current = l;
                        accepted = true;
                        if step < opts.tol * (1.0 + p.norm()) || improvement <= 1e-15 * current {
                            converged = true;
                        }
                        break;
                    }
                    t *= 0.5;
                }
            }
            if accepted {
                lambda *= 0.1;
                if lambda < 1e-12 {
                    lambda = 0.0;
                }
                break;
            }
            lambda = if lambda == 0.0 { 1e-6 } else { lambda * 10.0 };
            if lambda > DAMPING_CEILING {
                break;
            }
        }

        if !accepted {
            if jtj.determinant().abs() <= f64::EPSILON * jtj.norm().powi(3) {
                return Err(Error::FitDegenerate(
                    "normal equations singular at the damping ceiling".into(),
                ));
            }
            // No descent direction left: a stationary point.
            converged = true;
        }
        if converged {
            break;
        }
    }
    Ok(finish(points, p, n_a, converged))
}

fn finish(points: &[(f64, f64)], p: Vector3<f64>, n_a: f64, converged: bool) -> FitResult {
    let sq: Vec<f64> = points
        .iter()
        .map(|&(x, y)| {
            let r = y - (p[0] * (p[2] * x).exp() + p[1]);
            r * r
        })
        .collect();
    let n = sq.len() as f64;
    let mse = sq.iter().sum::<f64>() / n;
    let var = sq.iter().map(|s| (s - mse).powi(2)).sum::<f64>() / n;
    FitResult {
        A1: p[0],
        A2: p[1],
        B1: p[2],
        mse,
        delta_mse: var.sqrt(),
        n_a,
        n_points: points.len(),
        converged,
    }
}
