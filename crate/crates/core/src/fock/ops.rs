use faer::{c64, Mat};

const ZERO: c64 = c64 { re: 0.0, im: 0.0 };

/// Annihilation operator on `dim` levels.
pub(super) fn ladder(dim: usize) -> Mat<c64> {
    Mat::from_fn(dim, dim, |i, j| {
        if j == i + 1 {
            c64::new((j as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

/// `(z/2)(a² − a†²)` on `dim` levels.
pub(super) fn squeeze_generator(dim: usize, z: f64) -> Mat<c64> {
    Mat::from_fn(dim, dim, |i, j| {
        if j == i + 2 {
            c64::new(0.5 * z * ((i + 1) as f64 * (i + 2) as f64).sqrt(), 0.0)
        } else if i == j + 2 {
            c64::new(-0.5 * z * ((j + 1) as f64 * (j + 2) as f64).sqrt(), 0.0)
        } else {
            ZERO
        }
    })
}

fn norm1(m: &Mat<c64>) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Scaling and squaring with a truncated Taylor series.
pub(super) fn dense_expm(g: &Mat<c64>) -> Mat<c64> {
    let n = g.nrows();
    let norm = norm1(g);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings as i32);
    let a = Mat::from_fn(n, n, |i, j| g[(i, j)] * scale);
    let mut result = Mat::<c64>::identity(n, n);
    let mut term = Mat::<c64>::identity(n, n);
    for k in 1..=30 {
        term = &term * &a;
        let inv = 1.0 / k as f64;
        term = Mat::from_fn(n, n, |i, j| term[(i, j)] * inv);
        result = &result + &term;
        if norm1(&term) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

fn vec_norm(v: &[c64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `exp(G)·v` for an operator given by its action, where `bound ≥ ‖G‖`.
pub(super) fn vec_expm_action(v: &[c64], bound: f64, apply: impl Fn(&[c64]) -> Vec<c64>) -> Vec<c64> {
    let steps = bound.ceil().max(1.0) as usize;
    let h = 1.0 / steps as f64;
    let mut out = v.to_vec();
    for _ in 0..steps {
        let scale = vec_norm(&out);
        let mut term = out.clone();
        let mut acc = out.clone();
        for k in 1..=60 {
            let next = apply(&term);
            let f = h / k as f64;
            term = next.into_iter().map(|z| z * f).collect();
            for (a, t) in acc.iter_mut().zip(&term) {
                *a += *t;
            }
            if vec_norm(&term) < 1e-17 * scale {
                break;
            }
        }
        out = acc;
    }
    out
}

/// Sparse ladder actions on a two-mode amplitude vector indexed `m·dim + n`.
pub(super) struct Ladder2 {
    dim: usize,
    sqrt: Vec<f64>,
}

impl Ladder2 {
    pub(super) fn new(dim: usize) -> Self {
        Self {
            dim,
            sqrt: (0..=dim + 1).map(|k| (k as f64).sqrt()).collect(),
        }
    }

    /// `r(a†b† − ab)·v`.
    pub(super) fn tmsv_generator(&self, v: &[c64], r: f64) -> Vec<c64> {
        let d = self.dim;
        let s = &self.sqrt;
        let mut out = vec![ZERO; d * d];
        for m in 0..d {
            for n in 0..d {
                let mut acc = ZERO;
                if m > 0 && n > 0 {
                    acc += v[(m - 1) * d + n - 1] * (s[m] * s[n]);
                }
                if m + 1 < d && n + 1 < d {
                    acc -= v[(m + 1) * d + n + 1] * (s[m + 1] * s[n + 1]);
                }
                out[m * d + n] = acc * r;
            }
        }
        out
    }

    /// `(z/2)(a² − a†²) ⊗ I·v`.
    pub(super) fn squeeze_a_generator(&self, v: &[c64], z: f64) -> Vec<c64> {
        let d = self.dim;
        let s = &self.sqrt;
        let mut out = vec![ZERO; d * d];
        for m in 0..d {
            let up = if m + 2 < d { s[m + 1] * s[m + 2] } else { 0.0 };
            let down = if m >= 2 { s[m] * s[m - 1] } else { 0.0 };
            for n in 0..d {
                let mut acc = ZERO;
                if up != 0.0 {
                    acc += v[(m + 2) * d + n] * up;
                }
                if down != 0.0 {
                    acc -= v[(m - 2) * d + n] * down;
                }
                out[m * d + n] = acc * (0.5 * z);
            }
        }
        out
    }
}
