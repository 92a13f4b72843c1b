use super::sweep::SweepRecord;
use crate::error::{Error, Result};

pub const DEFAULT_BINS: usize = 25;

/// Minimum of `y` within equal-width bins of `x`, reported at bin midpoints.
/// Empty bins are skipped.
pub fn lower_envelope_xy(points: &[(f64, f64)], n_bins: usize) -> Result<Vec<(f64, f64)>> {
    if n_bins < 5 {
        return Err(Error::InvalidParameter(format!("n_bins = {n_bins} must be >= 5")));
    }
    if points.is_empty() {
        return Err(Error::InsufficientData("no points".into()));
    }
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, _)| {
            (lo.min(x), hi.max(x))
        });
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidParameter("non-finite abscissa".into()));
    }
    if hi == lo {
        let min = points.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        return Ok(vec![(lo, min)]);
    }
    let width = (hi - lo) / n_bins as f64;
    let mut mins = vec![f64::INFINITY; n_bins];
    for &(x, y) in points {
        let k = (((x - lo) / width) as usize).min(n_bins - 1);
        mins[k] = mins[k].min(y);
    }
    let out: Vec<(f64, f64)> = mins
        .iter()
        .enumerate()
        .filter(|(_, m)| m.is_finite())
        .map(|(k, &m)| (lo + (k as f64 + 0.5) * width, m))
        .collect();
    if 2 * out.len() < n_bins {
        return Err(Error::InsufficientData(format!(
            "only {} of {n_bins} bins are occupied",
            out.len()
        )));
    }
    Ok(out)
}

/// Lower envelope of `avg_qfi` against logarithmic negativity.
pub fn lower_envelope(records: &[SweepRecord], n_bins: usize) -> Result<Vec<(f64, f64)>> {
    let points = records
        .iter()
        .map(|r| {
            r.log_negativity
                .map(|e| (e, r.avg_qfi))
                .ok_or_else(|| Error::InvalidParameter(format!("record {} has no log-negativity", r.index)))
        })
        .collect::<Result<Vec<_>>>()?;
    lower_envelope_xy(&points, n_bins)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_abscissae_give_global_min() {
        let pts = [(0.5, 3.0), (0.5, 2.0), (0.5, 4.0)];
        assert_eq!(lower_envelope_xy(&pts, 10).unwrap(), vec![(0.5, 2.0)]);
    }

    #[test]
    fn reproduces_curve_at_midpoints() {
        let f = |x: f64| 0.3 * (1.7 * x).exp() + 2.0;
        let n_bins = 10;
        let mut pts = vec![(0.0, 50.0), (1.0, 50.0)];
        for k in 0..n_bins {
            let mid = (k as f64 + 0.5) / n_bins as f64;
            pts.push((mid, f(mid)));
            pts.push((mid + 0.01, f(mid) + 1.0));
        }
        let env = lower_envelope_xy(&pts, n_bins).unwrap();
        assert_eq!(env.len(), n_bins);
        for (x, y) in env {
            assert!((y - f(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn envelope_is_below_its_bin() {
        let pts: Vec<(f64, f64)> = (0..500)
            .map(|i| {
                let x = (i as f64 * 0.618).fract();
                (x, (i as f64 * 0.377).fract() + x)
            })
            .collect();
        let env = lower_envelope_xy(&pts, 20).unwrap();
        let width = 1.0 / 20.0;
        for (mid, m) in env {
            for &(x, y) in &pts {
                if (x - mid).abs() < 0.5 * width - 1e-12 {
                    assert!(m <= y);
                }
            }
        }
    }

    #[test]
    fn sparse_bins_rejected() {
        let pts = [(0.0, 1.0), (1.0, 1.0)];
        assert!(matches!(lower_envelope_xy(&pts, 10), Err(Error::InsufficientData(_))));
    }
}
