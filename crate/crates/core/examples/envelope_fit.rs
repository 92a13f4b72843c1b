//! Lower envelope of an entangled sweep and its exponential fit.

use gqfi::metrology::QfiConfig;
use gqfi::montecarlo::{fit_exponential, lower_envelope, run_sweep, FitOptions, DEFAULT_BINS};
use gqfi::states::StateClass;

fn main() -> gqfi::Result<()> {
    let n_a = 3.0;
    let recs = run_sweep(StateClass::EntangledStandard, n_a, 5_000, 2024, &QfiConfig::default())?;
    let envelope = lower_envelope(&recs, DEFAULT_BINS)?;
    for (x, y) in &envelope {
        println!("E_N = {x:.4}  min avg_qfi = {y:.4}");
    }
    let fit = fit_exponential(&envelope, n_a, &FitOptions::default())?;
    println!(
        "A1 = {:.4}, A2 = {:.4}, B1 = {:.4}, mse = {:.3e}, converged = {}",
        fit.A1, fit.A2, fit.B1, fit.mse, fit.converged
    );
    let above = recs
        .iter()
        .filter(|r| fit.eval(r.log_negativity.unwrap_or(0.0)) > r.avg_qfi)
        .count();
    println!("points below the fitted curve: {above} of {}", recs.len());
    Ok(())
}
