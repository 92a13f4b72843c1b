//! Phase-averaged QFI of the extremal probes against the closed-form curves.

use gqfi::metrology::{avg_precision_bound, avg_qfi, bound, qfi_theta, BoundCurve, QfiConfig};
use gqfi::states;

fn main() -> gqfi::Result<()> {
    let cfg = QfiConfig::default();
    println!(
        "{:>5} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "n_A", "squeezed", "upper", "thermal", "lower", "coherent"
    );
    for n in [0.5f64, 1.0, 2.0, 5.0] {
        let sq = avg_qfi(&states::pure_squeezed(n.sqrt().asinh(), 0.0, 0.0, 0.0)?, &cfg)?;
        let th = avg_qfi(&states::thermal(n)?, &cfg)?;
        let co = avg_qfi(&states::coherent(2.0 * n.sqrt(), 0.0)?, &cfg)?;
        println!(
            "{n:>5} {sq:>12.6} {:>12.6} {th:>12.6} {:>12.6} {co:>12.6}",
            bound(BoundCurve::UpperSingle, n, None)?,
            bound(BoundCurve::LowerSingle, n, None)?,
        );
    }

    let s = states::pure_squeezed(0.6, 0.0, 0.0, 0.0)?;
    for theta in [0.0, 0.4, 0.8, 1.2] {
        println!("H(theta = {theta}) = {:.6}", qfi_theta(&s, theta, &cfg)?);
    }
    let h = avg_qfi(&s, &cfg)?;
    println!("precision bound after 1000 shots: {:.6}", avg_precision_bound(h, 1000)?);
    Ok(())
}
