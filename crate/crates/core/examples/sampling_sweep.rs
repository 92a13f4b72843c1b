//! A seeded sweep over one class, summarized per class bound.

use gqfi::metrology::{bound, BoundCurve, QfiConfig};
use gqfi::montecarlo::run_sweep;
use gqfi::states::StateClass;

fn main() -> gqfi::Result<()> {
    let cfg = QfiConfig::default();
    let n_a = 3.0;
    for class in [
        StateClass::SingleGeneral,
        StateClass::SeparableStandard,
        StateClass::Discordant,
    ] {
        let recs = run_sweep(class, n_a, 2_000, 7, &cfg)?;
        let (min, max) = recs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
            (lo.min(r.avg_qfi), hi.max(r.avg_qfi))
        });
        println!("{:<20} min {min:>9.4}  max {max:>9.4}", class.name());
    }
    for curve in [
        BoundCurve::LowerSingle,
        BoundCurve::CoherentMax,
        BoundCurve::SeparableMax,
        BoundCurve::UpperSingle,
    ] {
        println!("{:<20} {:>9.4}", curve.name(), bound(curve, n_a, None)?);
    }
    Ok(())
}
