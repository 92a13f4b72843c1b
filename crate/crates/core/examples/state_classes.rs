//! Constructs one state per named constructor and one sample per class.

use gqfi::montecarlo::sample_class;
use gqfi::states::{self, StateClass};

fn main() -> gqfi::Result<()> {
    let named = [
        ("vacuum", states::vacuum(1)?),
        ("thermal(1.5)", states::thermal(1.5)?),
        ("coherent(2, 0)", states::coherent(2.0, 0.0)?),
        ("pure_squeezed(0.5)", states::pure_squeezed(0.5, 0.0, 0.0, 0.0)?),
        ("squeezed_thermal", states::squeezed_thermal(1.5, 0.3, 0.4, 0.0, 0.0)?),
        ("tmsv(0.5)", states::tmsv(0.5)?),
    ];
    for (name, s) in &named {
        println!("{name:<20} modes = {}  n = {:?}", s.n_modes(), s.mean_photon_per_mode());
    }

    for class in StateClass::ALL {
        let s = &sample_class(class, 2.0, 1, 42)?[0];
        println!("{:<20} n_A = {:.12}", class.name(), s.mean_photon_per_mode()[0]);
    }
    Ok(())
}
