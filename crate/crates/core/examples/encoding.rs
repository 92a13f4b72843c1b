//! The rotation-then-squeeze encoding acting on mode A of a probe.

use gqfi::channels::{apply, encoding_map, rotation, squeezer};
use gqfi::states;

fn main() -> gqfi::Result<()> {
    let probe = states::coherent(1.0, 0.5)?;
    let (eps, theta) = (0.2, 0.9);

    let encoded = encoding_map(&probe, eps, theta);
    println!("encoded sigma =\n{}", encoded.sigma().matrix());
    println!("encoded displacement = {:?}", encoded.displacement());

    // Same moments as rotating first and then squeezing, up to a final rotation.
    let stepwise = apply(&apply(&probe, &rotation(theta), 0)?, &squeezer(eps), 0)?;
    println!("stepwise photon number = {:.9}", stepwise.mean_photon_per_mode()[0]);
    println!("encoded photon number  = {:.9}", encoded.mean_photon_per_mode()[0]);

    let entangled = states::tmsv(0.7)?;
    let out = encoding_map(&entangled, eps, theta);
    println!(
        "mode B block unchanged: {}",
        out.sigma().block(1, 1) == entangled.sigma().block(1, 1)
    );
    Ok(())
}
