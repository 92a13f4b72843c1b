//! Entropy, coherence and logarithmic negativity of a few states.

use gqfi::quantifiers::{coherence, log_negativity, von_neumann_entropy};
use gqfi::states;

fn main() -> gqfi::Result<()> {
    for (name, s) in [
        ("thermal(1)", states::thermal(1.0)?),
        ("coherent(2, 0)", states::coherent(2.0, 0.0)?),
        ("squeezed(0.8)", states::pure_squeezed(0.8, 0.0, 0.0, 0.0)?),
        ("squeezed_thermal", states::squeezed_thermal(2.0, 0.5, 0.0, 1.0, 0.0)?),
    ] {
        println!(
            "{name:<18} S = {:.6} bits  C = {:.6} bits",
            von_neumann_entropy(&s)?,
            coherence(&s)?
        );
    }

    for r in [0.0, 0.25, 0.5, 1.0] {
        let s = states::tmsv(r)?;
        println!("tmsv({r:<4}) E_N = {:.6}  (2r = {:.6})", log_negativity(&s)?, 2.0 * r);
    }
    Ok(())
}
