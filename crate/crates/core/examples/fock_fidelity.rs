//! Gaussian closed forms next to the truncated Fock-space computation.

use gqfi::fock::{build_fock, entropy_fock, fidelity_fock, negativity_fock, FockRecipe};
use gqfi::metrology::gaussian_fidelity;
use gqfi::quantifiers::{log_negativity, von_neumann_entropy};

fn main() -> gqfi::Result<()> {
    let a = FockRecipe::Coherent { re: 1.0, im: 0.0 };
    let b = FockRecipe::Thermal { n_bar: 0.5 };
    let (ra, rb) = (build_fock(&a, 40)?, build_fock(&b, 40)?);
    println!("trace deficits: {:.2e}, {:.2e}", ra.trace_deficit(), rb.trace_deficit());
    println!(
        "fidelity  fock {:.10}  gaussian {:.10}",
        fidelity_fock(&ra, &rb)?,
        gaussian_fidelity(&a.gaussian()?, &b.gaussian()?)?
    );
    println!(
        "entropy   fock {:.10}  gaussian {:.10}",
        entropy_fock(&rb)?,
        von_neumann_entropy(&b.gaussian()?)?
    );

    let t = FockRecipe::Tmsv { r: 0.5 };
    let rt = build_fock(&t, 30)?;
    println!(
        "E_N       fock {:.10}  gaussian {:.10}",
        negativity_fock(&rt)?,
        log_negativity(&t.gaussian()?)?
    );
    Ok(())
}
