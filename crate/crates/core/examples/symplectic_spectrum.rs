//! Symplectic spectrum, invariants and partial transpose of a two-mode state.

use gqfi::states;
use gqfi::symplectic::{
    invariants, is_bona_fide, partial_transpose, pt_min_symplectic_eigenvalue, symplectic_eigenvalues,
};

fn main() -> gqfi::Result<()> {
    let state = states::tmsv(0.6)?;
    let sigma = state.sigma();
    println!("sigma =\n{}", sigma.matrix());
    println!("symplectic eigenvalues: {:?}", symplectic_eigenvalues(sigma));
    println!("bona fide: {}", is_bona_fide(sigma, 1e-9));

    let inv = invariants(sigma)?;
    println!("A = {:.6}, B = {:.6}, C = {:.6}, D = {:.6}", inv.A, inv.B, inv.C, inv.D);

    let pt = partial_transpose(sigma)?;
    println!("PT spectrum: {:?}", symplectic_eigenvalues(&pt));
    println!(
        "closed-form smallest PT eigenvalue: {:.9}",
        pt_min_symplectic_eigenvalue(sigma)?
    );
    Ok(())
}
