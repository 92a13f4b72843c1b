pub mod channels;
pub mod cli;
pub mod error;
pub mod fock;
pub mod metrology;
pub mod montecarlo;
pub mod quantifiers;
pub mod states;
pub mod symplectic;

pub use error::{Error, Result};
