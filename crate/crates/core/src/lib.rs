//! Vectorial Boolean functions over F_2: finite-field arithmetic, Walsh and
//! differential spectra, and checks of the D-property
//! {F(x)+F(y)+F(z)+F(x+y+z)} = F_2^m.

pub mod catalog;
pub mod cli;
pub mod dproperty;
pub mod error;
pub mod formats;
pub mod gf2n;
mod limits;
pub mod reproduce;
pub mod spectra;
pub mod vbf;

pub use error::{Error, Result};
pub use limits::ENV_MAX_BITS;
