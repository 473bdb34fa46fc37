//! Column-pivoted QR and polar factorization.

mod cpqr;
mod polar;

pub use cpqr::{cpqr, CpqrResult};
pub use polar::{polar, PolarResult};
