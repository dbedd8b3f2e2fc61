//! p-angular distance bounds in finite-dimensional real normed spaces.
//!
//! * [`vectorspace`]: vectors and the `lq`, `linf` and weighted Euclidean norms.
//! * [`pangular`]: the p-angular distance, the angle `A(x, y)` and the bound family.
//! * [`extremum`]: numerical analysis of the auxiliary function `f(p)`.
//! * [`certify`]: violation search, Lorch's condition and the scaling sequence.
//! * [`cli`]: the `pangle` command-line front end and its reports.

pub mod certify;
pub mod cli;
pub mod error;
pub mod extremum;
pub mod pangular;
pub mod sampling;
pub mod vectorspace;

pub use error::{Error, Result};
pub use pangular::{BoundKind, BoundReport, PExponent, QExponent};
pub use vectorspace::{NormKind, NormSpec, Vector};
