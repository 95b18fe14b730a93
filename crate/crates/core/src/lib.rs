//! Exact computations for filtered connected graded Hopf algebras carrying a
//! group action: sparse linear algebra over `F_p` and `Q`, bialgebra windows
//! and their axiom checks, orbit probes, primitive-sequence extraction and
//! growth certificates.

pub mod action;
pub mod error;
pub mod field;
pub mod format;
pub mod growth;
pub mod hopf;
pub mod linalg;
pub mod models;

pub use error::{Error, ErrorKind, Result};
pub use field::{FieldSpec, Scalar};
pub use num_rational::BigRational;
