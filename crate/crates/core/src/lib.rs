//! Solving zero-dimensional polynomial systems with truncated normal forms.
//!
//! The pipeline builds a resultant map, takes its cokernel, selects a basis of the
//! quotient, forms multiplication matrices and reads the roots off a Schur form. Systems
//! whose quotient carries positive-dimensional components go through an eigenvalue
//! pencil instead (see [`rootfind::solve_nongeneric`]).
//!
//! ```
//! use tnf_core::prelude::*;
//!
//! let text = r#"{"nvars": 1, "basis": "monomial", "polys": [
//!     {"terms": [{"exp": [2], "re": 1.0, "im": 0.0}, {"exp": [0], "re": -1.0, "im": 0.0}]}]}"#;
//! let system = parse_system(text).unwrap();
//! let sol = solve(&system, &SolveConfig::default()).unwrap();
//! assert_eq!(sol.roots.roots.len(), 2);
//! ```

pub mod cokernel;
pub mod error;
pub mod linalg;
pub mod polyring;
pub mod random;
pub mod resmap;
pub mod rootfind;
pub mod solver;
pub mod tnf;
pub mod verify;

pub use num_complex::Complex64 as c64;

/// The types most callers need.
pub mod prelude {
    pub use crate::c64;
    pub use crate::error::{Result, TnfError};
    pub use crate::polyring::{parse_system, BasisKind, Exponent, MultiPoly, PolySystem};
    pub use crate::rootfind::{CokernelMethod, Root, RootSet, SolvePath};
    pub use crate::solver::{solve, BasisSelect, ColumnMode, PathChoice, SolveConfig, Solution};
}
