//! Two-mode interferometry built on SU(2) and SU(1,1) representations:
//! special functions, intelligent and coherent states, Fock-space embeddings,
//! interferometer sensitivity and scaling analysis.

pub mod analysis;
pub mod eigen;
pub mod error;
pub mod fock;
pub mod half;
pub mod interferometer;
pub mod specfun;
pub mod state;
pub mod su11;
pub mod su2;
pub mod table;
pub mod verify;

pub use error::{Error, Result};
pub use half::HalfInt;

/// Guide chapters, compiled as doctests so their snippets stay current.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    struct Overview;
    #[doc = include_str!("../../../book/src/intelligent-states.md")]
    struct IntelligentStates;
    #[doc = include_str!("../../../book/src/su2.md")]
    struct Su2;
    #[doc = include_str!("../../../book/src/su11.md")]
    struct Su11;
    #[doc = include_str!("../../../book/src/fock.md")]
    struct Fock;
    #[doc = include_str!("../../../book/src/interferometers.md")]
    struct Interferometers;
    #[doc = include_str!("../../../book/src/analysis.md")]
    struct Analysis;
    #[doc = include_str!("../../../book/src/verification.md")]
    struct Verification;
}
