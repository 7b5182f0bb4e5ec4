//! Exact computation in quantum function algebras R_q[G] and quantum Schubert cell
//! algebras U^-[w]: quantum minors, H-primes, the Ore sets attached to them, and
//! executable checks of their disjointness and separation properties.

pub mod error;
pub mod qscalar;
pub mod linalg;
pub mod rootdata;
pub mod weyl;
pub mod cache;
pub mod uq;
pub mod hwmod;
pub mod schubert;
pub mod flagcoord;
pub mod verdict;
pub mod harness;

pub use error::{Error, Result};
pub use qscalar::{qfact, qint, RatQ};
pub use verdict::Verdict;
