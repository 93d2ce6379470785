//! Exact-arithmetic toolkit for monomial ideals.
//!
//! The crate computes integral closures of monomial ideals through their
//! Newton polyhedra (with exact rational certificates), multigraded Betti
//! tables through upper Koszul simplicial homology, Castelnuovo-Mumford
//! regularity, and structural classifications (complete intersection,
//! stable, strongly stable, Gorenstein). On top of those primitives sits a
//! verification harness that checks the regularity comparison
//! `reg(closure(I)) <= reg(I)` together with a catalog of related
//! inequalities over hand-entered ideals and reproducible random families.
//!
//! Everything is exact: no floating point is used anywhere in a decision.
//! Linear programs run in `BigRational`, homology ranks come from
//! fraction-free integer elimination, and all combinatorics are over `u64`
//! exponents with checked arithmetic.

pub mod betti;
pub mod budget;
pub mod classify;
pub mod error;
pub mod homology;
pub mod ideal;
pub mod newton;
pub(crate) mod simplex;
pub mod verify;

pub use error::{Error, Result};
pub use ideal::{ExponentVector, MonomialIdeal};
