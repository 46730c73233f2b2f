//! Convex subsets of free semimodules over a semiring, the weak distributive
//! law between the free-semimodule monad and the powerset monad, and the
//! composed monad of finitely generated convex sets with its equational
//! theory.
//!
//! All arithmetic is exact. The supported semirings are [`semiring::Bool`],
//! [`semiring::QPlus`] and [`semiring::Nat`].

pub mod convexset;
pub mod distlaw;
pub mod error;
pub mod finsupp;
pub mod lifting;
pub mod monad_cf;
pub mod report;
pub mod sampling;
pub mod semiring;
pub mod theory;

pub use convexset::ConvexSet;
pub use error::{Error, Result};
pub use finsupp::{BasisElement, FinSupp, SAlgebra};
pub use semiring::{Bool, Nat, QPlus, Semiring, SemiringKind};
