//! Decides when two regular wreath products `A1 Wr B1` and `A2 Wr B2`
//! generate the same variety of groups, for non-trivial nilpotent groups
//! `A1`, `A2` of a common finite exponent and non-trivial abelian groups
//! `B1`, `B2` of a common finite exponent whose primes all divide the
//! active exponent.
//!
//! Under those hypotheses the verdict depends only on the passive pair:
//! the varieties coincide exactly when, for every prime `p` dividing the
//! passive exponent, the p-primary components of `B1` and `B2` are
//! equivalent in the sense implemented by [`abelian::PrimaryComponent`].
//! The [`decider`] module packages the hypothesis checks and the verdict;
//! [`cardinal`] and [`abelian`] provide the symbolic side; [`group`] and
//! [`laws`] provide a concrete finite-group engine and a brute-force
//! group-law oracle used to cross-check the symbolic machinery.

pub mod abelian;
pub(crate) mod arith;
pub mod cardinal;
pub mod decider;
pub mod group;
pub mod laws;

pub use abelian::{BoundedAbelian, DecompositionError, PrimaryComponent, PrimaryFactor};
pub use cardinal::{Cardinal, CardinalError};
pub use decider::{NilpotentDescriptor, Outcome, Verdict, Violation};
pub use group::{ConcreteGroup, GroupBudget, GroupError, GroupInvariants, Nilpotency, Solubility};
pub use laws::{InvariantProbe, LawBudget, LawError, ScanReport, Word};
