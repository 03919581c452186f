//! Exact blow-up calculus for genus-zero Gromov–Witten invariants.
//!
//! - [`lattice`]: curve and divisor lattices of `P^n`, its point blow-up and
//!   blow-ups along submanifolds, with `p!` and first Chern classes.
//! - [`index`]: Fredholm-index bookkeeping across a symplectic cut.
//! - [`oracle`]: numeric invariants from the Kontsevich and WDVV recursions.
//! - [`rules`]: blow-up identities as gated query rewrites.

pub mod index;
pub mod lattice;
pub mod oracle;
pub mod rational;
pub mod rules;

pub use lattice::{BlowupLocus, CurveClass, DivisorClass, FormalDivisor, Manifold, ManifoldKind};
pub use oracle::{Evaluation, Insertion, InvariantQuery, MemoTable, Oracle};
pub use rational::ExactRational;
pub use rules::{Rule, RuleApplication, Verdict};
