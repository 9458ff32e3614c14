//! Exact-arithmetic computational algebra around generating functions and
//! characters: truncated bivariate power series, Hilbert-scheme Poincaré
//! series, Fock-space operator calculus on colored super-partitions, affine
//! ADE Kac-Moody characters, the McKay correspondence for finite subgroups of
//! SU(2), and Hecke operators on modular-form q-expansions.
//!
//! The point of the crate is cross-verification: every major quantity is
//! computed by at least two independent routes (product formula vs. state
//! enumeration, Freudenthal recursion vs. Weyl-Kac sum, character tables vs.
//! Dynkin combinatorics, operator ratios vs. brute-force expansions), and the
//! [`verify`] module packages those comparisons for tests and the CLI.

pub mod affine;
pub mod fock;
pub mod goettsche;
pub mod hecke;
pub mod mckay;
pub mod series;
pub mod verify;
