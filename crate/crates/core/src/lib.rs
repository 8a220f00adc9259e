//! Termination proofs for first-order term rewrite systems with weighted path orders and
//! their generalization to non-simple algebras.
//!
//! The crate is organized bottom-up:
//!
//! * [`trs`]: terms, rules and the TPDB `.trs` format
//! * [`algebra`]: linear and max/plus interpretations over the naturals
//! * [`orders`]: concrete WPO / SPO / MSPO / GWPO decision procedures
//! * [`encode`]: orientation constraints over unknown interpretations and precedences
//! * [`smt`]: SMT-LIB2 emission, external solver driver and model decoding
//! * [`prover`]: the end-to-end pipeline with independent certificate checking

pub mod algebra;
pub mod encode;
pub mod orders;
pub mod prover;
pub mod smt;
pub mod trs;

/// Algebra over the prover's working scalar.
pub type Algebra = algebra::Algebra<i64>;
pub type NormalForm = algebra::NormalForm<i64>;
pub type LinearPoly = algebra::LinearPoly<i64>;
pub type MaxPlusNf = algebra::MaxPlusNf<i64>;

pub use algebra::{AlgebraKind, Scalar};
pub use orders::Precedence;
pub use trs::{parse_trs, Rule, Substitution, Symbol, Term, Trs};
