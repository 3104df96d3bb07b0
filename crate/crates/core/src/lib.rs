//! Finite, machine-checkable approximations of faithful highly transitive
//! actions of free products `G * H`.
//!
//! Two constructions are provided. When both factors are infinite cyclic,
//! [`infinite_engine`] grows a partial conjugator `σ` so that `G` and
//! `σ⁻¹Hσ` generate the action. When `H` is finite of order at least three,
//! [`finite_engine`] modifies an `H`-action on `X = G * H` away from a frozen
//! finite set. The [`driver`] schedules requirements, and every result is
//! written as a [`certificate::Certificate`] that [`verify`] re-checks with
//! its own evaluator.

pub mod certificate;
pub mod countable;
pub mod dot;
pub mod driver;
pub mod error;
pub mod finite_engine;
pub mod free_product;
pub mod geometry;
pub mod infinite_engine;
pub mod oracle;
pub mod verify;
pub mod witness;

pub use error::{Error, Result};
pub use free_product::{FactorKind, FactorSpec, FreeProduct, Letter, Side, Word};
