//! Exact Tannakian reconstruction over finite chain rings.
//!
//! The crate computes the coend coalgebra `L(ω) = ∫ ω(A) ⊗ ω(A)^∨` of a
//! finite concrete diagram category, lifts the fiber functor to comodules,
//! compares against a given coalgebra through the canonical counit map and
//! runs finite checks of the recognition conditions. Fontaine–Laffaille
//! filtered F-modules over truncated Witt rings `W_n = GR(p^n, f)` plug into
//! the same pipeline.
//!
//! Everything is exact. Module-level objects live in [`module::FinModule`]
//! canonical form `⊕ R/p^{e_i}`; the workhorse is the diagonal normal form in
//! [`linalg`].

pub mod algebra;
pub mod coalgebra;
pub mod commands;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod mf;
pub mod module;
pub mod report;
pub mod ring;
pub mod suite;
pub mod tannaka;
pub mod text;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use module::{FinModule, ModuleMap};
pub use ring::{Ring, RingElem};
