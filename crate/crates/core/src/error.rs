use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("{0} is not a unit")]
    NonUnit(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("map is not well defined: {0}")]
    NotWellDefined(String),
    #[error("module is not free over the base algebra: {0}")]
    NonFree(String),
    #[error("enumeration budget of {budget} exceeded ({needed} needed)")]
    BudgetExceeded { budget: u64, needed: String },
    #[error("bimodule axiom `{0}` fails")]
    Bimodule(BimoduleAxiom),
    #[error("axiom `{axiom}` fails on generator {witness}")]
    Axiom { axiom: Axiom, witness: usize },
    #[error("filtered F-module invalid: {0}")]
    FilteredModule(MfViolation),
    #[error("diagram category: {0}")]
    Diagram(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum BimoduleAxiom {
    ModulusViolation,
    NonCommutingActions,
}

impl std::fmt::Display for BimoduleAxiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

/// Coalgebra and comodule axioms, named in failure reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Axiom {
    Coassoc,
    CounitLeft,
    CounitRight,
    NotBimoduleMap,
    NotModuleMap,
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}

/// First violated clause of a filtered F-module, with the offending index.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum MfViolation {
    NotAnnihilated { exponent: u32 },
    NotExhaustive,
    NotInjective { index: i32 },
    NotDecreasing { index: i32, generator: usize },
    IllDefinedPhi { index: i32, generator: usize },
    PhiIncompatible { index: i32, generator: usize },
    SpanFails,
}

impl std::fmt::Display for MfViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Debug::fmt(self, f)
    }
}
