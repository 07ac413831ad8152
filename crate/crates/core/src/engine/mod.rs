//! Kohn's algorithm for special domains, run with exact arithmetic, and
//! the certificate checker.
//!
//! [`run`] builds a [`Certificate`]: a derivation DAG of multipliers that
//! ends in a nonzero constant, with each node's assigned order of
//! subellipticity. [`verify_certificate`] replays every node using only the
//! polynomial and Gröbner primitives.

mod build;
pub mod certificate;
pub mod config;
pub mod domain;
pub mod epsilon;
pub mod linalg;
pub mod mutate;
pub mod rng;
mod steps;
mod verify;

pub use build::run;
pub use certificate::{
    Certificate, CofactorWitness, DomainEcho, Interpretation, Node, NodeKind, Strategy, Witness,
    CERTIFICATE_SCHEMA,
};
pub use config::{EngineConfig, PoolEntry};
pub use domain::{DomainError, DomainFile, SpecialDomain, DOMAIN_SCHEMA};
pub use steps::{
    draw_generic_combinations, fiber_chain, find_chain_cofactor, fiber_names, weierstrass_image,
    ChainCofactor, ChainLink, WeierstrassImage,
};
pub use verify::{verify_certificate, verify_standalone, VerifyFailure, VerifyReport};

use crate::groebner::GroebnerError;
use crate::invariants::InvariantError;
use crate::poly::PolyError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("the generators do not have the origin as an isolated common zero")]
    NotFinite,
    #[error("no generic choice found for {stage} after {attempts} attempts")]
    GenericityExhausted { stage: String, attempts: u32 },
    #[error("resource budget exhausted: {0}")]
    Budget(GroebnerError),
    #[error("degenerate domain: {0}")]
    Degenerate(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<GroebnerError> for EngineError {
    fn from(e: GroebnerError) -> Self {
        if e.is_budget() {
            EngineError::Budget(e)
        } else {
            EngineError::Internal(e.to_string())
        }
    }
}

impl From<PolyError> for EngineError {
    fn from(e: PolyError) -> Self {
        EngineError::Internal(e.to_string())
    }
}

impl From<InvariantError> for EngineError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::Groebner(g) => g.into(),
            InvariantError::NotFinite => EngineError::NotFinite,
            other => EngineError::Internal(other.to_string()),
        }
    }
}

#[cfg(test)]
mod tests;
