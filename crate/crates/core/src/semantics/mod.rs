//! Finite-scope semantics: explicit Kripke models, canonical values and
//! an exhaustive evaluator for core terms.

mod eval;
pub mod exhaustive;
mod model;
mod value;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface::LogicType;

pub use eval::{eval, holds_at, mvalid, satisfies_theory, DomainCache, Evaluator};
pub use model::{Interpretation, KripkeModel};
pub use value::{conforms, denotation_size, enumerate_denotation, index_of, value_at, SemValue};

/// Largest denotation any single type may have by default.
pub const DEFAULT_CAP: u64 = 1 << 20;

/// Upper bound on worlds; propositions are stored as 64-bit world masks.
pub const MAX_WORLDS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scope {
    pub worlds: usize,
    pub entities: usize,
    pub cap: u64,
}

impl Scope {
    pub fn new(worlds: usize, entities: usize) -> Result<Scope, SemanticsError> {
        Scope::with_cap(worlds, entities, DEFAULT_CAP)
    }

    pub fn with_cap(worlds: usize, entities: usize, cap: u64) -> Result<Scope, SemanticsError> {
        if worlds == 0 || entities == 0 || worlds > MAX_WORLDS || entities > 64 {
            return Err(SemanticsError::InvalidScope { worlds, entities });
        }
        Ok(Scope {
            worlds,
            entities,
            cap,
        })
    }

    /// Bit mask with one bit per world.
    pub fn full(&self) -> u64 {
        if self.worlds == 64 {
            u64::MAX
        } else {
            (1u64 << self.worlds) - 1
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.worlds, self.entities)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("invalid scope: {worlds} worlds, {entities} entities")]
    InvalidScope { worlds: usize, entities: usize },
    #[error("scope too large: denotation of `{ty}` exceeds the cap of {cap}")]
    ScopeTooLarge { ty: LogicType, cap: u64 },
    #[error("no interpretation for constant `{0}`")]
    Uninterpreted(String),
    #[error("ill-formed value for `{name}`: expected a denotation of `{ty}`")]
    BadValue { name: String, ty: LogicType },
    #[error("term is not closed under the environment")]
    Unbound,
    #[error("ill-typed term during evaluation: {0}")]
    IllTyped(String),
    #[error("world {0} out of range")]
    NoSuchWorld(usize),
    #[error("exhaustive search over {work} candidates exceeds the limit of {limit}")]
    WorkLimit { work: u64, limit: u64 },
    #[error("malformed model document: {0}")]
    Json(String),
}
