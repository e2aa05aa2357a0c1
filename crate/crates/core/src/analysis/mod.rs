//! Experiments on explicit models: modal filters and ultrafilters,
//! counting positive properties, equipollence and the diagonal argument.
//!
//! Everything here works on bit masks instead of going through the
//! evaluator, so these functions double as an independent check of the
//! corresponding definitions in the theory files.

mod cardinals;
mod counting;
mod diagonal;
mod filters;

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::grounder::GroundError;
use crate::semantics::{KripkeModel, Scope, SemValue, SemanticsError};
use crate::surface::LogicType;

pub use cardinals::{equipollent, equipollent_at, successor_cardinal_check};
pub use counting::{distinct_positive_count, min_positive_count, positive_extensions, CountMode, CountOptions, MinCount};
pub use diagonal::{diagonal_witness, surjection_exists, Diagonal, Surjection};
pub use filters::{is_modal_filter, is_modal_ultrafilter, FilterReport};

pub use crate::theories::UltrafilterMode;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("scope mismatch: {0}")]
    ScopeMismatch(String),
    #[error("model does not interpret `{0}`")]
    Uninterpreted(String),
    #[error("constant `{name}` has type `{ty}`, expected `(i > prop) > prop`")]
    NotAFamily { name: String, ty: LogicType },
    #[error("successor of {k} needs at least {} entities, scope has {entities}", k + 1)]
    SuccessorOutOfScope { k: usize, entities: usize },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Ground(#[from] GroundError),
}

/// A world-relativised set of entities, as a mask with bit `e * n + w`
/// set when entity `e` belongs to the set at world `w`. This is exactly
/// the enumeration index of the corresponding `i > prop` value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModalSet(pub u64);

impl ModalSet {
    pub fn empty() -> ModalSet {
        ModalSet(0)
    }

    pub fn full(scope: &Scope) -> ModalSet {
        ModalSet(low_bits(scope.worlds * scope.entities))
    }

    /// The same `entities` (bit `e`) at every world.
    pub fn rigid(entities: u64, scope: &Scope) -> ModalSet {
        let n = scope.worlds;
        ModalSet((0..scope.entities).filter(|e| entities >> e & 1 == 1).fold(0, |acc, e| acc | low_bits(n) << (e * n)))
    }

    pub fn contains(self, entity: usize, world: usize, scope: &Scope) -> bool {
        self.0 >> (entity * scope.worlds + world) & 1 == 1
    }

    /// Entities in the set at `world`, as a bit mask over entities.
    pub fn extension(self, world: usize, scope: &Scope) -> u64 {
        (0..scope.entities).fold(0, |acc, e| acc | (self.contains(e, world, scope) as u64) << e)
    }

    pub fn meet(self, other: ModalSet) -> ModalSet {
        ModalSet(self.0 & other.0)
    }

    pub fn complement(self, scope: &Scope) -> ModalSet {
        ModalSet(!self.0 & ModalSet::full(scope).0)
    }

    /// Every modal set at `scope`, in enumeration order.
    pub fn all(scope: &Scope) -> Result<impl Iterator<Item = ModalSet>, AnalysisError> {
        let bits = scope.worlds * scope.entities;
        crate::semantics::denotation_size(&LogicType::property(), scope)?;
        Ok((0..1u64 << bits).map(ModalSet))
    }

    pub fn from_value(v: &SemValue, scope: &Scope) -> Result<ModalSet, AnalysisError> {
        Ok(ModalSet(crate::semantics::index_of(&LogicType::property(), v, scope)?))
    }

    pub fn to_value(self, scope: &Scope) -> SemValue {
        SemValue::table((0..scope.entities).map(|e| SemValue::prop(self.0 >> (e * scope.worlds) & low_bits(scope.worlds), scope.worlds)).collect())
    }

    /// Rows per entity, columns per world.
    pub fn rows(self, scope: &Scope) -> Vec<Vec<bool>> {
        (0..scope.entities)
            .map(|e| (0..scope.worlds).map(|w| self.contains(e, w, scope)).collect())
            .collect()
    }
}

impl Serialize for ModalSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(self.0)
    }
}

impl fmt::Display for ModalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A family of modal sets: for each modal set (by index), the worlds at
/// which it is a member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyFamily {
    pub scope: Scope,
    pub membership: Vec<u64>,
}

impl PropertyFamily {
    pub fn from_fn(scope: Scope, member: impl Fn(ModalSet) -> u64) -> Result<PropertyFamily, AnalysisError> {
        Ok(PropertyFamily {
            scope,
            membership: ModalSet::all(&scope)?.map(member).collect(),
        })
    }

    pub fn from_value(v: &SemValue, scope: Scope) -> Result<PropertyFamily, AnalysisError> {
        let size = 1usize << (scope.worlds * scope.entities);
        let entries = v
            .entries()
            .filter(|es| es.len() == size)
            .ok_or_else(|| AnalysisError::ScopeMismatch(format!("family must have {size} entries")))?;
        let membership = entries
            .iter()
            .map(|e| {
                e.as_prop_mask()
                    .filter(|_| e.entries().map(<[_]>::len) == Some(scope.worlds))
                    .ok_or_else(|| AnalysisError::ScopeMismatch("family entries must be propositions".into()))
            })
            .collect::<Result<_, _>>()?;
        Ok(PropertyFamily { scope, membership })
    }

    /// The interpretation of constant `name` in `model`.
    pub fn from_model(model: &KripkeModel, name: &str) -> Result<PropertyFamily, AnalysisError> {
        let c = model.constant(name).ok_or_else(|| AnalysisError::Uninterpreted(name.into()))?;
        if c.ty != LogicType::fun(LogicType::property(), LogicType::Prop) {
            return Err(AnalysisError::NotAFamily {
                name: name.into(),
                ty: c.ty.clone(),
            });
        }
        PropertyFamily::from_value(&c.value, model.scope)
    }

    pub fn member_at(&self, p: ModalSet, world: usize) -> bool {
        self.membership[p.0 as usize] >> world & 1 == 1
    }

    pub fn to_value(&self) -> SemValue {
        SemValue::table(self.membership.iter().map(|&m| SemValue::prop(m, self.scope.worlds)).collect())
    }

    fn check_scope(&self, model: &KripkeModel) -> Result<(), AnalysisError> {
        if self.scope.worlds != model.scope.worlds || self.scope.entities != model.scope.entities {
            return Err(AnalysisError::ScopeMismatch(format!(
                "family at {} used with a model at {}",
                self.scope, model.scope
            )));
        }
        Ok(())
    }
}

fn low_bits(k: usize) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

#[cfg(test)]
mod tests;
