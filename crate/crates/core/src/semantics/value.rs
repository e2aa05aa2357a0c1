use std::sync::Arc;

use super::{Scope, SemanticsError};
use crate::surface::LogicType;

/// A canonical finite denotation.
///
/// Propositions are tables over worlds of `Bool`; functions are tables
/// over their enumerated domain. Two values denote the same object iff
/// they are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemValue {
    Bool(bool),
    Entity(usize),
    World(usize),
    Table(Arc<[SemValue]>),
}

impl SemValue {
    pub fn table(entries: Vec<SemValue>) -> SemValue {
        SemValue::Table(entries.into())
    }

    /// A proposition from a world mask (bit `w` is the truth value at world `w`).
    pub fn prop(mask: u64, worlds: usize) -> SemValue {
        SemValue::table((0..worlds).map(|w| SemValue::Bool(mask >> w & 1 == 1)).collect())
    }

    pub fn as_prop_mask(&self) -> Option<u64> {
        match self {
            SemValue::Table(es) => es.iter().enumerate().try_fold(0u64, |acc, (w, e)| match e {
                SemValue::Bool(b) => Some(acc | (*b as u64) << w),
                _ => None,
            }),
            _ => None,
        }
    }

    pub fn entries(&self) -> Option<&[SemValue]> {
        match self {
            SemValue::Table(es) => Some(es),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            SemValue::Bool(b) => (*b).into(),
            SemValue::Entity(e) | SemValue::World(e) => (*e).into(),
            SemValue::Table(es) => es.iter().map(SemValue::to_json).collect::<Vec<_>>().into(),
        }
    }

    pub fn from_json(ty: &LogicType, v: &serde_json::Value, scope: &Scope) -> Result<SemValue, SemanticsError> {
        let bad = || SemanticsError::Json(format!("value does not fit type `{ty}`"));
        match ty {
            LogicType::Ind => {
                let e = v.as_u64().ok_or_else(bad)? as usize;
                if e >= scope.entities {
                    return Err(bad());
                }
                Ok(SemValue::Entity(e))
            }
            LogicType::Prop => {
                let arr = v.as_array().ok_or_else(bad)?;
                if arr.len() != scope.worlds {
                    return Err(bad());
                }
                arr.iter()
                    .map(|b| b.as_bool().map(SemValue::Bool).ok_or_else(bad))
                    .collect::<Result<Vec<_>, _>>()
                    .map(SemValue::table)
            }
            LogicType::Fun(a, b) => {
                let arr = v.as_array().ok_or_else(bad)?;
                if arr.len() as u64 != denotation_size(a, scope)? {
                    return Err(bad());
                }
                arr.iter()
                    .map(|x| SemValue::from_json(b, x, scope))
                    .collect::<Result<Vec<_>, _>>()
                    .map(SemValue::table)
            }
        }
    }
}

/// Number of elements in the denotation of `ty` at `scope`.
///
/// `|Ind| = m`, `|Prop| = 2^n`, `|a > b| = |b|^|a|`; anything above the
/// scope's cap is rejected.
pub fn denotation_size(ty: &LogicType, scope: &Scope) -> Result<u64, SemanticsError> {
    let too_large = || SemanticsError::ScopeTooLarge {
        ty: ty.clone(),
        cap: scope.cap,
    };
    let size = match ty {
        LogicType::Ind => scope.entities as u64,
        LogicType::Prop => 1u64.checked_shl(scope.worlds as u32).ok_or_else(too_large)?,
        LogicType::Fun(a, b) => {
            // Values are tables over the domain, so it must fit even when
            // the codomain is a singleton.
            let dom = denotation_size(a, scope)?;
            let cod = denotation_size(b, scope)?;
            if cod == 1 {
                1
            } else {
                u32::try_from(dom)
                    .ok()
                    .and_then(|d| cod.checked_pow(d))
                    .ok_or_else(too_large)?
            }
        }
    };
    if size > scope.cap {
        return Err(too_large());
    }
    Ok(size)
}

/// The `index`-th element of the deterministic enumeration of `ty`.
///
/// Functions are enumerated in mixed radix with the first domain element
/// as the least significant digit; propositions use bit `w` for world `w`.
pub fn value_at(ty: &LogicType, index: u64, scope: &Scope) -> Result<SemValue, SemanticsError> {
    Ok(match ty {
        LogicType::Ind => SemValue::Entity(index as usize),
        LogicType::Prop => SemValue::prop(index, scope.worlds),
        LogicType::Fun(a, b) => {
            let dom = denotation_size(a, scope)?;
            let base = denotation_size(b, scope)?;
            let mut rest = index;
            let mut entries = Vec::with_capacity(dom as usize);
            for _ in 0..dom {
                entries.push(value_at(b, rest % base, scope)?);
                rest /= base;
            }
            SemValue::table(entries)
        }
    })
}

/// Position of `value` in the enumeration of `ty`.
pub fn index_of(ty: &LogicType, value: &SemValue, scope: &Scope) -> Result<u64, SemanticsError> {
    let bad = || SemanticsError::BadValue {
        name: "<value>".into(),
        ty: ty.clone(),
    };
    match (ty, value) {
        (LogicType::Ind, SemValue::Entity(e)) if *e < scope.entities => Ok(*e as u64),
        (LogicType::Prop, v) => match v.as_prop_mask() {
            Some(mask) if v.entries().map(<[_]>::len) == Some(scope.worlds) => Ok(mask),
            _ => Err(bad()),
        },
        (LogicType::Fun(a, b), SemValue::Table(es)) => {
            if es.len() as u64 != denotation_size(a, scope)? {
                return Err(bad());
            }
            let base = denotation_size(b, scope)?;
            denotation_size(ty, scope)?;
            es.iter()
                .rev()
                .try_fold(0u64, |acc, e| Ok(acc * base + index_of(b, e, scope)?))
        }
        _ => Err(bad()),
    }
}

/// Whether `value` is a denotation of `ty` at `scope`. Unlike [`index_of`]
/// this only needs the argument types to be enumerable, so it accepts
/// values of types too large to index.
pub fn conforms(ty: &LogicType, value: &SemValue, scope: &Scope) -> bool {
    match (ty, value) {
        (LogicType::Ind, SemValue::Entity(e)) => *e < scope.entities,
        (LogicType::Prop, v) => v.as_prop_mask().is_some() && v.entries().map(<[_]>::len) == Some(scope.worlds),
        (LogicType::Fun(a, b), SemValue::Table(es)) => {
            denotation_size(a, scope).is_ok_and(|n| n == es.len() as u64) && es.iter().all(|e| conforms(b, e, scope))
        }
        _ => false,
    }
}

/// All values of `ty`, in enumeration order.
pub fn enumerate_denotation(ty: &LogicType, scope: &Scope) -> Result<Vec<SemValue>, SemanticsError> {
    let size = denotation_size(ty, scope)?;
    (0..size).map(|i| value_at(ty, i, scope)).collect()
}
