use serde::Serialize;

use super::counting::positives;
use super::{AnalysisError, CountMode, ModalSet};
use crate::semantics::{KripkeModel, SemanticsError};
use crate::surface::LogicType;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Surjection {
    pub positives: Vec<ModalSet>,
    pub maps_checked: u64,
    pub exists: bool,
    /// Images of the entities under a surjection, if one exists.
    pub witness: Option<Vec<ModalSet>>,
}

/// Whether some map from entities to positive modal sets hits every
/// positive set. All such maps are enumerated.
pub fn surjection_exists(model: &KripkeModel, mode: CountMode) -> Result<Surjection, AnalysisError> {
    let pos = positives(model, mode)?;
    let m = model.scope.entities;
    let k = pos.len() as u64;
    let maps = k.checked_pow(m as u32).filter(|&n| n <= model.scope.cap).ok_or_else(|| {
        SemanticsError::ScopeTooLarge {
            ty: LogicType::fun(LogicType::Ind, LogicType::property()),
            cap: model.scope.cap,
        }
    })?;
    let mut witness = None;
    let mut checked = 0;
    for mut i in 0..maps {
        checked += 1;
        let images: Vec<usize> = (0..m)
            .map(|_| {
                let d = (i % k) as usize;
                i /= k;
                d
            })
            .collect();
        let mut hit = vec![false; pos.len()];
        for &j in &images {
            hit[j] = true;
        }
        if hit.iter().all(|&h| h) {
            witness = Some(images.iter().map(|&j| pos[j]).collect());
            break;
        }
    }
    Ok(Surjection {
        positives: pos,
        maps_checked: checked,
        exists: witness.is_some(),
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagonal {
    pub set: ModalSet,
    /// The diagonal differs from every image of `F`.
    pub outside_range: bool,
}

/// The per-world diagonal `D(x)(w) = ¬F(x)(x)(w)` of a map from entities
/// to modal sets.
pub fn diagonal_witness(model: &KripkeModel, f: &[ModalSet]) -> Result<Diagonal, AnalysisError> {
    let s = model.scope;
    if f.len() != s.entities {
        return Err(AnalysisError::ScopeMismatch(format!(
            "map has {} images, scope has {} entities",
            f.len(),
            s.entities
        )));
    }
    let mut d = 0u64;
    for (x, fx) in f.iter().enumerate() {
        for w in 0..s.worlds {
            if !fx.contains(x, w, &s) {
                d |= 1 << (x * s.worlds + w);
            }
        }
    }
    let set = ModalSet(d);
    Ok(Diagonal {
        set,
        outside_range: f.iter().all(|&fx| fx != set),
    })
}
