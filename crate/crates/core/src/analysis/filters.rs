use serde::Serialize;

use super::{AnalysisError, ModalSet, PropertyFamily, UltrafilterMode};
use crate::semantics::KripkeModel;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FilterReport {
    pub per_world: Vec<bool>,
    pub global: bool,
}

impl FilterReport {
    fn new(per_world: Vec<bool>) -> FilterReport {
        let global = per_world.iter().all(|&b| b);
        FilterReport { per_world, global }
    }
}

/// Bits of all entities at the worlds in `worlds` (a world mask).
fn columns(worlds: u64, model: &KripkeModel) -> u64 {
    let n = model.scope.worlds;
    (0..model.scope.entities).fold(0, |acc, e| acc | worlds << (e * n))
}

fn filter_at(model: &KripkeModel, f: &PropertyFamily, sets: &[ModalSet], w: usize) -> bool {
    let scope = &model.scope;
    let member = |p: ModalSet| f.member_at(p, w);
    if !member(ModalSet::full(scope)) || member(ModalSet::empty()) {
        return false;
    }
    let visible = columns(model.successors(w), model);
    let members: Vec<ModalSet> = sets.iter().copied().filter(|&p| member(p)).collect();
    for &p in &members {
        for &q in sets {
            // p is included in q at every accessible world.
            if p.0 & visible & !q.0 == 0 && !member(q) {
                return false;
            }
        }
        for &q in &members {
            if !member(p.meet(q)) {
                return false;
            }
        }
    }
    true
}

/// Contains the full set, excludes the empty set, and is closed upwards
/// (under inclusion at all accessible worlds) and under intersection —
/// evaluated at each world.
pub fn is_modal_filter(model: &KripkeModel, family: &PropertyFamily) -> Result<FilterReport, AnalysisError> {
    family.check_scope(model)?;
    let sets: Vec<ModalSet> = ModalSet::all(&model.scope)?.collect();
    Ok(FilterReport::new(
        (0..model.scope.worlds).map(|w| filter_at(model, family, &sets, w)).collect(),
    ))
}

/// A filter that contains, for every modal set, the set or its complement.
/// In extension mode a set counts as a member at `w` when some member has
/// the same extension at `w`.
pub fn is_modal_ultrafilter(
    model: &KripkeModel,
    family: &PropertyFamily,
    mode: UltrafilterMode,
) -> Result<FilterReport, AnalysisError> {
    family.check_scope(model)?;
    let scope = model.scope;
    let sets: Vec<ModalSet> = ModalSet::all(&scope)?.collect();
    let derived;
    let f = match mode {
        UltrafilterMode::Intension => family,
        UltrafilterMode::Extension => {
            derived = extensional(family, &sets)?;
            &derived
        }
    };
    Ok(FilterReport::new(
        (0..scope.worlds)
            .map(|w| {
                filter_at(model, f, &sets, w) && sets.iter().all(|&p| f.member_at(p, w) || f.member_at(p.complement(&scope), w))
            })
            .collect(),
    ))
}

fn extensional(family: &PropertyFamily, sets: &[ModalSet]) -> Result<PropertyFamily, AnalysisError> {
    let scope = family.scope;
    let ext_members: Vec<Vec<bool>> = (0..scope.worlds)
        .map(|w| {
            let mut seen = vec![false; 1 << scope.entities];
            for &q in sets {
                if family.member_at(q, w) {
                    seen[q.extension(w, &scope) as usize] = true;
                }
            }
            seen
        })
        .collect();
    PropertyFamily::from_fn(scope, |p| {
        (0..scope.worlds).fold(0, |acc, w| acc | (ext_members[w][p.extension(w, &scope) as usize] as u64) << w)
    })
}
