use super::{AnalysisError, ModalSet};
use crate::semantics::{denotation_size, KripkeModel};
use crate::surface::LogicType;

/// All functions on entities, as image vectors, in enumeration order.
fn functions(model: &KripkeModel) -> Result<Vec<Vec<usize>>, AnalysisError> {
    let ty = LogicType::fun(LogicType::Ind, LogicType::Ind);
    let size = denotation_size(&ty, &model.scope)?;
    let m = model.scope.entities;
    Ok((0..size)
        .map(|mut i| {
            (0..m)
                .map(|_| {
                    let d = (i % m as u64) as usize;
                    i /= m as u64;
                    d
                })
                .collect()
        })
        .collect())
}

fn bijects(f: &[usize], p: u64, q: u64) -> bool {
    let mut image = 0u64;
    for (x, &y) in f.iter().enumerate() {
        if p >> x & 1 == 1 {
            if q >> y & 1 == 0 || image >> y & 1 == 1 {
                return false;
            }
            image |= 1 << y;
        }
    }
    image == q
}

/// Some function maps the extension of `p` at `world` one-to-one onto that of `q`.
pub fn equipollent_at(model: &KripkeModel, p: ModalSet, q: ModalSet, world: usize) -> Result<bool, AnalysisError> {
    let s = &model.scope;
    let (pe, qe) = (p.extension(world, s), q.extension(world, s));
    Ok(functions(model)?.iter().any(|f| bijects(f, pe, qe)))
}

/// [`equipollent_at`] at every world; the witnessing function may differ
/// between worlds.
pub fn equipollent(model: &KripkeModel, p: ModalSet, q: ModalSet) -> Result<bool, AnalysisError> {
    let fs = functions(model)?;
    let s = &model.scope;
    Ok((0..s.worlds).all(|w| {
        let (pe, qe) = (p.extension(w, s), q.extension(w, s));
        fs.iter().any(|f| bijects(f, pe, qe))
    }))
}

/// The successor construction applied to the class of a rigid `k`-element
/// set yields exactly the class of a rigid `k + 1`-element set, at every
/// world: `q` is in the successor class at `w` iff some `p` equipollent to
/// the `k`-set and some `z` outside `p` at `w` make `p ∪ {z}` equipollent
/// to `q` at `w`.
pub fn successor_cardinal_check(model: &KripkeModel, k: usize) -> Result<bool, AnalysisError> {
    let s = model.scope;
    if k + 1 > s.entities {
        return Err(AnalysisError::SuccessorOutOfScope { k, entities: s.entities });
    }
    let fs = functions(model)?;
    let sets: Vec<ModalSet> = ModalSet::all(&s)?.collect();
    let base = ModalSet::rigid((1 << k) - 1, &s);
    let next = ModalSet::rigid((1 << (k + 1)) - 1, &s);
    let equip = |a: u64, b: u64| fs.iter().any(|f| bijects(f, a, b));
    for w in 0..s.worlds {
        // Extensions at w of the members of the base class, each extended
        // by one outside element.
        let mut extended = Vec::new();
        for p in &sets {
            let pe = p.extension(w, &s);
            if equip(base.extension(w, &s), pe) {
                for z in (0..s.entities).filter(|z| pe >> z & 1 == 0) {
                    extended.push(pe | 1 << z);
                }
            }
        }
        extended.sort_unstable();
        extended.dedup();
        for q in &sets {
            let qe = q.extension(w, &s);
            let in_successor = extended.iter().any(|&u| equip(u, qe));
            if in_successor != equip(next.extension(w, &s), qe) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
