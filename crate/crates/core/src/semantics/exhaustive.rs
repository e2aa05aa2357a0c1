//! Brute-force search over explicit models. Slow, but shares no code with
//! the SAT path, which makes it the reference the grounder is tested against.

use std::collections::BTreeSet;

use super::eval::{DomainCache, Evaluator};
use super::model::KripkeModel;
use super::value::{enumerate_denotation, value_at, SemValue};
use super::{Scope, SemanticsError};
use crate::surface::{inline_definitions, inline_term, FrameFlags, LogicType, Term, Theory, EXISTS_AT};

/// Default bound on the number of candidate models.
pub const DEFAULT_WORK_LIMIT: u64 = 1_000_000;

/// The candidate models for a set of formulas: every frame-respecting
/// accessibility relation, every existence assignment (only if existence
/// is consulted) and every interpretation of the constants that occur.
/// Constants that do not occur are fixed to the first value of their type.
pub struct ModelSpace {
    scope: Scope,
    relations: Vec<Vec<Vec<bool>>>,
    vary_existence: bool,
    /// Signature in declaration order, with the values each constant ranges over.
    constants: Vec<(String, LogicType, Vec<SemValue>)>,
}

impl ModelSpace {
    pub fn new(theory: &Theory, formulas: &[&Term], scope: Scope) -> Result<ModelSpace, SemanticsError> {
        let mut used = BTreeSet::new();
        let mut actualist = false;
        for t in theory.axioms.iter().map(|f| &f.term).chain(formulas.iter().copied()) {
            used.extend(t.constants());
            actualist |= t.any(&|s| matches!(s, Term::ForallA(..) | Term::ExistsA(..)));
        }
        let mut constants = Vec::new();
        for (name, ty) in &theory.signature {
            let values = if used.contains(name) {
                enumerate_denotation(ty, &scope)?
            } else {
                vec![value_at(ty, 0, &scope)?]
            };
            constants.push((name.clone(), ty.clone(), values));
        }
        Ok(ModelSpace {
            scope,
            relations: relations(scope.worlds, theory.frame),
            vary_existence: actualist || used.contains(EXISTS_AT),
            constants,
        })
    }

    /// Number of candidate models, saturating at `u64::MAX`.
    pub fn work(&self) -> u64 {
        let ex = if self.vary_existence {
            1u64.checked_shl((self.scope.worlds * self.scope.entities) as u32)
                .unwrap_or(u64::MAX)
        } else {
            1
        };
        self.constants
            .iter()
            .fold((self.relations.len() as u64).saturating_mul(ex), |acc, c| {
                acc.saturating_mul(c.2.len() as u64)
            })
    }

    /// Calls `visit` on every candidate model until it returns `true`.
    /// Returns whether the search was stopped early.
    pub fn search(
        &self,
        limit: u64,
        mut visit: impl FnMut(&mut Evaluator<'_>) -> Result<bool, SemanticsError>,
    ) -> Result<bool, SemanticsError> {
        let work = self.work();
        if work > limit {
            return Err(SemanticsError::WorkLimit { work, limit });
        }
        let (n, m) = (self.scope.worlds, self.scope.entities);
        let ex_count: u64 = if self.vary_existence { 1 << (n * m) } else { 1 };
        let mut radices = vec![self.relations.len() as u64, ex_count];
        radices.extend(self.constants.iter().map(|c| c.2.len() as u64));
        let mut digits = vec![0u64; radices.len()];
        let mut cache = DomainCache::default();
        loop {
            let mut model = KripkeModel::universal(self.scope);
            model.access = self.relations[digits[0] as usize].clone();
            for e in 0..m {
                for w in 0..n {
                    model.exists_at[e][w] = !self.vary_existence || digits[1] >> (e * n + w) & 1 == 1;
                }
            }
            for (k, (name, ty, values)) in self.constants.iter().enumerate() {
                model.interpret(name, ty.clone(), values[digits[k + 2] as usize].clone())?;
            }
            let mut ev = Evaluator::with_cache(&model, cache)?;
            if visit(&mut ev)? {
                return Ok(true);
            }
            cache = ev.into_cache();
            // Little-endian increment.
            let mut i = 0;
            loop {
                if i == digits.len() {
                    return Ok(false);
                }
                digits[i] += 1;
                if digits[i] < radices[i] {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }
}

/// All accessibility relations on `n` worlds meeting the frame conditions,
/// in order of their row-major bit encoding.
pub fn relations(n: usize, frame: FrameFlags) -> Vec<Vec<Vec<bool>>> {
    let scope = Scope::with_cap(n.max(1), 1, u64::MAX).expect("valid world count");
    (0u64..1 << (n * n))
        .map(|bits| {
            (0..n)
                .map(|w| (0..n).map(|v| bits >> (w * n + v) & 1 == 1).collect())
                .collect::<Vec<Vec<bool>>>()
        })
        .filter(|r| {
            let mut m = KripkeModel::universal(scope);
            m.access = r.clone();
            m.satisfies_frame(frame)
        })
        .collect()
}

fn axioms_hold(ev: &mut Evaluator<'_>, theory: &Theory, full: u64) -> Result<bool, SemanticsError> {
    for ax in &theory.axioms {
        if ev.prop_mask(&ax.term)? != full {
            return Ok(false);
        }
    }
    Ok(true)
}

/// First model (in enumeration order) of a theory's axioms.
pub fn find_model(theory: &Theory, scope: Scope, limit: u64) -> Result<Option<KripkeModel>, SemanticsError> {
    let theory = &inline_definitions(theory);
    let space = ModelSpace::new(theory, &[], scope)?;
    let full = scope.full();
    let mut found = None;
    space.search(limit, |ev| {
        if axioms_hold(ev, theory, full)? {
            found = Some(ev.model().clone());
            return Ok(true);
        }
        Ok(false)
    })?;
    Ok(found)
}

/// A model of the axioms and a world at which `goal` fails, if any exists.
pub fn find_countermodel(
    theory: &Theory,
    goal: &Term,
    scope: Scope,
    limit: u64,
) -> Result<Option<(KripkeModel, usize)>, SemanticsError> {
    let goal = &inline_term(theory, goal);
    let theory = &inline_definitions(theory);
    let space = ModelSpace::new(theory, &[goal], scope)?;
    let full = scope.full();
    let mut found = None;
    space.search(limit, |ev| {
        if !axioms_hold(ev, theory, full)? {
            return Ok(false);
        }
        let g = ev.prop_mask(goal)?;
        if g != full {
            found = Some((ev.model().clone(), (!g & full).trailing_zeros() as usize));
            return Ok(true);
        }
        Ok(false)
    })?;
    Ok(found)
}

/// Number of candidate models satisfying the axioms.
pub fn count_models(theory: &Theory, scope: Scope, limit: u64) -> Result<u64, SemanticsError> {
    let theory = &inline_definitions(theory);
    let space = ModelSpace::new(theory, &[], scope)?;
    let full = scope.full();
    let mut count = 0;
    space.search(limit, |ev| {
        count += axioms_hold(ev, theory, full)? as u64;
        Ok(false)
    })?;
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{elaborate, load_theory};

    fn th(src: &str) -> Theory {
        elaborate(&load_theory(src).unwrap())
    }

    #[test]
    fn relation_counts() {
        // Oracle: counted by hand (refl: 2^(n^2-n); equivalence relations = Bell numbers).
        assert_eq!(relations(2, FrameFlags::K).len(), 16);
        assert_eq!(relations(2, FrameFlags::T).len(), 4);
        assert_eq!(relations(3, FrameFlags::S5).len(), 5);
        assert_eq!(relations(3, FrameFlags::S4).len(), 29);
    }

    #[test]
    fn t_schema_has_countermodel_only_without_reflexivity() {
        let s = Scope::new(2, 1).unwrap();
        let k = th("frame k\ngoal forallP p:prop. box p -> p");
        let g = &k.goals[0].term;
        assert!(find_countermodel(&k, g, s, DEFAULT_WORK_LIMIT).unwrap().is_some());
        let t = th("frame t\ngoal forallP p:prop. box p -> p");
        assert!(find_countermodel(&t, &t.goals[0].term, s, DEFAULT_WORK_LIMIT).unwrap().is_none());
    }

    #[test]
    fn counts_models_of_simple_axioms() {
        // One world, reflexive: p ranges over 2 values, q over 2; p -> q excludes one.
        let t = th("frame t\nconst p q : prop\naxiom p -> q");
        assert_eq!(count_models(&t, Scope::new(1, 1).unwrap(), 100).unwrap(), 3);
    }

    #[test]
    fn work_limit_is_enforced() {
        let t = th("const P : (i > prop) > prop\naxiom P (\\x:i. true)");
        let err = find_model(&t, Scope::new(1, 3).unwrap(), 10).unwrap_err();
        assert!(matches!(err, SemanticsError::WorkLimit { .. }));
    }
}
