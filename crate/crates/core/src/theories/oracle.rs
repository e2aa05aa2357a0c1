//! Differential check of the bounded model finder against brute-force
//! enumeration of explicit models.

use crate::grounder::{GroundError, GroundOptions, Verdict};
use crate::semantics::exhaustive::{self, ModelSpace};
use crate::semantics::{holds_at, satisfies_theory, Scope, SemanticsError};
use crate::surface::{inline_definitions, inline_term, Theory};

use super::{run_goal, TheoryError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleComparison {
    pub goal: Option<String>,
    pub scope: Scope,
    /// Candidate models the exhaustive search had to consider.
    pub work: u64,
    pub grounder: &'static str,
    pub exhaustive: &'static str,
    /// Any model the grounder returned satisfies the axioms (and falsifies
    /// the goal at the reported world) under direct evaluation.
    pub model_checked: bool,
}

impl OracleComparison {
    pub fn agrees(&self) -> bool {
        self.grounder == self.exhaustive && self.model_checked
    }
}

/// Runs one check both ways. Returns `None` when the exhaustive search
/// would exceed `limit` candidate models.
pub fn compare_with_oracle(
    theory: &Theory,
    goal: Option<&str>,
    scope: Scope,
    opts: &GroundOptions,
    limit: u64,
) -> Result<Option<OracleComparison>, TheoryError> {
    let inlined = inline_definitions(theory);
    let goal_term = match goal {
        Some(name) => Some(inline_term(
            theory,
            &theory
                .goal(name)
                .ok_or_else(|| TheoryError::NoSuchGoal {
                    bundle: theory.name.clone(),
                    goal: name.to_string(),
                })?
                .term,
        )),
        None => None,
    };
    let space = match ModelSpace::new(&inlined, goal_term.as_slice().iter().collect::<Vec<_>>().as_slice(), scope) {
        Ok(s) => s,
        Err(SemanticsError::ScopeTooLarge { .. }) => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let work = space.work();
    if work > limit {
        return Ok(None);
    }
    let verdict = match run_goal(theory, goal, scope, opts) {
        Ok(v) => v,
        Err(e) if too_large(&e) => return Ok(None),
        Err(e) => return Err(e),
    };
    let exhaustive = match &goal_term {
        None => match exhaustive::find_model(&inlined, scope, limit)? {
            Some(_) => "sat",
            None => "unsat",
        },
        Some(g) => match exhaustive::find_countermodel(&inlined, g, scope, limit)? {
            Some(_) => "countermodel",
            None => "valid",
        },
    };
    let model_checked = match &verdict {
        Verdict::Satisfiable(m) => satisfies_theory(m, theory)?,
        Verdict::Countermodel { model, world } => {
            satisfies_theory(model, theory)? && !holds_at(model, goal_term.as_ref().expect("goal given"), *world)?
        }
        _ => true,
    };
    Ok(Some(OracleComparison {
        goal: goal.map(str::to_string),
        scope,
        work,
        grounder: verdict.label(),
        exhaustive,
        model_checked,
    }))
}

fn too_large(e: &TheoryError) -> bool {
    matches!(
        e,
        TheoryError::Semantics(SemanticsError::ScopeTooLarge { .. })
            | TheoryError::Ground(GroundError::Semantics(SemanticsError::ScopeTooLarge { .. }))
    )
}
