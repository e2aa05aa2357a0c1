use std::collections::BTreeSet;

use serde::Serialize;

use super::{AnalysisError, ModalSet, PropertyFamily};
use crate::grounder::{enumerate_problem, ground_with, GroundError, GroundOptions};
use crate::semantics::{KripkeModel, Scope};
use crate::surface::Theory;

/// Name of the positivity constant.
pub const POSITIVE: &str = "P";

/// Where positivity is read when counting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Positive at the given world.
    Designated(usize),
    /// Positive at every world.
    AllWorlds,
}

impl Default for CountMode {
    fn default() -> Self {
        CountMode::Designated(0)
    }
}

impl CountMode {
    fn world(self) -> usize {
        match self {
            CountMode::Designated(w) => w,
            CountMode::AllWorlds => 0,
        }
    }
}

/// Modal sets positive under `mode`, in enumeration order.
pub(crate) fn positives(model: &KripkeModel, mode: CountMode) -> Result<Vec<ModalSet>, AnalysisError> {
    let family = PropertyFamily::from_model(model, POSITIVE)?;
    let full = model.scope.full();
    if let CountMode::Designated(w) = mode {
        if w >= model.scope.worlds {
            return Err(AnalysisError::ScopeMismatch(format!("no world {w} at {}", model.scope)));
        }
    }
    Ok(ModalSet::all(&model.scope)?
        .filter(|p| {
            let m = family.membership[p.0 as usize];
            match mode {
                CountMode::Designated(w) => m >> w & 1 == 1,
                CountMode::AllWorlds => m == full,
            }
        })
        .collect())
}

/// Number of structurally distinct positive modal sets.
pub fn distinct_positive_count(model: &KripkeModel, mode: CountMode) -> Result<usize, AnalysisError> {
    Ok(positives(model, mode)?.len())
}

/// Number of distinct extensions at `world` among the sets positive there.
pub fn positive_extensions(model: &KripkeModel, world: usize) -> Result<usize, AnalysisError> {
    let scope = model.scope;
    Ok(positives(model, CountMode::Designated(world))?
        .into_iter()
        .map(|p| p.extension(world, &scope))
        .collect::<BTreeSet<_>>()
        .len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountOptions {
    pub mode: CountMode,
    /// Actualist reading of "k existing entities": only models in which
    /// exactly this many entities exist at the designated world count.
    pub existing: Option<usize>,
    /// Stop after this many models.
    pub limit: usize,
    pub ground: GroundOptions,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            mode: CountMode::default(),
            existing: None,
            limit: 1_000_000,
            ground: GroundOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinCount {
    pub scope: Scope,
    /// Minimum over the models seen; 0 when there were none.
    pub min: usize,
    /// Models enumerated and, of those, models that passed the existence filter.
    pub models: usize,
    pub counted: usize,
    /// No model was counted.
    pub empty: bool,
    /// The enumeration ran to completion.
    pub complete: bool,
    /// First model attaining the minimum.
    pub witness: Option<KripkeModel>,
}

/// Minimum of [`distinct_positive_count`] over all models of `theory` at
/// `scope`. Running out of solver budget yields a partial result.
pub fn min_positive_count(theory: &Theory, scope: Scope, opts: &CountOptions) -> Result<MinCount, AnalysisError> {
    let problem = ground_with(theory, scope, None, &opts.ground)?;
    let designated = opts.mode.world();
    let mut best: Option<(usize, KripkeModel)> = None;
    let mut models = 0;
    let mut counted = 0;
    let mut failure = None;
    let outcome = enumerate_problem(&problem, opts.limit, opts.ground.budget, |m| {
        models += 1;
        if let Some(k) = opts.existing {
            if (0..scope.entities).filter(|&e| m.exists_at[e][designated]).count() != k {
                return;
            }
        }
        counted += 1;
        match distinct_positive_count(m, opts.mode) {
            Ok(c) if best.as_ref().is_none_or(|(b, _)| c < *b) => best = Some((c, m.clone())),
            Ok(_) => {}
            Err(e) => failure = failure.take().or(Some(e)),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let complete = match outcome {
        Ok(en) => en.exhausted,
        Err(GroundError::BudgetExhausted { .. }) => false,
        Err(e) => return Err(e.into()),
    };
    Ok(MinCount {
        scope,
        min: best.as_ref().map_or(0, |b| b.0),
        models,
        counted,
        empty: best.is_none(),
        complete,
        witness: best.map(|b| b.1),
    })
}
