use crate::grounder::{GroundOptions, Verdict};
use crate::semantics::{KripkeModel, Scope};

use super::{load_bundle, run_goal, BundleId, BundleOptions, TheoryError};

/// The one postulate that depends on the number of worlds.
const BOOL_EXT: &str = "bool_ext";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostulateResult {
    pub name: String,
    pub expect_valid: bool,
    pub verdict: Verdict,
    /// For a boolean extensionality countermodel: whether it has the
    /// canonical two-world shape (see [`is_canonical_bool_ext_countermodel`]).
    pub canonical: Option<bool>,
}

impl PostulateResult {
    pub fn as_expected(&self) -> bool {
        self.expect_valid == matches!(self.verdict, Verdict::ValidUpToScope(_)) && self.canonical != Some(false)
    }
}

/// Two worlds with total access; one of `phi`, `psi` false everywhere, the
/// other true at exactly one world; the failure reported where both are
/// false.
pub fn is_canonical_bool_ext_countermodel(model: &KripkeModel, world: usize) -> bool {
    let mask = |c: &str| model.constant(c).and_then(|i| i.value.as_prop_mask());
    let (Some(phi), Some(psi)) = (mask("phi"), mask("psi")) else {
        return false;
    };
    let (zero, one) = if phi == 0 { (phi, psi) } else { (psi, phi) };
    model.scope.worlds == 2
        && model.access.iter().flatten().all(|&b| b)
        && zero == 0
        && one.count_ones() == 1
        && one >> world & 1 == 0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChurchReport {
    pub scope: Scope,
    pub results: Vec<PostulateResult>,
}

impl ChurchReport {
    pub fn all_as_expected(&self) -> bool {
        self.results.iter().all(PostulateResult::as_expected)
    }

    pub fn get(&self, name: &str) -> Option<&PostulateResult> {
        self.results.iter().find(|r| r.name == name)
    }
}

/// Checks every lifted postulate of the church bundle at `scope`. Boolean
/// extensionality is expected to fail whenever there are two worlds or more.
pub fn check_church_postulates(scope: Scope, opts: &GroundOptions) -> Result<ChurchReport, TheoryError> {
    let bundle = load_bundle(BundleId::Church, BundleOptions::default())?;
    let results = bundle
        .theory
        .goals
        .iter()
        .map(|g| {
            let verdict = run_goal(&bundle.theory, Some(&g.name), scope, opts)?;
            let canonical = match &verdict {
                Verdict::Countermodel { model, world } if g.name == BOOL_EXT && scope.worlds == 2 => {
                    Some(is_canonical_bool_ext_countermodel(model, *world))
                }
                _ => None,
            };
            Ok(PostulateResult {
                name: g.name.clone(),
                expect_valid: g.name != BOOL_EXT || scope.worlds == 1,
                verdict,
                canonical,
            })
        })
        .collect::<Result<_, TheoryError>>()?;
    Ok(ChurchReport { scope, results })
}
