//! Bundled theories with manifests of expected verdicts.
//!
//! Bundle sources are compiled into the crate. Some bundles are assembled
//! from several files (shared filter definitions, the frame schemata) and
//! options select between variants of the same theory.

mod church;
mod oracle;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grounder::{self, GroundError, GroundOptions, Verdict};
use crate::semantics::{Scope, SemanticsError};
use crate::surface::{load_theory, FrameFlags, Theory};

pub use church::{check_church_postulates, is_canonical_bool_ext_countermodel, ChurchReport, PostulateResult};
pub use oracle::{compare_with_oracle, OracleComparison};

const FRAMES: &str = include_str!("../../theories/frames.homl");
const CHURCH: &str = include_str!("../../theories/church.homl");
const FILTER_DEFS: &str = include_str!("../../theories/filter_defs.homl");
const FILTERS: &str = include_str!("../../theories/filters.homl");
const GOEDEL: &str = include_str!("../../theories/goedel.homl");
const GOEDEL_POSSIBILIST: &str = include_str!("../../theories/goedel_possibilist.homl");
const GOEDEL_1970: &str = include_str!("../../theories/goedel_1970.homl");
const GOEDEL_1970_POSSIBILIST: &str = include_str!("../../theories/goedel_1970_possibilist.homl");
const MODAL_MATH: &str = include_str!("../../theories/modal_math.homl");
const INFINITY: &str = include_str!("../../theories/infinity.homl");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BundleId {
    K,
    T,
    S4,
    S5,
    Church,
    Filters,
    Goedel,
    ModalMath,
}

impl BundleId {
    pub const ALL: [BundleId; 8] = [
        BundleId::K,
        BundleId::T,
        BundleId::S4,
        BundleId::S5,
        BundleId::Church,
        BundleId::Filters,
        BundleId::Goedel,
        BundleId::ModalMath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BundleId::K => "k",
            BundleId::T => "t",
            BundleId::S4 => "s4",
            BundleId::S5 => "s5",
            BundleId::Church => "church",
            BundleId::Filters => "filters",
            BundleId::Goedel => "goedel",
            BundleId::ModalMath => "modal_math",
        }
    }

    fn manifest(self) -> &'static str {
        match self {
            BundleId::K => include_str!("../../theories/manifests/k.json"),
            BundleId::T => include_str!("../../theories/manifests/t.json"),
            BundleId::S4 => include_str!("../../theories/manifests/s4.json"),
            BundleId::S5 => include_str!("../../theories/manifests/s5.json"),
            BundleId::Church => include_str!("../../theories/manifests/church.json"),
            BundleId::Filters => include_str!("../../theories/manifests/filters.json"),
            BundleId::Goedel => include_str!("../../theories/manifests/goedel.json"),
            BundleId::ModalMath => include_str!("../../theories/manifests/modal_math.json"),
        }
    }
}

impl fmt::Display for BundleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BundleId {
    type Err = TheoryError;

    fn from_str(s: &str) -> Result<BundleId, TheoryError> {
        BundleId::ALL
            .into_iter()
            .find(|id| id.name() == s || (s == "modal-math" && *id == BundleId::ModalMath))
            .ok_or_else(|| TheoryError::UnknownBundle(s.to_string()))
    }
}

/// Range of individual quantifiers in the Gödel bundle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuantifierVariant {
    #[default]
    Actualist,
    Possibilist,
}

/// Definition of essence in the Gödel bundle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EssenceVariant {
    /// The essence must be possessed by its bearer.
    #[default]
    Scott,
    /// No possession clause; inconsistent.
    #[serde(rename = "goedel-1970")]
    Goedel1970,
}

/// Whether positivity is read on properties themselves or on their
/// extensions at the world of evaluation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UltrafilterMode {
    #[default]
    Intension,
    Extension,
}

macro_rules! keyword_enum {
    ($ty:ty { $($name:literal => $variant:expr),* $(,)? }) => {
        impl FromStr for $ty {
            type Err = TheoryError;
            fn from_str(s: &str) -> Result<Self, TheoryError> {
                match s {
                    $($name => Ok($variant),)*
                    _ => Err(TheoryError::UnknownOption(s.to_string())),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self {
                    $(v if *v == $variant => $name,)*
                    _ => unreachable!(),
                })
            }
        }
    };
}

keyword_enum!(QuantifierVariant { "actualist" => QuantifierVariant::Actualist, "possibilist" => QuantifierVariant::Possibilist });
keyword_enum!(EssenceVariant { "scott" => EssenceVariant::Scott, "goedel-1970" => EssenceVariant::Goedel1970 });
keyword_enum!(UltrafilterMode { "intension" => UltrafilterMode::Intension, "extension" => UltrafilterMode::Extension });

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BundleOptions {
    pub quantifiers: QuantifierVariant,
    pub essence: EssenceVariant,
    /// Gödel bundle: add a goal stating that `P` is a modal ultrafilter.
    pub ultrafilter: Option<UltrafilterMode>,
    /// Modal mathematics bundle: add the axiom of infinity.
    pub infinity: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Valid,
    Countermodel,
    Sat,
    Unsat,
}

impl Expectation {
    pub fn label(self) -> &'static str {
        match self {
            Expectation::Valid => "valid",
            Expectation::Countermodel => "countermodel",
            Expectation::Sat => "sat",
            Expectation::Unsat => "unsat",
        }
    }

    pub fn matches(self, verdict: &Verdict) -> bool {
        self.label() == verdict.label()
    }
}

/// One manifest entry: a goal (or the axioms alone) at a scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub goal: Option<String>,
    pub scope: Scope,
    pub expect: Expectation,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    bundle: String,
    checks: Vec<ManifestEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestEntry {
    #[serde(default)]
    options: BundleOptions,
    goal: Option<String>,
    scope: (usize, usize),
    expect: Expectation,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("unknown bundle `{0}`")]
    UnknownBundle(String),
    #[error("unknown option value `{0}`")]
    UnknownOption(String),
    #[error("bundle `{bundle}` does not load: {diagnostic}")]
    Load { bundle: String, diagnostic: String },
    #[error("manifest of `{bundle}`: {msg}")]
    Manifest { bundle: String, msg: String },
    #[error("bundle `{bundle}` has no goal `{goal}`")]
    NoSuchGoal { bundle: String, goal: String },
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Ground(#[from] GroundError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bundle {
    pub id: BundleId,
    pub options: BundleOptions,
    /// The assembled source text.
    pub source: String,
    pub theory: Theory,
    /// Manifest entries that apply to these options.
    pub checks: Vec<Check>,
}

impl Bundle {
    /// Runs one manifest check with the bounded model finder.
    pub fn run_check(&self, check: &Check, opts: &GroundOptions) -> Result<Verdict, TheoryError> {
        run_goal(&self.theory, check.goal.as_deref(), check.scope, opts)
    }
}

/// Satisfiability of the axioms when `goal` is `None`, else bounded validity
/// of the named goal.
pub fn run_goal(theory: &Theory, goal: Option<&str>, scope: Scope, opts: &GroundOptions) -> Result<Verdict, TheoryError> {
    Ok(match goal {
        None => grounder::check_satisfiable(theory, scope, opts)?,
        Some(name) => {
            let g = theory.goal(name).ok_or_else(|| TheoryError::NoSuchGoal {
                bundle: theory.name.clone(),
                goal: name.to_string(),
            })?;
            grounder::check_validity_bounded(theory, &g.term, scope, opts)?
        }
    })
}

/// Source text of a bundle under the given options.
pub fn bundle_source(id: BundleId, options: &BundleOptions) -> String {
    match id {
        BundleId::K | BundleId::T | BundleId::S4 | BundleId::S5 => {
            format!("theory {id}\nframe {id}\n{FRAMES}")
        }
        BundleId::Church => CHURCH.to_string(),
        BundleId::Filters => format!("{FILTER_DEFS}\n{FILTERS}"),
        BundleId::Goedel => {
            let body = match (options.essence, options.quantifiers) {
                (EssenceVariant::Scott, QuantifierVariant::Actualist) => GOEDEL,
                (EssenceVariant::Scott, QuantifierVariant::Possibilist) => GOEDEL_POSSIBILIST,
                (EssenceVariant::Goedel1970, QuantifierVariant::Actualist) => GOEDEL_1970,
                (EssenceVariant::Goedel1970, QuantifierVariant::Possibilist) => GOEDEL_1970_POSSIBILIST,
            };
            match options.ultrafilter {
                None => body.to_string(),
                Some(mode) => {
                    let pred = match mode {
                        UltrafilterMode::Intension => "Ultrafilter",
                        UltrafilterMode::Extension => "UltrafilterExt",
                    };
                    format!("{FILTER_DEFS}\n{body}\ngoal ultrafilter: {pred} P\n")
                }
            }
        }
        BundleId::ModalMath => {
            let mut s = format!("{FILTER_DEFS}\n{MODAL_MATH}");
            if options.infinity {
                s.push_str(INFINITY);
            }
            s
        }
    }
}

pub fn load_bundle(id: BundleId, options: BundleOptions) -> Result<Bundle, TheoryError> {
    let source = bundle_source(id, &options);
    let theory = load_theory(&source).map_err(|e| TheoryError::Load {
        bundle: id.to_string(),
        diagnostic: e.render(&format!("{id}.homl")),
    })?;
    let checks = manifest(id)?
        .into_iter()
        .filter(|(o, _)| *o == options)
        .map(|(_, c)| c)
        .collect::<Vec<_>>();
    for c in &checks {
        if let Some(g) = &c.goal {
            if theory.goal(g).is_none() {
                return Err(TheoryError::NoSuchGoal {
                    bundle: id.to_string(),
                    goal: g.clone(),
                });
            }
        }
    }
    Ok(Bundle {
        id,
        options,
        source,
        theory,
        checks,
    })
}

/// Every manifest entry of a bundle, with the options it applies to.
pub fn manifest(id: BundleId) -> Result<Vec<(BundleOptions, Check)>, TheoryError> {
    let bad = |msg: String| TheoryError::Manifest {
        bundle: id.to_string(),
        msg,
    };
    let file: ManifestFile = serde_json::from_str(id.manifest()).map_err(|e| bad(e.to_string()))?;
    if file.bundle != id.name() {
        return Err(bad(format!("names bundle `{}`", file.bundle)));
    }
    file.checks
        .into_iter()
        .map(|e| {
            let scope = Scope::new(e.scope.0, e.scope.1).map_err(|err| bad(err.to_string()))?;
            Ok((
                e.options,
                Check {
                    goal: e.goal,
                    scope,
                    expect: e.expect,
                },
            ))
        })
        .collect()
}

/// Frame conditions of the four frame bundles.
pub fn frame_of(id: BundleId) -> Option<FrameFlags> {
    match id {
        BundleId::K => Some(FrameFlags::K),
        BundleId::T => Some(FrameFlags::T),
        BundleId::S4 => Some(FrameFlags::S4),
        BundleId::S5 => Some(FrameFlags::S5),
        _ => None,
    }
}
