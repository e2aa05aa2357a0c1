//! One function per subcommand. Each builds a JSON report (the canonical
//! output) and classifies the outcome.

use std::path::Path;

use homlkit_core::analysis::{
    is_modal_ultrafilter, min_positive_count, positive_extensions, AnalysisError, CountMode, CountOptions,
    PropertyFamily,
};
use homlkit_core::grounder::{self, GroundError, GroundOptions, Verdict, DEFAULT_BUDGET};
use homlkit_core::semantics::{satisfies_theory, KripkeModel, Scope, SemanticsError};
use homlkit_core::surface::{load_theory, Theory};
use homlkit_core::theories::{
    check_church_postulates, load_bundle, run_goal, BundleId, BundleOptions, EssenceVariant, QuantifierVariant,
    TheoryError, UltrafilterMode,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::{CountArg, Input, Output, Scopes};

pub const BUDGET_VAR: &str = "HOMLKIT_BUDGET";

const SMALL_SCOPES: [(usize, usize); 4] = [(1, 1), (1, 2), (2, 1), (2, 2)];

/// Scopes at which positive properties are counted, with the expected
/// minimum where one is known.
const COUNT_SCOPES: [((usize, usize), Option<usize>); 3] = [((1, 2), Some(2)), ((1, 3), Some(4)), ((2, 2), None)];

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        if self.is_budget() {
            Status::Incomplete.exit_code()
        } else {
            2
        }
    }

    fn is_budget(&self) -> bool {
        matches!(
            self,
            CliError::Ground(GroundError::BudgetExhausted { .. })
                | CliError::Theory(TheoryError::Ground(GroundError::BudgetExhausted { .. }))
                | CliError::Analysis(AnalysisError::Ground(GroundError::BudgetExhausted { .. }))
        )
    }
}

/// Outcome classes, ordered by precedence when combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Expected,
    Incomplete,
    Unexpected,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Expected => 0,
            Status::Unexpected => 1,
            Status::Incomplete => 3,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Expected => "expected",
            Status::Unexpected => "unexpected",
            Status::Incomplete => "incomplete",
        }
    }

    fn worsen(&mut self, other: Status) {
        *self = (*self).max(other);
    }

    fn from_ok(ok: bool) -> Status {
        if ok {
            Status::Expected
        } else {
            Status::Unexpected
        }
    }
}

pub struct Report {
    pub body: Value,
    pub status: Status,
    /// Text output that replaces the rendered report (DIMACS).
    pub raw: Option<String>,
}

impl Report {
    fn new(command: &str, mut body: Value, status: Status) -> Report {
        body["command"] = json!(command);
        body["status"] = json!(status.label());
        Report { body, status, raw: None }
    }
}

struct Loaded {
    label: String,
    theory: Theory,
}

fn load(input: &Input) -> Result<Loaded, CliError> {
    let (label, mut theory) = match (&input.bundle, &input.file) {
        (Some(id), _) => {
            let options = BundleOptions {
                quantifiers: input.quantifiers,
                essence: input.essence,
                ultrafilter: input.ultrafilter,
                infinity: input.infinity,
            };
            let bundle = load_bundle(*id, options).map_err(|e| match e {
                TheoryError::Load { diagnostic, .. } => CliError::Parse(diagnostic),
                e => e.into(),
            })?;
            (id.to_string(), bundle.theory)
        }
        (None, Some(path)) => (path.display().to_string(), load_file(path)?),
        (None, None) => return Err(CliError::Usage("one of --bundle or --file is required".into())),
    };
    if let Some(frame) = input.frame {
        theory.frame = frame;
    }
    Ok(Loaded { label, theory })
}

fn load_file(path: &Path) -> Result<Theory, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    load_theory(&text).map_err(|e| CliError::Parse(e.render(&path.display().to_string())))
}

/// `--budget` wins over the environment, which wins over the default.
pub fn ground_options(output: &Output) -> Result<GroundOptions, CliError> {
    let budget = match output.budget {
        Some(b) => b,
        None => match std::env::var(BUDGET_VAR) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{BUDGET_VAR} must be a number, got `{s}`")))?,
            Err(_) => DEFAULT_BUDGET,
        },
    };
    Ok(GroundOptions {
        budget,
        symmetry_breaking: output.symmetry_breaking,
    })
}

fn scope(pair: (usize, usize)) -> Result<Scope, CliError> {
    Scope::new(pair.0, pair.1).map_err(|e| CliError::Usage(e.to_string()))
}

fn scopes_or(given: &Scopes, default: &[(usize, usize)]) -> Result<Vec<Scope>, CliError> {
    let pairs = if given.scopes.is_empty() { default } else { &given.scopes };
    pairs.iter().map(|&p| scope(p)).collect()
}

fn scope_json(s: Scope) -> Value {
    json!([s.worlds, s.entities])
}

fn verdict_json(v: &Verdict) -> Value {
    match v {
        Verdict::ValidUpToScope(_) | Verdict::Unsatisfiable(_) => json!({"verdict": v.label()}),
        Verdict::Countermodel { model, world } => {
            json!({"verdict": v.label(), "world": world, "model": model.to_json()})
        }
        Verdict::Satisfiable(model) => json!({"verdict": v.label(), "model": model.to_json()}),
    }
}

fn unknown() -> Value {
    json!({"verdict": "unknown"})
}

pub fn check(input: &Input, scopes: &Scopes, goals: &[String], output: &Output) -> Result<Report, CliError> {
    let Loaded { label, theory } = load(input)?;
    let opts = ground_options(output)?;
    let scopes = scopes_or(scopes, &SMALL_SCOPES)?;
    for g in goals {
        if theory.goal(g).is_none() {
            return Err(CliError::Usage(format!("theory `{label}` has no goal `{g}`")));
        }
    }
    let targets: Vec<Option<&str>> = if !goals.is_empty() {
        goals.iter().map(|g| Some(g.as_str())).collect()
    } else if theory.goals.is_empty() {
        vec![None]
    } else {
        theory.goals.iter().map(|g| Some(g.name.as_str())).collect()
    };
    let mut status = Status::Expected;
    let mut results = Vec::new();
    for &s in &scopes {
        for &goal in &targets {
            let mut entry = match run_goal(&theory, goal, s, &opts) {
                Ok(v) => {
                    let ok = match goal {
                        Some(_) => matches!(v, Verdict::ValidUpToScope(_)),
                        None => matches!(v, Verdict::Satisfiable(_)),
                    };
                    status.worsen(Status::from_ok(ok));
                    verdict_json(&v)
                }
                Err(TheoryError::Ground(GroundError::BudgetExhausted { .. })) => {
                    status.worsen(Status::Incomplete);
                    unknown()
                }
                Err(e) => return Err(e.into()),
            };
            entry["scope"] = scope_json(s);
            entry["goal"] = json!(goal);
            results.push(entry);
        }
    }
    let body = json!({"theory": label, "frame": theory.frame.to_string(), "results": results});
    Ok(Report::new("check", body, status))
}

pub fn find_model(input: &Input, scopes: &Scopes, output: &Output) -> Result<Report, CliError> {
    let Loaded { label, theory } = load(input)?;
    let opts = ground_options(output)?;
    let mut tried = Vec::new();
    let mut found = None;
    let mut status = Status::Unexpected;
    for s in scopes_or(scopes, &SMALL_SCOPES)? {
        match grounder::find_model(&theory, s, &opts) {
            Ok(Some(model)) => {
                tried.push(json!({"scope": scope_json(s), "verdict": "sat"}));
                found = Some((s, model));
                break;
            }
            Ok(None) => tried.push(json!({"scope": scope_json(s), "verdict": "unsat"})),
            Err(GroundError::BudgetExhausted { .. }) => {
                status = Status::Incomplete;
                tried.push(json!({"scope": scope_json(s), "verdict": "unknown"}));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let mut body = json!({"theory": label, "frame": theory.frame.to_string(), "tried": tried});
    if let Some((s, model)) = found {
        let holds = satisfies_theory(&model, &theory)?;
        body["scope"] = scope_json(s);
        body["axioms_hold"] = json!(holds);
        body["model"] = model.to_json();
        status = Status::from_ok(holds);
    }
    Ok(Report::new("find-model", body, status))
}

pub fn enumerate(input: &Input, pair: (usize, usize), limit: usize, output: &Output) -> Result<Report, CliError> {
    let Loaded { label, theory } = load(input)?;
    let opts = ground_options(output)?;
    let s = scope(pair)?;
    let e = grounder::enumerate_models(&theory, s, limit, &opts)?;
    let mut all_hold = true;
    for m in &e.models {
        all_hold &= satisfies_theory(m, &theory)?;
    }
    let body = json!({
        "theory": label,
        "scope": scope_json(s),
        "count": e.models.len(),
        "exhausted": e.exhausted,
        "axioms_hold": all_hold,
        "models": e.models.iter().map(KripkeModel::to_json).collect::<Vec<_>>(),
    });
    Ok(Report::new("enumerate", body, Status::from_ok(all_hold)))
}

pub fn church_suite(scopes: &Scopes, output: &Output) -> Result<Report, CliError> {
    let opts = ground_options(output)?;
    let mut status = Status::Expected;
    let mut runs = Vec::new();
    for s in scopes_or(scopes, &[(2, 2), (1, 2)])? {
        let report = check_church_postulates(s, &opts)?;
        status.worsen(Status::from_ok(report.all_as_expected()));
        let postulates: Vec<Value> = report
            .results
            .iter()
            .map(|r| {
                let mut v = verdict_json(&r.verdict);
                v["name"] = json!(r.name);
                v["expected"] = json!(if r.expect_valid { "valid" } else { "countermodel" });
                v["as_expected"] = json!(r.as_expected());
                if let Some(c) = r.canonical {
                    v["canonical"] = json!(c);
                }
                v
            })
            .collect();
        runs.push(json!({"scope": scope_json(s), "postulates": postulates}));
    }
    Ok(Report::new("church-suite", json!({"runs": runs}), status))
}

/// Every model at one scope (up to `limit`), each checked against the
/// axioms and for the ultrafilter property of `P`.
fn survey(theory: &Theory, s: Scope, limit: usize, mode: UltrafilterMode, opts: &GroundOptions) -> Result<Value, CliError> {
    let e = grounder::enumerate_models(theory, s, limit, opts)?;
    let (mut axiom_failures, mut ultrafilter_failures) = (0, 0);
    for m in &e.models {
        axiom_failures += !satisfies_theory(m, theory)? as usize;
        let family = PropertyFamily::from_model(m, "P")?;
        ultrafilter_failures += !is_modal_ultrafilter(m, &family, mode)?.global as usize;
    }
    Ok(json!({
        "models": e.models.len(),
        "exhausted": e.exhausted,
        "axiom_failures": axiom_failures,
        "ultrafilter_failures": ultrafilter_failures,
    }))
}

pub fn goedel_suite(
    quantifiers: Option<QuantifierVariant>,
    essence: EssenceVariant,
    mode: UltrafilterMode,
    scopes: &Scopes,
    limit: usize,
    output: &Output,
) -> Result<Report, CliError> {
    let opts = ground_options(output)?;
    let scopes = scopes_or(scopes, &SMALL_SCOPES)?;
    let variants = match quantifiers {
        Some(q) => vec![q],
        None => vec![QuantifierVariant::Actualist, QuantifierVariant::Possibilist],
    };
    let consistent = essence == EssenceVariant::Scott;
    let mut status = Status::Expected;
    let mut reports = Vec::new();
    for q in variants {
        let options = BundleOptions {
            quantifiers: q,
            essence,
            ..BundleOptions::default()
        };
        let theory = load_bundle(BundleId::Goedel, options)?.theory;
        let mut per_scope = Vec::new();
        for &s in &scopes {
            let mut entry = survey(&theory, s, limit, mode, &opts)?;
            let models = entry["models"].as_u64().unwrap_or(0);
            let t3 = match run_goal(&theory, Some("T3"), s, &opts) {
                Ok(v) => verdict_json(&v),
                Err(TheoryError::Ground(GroundError::BudgetExhausted { .. })) => unknown(),
                Err(e) => return Err(e.into()),
            };
            let ok = (models > 0) == consistent
                && t3["verdict"] == "valid"
                && entry["axiom_failures"] == 0
                && entry["ultrafilter_failures"] == 0;
            if t3["verdict"] == "unknown" {
                status.worsen(Status::Incomplete);
            } else {
                status.worsen(Status::from_ok(ok));
            }
            entry["scope"] = scope_json(s);
            entry["necessary_existence"] = t3;
            per_scope.push(entry);
        }
        let mut counts = Vec::new();
        for (pair, figure) in COUNT_SCOPES {
            let s = scope(pair)?;
            let r = min_positive_count(
                &theory,
                s,
                &CountOptions {
                    limit,
                    ground: opts,
                    ..CountOptions::default()
                },
            )?;
            let ok = if consistent {
                !r.empty && figure.is_none_or(|f| r.min == f)
            } else {
                r.empty
            };
            status.worsen(if !r.complete { Status::Incomplete } else { Status::from_ok(ok) });
            let mut entry = survey(&theory, s, limit, mode, &opts)?;
            status.worsen(Status::from_ok(entry["ultrafilter_failures"] == 0 && entry["axiom_failures"] == 0));
            entry["scope"] = scope_json(s);
            entry["min_positive"] = json!(r.min);
            entry["expected_min"] = json!(figure);
            entry["complete"] = json!(r.complete);
            counts.push(entry);
        }
        reports.push(json!({
            "quantifiers": q.to_string(),
            "scopes": per_scope,
            "counts": counts,
        }));
    }
    let body = json!({
        "essence": essence.to_string(),
        "ultrafilter": mode.to_string(),
        "variants": reports,
    });
    Ok(Report::new("goedel-suite", body, status))
}

#[allow(clippy::too_many_arguments)]
pub fn count_positive(
    input: &Input,
    worlds: usize,
    entities: usize,
    count: CountArg,
    world: usize,
    existing: Option<usize>,
    limit: usize,
    output: &Output,
) -> Result<Report, CliError> {
    let Loaded { label, theory } = load(input)?;
    let s = scope((worlds, entities))?;
    if world >= worlds {
        return Err(CliError::Usage(format!("world {world} out of range for {worlds} worlds")));
    }
    let mode = match count {
        CountArg::Designated => CountMode::Designated(world),
        CountArg::AllWorlds => CountMode::AllWorlds,
    };
    let opts = CountOptions {
        mode,
        existing,
        limit,
        ground: ground_options(output)?,
    };
    let r = min_positive_count(&theory, s, &opts)?;
    let mut body = json!({
        "theory": label,
        "scope": scope_json(s),
        "mode": match count { CountArg::Designated => "designated", CountArg::AllWorlds => "all-worlds" },
        "world": world,
        "existing": existing,
        "min": r.min,
        "models": r.models,
        "counted": r.counted,
        "complete": r.complete,
        "empty": r.empty,
    });
    if let Some(w) = &r.witness {
        body["witness"] = w.to_json();
        body["witness_extensions"] = json!(positive_extensions(w, world)?);
    }
    let status = if r.empty {
        Status::Unexpected
    } else if !r.complete {
        Status::Incomplete
    } else {
        Status::Expected
    };
    Ok(Report::new("count-positive", body, status))
}

pub fn export_cnf(input: &Input, pair: (usize, usize), goal: Option<&str>, output: &Output) -> Result<Report, CliError> {
    let Loaded { label, theory } = load(input)?;
    let opts = ground_options(output)?;
    let goal_term = match goal {
        Some(g) => Some(
            &theory
                .goal(g)
                .ok_or_else(|| CliError::Usage(format!("theory `{label}` has no goal `{g}`")))?
                .term,
        ),
        None => None,
    };
    let p = grounder::ground_with(&theory, scope(pair)?, goal_term, &opts)?;
    let dimacs = grounder::export_dimacs(&p);
    let body = json!({
        "theory": label,
        "scope": scope_json(p.scope),
        "goal": goal,
        "variables": p.cnf.num_vars(),
        "clauses": p.cnf.clauses().len(),
        "dimacs": dimacs,
    });
    let mut report = Report::new("export-cnf", body, Status::Expected);
    report.raw = Some(dimacs);
    Ok(report)
}
