//! Bounded model finding: a theory at a finite scope is compiled into CNF
//! over the unknown parts of a model (accessibility, existence, constant
//! interpretations), solved, and decoded back into a [`KripkeModel`].

mod cnf;
mod ground;
pub mod solver;

use thiserror::Error;

pub use cnf::{Cnf, Lit, VarMeaning};
pub use ground::{ConstLayout, Layout};
pub use solver::{Assignment, SolveOutcome, Solver, DEFAULT_BUDGET};

use crate::semantics::{KripkeModel, Scope, SemValue, SemanticsError};
use crate::surface::{inline_definitions, inline_term, Term, Theory};
use ground::Grounder;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("constant `{constant}` has unsupported type `{ty}` (order above three)")]
    Unsupported { constant: String, ty: crate::surface::LogicType },
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("ill-typed term during grounding: {0}")]
    IllTyped(String),
    #[error("solver budget of {budget} conflicts exhausted")]
    BudgetExhausted { budget: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroundOptions {
    /// Conflict budget per solver call.
    pub budget: u64,
    /// Add lex-leader constraints for swaps of adjacent worlds. Preserves
    /// satisfiability but not model counts.
    pub symmetry_breaking: bool,
}

impl Default for GroundOptions {
    fn default() -> Self {
        GroundOptions {
            budget: DEFAULT_BUDGET,
            symmetry_breaking: false,
        }
    }
}

/// A theory compiled to CNF, with enough layout to decode assignments.
#[derive(Clone, Debug)]
pub struct GroundProblem {
    pub scope: Scope,
    pub cnf: Cnf,
    pub layout: Layout,
    /// Per-world literals of the goal in refutation mode.
    pub goal: Option<Vec<Lit>>,
}

impl GroundProblem {
    /// The decision variables: everything that is part of the model.
    pub fn decision_vars(&self) -> Vec<u32> {
        (1..=self.cnf.num_vars() as u32)
            .filter(|&v| self.cnf.meaning(v).is_decision())
            .collect()
    }

    pub fn decode(&self, a: &Assignment) -> KripkeModel {
        let scope = self.scope;
        let mut model = KripkeModel::universal(scope);
        model.access = self
            .layout
            .access
            .iter()
            .map(|row| row.iter().map(|&l| a.value(l)).collect())
            .collect();
        model.exists_at = self
            .layout
            .exists
            .iter()
            .map(|row| row.iter().map(|&l| a.value(l)).collect())
            .collect();
        for c in &self.layout.constants {
            let (args, base) = c.ty.uncurry();
            let sizes: Vec<u64> = args
                .iter()
                .map(|t| crate::semantics::denotation_size(t, &scope).expect("checked when grounding"))
                .collect();
            let mut groups = c.groups.iter();
            let value = decode_table(&sizes, base, &mut groups, a);
            model
                .interpret(&c.name, c.ty.clone(), value)
                .expect("decoded values are well-typed");
        }
        model
    }

    /// A world at which the goal fails under `a`.
    pub fn failing_world(&self, a: &Assignment) -> Option<usize> {
        self.goal.as_ref()?.iter().position(|&l| !a.value(l))
    }
}

fn decode_table<'g>(
    sizes: &[u64],
    base: &crate::surface::LogicType,
    groups: &mut impl Iterator<Item = &'g Vec<Lit>>,
    a: &Assignment,
) -> SemValue {
    match sizes.split_first() {
        None => {
            let g = groups.next().expect("one group per argument tuple");
            match base {
                crate::surface::LogicType::Prop => {
                    SemValue::table(g.iter().map(|&l| SemValue::Bool(a.value(l))).collect())
                }
                _ => SemValue::Entity(g.iter().position(|&l| a.value(l)).expect("exactly-one selector")),
            }
        }
        Some((&size, rest)) => SemValue::table((0..size).map(|_| decode_table(rest, base, groups, a)).collect()),
    }
}

/// Grounds `theory` at `scope`; with a goal, additionally requires the goal
/// to fail at some world (refutation mode).
pub fn ground_with(
    theory: &Theory,
    scope: Scope,
    goal: Option<&Term>,
    opts: &GroundOptions,
) -> Result<GroundProblem, GroundError> {
    let th = &inline_definitions(theory);
    let goal = goal.map(|g| inline_term(theory, g));
    let mut cnf = Cnf::new();
    let (mut g, layout) = Grounder::new(&mut cnf, th, scope)?;
    for ax in &th.axioms {
        for l in g.formula(&ax.term)? {
            g.cnf().add_clause([l]);
        }
    }
    let goal_lits = match &goal {
        Some(t) => {
            let lits = g.formula(t)?;
            g.cnf().add_clause(lits.iter().map(|&l| !l));
            Some(lits)
        }
        None => None,
    };
    drop(g);
    if opts.symmetry_breaking {
        break_world_symmetry(&mut cnf, &layout);
    }
    Ok(GroundProblem {
        scope,
        cnf,
        layout,
        goal: goal_lits,
    })
}

pub fn ground(theory: &Theory, scope: Scope) -> Result<GroundProblem, GroundError> {
    ground_with(theory, scope, None, &GroundOptions::default())
}

/// Lex-leader constraints over the accessibility and existence variables
/// for each transposition of adjacent worlds. Every constraint in the
/// problem is invariant under renaming worlds, so some member of each
/// symmetry class survives.
fn break_world_symmetry(cnf: &mut Cnf, layout: &Layout) {
    let n = layout.access.len();
    for w in 0..n.saturating_sub(1) {
        let swap = |x: usize| {
            if x == w {
                w + 1
            } else if x == w + 1 {
                w
            } else {
                x
            }
        };
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                pairs.push((layout.access[a][b], layout.access[swap(a)][swap(b)]));
            }
        }
        for row in &layout.exists {
            for a in 0..n {
                pairs.push((row[a], row[swap(a)]));
            }
        }
        let mut prefix_equal = Lit::TRUE;
        for (x, y) in pairs {
            if x == y {
                continue;
            }
            cnf.add_clause([!prefix_equal, !x, y]);
            let same = cnf.iff(x, y);
            prefix_equal = cnf.and(prefix_equal, same);
            if prefix_equal == Lit::FALSE {
                break;
            }
        }
    }
}

/// Solves a ground problem; `Ok(None)` means unsatisfiable.
pub fn solve(problem: &GroundProblem, budget: u64) -> Result<Option<Assignment>, GroundError> {
    match Solver::from_cnf(&problem.cnf).solve(budget) {
        SolveOutcome::Sat(a) => Ok(Some(a)),
        SolveOutcome::Unsat => Ok(None),
        SolveOutcome::Unknown => Err(GroundError::BudgetExhausted { budget }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    ValidUpToScope(Scope),
    Countermodel { model: KripkeModel, world: usize },
    Satisfiable(KripkeModel),
    Unsatisfiable(Scope),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::ValidUpToScope(_) => "valid",
            Verdict::Countermodel { .. } => "countermodel",
            Verdict::Satisfiable(_) => "sat",
            Verdict::Unsatisfiable(_) => "unsat",
        }
    }

    pub fn model(&self) -> Option<&KripkeModel> {
        match self {
            Verdict::Countermodel { model, .. } | Verdict::Satisfiable(model) => Some(model),
            _ => None,
        }
    }
}

/// First model of the theory's axioms and frame, if any exists at `scope`.
pub fn find_model(theory: &Theory, scope: Scope, opts: &GroundOptions) -> Result<Option<KripkeModel>, GroundError> {
    let p = ground_with(theory, scope, None, opts)?;
    Ok(solve(&p, opts.budget)?.map(|a| p.decode(&a)))
}

pub fn check_satisfiable(theory: &Theory, scope: Scope, opts: &GroundOptions) -> Result<Verdict, GroundError> {
    Ok(match find_model(theory, scope, opts)? {
        Some(m) => Verdict::Satisfiable(m),
        None => Verdict::Unsatisfiable(scope),
    })
}

/// Searches for a model of the axioms in which `goal` fails at some world.
pub fn check_validity_bounded(
    theory: &Theory,
    goal: &Term,
    scope: Scope,
    opts: &GroundOptions,
) -> Result<Verdict, GroundError> {
    let p = ground_with(theory, scope, Some(goal), opts)?;
    Ok(match solve(&p, opts.budget)? {
        Some(a) => Verdict::Countermodel {
            model: p.decode(&a),
            world: p.failing_world(&a).expect("refutation clause holds"),
        },
        None => Verdict::ValidUpToScope(scope),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub models: Vec<KripkeModel>,
    /// All models were produced (the limit was not reached).
    pub exhausted: bool,
}

/// Models of the theory at `scope`, pairwise distinct, in solver order;
/// each found model is excluded by a clause over the decision variables.
pub fn enumerate_models(
    theory: &Theory,
    scope: Scope,
    limit: usize,
    opts: &GroundOptions,
) -> Result<Enumeration, GroundError> {
    let p = ground_with(theory, scope, None, opts)?;
    enumerate_problem(&p, limit, opts.budget, |_| {})
}

/// Enumerates models of an already grounded problem, calling `visit` on each.
pub fn enumerate_problem(
    p: &GroundProblem,
    limit: usize,
    budget: u64,
    mut visit: impl FnMut(&KripkeModel),
) -> Result<Enumeration, GroundError> {
    let decision = p.decision_vars();
    let mut solver = Solver::from_cnf(&p.cnf);
    let mut models = Vec::new();
    loop {
        if models.len() >= limit {
            return Ok(Enumeration {
                models,
                exhausted: false,
            });
        }
        match solver.solve(budget) {
            SolveOutcome::Sat(a) => {
                let m = p.decode(&a);
                visit(&m);
                models.push(m);
                let block: Vec<Lit> = decision
                    .iter()
                    .map(|&v| Lit::new(v, !a.value(Lit::new(v, true))))
                    .collect();
                solver.add_clause(&block);
            }
            SolveOutcome::Unsat => {
                return Ok(Enumeration {
                    models,
                    exhausted: true,
                })
            }
            SolveOutcome::Unknown => return Err(GroundError::BudgetExhausted { budget }),
        }
    }
}

/// DIMACS CNF text of a ground problem.
pub fn export_dimacs(problem: &GroundProblem) -> String {
    problem.cnf.to_dimacs()
}

#[cfg(test)]
mod tests;
