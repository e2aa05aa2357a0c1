use std::collections::HashMap;

use super::term::{Binder, Term};
use super::types::LogicType;
use super::{Formula, Theory};

/// Inlines definitions and expands Leibniz equality and actualist quantifiers.
///
/// The result has no definitions and its formulas mention only signature
/// constants and `existsAt`.
pub fn elaborate(theory: &Theory) -> Theory {
    let env = inline_env(theory, true);
    let go = |fs: &[Formula]| {
        fs.iter()
            .map(|f| Formula {
                name: f.name.clone(),
                term: expand(&f.term, &env),
            })
            .collect()
    };
    Theory {
        name: theory.name.clone(),
        signature: theory.signature.clone(),
        definitions: Vec::new(),
        axioms: go(&theory.axioms),
        goals: go(&theory.goals),
        frame: theory.frame,
    }
}

/// Elaborates a single term in the context of `theory`'s definitions.
pub fn elaborate_term(theory: &Theory, term: &Term) -> Term {
    expand(term, &inline_env(theory, true))
}

/// Inlines definitions only, keeping `==` and actualist quantifiers as
/// primitives. Both back ends interpret those directly, which avoids the
/// quantifier over all predicates that expanding `==` introduces.
pub fn inline_definitions(theory: &Theory) -> Theory {
    if theory.definitions.is_empty() {
        return theory.clone();
    }
    let env = inline_env(theory, false);
    let go = |fs: &[Formula]| {
        fs.iter()
            .map(|f| Formula {
                name: f.name.clone(),
                term: rewrite(&f.term, &env, false),
            })
            .collect()
    };
    Theory {
        name: theory.name.clone(),
        signature: theory.signature.clone(),
        definitions: Vec::new(),
        axioms: go(&theory.axioms),
        goals: go(&theory.goals),
        frame: theory.frame,
    }
}

/// [`inline_definitions`] for a single term.
pub fn inline_term(theory: &Theory, term: &Term) -> Term {
    rewrite(term, &inline_env(theory, false), false)
}

fn inline_env(theory: &Theory, desugar: bool) -> HashMap<String, Term> {
    let mut env = HashMap::new();
    for d in &theory.definitions {
        let body = rewrite(&d.body, &env, desugar);
        env.insert(d.name.clone(), body);
    }
    env
}

fn expand(t: &Term, defs: &HashMap<String, Term>) -> Term {
    rewrite(t, defs, true)
}

fn rewrite(t: &Term, defs: &HashMap<String, Term>, desugar: bool) -> Term {
    let expand = |t: &Term, defs: &HashMap<String, Term>| rewrite(t, defs, desugar);
    let go = |t: &Term| Box::new(expand(t, defs));
    match t {
        // Definition bodies are closed, so no shifting is needed.
        Term::Const(name, _) => defs.get(name).cloned().unwrap_or_else(|| t.clone()),
        Term::Var(_) | Term::Top | Term::Bottom => t.clone(),
        Term::Lam(b, body) => Term::Lam(b.clone(), go(body)),
        Term::App(f, a) => Term::App(go(f), go(a)),
        Term::Not(a) => Term::Not(go(a)),
        Term::And(a, b) => Term::And(go(a), go(b)),
        Term::Or(a, b) => Term::Or(go(a), go(b)),
        Term::Implies(a, b) => Term::Implies(go(a), go(b)),
        Term::Iff(a, b) => Term::Iff(go(a), go(b)),
        Term::Box(a) => Term::Box(go(a)),
        Term::Diamond(a) => Term::Diamond(go(a)),
        Term::ForallP(b, body) => Term::ForallP(b.clone(), go(body)),
        Term::ExistsP(b, body) => Term::ExistsP(b.clone(), go(body)),
        Term::ForallA(b, body) if !desugar => Term::ForallA(b.clone(), go(body)),
        Term::ExistsA(b, body) if !desugar => Term::ExistsA(b.clone(), go(body)),
        Term::LeibnizEq(ty, a, b) if !desugar => Term::LeibnizEq(ty.clone(), go(a), go(b)),
        Term::ForallA(b, body) => Term::forall(
            b.clone(),
            Term::implies(Term::app(Term::exists_at(), Term::Var(0)), expand(body, defs)),
        ),
        Term::ExistsA(b, body) => Term::exists(
            b.clone(),
            Term::and(Term::app(Term::exists_at(), Term::Var(0)), expand(body, defs)),
        ),
        Term::LeibnizEq(ty, a, b) => {
            let q = Binder::new("q", LogicType::fun(ty.clone(), LogicType::Prop));
            let a = expand(a, defs).shift(1, 0);
            let b = expand(b, defs).shift(1, 0);
            Term::forall(
                q,
                Term::implies(Term::app(Term::Var(0), a), Term::app(Term::Var(0), b)),
            )
        }
    }
}
