//! Core typed terms with de Bruijn indices.
//!
//! Binder names are kept only as printing hints: they are ignored by
//! equality, so `==` on terms is alpha-equivalence.

use std::collections::BTreeSet;
use std::hash::{Hash, Hasher};

use super::types::LogicType;

#[derive(Clone, Debug)]
pub struct Binder {
    pub name: String,
    pub ty: LogicType,
}

impl Binder {
    pub fn new(name: impl Into<String>, ty: LogicType) -> Binder {
        Binder {
            name: name.into(),
            ty,
        }
    }
}

impl PartialEq for Binder {
    fn eq(&self, other: &Self) -> bool {
        self.ty == other.ty
    }
}

impl Eq for Binder {}

impl Hash for Binder {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ty.hash(state);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    /// De Bruijn index; 0 is the innermost binder.
    Var(usize),
    Const(String, LogicType),
    Top,
    Bottom,
    Lam(Binder, Box<Term>),
    App(Box<Term>, Box<Term>),
    Not(Box<Term>),
    And(Box<Term>, Box<Term>),
    Or(Box<Term>, Box<Term>),
    Implies(Box<Term>, Box<Term>),
    Iff(Box<Term>, Box<Term>),
    Box(Box<Term>),
    Diamond(Box<Term>),
    ForallP(Binder, Box<Term>),
    ExistsP(Binder, Box<Term>),
    /// Actualist quantifiers; the binder is always of type `Ind`.
    ForallA(Binder, Box<Term>),
    ExistsA(Binder, Box<Term>),
    /// Leibniz equality at the recorded argument type.
    LeibnizEq(LogicType, Box<Term>, Box<Term>),
}

/// Name of the distinguished existence predicate `i > prop`.
pub const EXISTS_AT: &str = "existsAt";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CoreTypeError {
    #[error("unbound de Bruijn index {0}")]
    Unbound(usize),
    #[error("type mismatch: expected `{expected}`, found `{found}`")]
    Mismatch {
        expected: LogicType,
        found: LogicType,
    },
    #[error("applied a term of non-function type `{0}`")]
    NotAFunction(LogicType),
    #[error("actualist quantifier over `{0}`")]
    ActualistNonInd(LogicType),
}

fn expect(expected: &LogicType, found: LogicType) -> Result<(), CoreTypeError> {
    if *expected == found {
        Ok(())
    } else {
        Err(CoreTypeError::Mismatch {
            expected: expected.clone(),
            found,
        })
    }
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn constant(name: impl Into<String>, ty: LogicType) -> Term {
        Term::Const(name.into(), ty)
    }

    pub fn exists_at() -> Term {
        Term::Const(EXISTS_AT.to_string(), LogicType::property())
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn lam(b: Binder, body: Term) -> Term {
        Term::Lam(b, Box::new(body))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn and(a: Term, b: Term) -> Term {
        Term::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Term, b: Term) -> Term {
        Term::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Term, b: Term) -> Term {
        Term::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Term, b: Term) -> Term {
        Term::Iff(Box::new(a), Box::new(b))
    }

    pub fn boxed(t: Term) -> Term {
        Term::Box(Box::new(t))
    }

    pub fn diamond(t: Term) -> Term {
        Term::Diamond(Box::new(t))
    }

    pub fn forall(b: Binder, body: Term) -> Term {
        Term::ForallP(b, Box::new(body))
    }

    pub fn exists(b: Binder, body: Term) -> Term {
        Term::ExistsP(b, Box::new(body))
    }

    /// Infers the type of `self` in a context of bound-variable types
    /// (last element is index 0).
    pub fn type_of(&self, ctx: &mut Vec<LogicType>) -> Result<LogicType, CoreTypeError> {
        let prop = LogicType::Prop;
        match self {
            Term::Var(i) => ctx
                .len()
                .checked_sub(i + 1)
                .map(|k| ctx[k].clone())
                .ok_or(CoreTypeError::Unbound(*i)),
            Term::Const(_, ty) => Ok(ty.clone()),
            Term::Top | Term::Bottom => Ok(prop),
            Term::Lam(b, body) => {
                ctx.push(b.ty.clone());
                let r = body.type_of(ctx);
                ctx.pop();
                Ok(LogicType::fun(b.ty.clone(), r?))
            }
            Term::App(f, a) => match f.type_of(ctx)? {
                LogicType::Fun(dom, cod) => {
                    expect(&dom, a.type_of(ctx)?)?;
                    Ok(*cod)
                }
                other => Err(CoreTypeError::NotAFunction(other)),
            },
            Term::Not(t) | Term::Box(t) | Term::Diamond(t) => {
                expect(&prop, t.type_of(ctx)?)?;
                Ok(prop)
            }
            Term::And(a, b) | Term::Or(a, b) | Term::Implies(a, b) | Term::Iff(a, b) => {
                expect(&prop, a.type_of(ctx)?)?;
                expect(&prop, b.type_of(ctx)?)?;
                Ok(prop)
            }
            Term::ForallP(b, body)
            | Term::ExistsP(b, body)
            | Term::ForallA(b, body)
            | Term::ExistsA(b, body) => {
                if matches!(self, Term::ForallA(..) | Term::ExistsA(..)) && b.ty != LogicType::Ind
                {
                    return Err(CoreTypeError::ActualistNonInd(b.ty.clone()));
                }
                ctx.push(b.ty.clone());
                let r = body.type_of(ctx);
                ctx.pop();
                expect(&prop, r?)?;
                Ok(prop)
            }
            Term::LeibnizEq(ty, a, b) => {
                expect(ty, a.type_of(ctx)?)?;
                expect(ty, b.type_of(ctx)?)?;
                Ok(prop)
            }
        }
    }

    /// Adds `by` to every variable index `>= cutoff`.
    pub fn shift(&self, by: usize, cutoff: usize) -> Term {
        if by == 0 {
            return self.clone();
        }
        self.map_vars(cutoff, &|i, depth| {
            if i >= depth {
                Term::Var(i + by)
            } else {
                Term::Var(i)
            }
        })
    }

    fn map_vars(&self, depth: usize, f: &dyn Fn(usize, usize) -> Term) -> Term {
        let go = |t: &Term| Box::new(t.map_vars(depth, f));
        let under = |t: &Term| Box::new(t.map_vars(depth + 1, f));
        match self {
            Term::Var(i) => f(*i, depth),
            Term::Const(..) | Term::Top | Term::Bottom => self.clone(),
            Term::Lam(b, t) => Term::Lam(b.clone(), under(t)),
            Term::App(a, b) => Term::App(go(a), go(b)),
            Term::Not(t) => Term::Not(go(t)),
            Term::And(a, b) => Term::And(go(a), go(b)),
            Term::Or(a, b) => Term::Or(go(a), go(b)),
            Term::Implies(a, b) => Term::Implies(go(a), go(b)),
            Term::Iff(a, b) => Term::Iff(go(a), go(b)),
            Term::Box(t) => Term::Box(go(t)),
            Term::Diamond(t) => Term::Diamond(go(t)),
            Term::ForallP(b, t) => Term::ForallP(b.clone(), under(t)),
            Term::ExistsP(b, t) => Term::ExistsP(b.clone(), under(t)),
            Term::ForallA(b, t) => Term::ForallA(b.clone(), under(t)),
            Term::ExistsA(b, t) => Term::ExistsA(b.clone(), under(t)),
            Term::LeibnizEq(ty, a, b) => Term::LeibnizEq(ty.clone(), go(a), go(b)),
        }
    }

    /// Immediate subterms, in left-to-right order.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Const(..) | Term::Top | Term::Bottom => vec![],
            Term::Lam(_, t)
            | Term::Not(t)
            | Term::Box(t)
            | Term::Diamond(t)
            | Term::ForallP(_, t)
            | Term::ExistsP(_, t)
            | Term::ForallA(_, t)
            | Term::ExistsA(_, t) => vec![t],
            Term::App(a, b)
            | Term::And(a, b)
            | Term::Or(a, b)
            | Term::Implies(a, b)
            | Term::Iff(a, b)
            | Term::LeibnizEq(_, a, b) => vec![a, b],
        }
    }

    pub fn any(&self, pred: &dyn Fn(&Term) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any(pred))
    }

    /// True if the term still contains Leibniz equality or actualist quantifiers.
    pub fn has_sugar(&self) -> bool {
        self.any(&|t| {
            matches!(
                t,
                Term::LeibnizEq(..) | Term::ForallA(..) | Term::ExistsA(..)
            )
        })
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut BTreeSet<String>) {
        if let Term::Const(name, _) = self {
            out.insert(name.clone());
        }
        for c in self.children() {
            c.collect_constants(out);
        }
    }

    pub fn is_closed(&self) -> bool {
        self.max_free(0).is_none()
    }

    fn max_free(&self, depth: usize) -> Option<usize> {
        match self {
            Term::Var(i) if *i >= depth => Some(i - depth),
            Term::Lam(_, t)
            | Term::ForallP(_, t)
            | Term::ExistsP(_, t)
            | Term::ForallA(_, t)
            | Term::ExistsA(_, t) => t.max_free(depth + 1),
            _ => self
                .children()
                .into_iter()
                .filter_map(|c| c.max_free(depth))
                .max(),
        }
    }

    pub fn uses_modality(&self) -> bool {
        self.any(&|t| matches!(t, Term::Box(_) | Term::Diamond(_)))
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Term::size).sum::<usize>()
    }
}
