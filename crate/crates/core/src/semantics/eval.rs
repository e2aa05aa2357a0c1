use std::collections::HashMap;
use std::rc::Rc;

use super::model::KripkeModel;
use super::value::{enumerate_denotation, SemValue};
use super::{Scope, SemanticsError};
use crate::surface::{inline_definitions, LogicType, Term, Theory, EXISTS_AT};

type Result<T> = std::result::Result<T, SemanticsError>;

/// Evaluation-time values. Propositions are world masks; lambdas stay
/// unevaluated closures until something needs them as a table.
#[derive(Clone)]
pub(crate) enum Val<'t> {
    Ent(usize),
    Prop(u64),
    Table(Rc<[Val<'t>]>),
    Clo(Rc<Closure<'t>>),
}

pub(crate) struct Closure<'t> {
    param: &'t LogicType,
    body: &'t Term,
    env: Env<'t>,
}

#[derive(Clone, Default)]
pub(crate) struct Env<'t>(Option<Rc<(Val<'t>, Env<'t>)>>);

impl<'t> Env<'t> {
    fn push(&self, v: Val<'t>) -> Env<'t> {
        Env(Some(Rc::new((v, self.clone()))))
    }

    fn get(&self, mut i: usize) -> Option<&Val<'t>> {
        let mut cur = self;
        loop {
            let node = cur.0.as_ref()?;
            if i == 0 {
                return Some(&node.0);
            }
            i -= 1;
            cur = &node.1;
        }
    }
}

/// Evaluates core terms in a fixed model.
///
/// Domain enumerations are cached, so one evaluator should be reused for
/// many formulas over the same model.
/// Enumerated domains, reusable across evaluators over the same scope.
#[derive(Default)]
pub struct DomainCache(HashMap<LogicType, Rc<[Val<'static>]>>);

pub struct Evaluator<'m> {
    model: &'m KripkeModel,
    scope: Scope,
    full: u64,
    successors: Vec<u64>,
    existence: Vec<u64>,
    constants: HashMap<String, Val<'static>>,
    domains: DomainCache,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m KripkeModel) -> Result<Evaluator<'m>> {
        Evaluator::with_cache(model, DomainCache::default())
    }

    /// Like [`Evaluator::new`], seeding the domain cache; the cache must
    /// come from an evaluator over a model of the same scope.
    pub fn with_cache(model: &'m KripkeModel, domains: DomainCache) -> Result<Evaluator<'m>> {
        model.validate()?;
        let scope = model.scope;
        let mut constants = HashMap::new();
        for c in &model.constants {
            constants.insert(c.name.clone(), from_sem(&c.value, &c.name, &c.ty)?);
        }
        let existence: Vec<u64> = (0..scope.entities).map(|e| model.existence(e)).collect();
        constants
            .entry(EXISTS_AT.to_string())
            .or_insert_with(|| Val::Table(existence.iter().map(|&m| Val::Prop(m)).collect()));
        Ok(Evaluator {
            model,
            scope,
            full: scope.full(),
            successors: (0..scope.worlds).map(|w| model.successors(w)).collect(),
            existence,
            constants,
            domains,
        })
    }

    pub fn into_cache(self) -> DomainCache {
        self.domains
    }

    pub fn model(&self) -> &KripkeModel {
        self.model
    }

    /// Evaluates a closed formula to the mask of worlds where it holds.
    pub fn prop_mask(&mut self, term: &Term) -> Result<u64> {
        let v = self.ev(term, &Env::default())?;
        self.prop(v)
    }

    /// Evaluates `term` with `env[i]` bound to de Bruijn index `i`.
    pub fn eval(&mut self, env: &[SemValue], term: &Term) -> Result<SemValue> {
        let mut e = Env::default();
        for (i, v) in env.iter().enumerate().rev() {
            e = e.push(from_sem(v, &format!("#{i}"), &LogicType::Ind)?);
        }
        let v = self.ev(term, &e)?;
        let v = self.force(v)?;
        Ok(self.to_sem(&v))
    }

    fn domain(&mut self, ty: &LogicType) -> Result<Rc<[Val<'static>]>> {
        if let Some(d) = self.domains.0.get(ty) {
            return Ok(d.clone());
        }
        let vals = enumerate_denotation(ty, &self.scope)?;
        let d: Rc<[Val<'static>]> = vals
            .iter()
            .map(|v| from_sem(v, "<domain>", ty))
            .collect::<Result<Vec<_>>>()?
            .into();
        self.domains.0.insert(ty.clone(), d.clone());
        Ok(d)
    }

    fn prop(&self, v: Val<'_>) -> Result<u64> {
        match v {
            Val::Prop(m) => Ok(m),
            _ => Err(SemanticsError::IllTyped("expected a proposition".into())),
        }
    }

    /// Tabulates closures (recursively) so the value can be indexed or compared.
    fn force<'t>(&mut self, v: Val<'t>) -> Result<Val<'t>> {
        match v {
            Val::Clo(c) => {
                let dom = self.domain(c.param)?;
                let mut entries = Vec::with_capacity(dom.len());
                for d in dom.iter() {
                    let r = self.ev(c.body, &c.env.push(d.clone()))?;
                    entries.push(self.force(r)?);
                }
                Ok(Val::Table(entries.into()))
            }
            other => Ok(other),
        }
    }

    fn size(&self, v: &Val<'_>) -> u64 {
        match v {
            Val::Ent(_) => self.scope.entities as u64,
            Val::Prop(_) => 1 << self.scope.worlds,
            Val::Table(es) => self.size(&es[0]).saturating_pow(es.len() as u32),
            Val::Clo(_) => unreachable!("closures are forced before sizing"),
        }
    }

    /// Enumeration index of a forced value.
    fn index(&self, v: &Val<'_>) -> u64 {
        match v {
            Val::Ent(e) => *e as u64,
            Val::Prop(m) => *m,
            Val::Table(es) => {
                let base = self.size(&es[0]);
                es.iter().rev().fold(0, |acc, e| acc * base + self.index(e))
            }
            Val::Clo(_) => unreachable!("closures are forced before indexing"),
        }
    }

    fn apply<'t>(&mut self, f: Val<'t>, a: Val<'t>) -> Result<Val<'t>> {
        match f {
            Val::Clo(c) => self.ev(c.body, &c.env.push(a)),
            Val::Table(es) => {
                let a = self.force(a)?;
                let i = self.index(&a) as usize;
                es.get(i)
                    .cloned()
                    .ok_or_else(|| SemanticsError::IllTyped("argument outside the function's domain".into()))
            }
            _ => Err(SemanticsError::IllTyped("application of a non-function".into())),
        }
    }

    fn binary<'t>(&mut self, a: &'t Term, b: &'t Term, env: &Env<'t>) -> Result<(u64, u64)> {
        let x = self.ev(a, env)?;
        let x = self.prop(x)?;
        let y = self.ev(b, env)?;
        Ok((x, self.prop(y)?))
    }

    fn ev<'t>(&mut self, t: &'t Term, env: &Env<'t>) -> Result<Val<'t>> {
        let full = self.full;
        Ok(match t {
            Term::Var(i) => env.get(*i).cloned().ok_or(SemanticsError::Unbound)?,
            Term::Const(name, _) => self
                .constants
                .get(name)
                .cloned()
                .ok_or_else(|| SemanticsError::Uninterpreted(name.clone()))?,
            Term::Top => Val::Prop(full),
            Term::Bottom => Val::Prop(0),
            Term::Lam(b, body) => Val::Clo(Rc::new(Closure {
                param: &b.ty,
                body,
                env: env.clone(),
            })),
            Term::App(f, a) => {
                let fv = self.ev(f, env)?;
                let av = self.ev(a, env)?;
                self.apply(fv, av)?
            }
            Term::Not(a) => {
                let v = self.ev(a, env)?;
                Val::Prop(!self.prop(v)? & full)
            }
            Term::And(a, b) => {
                let x = self.ev(a, env)?;
                let x = self.prop(x)?;
                if x == 0 {
                    Val::Prop(0)
                } else {
                    let y = self.ev(b, env)?;
                    Val::Prop(x & self.prop(y)?)
                }
            }
            Term::Or(a, b) => {
                let x = self.ev(a, env)?;
                let x = self.prop(x)?;
                if x == full {
                    Val::Prop(full)
                } else {
                    let y = self.ev(b, env)?;
                    Val::Prop(x | self.prop(y)?)
                }
            }
            Term::Implies(a, b) => {
                let x = self.ev(a, env)?;
                let x = self.prop(x)?;
                if x == 0 {
                    Val::Prop(full)
                } else {
                    let y = self.ev(b, env)?;
                    Val::Prop((!x | self.prop(y)?) & full)
                }
            }
            Term::Iff(a, b) => {
                let (x, y) = self.binary(a, b, env)?;
                Val::Prop(!(x ^ y) & full)
            }
            Term::Box(a) => {
                let v = self.ev(a, env)?;
                let x = self.prop(v)?;
                Val::Prop(self.modal(|succ| succ & !x == 0))
            }
            Term::Diamond(a) => {
                let v = self.ev(a, env)?;
                let x = self.prop(v)?;
                Val::Prop(self.modal(|succ| succ & x != 0))
            }
            Term::ForallP(b, body) => {
                let mut acc = full;
                for d in self.domain(&b.ty)?.iter() {
                    let v = self.ev(body, &env.push(d.clone()))?;
                    acc &= self.prop(v)?;
                    if acc == 0 {
                        break;
                    }
                }
                Val::Prop(acc)
            }
            Term::ExistsP(b, body) => {
                let mut acc = 0;
                for d in self.domain(&b.ty)?.iter() {
                    let v = self.ev(body, &env.push(d.clone()))?;
                    acc |= self.prop(v)?;
                    if acc == full {
                        break;
                    }
                }
                Val::Prop(acc)
            }
            Term::ForallA(_, body) => {
                let mut acc = full;
                for e in 0..self.scope.entities {
                    let v = self.ev(body, &env.push(Val::Ent(e)))?;
                    acc &= !self.existence[e] | self.prop(v)?;
                }
                Val::Prop(acc & full)
            }
            Term::ExistsA(_, body) => {
                let mut acc = 0;
                for e in 0..self.scope.entities {
                    let v = self.ev(body, &env.push(Val::Ent(e)))?;
                    acc |= self.existence[e] & self.prop(v)?;
                }
                Val::Prop(acc)
            }
            // With predicates ranging over the full function space, some
            // predicate separates any two distinct values at every world,
            // so Leibniz equality is rigid identity.
            Term::LeibnizEq(_, a, b) => {
                let x = self.ev(a, env)?;
                let x = self.force(x)?;
                let y = self.ev(b, env)?;
                let y = self.force(y)?;
                Val::Prop(if self.index(&x) == self.index(&y) { full } else { 0 })
            }
        })
    }

    fn modal(&self, holds: impl Fn(u64) -> bool) -> u64 {
        self.successors
            .iter()
            .enumerate()
            .fold(0, |acc, (w, &succ)| acc | (holds(succ) as u64) << w)
    }

    fn to_sem(&self, v: &Val<'_>) -> SemValue {
        match v {
            Val::Ent(e) => SemValue::Entity(*e),
            Val::Prop(m) => SemValue::prop(*m, self.scope.worlds),
            Val::Table(es) => SemValue::table(es.iter().map(|e| self.to_sem(e)).collect()),
            Val::Clo(_) => unreachable!("closures are forced before conversion"),
        }
    }
}

fn from_sem(v: &SemValue, name: &str, ty: &LogicType) -> Result<Val<'static>> {
    let bad = || SemanticsError::BadValue {
        name: name.to_string(),
        ty: ty.clone(),
    };
    match v {
        SemValue::Entity(e) => Ok(Val::Ent(*e)),
        SemValue::Table(es) if matches!(es.first(), Some(SemValue::Bool(_))) => {
            v.as_prop_mask().map(Val::Prop).ok_or_else(bad)
        }
        SemValue::Table(es) if !es.is_empty() => Ok(Val::Table(
            es.iter()
                .map(|e| from_sem(e, name, ty))
                .collect::<Result<Vec<_>>>()?
                .into(),
        )),
        _ => Err(bad()),
    }
}

/// Evaluates `term` in `model` with `env[i]` bound to de Bruijn index `i`.
pub fn eval(model: &KripkeModel, env: &[SemValue], term: &Term) -> Result<SemValue> {
    Evaluator::new(model)?.eval(env, term)
}

/// Truth of a closed formula at world `w`.
pub fn holds_at(model: &KripkeModel, formula: &Term, w: usize) -> Result<bool> {
    if w >= model.scope.worlds {
        return Err(SemanticsError::NoSuchWorld(w));
    }
    Ok(Evaluator::new(model)?.prop_mask(formula)? >> w & 1 == 1)
}

/// Truth of a closed formula at every world.
pub fn mvalid(model: &KripkeModel, formula: &Term) -> Result<bool> {
    Ok(Evaluator::new(model)?.prop_mask(formula)? == model.scope.full())
}

/// The model meets the theory's frame conditions and validates every axiom.
pub fn satisfies_theory(model: &KripkeModel, theory: &Theory) -> Result<bool> {
    if !model.satisfies_frame(theory.frame) {
        return Ok(false);
    }
    let theory = &inline_definitions(theory);
    let mut ev = Evaluator::new(model)?;
    let full = model.scope.full();
    for ax in &theory.axioms {
        if ev.prop_mask(&ax.term)? != full {
            return Ok(false);
        }
    }
    Ok(true)
}
