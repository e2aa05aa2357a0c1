//! Symbolic evaluation of core terms into gates.
//!
//! Values mirror the concrete evaluator, except that truth values are
//! literals: a proposition is one literal per world, an individual is a
//! one-hot vector of literals over entities, and functions are tables over
//! their enumerated domain.

use std::collections::HashMap;
use std::rc::Rc;

use super::cnf::{Cnf, Lit, VarMeaning};
use super::GroundError;
use crate::semantics::{denotation_size, enumerate_denotation, Scope, SemValue};
use crate::surface::{FrameFlags, LogicType, Term, Theory, EXISTS_AT};

type Result<T> = std::result::Result<T, GroundError>;

#[derive(Clone)]
enum SVal<'t> {
    Ent(Rc<[Lit]>),
    Prop(Rc<[Lit]>),
    Table(Rc<[SVal<'t>]>),
    Clo(Rc<Closure<'t>>),
}

struct Closure<'t> {
    param: &'t LogicType,
    body: &'t Term,
    env: Env<'t>,
}

#[derive(Clone, Default)]
struct Env<'t>(Option<Rc<(SVal<'t>, Env<'t>)>>);

impl<'t> Env<'t> {
    fn push(&self, v: SVal<'t>) -> Env<'t> {
        Env(Some(Rc::new((v, self.clone()))))
    }

    fn get(&self, mut i: usize) -> Option<&SVal<'t>> {
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

/// Where a constant's interpretation lives: one literal group per argument
/// tuple, tuples in enumeration order with the first argument most
/// significant. Groups hold one literal per world (Prop-valued) or one
/// selector per entity (Ind-valued).
#[derive(Clone, Debug)]
pub struct ConstLayout {
    pub name: String,
    pub ty: LogicType,
    pub groups: Vec<Vec<Lit>>,
}

/// Decision-variable layout of a ground problem.
#[derive(Clone, Debug)]
pub struct Layout {
    pub access: Vec<Vec<Lit>>,
    pub exists: Vec<Vec<Lit>>,
    pub constants: Vec<ConstLayout>,
}

pub struct Grounder<'c> {
    scope: Scope,
    cnf: &'c mut Cnf,
    /// Accessibility as used in formulas (the diagonal is folded to true
    /// on reflexive frames).
    access: Vec<Vec<Lit>>,
    constants: HashMap<String, SVal<'static>>,
    domains: HashMap<LogicType, Rc<[SVal<'static>]>>,
}

impl<'c> Grounder<'c> {
    /// Allocates decision variables (accessibility, existence, then the
    /// constants in signature order) and the frame constraints.
    pub fn new(cnf: &'c mut Cnf, theory: &Theory, scope: Scope) -> Result<(Grounder<'c>, Layout)> {
        let (n, m) = (scope.worlds, scope.entities);
        for (name, ty) in &theory.signature {
            check_constant_type(name, ty, &scope)?;
        }
        let access: Vec<Vec<Lit>> = (0..n)
            .map(|from| (0..n).map(|to| cnf.new_var(VarMeaning::Access { from, to })).collect())
            .collect();
        let exists: Vec<Vec<Lit>> = (0..m)
            .map(|entity| (0..n).map(|world| cnf.new_var(VarMeaning::Exists { entity, world })).collect())
            .collect();
        let mut constants = HashMap::new();
        let mut layouts = Vec::new();
        for (name, ty) in &theory.signature {
            let (args, base) = ty.uncurry();
            let mut groups = Vec::new();
            let value = alloc_constant(cnf, &scope, name, &args, base, &mut Vec::new(), &mut groups)?;
            constants.insert(name.clone(), value);
            layouts.push(ConstLayout {
                name: name.clone(),
                ty: ty.clone(),
                groups,
            });
        }
        let existence = SVal::Table((0..m).map(|e| SVal::Prop(exists[e].clone().into())).collect());
        constants.insert(EXISTS_AT.to_string(), existence);

        frame_clauses(cnf, &access, theory.frame);
        let mut used = access.clone();
        if theory.frame.refl {
            for (w, row) in used.iter_mut().enumerate() {
                row[w] = Lit::TRUE;
            }
        }
        let g = Grounder {
            scope,
            cnf,
            access: used,
            constants,
            domains: HashMap::new(),
        };
        Ok((
            g,
            Layout {
                access,
                exists,
                constants: layouts,
            },
        ))
    }

    /// Grounds a closed formula to one literal per world.
    pub fn formula(&mut self, t: &Term) -> Result<Vec<Lit>> {
        let v = self.ev(t, &Env::default())?;
        Ok(self.prop(&v)?.to_vec())
    }

    pub fn cnf(&mut self) -> &mut Cnf {
        self.cnf
    }

    fn domain(&mut self, ty: &LogicType) -> Result<Rc<[SVal<'static>]>> {
        if let Some(d) = self.domains.get(ty) {
            return Ok(d.clone());
        }
        let vals = enumerate_denotation(ty, &self.scope)?;
        let d: Rc<[SVal<'static>]> = vals.iter().map(|v| self.concrete(v)).collect::<Vec<_>>().into();
        self.domains.insert(ty.clone(), d.clone());
        Ok(d)
    }

    fn concrete(&self, v: &SemValue) -> SVal<'static> {
        match v {
            SemValue::Entity(e) => SVal::Ent((0..self.scope.entities).map(|k| Lit::from_bool(k == *e)).collect()),
            SemValue::Table(es) if matches!(es.first(), Some(SemValue::Bool(_))) => SVal::Prop(
                es.iter()
                    .map(|b| Lit::from_bool(matches!(b, SemValue::Bool(true))))
                    .collect(),
            ),
            SemValue::Table(es) => SVal::Table(es.iter().map(|e| self.concrete(e)).collect()),
            SemValue::Bool(_) | SemValue::World(_) => unreachable!("not produced by type enumeration"),
        }
    }

    fn prop<'v>(&self, v: &'v SVal<'_>) -> Result<&'v Rc<[Lit]>> {
        match v {
            SVal::Prop(p) => Ok(p),
            _ => Err(GroundError::IllTyped("expected a proposition".into())),
        }
    }

    fn force<'t>(&mut self, v: SVal<'t>) -> Result<SVal<'t>> {
        match v {
            SVal::Clo(c) => {
                let dom = self.domain(c.param)?;
                let mut entries = Vec::with_capacity(dom.len());
                for d in dom.iter() {
                    let r = self.ev(c.body, &c.env.push(d.clone()))?;
                    entries.push(self.force(r)?);
                }
                Ok(SVal::Table(entries.into()))
            }
            other => Ok(other),
        }
    }

    fn size(&self, v: &SVal<'_>) -> u64 {
        match v {
            SVal::Ent(_) => self.scope.entities as u64,
            SVal::Prop(_) => 1 << self.scope.worlds,
            SVal::Table(es) => self.size(&es[0]).saturating_pow(es.len() as u32),
            SVal::Clo(_) => unreachable!("closures are forced before sizing"),
        }
    }

    /// Enumeration index of a forced value whose literals are all constant.
    fn const_index(&self, v: &SVal<'_>) -> Option<u64> {
        match v {
            SVal::Ent(bits) => {
                if bits.iter().all(|l| l.is_const()) {
                    bits.iter().position(|&l| l == Lit::TRUE).map(|e| e as u64)
                } else {
                    None
                }
            }
            SVal::Prop(bits) => bits.iter().enumerate().try_fold(0u64, |acc, (w, &l)| match l {
                Lit::TRUE => Some(acc | 1 << w),
                Lit::FALSE => Some(acc),
                _ => None,
            }),
            SVal::Table(es) => {
                let base = self.size(&es[0]);
                es.iter()
                    .rev()
                    .try_fold(0u64, |acc, e| Some(acc * base + self.const_index(e)?))
            }
            SVal::Clo(_) => None,
        }
    }

    /// Literal for "forced value `v` is the `k`-th element of its type".
    fn is_index(&mut self, v: &SVal<'_>, k: u64) -> Lit {
        match v {
            SVal::Ent(bits) => bits[k as usize],
            SVal::Prop(bits) => {
                let lits: Vec<Lit> = bits
                    .iter()
                    .enumerate()
                    .map(|(w, &l)| if k >> w & 1 == 1 { l } else { !l })
                    .collect();
                self.cnf.and_all(lits)
            }
            SVal::Table(es) => {
                let base = self.size(&es[0]);
                let mut rest = k;
                let mut lits = Vec::with_capacity(es.len());
                for e in es.iter() {
                    let l = self.is_index(e, rest % base);
                    if l == Lit::FALSE {
                        return Lit::FALSE;
                    }
                    lits.push(l);
                    rest /= base;
                }
                self.cnf.and_all(lits)
            }
            SVal::Clo(_) => unreachable!("closures are forced before comparison"),
        }
    }

    /// Selects among `options` by mutually exclusive, exhaustive guards.
    fn mux<'t>(&mut self, options: &[(Lit, &SVal<'t>)]) -> SVal<'t> {
        if let [(_, only)] = options {
            return (*only).clone();
        }
        match options[0].1 {
            SVal::Prop(_) | SVal::Ent(_) => {
                let width = leaf_bits(options[0].1).len();
                let bits: Rc<[Lit]> = (0..width)
                    .map(|i| {
                        let terms: Vec<Lit> = options
                            .iter()
                            .map(|(s, v)| self.cnf.and(*s, leaf_bits(v)[i]))
                            .collect();
                        self.cnf.or_all(terms)
                    })
                    .collect();
                if matches!(options[0].1, SVal::Prop(_)) {
                    SVal::Prop(bits)
                } else {
                    SVal::Ent(bits)
                }
            }
            SVal::Table(first) => {
                let len = first.len();
                let entries: Vec<SVal<'t>> = (0..len)
                    .map(|j| {
                        let column: Vec<(Lit, &SVal<'t>)> = options
                            .iter()
                            .map(|(s, v)| match v {
                                SVal::Table(es) => (*s, &es[j]),
                                _ => unreachable!("uniformly typed table"),
                            })
                            .collect();
                        self.mux(&column)
                    })
                    .collect();
                SVal::Table(entries.into())
            }
            SVal::Clo(_) => unreachable!("table entries are never closures"),
        }
    }

    fn apply<'t>(&mut self, f: SVal<'t>, a: SVal<'t>) -> Result<SVal<'t>> {
        match f {
            SVal::Clo(c) => self.ev(c.body, &c.env.push(a)),
            SVal::Table(es) => {
                let a = self.force(a)?;
                if let Some(k) = self.const_index(&a) {
                    return es
                        .get(k as usize)
                        .cloned()
                        .ok_or_else(|| GroundError::IllTyped("argument outside the function's domain".into()));
                }
                let mut options = Vec::new();
                for (k, e) in es.iter().enumerate() {
                    let s = self.is_index(&a, k as u64);
                    if s != Lit::FALSE {
                        options.push((s, e));
                    }
                }
                if options.is_empty() {
                    return Err(GroundError::IllTyped("argument matches no domain element".into()));
                }
                Ok(self.mux(&options))
            }
            _ => Err(GroundError::IllTyped("application of a non-function".into())),
        }
    }

    /// Rigid identity of two forced values.
    fn equal(&mut self, a: &SVal<'_>, b: &SVal<'_>) -> Lit {
        match (a, b) {
            (SVal::Prop(x), SVal::Prop(y)) | (SVal::Ent(x), SVal::Ent(y)) => {
                let lits: Vec<Lit> = x.iter().zip(y.iter()).map(|(&p, &q)| self.cnf.iff(p, q)).collect();
                self.cnf.and_all(lits)
            }
            (SVal::Table(xs), SVal::Table(ys)) => {
                let lits: Vec<Lit> = xs.iter().zip(ys.iter()).map(|(p, q)| self.equal(p, q)).collect();
                self.cnf.and_all(lits)
            }
            _ => Lit::FALSE,
        }
    }

    fn worldwise<'t>(&mut self, a: &'t Term, b: &'t Term, env: &Env<'t>, op: fn(&mut Cnf, Lit, Lit) -> Lit) -> Result<SVal<'t>> {
        let x = self.ev(a, env)?;
        let y = self.ev(b, env)?;
        let (x, y) = (self.prop(&x)?.clone(), self.prop(&y)?.clone());
        Ok(SVal::Prop(x.iter().zip(y.iter()).map(|(&p, &q)| op(self.cnf, p, q)).collect()))
    }

    fn quantify<'t>(&mut self, ty: &LogicType, body: &'t Term, env: &Env<'t>, universal: bool) -> Result<SVal<'t>> {
        let n = self.scope.worlds;
        let absorbing = Lit::from_bool(!universal);
        let mut per_world: Vec<Vec<Lit>> = vec![Vec::new(); n];
        let mut settled = vec![false; n];
        for d in self.domain(ty)?.iter() {
            let v = self.ev(body, &env.push(d.clone()))?;
            for (w, &l) in self.prop(&v)?.iter().enumerate() {
                if l == absorbing {
                    settled[w] = true;
                } else if !settled[w] {
                    per_world[w].push(l);
                }
            }
            if settled.iter().all(|&s| s) {
                break;
            }
        }
        let out = per_world
            .into_iter()
            .zip(settled)
            .map(|(lits, s)| match (s, universal) {
                (true, _) => absorbing,
                (false, true) => self.cnf.and_all(lits),
                (false, false) => self.cnf.or_all(lits),
            })
            .collect();
        Ok(SVal::Prop(out))
    }

    fn ev<'t>(&mut self, t: &'t Term, env: &Env<'t>) -> Result<SVal<'t>> {
        let n = self.scope.worlds;
        Ok(match t {
            Term::Var(i) => env.get(*i).cloned().ok_or(GroundError::IllTyped("unbound variable".into()))?,
            Term::Const(name, _) => self
                .constants
                .get(name)
                .cloned()
                .ok_or_else(|| GroundError::UnknownConstant(name.clone()))?,
            Term::Top => SVal::Prop(vec![Lit::TRUE; n].into()),
            Term::Bottom => SVal::Prop(vec![Lit::FALSE; n].into()),
            Term::Lam(b, body) => SVal::Clo(Rc::new(Closure {
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
                SVal::Prop(self.prop(&v)?.iter().map(|&l| !l).collect())
            }
            Term::And(a, b) => self.worldwise(a, b, env, Cnf::and)?,
            Term::Or(a, b) => self.worldwise(a, b, env, Cnf::or)?,
            Term::Implies(a, b) => self.worldwise(a, b, env, Cnf::implies)?,
            Term::Iff(a, b) => self.worldwise(a, b, env, Cnf::iff)?,
            Term::Box(a) | Term::Diamond(a) => {
                let v = self.ev(a, env)?;
                let x = self.prop(&v)?.clone();
                let boxed = matches!(t, Term::Box(_));
                let out: Vec<Lit> = (0..n)
                    .map(|w| {
                        let lits: Vec<Lit> = (0..n)
                            .map(|u| {
                                let r = self.access[w][u];
                                if boxed {
                                    self.cnf.implies(r, x[u])
                                } else {
                                    self.cnf.and(r, x[u])
                                }
                            })
                            .collect();
                        if boxed {
                            self.cnf.and_all(lits)
                        } else {
                            self.cnf.or_all(lits)
                        }
                    })
                    .collect();
                SVal::Prop(out.into())
            }
            Term::ForallP(b, body) => self.quantify(&b.ty, body, env, true)?,
            Term::ExistsP(b, body) => self.quantify(&b.ty, body, env, false)?,
            Term::ForallA(_, body) | Term::ExistsA(_, body) => {
                let universal = matches!(t, Term::ForallA(..));
                let m = self.scope.entities;
                let existence = self.constants[EXISTS_AT].clone();
                let mut per_world: Vec<Vec<Lit>> = vec![Vec::new(); n];
                for e in 0..m {
                    let ent = SVal::Ent((0..m).map(|k| Lit::from_bool(k == e)).collect());
                    let v = self.ev(body, &env.push(ent))?;
                    let ex = match &existence {
                        SVal::Table(es) => self.prop(&es[e])?.clone(),
                        _ => unreachable!("existence is a table"),
                    };
                    for (w, &l) in self.prop(&v)?.clone().iter().enumerate() {
                        let lit = if universal {
                            self.cnf.implies(ex[w], l)
                        } else {
                            self.cnf.and(ex[w], l)
                        };
                        per_world[w].push(lit);
                    }
                }
                SVal::Prop(
                    per_world
                        .into_iter()
                        .map(|lits| {
                            if universal {
                                self.cnf.and_all(lits)
                            } else {
                                self.cnf.or_all(lits)
                            }
                        })
                        .collect(),
                )
            }
            Term::LeibnizEq(_, a, b) => {
                let x = self.ev(a, env)?;
                let x = self.force(x)?;
                let y = self.ev(b, env)?;
                let y = self.force(y)?;
                SVal::Prop(vec![self.equal(&x, &y); n].into())
            }
        })
    }
}

fn leaf_bits<'v>(v: &'v SVal<'_>) -> &'v Rc<[Lit]> {
    match v {
        SVal::Prop(bits) | SVal::Ent(bits) => bits,
        _ => unreachable!("uniformly typed table"),
    }
}

/// Constants must have a base type of `i` or `prop`, order at most three,
/// and an argument space within the cap.
fn check_constant_type(name: &str, ty: &LogicType, scope: &Scope) -> Result<()> {
    if ty.order() > 3 {
        return Err(GroundError::Unsupported {
            constant: name.to_string(),
            ty: ty.clone(),
        });
    }
    let (args, _) = ty.uncurry();
    let mut tuples: u64 = 1;
    for a in args {
        tuples = tuples
            .checked_mul(denotation_size(a, scope)?)
            .filter(|&t| t <= scope.cap)
            .ok_or_else(|| crate::semantics::SemanticsError::ScopeTooLarge {
                ty: ty.clone(),
                cap: scope.cap,
            })?;
    }
    Ok(())
}

fn alloc_constant(
    cnf: &mut Cnf,
    scope: &Scope,
    name: &str,
    args: &[&LogicType],
    base: &LogicType,
    prefix: &mut Vec<u64>,
    groups: &mut Vec<Vec<Lit>>,
) -> Result<SVal<'static>> {
    match args.split_first() {
        None => {
            let value = match base {
                LogicType::Prop => {
                    let lits: Vec<Lit> = (0..scope.worlds)
                        .map(|world| {
                            cnf.new_var(VarMeaning::Holds {
                                constant: name.to_string(),
                                args: prefix.clone(),
                                world,
                            })
                        })
                        .collect();
                    groups.push(lits.clone());
                    SVal::Prop(lits.into())
                }
                LogicType::Ind => {
                    let lits: Vec<Lit> = (0..scope.entities)
                        .map(|entity| {
                            cnf.new_var(VarMeaning::Selects {
                                constant: name.to_string(),
                                args: prefix.clone(),
                                entity,
                            })
                        })
                        .collect();
                    cnf.exactly_one(&lits);
                    groups.push(lits.clone());
                    SVal::Ent(lits.into())
                }
                LogicType::Fun(..) => unreachable!("uncurried base is not a function type"),
            };
            Ok(value)
        }
        Some((first, rest)) => {
            let size = denotation_size(first, scope)?;
            let mut entries = Vec::with_capacity(size as usize);
            for k in 0..size {
                prefix.push(k);
                entries.push(alloc_constant(cnf, scope, name, rest, base, prefix, groups)?);
                prefix.pop();
            }
            Ok(SVal::Table(entries.into()))
        }
    }
}

#[allow(clippy::needless_range_loop)]
fn frame_clauses(cnf: &mut Cnf, r: &[Vec<Lit>], frame: FrameFlags) {
    let n = r.len();
    if frame.refl {
        for (w, row) in r.iter().enumerate() {
            cnf.add_clause([row[w]]);
        }
    }
    if frame.symm {
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    cnf.add_clause([!r[a][b], r[b][a]]);
                }
            }
        }
    }
    if frame.trans {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    cnf.add_clause([!r[a][b], !r[b][c], r[a][c]]);
                }
            }
        }
    }
}
