use std::collections::{BTreeSet, HashMap};

use super::syntax::{BinOp, Expr, ExprKind, FormulaDecl, ParsedTheory, Quantifier, UnOp};
use super::term::{Binder, Term, EXISTS_AT};
use super::types::LogicType;
use super::{Definition, Formula, FrameFlags, Pos, SurfaceError, Theory};

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    /// Maximum nesting depth of `>` in any type.
    pub max_type_depth: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { max_type_depth: 16 }
    }
}

pub fn typecheck(parsed: &ParsedTheory) -> Result<Theory, SurfaceError> {
    typecheck_with(parsed, CheckOptions::default())
}

struct Checker<'a> {
    opts: CheckOptions,
    consts: HashMap<&'a str, LogicType>,
    defs: HashMap<String, LogicType>,
    bound: Vec<(String, LogicType)>,
}

pub fn typecheck_with(parsed: &ParsedTheory, opts: CheckOptions) -> Result<Theory, SurfaceError> {
    let mut ck = Checker {
        opts,
        consts: HashMap::new(),
        defs: HashMap::new(),
        bound: Vec::new(),
    };
    let mut theory = Theory {
        name: parsed.name.clone().unwrap_or_else(|| "theory".to_string()),
        ..Theory::default()
    };

    for (flag, pos) in &parsed.frame {
        let parsed_flags = FrameFlags::parse_list(flag).ok_or_else(|| SurfaceError::Invalid {
            pos: *pos,
            msg: format!("unknown frame condition `{flag}`"),
        })?;
        theory.frame.refl |= parsed_flags.refl;
        theory.frame.symm |= parsed_flags.symm;
        theory.frame.trans |= parsed_flags.trans;
    }

    for c in &parsed.consts {
        if c.name == EXISTS_AT || ck.consts.contains_key(c.name.as_str()) {
            return Err(duplicate(c.pos, &c.name));
        }
        ck.depth_check(&c.ty, c.pos)?;
        ck.consts.insert(&c.name, c.ty.clone());
        theory.signature.push((c.name.clone(), c.ty.clone()));
    }

    for d in &parsed.defs {
        if d.name == EXISTS_AT
            || ck.consts.contains_key(d.name.as_str())
            || ck.defs.contains_key(&d.name)
        {
            return Err(duplicate(d.pos, &d.name));
        }
        let (body, ty) = ck.infer(&d.body)?;
        if let Some(declared) = &d.ty {
            if *declared != ty {
                return Err(SurfaceError::Mismatch {
                    pos: d.pos,
                    expected: declared.clone(),
                    found: ty,
                });
            }
        }
        ck.depth_check(&ty, d.pos)?;
        ck.defs.insert(d.name.clone(), ty.clone());
        theory.definitions.push(Definition {
            name: d.name.clone(),
            ty,
            body,
        });
    }

    let mut names = BTreeSet::new();
    for (decls, out, prefix) in [
        (&parsed.axioms, &mut theory.axioms, "axiom"),
        (&parsed.goals, &mut theory.goals, "goal"),
    ] {
        for (i, decl) in decls.iter().enumerate() {
            let f = ck.formula(decl, prefix, i)?;
            if !names.insert(f.name.clone()) {
                return Err(duplicate(decl.pos, &f.name));
            }
            out.push(f);
        }
    }
    Ok(theory)
}

fn duplicate(pos: Pos, name: &str) -> SurfaceError {
    SurfaceError::Invalid {
        pos,
        msg: format!("duplicate declaration of `{name}`"),
    }
}

impl Checker<'_> {
    fn depth_check(&self, ty: &LogicType, pos: Pos) -> Result<(), SurfaceError> {
        if ty.depth() > self.opts.max_type_depth {
            return Err(SurfaceError::Invalid {
                pos,
                msg: format!(
                    "type `{ty}` nests deeper than the limit of {}",
                    self.opts.max_type_depth
                ),
            });
        }
        Ok(())
    }

    fn formula(&mut self, decl: &FormulaDecl, prefix: &str, index: usize) -> Result<Formula, SurfaceError> {
        let (term, ty) = self.infer(&decl.body)?;
        if ty != LogicType::Prop {
            return Err(SurfaceError::Mismatch {
                pos: decl.body.pos,
                expected: LogicType::Prop,
                found: ty,
            });
        }
        Ok(Formula {
            name: decl
                .name
                .clone()
                .unwrap_or_else(|| format!("{prefix}{}", index + 1)),
            term,
        })
    }

    fn check_prop(&mut self, e: &Expr) -> Result<Term, SurfaceError> {
        let (t, ty) = self.infer(e)?;
        if ty != LogicType::Prop {
            return Err(SurfaceError::Mismatch {
                pos: e.pos,
                expected: LogicType::Prop,
                found: ty,
            });
        }
        Ok(t)
    }

    fn resolve(&self, name: &str, pos: Pos) -> Result<(Term, LogicType), SurfaceError> {
        if let Some(k) = self.bound.iter().rev().position(|(n, _)| n == name) {
            let ty = self.bound[self.bound.len() - 1 - k].1.clone();
            return Ok((Term::Var(k), ty));
        }
        if let Some(ty) = self.defs.get(name).or_else(|| self.consts.get(name)) {
            return Ok((Term::Const(name.to_string(), ty.clone()), ty.clone()));
        }
        if name == EXISTS_AT {
            return Ok((Term::exists_at(), LogicType::property()));
        }
        Err(SurfaceError::Unbound {
            pos,
            name: name.to_string(),
        })
    }

    fn under<T>(
        &mut self,
        name: &str,
        ty: &LogicType,
        f: impl FnOnce(&mut Self) -> Result<T, SurfaceError>,
    ) -> Result<T, SurfaceError> {
        self.bound.push((name.to_string(), ty.clone()));
        let r = f(self);
        self.bound.pop();
        r
    }

    fn infer(&mut self, e: &Expr) -> Result<(Term, LogicType), SurfaceError> {
        let prop = LogicType::Prop;
        match &e.kind {
            ExprKind::Ident(name) => self.resolve(name, e.pos),
            ExprKind::Top => Ok((Term::Top, prop)),
            ExprKind::Bottom => Ok((Term::Bottom, prop)),
            ExprKind::Lam(name, ty, body) => {
                self.depth_check(ty, e.pos)?;
                let (b, bty) = self.under(name, ty, |ck| ck.infer(body))?;
                Ok((
                    Term::lam(Binder::new(name.clone(), ty.clone()), b),
                    LogicType::fun(ty.clone(), bty),
                ))
            }
            ExprKind::App(f, a) => {
                let (ft, fty) = self.infer(f)?;
                let (at, aty) = self.infer(a)?;
                match fty {
                    LogicType::Fun(dom, cod) => {
                        if *dom != aty {
                            return Err(SurfaceError::Mismatch {
                                pos: a.pos,
                                expected: *dom,
                                found: aty,
                            });
                        }
                        Ok((Term::app(ft, at), *cod))
                    }
                    other => Err(SurfaceError::Invalid {
                        pos: f.pos,
                        msg: format!("cannot apply a term of type `{other}`"),
                    }),
                }
            }
            ExprKind::Unary(op, a) => {
                let t = self.check_prop(a)?;
                let t = match op {
                    UnOp::Not => Term::not(t),
                    UnOp::Box => Term::boxed(t),
                    UnOp::Diamond => Term::diamond(t),
                };
                Ok((t, prop))
            }
            ExprKind::Binary(BinOp::Eq, a, b) => {
                let (at, aty) = self.infer(a)?;
                let (bt, bty) = self.infer(b)?;
                if aty != bty {
                    return Err(SurfaceError::Mismatch {
                        pos: b.pos,
                        expected: aty,
                        found: bty,
                    });
                }
                Ok((Term::LeibnizEq(aty, Box::new(at), Box::new(bt)), prop))
            }
            ExprKind::Binary(op, a, b) => {
                let at = self.check_prop(a)?;
                let bt = self.check_prop(b)?;
                let t = match op {
                    BinOp::And => Term::and(at, bt),
                    BinOp::Or => Term::or(at, bt),
                    BinOp::Implies => Term::implies(at, bt),
                    BinOp::Iff => Term::iff(at, bt),
                    BinOp::Eq => unreachable!(),
                };
                Ok((t, prop))
            }
            ExprKind::Quant(q, name, ty, body) => {
                let ty = match (q.is_actualist(), ty) {
                    (true, None) => LogicType::Ind,
                    (true, Some(LogicType::Ind)) => LogicType::Ind,
                    (true, Some(other)) => {
                        return Err(SurfaceError::ActualistNonInd {
                            pos: e.pos,
                            ty: other.clone(),
                        })
                    }
                    (false, Some(t)) => t.clone(),
                    (false, None) => {
                        return Err(SurfaceError::Syntax {
                            pos: e.pos,
                            msg: "possibilist binder needs a type".into(),
                        })
                    }
                };
                self.depth_check(&ty, e.pos)?;
                let b = self.under(name, &ty, |ck| ck.check_prop(body))?;
                let binder = Binder::new(name.clone(), ty);
                let t = match q {
                    Quantifier::ForallP => Term::ForallP(binder, Box::new(b)),
                    Quantifier::ExistsP => Term::ExistsP(binder, Box::new(b)),
                    Quantifier::ForallA => Term::ForallA(binder, Box::new(b)),
                    Quantifier::ExistsA => Term::ExistsA(binder, Box::new(b)),
                };
                Ok((t, prop))
            }
        }
    }
}
