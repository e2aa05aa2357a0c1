use std::collections::BTreeSet;
use std::fmt::Write;

use super::syntax::KEYWORDS;
use super::term::{Term, EXISTS_AT};
use super::Theory;

const IFF: u8 = 1;
const IMP: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const EQ: u8 = 5;
const UNARY: u8 = 6;
const APP: u8 = 7;
const ATOM: u8 = 8;

struct Printer<'a> {
    reserved: &'a BTreeSet<String>,
    scope: Vec<String>,
}

/// Renders a closed core term in theory-file syntax.
pub fn print_term(term: &Term) -> String {
    let reserved = term.constants();
    let mut p = Printer {
        reserved: &reserved,
        scope: Vec::new(),
    };
    let mut out = String::new();
    p.term(term, 0, &mut out);
    out
}

/// Renders a checked theory; re-parsing the output yields an equal theory.
pub fn print_theory(theory: &Theory) -> String {
    let mut reserved: BTreeSet<String> = theory.signature.iter().map(|(n, _)| n.clone()).collect();
    reserved.extend(theory.definitions.iter().map(|d| d.name.clone()));
    reserved.insert(EXISTS_AT.to_string());
    let mut out = String::new();
    let _ = writeln!(out, "theory {}", theory.name);
    let flags = theory.frame.names();
    if !flags.is_empty() {
        let _ = writeln!(out, "frame {}", flags.join(" "));
    }
    for (name, ty) in &theory.signature {
        let _ = writeln!(out, "const {name} : {ty}");
    }
    let mut p = Printer {
        reserved: &reserved,
        scope: Vec::new(),
    };
    for d in &theory.definitions {
        let _ = write!(out, "def {} : {} := ", d.name, d.ty);
        p.term(&d.body, 0, &mut out);
        out.push('\n');
    }
    for (kw, fs) in [("axiom", &theory.axioms), ("goal", &theory.goals)] {
        for f in fs {
            let _ = write!(out, "{kw} {}: ", f.name);
            p.term(&f.term, 0, &mut out);
            out.push('\n');
        }
    }
    out
}

impl Printer<'_> {
    fn fresh(&self, hint: &str) -> String {
        let taken = |n: &str| {
            KEYWORDS.contains(&n) || self.reserved.contains(n) || self.scope.iter().any(|s| s == n)
        };
        if !taken(hint) {
            return hint.to_string();
        }
        (1..)
            .map(|k| format!("{hint}{k}"))
            .find(|n| !taken(n))
            .expect("unbounded name supply")
    }

    fn binder(&mut self, kw: &str, name: &str, ty: Option<String>, body: &Term, prec: u8, out: &mut String) {
        let n = self.fresh(name);
        if prec > 0 {
            out.push('(');
        }
        out.push_str(kw);
        if !kw.ends_with('\\') {
            out.push(' ');
        }
        out.push_str(&n);
        if let Some(ty) = ty {
            out.push(':');
            out.push_str(&ty);
        }
        out.push_str(". ");
        self.scope.push(n);
        self.term(body, 0, out);
        self.scope.pop();
        if prec > 0 {
            out.push(')');
        }
    }

    fn infix(&mut self, op: &str, level: u8, l: (&Term, u8), r: (&Term, u8), prec: u8, out: &mut String) {
        if prec > level {
            out.push('(');
        }
        self.term(l.0, l.1, out);
        out.push(' ');
        out.push_str(op);
        out.push(' ');
        self.term(r.0, r.1, out);
        if prec > level {
            out.push(')');
        }
    }

    fn term(&mut self, t: &Term, prec: u8, out: &mut String) {
        match t {
            Term::Var(i) => {
                let name = self
                    .scope
                    .len()
                    .checked_sub(i + 1)
                    .map(|k| self.scope[k].clone())
                    .unwrap_or_else(|| format!("?{i}"));
                out.push_str(&name);
            }
            Term::Const(name, _) => out.push_str(name),
            Term::Top => out.push_str("true"),
            Term::Bottom => out.push_str("false"),
            Term::Lam(b, body) => self.binder("\\", &b.name, Some(b.ty.to_string()), body, prec, out),
            Term::ForallP(b, body) => self.binder("forallP", &b.name, Some(b.ty.to_string()), body, prec, out),
            Term::ExistsP(b, body) => self.binder("existsP", &b.name, Some(b.ty.to_string()), body, prec, out),
            Term::ForallA(b, body) => self.binder("forallA", &b.name, None, body, prec, out),
            Term::ExistsA(b, body) => self.binder("existsA", &b.name, None, body, prec, out),
            Term::App(f, a) => {
                if prec > APP {
                    out.push('(');
                }
                self.term(f, APP, out);
                out.push(' ');
                self.term(a, ATOM, out);
                if prec > APP {
                    out.push(')');
                }
            }
            Term::Not(a) | Term::Box(a) | Term::Diamond(a) => {
                let op = match t {
                    Term::Not(_) => "~",
                    Term::Box(_) => "box ",
                    _ => "dia ",
                };
                if prec > UNARY {
                    out.push('(');
                }
                out.push_str(op);
                self.term(a, UNARY, out);
                if prec > UNARY {
                    out.push(')');
                }
            }
            Term::And(a, b) => self.infix("&", AND, (a, AND), (b, EQ), prec, out),
            Term::Or(a, b) => self.infix("|", OR, (a, OR), (b, AND), prec, out),
            Term::Implies(a, b) => self.infix("->", IMP, (a, OR), (b, IMP), prec, out),
            Term::Iff(a, b) => self.infix("<->", IFF, (a, IMP), (b, IFF), prec, out),
            Term::LeibnizEq(_, a, b) => self.infix("==", EQ, (a, UNARY), (b, UNARY), prec, out),
        }
    }
}
