//! Lexer, surface AST and parser for theory files.
//!
//! A declaration starts with a keyword in column 1; any line that begins
//! with whitespace continues the previous declaration.

use super::types::LogicType;
use super::{Pos, SurfaceError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    LParen,
    RParen,
    Dot,
    Colon,
    Define,
    Gt,
    Arrow,
    DArrow,
    Amp,
    Bar,
    Tilde,
    EqEq,
    Lambda,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Define => "`:=`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::EqEq => "`==`".into(),
            Tok::Lambda => "`\\`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn lex(text: &str) -> Result<Vec<Token>, SurfaceError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let pos = Pos {
                line: lineno + 1,
                col: i + 1,
            };
            let mut push = |tok: Tok, len: usize, i: &mut usize| {
                out.push(Token { tok, pos });
                *i += len;
            };
            let next = chars.get(i + 1).copied();
            let next2 = chars.get(i + 2).copied();
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                '(' => push(Tok::LParen, 1, &mut i),
                ')' => push(Tok::RParen, 1, &mut i),
                '.' => push(Tok::Dot, 1, &mut i),
                ':' if next == Some('=') => push(Tok::Define, 2, &mut i),
                ':' => push(Tok::Colon, 1, &mut i),
                '>' => push(Tok::Gt, 1, &mut i),
                '-' if next == Some('>') => push(Tok::Arrow, 2, &mut i),
                '<' if next == Some('-') && next2 == Some('>') => push(Tok::DArrow, 3, &mut i),
                '&' | '∧' => push(Tok::Amp, 1, &mut i),
                '|' | '∨' => push(Tok::Bar, 1, &mut i),
                '~' | '¬' => push(Tok::Tilde, 1, &mut i),
                '=' if next == Some('=') => push(Tok::EqEq, 2, &mut i),
                '≡' => push(Tok::EqEq, 1, &mut i),
                '\\' | 'λ' => push(Tok::Lambda, 1, &mut i),
                '→' => push(Tok::Arrow, 1, &mut i),
                '↔' => push(Tok::DArrow, 1, &mut i),
                '□' => push(Tok::Ident("box".into()), 1, &mut i),
                '◇' => push(Tok::Ident("dia".into()), 1, &mut i),
                '⊤' => push(Tok::Ident("true".into()), 1, &mut i),
                '⊥' => push(Tok::Ident("false".into()), 1, &mut i),
                '∀' | '∃' => {
                    let actualist = next == Some('ᴱ');
                    let kw = match (c, actualist) {
                        ('∀', false) => "forallP",
                        ('∀', true) => "forallA",
                        (_, false) => "existsP",
                        (_, true) => "existsA",
                    };
                    push(Tok::Ident(kw.into()), if actualist { 2 } else { 1 }, &mut i)
                }
                c if c.is_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len()
                        && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                        && chars[i] != 'λ'
                    {
                        i += 1;
                    }
                    out.push(Token {
                        tok: Tok::Ident(chars[start..i].iter().collect()),
                        pos,
                    });
                }
                other => {
                    return Err(SurfaceError::Lexical {
                        pos,
                        msg: format!("unexpected character `{other}`"),
                    })
                }
            }
        }
    }
    let eof_line = text.lines().count() + 1;
    out.push(Token {
        tok: Tok::Eof,
        pos: Pos {
            line: eof_line,
            col: 1,
        },
    });
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    ForallP,
    ExistsP,
    ForallA,
    ExistsA,
}

impl Quantifier {
    pub fn keyword(self) -> &'static str {
        match self {
            Quantifier::ForallP => "forallP",
            Quantifier::ExistsP => "existsP",
            Quantifier::ForallA => "forallA",
            Quantifier::ExistsA => "existsA",
        }
    }

    fn from_keyword(s: &str) -> Option<Quantifier> {
        Some(match s {
            "forallP" => Quantifier::ForallP,
            "existsP" => Quantifier::ExistsP,
            "forallA" => Quantifier::ForallA,
            "existsA" => Quantifier::ExistsA,
            _ => return None,
        })
    }

    pub fn is_actualist(self) -> bool {
        matches!(self, Quantifier::ForallA | Quantifier::ExistsA)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnOp {
    Not,
    Box,
    Diamond,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    And,
    Or,
    Implies,
    Iff,
    Eq,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Ident(String),
    Top,
    Bottom,
    Lam(String, LogicType, Box<Expr>),
    App(Box<Expr>, Box<Expr>),
    Unary(UnOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Quant(Quantifier, String, Option<LogicType>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstDecl {
    pub name: String,
    pub ty: LogicType,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DefDecl {
    pub name: String,
    pub ty: Option<LogicType>,
    /// Parameters are already folded into `body` as lambdas.
    pub body: Expr,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FormulaDecl {
    pub name: Option<String>,
    pub body: Expr,
    pub pos: Pos,
}

/// A theory as written: parsed but not type checked.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ParsedTheory {
    pub name: Option<String>,
    pub frame: Vec<(String, Pos)>,
    pub consts: Vec<ConstDecl>,
    pub defs: Vec<DefDecl>,
    pub axioms: Vec<FormulaDecl>,
    pub goals: Vec<FormulaDecl>,
}

pub const KEYWORDS: &[&str] = &[
    "theory", "frame", "const", "def", "axiom", "goal", "forallP", "existsP", "forallA", "existsA",
    "box", "dia", "true", "false", "i", "prop",
];

struct Parser {
    toks: Vec<Token>,
    at: usize,
    decl_line: usize,
}

pub fn parse(text: &str) -> Result<ParsedTheory, SurfaceError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        decl_line: 0,
    };
    let mut theory = ParsedTheory::default();
    while p.peek().tok != Tok::Eof {
        p.declaration(&mut theory)?;
    }
    Ok(theory)
}

/// Parses a single term (used by tests and for ad-hoc queries).
pub fn parse_expr(text: &str) -> Result<Expr, SurfaceError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        decl_line: 0,
    };
    let e = p.term()?;
    if !p.at_end() {
        return Err(p.unexpected("end of term"));
    }
    Ok(e)
}

/// Parses a type such as `(i > prop) > prop`.
pub fn parse_type(text: &str) -> Result<LogicType, SurfaceError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        at: 0,
        decl_line: 0,
    };
    let ty = p.ty()?;
    if !p.at_end() {
        return Err(p.unexpected("end of type"));
    }
    Ok(ty)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    /// True at end of input or at a token that starts a new declaration.
    fn at_end(&self) -> bool {
        let t = self.peek();
        t.tok == Tok::Eof || (t.pos.col == 1 && t.pos.line > self.decl_line && self.decl_line > 0)
    }

    fn current(&self) -> Option<&Tok> {
        if self.at_end() {
            None
        } else {
            Some(&self.peek().tok)
        }
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> SurfaceError {
        let t = self.peek();
        let found = if self.at_end() && t.tok != Tok::Eof {
            "end of declaration".to_string()
        } else {
            t.tok.describe()
        };
        SurfaceError::Syntax {
            pos: t.pos,
            msg: format!("expected {wanted}, found {found}"),
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.current() == Some(tok) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, SurfaceError> {
        if self.current() == Some(&tok) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn peek_ident(&self) -> Option<&str> {
        match self.current() {
            Some(Tok::Ident(s)) => Some(s.as_str()),
            _ => None,
        }
    }

    fn name(&mut self) -> Result<(String, Pos), SurfaceError> {
        match self.peek_ident() {
            Some(s) if !KEYWORDS.contains(&s) => {
                let t = self.bump();
                match t.tok {
                    Tok::Ident(s) => Ok((s, t.pos)),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn declaration(&mut self, th: &mut ParsedTheory) -> Result<(), SurfaceError> {
        let start = self.peek().clone();
        if start.pos.col != 1 {
            return Err(SurfaceError::Syntax {
                pos: start.pos,
                msg: "declarations must start in column 1".into(),
            });
        }
        self.decl_line = start.pos.line;
        let kw = match &start.tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.unexpected("declaration keyword")),
        };
        self.bump();
        match kw.as_str() {
            "theory" => {
                let (name, _) = self.name()?;
                th.name = Some(name);
            }
            "frame" => {
                while let Some(Tok::Ident(_)) = self.current() {
                    let t = self.bump();
                    if let Tok::Ident(s) = t.tok {
                        th.frame.push((s, t.pos));
                    }
                }
            }
            "const" => {
                let mut names = vec![self.name()?];
                while matches!(self.peek_ident(), Some(s) if !KEYWORDS.contains(&s)) {
                    names.push(self.name()?);
                }
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                for (name, pos) in names {
                    th.consts.push(ConstDecl {
                        name,
                        ty: ty.clone(),
                        pos,
                    });
                }
            }
            "def" => {
                let (name, pos) = self.name()?;
                let mut params = Vec::new();
                while self.current() == Some(&Tok::LParen) {
                    params.extend(self.binder_group()?);
                }
                let ty = if self.eat(&Tok::Colon) {
                    Some(self.ty()?)
                } else {
                    None
                };
                self.expect(Tok::Define)?;
                let mut body = self.term()?;
                for (pname, pty, ppos) in params.into_iter().rev() {
                    body = Expr {
                        kind: ExprKind::Lam(pname, pty, Box::new(body)),
                        pos: ppos,
                    };
                }
                th.defs.push(DefDecl {
                    name,
                    ty,
                    body,
                    pos,
                });
            }
            "axiom" | "goal" => {
                let name = if matches!(self.peek_ident(), Some(s) if !KEYWORDS.contains(&s))
                    && self.toks.get(self.at + 1).map(|t| &t.tok) == Some(&Tok::Colon)
                {
                    let (n, _) = self.name()?;
                    self.bump();
                    Some(n)
                } else {
                    None
                };
                let body = self.term()?;
                let decl = FormulaDecl {
                    name,
                    body,
                    pos: start.pos,
                };
                if kw == "axiom" {
                    th.axioms.push(decl);
                } else {
                    th.goals.push(decl);
                }
            }
            other => {
                return Err(SurfaceError::Syntax {
                    pos: start.pos,
                    msg: format!("unknown declaration keyword `{other}`"),
                })
            }
        }
        if !self.at_end() {
            return Err(self.unexpected("end of declaration"));
        }
        Ok(())
    }

    fn ty(&mut self) -> Result<LogicType, SurfaceError> {
        let dom = self.ty_atom()?;
        if self.eat(&Tok::Gt) || self.eat(&Tok::Arrow) {
            Ok(LogicType::fun(dom, self.ty()?))
        } else {
            Ok(dom)
        }
    }

    fn ty_atom(&mut self) -> Result<LogicType, SurfaceError> {
        match self.current() {
            Some(Tok::Ident(s)) if s == "i" || s == "ι" => {
                self.bump();
                Ok(LogicType::Ind)
            }
            Some(Tok::Ident(s)) if s == "prop" || s == "σ" => {
                self.bump();
                Ok(LogicType::Prop)
            }
            Some(Tok::LParen) => {
                let open = self.bump();
                let t = self.ty()?;
                if !self.eat(&Tok::RParen) {
                    return Err(unmatched(open.pos));
                }
                Ok(t)
            }
            _ => Err(self.unexpected("type")),
        }
    }

    /// `(x y : T)`
    fn binder_group(&mut self) -> Result<Vec<(String, LogicType, Pos)>, SurfaceError> {
        let open = self.expect(Tok::LParen)?;
        let mut names = vec![self.name()?];
        while matches!(self.current(), Some(Tok::Ident(_))) {
            names.push(self.name()?);
        }
        self.expect(Tok::Colon)?;
        let ty = self.ty()?;
        if !self.eat(&Tok::RParen) {
            return Err(unmatched(open.pos));
        }
        Ok(names.into_iter().map(|(n, p)| (n, ty.clone(), p)).collect())
    }

    /// Binders after a quantifier or lambda: `x y : T` or `(x : T) (y : U)`.
    fn binders(&mut self, type_required: bool) -> Result<Vec<(String, Option<LogicType>, Pos)>, SurfaceError> {
        if self.current() == Some(&Tok::LParen) {
            let mut out = Vec::new();
            while self.current() == Some(&Tok::LParen) {
                out.extend(
                    self.binder_group()?
                        .into_iter()
                        .map(|(n, t, p)| (n, Some(t), p)),
                );
            }
            return Ok(out);
        }
        let mut names = vec![self.name()?];
        while matches!(self.current(), Some(Tok::Ident(_))) {
            names.push(self.name()?);
        }
        let ty = if self.eat(&Tok::Colon) {
            Some(self.ty()?)
        } else if type_required {
            return Err(self.unexpected("`:` and a binder type"));
        } else {
            None
        };
        Ok(names
            .into_iter()
            .map(|(n, p)| (n, ty.clone(), p))
            .collect())
    }

    fn term(&mut self) -> Result<Expr, SurfaceError> {
        if let Some(e) = self.binder_term()? {
            return Ok(e);
        }
        self.iff()
    }

    fn binder_term(&mut self) -> Result<Option<Expr>, SurfaceError> {
        let pos = self.peek().pos;
        let quant = match self.current() {
            Some(Tok::Lambda) => None,
            Some(Tok::Ident(s)) => match Quantifier::from_keyword(s) {
                Some(q) => Some(q),
                None => return Ok(None),
            },
            _ => return Ok(None),
        };
        self.bump();
        let actualist = quant.is_some_and(Quantifier::is_actualist);
        let binders = self.binders(!actualist)?;
        self.expect(Tok::Dot)?;
        let mut body = self.term()?;
        for (name, ty, bpos) in binders.into_iter().rev() {
            let kind = match quant {
                None => ExprKind::Lam(name, ty.expect("lambda binder typed"), Box::new(body)),
                Some(q) => ExprKind::Quant(q, name, ty, Box::new(body)),
            };
            body = Expr { kind, pos: bpos };
        }
        body.pos = pos;
        Ok(Some(body))
    }

    fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        let pos = lhs.pos;
        Expr {
            kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
            pos,
        }
    }

    fn operand(&mut self, below: fn(&mut Parser) -> Result<Expr, SurfaceError>) -> Result<Expr, SurfaceError> {
        if let Some(e) = self.binder_term()? {
            return Ok(e);
        }
        below(self)
    }

    fn iff(&mut self) -> Result<Expr, SurfaceError> {
        let lhs = self.operand(Parser::implication)?;
        if self.eat(&Tok::DArrow) {
            let rhs = self.operand(Parser::iff)?;
            return Ok(Self::binary(BinOp::Iff, lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Expr, SurfaceError> {
        let lhs = self.operand(Parser::disjunction)?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.operand(Parser::implication)?;
            return Ok(Self::binary(BinOp::Implies, lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Expr, SurfaceError> {
        let mut lhs = self.operand(Parser::conjunction)?;
        while self.eat(&Tok::Bar) {
            let rhs = self.operand(Parser::conjunction)?;
            lhs = Self::binary(BinOp::Or, lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Expr, SurfaceError> {
        let mut lhs = self.operand(Parser::equality)?;
        while self.eat(&Tok::Amp) {
            let rhs = self.operand(Parser::equality)?;
            lhs = Self::binary(BinOp::And, lhs, rhs);
        }
        Ok(lhs)
    }

    fn equality(&mut self) -> Result<Expr, SurfaceError> {
        let lhs = self.operand(Parser::unary)?;
        if self.eat(&Tok::EqEq) {
            let rhs = self.operand(Parser::unary)?;
            return Ok(Self::binary(BinOp::Eq, lhs, rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, SurfaceError> {
        let pos = self.peek().pos;
        let op = match self.current() {
            Some(Tok::Tilde) => Some(UnOp::Not),
            Some(Tok::Ident(s)) if s == "box" => Some(UnOp::Box),
            Some(Tok::Ident(s)) if s == "dia" => Some(UnOp::Diamond),
            _ => None,
        };
        match op {
            Some(op) => {
                self.bump();
                let arg = self.operand(Parser::unary)?;
                Ok(Expr {
                    kind: ExprKind::Unary(op, Box::new(arg)),
                    pos,
                })
            }
            None => self.application(),
        }
    }

    fn starts_atom(&self) -> bool {
        match self.current() {
            Some(Tok::LParen) => true,
            Some(Tok::Ident(s)) => {
                s == "true" || s == "false" || !KEYWORDS.contains(&s.as_str())
            }
            _ => false,
        }
    }

    fn application(&mut self) -> Result<Expr, SurfaceError> {
        let mut f = self.atom()?;
        while self.starts_atom() {
            let a = self.atom()?;
            let pos = f.pos;
            f = Expr {
                kind: ExprKind::App(Box::new(f), Box::new(a)),
                pos,
            };
        }
        Ok(f)
    }

    fn atom(&mut self) -> Result<Expr, SurfaceError> {
        let pos = self.peek().pos;
        match self.current() {
            Some(Tok::LParen) => {
                self.bump();
                if self.at_end() {
                    return Err(unmatched(pos));
                }
                let inner = self.term()?;
                if !self.eat(&Tok::RParen) {
                    if self.at_end() {
                        return Err(unmatched(pos));
                    }
                    return Err(self.unexpected("`)`"));
                }
                Ok(inner)
            }
            Some(Tok::Ident(s)) if s == "true" => {
                self.bump();
                Ok(Expr {
                    kind: ExprKind::Top,
                    pos,
                })
            }
            Some(Tok::Ident(s)) if s == "false" => {
                self.bump();
                Ok(Expr {
                    kind: ExprKind::Bottom,
                    pos,
                })
            }
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                let (name, _) = self.name()?;
                Ok(Expr {
                    kind: ExprKind::Ident(name),
                    pos,
                })
            }
            _ => Err(self.unexpected("term")),
        }
    }
}

fn unmatched(pos: Pos) -> SurfaceError {
    SurfaceError::Syntax {
        pos,
        msg: "unmatched `(`".into(),
    }
}
