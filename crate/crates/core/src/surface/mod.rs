//! Surface language: theory files, type checking and elaboration into core terms.

mod check;
mod elab;
mod print;
pub mod syntax;
pub mod term;
pub mod types;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use check::{typecheck, typecheck_with, CheckOptions};
pub use elab::{elaborate, elaborate_term, inline_definitions, inline_term};
pub use print::{print_term, print_theory};
pub use syntax::{parse, parse_expr, parse_type, ParsedTheory};
pub use term::{Binder, Term, EXISTS_AT};
pub use types::LogicType;

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("{pos}: lexical error: {msg}")]
    Lexical { pos: Pos, msg: String },
    #[error("{pos}: syntax error: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: unbound identifier `{name}`")]
    Unbound { pos: Pos, name: String },
    #[error("{pos}: type mismatch: expected `{expected}`, found `{found}`")]
    Mismatch {
        pos: Pos,
        expected: LogicType,
        found: LogicType,
    },
    #[error("{pos}: actualist quantifier restricted to individuals, found binder of type `{ty}`")]
    ActualistNonInd { pos: Pos, ty: LogicType },
    #[error("{pos}: {msg}")]
    Invalid { pos: Pos, msg: String },
}

impl SurfaceError {
    pub fn pos(&self) -> Pos {
        match self {
            SurfaceError::Lexical { pos, .. }
            | SurfaceError::Syntax { pos, .. }
            | SurfaceError::Unbound { pos, .. }
            | SurfaceError::Mismatch { pos, .. }
            | SurfaceError::ActualistNonInd { pos, .. }
            | SurfaceError::Invalid { pos, .. } => *pos,
        }
    }

    /// `file:line:col: message`
    pub fn render(&self, file: &str) -> String {
        format!("{file}:{self}")
    }
}

/// Which frame conditions the accessibility relation must satisfy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrameFlags {
    pub refl: bool,
    pub symm: bool,
    pub trans: bool,
}

impl FrameFlags {
    pub const K: FrameFlags = FrameFlags {
        refl: false,
        symm: false,
        trans: false,
    };
    pub const T: FrameFlags = FrameFlags {
        refl: true,
        symm: false,
        trans: false,
    };
    pub const S4: FrameFlags = FrameFlags {
        refl: true,
        symm: false,
        trans: true,
    };
    pub const S5: FrameFlags = FrameFlags {
        refl: true,
        symm: true,
        trans: true,
    };

    /// Parses a list such as `refl,symm` or a logic name (`k`, `t`, `s4`, `s5`).
    pub fn parse_list(s: &str) -> Option<FrameFlags> {
        match s.trim().to_ascii_lowercase().as_str() {
            "" | "k" | "none" => return Some(FrameFlags::K),
            "t" => return Some(FrameFlags::T),
            "s4" => return Some(FrameFlags::S4),
            "s5" => return Some(FrameFlags::S5),
            _ => {}
        }
        let mut flags = FrameFlags::K;
        for part in s.split([',', ' ']).filter(|p| !p.is_empty()) {
            flags.set(part)?;
        }
        Some(flags)
    }

    fn set(&mut self, name: &str) -> Option<()> {
        match name {
            "refl" => self.refl = true,
            "symm" => self.symm = true,
            "trans" => self.trans = true,
            _ => return None,
        }
        Some(())
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.refl {
            v.push("refl");
        }
        if self.symm {
            v.push("symm");
        }
        if self.trans {
            v.push("trans");
        }
        v
    }
}

impl fmt::Display for FrameFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.names();
        if names.is_empty() {
            f.write_str("k")
        } else {
            f.write_str(&names.join(","))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub name: String,
    pub ty: LogicType,
    pub body: Term,
}

/// A named, closed, `prop`-typed axiom or goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub name: String,
    pub term: Term,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Theory {
    pub name: String,
    pub signature: Vec<(String, LogicType)>,
    pub definitions: Vec<Definition>,
    pub axioms: Vec<Formula>,
    pub goals: Vec<Formula>,
    pub frame: FrameFlags,
}

impl Theory {
    pub fn constant_type(&self, name: &str) -> Option<&LogicType> {
        self.signature
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, t)| t)
    }

    pub fn definition(&self, name: &str) -> Option<&Definition> {
        self.definitions.iter().find(|d| d.name == name)
    }

    pub fn goal(&self, name: &str) -> Option<&Formula> {
        self.goals.iter().find(|g| g.name == name)
    }

    pub fn is_elaborated(&self) -> bool {
        self.definitions.is_empty()
            && self
                .axioms
                .iter()
                .chain(&self.goals)
                .all(|f| !f.term.has_sugar())
    }
}

/// Parses and type checks theory source text.
pub fn load_theory(text: &str) -> Result<Theory, SurfaceError> {
    typecheck(&parse(text)?)
}
