use std::fmt;

use serde::{Deserialize, Serialize};

/// Object-level simple types.
///
/// `Prop` is the type of world-relativised propositions; the world type
/// itself never appears here, it only lives in the semantics.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LogicType {
    Ind,
    Prop,
    Fun(Box<LogicType>, Box<LogicType>),
}

impl LogicType {
    pub fn fun(domain: LogicType, codomain: LogicType) -> LogicType {
        LogicType::Fun(Box::new(domain), Box::new(codomain))
    }

    /// `Ind > Prop`, the type of modal sets.
    pub fn property() -> LogicType {
        LogicType::fun(LogicType::Ind, LogicType::Prop)
    }

    pub fn depth(&self) -> usize {
        match self {
            LogicType::Ind | LogicType::Prop => 0,
            LogicType::Fun(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Functional order: base types are 0, `a > b` is `max(order(a) + 1, order(b))`.
    pub fn order(&self) -> usize {
        match self {
            LogicType::Ind | LogicType::Prop => 0,
            LogicType::Fun(a, b) => (a.order() + 1).max(b.order()),
        }
    }

    /// Splits `a1 > a2 > ... > r` into its argument types and base result.
    pub fn uncurry(&self) -> (Vec<&LogicType>, &LogicType) {
        let mut args = Vec::new();
        let mut cur = self;
        while let LogicType::Fun(a, b) = cur {
            args.push(a.as_ref());
            cur = b;
        }
        (args, cur)
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        match self {
            LogicType::Ind => f.write_str("i"),
            LogicType::Prop => f.write_str("prop"),
            LogicType::Fun(a, b) => {
                if nested {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, true)?;
                f.write_str(" > ")?;
                b.fmt_prec(f, false)?;
                if nested {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for LogicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, false)
    }
}
