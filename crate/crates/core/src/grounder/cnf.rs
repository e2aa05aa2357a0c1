use std::collections::HashMap;
use std::fmt;
use std::ops::Not;

/// A literal over 1-based variables. Variable 0 is the constant true, so
/// `Lit::TRUE`/`Lit::FALSE` fold away before anything reaches a clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub const TRUE: Lit = Lit(0);
    pub const FALSE: Lit = Lit(1);

    pub fn new(var: u32, positive: bool) -> Lit {
        Lit(var << 1 | !positive as u32)
    }

    pub fn from_bool(b: bool) -> Lit {
        if b {
            Lit::TRUE
        } else {
            Lit::FALSE
        }
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn is_const(self) -> bool {
        self.var() == 0
    }

    pub(crate) fn code(self) -> usize {
        self.0 as usize
    }

    pub fn dimacs(self) -> i64 {
        let v = self.var() as i64;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

/// What a variable stands for in the decoded model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarMeaning {
    Access { from: usize, to: usize },
    Exists { entity: usize, world: usize },
    /// Truth of a Prop-valued constant on the given argument indices at a world.
    Holds { constant: String, args: Vec<u64>, world: usize },
    /// A Ind-valued constant maps the given argument indices to `entity`.
    Selects { constant: String, args: Vec<u64>, entity: usize },
    /// Tseitin auxiliary for a gate.
    Gate,
    Anonymous,
}

impl VarMeaning {
    pub fn is_decision(&self) -> bool {
        !matches!(self, VarMeaning::Gate | VarMeaning::Anonymous)
    }
}

impl fmt::Display for VarMeaning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args = |a: &[u64]| a.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
        match self {
            VarMeaning::Access { from, to } => write!(f, "r(w{from},w{to})"),
            VarMeaning::Exists { entity, world } => write!(f, "existsAt(e{entity},w{world})"),
            VarMeaning::Holds { constant, args: a, world } if a.is_empty() => write!(f, "{constant} at w{world}"),
            VarMeaning::Holds { constant, args: a, world } => write!(f, "{constant}({}) at w{world}", args(a)),
            VarMeaning::Selects { constant, args: a, entity } if a.is_empty() => write!(f, "{constant} = e{entity}"),
            VarMeaning::Selects { constant, args: a, entity } => write!(f, "{constant}({}) = e{entity}", args(a)),
            VarMeaning::Gate => f.write_str("gate"),
            VarMeaning::Anonymous => f.write_str("var"),
        }
    }
}

/// Clause store plus a hash-consed, constant-folding AND-gate builder with
/// Tseitin definitions.
#[derive(Clone, Debug, Default)]
pub struct Cnf {
    meanings: Vec<VarMeaning>,
    clauses: Vec<Vec<Lit>>,
    gates: HashMap<Vec<Lit>, Lit>,
}

impl Cnf {
    pub fn new() -> Cnf {
        Cnf::default()
    }

    pub fn new_var(&mut self, meaning: VarMeaning) -> Lit {
        self.meanings.push(meaning);
        Lit::new(self.meanings.len() as u32, true)
    }

    pub fn num_vars(&self) -> usize {
        self.meanings.len()
    }

    /// Meaning of 1-based variable `var`.
    pub fn meaning(&self, var: u32) -> &VarMeaning {
        &self.meanings[var as usize - 1]
    }

    pub fn meanings(&self) -> &[VarMeaning] {
        &self.meanings
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    /// Adds a clause, dropping false literals and skipping satisfied or
    /// tautological clauses. A clause that folds to nothing stays as the
    /// empty clause.
    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = Lit>) {
        let mut c: Vec<Lit> = Vec::new();
        for l in lits {
            if l == Lit::TRUE {
                return;
            }
            if l != Lit::FALSE {
                c.push(l);
            }
        }
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] == !w[1]) {
            return;
        }
        self.clauses.push(c);
    }

    pub fn and_all(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        let mut xs: Vec<Lit> = Vec::new();
        for l in lits {
            if l == Lit::FALSE {
                return Lit::FALSE;
            }
            if l != Lit::TRUE {
                xs.push(l);
            }
        }
        xs.sort_unstable();
        xs.dedup();
        if xs.windows(2).any(|w| w[0] == !w[1]) {
            return Lit::FALSE;
        }
        match xs.len() {
            0 => Lit::TRUE,
            1 => xs[0],
            _ => {
                if let Some(&g) = self.gates.get(&xs) {
                    return g;
                }
                let g = self.new_var(VarMeaning::Gate);
                for &x in &xs {
                    self.clauses.push(vec![!g, x]);
                }
                let mut long: Vec<Lit> = xs.iter().map(|&x| !x).collect();
                long.push(g);
                self.clauses.push(long);
                self.gates.insert(xs, g);
                g
            }
        }
    }

    pub fn or_all(&mut self, lits: impl IntoIterator<Item = Lit>) -> Lit {
        !self.and_all(lits.into_iter().map(|l| !l))
    }

    pub fn and(&mut self, a: Lit, b: Lit) -> Lit {
        self.and_all([a, b])
    }

    pub fn or(&mut self, a: Lit, b: Lit) -> Lit {
        self.or_all([a, b])
    }

    pub fn implies(&mut self, a: Lit, b: Lit) -> Lit {
        self.or_all([!a, b])
    }

    pub fn iff(&mut self, a: Lit, b: Lit) -> Lit {
        if a == b {
            return Lit::TRUE;
        }
        if a == !b {
            return Lit::FALSE;
        }
        let both = self.and(a, b);
        let neither = self.and(!a, !b);
        self.or(both, neither)
    }

    /// Exactly one of `lits` holds.
    pub fn exactly_one(&mut self, lits: &[Lit]) {
        self.add_clause(lits.iter().copied());
        for (i, &a) in lits.iter().enumerate() {
            for &b in &lits[i + 1..] {
                self.add_clause([!a, !b]);
            }
        }
    }

    /// DIMACS rendering: meaning comments for model variables, then the
    /// header and one zero-terminated clause per line.
    pub fn to_dimacs(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for (i, m) in self.meanings.iter().enumerate() {
            if m.is_decision() {
                let _ = writeln!(out, "c {} {}", i + 1, m);
            }
        }
        let _ = writeln!(out, "p cnf {} {}", self.meanings.len(), self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(out, "{} ", l.dimacs());
            }
            out.push_str("0\n");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_folding() {
        let mut cnf = Cnf::new();
        let x = cnf.new_var(VarMeaning::Anonymous);
        assert_eq!(cnf.and(x, Lit::TRUE), x);
        assert_eq!(cnf.and(x, Lit::FALSE), Lit::FALSE);
        assert_eq!(cnf.and(x, !x), Lit::FALSE);
        assert_eq!(cnf.or(x, !x), Lit::TRUE);
        assert_eq!(cnf.iff(x, x), Lit::TRUE);
        assert_eq!(cnf.num_vars(), 1);
    }

    #[test]
    fn gates_are_shared() {
        let mut cnf = Cnf::new();
        let x = cnf.new_var(VarMeaning::Anonymous);
        let y = cnf.new_var(VarMeaning::Anonymous);
        let g = cnf.and(x, y);
        assert_eq!(cnf.and(y, x), g);
        assert_eq!(cnf.or(!x, !y), !g);
        assert_eq!(cnf.num_vars(), 3);
    }

    #[test]
    fn dimacs_format() {
        let mut cnf = Cnf::new();
        assert_eq!(cnf.to_dimacs(), "p cnf 0 0\n");
        let x = cnf.new_var(VarMeaning::Anonymous);
        cnf.add_clause([x]);
        assert_eq!(cnf.to_dimacs(), "p cnf 1 1\n1 0\n");
        let mut cnf = Cnf::new();
        let r = cnf.new_var(VarMeaning::Access { from: 0, to: 0 });
        cnf.add_clause([!r]);
        assert_eq!(cnf.to_dimacs(), "c 1 r(w0,w0)\np cnf 1 1\n-1 0\n");
    }

    #[test]
    fn false_only_clause_is_empty() {
        let mut cnf = Cnf::new();
        cnf.add_clause([Lit::FALSE]);
        assert_eq!(cnf.clauses(), &[Vec::<Lit>::new()]);
    }
}
