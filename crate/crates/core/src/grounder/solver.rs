//! A small deterministic CDCL solver: two watched literals, first-UIP
//! learning with backjumping, no restarts, and a fixed branching order
//! (lowest unassigned variable first, tried false first) so every run
//! makes the same choices.

use super::cnf::{Cnf, Lit};

/// Default conflict budget per solve call.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// A total assignment; index 0 is the constant-true variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment(Vec<bool>);

impl Assignment {
    pub fn value(&self, l: Lit) -> bool {
        self.0[l.var() as usize] == l.is_positive()
    }

    /// Values of variables `1..=n`.
    pub fn values(&self) -> &[bool] {
        &self.0[1..]
    }

    pub fn satisfies(&self, clauses: &[Vec<Lit>]) -> bool {
        clauses.iter().all(|c| c.iter().any(|&l| self.value(l)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Sat(Assignment),
    Unsat,
    /// The conflict budget ran out before an answer was found.
    Unknown,
}

pub struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<u32>>,
    /// Per variable: 0 unassigned, 1 true, -1 false.
    values: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    seen: Vec<bool>,
    next_decision: usize,
    inconsistent: bool,
    conflicts: u64,
}

fn value(values: &[i8], l: Lit) -> i8 {
    let v = values[l.var() as usize];
    if l.is_positive() {
        v
    } else {
        -v
    }
}

impl Solver {
    pub fn new(num_vars: usize) -> Solver {
        let mut values = vec![0; num_vars + 1];
        values[0] = 1;
        Solver {
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * (num_vars + 1)],
            values,
            level: vec![0; num_vars + 1],
            reason: vec![None; num_vars + 1],
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            seen: vec![false; num_vars + 1],
            next_decision: 1,
            inconsistent: false,
            conflicts: 0,
        }
    }

    pub fn from_cnf(cnf: &Cnf) -> Solver {
        let mut s = Solver::new(cnf.num_vars());
        for c in cnf.clauses() {
            s.add_clause(c);
        }
        s
    }

    pub fn num_vars(&self) -> usize {
        self.values.len() - 1
    }

    /// Total conflicts seen by this solver.
    pub fn conflicts(&self) -> u64 {
        self.conflicts
    }

    /// Adds a clause at decision level 0.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        if self.inconsistent {
            return;
        }
        self.backtrack(0);
        let mut c: Vec<Lit> = Vec::with_capacity(lits.len());
        for &l in lits {
            match value(&self.values, l) {
                1 => return,
                -1 => {}
                _ => c.push(l),
            }
        }
        c.sort_unstable();
        c.dedup();
        if c.windows(2).any(|w| w[0] == !w[1]) {
            return;
        }
        match c.len() {
            0 => self.inconsistent = true,
            1 => {
                self.enqueue(c[0], None);
                if self.propagate().is_some() {
                    self.inconsistent = true;
                }
            }
            _ => {
                self.attach(c);
            }
        }
    }

    fn attach(&mut self, c: Vec<Lit>) -> u32 {
        let ci = self.clauses.len() as u32;
        self.watches[c[0].code()].push(ci);
        self.watches[c[1].code()].push(ci);
        self.clauses.push(c);
        ci
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: Option<u32>) {
        let v = l.var() as usize;
        self.values[v] = if l.is_positive() { 1 } else { -1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let keep = self.trail_lim[level as usize];
        for l in self.trail.drain(keep..) {
            let v = l.var() as usize;
            self.values[v] = 0;
            self.reason[v] = None;
            self.next_decision = self.next_decision.min(v);
        }
        self.trail_lim.truncate(level as usize);
        self.qhead = self.trail.len();
    }

    /// Unit propagation; returns a conflicting clause if one arises.
    fn propagate(&mut self) -> Option<u32> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = !p;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = None;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                let c = &mut self.clauses[ci as usize];
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
                if value(&self.values, c[0]) == 1 {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                if let Some(k) = (2..c.len()).find(|&k| value(&self.values, c[k]) != -1) {
                    c.swap(1, k);
                    let w = c[1].code();
                    self.watches[w].push(ci);
                    continue;
                }
                ws[j] = ci;
                j += 1;
                let first = c[0];
                if value(&self.values, first) == -1 {
                    conflict = Some(ci);
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, Some(ci));
                }
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict.is_some() {
                return conflict;
            }
        }
        None
    }

    /// First-UIP conflict analysis: the learnt clause (asserting literal
    /// first, highest remaining level second) and the backjump level.
    fn analyze(&mut self, mut confl: u32) -> (Vec<Lit>, u32) {
        let current = self.decision_level();
        let mut learnt = vec![Lit::FALSE];
        let mut pending = 0usize;
        let mut idx = self.trail.len();
        let mut p: Option<Lit> = None;
        loop {
            let clause = &self.clauses[confl as usize];
            let start = usize::from(p.is_some());
            for &q in &clause[start..] {
                let v = q.var() as usize;
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    if self.level[v] >= current {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var() as usize] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            self.seen[lit.var() as usize] = false;
            pending -= 1;
            if pending == 0 {
                break;
            }
            confl = self.reason[lit.var() as usize].expect("implied literal has a reason");
        }
        learnt[0] = !p.expect("conflict involves the current level");
        for l in &learnt[1..] {
            self.seen[l.var() as usize] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let (k, lvl) = learnt[1..]
                .iter()
                .enumerate()
                .map(|(k, l)| (k + 1, self.level[l.var() as usize]))
                .max_by_key(|&(k, lvl)| (lvl, std::cmp::Reverse(k)))
                .expect("non-empty tail");
            learnt.swap(1, k);
            back = lvl;
        }
        (learnt, back)
    }

    fn pick_branch(&mut self) -> Option<u32> {
        while self.next_decision < self.values.len() {
            if self.values[self.next_decision] == 0 {
                return Some(self.next_decision as u32);
            }
            self.next_decision += 1;
        }
        None
    }

    /// Searches for a satisfying assignment, giving up after `budget`
    /// conflicts in this call. The solver returns to level 0 afterwards,
    /// so more clauses may be added and `solve` called again.
    pub fn solve(&mut self, budget: u64) -> SolveOutcome {
        if self.inconsistent {
            return SolveOutcome::Unsat;
        }
        self.backtrack(0);
        if self.propagate().is_some() {
            self.inconsistent = true;
            return SolveOutcome::Unsat;
        }
        let mut spent = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                self.conflicts += 1;
                spent += 1;
                if self.decision_level() == 0 {
                    self.inconsistent = true;
                    return SolveOutcome::Unsat;
                }
                if spent > budget {
                    self.backtrack(0);
                    return SolveOutcome::Unknown;
                }
                let (learnt, back) = self.analyze(confl);
                self.backtrack(back);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], None);
                } else {
                    let first = learnt[0];
                    let ci = self.attach(learnt);
                    self.enqueue(first, Some(ci));
                }
            } else {
                match self.pick_branch() {
                    Some(v) => {
                        self.trail_lim.push(self.trail.len());
                        self.enqueue(Lit::new(v, false), None);
                    }
                    None => {
                        let model = Assignment(self.values.iter().map(|&v| v == 1).collect());
                        self.backtrack(0);
                        return SolveOutcome::Sat(model);
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lit(d: i64) -> Lit {
        Lit::new(d.unsigned_abs() as u32, d > 0)
    }

    fn solver(n: usize, cs: &[&[i64]]) -> Solver {
        let mut s = Solver::new(n);
        for c in cs {
            s.add_clause(&c.iter().map(|&d| lit(d)).collect::<Vec<_>>());
        }
        s
    }

    /// Exhaustive oracle over all assignments.
    fn brute_sat(n: usize, cs: &[Vec<i64>]) -> bool {
        (0u32..1 << n).any(|bits| {
            cs.iter()
                .all(|c| c.iter().any(|&d| (bits >> (d.unsigned_abs() - 1) & 1 == 1) == (d > 0)))
        })
    }

    #[test]
    fn trivial_cases() {
        assert_eq!(solver(1, &[&[1], &[-1]]).solve(100), SolveOutcome::Unsat);
        assert!(matches!(solver(2, &[&[1, 2]]).solve(100), SolveOutcome::Sat(_)));
        assert!(matches!(solver(0, &[]).solve(100), SolveOutcome::Sat(_)));
    }

    #[test]
    fn branching_is_false_first() {
        match solver(3, &[&[1, 2, 3]]).solve(100) {
            SolveOutcome::Sat(a) => assert_eq!(a.values(), &[false, false, true]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn pigeonhole_three_into_two_is_unsat() {
        // p(i,j): pigeon i in hole j; variable 2*i + j + 1.
        let v = |i: i64, j: i64| 2 * i + j + 1;
        let mut cs: Vec<Vec<i64>> = (0..3).map(|i| vec![v(i, 0), v(i, 1)]).collect();
        for j in 0..2 {
            for a in 0..3 {
                for b in a + 1..3 {
                    cs.push(vec![-v(a, j), -v(b, j)]);
                }
            }
        }
        let refs: Vec<&[i64]> = cs.iter().map(Vec::as_slice).collect();
        assert_eq!(solver(6, &refs).solve(1000), SolveOutcome::Unsat);
    }

    #[test]
    fn budget_exhaustion_is_not_unsat() {
        let v = |i: i64, j: i64| 4 * i + j + 1;
        let mut cs: Vec<Vec<i64>> = (0..5).map(|i| (0..4).map(|j| v(i, j)).collect()).collect();
        for j in 0..4 {
            for a in 0..5 {
                for b in a + 1..5 {
                    cs.push(vec![-v(a, j), -v(b, j)]);
                }
            }
        }
        let refs: Vec<&[i64]> = cs.iter().map(Vec::as_slice).collect();
        assert_eq!(solver(20, &refs).solve(1), SolveOutcome::Unknown);
        assert_eq!(solver(20, &refs).solve(DEFAULT_BUDGET), SolveOutcome::Unsat);
    }

    #[test]
    fn incremental_blocking_enumerates_all_models() {
        let mut s = solver(3, &[&[1, 2]]);
        let mut seen = Vec::new();
        while let SolveOutcome::Sat(a) = s.solve(1000) {
            seen.push(a.values().to_vec());
            let block: Vec<Lit> = (1..=3).map(|v| Lit::new(v, !a.values()[v as usize - 1])).collect();
            s.add_clause(&block);
        }
        assert_eq!(seen.len(), 6);
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(
            n in 1usize..8,
            raw in prop::collection::vec(prop::collection::vec((1i64..8, any::<bool>()), 1..4), 0..30),
        ) {
            let cs: Vec<Vec<i64>> = raw
                .iter()
                .map(|c| c.iter().map(|&(v, s)| {
                    let v = (v - 1) % n as i64 + 1;
                    if s { v } else { -v }
                }).collect())
                .collect();
            let refs: Vec<&[i64]> = cs.iter().map(Vec::as_slice).collect();
            let clauses: Vec<Vec<Lit>> = cs.iter().map(|c| c.iter().map(|&d| lit(d)).collect()).collect();
            match solver(n, &refs).solve(DEFAULT_BUDGET) {
                SolveOutcome::Sat(a) => prop_assert!(a.satisfies(&clauses)),
                SolveOutcome::Unsat => prop_assert!(!brute_sat(n, &cs)),
                SolveOutcome::Unknown => prop_assert!(false, "budget exhausted"),
            }
            prop_assert_eq!(brute_sat(n, &cs), matches!(solver(n, &refs).solve(DEFAULT_BUDGET), SolveOutcome::Sat(_)));
        }
    }
}
