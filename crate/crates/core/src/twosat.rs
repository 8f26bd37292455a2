//! 2-CNF satisfiability and minimum variable deletion.
//!
//! Satisfiability uses strongly connected components of the implication
//! graph. Variable deletion is reduced to deleting clauses of a doubled
//! formula in which each variable owns one "special" clause, and the search
//! branches on the special clauses of a contradiction cycle.

use std::collections::{HashSet, VecDeque};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Lit {
            var,
            positive: false,
        }
    }

    pub fn negated(self) -> Self {
        Lit {
            var: self.var,
            positive: !self.positive,
        }
    }

    /// Node index in the implication graph.
    fn node(self) -> usize {
        2 * self.var + usize::from(!self.positive)
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "!x{}", self.var)
        }
    }
}

/// A clause with one or two literals. Two-literal clauses are stored with the
/// smaller literal first so that duplicates compare equal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    pub a: Lit,
    pub b: Option<Lit>,
}

impl Clause {
    pub fn unit(a: Lit) -> Self {
        Clause { a, b: None }
    }

    pub fn pair(a: Lit, b: Lit) -> Self {
        if a == b {
            return Clause::unit(a);
        }
        Clause {
            a: a.min(b),
            b: Some(a.max(b)),
        }
    }

    /// `a → b`, i.e. `¬a ∨ b`.
    pub fn implies(a: Lit, b: Lit) -> Self {
        Clause::pair(a.negated(), b)
    }

    pub fn lits(&self) -> impl Iterator<Item = Lit> {
        std::iter::once(self.a).chain(self.b)
    }

    pub fn touches(&self, var: usize) -> bool {
        self.lits().any(|l| l.var == var)
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.lits().any(|l| assignment[l.var] == l.positive)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TwoCnf {
    pub var_count: usize,
    pub clauses: Vec<Clause>,
}

impl TwoCnf {
    pub fn new(var_count: usize) -> Self {
        TwoCnf {
            var_count,
            clauses: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Clause) {
        debug_assert!(c.lits().all(|l| l.var < self.var_count));
        self.clauses.push(c);
    }

    /// Removes duplicate clauses, keeping first occurrences.
    pub fn dedup(&mut self) {
        let mut seen = HashSet::new();
        self.clauses.retain(|c| seen.insert(*c));
    }

    /// The formula with every clause touching `vars` removed.
    pub fn without_vars(&self, vars: &[usize]) -> TwoCnf {
        TwoCnf {
            var_count: self.var_count,
            clauses: self
                .clauses
                .iter()
                .filter(|c| !vars.iter().any(|&v| c.touches(v)))
                .copied()
                .collect(),
        }
    }

    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(assignment))
    }
}

/// A variable whose two literals imply each other, with the closed walk
/// `x ⇝ ¬x ⇝ x` as the list of clause indices used, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contradiction {
    pub var: usize,
    pub cycle: Vec<usize>,
}

struct Implications {
    /// `(target node, clause index)`
    out: Vec<Vec<(usize, usize)>>,
}

impl Implications {
    fn build(f: &TwoCnf, active: impl Fn(usize) -> bool) -> Self {
        let mut out = vec![Vec::new(); 2 * f.var_count];
        for (i, c) in f.clauses.iter().enumerate() {
            if !active(i) {
                continue;
            }
            match c.b {
                None => out[c.a.negated().node()].push((c.a.node(), i)),
                Some(b) => {
                    out[c.a.negated().node()].push((b.node(), i));
                    out[b.negated().node()].push((c.a.node(), i));
                }
            }
        }
        Implications { out }
    }

    /// Tarjan's algorithm, iteratively. Components are numbered in reverse
    /// topological order of the condensation.
    fn components(&self) -> Vec<usize> {
        let n = self.out.len();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut comp = vec![usize::MAX; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut counter = 0;
        let mut next_comp = 0;
        // negative literals first, so unconstrained variables come out false
        for root in (0..n).map(|i| i ^ 1) {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut edge)) = call.last_mut() {
                if let Some(&(u, _)) = self.out[v].get(*edge) {
                    *edge += 1;
                    if index[u] == usize::MAX {
                        index[u] = counter;
                        low[u] = counter;
                        counter += 1;
                        stack.push(u);
                        on_stack[u] = true;
                        call.push((u, 0));
                    } else if on_stack[u] {
                        low[v] = low[v].min(index[u]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let u = stack.pop().unwrap();
                        on_stack[u] = false;
                        comp[u] = next_comp;
                        if u == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
        comp
    }

    /// Cheapest path `from ⇝ to` where an edge costs `cost(clause)` (0 or 1).
    fn path(
        &self,
        from: usize,
        to: usize,
        cost: &dyn Fn(usize) -> usize,
    ) -> Option<(usize, Vec<usize>)> {
        let n = self.out.len();
        let mut dist = vec![usize::MAX; n];
        let mut via: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut dq = VecDeque::new();
        dist[from] = 0;
        dq.push_back(from);
        while let Some(v) = dq.pop_front() {
            for &(u, ci) in &self.out[v] {
                let c = cost(ci);
                if dist[v] + c < dist[u] {
                    dist[u] = dist[v] + c;
                    via[u] = Some((v, ci));
                    if c == 0 {
                        dq.push_front(u);
                    } else {
                        dq.push_back(u);
                    }
                }
            }
        }
        if from == to || dist[to] == usize::MAX {
            return (from == to).then(|| (0, Vec::new()));
        }
        let mut clauses = Vec::new();
        let mut cur = to;
        while cur != from {
            let (prev, ci) = via[cur].unwrap();
            clauses.push(ci);
            cur = prev;
        }
        clauses.reverse();
        Some((dist[to], clauses))
    }
}

fn solve_with(f: &TwoCnf, active: impl Fn(usize) -> bool) -> Result<Vec<bool>, Implications> {
    let imp = Implications::build(f, active);
    let comp = imp.components();
    let mut assignment = vec![false; f.var_count];
    for (v, value) in assignment.iter_mut().enumerate() {
        let (t, fl) = (comp[2 * v], comp[2 * v + 1]);
        if t == fl {
            return Err(imp);
        }
        *value = t < fl;
    }
    Ok(assignment)
}

/// Cheapest contradiction cycle under `cost`, over all conflicting variables.
fn contradiction(
    f: &TwoCnf,
    imp: &Implications,
    cost: &dyn Fn(usize) -> usize,
) -> Option<Contradiction> {
    let comp = imp.components();
    let mut best: Option<(usize, usize, Contradiction)> = None;
    for v in 0..f.var_count {
        if comp[2 * v] != comp[2 * v + 1] {
            continue;
        }
        let (c1, p1) = imp.path(2 * v, 2 * v + 1, cost)?;
        let (c2, p2) = imp.path(2 * v + 1, 2 * v, cost)?;
        let len = p1.len() + p2.len();
        let key = (c1 + c2, len);
        if best.as_ref().is_none_or(|(c, l, _)| key < (*c, *l)) {
            let mut cycle = p1;
            cycle.extend(p2);
            best = Some((key.0, key.1, Contradiction { var: v, cycle }));
        }
    }
    best.map(|(_, _, c)| c)
}

/// A satisfying assignment, or a contradiction witness.
pub fn sat2_solve(f: &TwoCnf) -> Result<Vec<bool>, Contradiction> {
    solve_with(f, |_| true).map_err(|imp| {
        contradiction(f, &imp, &|_| 1).expect("unsatisfiable formula has a contradiction cycle")
    })
}

/// The doubled formula: variable `i` becomes `x_i^0 = 2i` and `x_i^1 = 2i+1`,
/// clause `i` is the special clause `¬x_i^0 ∨ ¬x_i^1`, and the remaining
/// clauses are the originals with `x_i ↦ x_i^1` and `¬x_i ↦ x_i^0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedCnf {
    pub formula: TwoCnf,
    pub original_vars: usize,
}

impl ReducedCnf {
    pub fn special_clause(&self, var: usize) -> usize {
        var
    }

    pub fn is_special(&self, clause: usize) -> bool {
        clause < self.original_vars
    }

    /// `(x_i^0, x_i^1)` as variable indices of the doubled formula.
    pub fn var_map(&self, var: usize) -> (usize, usize) {
        (2 * var, 2 * var + 1)
    }
}

fn translate(l: Lit) -> Lit {
    Lit::pos(2 * l.var + usize::from(l.positive))
}

pub fn var_to_clause_reduce(f: &TwoCnf) -> ReducedCnf {
    let mut g = TwoCnf::new(2 * f.var_count);
    for i in 0..f.var_count {
        g.push(Clause::pair(Lit::neg(2 * i), Lit::neg(2 * i + 1)));
    }
    for c in &f.clauses {
        g.push(match c.b {
            None => Clause::unit(translate(c.a)),
            Some(b) => Clause::pair(translate(c.a), translate(b)),
        });
    }
    ReducedCnf {
        formula: g,
        original_vars: f.var_count,
    }
}

struct Search<'a> {
    r: &'a ReducedCnf,
    visited: HashSet<Vec<usize>>,
    found: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn solve(&self, deleted: &[usize]) -> Result<Vec<bool>, Implications> {
        solve_with(&self.r.formula, |c| !deleted.contains(&c))
    }

    fn witness(&self, deleted: &[usize]) -> Option<Vec<usize>> {
        let imp = match self.solve(deleted) {
            Ok(_) => return None,
            Err(imp) => imp,
        };
        let cost = |c: usize| usize::from(self.r.is_special(c));
        let cyc = contradiction(&self.r.formula, &imp, &cost).expect("witness exists");
        let mut specials: Vec<usize> = cyc
            .cycle
            .into_iter()
            .filter(|&c| self.r.is_special(c))
            .collect();
        specials.sort_unstable();
        specials.dedup();
        assert!(
            !specials.is_empty(),
            "every contradiction cycle uses a special clause"
        );
        Some(specials)
    }

    /// Number of special-clause-disjoint contradiction cycles found greedily.
    fn lower_bound(&self, deleted: &[usize], limit: usize) -> usize {
        let mut gone = deleted.to_vec();
        let mut count = 0;
        while count <= limit {
            match self.witness(&gone) {
                None => break,
                Some(sp) => {
                    gone.extend(sp);
                    count += 1;
                }
            }
        }
        count
    }

    fn run(&mut self, deleted: Vec<usize>, budget: usize) {
        if !self.visited.insert(deleted.clone()) {
            return;
        }
        let specials = match self.witness(&deleted) {
            None => {
                self.found.push(deleted);
                return;
            }
            Some(sp) => sp,
        };
        if budget == 0 || self.lower_bound(&deleted, budget) > budget {
            return;
        }
        for s in specials {
            let mut next = deleted.clone();
            next.push(s);
            next.sort_unstable();
            self.run(next, budget - 1);
        }
    }
}

/// A minimum set of at most `k` variables whose deletion (with every clause
/// touching them) makes `f` satisfiable; ties are broken by the
/// lexicographically least sorted variable list.
pub fn almost2sat_vars(f: &TwoCnf, k: usize) -> Option<Vec<usize>> {
    let r = var_to_clause_reduce(f);
    for budget in 0..=k.min(f.var_count) {
        let mut s = Search {
            r: &r,
            visited: HashSet::new(),
            found: Vec::new(),
        };
        s.run(Vec::new(), budget);
        let best = s.found.into_iter().filter(|d| d.len() == budget).min();
        if let Some(d) = best {
            // special clause i belongs to variable i
            debug_assert!(sat2_solve(&f.without_vars(&d)).is_ok());
            return Some(d);
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DimacsError {
    #[error("line {0}: missing or malformed 'p cnf <vars> <clauses>' header")]
    Header(usize),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("header declares {declared} clauses but {found} were given")]
    ClauseCount { declared: usize, found: usize },
}

/// Parses DIMACS CNF restricted to clauses of width one or two.
pub fn parse_dimacs(text: &str) -> Result<TwoCnf, DimacsError> {
    let mut f: Option<TwoCnf> = None;
    let mut declared = 0;
    let mut pending: Vec<i64> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
            continue;
        }
        if t.starts_with('p') {
            let parts: Vec<&str> = t.split_whitespace().collect();
            if f.is_some() || parts.len() != 4 || parts[1] != "cnf" {
                return Err(DimacsError::Header(line));
            }
            let vars = parts[2].parse().map_err(|_| DimacsError::Header(line))?;
            declared = parts[3].parse().map_err(|_| DimacsError::Header(line))?;
            f = Some(TwoCnf::new(vars));
            continue;
        }
        let cnf = f.as_mut().ok_or(DimacsError::Header(line))?;
        for tok in t.split_whitespace() {
            let x: i64 = tok.parse().map_err(|_| DimacsError::Syntax {
                line,
                msg: format!("'{tok}' is not an integer"),
            })?;
            if x != 0 {
                if x.unsigned_abs() as usize > cnf.var_count {
                    return Err(DimacsError::Syntax {
                        line,
                        msg: format!("variable {x} out of range"),
                    });
                }
                pending.push(x);
                continue;
            }
            let lit = |x: i64| Lit {
                var: x.unsigned_abs() as usize - 1,
                positive: x > 0,
            };
            let clause = match pending.as_slice() {
                [a] => Clause::unit(lit(*a)),
                [a, b] => Clause::pair(lit(*a), lit(*b)),
                [] => {
                    return Err(DimacsError::Syntax {
                        line,
                        msg: "empty clause".into(),
                    })
                }
                _ => {
                    return Err(DimacsError::Syntax {
                        line,
                        msg: "clause wider than two literals".into(),
                    })
                }
            };
            cnf.push(clause);
            pending.clear();
        }
    }
    let f = f.ok_or(DimacsError::Header(last_line.max(1)))?;
    if !pending.is_empty() {
        return Err(DimacsError::Syntax {
            line: last_line,
            msg: "unterminated clause".into(),
        });
    }
    if f.clauses.len() != declared {
        return Err(DimacsError::ClauseCount {
            declared,
            found: f.clauses.len(),
        });
    }
    Ok(f)
}
