//! Reduction semantics modulo structural congruence.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::congruence::{canonical_key, embeds, struct_eq_bounded, tidy, EqBudget, Soup};
use crate::syntax::{free_names, is_free_in, substitute, Name, NameSet, Process};
use crate::Error;

/// Default cap on distinct states visited by one search.
pub const DEFAULT_MAX_STATES: usize = 512;
/// Default size above which a state is kept but not expanded.
pub const DEFAULT_MAX_TERM_SIZE: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Outcome {
    Holds,
    Violated,
    Inconclusive,
}

/// Budget figures consumed by a check.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BudgetUsed {
    /// Deepest search level reached.
    pub steps: usize,
    /// Distinct states visited.
    pub states: usize,
    /// Terms produced by replication unfolding.
    pub unfolds: usize,
    /// Component pairings tried by the matcher.
    pub candidates: usize,
    /// True if a search stopped at a bound rather than running out of states.
    pub exhausted: bool,
}

impl BudgetUsed {
    pub fn absorb(&mut self, other: &BudgetUsed) {
        self.steps = self.steps.max(other.steps);
        self.states += other.states;
        self.unfolds += other.unfolds;
        self.candidates += other.candidates;
        self.exhausted |= other.exhausted;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Trace(Trace),
    Pair(Process, Process),
    Term(Process),
    /// A named property failing on `term`; `image` is the offending result.
    Property {
        property: String,
        term: Process,
        image: Process,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub outcome: Outcome,
    pub witness: Option<Witness>,
    pub budget_used: BudgetUsed,
}

impl Verdict {
    pub fn holds(budget_used: BudgetUsed) -> Self {
        Verdict {
            outcome: Outcome::Holds,
            witness: None,
            budget_used,
        }
    }

    pub fn holds_with(witness: Witness, budget_used: BudgetUsed) -> Self {
        Verdict {
            outcome: Outcome::Holds,
            witness: Some(witness),
            budget_used,
        }
    }

    pub fn violated(witness: Witness, budget_used: BudgetUsed) -> Self {
        Verdict {
            outcome: Outcome::Violated,
            witness: Some(witness),
            budget_used,
        }
    }

    pub fn inconclusive(mut budget_used: BudgetUsed) -> Self {
        budget_used.exhausted = true;
        Verdict {
            outcome: Outcome::Inconclusive,
            witness: None,
            budget_used,
        }
    }

    pub fn is_holds(&self) -> bool {
        self.outcome == Outcome::Holds
    }

    pub fn trace(&self) -> Option<&Trace> {
        match &self.witness {
            Some(Witness::Trace(t)) => Some(t),
            _ => None,
        }
    }
}

/// Where a communication happened.
///
/// Indices refer to the atoms of the flattened term after the listed
/// replicated atoms were unfolded once each (copies are appended in order).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RedexDescriptor {
    pub subject: Name,
    pub object: Name,
    pub input_binder: Name,
    pub output_index: usize,
    pub input_index: usize,
    /// Top-level restricted names in scope of the redex.
    pub restricted: Vec<Name>,
    /// Replicated atoms unfolded to expose the redex.
    pub unfolded: Vec<usize>,
    pub inert: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub redex: RedexDescriptor,
    pub result: Process,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub start: Process,
    pub steps: Vec<Step>,
}

impl Trace {
    pub fn empty(start: Process) -> Self {
        Trace {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> &Process {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    pub fn inert_flags(&self) -> Vec<bool> {
        self.steps.iter().map(|s| s.redex.inert).collect()
    }
}

/// `P↓`: an unguarded `ok` at top level, looking through `|`, `ν` and `!`.
pub fn has_success(p: &Process) -> bool {
    match p {
        Process::Success => true,
        Process::Par(l, r) => has_success(l) || has_success(r),
        Process::Restrict(_, b) | Process::Repl(b) => has_success(b),
        _ => false,
    }
}

#[derive(Clone)]
struct Entry {
    atom: Process,
    /// Unfold operations whose copies this atom descends from.
    origin: u64,
}

struct Unfolder {
    restricted: Vec<Name>,
    entries: Vec<Entry>,
    /// Parent operation of each operation, if any.
    parents: Vec<Option<usize>>,
    unfolded: Vec<usize>,
    times: Vec<usize>,
    depth: usize,
    asynchronous: bool,
    found: Vec<(RedexDescriptor, Process)>,
}

const MAX_OPS: usize = 16;

impl Unfolder {
    fn leaves_after(&self, parent: Option<usize>) -> usize {
        let n = self.parents.len();
        let mut has_child = vec![false; n];
        for p in self.parents.iter().flatten() {
            has_child[*p] = true;
        }
        if let Some(p) = parent {
            has_child[p] = true;
        }
        has_child.iter().filter(|c| !**c).count() + 1
    }

    fn search(&mut self, from: usize) {
        self.emit();
        if self.parents.len() >= MAX_OPS {
            return;
        }
        let mut a = from;
        while a < self.entries.len() {
            let Process::Repl(body) = self.entries[a].atom.clone() else {
                a += 1;
                continue;
            };
            if self.times[a] >= self.depth {
                a += 1;
                continue;
            }
            let origin = self.entries[a].origin;
            let parent = (origin != 0).then(|| 63 - origin.leading_zeros() as usize);
            if self.leaves_after(parent) > 2 {
                a += 1;
                continue;
            }
            let op = self.parents.len();
            let mark = (self.entries.len(), self.restricted.len());
            let mut soup = Soup::default();
            let mut avoid = self.occupied();
            soup.absorb(&body, &mut avoid);
            self.restricted.extend(soup.restricted);
            for atom in soup.atoms {
                self.entries.push(Entry {
                    atom,
                    origin: origin | (1 << op),
                });
                self.times.push(0);
            }
            self.parents.push(parent);
            self.unfolded.push(a);
            self.times[a] += 1;

            self.search(a);

            self.times[a] -= 1;
            self.unfolded.pop();
            self.parents.pop();
            self.entries.truncate(mark.0);
            self.times.truncate(mark.0);
            self.restricted.truncate(mark.1);
            a += 1;
        }
    }

    fn occupied(&self) -> NameSet {
        let mut out: NameSet = self.restricted.iter().cloned().collect();
        for e in &self.entries {
            out.extend(free_names(&e.atom));
        }
        out
    }

    fn emit(&mut self) {
        let full: u64 = if self.parents.is_empty() {
            0
        } else {
            (1u64 << self.parents.len()) - 1
        };
        for (oi, o) in self.entries.iter().enumerate() {
            let Process::Output(x, y, ocont) = &o.atom else {
                continue;
            };
            for (ii, i) in self.entries.iter().enumerate() {
                let Process::Input(x2, z, icont) = &i.atom else {
                    continue;
                };
                if x != x2 || (o.origin | i.origin) != full {
                    continue;
                }
                let received = substitute(icont, z, y);
                let others: Vec<&Process> = self
                    .entries
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != oi && *k != ii)
                    .map(|(_, e)| &e.atom)
                    .collect();
                let inert = self.asynchronous
                    && self.restricted.contains(x)
                    && !others.iter().any(|a| is_free_in(x, a))
                    && !is_free_in(x, ocont)
                    && !is_free_in(x, &received);
                let mut parts: Vec<Process> = others.into_iter().cloned().collect();
                parts.push((**ocont).clone());
                parts.push(received);
                let reduct = tidy(&Process::restrict_all(&self.restricted, Process::par_all(parts)));
                let redex = RedexDescriptor {
                    subject: x.clone(),
                    object: y.clone(),
                    input_binder: z.clone(),
                    output_index: oi,
                    input_index: ii,
                    restricted: self.restricted.clone(),
                    unfolded: self.unfolded.clone(),
                    inert,
                };
                self.found.push((redex, reduct));
            }
        }
    }
}

/// One-step reducts of `p`, one entry per redex.
///
/// Each replicated atom is unfolded at most `unfold_depth` times per
/// redex, and only copies that contribute one of the two reacting prefixes
/// are kept, so every redex is listed once. Distinct redexes may yield
/// congruent reducts; searches merge those by canonical key.
pub fn reduct_candidates(p: &Process, unfold_depth: usize) -> Vec<(RedexDescriptor, Process)> {
    let soup = Soup::of(p);
    let n = soup.atoms.len();
    let mut u = Unfolder {
        restricted: soup.restricted,
        entries: soup
            .atoms
            .into_iter()
            .map(|atom| Entry { atom, origin: 0 })
            .collect(),
        parents: Vec::new(),
        unfolded: Vec::new(),
        times: vec![0; n],
        depth: unfold_depth,
        asynchronous: p.is_asynchronous(),
        found: Vec::new(),
    };
    u.search(0);
    u.found
}

/// Inert reducts `p ⇛ q`. Requires an asynchronous term.
pub fn inert_reducts(p: &Process) -> Result<Vec<(RedexDescriptor, Process)>, Error> {
    if !p.is_asynchronous() {
        return Err(Error::NotAsynchronous(crate::text::print(p)));
    }
    Ok(reduct_candidates(p, 1)
        .into_iter()
        .filter(|(d, _)| d.inert)
        .collect())
}

/// Search bounds for reachability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub max_steps: usize,
    pub max_states: usize,
    pub max_term_size: usize,
}

impl Limits {
    pub fn steps(max_steps: usize) -> Self {
        Limits {
            max_steps,
            max_states: DEFAULT_MAX_STATES,
            max_term_size: DEFAULT_MAX_TERM_SIZE,
        }
    }
}

/// Breadth-first reduction graph over canonical keys.
pub struct Graph {
    pub states: Vec<Process>,
    pub level: Vec<usize>,
    parent: Vec<Option<(usize, RedexDescriptor)>>,
    succ: Vec<Vec<usize>>,
    keys: HashMap<Process, usize>,
    /// Every reachable state was expanded.
    pub closed: bool,
    pub truncated_by_states: bool,
}

/// What the visitor wants after seeing a state.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Visit {
    Continue,
    Stop,
}

impl Graph {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn successors(&self, i: usize) -> &[usize] {
        &self.succ[i]
    }

    pub fn trace_to(&self, mut i: usize) -> Trace {
        let mut steps = Vec::new();
        while let Some((p, redex)) = &self.parent[i] {
            steps.push(Step {
                redex: redex.clone(),
                result: self.states[i].clone(),
            });
            i = *p;
        }
        steps.reverse();
        Trace {
            start: self.states[i].clone(),
            steps,
        }
    }

    pub fn budget(&self) -> BudgetUsed {
        BudgetUsed {
            steps: self.level.iter().copied().max().unwrap_or(0),
            states: self.states.len(),
            exhausted: !self.closed,
            ..BudgetUsed::default()
        }
    }

    fn reaches(&self, from: usize, to: usize) -> bool {
        let mut seen = vec![false; self.states.len()];
        let mut stack = vec![from];
        while let Some(i) = stack.pop() {
            if i == to {
                return true;
            }
            if std::mem::replace(&mut seen[i], true) {
                continue;
            }
            stack.extend(self.succ[i].iter().copied());
        }
        false
    }

    fn ancestors(&self, mut i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while let Some((p, _)) = &self.parent[i] {
            out.push(*p);
            i = *p;
        }
        out
    }
}

/// Explores the reduction graph of `start` level by level.
///
/// `on_state` sees each new state once; `on_edge` sees every edge, with a
/// flag telling whether the target was new.
pub fn explore(
    start: &Process,
    limits: Limits,
    on_state: impl FnMut(&Graph, usize) -> Visit,
    on_edge: impl FnMut(&Graph, usize, usize, bool) -> Visit,
) -> Graph {
    explore_by(start, limits, |p| reduct_candidates(p, 1), on_state, on_edge)
}

/// [`explore`] with a custom successor relation.
pub fn explore_by(
    start: &Process,
    limits: Limits,
    mut successors: impl FnMut(&Process) -> Vec<(RedexDescriptor, Process)>,
    mut on_state: impl FnMut(&Graph, usize) -> Visit,
    mut on_edge: impl FnMut(&Graph, usize, usize, bool) -> Visit,
) -> Graph {
    let root = tidy(start);
    let mut g = Graph {
        states: vec![root.clone()],
        level: vec![0],
        parent: vec![None],
        succ: vec![Vec::new()],
        keys: HashMap::new(),
        closed: false,
        truncated_by_states: false,
    };
    g.keys.insert(canonical_key(&root), 0);
    if on_state(&g, 0) == Visit::Stop {
        return g;
    }
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    let mut oversized = false;
    while let Some(i) = queue.pop_front() {
        if g.level[i] >= limits.max_steps {
            queue.push_front(i);
            break;
        }
        if g.states[i].size() > limits.max_term_size {
            oversized = true;
            continue;
        }
        for (redex, q) in successors(&g.states[i]) {
            let key = canonical_key(&q);
            let (j, fresh) = match g.keys.get(&key) {
                Some(&j) => (j, false),
                None => {
                    if g.states.len() >= limits.max_states {
                        g.truncated_by_states = true;
                        return g;
                    }
                    let j = g.states.len();
                    g.states.push(q);
                    g.level.push(g.level[i] + 1);
                    g.parent.push(Some((i, redex)));
                    g.succ.push(Vec::new());
                    g.keys.insert(key, j);
                    queue.push_back(j);
                    (j, true)
                }
            };
            if !g.succ[i].contains(&j) {
                g.succ[i].push(j);
            }
            if on_edge(&g, i, j, fresh) == Visit::Stop {
                return g;
            }
            if fresh && on_state(&g, j) == Visit::Stop {
                return g;
            }
        }
    }
    g.closed = queue.is_empty() && !oversized;
    g
}

/// Searches for a reduction sequence from `p` to a term `≡`-equal to
/// `target`.
pub fn reduces_to(p: &Process, target: &Process, max_steps: usize, budget: EqBudget) -> Verdict {
    reduces_to_within(p, target, Limits::steps(max_steps), budget)
}

pub fn reduces_to_within(p: &Process, target: &Process, limits: Limits, budget: EqBudget) -> Verdict {
    reaches_any(p, std::slice::from_ref(target), limits, budget).0
}

/// Like [`reduces_to`] against several targets at once; also returns the
/// index of the target that was reached.
pub fn reaches_any(
    p: &Process,
    targets: &[Process],
    limits: Limits,
    budget: EqBudget,
) -> (Verdict, Option<usize>) {
    let keys: HashMap<Process, usize> = targets
        .iter()
        .enumerate()
        .map(|(i, t)| (canonical_key(t), i))
        .collect();
    let mut used = BudgetUsed::default();
    let mut definite = true;
    let mut hit: Option<(usize, usize)> = None;
    let g = explore(
        p,
        limits,
        |g, i| {
            let s = &g.states[i];
            if let Some(&t) = keys.get(&canonical_key(s)) {
                hit = Some((i, t));
                return Visit::Stop;
            }
            for (t, target) in targets.iter().enumerate() {
                let v = struct_eq_bounded(s, target, budget);
                used.candidates += v.budget_used.candidates;
                used.unfolds += v.budget_used.unfolds;
                match v.outcome {
                    Outcome::Holds => {
                        hit = Some((i, t));
                        return Visit::Stop;
                    }
                    Outcome::Inconclusive => definite = false,
                    Outcome::Violated => {}
                }
            }
            Visit::Continue
        },
        |_, _, _, _| Visit::Continue,
    );
    used.absorb(&g.budget());
    if let Some((i, t)) = hit {
        used.exhausted = false;
        return (Verdict::holds_with(Witness::Trace(g.trace_to(i)), used), Some(t));
    }
    if g.closed && definite {
        let witness = match targets {
            [t] => Witness::Pair(p.clone(), t.clone()),
            _ => Witness::Term(p.clone()),
        };
        return (Verdict::violated(witness, used), None);
    }
    (Verdict::inconclusive(used), None)
}

/// `P⇓` within `max_steps`.
pub fn may_succeed(p: &Process, max_steps: usize) -> Verdict {
    may_succeed_within(p, Limits::steps(max_steps))
}

pub fn may_succeed_within(p: &Process, limits: Limits) -> Verdict {
    // Reduction never creates `ok`, so a term without one cannot succeed.
    if !p.has_success_anywhere() {
        return Verdict::violated(Witness::Term(p.clone()), BudgetUsed::default());
    }
    let mut hit = None;
    let g = explore(
        p,
        limits,
        |g, i| {
            if has_success(&g.states[i]) {
                hit = Some(i);
                Visit::Stop
            } else {
                Visit::Continue
            }
        },
        |_, _, _, _| Visit::Continue,
    );
    let used = g.budget();
    match hit {
        Some(i) => Verdict::holds_with(Witness::Trace(g.trace_to(i)), BudgetUsed { exhausted: false, ..used }),
        None if g.closed => Verdict::violated(Witness::Term(p.clone()), used),
        None => Verdict::inconclusive(used),
    }
}

/// Probes `P ⟼^ω`.
///
/// `Holds` with a lasso trace when the explored graph contains a cycle, or
/// a state that reduces to a term containing a copy of itself. `Violated`
/// when the whole reachable graph was explored and is acyclic.
pub fn diverges_bounded(p: &Process, max_steps: usize) -> Verdict {
    diverges_within(p, Limits::steps(max_steps))
}

pub fn diverges_within(p: &Process, limits: Limits) -> Verdict {
    let growth = p.has_replication();
    let mut lasso: Option<(usize, usize)> = None;
    let g = explore(
        p,
        limits,
        |_, _| Visit::Continue,
        |g, from, to, fresh| {
            if !fresh {
                if g.reaches(to, from) {
                    lasso = Some((from, to));
                    return Visit::Stop;
                }
            } else if growth {
                let grown = &g.states[to];
                let size = grown.size();
                for a in g.ancestors(to) {
                    let s = &g.states[a];
                    if s.size() < size && embeds(s, grown) {
                        lasso = Some((to, a));
                        return Visit::Stop;
                    }
                }
            }
            Visit::Continue
        },
    );
    let used = g.budget();
    match lasso {
        Some((from, to)) => {
            let mut trace = g.trace_to(from);
            // Close the loop back to the repeated state, when it is a cycle.
            if let Some(step) = cycle_step(&g, from, to) {
                trace.steps.push(step);
            }
            Verdict::holds_with(Witness::Trace(trace), BudgetUsed { exhausted: false, ..used })
        }
        None if g.closed => Verdict::violated(Witness::Term(p.clone()), used),
        None => Verdict::inconclusive(used),
    }
}

fn cycle_step(g: &Graph, from: usize, to: usize) -> Option<Step> {
    if !g.succ[from].contains(&to) {
        return None;
    }
    reduct_candidates(&g.states[from], 1)
        .into_iter()
        .find(|(_, q)| canonical_key(q) == canonical_key(&g.states[to]))
        .map(|(redex, _)| Step {
            redex,
            result: g.states[to].clone(),
        })
}

/// Applies inert reductions that need no replication unfolding until none
/// is left, or `max` steps were taken.
pub fn inert_completion(p: &Process, max: usize) -> Trace {
    let mut trace = Trace::empty(p.clone());
    let mut cur = tidy(p);
    for _ in 0..max {
        let next = reduct_candidates(&cur, 0)
            .into_iter()
            .find(|(d, _)| d.inert);
        match next {
            Some((redex, q)) => {
                trace.steps.push(Step {
                    redex,
                    result: q.clone(),
                });
                cur = q;
            }
            None => break,
        }
    }
    trace
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::struct_eq_s;
    use crate::text::parse;

    fn p(s: &str) -> Process {
        parse(s).unwrap()
    }

    #[test]
    fn reduct_examples() {
        let r = reduct_candidates(&p("x!y.0 | x(z).0"), 1);
        assert_eq!(r.len(), 1);
        assert!(struct_eq_s(&r[0].1, &Process::Nil));
        assert!(reduct_candidates(&Process::Nil, 1).is_empty());
        assert_eq!(reduct_candidates(&p("x!y.0 | x(z).0 | x(w).0"), 1).len(), 2);
        assert_eq!(reduct_candidates(&p("x!y.0 | x(z).z!z.0 | x(w).ok"), 1).len(), 2);
    }

    /// Brute-force pairing of one output with every input, on plain terms.
    #[test]
    fn reduct_count_matches_pairing_oracle() {
        let t = p("x!y.0 | x(z).z!a.0 | x(w).w(q).0 | y(r).0");
        let oracle: Vec<Process> = vec![
            p("y!a.0 | x(w).w(q).0 | y(r).0"),
            p("x(z).z!a.0 | y(q).0 | y(r).0"),
        ];
        let got = reduct_candidates(&t, 1);
        assert_eq!(got.len(), oracle.len());
        for o in &oracle {
            assert!(got.iter().any(|(_, q)| struct_eq_s(q, o)), "{o}");
        }
    }

    #[test]
    fn substitution_avoids_capture_in_reducts() {
        let r = reduct_candidates(&p("x!w.0 | x(z).new w. z!w.0"), 1);
        assert_eq!(r.len(), 1);
        assert_eq!(free_names(&r[0].1), [Name::user("w")].into_iter().collect());
    }

    #[test]
    fn replication_is_unfolded_once_per_redex() {
        let r = reduct_candidates(&p("!x!y.0 | x(z).0"), 1);
        assert_eq!(r.len(), 1);
        assert!(struct_eq_s(&r[0].1, &p("!x!y.0")));
        let r = reduct_candidates(&p("!(x!y.0 | x(z).ok)"), 1);
        assert_eq!(r.len(), 1);
        assert!(struct_eq_s(&r[0].1, &p("!(x!y.0 | x(z).ok) | ok")));
        let r = reduct_candidates(&p("!(!x!y.0 | x(z).0)"), 1);
        assert_eq!(r.len(), 1);
        assert!(reduct_candidates(&p("!x!y.0 | !x!y.0"), 1).is_empty());
    }

    #[test]
    fn inert_examples() {
        let t = p("new v. (v!y.0 | z!w.0 | v(q).q!q.0)");
        let r = inert_reducts(&t).unwrap();
        assert_eq!(r.len(), 1);
        assert!(struct_eq_s(&r[0].1, &p("z!w.0 | y!y.0")));
        assert!(inert_reducts(&p("x!y.0 | x(z).0")).unwrap().is_empty());
        assert!(inert_reducts(&p("new v. (v!y.0 | v(z).0 | v(w).0)")).unwrap().is_empty());
        assert!(inert_reducts(&p("new v. (v!v.0 | v(z).z!y.0)")).unwrap().is_empty());
        assert!(matches!(inert_reducts(&p("x!y.x!y.0")), Err(Error::NotAsynchronous(_))));
    }

    #[test]
    fn success_examples() {
        assert!(has_success(&p("ok | x!y.0")));
        assert!(!has_success(&p("x(z).ok")));
        assert!(has_success(&p("!ok")));
        assert!(has_success(&p("new a. (0 | ok)")));
    }

    #[test]
    fn may_succeed_examples() {
        assert_eq!(may_succeed(&Process::Success, 0).outcome, Outcome::Holds);
        let v = may_succeed(&p("x!y.ok | x(z).0"), 4);
        assert_eq!(v.outcome, Outcome::Holds);
        assert_eq!(v.trace().unwrap().len(), 1);
        assert_eq!(may_succeed(&p("x(z).ok"), 4).outcome, Outcome::Violated);
    }

    #[test]
    fn reduces_to_reflexive() {
        let v = reduces_to(&Process::Nil, &Process::Nil, 0, EqBudget::default());
        assert_eq!(v.outcome, Outcome::Holds);
        assert!(v.trace().unwrap().is_empty());
    }

    #[test]
    fn reduces_to_violated_on_closed_graph() {
        let v = reduces_to(&p("x!y.0 | x(z).0"), &p("ok"), 8, EqBudget::default());
        assert_eq!(v.outcome, Outcome::Violated);
        assert!(v.witness.is_some());
    }

    #[test]
    fn divergence_examples() {
        let v = diverges_bounded(&p("!x!y.0 | !x(z).0"), 16);
        assert_eq!(v.outcome, Outcome::Holds);
        assert_eq!(diverges_bounded(&p("x!y.0 | x(z).0"), 16).outcome, Outcome::Violated);
        assert_eq!(diverges_bounded(&Process::Nil, 16).outcome, Outcome::Violated);
    }

    #[test]
    fn divergence_by_growth() {
        let v = diverges_bounded(&p("!x(z).(x!z.0 | x!z.0) | x!y.0"), 8);
        assert_eq!(v.outcome, Outcome::Holds);
    }

    #[test]
    fn explore_levels_are_bounded() {
        let g = explore(&p("!x(z).(x!z.0 | x!z.0) | x!y.0"), Limits::steps(3), |_, _| Visit::Continue, |_, _, _, _| Visit::Continue);
        assert!(!g.closed);
        assert!(g.level.iter().all(|l| *l <= 3));
    }

    #[test]
    fn inert_completion_runs_forwarders() {
        let t = p("new u. (u(v).v!y.0 | new w. (u!w.0 | w(z).z!z.0))");
        let c = inert_completion(&t, 8);
        assert_eq!(c.len(), 2);
        assert!(struct_eq_s(c.last(), &p("y!y.0")));
    }
}
