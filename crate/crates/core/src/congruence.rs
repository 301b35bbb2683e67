//! Structural congruence.
//!
//! `≡_S` is the congruence generated by the monoid laws for `|`, the
//! restriction laws, scope extrusion and α-conversion, but not by the
//! replication law `!P ≡ P | !P`. It is decided by bringing both sides into
//! a plain normal form and searching for an injective correspondence of
//! restricted names together with a bijection of parallel components.
//! Full `≡` is only semi-decided, by unfolding replications a bounded number
//! of times on each side before matching.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::reduction::{BudgetUsed, Outcome, Verdict, Witness};
use crate::syntax::{
    alpha_canonical, apply_renaming, bound_names, fresh_name, free_names, is_free_in,
    substitute, Name, NameSet, Process, Renaming,
};

/// `(ν restricted)(c1 | … | cn)` with every `ci` plain-atomic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    pub restricted: NameSet,
    /// Sorted multiset of outputs, inputs, replications and `ok`; a lone `0`
    /// when there is nothing else.
    pub components: Vec<Process>,
}

impl NormalForm {
    pub fn rebuild(&self) -> Process {
        Process::restrict_all(&self.restricted, Process::par_all(self.components.iter().cloned()))
    }
}

/// Search limits for the bounded congruence check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EqBudget {
    /// Replication unfoldings tried per side.
    pub max_unfolds: usize,
    /// Cap on component-pairing attempts made by the matcher.
    pub max_candidates: usize,
}

impl Default for EqBudget {
    fn default() -> Self {
        EqBudget {
            max_unfolds: 2,
            max_candidates: 10_000,
        }
    }
}

/// Top-level restricted names and atoms of a process, as produced by
/// hoisting every restriction that is not under a prefix or `!`.
#[derive(Clone, Debug, Default)]
pub(crate) struct Soup {
    pub restricted: Vec<Name>,
    pub atoms: Vec<Process>,
}

impl Soup {
    /// Adds the top level of `p`, renaming hoisted binders away from `avoid`
    /// (which is extended with every binder added).
    pub fn absorb(&mut self, p: &Process, avoid: &mut NameSet) {
        match p {
            Process::Nil => {}
            Process::Par(l, r) => {
                self.absorb(l, avoid);
                self.absorb(r, avoid);
            }
            Process::Restrict(z, body) => {
                if avoid.contains(z) {
                    let mut all = avoid.clone();
                    all.extend(free_names(body));
                    let w = fresh_name(&all);
                    let body = substitute(body, z, &w);
                    avoid.insert(w.clone());
                    self.restricted.push(w);
                    self.absorb(&body, avoid);
                } else {
                    avoid.insert(z.clone());
                    self.restricted.push(z.clone());
                    self.absorb(body, avoid);
                }
            }
            other => self.atoms.push(other.clone()),
        }
    }

    pub fn of(p: &Process) -> Soup {
        let mut soup = Soup::default();
        let mut avoid = free_names(p);
        soup.absorb(p, &mut avoid);
        soup
    }

    /// Drops restricted names that no atom uses.
    pub fn trim(&mut self) {
        let atoms = &self.atoms;
        self.restricted
            .retain(|r| atoms.iter().any(|a| is_free_in(r, a)));
    }

}

pub fn to_normal_form(p: &Process) -> NormalForm {
    let mut soup = Soup::of(p);
    soup.trim();
    let mut components = soup.atoms;
    components.sort();
    if components.is_empty() {
        components.push(Process::Nil);
    }
    NormalForm {
        restricted: soup.restricted.into_iter().collect(),
        components,
    }
}

/// Normalizes `p` and rebuilds it as a single term.
pub fn tidy(p: &Process) -> Process {
    to_normal_form(p).rebuild()
}

/// Canonical representative used as a state identity during search.
///
/// Equal keys imply `≡_S`; the converse holds in most but not all cases
/// (ties between components that differ only in bound names are broken
/// syntactically).
pub fn canonical_key(p: &Process) -> Process {
    alpha_canonical(&key_level(&alpha_canonical(p)))
}

const PLACEHOLDER: Name = Name::Fresh(u32::MAX);

fn key_level(p: &Process) -> Process {
    let mut soup = Soup::default();
    // Binders are already unique after α-canonicalization, nothing to avoid.
    let mut avoid = NameSet::new();
    soup.absorb(p, &mut avoid);
    soup.trim();
    let mut atoms: Vec<(Process, Process)> = soup
        .atoms
        .iter()
        .map(|a| {
            let a = key_atom(a);
            (sort_key(&a), a)
        })
        .collect();
    atoms.sort();
    let atoms: Vec<Process> = atoms.into_iter().map(|(_, a)| a).collect();
    let restricted: BTreeSet<&Name> = soup.restricted.iter().collect();
    let mut order: Vec<Name> = Vec::new();
    for a in &atoms {
        free_in_order(a, &mut Vec::new(), &mut |n| {
            if restricted.contains(n) && !order.contains(n) {
                order.push(n.clone());
            }
        });
    }
    Process::restrict_all(&order, Process::par_all(atoms))
}

fn key_atom(a: &Process) -> Process {
    match a {
        Process::Output(x, y, c) => Process::output(x.clone(), y.clone(), key_level(c)),
        Process::Input(x, z, c) => Process::input(x.clone(), z.clone(), key_level(c)),
        Process::Repl(b) => Process::repl(key_level(b)),
        other => other.clone(),
    }
}

fn sort_key(a: &Process) -> Process {
    let sigma: Renaming = free_names(a)
        .into_iter()
        .filter(Name::is_fresh)
        .map(|n| (n, PLACEHOLDER))
        .collect();
    alpha_canonical(&apply_renaming(a, &sigma))
}

fn free_in_order(p: &Process, bound: &mut Vec<Name>, f: &mut dyn FnMut(&Name)) {
    let mut visit = |n: &Name, bound: &Vec<Name>| {
        if !bound.contains(n) {
            f(n)
        }
    };
    match p {
        Process::Nil | Process::Success => {}
        Process::Output(x, y, c) => {
            visit(x, bound);
            visit(y, bound);
            free_in_order(c, bound, f);
        }
        Process::Input(x, z, c) => {
            visit(x, bound);
            bound.push(z.clone());
            free_in_order(c, bound, f);
            bound.pop();
        }
        Process::Restrict(z, c) => {
            bound.push(z.clone());
            free_in_order(c, bound, f);
            bound.pop();
        }
        Process::Par(l, r) => {
            free_in_order(l, bound, f);
            free_in_order(r, bound, f);
        }
        Process::Repl(b) => free_in_order(b, bound, f),
    }
}

fn hash_of<T: Hash>(t: &T) -> u64 {
    let mut h = DefaultHasher::new();
    t.hash(&mut h);
    h.finish()
}

/// Name-blind shape hash, invariant under `≡_S`.
pub fn shape_fingerprint(p: &Process) -> u64 {
    let mut atoms: Vec<u64> = Vec::new();
    collect_atom_shapes(p, &mut atoms);
    atoms.sort_unstable();
    hash_of(&atoms)
}

fn collect_atom_shapes(p: &Process, out: &mut Vec<u64>) {
    match p {
        Process::Nil => {}
        Process::Par(l, r) => {
            collect_atom_shapes(l, out);
            collect_atom_shapes(r, out);
        }
        Process::Restrict(_, b) => collect_atom_shapes(b, out),
        other => out.push(atom_shape(other)),
    }
}

fn atom_shape(a: &Process) -> u64 {
    match a {
        Process::Output(_, _, c) => hash_of(&('o', shape_fingerprint(c))),
        Process::Input(_, _, c) => hash_of(&('i', shape_fingerprint(c))),
        Process::Repl(b) => hash_of(&('!', shape_fingerprint(b))),
        Process::Success => hash_of(&'s'),
        _ => unreachable!("not an atom"),
    }
}

/// A summary that is invariant under full `≡`, including the replication
/// law: free names, plus the *set* of atom shapes reachable through `|`,
/// `ν` and `!`. Differing signatures prove two terms incongruent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub free: NameSet,
    pub shapes: BTreeSet<u64>,
}

pub fn congruence_signature(p: &Process) -> Signature {
    Signature {
        free: free_names(p),
        shapes: shape_set(p),
    }
}

fn shape_set(p: &Process) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    collect_shape_set(p, &mut out);
    out
}

fn collect_shape_set(p: &Process, out: &mut BTreeSet<u64>) {
    match p {
        Process::Nil => {}
        Process::Par(l, r) => {
            collect_shape_set(l, out);
            collect_shape_set(r, out);
        }
        Process::Restrict(_, b) => collect_shape_set(b, out),
        Process::Output(_, _, c) => {
            out.insert(hash_of(&('o', shape_set(c))));
        }
        Process::Input(_, _, c) => {
            out.insert(hash_of(&('i', shape_set(c))));
        }
        Process::Repl(b) => {
            let inner = shape_set(b);
            out.insert(hash_of(&('!', &inner)));
            out.extend(inner);
        }
        Process::Success => {
            out.insert(hash_of(&'s'));
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BinderKind {
    Input,
    Restricted(usize),
}

/// Binder table of an α-canonical term: kind and normal-form nesting depth.
fn binder_table(p: &Process) -> BTreeMap<Name, BinderKind> {
    let mut out = BTreeMap::new();
    fill_binders(p, 0, &mut out);
    out
}

fn fill_binders(p: &Process, depth: usize, out: &mut BTreeMap<Name, BinderKind>) {
    match p {
        Process::Nil | Process::Success => {}
        Process::Output(_, _, c) => fill_binders(c, depth + 1, out),
        Process::Input(_, z, c) => {
            out.insert(z.clone(), BinderKind::Input);
            fill_binders(c, depth + 1, out);
        }
        Process::Par(l, r) => {
            fill_binders(l, depth, out);
            fill_binders(r, depth, out);
        }
        Process::Restrict(z, b) => {
            out.insert(z.clone(), BinderKind::Restricted(depth));
            fill_binders(b, depth, out);
        }
        Process::Repl(b) => fill_binders(b, depth + 1, out),
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Bijection {
    fwd: BTreeMap<Name, Name>,
    rev: BTreeMap<Name, Name>,
}

struct Matcher {
    left: BTreeMap<Name, BinderKind>,
    right: BTreeMap<Name, BinderKind>,
    /// Component pairs tried so far.
    steps: usize,
    limit: Option<usize>,
    /// Partial-embedding mode: the right side may have extra top-level
    /// components and restricted names.
    allow_extra: bool,
}

impl Matcher {
    fn new(p: &Process, q: &Process, limit: Option<usize>) -> Self {
        Matcher {
            left: binder_table(p),
            right: binder_table(q),
            steps: 0,
            limit,
            allow_extra: false,
        }
    }

    fn exhausted(&self) -> bool {
        matches!(self.limit, Some(l) if self.steps > l)
    }

    fn name(&self, a: &Name, b: &Name, st: &Bijection) -> Option<Bijection> {
        match self.left.get(a) {
            None => {
                (a == b && !self.right.contains_key(b)).then(|| st.clone())
            }
            Some(kind) => {
                if let Some(x) = st.fwd.get(a) {
                    return (x == b).then(|| st.clone());
                }
                match (kind, self.right.get(b)) {
                    (BinderKind::Restricted(d1), Some(BinderKind::Restricted(d2)))
                        if d1 == d2 && !st.rev.contains_key(b) =>
                    {
                        let mut st = st.clone();
                        st.fwd.insert(a.clone(), b.clone());
                        st.rev.insert(b.clone(), a.clone());
                        Some(st)
                    }
                    _ => None,
                }
            }
        }
    }

    fn level(&mut self, p: &Process, q: &Process, st: Bijection, top: bool) -> Vec<Bijection> {
        let split = |t: &Process| {
            let mut soup = Soup::default();
            let mut avoid = NameSet::new();
            soup.absorb(t, &mut avoid);
            soup.trim();
            soup
        };
        let sp = split(p);
        let sq = split(q);
        let extra = top && self.allow_extra;
        let size_ok = if extra {
            sp.atoms.len() <= sq.atoms.len() && sp.restricted.len() <= sq.restricted.len()
        } else {
            sp.atoms.len() == sq.atoms.len() && sp.restricted.len() == sq.restricted.len()
        };
        if !size_ok {
            return Vec::new();
        }
        let fp: Vec<u64> = sq.atoms.iter().map(atom_shape).collect();
        let mut states: BTreeSet<(Bijection, Vec<bool>)> = BTreeSet::new();
        states.insert((st, vec![false; sq.atoms.len()]));
        for a in &sp.atoms {
            let fa = atom_shape(a);
            let mut next = BTreeSet::new();
            for (s, used) in &states {
                for (j, b) in sq.atoms.iter().enumerate() {
                    if used[j] || fp[j] != fa {
                        continue;
                    }
                    self.steps += 1;
                    if self.exhausted() {
                        return Vec::new();
                    }
                    for s2 in self.atom(a, b, s) {
                        let mut u = used.clone();
                        u[j] = true;
                        next.insert((s2, u));
                    }
                }
            }
            if next.is_empty() {
                return Vec::new();
            }
            states = next;
        }
        states.into_iter().map(|(s, _)| s).collect()
    }

    fn atom(&mut self, a: &Process, b: &Process, st: &Bijection) -> Vec<Bijection> {
        match (a, b) {
            (Process::Success, Process::Success) => vec![st.clone()],
            (Process::Output(x1, y1, c1), Process::Output(x2, y2, c2)) => {
                let Some(st) = self.name(x1, x2, st) else {
                    return Vec::new();
                };
                let Some(st) = self.name(y1, y2, &st) else {
                    return Vec::new();
                };
                self.level(c1, c2, st, false)
            }
            (Process::Input(x1, z1, c1), Process::Input(x2, z2, c2)) => {
                let Some(mut st) = self.name(x1, x2, st) else {
                    return Vec::new();
                };
                st.fwd.insert(z1.clone(), z2.clone());
                st.rev.insert(z2.clone(), z1.clone());
                self.level(c1, c2, st, false)
            }
            (Process::Repl(b1), Process::Repl(b2)) => self.level(b1, b2, st.clone(), false),
            _ => Vec::new(),
        }
    }
}

/// Outcome of a capped `≡_S` test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Match {
    Yes,
    No,
    GaveUp,
}

pub(crate) fn struct_eq_s_capped(p: &Process, q: &Process, limit: Option<usize>) -> (Match, usize) {
    if p == q {
        return (Match::Yes, 0);
    }
    let p = alpha_canonical(p);
    let q = alpha_canonical(q);
    if p == q {
        return (Match::Yes, 0);
    }
    if free_names(&p) != free_names(&q) || shape_fingerprint(&p) != shape_fingerprint(&q) {
        return (Match::No, 0);
    }
    let mut m = Matcher::new(&p, &q, limit);
    let empty = Bijection {
        fwd: BTreeMap::new(),
        rev: BTreeMap::new(),
    };
    let found = !m.level(&p, &q, empty, true).is_empty();
    let outcome = if found {
        Match::Yes
    } else if m.exhausted() {
        Match::GaveUp
    } else {
        Match::No
    };
    (outcome, m.steps)
}

/// Decides `p ≡_S q`.
pub fn struct_eq_s(p: &Process, q: &Process) -> bool {
    struct_eq_s_capped(p, q, None).0 == Match::Yes
}

/// True if `q ≡_S (ν ṽ)(p | r)` for some `ṽ` and `r`, with `p` matched
/// component-wise and its restricted names injectively into `q`'s.
pub fn embeds(p: &Process, q: &Process) -> bool {
    let p = alpha_canonical(p);
    let q = alpha_canonical(q);
    if !free_names(&p).is_subset(&free_names(&q)) {
        return false;
    }
    let mut m = Matcher::new(&p, &q, None);
    m.allow_extra = true;
    let empty = Bijection {
        fwd: BTreeMap::new(),
        rev: BTreeMap::new(),
    };
    !m.level(&p, &q, empty, true).is_empty()
}

/// All terms reachable from `p` by at most `depth` left-to-right
/// applications of `!P ≡ P | !P`, at any position. Includes `p`.
pub fn unfold_replications(p: &Process, depth: usize) -> BTreeSet<Process> {
    let mut all = BTreeSet::new();
    all.insert(p.clone());
    let mut frontier = vec![p.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for t in &frontier {
            for u in unfold_once(t) {
                if all.insert(u.clone()) {
                    next.push(u);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    all
}

/// Every term obtained by one application of the replication law.
pub fn unfold_once(p: &Process) -> Vec<Process> {
    match p {
        Process::Nil | Process::Success => Vec::new(),
        Process::Output(x, y, c) => unfold_once(c)
            .into_iter()
            .map(|c| Process::output(x.clone(), y.clone(), c))
            .collect(),
        Process::Input(x, z, c) => unfold_once(c)
            .into_iter()
            .map(|c| Process::input(x.clone(), z.clone(), c))
            .collect(),
        Process::Restrict(z, b) => unfold_once(b)
            .into_iter()
            .map(|b| Process::restrict(z.clone(), b))
            .collect(),
        Process::Par(l, r) => {
            let mut out: Vec<Process> = unfold_once(l)
                .into_iter()
                .map(|l| Process::par(l, (**r).clone()))
                .collect();
            out.extend(
                unfold_once(r)
                    .into_iter()
                    .map(|r| Process::par((**l).clone(), r)),
            );
            out
        }
        Process::Repl(b) => {
            let mut out = vec![Process::par((**b).clone(), p.clone())];
            out.extend(unfold_once(b).into_iter().map(Process::repl));
            out
        }
    }
}

/// Semi-decides `p ≡ q`.
///
/// `Holds` when some bounded unfolding of each side is `≡_S`-equal.
/// `Violated` when the terms are provably incongruent: replication-free terms
/// (where `≡` and `≡_S` coincide) that do not match, or terms whose
/// replication-invariant signatures differ. `Inconclusive` otherwise.
/// Most top-level atoms one unfolding can add: the widest replicated body.
fn widest_body(p: &Process) -> usize {
    match p {
        Process::Nil | Process::Success => 0,
        Process::Output(_, _, c) | Process::Input(_, _, c) | Process::Restrict(_, c) => widest_body(c),
        Process::Par(l, r) => widest_body(l).max(widest_body(r)),
        Process::Repl(b) => Soup::of(b).atoms.len().max(widest_body(b)),
    }
}

pub fn struct_eq_bounded(p: &Process, q: &Process, budget: EqBudget) -> Verdict {
    let mut used = BudgetUsed::default();
    if congruence_signature(p) != congruence_signature(q) {
        return Verdict::violated(Witness::Pair(p.clone(), q.clone()), used);
    }
    let (m, steps) = struct_eq_s_capped(p, q, Some(budget.max_candidates));
    used.candidates += steps;
    match m {
        Match::Yes => return Verdict::holds(used),
        Match::No if !p.has_replication() && !q.has_replication() => {
            return Verdict::violated(Witness::Pair(p.clone(), q.clone()), used);
        }
        _ => {}
    }
    let d = budget.max_unfolds;
    let (np, nq) = (Soup::of(p).atoms.len(), Soup::of(q).atoms.len());
    if np > nq + d * widest_body(q) || nq > np + d * widest_body(p) {
        return Verdict::inconclusive(used);
    }
    let left = unfold_replications(p, budget.max_unfolds);
    let right = unfold_replications(q, budget.max_unfolds);
    used.unfolds = left.len() + right.len();
    let right_keys: HashSet<Process> = right.iter().map(canonical_key).collect();
    for l in &left {
        if right_keys.contains(&canonical_key(l)) {
            return Verdict::holds(used);
        }
    }
    let mut gave_up = m == Match::GaveUp;
    for l in &left {
        let lc = l.counts();
        for r in &right {
            let rc = r.counts();
            if (lc.output, lc.input, lc.repl, lc.success) != (rc.output, rc.input, rc.repl, rc.success) {
                continue;
            }
            let remaining = budget.max_candidates.saturating_sub(used.candidates);
            if remaining == 0 {
                gave_up = true;
                break;
            }
            let (m, steps) = struct_eq_s_capped(l, r, Some(remaining));
            used.candidates += steps;
            match m {
                Match::Yes => return Verdict::holds(used),
                Match::GaveUp => gave_up = true,
                Match::No => {}
            }
        }
    }
    used.exhausted = gave_up;
    Verdict {
        outcome: Outcome::Inconclusive,
        witness: None,
        budget_used: used,
    }
}

/// Shorthand for `struct_eq_bounded(..).outcome == Holds`.
pub fn congruent_within(p: &Process, q: &Process, budget: EqBudget) -> bool {
    struct_eq_bounded(p, q, budget).outcome == Outcome::Holds
}

/// Bound names of `p` that also occur free in it; empty for α-canonical terms.
pub fn shadowed_names(p: &Process) -> NameSet {
    bound_names(p).intersection(&free_names(p)).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse;

    fn p(s: &str) -> Process {
        parse(s).unwrap()
    }

    fn names(ns: &[&str]) -> NameSet {
        ns.iter().map(|s| Name::user(s)).collect()
    }

    #[test]
    fn normal_form_examples() {
        let nf = to_normal_form(&p("new z. (x!y.0 | new w. 0)"));
        assert!(nf.restricted.is_empty());
        assert_eq!(nf.components, vec![p("x!y.0")]);

        let nf = to_normal_form(&p("x!y.0 | x(z).0"));
        assert!(nf.restricted.is_empty());
        assert_eq!(nf.components.len(), 2);

        let nf = to_normal_form(&p("new x. (x!y.0 | x(z).0)"));
        assert_eq!(nf.restricted, names(&["x"]));
        assert_eq!(nf.components.len(), 2);
    }

    #[test]
    fn normal_form_of_nil_keeps_one_nil() {
        assert_eq!(to_normal_form(&p("new z. 0")).components, vec![Process::Nil]);
        assert_eq!(to_normal_form(&p("0 | 0")).components, vec![Process::Nil]);
    }

    #[test]
    fn normal_form_renames_clashing_binders() {
        let nf = to_normal_form(&p("(new a. a!b.0) | (new a. a(z).0) | a!a.0"));
        assert_eq!(nf.restricted.len(), 2);
        assert!(!nf.restricted.contains(&Name::user("a")));
        assert!(struct_eq_s(&nf.rebuild(), &p("(new a. a!b.0) | (new a. a(z).0) | a!a.0")));
    }

    #[test]
    fn struct_eq_s_examples() {
        assert!(struct_eq_s(&p("x!y.0 | 0"), &p("x!y.0")));
        assert!(struct_eq_s(&p("new z. new u. z!u.0"), &p("new u. new z. z!u.0")));
        assert!(!struct_eq_s(&p("!x!y.0"), &p("x!y.0 | !x!y.0")));
    }

    #[test]
    fn struct_eq_s_respects_scope() {
        assert!(!struct_eq_s(&p("new a. x!y.a!a.0"), &p("x!y.new a. a!a.0")));
        assert!(!struct_eq_s(&p("new a. (a!b.0 | a!b.0)"), &p("new a. a!b.0 | new a. a!b.0")));
        assert!(struct_eq_s(&p("new a. a!b.0 | new c. c!b.0"), &p("new c. (c!b.0 | new a. a!b.0)")));
        assert!(!struct_eq_s(&p("new a. a!x.0"), &p("x!x.0")));
        assert!(struct_eq_s(&p("x(z).(z!y.0 | 0)"), &p("x(w).w!y.0")));
        assert!(!struct_eq_s(&p("x(z).z!y.0"), &p("x(w).y!w.0")));
    }

    #[test]
    fn struct_eq_s_backtracks_over_restricted_names() {
        let a = p("new a. new b. (a!b.0 | b!a.0 | a(z).0)");
        let b = p("new c. new d. (d!c.0 | d(z).0 | c!d.0)");
        assert!(struct_eq_s(&a, &b));
        let c = p("new c. new d. (d!c.0 | c(z).0 | c!d.0)");
        assert!(struct_eq_s(&a, &c));
        let d = p("new c. new d. (d!c.0 | c(z).0 | d!c.0)");
        assert!(!struct_eq_s(&a, &d));
    }

    /// Independent oracle: apply the replication law at every position by
    /// walking explicit paths.
    fn unfold_oracle(p: &Process, depth: usize) -> BTreeSet<Process> {
        fn positions(p: &Process, path: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
            match p {
                Process::Repl(b) => {
                    out.push(path.clone());
                    path.push(0);
                    positions(b, path, out);
                    path.pop();
                }
                Process::Output(_, _, c) | Process::Input(_, _, c) | Process::Restrict(_, c) => {
                    path.push(0);
                    positions(c, path, out);
                    path.pop();
                }
                Process::Par(l, r) => {
                    path.push(0);
                    positions(l, path, out);
                    path.pop();
                    path.push(1);
                    positions(r, path, out);
                    path.pop();
                }
                _ => {}
            }
        }
        fn rewrite(p: &Process, path: &[u8]) -> Process {
            match (p, path.split_first()) {
                (Process::Repl(b), None) => Process::par((**b).clone(), p.clone()),
                (Process::Repl(b), Some((_, rest))) => Process::repl(rewrite(b, rest)),
                (Process::Output(x, y, c), Some((_, rest))) => {
                    Process::output(x.clone(), y.clone(), rewrite(c, rest))
                }
                (Process::Input(x, z, c), Some((_, rest))) => {
                    Process::input(x.clone(), z.clone(), rewrite(c, rest))
                }
                (Process::Restrict(z, c), Some((_, rest))) => {
                    Process::restrict(z.clone(), rewrite(c, rest))
                }
                (Process::Par(l, r), Some((0, rest))) => Process::par(rewrite(l, rest), (**r).clone()),
                (Process::Par(l, r), Some((_, rest))) => Process::par((**l).clone(), rewrite(r, rest)),
                _ => unreachable!(),
            }
        }
        let mut all: BTreeSet<Process> = [p.clone()].into_iter().collect();
        let mut layer = all.clone();
        for _ in 0..depth {
            let mut next = BTreeSet::new();
            for t in &layer {
                let mut ps = Vec::new();
                positions(t, &mut Vec::new(), &mut ps);
                for path in ps {
                    next.insert(rewrite(t, &path));
                }
            }
            all.extend(next.iter().cloned());
            layer = next;
        }
        all
    }

    #[test]
    fn unfold_examples() {
        assert_eq!(unfold_replications(&Process::Nil, 3).len(), 1);
        let a = p("x!y.0");
        let bang = Process::repl(a.clone());
        let one = unfold_replications(&bang, 1);
        let want: BTreeSet<Process> = [bang.clone(), Process::par(a.clone(), bang.clone())].into_iter().collect();
        assert_eq!(one, want);
        let two = unfold_replications(&bang, 2);
        assert_eq!(two, unfold_oracle(&bang, 2));
        assert_eq!(two.len(), 3);
        assert!(two.contains(&Process::par(a.clone(), Process::par(a, bang))));
    }

    #[test]
    fn unfold_matches_oracle_on_nested_terms() {
        for src in ["!(!x!y.0 | x(z).!0)", "x(z).!z!z.0 | !!ok", "new a. !(a!a.0 | !0)"] {
            let t = p(src);
            for d in 0..3 {
                assert_eq!(unfold_replications(&t, d), unfold_oracle(&t, d), "{src} @ {d}");
            }
        }
    }

    #[test]
    fn bounded_examples() {
        let b = EqBudget::default();
        assert_eq!(struct_eq_bounded(&p("!x!y.0"), &p("x!y.0 | !x!y.0"), b).outcome, Outcome::Holds);
        let v = struct_eq_bounded(&p("x!y.0"), &p("x(z).0"), b);
        assert_eq!(v.outcome, Outcome::Violated);
        assert!(v.witness.is_some());
        assert_eq!(struct_eq_bounded(&p("!(x!y.0)"), &p("!(x!y.0) | x!y.0"), b).outcome, Outcome::Holds);
    }

    #[test]
    fn bounded_is_total_on_replication_free_terms() {
        let b = EqBudget::default();
        for (l, r) in [("x!y.0 | 0", "x!y.0"), ("new a. a!a.0", "new b. b!a.0"), ("ok", "ok | ok")] {
            assert_ne!(struct_eq_bounded(&p(l), &p(r), b).outcome, Outcome::Inconclusive);
        }
    }

    #[test]
    fn signature_is_invariant_under_unfolding() {
        let t = p("x(z).!(z!z.0 | !ok) | !new a. a!x.0");
        let sig = congruence_signature(&t);
        for u in unfold_replications(&t, 3) {
            assert_eq!(congruence_signature(&u), sig);
        }
    }

    #[test]
    fn canonical_key_merges_permuted_states() {
        let a = p("new a. (a!x.0 | x(z).0) | new b. b(w).0");
        let b = p("new c. c(w).0 | x(q).0 | new d. d!x.0");
        assert_eq!(canonical_key(&a), canonical_key(&b));
        assert!(struct_eq_s(&canonical_key(&a), &a));
    }

    #[test]
    fn embeds_finds_sub_multisets() {
        assert!(embeds(&p("x!y.0"), &p("x!y.0 | x!y.0")));
        assert!(embeds(&p("new a. a!x.0"), &p("new b. (b!x.0 | b(z).0)")));
        assert!(!embeds(&p("x!y.0 | x!y.0"), &p("x!y.0")));
    }
}
