//! The five validity criteria, each checked on a single source term.

use std::collections::{HashMap, HashSet};

use crate::congruence::{canonical_key, struct_eq_bounded};
use crate::encodings::{compositional_at, Encoder, RenamingPolicy};
use crate::reduction::{
    diverges_within, explore, explore_by, inert_completion, inert_reducts, may_succeed_within, reaches_any,
    reduct_candidates, BudgetUsed, Limits, Outcome, Step, Trace, Verdict, Visit, Witness,
};
use crate::syntax::{alpha_eq, apply_renaming, free_names, Name, Process, Renaming};

use super::Budgets;

/// Checks that every node of `s` is translated by its operator's context,
/// both with argument-dependent auxiliary names (literally) and with fixed
/// ones (up to α).
pub fn check_compositionality(s: &Process, enc: &Encoder) -> Verdict {
    let mut stack = vec![s];
    while let Some(t) = stack.pop() {
        let (indexed, fixed) = compositional_at(enc, t);
        if !(indexed && fixed) {
            return Verdict::violated(Witness::Pair(t.clone(), enc.encode(t)), BudgetUsed::default());
        }
        match t {
            Process::Output(_, _, c) | Process::Input(_, _, c) | Process::Restrict(_, c) | Process::Repl(c) => {
                stack.push(c)
            }
            Process::Par(l, r) => {
                stack.push(l);
                stack.push(r);
            }
            Process::Nil | Process::Success => {}
        }
    }
    Verdict::holds(BudgetUsed::default())
}

/// `⟦Sσ⟧ = ⟦S⟧σ'` up to α, with `σ'` induced by the renaming policy.
pub fn check_name_invariance(s: &Process, sigma: &Renaming, enc: &Encoder) -> Verdict {
    let lhs = enc.encode(&apply_renaming(s, sigma));
    let rhs = apply_renaming(&enc.encode(s), &RenamingPolicy::Identity.lift(sigma));
    if alpha_eq(&lhs, &rhs) {
        Verdict::holds(BudgetUsed::default())
    } else {
        Verdict::violated(Witness::Pair(lhs, rhs), BudgetUsed::default())
    }
}

/// Renamings tried per term: the identity, a swap, a collapse of every free
/// name onto one, and an injective move to names not in the term.
pub fn renaming_family(s: &Process) -> Vec<Renaming> {
    let free: Vec<Name> = free_names(s).into_iter().collect();
    let mut out = vec![Renaming::new()];
    if free.len() >= 2 {
        out.push([(free[0].clone(), free[1].clone()), (free[1].clone(), free[0].clone())].into_iter().collect());
    }
    if let Some(first) = free.first() {
        out.push(free.iter().map(|n| (n.clone(), first.clone())).collect());
        out.push(
            free.iter()
                .map(|n| (n.clone(), Name::user(&format!("{n}'"))))
                .collect(),
        );
    }
    out
}

/// Judged up to α. A renaming whose two sides agree only up to α, not
/// syntactically, is attached to the `Holds` verdict as a property witness.
pub fn check_name_invariance_family(s: &Process, enc: &Encoder) -> Verdict {
    let mut inexact = None;
    for sigma in renaming_family(s) {
        let v = check_name_invariance(s, &sigma, enc);
        if v.outcome != Outcome::Holds {
            return v;
        }
        if inexact.is_none() {
            let lhs = enc.encode(&apply_renaming(s, &sigma));
            if lhs != apply_renaming(&enc.encode(s), &RenamingPolicy::Identity.lift(&sigma)) {
                inexact = Some(Witness::Property {
                    property: "exact-name-invariance".into(),
                    term: s.clone(),
                    image: lhs,
                });
            }
        }
    }
    match inexact {
        Some(w) => Verdict::holds_with(w, BudgetUsed::default()),
        None => Verdict::holds(BudgetUsed::default()),
    }
}

/// For a target term and a goal, searches `k`-step traces whose first step
/// is any reduction and whose remaining steps are inert, ending congruent
/// to the goal.
pub fn structured_simulation(target: &Process, goal: &Process, k: usize, budgets: &Budgets) -> Verdict {
    let mut used = BudgetUsed::default();
    let mut definite = true;
    let goal_key = canonical_key(goal);
    let start = Trace::empty(target.clone());
    let mut layer: Vec<Trace> = reduct_candidates(target, 1)
        .into_iter()
        .map(|(redex, result)| {
            let mut t = start.clone();
            t.steps.push(Step { redex, result });
            t
        })
        .collect();
    for depth in 1..=k {
        used.steps = depth;
        used.states += layer.len();
        if depth == k {
            for t in &layer {
                let last = t.last();
                if canonical_key(last) == goal_key {
                    return Verdict::holds_with(Witness::Trace(t.clone()), used);
                }
                let v = struct_eq_bounded(last, goal, budgets.eq);
                used.candidates += v.budget_used.candidates;
                match v.outcome {
                    Outcome::Holds => return Verdict::holds_with(Witness::Trace(t.clone()), used),
                    Outcome::Inconclusive => definite = false,
                    Outcome::Violated => {}
                }
            }
            break;
        }
        let mut next = Vec::new();
        for t in &layer {
            for (redex, result) in inert_reducts(t.last()).unwrap_or_default() {
                let mut t2 = t.clone();
                t2.steps.push(Step { redex, result });
                next.push(t2);
            }
        }
        if next.len() > budgets.max_states {
            return Verdict::inconclusive(used);
        }
        layer = next;
    }
    if definite {
        Verdict::violated(Witness::Pair(target.clone(), goal.clone()), used)
    } else {
        Verdict::inconclusive(used)
    }
}

/// Every source step `S ⟼ S'` is simulated by exactly `k` target steps
/// (3 for Boudol, 2 for Honda-Tokoro), all but the first inert.
pub fn check_op_completeness(s: &Process, enc: &Encoder, budgets: &Budgets) -> Verdict {
    let target = enc.encode(s);
    let k = enc.scheme.step_factor();
    let mut used = BudgetUsed::default();
    let mut inconclusive = false;
    let mut first: Option<Witness> = None;
    let mut done: HashMap<Process, ()> = HashMap::new();
    for (redex, s2) in reduct_candidates(s, 1) {
        if done.insert(canonical_key(&s2), ()).is_some() {
            continue;
        }
        let v = structured_simulation(&target, &enc.encode(&s2), k, budgets);
        used.absorb(&v.budget_used);
        match v.outcome {
            Outcome::Holds => {
                if first.is_none() {
                    first = v.witness;
                }
            }
            Outcome::Violated => {
                let source_step = Trace {
                    start: s.clone(),
                    steps: vec![Step { redex, result: s2 }],
                };
                return Verdict::violated(Witness::Trace(source_step), used);
            }
            Outcome::Inconclusive => inconclusive = true,
        }
    }
    if inconclusive {
        return Verdict::inconclusive(used);
    }
    match first {
        Some(w) => Verdict::holds_with(w, used),
        None => Verdict::holds(used),
    }
}

/// Every target state reachable within the step budget can still reach the
/// translation of some source state reachable from `s`.
///
/// Target states are explored modulo inert completion: each step is an
/// ordinary reduction followed by as many inert steps as apply. Inert steps
/// commute with every other step, so each skipped intermediate state reaches
/// the completion of its predecessor's step.
pub fn check_op_soundness(s: &Process, enc: &Encoder, budgets: &Budgets) -> Verdict {
    let limits = budgets.limits();
    let source = explore(s, limits, |_, _| Visit::Continue, |_, _, _, _| Visit::Continue);
    let encoded: Vec<Process> = source.states.iter().map(|t| enc.encode(t)).collect();
    let keys: HashSet<Process> = encoded.iter().map(canonical_key).collect();
    let max_inert = 4 * budgets.step_budget + 8;
    let mut completed: HashMap<Process, Process> = HashMap::new();
    let mut complete = |p: &Process| -> Process {
        let key = canonical_key(p);
        completed
            .entry(key)
            .or_insert_with(|| inert_completion(p, max_inert).last().clone())
            .clone()
    };
    let root = complete(&enc.encode(s));
    let target = explore_by(
        &root,
        limits,
        |p| {
            let mut seen = HashSet::new();
            reduct_candidates(p, 1)
                .into_iter()
                .filter(|(_, q)| seen.insert(canonical_key(q)))
                .map(|(redex, q)| (redex, complete(&q)))
                .collect()
        },
        |_, _| Visit::Continue,
        |_, _, _, _| Visit::Continue,
    );

    let mut used = source.budget();
    used.absorb(&target.budget());
    let mut good: Vec<bool> = target
        .states
        .iter()
        .map(|t| {
            keys.contains(&canonical_key(t))
                || encoded.iter().any(|e| {
                    let v = struct_eq_bounded(t, e, budgets.eq);
                    used.candidates += v.budget_used.candidates;
                    v.is_holds()
                })
        })
        .collect();
    let mut preds = vec![Vec::new(); target.len()];
    for i in 0..target.len() {
        for &j in target.successors(i) {
            preds[j].push(i);
        }
    }
    let mut stack: Vec<usize> = (0..target.len()).filter(|&i| good[i]).collect();
    while let Some(j) = stack.pop() {
        for &i in &preds[j] {
            if !std::mem::replace(&mut good[i], true) {
                stack.push(i);
            }
        }
    }
    let fallback = Limits {
        max_steps: budgets.step_budget,
        max_states: (budgets.max_states / 16).max(1),
        ..limits
    };
    for (j, t) in target.states.iter().enumerate().filter(|(j, _)| !good[*j]) {
        let (v, _) = reaches_any(t, &encoded, fallback, budgets.eq);
        used.absorb(&v.budget_used);
        match v.outcome {
            Outcome::Holds => {}
            Outcome::Violated if source.closed && !source.truncated_by_states => {
                return Verdict::violated(Witness::Trace(target.trace_to(j)), used);
            }
            _ => return Verdict::inconclusive(used),
        }
    }
    Verdict::holds(used)
}

/// If the translation diverges then so does the source. Replication-free
/// sources must terminate on both sides.
pub fn check_divergence_reflection(s: &Process, enc: &Encoder, budgets: &Budgets) -> Verdict {
    let limits = budgets.limits();
    let target = diverges_within(&enc.encode(s), limits);
    let mut used = target.budget_used;
    match target.outcome {
        Outcome::Holds => {
            let source = diverges_within(s, limits);
            used.absorb(&source.budget_used);
            match source.outcome {
                Outcome::Holds => Verdict { budget_used: used, ..source },
                Outcome::Violated => Verdict::violated(target.witness.expect("divergence witness"), used),
                Outcome::Inconclusive => Verdict::inconclusive(used),
            }
        }
        Outcome::Violated if s.has_replication() => Verdict::holds(used),
        Outcome::Violated => {
            let source = diverges_within(s, limits);
            used.absorb(&source.budget_used);
            match source.outcome {
                Outcome::Violated => Verdict::holds(used),
                Outcome::Holds => Verdict::violated(source.witness.expect("divergence witness"), used),
                Outcome::Inconclusive => Verdict::inconclusive(used),
            }
        }
        Outcome::Inconclusive => Verdict::inconclusive(used),
    }
}

/// `S⇓` iff `⟦S⟧⇓`, the target searched `k` times deeper.
pub fn check_success_sensitiveness(s: &Process, enc: &Encoder, budgets: &Budgets) -> Verdict {
    let k = enc.scheme.step_factor();
    let src = may_succeed_within(s, budgets.limits());
    let target = enc.encode(s);
    let tgt = may_succeed_within(
        &target,
        Limits {
            max_steps: k * budgets.step_budget,
            ..budgets.limits()
        },
    );
    let mut used = src.budget_used;
    used.absorb(&tgt.budget_used);
    match (src.outcome, tgt.outcome) {
        (Outcome::Inconclusive, _) | (_, Outcome::Inconclusive) => Verdict::inconclusive(used),
        (a, b) if a == b => match tgt.witness {
            Some(w) => Verdict::holds_with(w, used),
            None => Verdict::holds(used),
        },
        (Outcome::Holds, _) => Verdict::violated(src.witness.expect("success trace"), used),
        _ => Verdict::violated(tgt.witness.expect("success trace"), used),
    }
}
