//! Auxiliary properties of the translations and of reduction, checked per
//! term.

use crate::congruence::{canonical_key, struct_eq_bounded, to_normal_form, EqBudget};
use crate::encodings::Encoder;
use crate::reduction::{
    has_success, inert_reducts, reduct_candidates, BudgetUsed, Outcome, Verdict, Witness,
};
use crate::syntax::{alpha_eq, apply_renaming, free_names, substitute, Name, Process};

use super::criteria::renaming_family;

fn fail(property: &str, term: &Process, image: Process) -> Verdict {
    Verdict::violated(
        Witness::Property {
            property: property.to_string(),
            term: term.clone(),
            image,
        },
        BudgetUsed::default(),
    )
}

/// `P ≡ Q | ok` for some `Q`, decided on the normal form: some component is
/// `ok`, or a replicated component whose body has this property.
pub fn success_by_congruence(p: &Process) -> bool {
    to_normal_form(p).components.iter().any(|c| match c {
        Process::Success => true,
        Process::Repl(b) => success_by_congruence(b),
        _ => false,
    })
}

/// Free-name preservation, substitution and renaming commutation, barb
/// agreement, membership in the asynchronous fragment, and barb
/// preservation along the target's first steps.
pub fn check_lemmas(s: &Process, enc: &Encoder) -> Verdict {
    let e = enc.encode(s);
    if free_names(&e) != free_names(s) {
        return fail("free-names", s, e);
    }
    if !e.is_asynchronous() {
        return fail("asynchronous", s, e);
    }
    let free: Vec<Name> = free_names(s).into_iter().collect();
    let mut images = free.clone();
    images.push(Name::user("n'"));
    for z in &free {
        for y in &images {
            let lhs = enc.encode(&substitute(s, z, y));
            let rhs = substitute(&e, z, y);
            if !alpha_eq(&lhs, &rhs) {
                return fail("substitution", s, lhs);
            }
        }
    }
    for sigma in renaming_family(s) {
        let lhs = enc.encode(&apply_renaming(s, &sigma));
        if !alpha_eq(&lhs, &apply_renaming(&e, &sigma)) {
            return fail("renaming", s, lhs);
        }
    }
    if has_success(&e) != has_success(s) {
        return fail("barbs", s, e);
    }
    if has_success(s) != success_by_congruence(s) {
        return fail("success-definitions", s, s.clone());
    }
    let v = check_barb_preservation(&e);
    if v.outcome != Outcome::Holds {
        return v;
    }
    Verdict::holds(BudgetUsed::default())
}

/// `T↓` and `T ⟼ T'` imply `T'↓`, for every one-step reduct.
pub fn check_barb_preservation(t: &Process) -> Verdict {
    if !has_success(t) {
        return Verdict::holds(BudgetUsed::default());
    }
    for (_, t2) in reduct_candidates(t, 1) {
        if !has_success(&t2) {
            return fail("barb-preservation", t, t2);
        }
    }
    Verdict::holds(BudgetUsed::default())
}

/// The diamond for inert steps: if `P ⇛ Q` and `P ⟼ P'` with `P'` not
/// congruent to `Q`, then `Q ⟼ Q'` and `P' ⇛ Q'` for some `Q'`.
pub fn check_inert_confluence(p: &Process, budget: EqBudget) -> Verdict {
    let mut used = BudgetUsed::default();
    let inert = match inert_reducts(p) {
        Ok(v) => v,
        Err(_) => return Verdict::holds(used),
    };
    let all = reduct_candidates(p, 1);
    let mut inconclusive = false;
    for (_, q) in &inert {
        let q_key = canonical_key(q);
        let q_next = reduct_candidates(q, 1);
        let q_keys: Vec<Process> = q_next.iter().map(|(_, t)| canonical_key(t)).collect();
        'alternatives: for (_, p2) in &all {
            if canonical_key(p2) == q_key {
                continue;
            }
            let same = struct_eq_bounded(p2, q, budget);
            used.candidates += same.budget_used.candidates;
            if same.outcome == Outcome::Holds {
                continue;
            }
            let mut definite = same.outcome == Outcome::Violated;
            for (_, q2) in inert_reducts(p2).unwrap_or_default() {
                let k = canonical_key(&q2);
                if q_keys.contains(&k) {
                    continue 'alternatives;
                }
                for (_, t) in &q_next {
                    let v = struct_eq_bounded(&q2, t, budget);
                    used.candidates += v.budget_used.candidates;
                    match v.outcome {
                        Outcome::Holds => continue 'alternatives,
                        Outcome::Inconclusive => definite = false,
                        Outcome::Violated => {}
                    }
                }
            }
            if definite {
                return Verdict::violated(Witness::Pair(q.clone(), p2.clone()), used);
            }
            inconclusive = true;
        }
    }
    if inconclusive {
        Verdict::inconclusive(used)
    } else {
        Verdict::holds(used)
    }
}
