//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use asyncpi::checker::{
    barbed_active_terms, check_barb_preservation, check_inert_confluence, check_lemmas, check_op_soundness,
    generate_terms, inert_rich_terms, run_suite_on, structured_simulation, Budgets, Criterion,
    CriterionReport, GeneratorConfig,
};
use asyncpi::congruence::canonical_key;
use asyncpi::reduction::{diverges_bounded, Outcome};
use asyncpi::{
    encode, has_success, parse, reduct_candidates, struct_eq_bounded, EncodingScheme, Encoder, Mutation,
    Process,
};

const SEED: u64 = 0x5eed;

struct Line {
    passed: bool,
    text: String,
}

fn line(passed: bool, text: String) -> Line {
    Line { passed, text }
}

fn exhaustive_corpus() -> Vec<Process> {
    generate_terms(&GeneratorConfig::exhaustive(4, &["x", "y"])).expect("corpus")
}

fn encoders() -> Vec<Encoder> {
    EncodingScheme::ALL.into_iter().map(Encoder::from).collect()
}

fn exhaustive_run(corpus: &[Process], budgets: &Budgets) -> Line {
    let started = Instant::now();
    let reports = run_suite_on(corpus, &encoders(), &Criterion::ALL, budgets);
    let elapsed = started.elapsed();
    let violated: usize = reports.iter().map(|r| r.violated).sum();
    let inconclusive: usize = reports.iter().map(|r| r.inconclusive).sum();
    let mut detail = String::new();
    for r in reports.iter().filter(|r| r.violated > 0) {
        let first = r.first_violation().map(|e| e.term.to_string()).unwrap_or_default();
        detail.push_str(&format!("; {} {} violated on {first}", r.scheme, r.criterion));
    }
    let passed = violated == 0 && elapsed <= Duration::from_secs(300);
    let text = format!(
        "exhaustive corpus: {} terms x 2 schemes x {} checks, {violated} violated, {inconclusive} inconclusive, {:.1}s{detail}",
        corpus.len(),
        Criterion::ALL.len(),
        elapsed.as_secs_f64()
    );
    line(passed, text)
}

fn step_counts(corpus: &[Process], budgets: &Budgets) -> Line {
    let mut steps = 0usize;
    let mut failures = 0usize;
    let mut bad = Vec::new();
    for scheme in EncodingScheme::ALL {
        let k = scheme.step_factor();
        for s in corpus {
            let target = encode(s, scheme);
            let mut seen = std::collections::HashSet::new();
            for (_, s2) in reduct_candidates(s, 1) {
                if !seen.insert(canonical_key(&s2)) {
                    continue;
                }
                steps += 1;
                let v = structured_simulation(&target, &encode(&s2, scheme), k, budgets);
                let ok = match v.trace() {
                    Some(t) if v.is_holds() => t.len() == k && t.inert_flags()[1..].iter().all(|f| *f),
                    _ => false,
                };
                if !ok {
                    failures += 1;
                    if bad.len() < 3 {
                        bad.push(format!("{scheme}: {s} -> {s2}"));
                    }
                }
            }
        }
    }
    line(
        failures == 0,
        format!("step counts: {steps} source steps simulated in exactly 3 (boudol) / 2 (ht) target steps, trailing steps inert, {failures} exceptions {bad:?}"),
    )
}

fn worked_examples(budgets: &Budgets) -> Line {
    let source = parse("x!y.0 | x(z).0").unwrap();
    let goal = parse("0 | 0").unwrap();
    let mut notes = Vec::new();
    let mut passed = true;
    for scheme in EncodingScheme::ALL {
        let k = scheme.step_factor();
        let v = structured_simulation(&encode(&source, scheme), &encode(&goal, scheme), k, budgets);
        let Some(t) = v.trace().filter(|_| v.is_holds()) else {
            passed = false;
            notes.push(format!("{scheme}: no trace"));
            continue;
        };
        let first = &t.steps[0].redex;
        let flags = t.inert_flags();
        let ends = struct_eq_bounded(t.last(), &encode(&goal, scheme), budgets.eq).is_holds();
        let ok = t.len() == k
            && first.subject.to_string() == "x"
            && !flags[0]
            && flags[1..].iter().all(|f| *f)
            && ends;
        passed &= ok;
        notes.push(format!("{scheme}: {} steps, handshake on {}, ends congruent {}", t.len(), first.subject, ends));
    }
    line(passed, format!("worked traces: {}", notes.join("; ")))
}

fn lemma_suite() -> Line {
    let corpus = generate_terms(&GeneratorConfig::random(6, &["x", "y", "a"], SEED, 10_000)).unwrap();
    let mut failures = 0usize;
    let mut first = None;
    for scheme in EncodingScheme::ALL {
        for s in &corpus {
            let v = check_lemmas(s, &scheme.into());
            if v.outcome != Outcome::Holds {
                failures += 1;
                first.get_or_insert_with(|| format!("{scheme} on {s}"));
            }
        }
    }
    line(
        failures == 0 && corpus.len() == 10_000,
        format!("lemma suite: {} random terms x 2 schemes, {failures} failures {}", corpus.len(), first.unwrap_or_default()),
    )
}

fn barb_fuzz() -> Line {
    let corpus = barbed_active_terms(SEED + 1, 10_000, 7);
    let failures = corpus
        .iter()
        .filter(|t| check_barb_preservation(t).outcome != Outcome::Holds)
        .count();
    let all_async = corpus.iter().all(|t| t.is_asynchronous());
    let exercised = corpus
        .iter()
        .filter(|t| has_success(t) && !reduct_candidates(t, 1).is_empty())
        .count();
    line(
        failures == 0 && all_async && corpus.len() == 10_000,
        format!(
            "barb preservation: {} random asynchronous terms ({exercised} with a barb and a reduct), {failures} failures",
            corpus.len()
        ),
    )
}

fn inert_fuzz(budgets: &Budgets) -> Line {
    let corpus = inert_rich_terms(SEED + 2, 2_000, 6);
    let mut violated = 0usize;
    let mut inconclusive = 0usize;
    for t in &corpus {
        match check_inert_confluence(t, budgets.eq).outcome {
            Outcome::Violated => violated += 1,
            Outcome::Inconclusive => inconclusive += 1,
            Outcome::Holds => {}
        }
    }
    let rate = inconclusive as f64 / corpus.len().max(1) as f64;
    line(
        violated == 0 && rate <= 0.05 && corpus.len() == 2_000,
        format!(
            "inert diamond: {} terms with an inert reduct, {violated} violated, inconclusive rate {:.2}%",
            corpus.len(),
            rate * 100.0
        ),
    )
}

fn soundness_totality(corpus: &[Process], budgets: &Budgets) -> Line {
    let finite: Vec<&Process> = corpus.iter().filter(|t| !t.has_replication()).collect();
    let mut other = 0usize;
    for scheme in EncodingScheme::ALL {
        for s in &finite {
            if check_op_soundness(s, &scheme.into(), budgets).outcome != Outcome::Holds {
                other += 1;
            }
        }
    }
    line(
        other == 0,
        format!("soundness totality: {} replication-free terms x 2 schemes, {other} not Holds", finite.len()),
    )
}

fn divergence(corpus: &[Process]) -> Line {
    let looping = parse("!(x!y.0) | !(x(z).0)").unwrap();
    let mut witnessed = diverges_bounded(&looping, 16).outcome == Outcome::Holds;
    for scheme in EncodingScheme::ALL {
        witnessed &= diverges_bounded(&encode(&looping, scheme), 16).outcome == Outcome::Holds;
    }
    let mut terminating = 0usize;
    let mut other = 0usize;
    for s in corpus.iter().filter(|t| !t.has_replication()) {
        let mut ok = diverges_bounded(s, 64).outcome == Outcome::Violated;
        for scheme in EncodingScheme::ALL {
            ok &= diverges_bounded(&encode(s, scheme), 64).outcome == Outcome::Violated;
        }
        if ok {
            terminating += 1;
        } else {
            other += 1;
        }
    }
    line(
        witnessed && other == 0,
        format!("divergence: loop witnessed on all three sides within 16 steps: {witnessed}; {terminating} replication-free terms terminate on every side, {other} do not"),
    )
}

fn mutations(corpus: &[Process], budgets: &Budgets) -> Line {
    let mut missed = Vec::new();
    let mut caught = Vec::new();
    for m in Mutation::ALL {
        for scheme in EncodingScheme::ALL {
            let reports: Vec<CriterionReport> =
                run_suite_on(corpus, &[Encoder::mutated(scheme, m)], &Criterion::ALL, budgets);
            let by: Vec<String> = reports
                .iter()
                .filter(|r| r.violated > 0)
                .map(|r| r.criterion.to_string())
                .collect();
            if by.is_empty() {
                missed.push(format!("{m}/{scheme}"));
            } else {
                caught.push(format!("{m}/{scheme} by {}", by.join(",")));
            }
        }
    }
    line(
        missed.is_empty(),
        format!("mutations: caught [{}]; missed [{}]", caught.join("; "), missed.join("; ")),
    )
}

fn report(index: usize, started: Instant, l: Line) -> bool {
    println!(
        "{} criterion {index}: {} [{:.1}s]",
        if l.passed { "PASS" } else { "FAIL" },
        l.text,
        started.elapsed().as_secs_f64()
    );
    l.passed
}

fn main() -> ExitCode {
    let budgets = Budgets::default();
    let corpus = exhaustive_corpus();
    let mut results = Vec::new();
    let mut run = |f: &dyn Fn() -> Line| {
        let started = Instant::now();
        let l = f();
        results.push(report(results.len() + 1, started, l));
    };
    run(&|| exhaustive_run(&corpus, &budgets));
    run(&|| step_counts(&corpus, &budgets));
    run(&|| worked_examples(&budgets));
    run(&lemma_suite);
    run(&barb_fuzz);
    run(&|| inert_fuzz(&budgets));
    run(&|| soundness_totality(&corpus, &budgets));
    run(&|| divergence(&corpus));
    run(&|| mutations(&corpus, &budgets));

    let passed = results.iter().filter(|p| **p).count();
    println!("acceptance: {passed} of {} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
