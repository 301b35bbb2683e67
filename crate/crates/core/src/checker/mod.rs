//! Runs the validity criteria over generated corpora.

mod criteria;
mod generate;
mod lemmas;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::congruence::EqBudget;
use crate::encodings::{EncodingScheme, Encoder, Mutation};
use crate::reduction::{Limits, Outcome, Verdict, DEFAULT_MAX_STATES, DEFAULT_MAX_TERM_SIZE};
use crate::syntax::Process;
use crate::Error;

pub use criteria::{
    check_compositionality, check_divergence_reflection, check_name_invariance,
    check_name_invariance_family, check_op_completeness, check_op_soundness,
    check_success_sensitiveness, renaming_family, structured_simulation,
};
pub use generate::{barbed_active_terms, generate_terms, inert_rich_terms, GenMode, GeneratorConfig};
pub use lemmas::{check_barb_preservation, check_inert_confluence, check_lemmas, success_by_congruence};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    Compositionality,
    NameInvariance,
    #[serde(rename = "completeness")]
    OperationalCompleteness,
    #[serde(rename = "soundness")]
    OperationalSoundness,
    #[serde(rename = "divergence")]
    DivergenceReflection,
    #[serde(rename = "success")]
    SuccessSensitiveness,
    /// Auxiliary properties of the translation (see [`check_lemmas`]).
    Lemmas,
}

impl Criterion {
    pub const ALL: [Criterion; 7] = [
        Criterion::Compositionality,
        Criterion::NameInvariance,
        Criterion::OperationalCompleteness,
        Criterion::OperationalSoundness,
        Criterion::DivergenceReflection,
        Criterion::SuccessSensitiveness,
        Criterion::Lemmas,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Criterion::Compositionality => "compositionality",
            Criterion::NameInvariance => "name-invariance",
            Criterion::OperationalCompleteness => "completeness",
            Criterion::OperationalSoundness => "soundness",
            Criterion::DivergenceReflection => "divergence",
            Criterion::SuccessSensitiveness => "success",
            Criterion::Lemmas => "lemmas",
        }
    }

    /// Parses a comma-separated list; `all` selects every criterion.
    pub fn parse_list(s: &str) -> Result<Vec<Criterion>, Error> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                return Ok(Criterion::ALL.to_vec());
            }
            let c: Criterion = part.parse()?;
            if !out.contains(&c) {
                out.push(c);
            }
        }
        if out.is_empty() {
            return Err(Error::Usage("no criteria selected".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.to_ascii_lowercase();
        Criterion::ALL
            .into_iter()
            .find(|c| c.short_name() == s || (s == "op-completeness" && *c == Criterion::OperationalCompleteness)
                || (s == "op-soundness" && *c == Criterion::OperationalSoundness))
            .ok_or_else(|| Error::Usage(format!("unknown criterion `{s}`")))
    }
}

/// Resource bounds shared by all checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budgets {
    /// Source-side reduction depth; target searches scale it by the step factor.
    pub step_budget: usize,
    pub eq: EqBudget,
    pub max_states: usize,
    /// Larger states are not expanded, leaving the search open.
    pub max_term_size: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            step_budget: 64,
            eq: EqBudget::default(),
            max_states: DEFAULT_MAX_STATES,
            max_term_size: DEFAULT_MAX_TERM_SIZE,
        }
    }
}

impl Budgets {
    pub fn limits(&self) -> Limits {
        Limits {
            max_steps: self.step_budget,
            max_states: self.max_states,
            max_term_size: self.max_term_size,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermVerdict {
    pub term: Process,
    pub verdict: Verdict,
}

/// Outcome of one criterion for one encoder over a corpus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub scheme: EncodingScheme,
    pub mutation: Option<Mutation>,
    pub holds: usize,
    pub violated: usize,
    pub inconclusive: usize,
    pub entries: Vec<TermVerdict>,
}

impl CriterionReport {
    pub fn total(&self) -> usize {
        self.entries.len()
    }

    pub fn violations(&self) -> impl Iterator<Item = &TermVerdict> {
        self.entries.iter().filter(|e| e.verdict.outcome == Outcome::Violated)
    }

    pub fn first_violation(&self) -> Option<&TermVerdict> {
        self.violations().next()
    }
}

pub fn check_term(criterion: Criterion, s: &Process, enc: &Encoder, budgets: &Budgets) -> Verdict {
    match criterion {
        Criterion::Compositionality => check_compositionality(s, enc),
        Criterion::NameInvariance => check_name_invariance_family(s, enc),
        Criterion::OperationalCompleteness => check_op_completeness(s, enc, budgets),
        Criterion::OperationalSoundness => check_op_soundness(s, enc, budgets),
        Criterion::DivergenceReflection => check_divergence_reflection(s, enc, budgets),
        Criterion::SuccessSensitiveness => check_success_sensitiveness(s, enc, budgets),
        Criterion::Lemmas => check_lemmas(s, enc),
    }
}

pub fn run_criterion(
    criterion: Criterion,
    corpus: &[Process],
    enc: &Encoder,
    budgets: &Budgets,
) -> CriterionReport {
    let entries: Vec<TermVerdict> = corpus
        .par_iter()
        .map(|s| TermVerdict {
            term: s.clone(),
            verdict: check_term(criterion, s, enc, budgets),
        })
        .collect();
    let count = |o: Outcome| entries.iter().filter(|e| e.verdict.outcome == o).count();
    CriterionReport {
        criterion,
        scheme: enc.scheme,
        mutation: enc.mutation,
        holds: count(Outcome::Holds),
        violated: count(Outcome::Violated),
        inconclusive: count(Outcome::Inconclusive),
        entries,
    }
}

/// Runs every criterion for every encoder over an explicit corpus.
pub fn run_suite_on(
    corpus: &[Process],
    encoders: &[Encoder],
    criteria: &[Criterion],
    budgets: &Budgets,
) -> Vec<CriterionReport> {
    let mut out = Vec::with_capacity(encoders.len() * criteria.len());
    for enc in encoders {
        for &c in criteria {
            out.push(run_criterion(c, corpus, enc, budgets));
        }
    }
    out
}

/// Generates a corpus and runs [`run_suite_on`] over it.
pub fn run_suite(
    cfg: &GeneratorConfig,
    encoders: &[Encoder],
    criteria: &[Criterion],
    budgets: &Budgets,
) -> Result<Vec<CriterionReport>, Error> {
    let corpus = generate_terms(cfg)?;
    Ok(run_suite_on(&corpus, encoders, criteria, budgets))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criterion_names_round_trip() {
        for c in Criterion::ALL {
            assert_eq!(c.short_name().parse::<Criterion>().unwrap(), c);
        }
        assert_eq!(Criterion::parse_list("all").unwrap().len(), 7);
        assert_eq!(
            Criterion::parse_list("soundness, success,soundness").unwrap(),
            vec![Criterion::OperationalSoundness, Criterion::SuccessSensitiveness]
        );
        assert!(Criterion::parse_list("bogus").is_err());
        assert!(Criterion::parse_list("").is_err());
    }

    #[test]
    fn small_suite_is_clean() {
        let cfg = GeneratorConfig::exhaustive(2, &["x", "y"]);
        let encoders: Vec<Encoder> = EncodingScheme::ALL.into_iter().map(Encoder::from).collect();
        let reports = run_suite(&cfg, &encoders, &Criterion::ALL, &Budgets::default()).unwrap();
        assert_eq!(reports.len(), 14);
        for r in &reports {
            assert_eq!(r.violated, 0, "{} {}: {:?}", r.criterion, r.scheme, r.first_violation());
            assert_eq!(r.inconclusive, 0, "{} {}", r.criterion, r.scheme);
            assert_eq!(r.holds, r.total());
        }
    }

    #[test]
    fn suite_reports_are_ordered_like_the_corpus() {
        let corpus = generate_terms(&GeneratorConfig::exhaustive(2, &["x"])).unwrap();
        let enc = Encoder::from(EncodingScheme::Boudol);
        let r = run_criterion(Criterion::Compositionality, &corpus, &enc, &Budgets::default());
        let terms: Vec<Process> = r.entries.iter().map(|e| e.term.clone()).collect();
        assert_eq!(terms, corpus);
    }
}
