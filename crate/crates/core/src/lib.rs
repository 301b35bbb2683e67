//! A workbench for the choice-free synchronous π-calculus and its
//! asynchronous fragment.
//!
//! The crate provides the term language ([`syntax`], [`text`]), structural
//! congruence ([`congruence`]), reduction semantics ([`reduction`]), the
//! Boudol and Honda-Tokoro translations into the asynchronous fragment
//! ([`encodings`]), and executable validity criteria for those translations
//! run over generated corpora ([`checker`]).

pub mod checker;
pub mod congruence;
pub mod encodings;
pub mod reduction;
pub mod syntax;
pub mod text;

pub use checker::{run_suite, run_suite_on, Budgets, Criterion, CriterionReport, GeneratorConfig};
pub use congruence::{struct_eq_bounded, struct_eq_s, to_normal_form, EqBudget, NormalForm};
pub use encodings::{encode, EncodingScheme, Encoder, Mutation};
pub use reduction::{
    diverges_bounded, has_success, inert_reducts, may_succeed, reduces_to, reduct_candidates,
    BudgetUsed, Limits, Outcome, RedexDescriptor, Trace, Verdict, Witness,
};
pub use syntax::{
    alpha_canonical, alpha_eq, apply_renaming, bound_names, free_names, fresh_name, substitute,
    Name, NameSet, Process, Renaming,
};
pub use text::{parse, print};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("not an asynchronous term: output `{0}` has a non-nil continuation")]
    NotAsynchronous(String),
    #[error("the name alphabet is empty")]
    EmptyAlphabet,
    #[error("{0}")]
    Usage(String),
}
