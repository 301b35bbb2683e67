//! Fixed inputs for the semantics benchmarks.

use asyncpi::{parse, Process};

/// A handful of terms that exercise matching, unfolding and communication.
pub fn sample_terms() -> Vec<Process> {
    [
        "x!y.0 | x(z).z!x.0",
        "new a. (a!x.0 | a(b).b!b.0 | !x(c).ok)",
        "!(x!y.0) | !(x(z).0)",
        "new a. new b. (a!b.0 | b!a.0 | a(c).c(d).ok | b(e).0)",
    ]
    .into_iter()
    .map(|s| parse(s).expect("sample term"))
    .collect()
}
