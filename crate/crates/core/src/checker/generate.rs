use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::encodings::{EncodingScheme, Encoder};
use crate::reduction::{explore, has_success, inert_reducts, reduct_candidates, Limits, Visit};
use crate::syntax::{alpha_canonical, Name, Process};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GenMode {
    Exhaustive,
    Random { seed: u64, count: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorConfig {
    /// Constructor nodes, `0` not counted.
    pub max_nodes: usize,
    pub alphabet: Vec<Name>,
    pub allow_replication: bool,
    pub allow_success: bool,
    /// Only emit outputs with continuation `0`.
    pub async_only: bool,
    pub mode: GenMode,
}

impl GeneratorConfig {
    pub fn exhaustive(max_nodes: usize, alphabet: &[&str]) -> Self {
        GeneratorConfig {
            max_nodes,
            alphabet: alphabet.iter().map(|s| Name::user(s)).collect(),
            allow_replication: true,
            allow_success: true,
            async_only: false,
            mode: GenMode::Exhaustive,
        }
    }

    pub fn random(max_nodes: usize, alphabet: &[&str], seed: u64, count: usize) -> Self {
        GeneratorConfig {
            mode: GenMode::Random { seed, count },
            ..Self::exhaustive(max_nodes, alphabet)
        }
    }
}

const BINDER_POOL: [&str; 9] = ["z", "w", "v", "u", "t", "s", "r", "q", "p"];

/// Binder names by nesting depth, avoiding the alphabet so that nested
/// binders never shadow each other or a free name.
fn binder_names(alphabet: &[Name], depth: usize) -> Vec<Name> {
    let mut out = Vec::with_capacity(depth);
    let mut extra = 0usize;
    let mut pool = BINDER_POOL.iter();
    while out.len() < depth {
        let n = match pool.next() {
            Some(s) => Name::user(s),
            None => {
                extra += 1;
                Name::user(&format!("z{extra}"))
            }
        };
        if !alphabet.contains(&n) {
            out.push(n);
        }
    }
    out
}

/// Generates the corpus described by `cfg`.
///
/// Exhaustive mode lists every α-class of terms with at most `max_nodes`
/// nodes exactly once, smallest first. Random mode is reproducible from the
/// seed.
pub fn generate_terms(cfg: &GeneratorConfig) -> Result<Vec<Process>, Error> {
    if cfg.alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    match cfg.mode {
        GenMode::Exhaustive => Ok(exhaustive(cfg)),
        GenMode::Random { seed, count } => Ok(random_terms(cfg, seed, count)),
    }
}

struct Enumerator<'a> {
    cfg: &'a GeneratorConfig,
    binders: Vec<Name>,
    memo: HashMap<(usize, usize), Vec<Process>>,
}

impl Enumerator<'_> {
    fn names(&self, depth: usize) -> Vec<Name> {
        let mut v = self.cfg.alphabet.clone();
        v.extend(self.binders[..depth].iter().cloned());
        v
    }

    fn of_size(&mut self, n: usize, depth: usize) -> Vec<Process> {
        if let Some(v) = self.memo.get(&(n, depth)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if n == 0 {
            out.push(Process::Nil);
        } else {
            let names = self.names(depth);
            if n == 1 && self.cfg.allow_success {
                out.push(Process::Success);
            }
            if !self.cfg.async_only || n == 1 {
                for c in self.of_size(n - 1, depth) {
                    for x in &names {
                        for y in &names {
                            out.push(Process::output(x.clone(), y.clone(), c.clone()));
                        }
                    }
                }
            }
            let b = self.binders[depth].clone();
            for c in self.of_size(n - 1, depth + 1) {
                for x in &names {
                    out.push(Process::input(x.clone(), b.clone(), c.clone()));
                }
                out.push(Process::restrict(b.clone(), c));
            }
            if self.cfg.allow_replication {
                for c in self.of_size(n - 1, depth) {
                    out.push(Process::repl(c));
                }
            }
            for a in 0..n {
                let left = self.of_size(a, depth);
                let right = self.of_size(n - 1 - a, depth);
                for l in &left {
                    for r in &right {
                        out.push(Process::par(l.clone(), r.clone()));
                    }
                }
            }
        }
        self.memo.insert((n, depth), out.clone());
        out
    }
}

fn exhaustive(cfg: &GeneratorConfig) -> Vec<Process> {
    let mut e = Enumerator {
        cfg,
        binders: binder_names(&cfg.alphabet, cfg.max_nodes + 1),
        memo: HashMap::new(),
    };
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for n in 0..=cfg.max_nodes {
        for t in e.of_size(n, 0) {
            if seen.insert(alpha_canonical(&t)) {
                out.push(t);
            }
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Root {
    Nil,
    Success,
    Output,
    Input,
    Par,
    Restrict,
    Repl,
}

const ROOTS: [Root; 7] = [
    Root::Nil,
    Root::Success,
    Root::Output,
    Root::Input,
    Root::Par,
    Root::Restrict,
    Root::Repl,
];

struct RandomGen<'a> {
    cfg: &'a GeneratorConfig,
    binders: Vec<Name>,
    rng: ChaCha8Rng,
}

impl RandomGen<'_> {
    fn allowed(&self, r: Root, n: usize) -> bool {
        match r {
            Root::Nil => n == 0,
            Root::Success => n == 1 && self.cfg.allow_success,
            Root::Output => n >= 1 && (!self.cfg.async_only || n == 1),
            Root::Input | Root::Restrict | Root::Par => n >= 1,
            Root::Repl => n >= 1 && self.cfg.allow_replication,
        }
    }

    fn name(&mut self, depth: usize) -> Name {
        // Bound names are favoured so that binders actually get used.
        if depth > 0 && self.rng.gen_bool(0.5) {
            return self.binders[self.rng.gen_range(0..depth)].clone();
        }
        self.cfg.alphabet.choose(&mut self.rng).cloned().expect("non-empty alphabet")
    }

    fn term(&mut self, n: usize, depth: usize, forced: Option<Root>) -> Process {
        let root = match forced {
            Some(r) if self.allowed(r, n) => r,
            _ => {
                let options: Vec<Root> = ROOTS.iter().copied().filter(|r| self.allowed(*r, n)).collect();
                *options.choose(&mut self.rng).expect("some constructor fits")
            }
        };
        match root {
            Root::Nil => Process::Nil,
            Root::Success => Process::Success,
            Root::Output => {
                let (x, y) = (self.name(depth), self.name(depth));
                Process::output(x, y, self.term(n - 1, depth, None))
            }
            Root::Input => {
                let x = self.name(depth);
                let b = self.binders[depth].clone();
                Process::input(x, b, self.term(n - 1, depth + 1, None))
            }
            Root::Restrict => {
                let b = self.binders[depth].clone();
                Process::restrict(b, self.term(n - 1, depth + 1, None))
            }
            Root::Repl => Process::repl(self.term(n - 1, depth, None)),
            Root::Par => {
                let a = self.rng.gen_range(0..n);
                let l = self.term(a, depth, None);
                let r = self.term(n - 1 - a, depth, None);
                Process::par(l, r)
            }
        }
    }
}

fn random_terms(cfg: &GeneratorConfig, seed: u64, count: usize) -> Vec<Process> {
    let mut g = RandomGen {
        cfg,
        binders: binder_names(&cfg.alphabet, cfg.max_nodes + 1),
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    // The first terms cycle through every root constructor so that small
    // samples still cover the whole grammar.
    let forced: Vec<Root> = ROOTS
        .iter()
        .copied()
        .filter(|r| match r {
            Root::Success => cfg.allow_success,
            Root::Repl => cfg.allow_replication,
            _ => true,
        })
        .collect();
    (0..count)
        .map(|i| {
            let root = forced.get(i).copied();
            let n = match root {
                Some(Root::Nil) => 0,
                Some(Root::Success) => 1,
                Some(_) => g.rng.gen_range(1..=cfg.max_nodes.max(1)),
                None => g.rng.gen_range(0..=cfg.max_nodes),
            };
            g.term(n, 0, root)
        })
        .collect()
}

/// Asynchronous terms that have at least one inert reduct.
///
/// Half of the pool comes from states reached by running encoded random
/// sources, where inert forwarders are plentiful. The rest places a private
/// forwarder `new f. (f!a.0 | f(z).P)` beside a random context `Q`.
pub fn inert_rich_terms(seed: u64, count: usize, max_nodes: usize) -> Vec<Process> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut seen = HashSet::new();
    let mut push = |t: Process, out: &mut Vec<Process>, quota: usize| {
        if out.len() < quota && seen.insert(alpha_canonical(&t)) {
            if matches!(inert_reducts(&t), Ok(v) if !v.is_empty()) {
                out.push(t);
            }
        }
    };
    let half = count / 2;
    let limits = Limits {
        max_states: 64,
        ..Limits::steps(2)
    };
    for round in 0..1000u64 {
        if out.len() >= half {
            break;
        }
        let source_cfg = GeneratorConfig::random(max_nodes, &["x", "y"], rng.gen(), 64);
        let enc = Encoder::from(EncodingScheme::ALL[(round % 2) as usize]);
        for s in generate_terms(&source_cfg).expect("alphabet is non-empty") {
            let g = explore(&enc.encode(&s), limits, |_, _| Visit::Continue, |_, _, _, _| Visit::Continue);
            for t in g.states.into_iter().skip(1) {
                push(t, &mut out, half);
            }
        }
    }
    let f = Name::user("f");
    let alphabet = [Name::user("x"), Name::user("y")];
    for _ in 0..1000 {
        if out.len() >= count {
            break;
        }
        let cfg = GeneratorConfig {
            async_only: true,
            ..GeneratorConfig::random(max_nodes.saturating_sub(2).max(1), &["x", "y"], rng.gen(), 256)
        };
        let parts = generate_terms(&cfg).expect("alphabet is non-empty");
        for pair in parts.chunks_exact(2) {
            let object = alphabet.choose(&mut rng).expect("non-empty").clone();
            let forwarder = Process::restrict(
                f.clone(),
                Process::par(
                    Process::output(f.clone(), object, Process::Nil),
                    Process::input(f.clone(), Name::user("z"), pair[0].clone()),
                ),
            );
            push(Process::par(forwarder, pair[1].clone()), &mut out, count);
        }
    }
    out
}

/// Asynchronous terms with both an unguarded `ok` and at least one reduct.
///
/// Each is a random barbed term `R` beside a redex built around a random
/// continuation `P`: `a!b.0 | a(z).P`, its replicated-input and
/// replicated-output variants, or the restricted `new a. (a!b.0 | a(z).P)`.
/// Half of the pool is such compositions; the rest are states reached from
/// them within two steps.
pub fn barbed_active_terms(seed: u64, count: usize, max_nodes: usize) -> Vec<Process> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut seen = HashSet::new();
    let active = |t: &Process| has_success(t) && !reduct_candidates(t, 1).is_empty();
    let alphabet = [Name::user("x"), Name::user("y")];
    let z = Name::user("z");
    let half = count / 2;
    let limits = Limits {
        max_states: 16,
        ..Limits::steps(2)
    };
    for _ in 0..10_000 {
        if out.len() >= count {
            break;
        }
        let cfg = GeneratorConfig {
            async_only: true,
            ..GeneratorConfig::random(max_nodes, &["x", "y"], rng.gen(), 256)
        };
        let parts = generate_terms(&cfg).expect("alphabet is non-empty");
        let barbed: Vec<&Process> = parts.iter().filter(|t| has_success(t)).collect();
        for (r, p) in barbed.iter().zip(parts.iter().rev()) {
            let a = alphabet.choose(&mut rng).expect("non-empty").clone();
            let b = alphabet.choose(&mut rng).expect("non-empty").clone();
            let out_ab = Process::output(a.clone(), b, Process::Nil);
            let in_a = Process::input(a.clone(), z.clone(), (*p).clone());
            let redex = match rng.gen_range(0..4) {
                0 => Process::par(out_ab, in_a),
                1 => Process::par(out_ab, Process::repl(in_a)),
                2 => Process::par(Process::repl(out_ab), in_a),
                _ => Process::restrict(a, Process::par(out_ab, in_a)),
            };
            let t = Process::par((*r).clone(), redex);
            let candidates = if out.len() < half {
                vec![t]
            } else {
                let g = explore(&t, limits, |_, _| Visit::Continue, |_, _, _, _| Visit::Continue);
                g.states.into_iter().skip(1).collect()
            };
            for c in candidates {
                if out.len() < count && active(&c) && seen.insert(alpha_canonical(&c)) {
                    out.push(c);
                }
            }
        }
    }
    out
}
