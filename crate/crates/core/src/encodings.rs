//! Translations from the synchronous calculus into its asynchronous fragment.
//!
//! Both translations are homomorphic on `0`, `|`, `!`, `ν` and `ok`, and
//! differ only in how a synchronous handshake is simulated:
//!
//! ```text
//! Boudol   x!y.P  ->  new u. (x!u.0 | u(v).(v!y.0 | [P]))
//!          x(z).P ->  x(u).new v. (u!v.0 | v(z).[P])
//! HT       x!y.P  ->  x(u).(u!y.0 | [P])
//!          x(z).P ->  new u. (x!u.0 | u(z).[P])
//! ```
//!
//! The auxiliary names `u` and `v` are the least `Fresh` names outside the
//! free names of `P` together with the prefix's own names.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::syntax::{alpha_eq, apply_renaming, fresh_name, free_names, Name, NameSet, Process, Renaming};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EncodingScheme {
    #[serde(rename = "boudol")]
    Boudol,
    #[serde(rename = "ht")]
    HondaTokoro,
}

impl EncodingScheme {
    pub const ALL: [EncodingScheme; 2] = [EncodingScheme::Boudol, EncodingScheme::HondaTokoro];

    /// Target steps needed to simulate one source step.
    pub fn step_factor(self) -> usize {
        match self {
            EncodingScheme::Boudol => 3,
            EncodingScheme::HondaTokoro => 2,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            EncodingScheme::Boudol => "boudol",
            EncodingScheme::HondaTokoro => "ht",
        }
    }
}

impl fmt::Display for EncodingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for EncodingScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "boudol" | "b" => Ok(EncodingScheme::Boudol),
            "ht" | "honda-tokoro" | "hondatokoro" => Ok(EncodingScheme::HondaTokoro),
            other => Err(Error::Usage(format!("unknown scheme `{other}` (expected boudol or ht)"))),
        }
    }
}

/// A deliberate single-clause defect, used to test that the checker notices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    /// Omit the forwarding output on `u` (Boudol input clause, HT output clause).
    #[serde(rename = "drop-forwarder")]
    DropForwarderOutput,
    /// Send on the wrong end of the forwarder: `v!u` for `u!v`, `y!u` for `u!y`.
    #[serde(rename = "swap-uv")]
    SwapUV,
    /// Use the subject `x` where a fresh `u` is required in the output clause.
    #[serde(rename = "reuse-non-fresh")]
    ReuseNonFresh,
    /// Use the other scheme's output clause.
    SwapOutputClauses,
}

impl Mutation {
    pub const ALL: [Mutation; 4] = [
        Mutation::DropForwarderOutput,
        Mutation::SwapUV,
        Mutation::ReuseNonFresh,
        Mutation::SwapOutputClauses,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Mutation::DropForwarderOutput => "drop-forwarder",
            Mutation::SwapUV => "swap-uv",
            Mutation::ReuseNonFresh => "reuse-non-fresh",
            Mutation::SwapOutputClauses => "swap-output-clauses",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Mutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.short_name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown mutation `{s}`")))
    }
}

/// An encoding, possibly with a deliberate defect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Encoder {
    pub scheme: EncodingScheme,
    pub mutation: Option<Mutation>,
}

impl From<EncodingScheme> for Encoder {
    fn from(scheme: EncodingScheme) -> Self {
        Encoder {
            scheme,
            mutation: None,
        }
    }
}

pub fn encode(s: &Process, scheme: EncodingScheme) -> Process {
    Encoder::from(scheme).encode(s)
}

fn out0(x: &Name, y: &Name) -> Process {
    Process::output(x.clone(), y.clone(), Process::Nil)
}

impl Encoder {
    pub fn mutated(scheme: EncodingScheme, mutation: Mutation) -> Self {
        Encoder {
            scheme,
            mutation: Some(mutation),
        }
    }

    fn is(&self, m: Mutation) -> bool {
        self.mutation == Some(m)
    }

    pub fn encode(&self, s: &Process) -> Process {
        match s {
            Process::Nil => Process::Nil,
            Process::Success => Process::Success,
            Process::Par(l, r) => Process::par(self.encode(l), self.encode(r)),
            Process::Restrict(z, b) => Process::restrict(z.clone(), self.encode(b)),
            Process::Repl(b) => Process::repl(self.encode(b)),
            Process::Output(x, y, c) => {
                let mut avoid = free_names(c);
                avoid.insert(x.clone());
                avoid.insert(y.clone());
                self.output_clause(x, y, &avoid).plug(&[self.encode(c)])
            }
            Process::Input(x, z, c) => {
                let mut avoid = free_names(c);
                avoid.insert(x.clone());
                avoid.insert(z.clone());
                self.input_clause(x, z, &avoid).plug(&[self.encode(c)])
            }
        }
    }

    fn auxiliary(avoid: &NameSet) -> (Name, Name) {
        let u = fresh_name(avoid);
        let mut more = avoid.clone();
        more.insert(u.clone());
        (u, fresh_name(&more))
    }

    fn output_clause(&self, x: &Name, y: &Name, avoid: &NameSet) -> OpContext {
        let (u, v) = Self::auxiliary(avoid);
        let u = if self.is(Mutation::ReuseNonFresh) { x.clone() } else { u };
        let scheme = match (self.scheme, self.is(Mutation::SwapOutputClauses)) {
            (s, false) => s,
            (EncodingScheme::Boudol, true) => EncodingScheme::HondaTokoro,
            (EncodingScheme::HondaTokoro, true) => EncodingScheme::Boudol,
        };
        let hole = Context::Hole(0);
        match scheme {
            EncodingScheme::Boudol => {
                let relay = Context::Par(Box::new(Context::Term(out0(&v, y))), Box::new(hole));
                OpContext {
                    term: Context::Restrict(
                        u.clone(),
                        Box::new(Context::Par(
                            Box::new(Context::Term(out0(x, &u))),
                            Box::new(Context::Input(u.clone(), v.clone(), Box::new(relay))),
                        )),
                    ),
                    generated: vec![u, v],
                }
            }
            EncodingScheme::HondaTokoro => {
                let forward = if self.is(Mutation::DropForwarderOutput) {
                    hole
                } else if self.is(Mutation::SwapUV) {
                    Context::Par(Box::new(Context::Term(out0(y, &u))), Box::new(hole))
                } else {
                    Context::Par(Box::new(Context::Term(out0(&u, y))), Box::new(hole))
                };
                OpContext {
                    term: Context::Input(x.clone(), u.clone(), Box::new(forward)),
                    generated: vec![u],
                }
            }
        }
    }

    fn input_clause(&self, x: &Name, z: &Name, avoid: &NameSet) -> OpContext {
        let (u, v) = Self::auxiliary(avoid);
        let hole = Context::Hole(0);
        match self.scheme {
            EncodingScheme::Boudol => {
                let body = Context::Input(v.clone(), z.clone(), Box::new(hole));
                let inner = if self.is(Mutation::DropForwarderOutput) {
                    body
                } else {
                    let (a, b) = if self.is(Mutation::SwapUV) { (&v, &u) } else { (&u, &v) };
                    Context::Par(Box::new(Context::Term(out0(a, b))), Box::new(body))
                };
                OpContext {
                    term: Context::Input(
                        x.clone(),
                        u.clone(),
                        Box::new(Context::Restrict(v.clone(), Box::new(inner))),
                    ),
                    generated: vec![u, v],
                }
            }
            EncodingScheme::HondaTokoro => OpContext {
                term: Context::Restrict(
                    u.clone(),
                    Box::new(Context::Par(
                        Box::new(Context::Term(out0(x, &u))),
                        Box::new(Context::Input(u.clone(), z.clone(), Box::new(hole))),
                    )),
                ),
                generated: vec![u],
            },
        }
    }

    /// The context implementing `op` for arguments whose free names, together
    /// with the operator's own names, are contained in `free`.
    pub fn context_for(&self, op: &Operator, free: &NameSet) -> OpContext {
        let with = |names: &[&Name]| {
            let mut n = free.clone();
            n.extend(names.iter().map(|x| (*x).clone()));
            n
        };
        match op {
            Operator::Nil => OpContext::closed(Context::Term(Process::Nil)),
            Operator::Success => OpContext::closed(Context::Term(Process::Success)),
            Operator::Par => OpContext::closed(Context::Par(Box::new(Context::Hole(0)), Box::new(Context::Hole(1)))),
            Operator::Restrict(z) => OpContext::closed(Context::Restrict(z.clone(), Box::new(Context::Hole(0)))),
            Operator::Repl => OpContext::closed(Context::Repl(Box::new(Context::Hole(0)))),
            Operator::Output(x, y) => self.output_clause(x, y, &with(&[x, y])),
            Operator::Input(x, z) => self.input_clause(x, z, &with(&[x, z])),
        }
    }

    /// The same context with auxiliary names fixed once and for all,
    /// independent of the arguments.
    pub fn fixed_context_for(&self, op: &Operator) -> OpContext {
        self.context_for(op, &NameSet::new())
    }
}

/// A source constructor together with its name parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    Nil,
    Success,
    Output(Name, Name),
    Input(Name, Name),
    Par,
    Restrict(Name),
    Repl,
}

impl Operator {
    /// Splits `p` into its root operator and immediate subterms.
    pub fn decompose(p: &Process) -> (Operator, Vec<Process>) {
        match p {
            Process::Nil => (Operator::Nil, vec![]),
            Process::Success => (Operator::Success, vec![]),
            Process::Output(x, y, c) => (Operator::Output(x.clone(), y.clone()), vec![(**c).clone()]),
            Process::Input(x, z, c) => (Operator::Input(x.clone(), z.clone()), vec![(**c).clone()]),
            Process::Par(l, r) => (Operator::Par, vec![(**l).clone(), (**r).clone()]),
            Process::Restrict(z, b) => (Operator::Restrict(z.clone()), vec![(**b).clone()]),
            Process::Repl(b) => (Operator::Repl, vec![(**b).clone()]),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Operator::Nil | Operator::Success => 0,
            Operator::Par => 2,
            _ => 1,
        }
    }
}

/// A target term with numbered holes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Context {
    Hole(usize),
    Term(Process),
    Input(Name, Name, Box<Context>),
    Par(Box<Context>, Box<Context>),
    Restrict(Name, Box<Context>),
    Repl(Box<Context>),
}

impl Context {
    fn plug(&self, args: &[Process]) -> Process {
        match self {
            Context::Hole(i) => args[*i].clone(),
            Context::Term(p) => p.clone(),
            Context::Input(x, z, c) => Process::input(x.clone(), z.clone(), c.plug(args)),
            Context::Par(l, r) => Process::par(l.plug(args), r.plug(args)),
            Context::Restrict(z, c) => Process::restrict(z.clone(), c.plug(args)),
            Context::Repl(c) => Process::repl(c.plug(args)),
        }
    }

    fn rename_binders(&self, sigma: &Renaming) -> Context {
        let r = |n: &Name| sigma.get(n).cloned().unwrap_or_else(|| n.clone());
        match self {
            Context::Hole(i) => Context::Hole(*i),
            Context::Term(p) => Context::Term(apply_renaming(p, sigma)),
            Context::Input(x, z, c) => Context::Input(r(x), r(z), Box::new(c.rename_binders(sigma))),
            Context::Par(a, b) => Context::Par(Box::new(a.rename_binders(sigma)), Box::new(b.rename_binders(sigma))),
            Context::Restrict(z, c) => Context::Restrict(r(z), Box::new(c.rename_binders(sigma))),
            Context::Repl(c) => Context::Repl(Box::new(c.rename_binders(sigma))),
        }
    }

    fn names(&self, out: &mut NameSet) {
        match self {
            Context::Hole(_) => {}
            Context::Term(p) => out.extend(crate::syntax::all_names(p)),
            Context::Input(x, z, c) => {
                out.insert(x.clone());
                out.insert(z.clone());
                c.names(out);
            }
            Context::Par(a, b) => {
                a.names(out);
                b.names(out);
            }
            Context::Restrict(z, c) => {
                out.insert(z.clone());
                c.names(out);
            }
            Context::Repl(c) => c.names(out),
        }
    }
}

/// A context plus the auxiliary binders it introduces. Only those binders
/// are renamed when filling; the source binder of an input is meant to
/// capture.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpContext {
    pub term: Context,
    pub generated: Vec<Name>,
}

impl OpContext {
    fn closed(term: Context) -> Self {
        OpContext {
            term,
            generated: Vec::new(),
        }
    }

    /// Literal hole replacement, no renaming.
    pub fn plug(&self, args: &[Process]) -> Process {
        self.term.plug(args)
    }

    /// Capture-avoiding filling: auxiliary binders that clash with a free
    /// name of some argument are renamed first.
    pub fn fill(&self, args: &[Process]) -> Process {
        let mut arg_free = NameSet::new();
        for a in args {
            arg_free.extend(free_names(a));
        }
        let clashing: Vec<&Name> = self.generated.iter().filter(|g| arg_free.contains(*g)).collect();
        if clashing.is_empty() {
            return self.plug(args);
        }
        let mut avoid = arg_free;
        self.term.names(&mut avoid);
        let mut sigma = Renaming::new();
        for g in clashing {
            let w = fresh_name(&avoid);
            avoid.insert(w.clone());
            sigma.insert(g.clone(), w);
        }
        self.term.rename_binders(&sigma).plug(args)
    }
}

/// Per-name translation accompanying an encoding. Only the identity, with
/// one target name per source name, is provided.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub enum RenamingPolicy {
    #[default]
    Identity,
}

impl RenamingPolicy {
    pub fn arity(self) -> usize {
        1
    }

    /// The target renaming `σ'` induced by a source renaming `σ`.
    pub fn lift(self, sigma: &Renaming) -> Renaming {
        sigma.clone()
    }
}

pub fn policy_image(n: &Name, policy: RenamingPolicy) -> Vec<Name> {
    match policy {
        RenamingPolicy::Identity => vec![n.clone()],
    }
}

/// Compares `⟦op(S1..Sk)⟧` against its context filled with `⟦Si⟧`, both
/// literally (argument-dependent context) and up to α (fixed context).
pub fn compositional_at(enc: &Encoder, s: &Process) -> (bool, bool) {
    let (op, args) = Operator::decompose(s);
    let encoded: Vec<Process> = args.iter().map(|a| enc.encode(a)).collect();
    let whole = enc.encode(s);
    let indexed = enc.context_for(&op, &free_names(s)).plug(&encoded) == whole;
    let fixed = alpha_eq(&enc.fixed_context_for(&op).fill(&encoded), &whole);
    (indexed, fixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::substitute;
    use crate::text::{parse, print};

    fn p(s: &str) -> Process {
        parse(s).unwrap()
    }

    fn n(s: &str) -> Name {
        Name::user(s)
    }

    #[test]
    fn clause_examples() {
        let b = EncodingScheme::Boudol;
        let ht = EncodingScheme::HondaTokoro;
        assert_eq!(encode(&Process::Nil, b), Process::Nil);
        assert_eq!(print(&encode(&p("x!y.0"), b)), "new #0. (x!#0.0 | #0(#1).(#1!y.0 | 0))");
        assert_eq!(print(&encode(&p("x(z).z!z.0"), ht)), "new #0. (x!#0.0 | #0(z).z(#0).(#0!z.0 | 0))");
        assert_eq!(print(&encode(&p("x!y.ok"), ht)), "x(#0).(#0!y.0 | ok)");
        assert_eq!(print(&encode(&p("x(z).ok"), b)), "x(#0).new #1. (#0!#1.0 | #1(z).ok)");
    }

    #[test]
    fn ht_input_clause_literal() {
        let got = encode(&p("x(z).ok"), EncodingScheme::HondaTokoro);
        let u = Name::Fresh(0);
        let want = Process::restrict(
            u.clone(),
            Process::par(out0(&n("x"), &u), Process::input(u, n("z"), Process::Success)),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn auxiliary_names_avoid_fresh_names_in_the_source() {
        let s = Process::output(n("x"), Name::Fresh(0), Process::Nil);
        let e = encode(&s, EncodingScheme::Boudol);
        assert_eq!(free_names(&e), free_names(&s));
    }

    #[test]
    fn encoding_twice_with_shifted_counters_is_alpha_equal() {
        let s = p("x(z).0");
        let a = encode(&s, EncodingScheme::Boudol);
        // Rebuild by hand with different auxiliary names.
        let (u, v) = (Name::Fresh(7), Name::Fresh(9));
        let b = Process::input(
            n("x"),
            u.clone(),
            Process::restrict(
                v.clone(),
                Process::par(out0(&u, &v), Process::input(v, n("z"), Process::Nil)),
            ),
        );
        assert_ne!(a, b);
        assert!(alpha_eq(&a, &b));
    }

    #[test]
    fn homomorphic_clauses() {
        for scheme in EncodingScheme::ALL {
            assert_eq!(encode(&p("ok | 0"), scheme), p("ok | 0"));
            assert_eq!(encode(&p("new a. !ok"), scheme), p("new a. !ok"));
        }
    }

    #[test]
    fn output_is_asynchronous_and_preserves_free_names() {
        for src in ["x!y.x!y.0", "x(z).z!y.z(w).ok", "new a. !(a!x.0 | a(q).q!q.0)"] {
            for scheme in EncodingScheme::ALL {
                let e = encode(&p(src), scheme);
                assert!(e.is_asynchronous());
                assert_eq!(free_names(&e), free_names(&p(src)));
            }
        }
    }

    #[test]
    fn substitution_commutes() {
        let s = p("x(z).z!y.y!x.0");
        for scheme in EncodingScheme::ALL {
            let lhs = encode(&substitute(&s, &n("y"), &n("x")), scheme);
            let rhs = substitute(&encode(&s, scheme), &n("y"), &n("x"));
            assert!(alpha_eq(&lhs, &rhs));
        }
    }

    #[test]
    fn contexts_reproduce_the_encoding() {
        let enc = Encoder::from(EncodingScheme::Boudol);
        let ctx = enc.context_for(&Operator::Output(n("x"), n("y")), &[n("x"), n("y"), n("a")].into_iter().collect());
        assert_eq!(ctx.generated, vec![Name::Fresh(0), Name::Fresh(1)]);
        assert_eq!(ctx.plug(&[Process::Nil]), encode(&p("x!y.0"), EncodingScheme::Boudol));
        let ctx = Encoder::from(EncodingScheme::HondaTokoro).context_for(&Operator::Repl, &NameSet::new());
        assert_eq!(ctx.plug(&[p("ok")]), p("!ok"));
        for src in ["x!y.0", "x(z).z!x.0 | ok", "new x. x!y.0", "!x(z).0"] {
            for scheme in EncodingScheme::ALL {
                assert_eq!(compositional_at(&Encoder::from(scheme), &p(src)), (true, true), "{src}");
            }
        }
    }

    #[test]
    fn fixed_context_fill_avoids_capture() {
        let enc = Encoder::from(EncodingScheme::Boudol);
        let ctx = enc.fixed_context_for(&Operator::Output(n("x"), n("y")));
        let arg = Process::output(Name::Fresh(0), Name::Fresh(1), Process::Nil);
        let filled = ctx.fill(&[arg.clone()]);
        assert_eq!(free_names(&filled), free_names(&Process::output(n("x"), n("y"), arg)));
    }

    #[test]
    fn policy_is_identity() {
        assert_eq!(policy_image(&n("x"), RenamingPolicy::Identity), vec![n("x")]);
        assert_eq!(policy_image(&Name::Fresh(3), RenamingPolicy::Identity), vec![Name::Fresh(3)]);
        assert_ne!(policy_image(&n("a"), RenamingPolicy::Identity), policy_image(&n("b"), RenamingPolicy::Identity));
    }

    #[test]
    fn mutations_change_the_translation() {
        let s = p("x!y.0 | x(z).0");
        for scheme in EncodingScheme::ALL {
            let base = encode(&s, scheme);
            for m in Mutation::ALL {
                let e = Encoder::mutated(scheme, m).encode(&s);
                assert_ne!(e, base, "{scheme} {m:?}");
            }
        }
    }

    #[test]
    fn scheme_parsing() {
        assert_eq!("boudol".parse::<EncodingScheme>().unwrap(), EncodingScheme::Boudol);
        assert_eq!("HT".parse::<EncodingScheme>().unwrap(), EncodingScheme::HondaTokoro);
        assert!("pi".parse::<EncodingScheme>().is_err());
    }
}
