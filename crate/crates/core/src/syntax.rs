//! Names, processes, binding, and capture-avoiding renaming.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// A channel name.
///
/// Names live in two disjoint spaces. `User` names are the only ones the
/// parser produces; `Fresh` names are reserved for the encoder, for
/// capture-avoiding renaming, and for α-canonical binders. Because the two
/// spaces never overlap, a freshly drawn name can never clash with anything
/// a user wrote.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Name {
    User(Arc<str>),
    Fresh(u32),
}

impl Name {
    pub fn user(s: &str) -> Self {
        Name::User(Arc::from(s))
    }

    pub fn is_fresh(&self) -> bool {
        matches!(self, Name::Fresh(_))
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Name::User(s) => f.write_str(s),
            Name::Fresh(k) => write!(f, "#{k}"),
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub type NameSet = BTreeSet<Name>;

/// A simultaneous renaming of free names. Names outside the domain map to
/// themselves.
pub type Renaming = BTreeMap<Name, Name>;

/// Least `Fresh` name not contained in `avoid`.
pub fn fresh_name(avoid: &NameSet) -> Name {
    let mut k = 0u32;
    // `Fresh` sorts after every `User` name, so the fresh part of the set is
    // a suffix and can be scanned in order.
    for n in avoid.range(Name::Fresh(0)..) {
        match n {
            Name::Fresh(j) if *j == k => k += 1,
            Name::Fresh(j) if *j > k => break,
            _ => {}
        }
    }
    Name::Fresh(k)
}

/// A term of the choice-free π-calculus extended with the success constant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Process {
    Nil,
    /// `subject!object.cont`
    Output(Name, Name, Box<Process>),
    /// `subject(binder).cont`
    Input(Name, Name, Box<Process>),
    Par(Box<Process>, Box<Process>),
    Restrict(Name, Box<Process>),
    Repl(Box<Process>),
    Success,
}

/// Constructor tally, used by invariants that talk about term shape.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ConstructorCounts {
    pub nil: usize,
    pub output: usize,
    pub input: usize,
    pub par: usize,
    pub restrict: usize,
    pub repl: usize,
    pub success: usize,
}

impl Process {
    pub fn output(subject: Name, object: Name, cont: Process) -> Self {
        Process::Output(subject, object, Box::new(cont))
    }

    pub fn input(subject: Name, binder: Name, cont: Process) -> Self {
        Process::Input(subject, binder, Box::new(cont))
    }

    pub fn par(left: Process, right: Process) -> Self {
        Process::Par(Box::new(left), Box::new(right))
    }

    pub fn restrict(binder: Name, body: Process) -> Self {
        Process::Restrict(binder, Box::new(body))
    }

    pub fn repl(body: Process) -> Self {
        Process::Repl(Box::new(body))
    }

    /// Right-nested parallel composition; `0` for an empty list.
    pub fn par_all<I>(items: I) -> Self
    where
        I: IntoIterator<Item = Process>,
        I::IntoIter: DoubleEndedIterator,
    {
        let mut it = items.into_iter().rev();
        match it.next() {
            None => Process::Nil,
            Some(last) => it.fold(last, |acc, p| Process::par(p, acc)),
        }
    }

    /// Wraps `body` in restrictions, the first name outermost.
    pub fn restrict_all<'a, I>(names: I, body: Process) -> Self
    where
        I: IntoIterator<Item = &'a Name>,
        I::IntoIter: DoubleEndedIterator,
    {
        names
            .into_iter()
            .rev()
            .fold(body, |acc, n| Process::restrict(n.clone(), acc))
    }

    /// Number of constructor nodes, not counting `0`.
    pub fn size(&self) -> usize {
        match self {
            Process::Nil => 0,
            Process::Success => 1,
            Process::Output(_, _, c) | Process::Input(_, _, c) => 1 + c.size(),
            Process::Restrict(_, b) | Process::Repl(b) => 1 + b.size(),
            Process::Par(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn counts(&self) -> ConstructorCounts {
        let mut c = ConstructorCounts::default();
        self.tally(&mut c);
        c
    }

    fn tally(&self, c: &mut ConstructorCounts) {
        match self {
            Process::Nil => c.nil += 1,
            Process::Success => c.success += 1,
            Process::Output(_, _, k) => {
                c.output += 1;
                k.tally(c);
            }
            Process::Input(_, _, k) => {
                c.input += 1;
                k.tally(c);
            }
            Process::Par(l, r) => {
                c.par += 1;
                l.tally(c);
                r.tally(c);
            }
            Process::Restrict(_, b) => {
                c.restrict += 1;
                b.tally(c);
            }
            Process::Repl(b) => {
                c.repl += 1;
                b.tally(c);
            }
        }
    }

    /// True iff every output prefix has continuation `0`.
    pub fn is_asynchronous(&self) -> bool {
        match self {
            Process::Nil | Process::Success => true,
            Process::Output(_, _, c) => **c == Process::Nil,
            Process::Input(_, _, c) | Process::Restrict(_, c) | Process::Repl(c) => {
                c.is_asynchronous()
            }
            Process::Par(l, r) => l.is_asynchronous() && r.is_asynchronous(),
        }
    }

    pub fn has_replication(&self) -> bool {
        match self {
            Process::Nil | Process::Success => false,
            Process::Repl(_) => true,
            Process::Output(_, _, c) | Process::Input(_, _, c) | Process::Restrict(_, c) => {
                c.has_replication()
            }
            Process::Par(l, r) => l.has_replication() || r.has_replication(),
        }
    }

    pub fn has_success_anywhere(&self) -> bool {
        match self {
            Process::Nil => false,
            Process::Success => true,
            Process::Output(_, _, c)
            | Process::Input(_, _, c)
            | Process::Restrict(_, c)
            | Process::Repl(c) => c.has_success_anywhere(),
            Process::Par(l, r) => l.has_success_anywhere() || r.has_success_anywhere(),
        }
    }
}

pub fn free_names(p: &Process) -> NameSet {
    let mut out = NameSet::new();
    collect_free(p, &mut out);
    out
}

fn collect_free(p: &Process, out: &mut NameSet) {
    match p {
        Process::Nil | Process::Success => {}
        Process::Output(x, y, c) => {
            out.insert(x.clone());
            out.insert(y.clone());
            collect_free(c, out);
        }
        Process::Input(x, z, c) => {
            out.insert(x.clone());
            let mut inner = free_names(c);
            inner.remove(z);
            out.extend(inner);
        }
        Process::Par(l, r) => {
            collect_free(l, out);
            collect_free(r, out);
        }
        Process::Restrict(z, b) => {
            let mut inner = free_names(b);
            inner.remove(z);
            out.extend(inner);
        }
        Process::Repl(b) => collect_free(b, out),
    }
}

pub fn is_free_in(n: &Name, p: &Process) -> bool {
    match p {
        Process::Nil | Process::Success => false,
        Process::Output(x, y, c) => x == n || y == n || is_free_in(n, c),
        Process::Input(x, z, c) => x == n || (z != n && is_free_in(n, c)),
        Process::Par(l, r) => is_free_in(n, l) || is_free_in(n, r),
        Process::Restrict(z, b) => z != n && is_free_in(n, b),
        Process::Repl(b) => is_free_in(n, b),
    }
}

pub fn bound_names(p: &Process) -> NameSet {
    let mut out = NameSet::new();
    collect_bound(p, &mut out);
    out
}

fn collect_bound(p: &Process, out: &mut NameSet) {
    match p {
        Process::Nil | Process::Success => {}
        Process::Output(_, _, c) | Process::Repl(c) => collect_bound(c, out),
        Process::Input(_, z, c) | Process::Restrict(z, c) => {
            out.insert(z.clone());
            collect_bound(c, out);
        }
        Process::Par(l, r) => {
            collect_bound(l, out);
            collect_bound(r, out);
        }
    }
}

/// Every name occurring in `p`, free or bound.
pub fn all_names(p: &Process) -> NameSet {
    let mut out = free_names(p);
    out.extend(bound_names(p));
    out
}

/// `p{y/z}`: replaces each free occurrence of `z` by `y`.
pub fn substitute(p: &Process, z: &Name, y: &Name) -> Process {
    if z == y {
        return p.clone();
    }
    let mut sigma = Renaming::new();
    sigma.insert(z.clone(), y.clone());
    apply_renaming(p, &sigma)
}

/// Simultaneous capture-avoiding renaming of free names.
///
/// A binder is renamed (to the least suitable `Fresh` name) only when it
/// would otherwise capture the image of some free name of its scope.
pub fn apply_renaming(p: &Process, sigma: &Renaming) -> Process {
    let sigma: Renaming = sigma
        .iter()
        .filter(|(k, v)| k != v)
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    if sigma.is_empty() {
        return p.clone();
    }
    rename(p, &sigma)
}

fn image<'a>(sigma: &'a Renaming, n: &'a Name) -> &'a Name {
    sigma.get(n).unwrap_or(n)
}

fn rename(p: &Process, sigma: &Renaming) -> Process {
    match p {
        Process::Nil => Process::Nil,
        Process::Success => Process::Success,
        Process::Output(x, y, c) => Process::output(
            image(sigma, x).clone(),
            image(sigma, y).clone(),
            rename(c, sigma),
        ),
        Process::Input(x, z, c) => {
            let (z2, c2) = rename_under_binder(z, c, sigma);
            Process::input(image(sigma, x).clone(), z2, c2)
        }
        Process::Par(l, r) => Process::par(rename(l, sigma), rename(r, sigma)),
        Process::Restrict(z, b) => {
            let (z2, b2) = rename_under_binder(z, b, sigma);
            Process::restrict(z2, b2)
        }
        Process::Repl(b) => Process::repl(rename(b, sigma)),
    }
}

fn rename_under_binder(binder: &Name, body: &Process, sigma: &Renaming) -> (Name, Process) {
    let body_free = free_names(body);
    let mut inner = Renaming::new();
    let mut images = NameSet::new();
    for n in body_free.iter().filter(|n| *n != binder) {
        if let Some(m) = sigma.get(n) {
            inner.insert(n.clone(), m.clone());
            images.insert(m.clone());
        } else {
            images.insert(n.clone());
        }
    }
    if !images.contains(binder) {
        let body = if inner.is_empty() {
            body.clone()
        } else {
            rename(body, &inner)
        };
        return (binder.clone(), body);
    }
    let mut avoid = images;
    avoid.extend(body_free);
    let fresh = fresh_name(&avoid);
    inner.insert(binder.clone(), fresh.clone());
    (fresh, rename(body, &inner))
}

/// Canonical representative of the α-class of `p`.
///
/// Binders are renamed to `Fresh` indices in left-to-right pre-order,
/// skipping any `Fresh` index that occurs free in `p`. Free names are left
/// untouched.
pub fn alpha_canonical(p: &Process) -> Process {
    let taken: BTreeSet<u32> = free_names(p)
        .into_iter()
        .filter_map(|n| match n {
            Name::Fresh(k) => Some(k),
            Name::User(_) => None,
        })
        .collect();
    let mut next = 0u32;
    let mut env: Vec<(Name, Name)> = Vec::new();
    canon(p, &mut env, &mut next, &taken)
}

fn lookup(env: &[(Name, Name)], n: &Name) -> Name {
    env.iter()
        .rev()
        .find(|(from, _)| from == n)
        .map(|(_, to)| to.clone())
        .unwrap_or_else(|| n.clone())
}

fn canon(
    p: &Process,
    env: &mut Vec<(Name, Name)>,
    next: &mut u32,
    taken: &BTreeSet<u32>,
) -> Process {
    let bind = |z: &Name, next: &mut u32| {
        while taken.contains(next) {
            *next += 1;
        }
        let n = Name::Fresh(*next);
        *next += 1;
        (z.clone(), n)
    };
    match p {
        Process::Nil => Process::Nil,
        Process::Success => Process::Success,
        Process::Output(x, y, c) => {
            Process::output(lookup(env, x), lookup(env, y), canon(c, env, next, taken))
        }
        Process::Input(x, z, c) => {
            let subject = lookup(env, x);
            let entry = bind(z, next);
            let binder = entry.1.clone();
            env.push(entry);
            let body = canon(c, env, next, taken);
            env.pop();
            Process::input(subject, binder, body)
        }
        Process::Restrict(z, b) => {
            let entry = bind(z, next);
            let binder = entry.1.clone();
            env.push(entry);
            let body = canon(b, env, next, taken);
            env.pop();
            Process::restrict(binder, body)
        }
        Process::Par(l, r) => {
            let l = canon(l, env, next, taken);
            let r = canon(r, env, next, taken);
            Process::par(l, r)
        }
        Process::Repl(b) => Process::repl(canon(b, env, next, taken)),
    }
}

pub fn alpha_eq(p: &Process, q: &Process) -> bool {
    p == q || alpha_canonical(p) == alpha_canonical(q)
}
