//! Concrete syntax.
//!
//! ```text
//! P ::= 0 | ok | x!y.P | x(z).P | P | P | new z. P | !P | (P)
//! ```
//!
//! `|` has the lowest precedence and associates to the left. Prefixes and
//! `!` bind tighter than `|`; the body of `new z.` extends as far right as
//! possible. `Fresh` names print as `#k` and are rejected by the parser.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::syntax::{Name, Process};
use crate::Error;

pub fn parse(src: &str) -> Result<Process, Error> {
    let tokens = lex(src)?;
    let mut parser = Parser { tokens, pos: 0 };
    let p = parser.par()?;
    match parser.peek() {
        Tok::Eof => Ok(p),
        _ => Err(parser.error("unexpected token after process")),
    }
}

/// Parses a bare name as written on the command line.
pub fn parse_name(src: &str) -> Result<Name, Error> {
    let tokens = lex(src)?;
    match tokens.as_slice() {
        [(Tok::Ident(s), _), (Tok::Eof, _)] => Ok(Name::user(s)),
        _ => Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("`{src}` is not a name"),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    Ok,
    New,
    Bang,
    Dot,
    Bar,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Zero => f.write_str("`0`"),
            Tok::Ok => f.write_str("`ok`"),
            Tok::New => f.write_str("`new`"),
            Tok::Bang => f.write_str("`!`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Bar => f.write_str("`|`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

type Pos = (usize, usize);

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, Error> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut col = 1;
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            chars.next();
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            chars.next();
            continue;
        }
        let single = match c {
            '!' => Some(Tok::Bang),
            '.' => Some(Tok::Dot),
            '|' => Some(Tok::Bar),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            col += 1;
            chars.next();
            continue;
        }
        if c == '#' {
            return Err(Error::Parse {
                line,
                column: col,
                message: "names of the form #k are reserved for generated names".into(),
            });
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_alphanumeric() && d != '_' {
                    break;
                }
                s.push(d);
                chars.next();
            }
            if s != "0" {
                return Err(Error::Parse {
                    line,
                    column: col,
                    message: format!("unexpected `{s}`; names must start with a letter"),
                });
            }
            col += 1;
            out.push((Tok::Zero, pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_' || d == '\'') {
                    break;
                }
                s.push(d);
                chars.next();
            }
            col += s.chars().count();
            let tok = match s.as_str() {
                "new" => Tok::New,
                "ok" => Tok::Ok,
                _ => Tok::Ident(s),
            };
            out.push((tok, pos));
            continue;
        }
        return Err(Error::Parse {
            line,
            column: col,
            message: format!("unexpected character `{c}`"),
        });
    }
    out.push((Tok::Eof, (line, col)));
    Ok(out)
}

struct Parser {
    tokens: Vec<(Tok, Pos)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].0.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: &str) -> Error {
        let (line, column) = self.tokens[self.pos].1;
        Error::Parse {
            line,
            column,
            message: format!("{message} (found {})", self.peek()),
        }
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), Error> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&format!("expected {what}")))
        }
    }

    fn name(&mut self) -> Result<Name, Error> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(Name::user(&s))
            }
            _ => Err(self.error("expected a name")),
        }
    }

    fn par(&mut self) -> Result<Process, Error> {
        let mut acc = self.atom()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.atom()?;
            acc = Process::par(acc, rhs);
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Process, Error> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Process::Nil)
            }
            Tok::Ok => {
                self.bump();
                Ok(Process::Success)
            }
            Tok::Bang => {
                self.bump();
                Ok(Process::repl(self.atom()?))
            }
            Tok::New => {
                self.bump();
                let z = self.name()?;
                self.expect(Tok::Dot, "`.` after the restricted name")?;
                Ok(Process::restrict(z, self.par()?))
            }
            Tok::LParen => {
                self.bump();
                let p = self.par()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            Tok::Ident(s) => {
                self.bump();
                let subject = Name::user(&s);
                match self.peek() {
                    Tok::Bang => {
                        self.bump();
                        let object = self.name()?;
                        self.expect(Tok::Dot, "`.` and a continuation (write `x!y.0`)")?;
                        Ok(Process::output(subject, object, self.atom()?))
                    }
                    Tok::LParen => {
                        self.bump();
                        let binder = self.name()?;
                        self.expect(Tok::RParen, "`)`")?;
                        self.expect(Tok::Dot, "`.` and a continuation (write `x(z).0`)")?;
                        Ok(Process::input(subject, binder, self.atom()?))
                    }
                    _ => Err(self.error("expected `!` or `(` after a channel name")),
                }
            }
            _ => Err(self.error("expected a process")),
        }
    }
}

/// Prints `p` in the concrete syntax with canonical spacing.
pub fn print(p: &Process) -> String {
    let mut out = String::new();
    write_proc(&mut out, p, false, false);
    out
}

// `tight`: the position only admits an atom, so `|` needs parentheses.
// `followed`: something at the enclosing `|` level follows on the right, so a
// `new` (whose scope would swallow it) needs parentheses.
fn write_proc(out: &mut String, p: &Process, tight: bool, followed: bool) {
    match p {
        Process::Nil => out.push('0'),
        Process::Success => out.push_str("ok"),
        Process::Output(x, y, c) => {
            out.push_str(&format!("{x}!{y}."));
            write_proc(out, c, true, followed);
        }
        Process::Input(x, z, c) => {
            out.push_str(&format!("{x}({z})."));
            write_proc(out, c, true, followed);
        }
        Process::Repl(b) => {
            out.push('!');
            write_proc(out, b, true, followed);
        }
        Process::Restrict(z, b) => {
            if followed {
                out.push('(');
            }
            out.push_str(&format!("new {z}. "));
            write_proc(out, b, true, false);
            if followed {
                out.push(')');
            }
        }
        Process::Par(l, r) => {
            if tight {
                out.push('(');
                write_proc(out, l, false, true);
                out.push_str(" | ");
                write_proc(out, r, true, false);
                out.push(')');
            } else {
                write_proc(out, l, false, true);
                out.push_str(" | ");
                write_proc(out, r, true, followed);
            }
        }
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

impl fmt::Debug for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print(self))
    }
}

impl Serialize for Process {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&print(self))
    }
}

impl Serialize for Name {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
