//! Counterexample search over table maps of a finite space.
//!
//! Targets are boolean expressions over condition ids plus two predicates on
//! the map itself: `FIXED` (the circle is a fixed circle) and `IDENTITY`.
//! Operators are `!`, `&`, `|` and parentheses, with the usual precedence;
//! `¬`, `∧` and `∨` are accepted as well.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circle::{is_fixed_circle, Circle};
use crate::conditions::{Checker, ConditionId};
use crate::error::{Error, Result};
use crate::map::SelfMap;
use crate::space::MetricSpace;
use crate::Settings;

pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Condition(ConditionId),
    Fixed,
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    Atom(Atom),
    Not(Box<Target>),
    And(Vec<Target>),
    Or(Vec<Target>),
}

impl Target {
    pub fn and(parts: Vec<Target>) -> Self {
        Target::And(parts)
    }


    pub fn cond(id: ConditionId) -> Self {
        Target::Atom(Atom::Condition(id))
    }

    fn eval(&self, ctx: &Eval<'_>) -> bool {
        match self {
            Target::Atom(Atom::Condition(id)) => ctx.checker.check(*id, ctx.circle).holds,
            Target::Atom(Atom::Fixed) => is_fixed_circle(ctx.space, ctx.checker.map(), ctx.circle, ctx.eps).holds,
            Target::Atom(Atom::Identity) => ctx.checker.map().is_identity_on(ctx.space, ctx.eps),
            Target::Not(t) => !t.eval(ctx),
            Target::And(ts) => ts.iter().all(|t| t.eval(ctx)),
            Target::Or(ts) => ts.iter().any(|t| t.eval(ctx)),
        }
    }
}

impl std::ops::Not for Target {
    type Output = Target;

    fn not(self) -> Target {
        Target::Not(Box::new(self))
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join(f: &mut fmt::Formatter<'_>, ts: &[Target], op: &str) -> fmt::Result {
            f.write_str("(")?;
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    f.write_str(op)?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")
        }
        match self {
            Target::Atom(Atom::Condition(id)) => write!(f, "{id}"),
            Target::Atom(Atom::Fixed) => f.write_str("FIXED"),
            Target::Atom(Atom::Identity) => f.write_str("IDENTITY"),
            Target::Not(t) => write!(f, "!{t}"),
            Target::And(ts) => join(f, ts, " & "),
            Target::Or(ts) => join(f, ts, " | "),
        }
    }
}

#[derive(Debug, PartialEq)]
enum Tok {
    Not,
    And,
    Or,
    Open,
    Close,
    Ident(String),
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = s.char_indices().peekable();
    while let Some((at, c)) = chars.next() {
        let tok = match c {
            c if c.is_whitespace() => continue,
            '!' | '¬' | '~' => Tok::Not,
            '&' | '∧' => {
                if c == '&' && chars.peek().is_some_and(|&(_, n)| n == '&') {
                    chars.next();
                }
                Tok::And
            }
            '|' | '∨' => {
                if c == '|' && chars.peek().is_some_and(|&(_, n)| n == '|') {
                    chars.next();
                }
                Tok::Or
            }
            '(' => Tok::Open,
            ')' => Tok::Close,
            c if c.is_ascii_alphanumeric() || c == '_' || c == '-' || c == '*' => {
                let mut id = String::from(c);
                while let Some(&(_, n)) = chars.peek() {
                    if n.is_ascii_alphanumeric() || n == '_' || n == '-' || n == '*' {
                        id.push(n);
                        chars.next();
                    } else {
                        break;
                    }
                }
                Tok::Ident(id)
            }
            other => {
                return Err(Error::Target {
                    offset: at,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((at, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(o, _)| *o)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Target {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.toks.get(self.pos).is_some_and(|(_, x)| x == t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<Target> {
        let mut parts = vec![self.and()?];
        while self.eat(&Tok::Or) {
            parts.push(self.and()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Target::Or(parts) })
    }

    fn and(&mut self) -> Result<Target> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::And) {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Target::And(parts) })
    }

    fn unary(&mut self) -> Result<Target> {
        if self.eat(&Tok::Not) {
            return Ok(!self.unary()?);
        }
        if self.eat(&Tok::Open) {
            let inner = self.or()?;
            if !self.eat(&Tok::Close) {
                return self.fail("expected `)`");
            }
            return Ok(inner);
        }
        let Some((_, Tok::Ident(id))) = self.toks.get(self.pos) else {
            return self.fail("expected a condition id, FIXED or IDENTITY");
        };
        let atom = match id.to_ascii_uppercase().as_str() {
            "FIXED" | "FIXED_CIRCLE" | "FIXED-CIRCLE" => Atom::Fixed,
            "IDENTITY" => Atom::Identity,
            _ => match id.parse::<ConditionId>() {
                Ok(c) => Atom::Condition(c),
                Err(_) => return self.fail(format!("unknown atom `{id}`")),
            },
        };
        self.pos += 1;
        Ok(Target::Atom(atom))
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            toks: tokenize(s)?,
            pos: 0,
            len: s.len(),
        };
        let t = p.or()?;
        if p.pos != p.toks.len() {
            return p.fail("trailing input");
        }
        Ok(t)
    }
}

struct Eval<'a> {
    space: &'a MetricSpace,
    circle: &'a Circle,
    checker: &'a Checker<'a>,
    eps: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SearchOutcome {
    Found {
        map: SelfMap,
        table: Vec<usize>,
        /// Position of the map in the search order.
        index: u64,
        exhaustive: bool,
    },
    Exhausted {
        evaluated: u64,
        exhaustive: bool,
    },
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }

    pub fn map(&self) -> Option<&SelfMap> {
        match self {
            SearchOutcome::Found { map, .. } => Some(map),
            SearchOutcome::Exhausted { .. } => None,
        }
    }

    pub fn is_exhaustive(&self) -> bool {
        match self {
            SearchOutcome::Found { exhaustive, .. } | SearchOutcome::Exhausted { exhaustive, .. } => *exhaustive,
        }
    }
}

/// The `index`-th table in lexicographic order with point 0 varying fastest.
pub fn table_at(n: usize, mut index: u64) -> Vec<usize> {
    let base = n as u64;
    (0..n)
        .map(|_| {
            let d = index % base;
            index /= base;
            d as usize
        })
        .collect()
}

/// `n^n` if it fits in a `u64`.
pub fn table_count(n: usize) -> Option<u64> {
    (n as u64).checked_pow(u32::try_from(n).ok()?)
}

/// The `index`-th random table for `seed`; independent of evaluation order.
pub fn random_table(n: usize, seed: u64, index: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..n).map(|_| rng.gen_range(0..n)).collect()
}

/// First table map (in search order) satisfying `target` for `circle`.
///
/// All `n^n` tables are tried in order when that fits in `budget`; otherwise
/// `budget` seeded random tables are drawn. The lowest-index hit wins in both
/// execution modes.
pub fn search_counterexample(
    space: &MetricSpace,
    circle: &Circle,
    target: &Target,
    budget: u64,
    seed: u64,
    settings: &Settings,
) -> Result<SearchOutcome> {
    if !space.is_finite() {
        return Err(Error::domain("search needs a finite carrier"));
    }
    let n = space.len();
    let total = table_count(n).filter(|&t| t <= budget);
    let exhaustive = total.is_some();
    let count = total.unwrap_or(budget);
    let table = |i: u64| if exhaustive { table_at(n, i) } else { random_table(n, seed, i) };
    let hits = |i: u64| {
        let map = SelfMap::table(space, table(i)).expect("tables in range");
        let checker = Checker::new(space, &map, *settings);
        let ctx = Eval {
            space,
            circle,
            checker: &checker,
            eps: settings.eps,
        };
        target.eval(&ctx)
    };
    Ok(match settings.exec.find_first(0..count, hits) {
        Some(index) => {
            let t = table(index);
            SearchOutcome::Found {
                map: SelfMap::table(space, t.clone())?,
                table: t,
                index,
                exhaustive,
            }
        }
        None => SearchOutcome::Exhausted {
            evaluated: count,
            exhaustive,
        },
    })
}
