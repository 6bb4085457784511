//! Formulas and sequents of !^m ACTω, their concrete syntax, ranks and
//! {∗,!}-depth, and the Gödel numbering of sequents.
//!
//! Concrete grammar, loosest binding first:
//!
//! ```text
//! join    := meet ('|' join)?
//! meet    := prod ('&' meet)?
//! prod    := div ('.' prod)?
//! div     := prefix ('\' prefix)* | prefix ('/' prefix)*
//! prefix  := ('!' | '@') prefix | postfix
//! postfix := atom '*'*
//! atom    := name | '0' | '1' | '(' join ')'
//! ```
//!
//! `\` nests to the right and `/` to the left; mixing them without
//! parentheses is rejected. `@` is the ∇ modality. Sequents are written
//! `A, B |- C`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::ordinals::{prime_power_decode, Ordinal};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Prim(Arc<str>),
    Zero,
    One,
    /// `A\B`
    Under(Arc<Formula>, Arc<Formula>),
    /// `A/B`
    Over(Arc<Formula>, Arc<Formula>),
    Prod(Arc<Formula>, Arc<Formula>),
    Meet(Arc<Formula>, Arc<Formula>),
    Join(Arc<Formula>, Arc<Formula>),
    Bang(Arc<Formula>),
    Star(Arc<Formula>),
    Nabla(Arc<Formula>),
}

use Formula::*;

pub fn prim(name: &str) -> Formula {
    Prim(Arc::from(name))
}

/// `a\b`
pub fn under(a: Formula, b: Formula) -> Formula {
    Under(Arc::new(a), Arc::new(b))
}

/// `a/b`
pub fn over(a: Formula, b: Formula) -> Formula {
    Over(Arc::new(a), Arc::new(b))
}

pub fn prod(a: Formula, b: Formula) -> Formula {
    Prod(Arc::new(a), Arc::new(b))
}

pub fn meet(a: Formula, b: Formula) -> Formula {
    Meet(Arc::new(a), Arc::new(b))
}

pub fn join(a: Formula, b: Formula) -> Formula {
    Join(Arc::new(a), Arc::new(b))
}

pub fn bang(a: Formula) -> Formula {
    Bang(Arc::new(a))
}

pub fn star(a: Formula) -> Formula {
    Star(Arc::new(a))
}

pub fn nabla(a: Formula) -> Formula {
    Nabla(Arc::new(a))
}

/// `p_1\(p_2\(…\(p_n\b)))`
pub fn unders(ps: &[Formula], b: Formula) -> Formula {
    ps.iter().rev().fold(b, |acc, p| under(p.clone(), acc))
}

/// Right-nested product of a nonempty list.
pub fn prods(fs: &[Formula]) -> Formula {
    let (last, init) = fs.split_last().expect("empty product");
    init.iter().rev().fold(last.clone(), |acc, f| prod(f.clone(), acc))
}

/// Right-nested meet of a nonempty list.
pub fn meets(fs: &[Formula]) -> Formula {
    let (last, init) = fs.split_last().expect("empty meet");
    init.iter().rev().fold(last.clone(), |acc, f| meet(f.clone(), acc))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SugarKind {
    Query,
    Arrow,
    Okay,
}

/// `[B]?A = B\(B·A)`, `[B]→A = B\(A·B)`, `OKAY = okay\okay`.
pub fn sugar(kind: SugarKind, b: Option<&Formula>, a: Option<&Formula>) -> Formula {
    match kind {
        SugarKind::Query => {
            let (b, a) = (b.expect("query needs B").clone(), a.expect("query needs A").clone());
            under(b.clone(), prod(b, a))
        }
        SugarKind::Arrow => {
            let (b, a) = (b.expect("arrow needs B").clone(), a.expect("arrow needs A").clone());
            under(b.clone(), prod(a, b))
        }
        SugarKind::Okay => under(prim("okay"), prim("okay")),
    }
}

impl Formula {
    pub fn is_prim(&self) -> bool {
        matches!(self, Prim(_))
    }

    pub fn prim_name(&self) -> Option<&str> {
        match self {
            Prim(n) => Some(n),
            _ => None,
        }
    }

    /// Number of connective and constant nodes.
    pub fn size(&self) -> usize {
        match self {
            Prim(_) => 0,
            Zero | One => 1,
            Under(a, b) | Over(a, b) | Prod(a, b) | Meet(a, b) | Join(a, b) => 1 + a.size() + b.size(),
            Bang(a) | Star(a) | Nabla(a) => 1 + a.size(),
        }
    }

    pub fn rank(&self) -> Ordinal {
        match self {
            Prim(_) | Zero | One => Ordinal::nat(1),
            Under(a, b) | Over(a, b) | Prod(a, b) | Meet(a, b) | Join(a, b) => a.rank().hsum(&b.rank()).succ(),
            Bang(a) | Star(a) => a.rank().mul_omega().succ(),
            Nabla(a) => a.rank().succ(),
        }
    }

    /// The `k` with `ω^k ≤ ρ(A) < ω^(k+1)`.
    pub fn depth(&self) -> usize {
        self.rank().degree().unwrap_or(0)
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Prim(_) | Zero | One => vec![],
            Under(a, b) | Over(a, b) | Prod(a, b) | Meet(a, b) | Join(a, b) => vec![a, b],
            Bang(a) | Star(a) | Nabla(a) => vec![a],
        }
    }

    pub fn any_sub(&self, pred: &dyn Fn(&Formula) -> bool) -> bool {
        pred(self) || self.children().into_iter().any(|c| c.any_sub(pred))
    }

    fn star_under_bang(&self) -> bool {
        match self {
            Bang(a) => a.any_sub(&|f| matches!(f, Star(_))) || a.star_under_bang(),
            _ => self.children().into_iter().any(Formula::star_under_bang),
        }
    }

    /// Membership in `Fm^(k)`, optionally without a star inside a bang.
    pub fn in_fragment(&self, k: usize, minus: bool) -> bool {
        self.depth() <= k && !(minus && self.star_under_bang())
    }

    pub fn atoms(&self, out: &mut Vec<Arc<str>>) {
        if let Prim(n) = self {
            if !out.contains(n) {
                out.push(n.clone());
            }
        }
        for c in self.children() {
            c.atoms(out);
        }
    }

    fn level(&self) -> u8 {
        match self {
            Prim(_) | Zero | One => 6,
            Star(_) => 5,
            Bang(_) | Nabla(_) => 4,
            Under(..) | Over(..) => 3,
            Prod(..) => 2,
            Meet(..) => 1,
            Join(..) => 0,
        }
    }
}

pub(crate) fn write_formula(
    f: &mut dyn fmt::Write,
    x: &Formula,
    names: &dyn Fn(&Formula) -> Option<String>,
) -> fmt::Result {
    if let Some(n) = names(x) {
        return f.write_str(&n);
    }
    let sub = |f: &mut dyn fmt::Write, y: &Formula, paren: bool| -> fmt::Result {
        let named = names(y).is_some();
        if paren && !named {
            f.write_char('(')?;
            write_formula(f, y, names)?;
            f.write_char(')')
        } else {
            write_formula(f, y, names)
        }
    };
    match x {
        Prim(n) => f.write_str(n),
        Zero => f.write_char('0'),
        One => f.write_char('1'),
        Star(a) => {
            sub(f, a, a.level() < 5)?;
            f.write_char('*')
        }
        Bang(a) | Nabla(a) => {
            f.write_char(if matches!(x, Bang(_)) { '!' } else { '@' })?;
            sub(f, a, a.level() < 4)
        }
        Under(a, b) => {
            sub(f, a, a.level() < 4)?;
            f.write_char('\\')?;
            sub(f, b, !(matches!(**b, Under(..)) || b.level() >= 4))
        }
        Over(a, b) => {
            sub(f, a, !(matches!(**a, Over(..)) || a.level() >= 4))?;
            f.write_char('/')?;
            sub(f, b, b.level() < 4)
        }
        Prod(a, b) => {
            sub(f, a, a.level() < 3)?;
            f.write_char('.')?;
            sub(f, b, b.level() < 2)
        }
        Meet(a, b) => {
            sub(f, a, a.level() < 2)?;
            f.write_str(" & ")?;
            sub(f, b, b.level() < 1)
        }
        Join(a, b) => {
            sub(f, a, a.level() < 1)?;
            f.write_str(" | ")?;
            sub(f, b, false)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, &|_| None)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        let f = p.join()?;
        p.end()?;
        Ok(f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub ant: Vec<Formula>,
    pub succ: Formula,
}

impl Sequent {
    pub fn new(ant: Vec<Formula>, succ: Formula) -> Self {
        Sequent { ant, succ }
    }

    pub fn rank(&self) -> Ordinal {
        self.ant.iter().chain(std::iter::once(&self.succ)).fold(Ordinal::zero(), |acc, f| acc.hsum(&f.rank()))
    }

    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.ant.iter().chain(std::iter::once(&self.succ))
    }

    pub fn size(&self) -> usize {
        self.formulas().map(Formula::size).sum()
    }

    pub fn in_fragment(&self, k: usize, minus: bool) -> bool {
        self.formulas().all(|f| f.in_fragment(k, minus))
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.ant.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        if !self.ant.is_empty() {
            f.write_char(' ')?;
        }
        write!(f, "|- {}", self.succ)
    }
}

use std::fmt::Write as _;

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl FromStr for Sequent {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        let mut ant = Vec::new();
        if !p.peek_turnstile() {
            ant.push(p.join()?);
            while p.eat(",") {
                ant.push(p.join()?);
            }
        }
        if !p.eat("|-") && !p.eat("⊢") {
            return Err(p.err("expected '|-'"));
        }
        let succ = p.join()?;
        p.end()?;
        Ok(Sequent::new(ant, succ))
    }
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    text.parse()
}

pub fn print_sequent(s: &Sequent) -> String {
    s.to_string()
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError { pos: self.pos, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn rest(&mut self) -> &'a str {
        self.ws();
        &self.src[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn peek_turnstile(&mut self) -> bool {
        let r = self.rest();
        r.starts_with("|-") || r.starts_with('⊢')
    }

    fn end(&mut self) -> Result<(), ParseError> {
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.err("unexpected trailing input"))
        }
    }

    fn join(&mut self) -> Result<Formula, ParseError> {
        let a = self.meet()?;
        if !self.peek_turnstile() && self.eat("|") {
            return Ok(join(a, self.join()?));
        }
        Ok(a)
    }

    fn meet(&mut self) -> Result<Formula, ParseError> {
        let a = self.prod()?;
        if self.eat("&") {
            return Ok(meet(a, self.meet()?));
        }
        Ok(a)
    }

    fn prod(&mut self) -> Result<Formula, ParseError> {
        let a = self.div()?;
        if self.eat(".") {
            return Ok(prod(a, self.prod()?));
        }
        Ok(a)
    }

    fn div(&mut self) -> Result<Formula, ParseError> {
        let first = self.prefix()?;
        let mut ops = Vec::new();
        let mut args = vec![first];
        loop {
            let op = if self.eat("\\") {
                '\\'
            } else if self.eat("/") {
                '/'
            } else {
                break;
            };
            if ops.last().is_some_and(|&o| o != op) {
                return Err(self.err("mixing '\\' and '/' needs parentheses"));
            }
            ops.push(op);
            args.push(self.prefix()?);
        }
        Ok(match ops.first() {
            None => args.pop().unwrap(),
            Some('\\') => {
                let last = args.pop().unwrap();
                args.into_iter().rev().fold(last, |acc, a| under(a, acc))
            }
            Some(_) => {
                let mut it = args.into_iter();
                let head = it.next().unwrap();
                it.fold(head, over)
            }
        })
    }

    fn prefix(&mut self) -> Result<Formula, ParseError> {
        if self.eat("!") {
            return Ok(bang(self.prefix()?));
        }
        if self.eat("@") || self.eat("∇") {
            return Ok(nabla(self.prefix()?));
        }
        let mut a = self.atom()?;
        while self.eat("*") {
            a = star(a);
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        if self.eat("(") {
            let f = self.join()?;
            if !self.eat(")") {
                return Err(self.err("expected ')'"));
            }
            return Ok(f);
        }
        let r = self.rest();
        let Some(c) = r.chars().next() else {
            return Err(self.err("unexpected end of input"));
        };
        match c {
            '0' => {
                self.pos += 1;
                Ok(Zero)
            }
            '1' => {
                self.pos += 1;
                Ok(One)
            }
            'a'..='z' | 'A'..='Z' => {
                let len = r.find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(r.len());
                self.pos += len;
                Ok(prim(&r[..len]))
            }
            _ => Err(self.err(&format!("unexpected character {c:?}"))),
        }
    }
}

/// Gödel number of a sequent: with `b_1 … b_n` the bytes of its printed form,
/// `2^n · 3^{b_1} · … · p_{n+1}^{b_n}`. Printing is canonical, so the map is
/// injective, and 0 is never a code.
pub fn goedel_encode(s: &Sequent) -> BigUint {
    let text = s.to_string();
    let mut entries = vec![text.len() as u64];
    entries.extend(text.bytes().map(u64::from));
    crate::ordinals::prime_power_code(&entries)
}

pub fn goedel_decode(code: &BigUint) -> Option<Sequent> {
    if code.is_zero() {
        return None;
    }
    let entries = prime_power_decode(code)?;
    let (&n, bytes) = entries.split_first()?;
    let mut bytes: Vec<u64> = bytes.to_vec();
    if (bytes.len() as u64) > n {
        return None;
    }
    bytes.resize(n as usize, 0);
    let raw: Vec<u8> = bytes.iter().map(|&b| u8::try_from(b).ok()).collect::<Option<_>>()?;
    let text = String::from_utf8(raw).ok()?;
    let s: Sequent = text.parse().ok()?;
    (s.to_string() == text).then_some(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn parses_examples() {
        let s: Sequent = "p, p\\q |- q".parse().unwrap();
        assert_eq!(s, Sequent::new(vec![prim("p"), under(prim("p"), prim("q"))], prim("q")));
        let s: Sequent = "|- p*".parse().unwrap();
        assert_eq!(s, Sequent::new(vec![], star(prim("p"))));
        assert_eq!(f("a\\b\\c"), under(prim("a"), under(prim("b"), prim("c"))));
        assert_eq!(f("a/b/c"), over(over(prim("a"), prim("b")), prim("c")));
        assert!("a\\b/c".parse::<Formula>().is_err());
        assert_eq!(f("!p*"), bang(star(prim("p"))));
    }

    #[test]
    fn syntax_error_carries_position() {
        let e = "p, q |- (r".parse::<Sequent>().unwrap_err();
        assert_eq!(e.pos, 10);
    }

    #[test]
    fn prints_canonically() {
        for text in [
            "(a\\b)\\c",
            "a/(b/c)",
            "(a.b).c",
            "a.b.c",
            "!(p & q*)",
            "(!p & q)*",
            "@a\\b",
            "(a | b) & c",
            "a | b & c",
            "p\\(q/r)",
            "0 & 1",
        ] {
            let x = f(text);
            assert_eq!(f(&x.to_string()), x, "{text}");
        }
        assert_eq!(f("a.(b.c)").to_string(), "a.b.c");
        assert_eq!(Sequent::new(vec![], prim("p")).to_string(), "|- p");
    }

    #[test]
    fn ranks() {
        assert_eq!(f("p").rank(), Ordinal::nat(1));
        assert_eq!(f("p.q").rank(), Ordinal::nat(3));
        assert_eq!("p.q |- p.q".parse::<Sequent>().unwrap().rank(), Ordinal::nat(6));
        assert_eq!(f("p*").rank().to_string(), "w+1");
        assert_eq!(f("!p").rank().to_string(), "w+1");
        assert_eq!(f("@p").rank(), Ordinal::nat(2));
        assert_eq!("p* |- p*".parse::<Sequent>().unwrap().rank().to_string(), "w*2+2");
    }

    #[test]
    fn depths_and_fragments() {
        assert_eq!(f("!(p & q*)").depth(), 2);
        assert_eq!(f("!p & q*").depth(), 1);
        assert_eq!(f("p\\q").depth(), 0);
        assert!(!f("!(p & q*)").in_fragment(5, true));
        assert!(f("(!p & q)*").in_fragment(5, true));
        assert!("p, p\\q |- q".parse::<Sequent>().unwrap().in_fragment(0, true));
    }

    #[test]
    fn sugar_forms() {
        let go = prim("go");
        assert_eq!(sugar(SugarKind::Query, Some(&go), Some(&prim("x"))), f("go\\(go.x)"));
        assert_eq!(sugar(SugarKind::Arrow, Some(&go), Some(&prim("a_2"))), f("go\\(a_2.go)"));
        assert_eq!(sugar(SugarKind::Okay, None, None), f("okay\\okay"));
    }

    #[test]
    fn goedel_round_trip() {
        let s: Sequent = "p |- p".parse().unwrap();
        assert_eq!(goedel_decode(&goedel_encode(&s)), Some(s));
        assert_eq!(goedel_decode(&BigUint::zero()), None);
        assert_eq!(goedel_decode(&BigUint::from(7u32)), None);
    }
}
