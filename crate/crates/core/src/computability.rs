//! Machine numbering, the `Halt` predicate, quantifier-free arithmetic and
//! computable infinitary formulas below `ω^ω` with a three-valued bounded
//! satisfaction check.
//!
//! Machines are numbered by the tuple code of a flat description
//! `[nq, ng, q0, qa, (q, a, r, b, mv)*]`. Tape symbol `0` is the blank, `1` and
//! `2` are the digits `0` and `1`; moves are `0 = N`, `1 = L`, `2 = R`. Any
//! number that does not decode to a well-formed description denotes a
//! machine that never halts. Input `n` is written in binary, most significant
//! bit first, with `0` as the empty string; the head starts on the last digit.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use crate::ordinals::{Ordinal, PolyNotation, TupleCode};
use crate::rewriting::{sym, Move, Run, Sym, Transition, TuringMachine};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComputabilityError {
    #[error("formula has {expected} free variables but {got} values were given")]
    Arity { expected: u64, got: usize },
    #[error("{0} is not a quantifier-free formula number for this arity")]
    InvalidQf(BigUint),
    #[error("malformed index: {0}")]
    Index(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A machine in flat form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatMachine {
    pub nq: u64,
    pub ng: u64,
    pub q0: u64,
    pub qa: u64,
    pub delta: Vec<[u64; 5]>,
}

impl FlatMachine {
    pub fn code(&self) -> BigUint {
        let mut v = vec![self.nq, self.ng, self.q0, self.qa];
        v.extend(self.delta.iter().flatten());
        TupleCode::encode_u64(&v)
    }

    pub fn decode(e: &BigUint) -> Option<Self> {
        let v = TupleCode::decode_u64(e)?;
        if v.len() < 4 || (v.len() - 4) % 5 != 0 {
            return None;
        }
        let m = FlatMachine {
            nq: v[0],
            ng: v[1],
            q0: v[2],
            qa: v[3],
            delta: v[4..].chunks(5).map(|c| [c[0], c[1], c[2], c[3], c[4]]).collect(),
        };
        let ok = m.nq >= 2
            && m.ng >= 3
            && m.q0 < m.nq
            && m.qa < m.nq
            && m.q0 != m.qa
            && m.delta
                .iter()
                .all(|&[q, a, r, b, mv]| q < m.nq && r < m.nq && a < m.ng && b < m.ng && mv <= 2 && q != m.qa);
        ok.then_some(m)
    }

    pub fn to_tm(&self) -> TuringMachine {
        let st = |q: u64| sym(&format!("q{q}"));
        TuringMachine {
            states: (0..self.nq).map(st).collect(),
            tape: (0..self.ng).map(tape_sym).collect(),
            input: vec![sym("0"), sym("1")],
            output: vec![sym("0"), sym("1")],
            blank: tape_sym(0),
            delta: self
                .delta
                .iter()
                .map(|&[q, a, r, b, mv]| Transition {
                    q: st(q),
                    a: tape_sym(a),
                    r: st(r),
                    b: tape_sym(b),
                    mv: [Move::N, Move::L, Move::R][mv as usize],
                })
                .collect(),
            q0: st(self.q0),
            qa: st(self.qa),
        }
    }

    /// The exact domain when it is finite and certifiable: every transition
    /// moves left (or stays put into the accepting state), the state graph is
    /// acyclic, and every accepting path reads past the input. Such a
    /// machine halts on each input within `nq` steps.
    pub fn certified_domain(&self) -> Option<BTreeSet<BigUint>> {
        for &[q, _, r, _, mv] in &self.delta {
            let forward = mv == 1 || (mv == 0 && r == self.qa);
            if !forward || r <= q && r != self.qa {
                // States are required to increase along transitions, which
                // keeps the graph acyclic.
                return None;
            }
        }
        let mut out = BTreeSet::new();
        let mut stack: Vec<(u64, Vec<u8>, bool)> = vec![(self.q0, vec![], false)];
        while let Some((q, read, past)) = stack.pop() {
            if q == self.qa {
                if !past {
                    return None;
                }
                if let Some(n) = bits_value(&read) {
                    out.insert(n);
                }
                continue;
            }
            for &[tq, a, r, _, mv] in &self.delta {
                if tq != q {
                    continue;
                }
                if self.first_match(q, a) != Some((r, mv)) {
                    continue;
                }
                match (a, past) {
                    (0, _) => stack.push((r, read.clone(), true)),
                    (1 | 2, false) => {
                        let mut v = read.clone();
                        v.push((a - 1) as u8);
                        if mv == 0 {
                            // Stopping on a digit accepts every extension.
                            return None;
                        }
                        stack.push((r, v, false));
                    }
                    _ => {}
                }
            }
        }
        Some(out)
    }

    fn first_match(&self, q: u64, a: u64) -> Option<(u64, u64)> {
        self.delta.iter().find(|t| t[0] == q && t[1] == a).map(|t| (t[2], t[4]))
    }
}

/// Value of a digit string read least significant bit first; `None` for a
/// string with a leading zero (not the binary form of any number).
fn bits_value(lsb_first: &[u8]) -> Option<BigUint> {
    if lsb_first.last() == Some(&0) {
        return None;
    }
    let mut n = BigUint::zero();
    for &b in lsb_first.iter().rev() {
        n = (n << 1u32) + BigUint::from(b);
    }
    Some(n)
}

fn tape_sym(a: u64) -> Sym {
    match a {
        0 => sym("_"),
        1 => sym("0"),
        2 => sym("1"),
        k => sym(&format!("s{k}")),
    }
}

pub fn binary_input(n: &BigUint) -> Vec<Sym> {
    if n.is_zero() {
        return vec![];
    }
    n.to_str_radix(2).chars().map(|c| sym(&c.to_string())).collect()
}

/// `Halt(n, e, y)`: machine `e` on input `n` reaches its accepting state in at
/// most `y` steps.
pub fn halt(n: &BigUint, e: &BigUint, y: usize) -> bool {
    match FlatMachine::decode(e) {
        Some(m) => halts(&m.to_tm(), n, y),
        None => false,
    }
}

/// The least `y ≤ max` with `Halt(n, e, y)`.
pub fn halt_time(n: &BigUint, e: &BigUint, max: usize) -> Option<usize> {
    let tm = FlatMachine::decode(e)?.to_tm();
    match tm.run(&binary_input(n), max) {
        Run::Accepted { steps, .. } => Some(steps.max(1)),
        _ => None,
    }
}

fn halts(tm: &TuringMachine, n: &BigUint, y: usize) -> bool {
    y > 0 && matches!(tm.run(&binary_input(n), y), Run::Accepted { .. })
}

/// `{n ≤ bound : ∃ y ≤ steps. Halt(n, e, y)}`.
pub fn enumerate_we(e: &BigUint, steps: usize, bound: u64) -> BTreeSet<BigUint> {
    let Some(m) = FlatMachine::decode(e) else {
        return BTreeSet::new();
    };
    let tm = m.to_tm();
    (0..=bound).map(BigUint::from).filter(|n| halts(&tm, n, steps)).collect()
}

/// Hand-built machines with known behaviour.
pub mod toys {
    use super::*;

    /// Accepts exactly the given numbers: a trie over their binary digits,
    /// read from the least significant end while moving left.
    pub fn finite_set(members: &[BigUint]) -> FlatMachine {
        // State 0 is the root, 1 accepts; trie nodes follow in creation order.
        let mut children: Vec<[Option<u64>; 2]> = vec![[None, None], [None, None]];
        let mut ends: Vec<bool> = vec![false, false];
        for m in members {
            let mut node = 0usize;
            let digits: Vec<u8> =
                if m.is_zero() { vec![] } else { m.to_str_radix(2).bytes().rev().map(|b| b - b'0').collect() };
            for d in digits {
                node = match children[node][d as usize] {
                    Some(c) => c as usize,
                    None => {
                        children.push([None, None]);
                        ends.push(false);
                        let c = children.len() - 1;
                        children[node][d as usize] = Some(c as u64);
                        c
                    }
                };
            }
            ends[node] = true;
        }
        let mut delta = Vec::new();
        for (q, ch) in children.iter().enumerate() {
            for (d, c) in ch.iter().enumerate() {
                if let Some(c) = c {
                    delta.push([q as u64, d as u64 + 1, *c, d as u64 + 1, 1]);
                }
            }
            if ends[q] {
                delta.push([q as u64, 0, 1, 0, 0]);
            }
        }
        FlatMachine { nq: children.len() as u64, ng: 3, q0: 0, qa: 1, delta }
    }

    /// Accepts even numbers (zero included) by inspecting the last digit.
    pub fn evens() -> FlatMachine {
        FlatMachine { nq: 2, ng: 3, q0: 0, qa: 1, delta: vec![[0, 1, 1, 1, 0], [0, 0, 1, 0, 0]] }
    }

    /// Accepts every input in one step.
    pub fn immediate() -> FlatMachine {
        FlatMachine { nq: 2, ng: 3, q0: 0, qa: 1, delta: vec![[0, 0, 1, 0, 0], [0, 1, 1, 1, 0], [0, 2, 1, 2, 0]] }
    }

    /// Moves left forever.
    pub fn diverging() -> FlatMachine {
        FlatMachine { nq: 2, ng: 3, q0: 0, qa: 1, delta: vec![[0, 0, 0, 0, 1], [0, 1, 0, 1, 1], [0, 2, 0, 2, 1]] }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Zero,
    One,
    /// 1-based variable index.
    Var(u64),
    Num(u64),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Qf {
    Eq(Term, Term),
    Lt(Term, Term),
    Not(Box<Qf>),
    And(Box<Qf>, Box<Qf>),
    Or(Box<Qf>, Box<Qf>),
}

const T_ZERO: u64 = 0;
const T_ONE: u64 = 1;
const T_ADD: u64 = 2;
const T_MUL: u64 = 3;
const T_EQ: u64 = 4;
const T_LT: u64 = 5;
const T_NOT: u64 = 6;
const T_AND: u64 = 7;
const T_OR: u64 = 8;
const T_VAR: u64 = 9;

impl Term {
    pub fn eval(&self, a: &[u64]) -> BigUint {
        match self {
            Term::Zero => BigUint::zero(),
            Term::One => BigUint::one(),
            Term::Var(j) => BigUint::from(a[*j as usize - 1]),
            Term::Num(n) => BigUint::from(*n),
            Term::Add(x, y) => x.eval(a) + y.eval(a),
            Term::Mul(x, y) => x.eval(a) * y.eval(a),
        }
    }

    fn max_var(&self) -> u64 {
        match self {
            Term::Var(j) => *j,
            Term::Add(x, y) | Term::Mul(x, y) => x.max_var().max(y.max_var()),
            _ => 0,
        }
    }

    fn tokens(&self, out: &mut Vec<u64>) {
        match self {
            Term::Zero => out.push(T_ZERO),
            Term::One => out.push(T_ONE),
            Term::Var(j) => out.push(T_VAR + j - 1),
            Term::Num(n) => numeral(*n).tokens(out),
            Term::Add(x, y) => {
                out.push(T_ADD);
                x.tokens(out);
                y.tokens(out);
            }
            Term::Mul(x, y) => {
                out.push(T_MUL);
                x.tokens(out);
                y.tokens(out);
            }
        }
    }

    /// The value if the term is built from `1` and `+` only.
    fn as_numeral(&self) -> Option<u64> {
        match self {
            Term::One => Some(1),
            Term::Num(n) => Some(*n),
            Term::Add(x, y) => x.as_numeral()?.checked_add(y.as_numeral()?),
            _ => None,
        }
    }
}

/// `n` as a balanced sum of ones.
fn numeral(n: u64) -> Term {
    match n {
        0 => Term::Zero,
        1 => Term::One,
        _ => Term::Add(Box::new(numeral(n - n / 2)), Box::new(numeral(n / 2))),
    }
}

impl Qf {
    pub fn eval(&self, a: &[u64]) -> bool {
        match self {
            Qf::Eq(x, y) => x.eval(a) == y.eval(a),
            Qf::Lt(x, y) => x.eval(a) < y.eval(a),
            Qf::Not(p) => !p.eval(a),
            Qf::And(p, q) => p.eval(a) && q.eval(a),
            Qf::Or(p, q) => p.eval(a) || q.eval(a),
        }
    }

    pub fn max_var(&self) -> u64 {
        match self {
            Qf::Eq(x, y) | Qf::Lt(x, y) => x.max_var().max(y.max_var()),
            Qf::Not(p) => p.max_var(),
            Qf::And(p, q) | Qf::Or(p, q) => p.max_var().max(q.max_var()),
        }
    }

    /// The formula's number: the tuple code of its Polish-notation token
    /// list, numerals expanded into sums of `1`. The same numbering serves
    /// every arity; arity only restricts which variables may occur.
    pub fn number(&self) -> BigUint {
        let mut t = Vec::new();
        self.tokens(&mut t);
        TupleCode::encode_u64(&t)
    }

    fn tokens(&self, out: &mut Vec<u64>) {
        let (op, kids): (u64, Vec<&dyn Tok>) = match self {
            Qf::Eq(x, y) => (T_EQ, vec![x, y]),
            Qf::Lt(x, y) => (T_LT, vec![x, y]),
            Qf::Not(p) => (T_NOT, vec![&**p]),
            Qf::And(p, q) => (T_AND, vec![&**p, &**q]),
            Qf::Or(p, q) => (T_OR, vec![&**p, &**q]),
        };
        out.push(op);
        for k in kids {
            k.push_tokens(out);
        }
    }

    pub fn from_number(c: &BigUint, arity: u64) -> Option<Qf> {
        let toks = TupleCode::decode_u64(c)?;
        let mut pos = 0;
        let f = parse_qf_tokens(&toks, &mut pos)?;
        (pos == toks.len() && f.max_var() <= arity).then_some(f)
    }

    pub fn negate(self) -> Qf {
        Qf::Not(Box::new(self))
    }
}

trait Tok {
    fn push_tokens(&self, out: &mut Vec<u64>);
}

impl Tok for Term {
    fn push_tokens(&self, out: &mut Vec<u64>) {
        self.tokens(out)
    }
}

impl Tok for Qf {
    fn push_tokens(&self, out: &mut Vec<u64>) {
        self.tokens(out)
    }
}

fn parse_term_tokens(t: &[u64], pos: &mut usize) -> Option<Term> {
    let tok = *t.get(*pos)?;
    *pos += 1;
    Some(match tok {
        T_ZERO => Term::Zero,
        T_ONE => Term::One,
        T_ADD => Term::Add(Box::new(parse_term_tokens(t, pos)?), Box::new(parse_term_tokens(t, pos)?)),
        T_MUL => Term::Mul(Box::new(parse_term_tokens(t, pos)?), Box::new(parse_term_tokens(t, pos)?)),
        v if v >= T_VAR => Term::Var(v - T_VAR + 1),
        _ => return None,
    })
}

fn parse_qf_tokens(t: &[u64], pos: &mut usize) -> Option<Qf> {
    let tok = *t.get(*pos)?;
    *pos += 1;
    Some(match tok {
        T_EQ => Qf::Eq(parse_term_tokens(t, pos)?, parse_term_tokens(t, pos)?),
        T_LT => Qf::Lt(parse_term_tokens(t, pos)?, parse_term_tokens(t, pos)?),
        T_NOT => Qf::Not(Box::new(parse_qf_tokens(t, pos)?)),
        T_AND => Qf::And(Box::new(parse_qf_tokens(t, pos)?), Box::new(parse_qf_tokens(t, pos)?)),
        T_OR => Qf::Or(Box::new(parse_qf_tokens(t, pos)?), Box::new(parse_qf_tokens(t, pos)?)),
        _ => return None,
    })
}

/// Truth of formula number `c` (arity `i`) under `a`.
pub fn qf_eval(c: &BigUint, i: u64, a: &[u64]) -> Result<bool, ComputabilityError> {
    if a.len() as u64 != i {
        return Err(ComputabilityError::Arity { expected: i, got: a.len() });
    }
    let f = Qf::from_number(c, i).ok_or_else(|| ComputabilityError::InvalidQf(c.clone()))?;
    Ok(f.eval(a))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_numeral() {
            return write!(f, "{n}");
        }
        match self {
            Term::Zero => f.write_str("0"),
            Term::Var(j) => write!(f, "x{j}"),
            Term::Add(x, y) => write!(f, "{x}+{y}"),
            Term::Mul(x, y) => {
                let wrap = |t: &Term| match t {
                    Term::Add(..) if t.as_numeral().is_none() => format!("({t})"),
                    _ => t.to_string(),
                };
                write!(f, "{}*{}", wrap(x), wrap(y))
            }
            Term::One | Term::Num(_) => unreachable!("numerals handled above"),
        }
    }
}

impl fmt::Display for Qf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |q: &Qf| match q {
            Qf::And(..) | Qf::Or(..) => format!("({q})"),
            _ => q.to_string(),
        };
        match self {
            Qf::Eq(x, y) => write!(f, "{x}={y}"),
            Qf::Lt(x, y) => write!(f, "{x}<{y}"),
            Qf::Not(p) => write!(f, "~{}", wrap(p)),
            Qf::And(p, q) => write!(f, "{} & {}", wrap(p), wrap(q)),
            Qf::Or(p, q) => write!(f, "{} | {}", wrap(p), wrap(q)),
        }
    }
}

impl FromStr for Qf {
    type Err = ComputabilityError;

    /// `x1+1=2`, `x1<x2 & ~(x2=0)`, `(x1 = 0 | x1 = 1)`; `&` binds tighter than `|`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = QfParser { s: s.as_bytes(), pos: 0 };
        let f = p.disj()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(f)
    }
}

struct QfParser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl QfParser<'_> {
    fn err(&self, msg: &str) -> ComputabilityError {
        ComputabilityError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn ws(&mut self) {
        while self.s.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.ws();
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn disj(&mut self) -> Result<Qf, ComputabilityError> {
        let mut f = self.conj()?;
        while self.eat(b'|') {
            f = Qf::Or(Box::new(f), Box::new(self.conj()?));
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Qf, ComputabilityError> {
        let mut f = self.neg()?;
        while self.eat(b'&') {
            f = Qf::And(Box::new(f), Box::new(self.neg()?));
        }
        Ok(f)
    }

    fn neg(&mut self) -> Result<Qf, ComputabilityError> {
        if self.eat(b'~') || self.eat(b'!') {
            return Ok(Qf::Not(Box::new(self.neg()?)));
        }
        let save = self.pos;
        if self.eat(b'(') {
            if let Ok(f) = self.disj() {
                if self.eat(b')') {
                    self.ws();
                    if !matches!(self.s.get(self.pos), Some(b'=' | b'<' | b'+' | b'*')) {
                        return Ok(f);
                    }
                }
            }
            self.pos = save;
        }
        let x = self.term()?;
        if self.eat(b'=') {
            Ok(Qf::Eq(x, self.term()?))
        } else if self.eat(b'<') {
            Ok(Qf::Lt(x, self.term()?))
        } else {
            Err(self.err("expected `=` or `<`"))
        }
    }

    fn term(&mut self) -> Result<Term, ComputabilityError> {
        let mut t = self.factor_product()?;
        while self.eat(b'+') {
            t = Term::Add(Box::new(t), Box::new(self.factor_product()?));
        }
        Ok(t)
    }

    fn factor_product(&mut self) -> Result<Term, ComputabilityError> {
        let mut t = self.factor()?;
        while self.eat(b'*') {
            t = Term::Mul(Box::new(t), Box::new(self.factor()?));
        }
        Ok(t)
    }

    fn factor(&mut self) -> Result<Term, ComputabilityError> {
        if self.eat(b'(') {
            let t = self.term()?;
            if !self.eat(b')') {
                return Err(self.err("expected `)`"));
            }
            return Ok(t);
        }
        self.ws();
        if self.eat(b'x') {
            let n = self.number()?;
            if n == 0 {
                return Err(self.err("variables start at x1"));
            }
            return Ok(Term::Var(n));
        }
        Ok(match self.number()? {
            0 => Term::Zero,
            1 => Term::One,
            n => Term::Num(n),
        })
    }

    fn number(&mut self) -> Result<u64, ComputabilityError> {
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| self.err("expected a number"))
    }
}

/// A random formula with variables among `x1..x{arity}` and constants ≤ `max_const`.
pub fn random_qf<R: Rng>(rng: &mut R, arity: u64, max_const: u64, depth: u32) -> Qf {
    fn term<R: Rng>(rng: &mut R, arity: u64, max_const: u64, depth: u32) -> Term {
        let leaf = depth == 0 || rng.gen_bool(0.4);
        if leaf {
            if arity > 0 && rng.gen_bool(0.5) {
                Term::Var(rng.gen_range(1..=arity))
            } else {
                match rng.gen_range(0..=max_const) {
                    0 => Term::Zero,
                    1 => Term::One,
                    n => Term::Num(n),
                }
            }
        } else {
            let (x, y) = (term(rng, arity, max_const, depth - 1), term(rng, arity, max_const, depth - 1));
            if rng.gen_bool(0.6) {
                Term::Add(Box::new(x), Box::new(y))
            } else {
                Term::Mul(Box::new(x), Box::new(y))
            }
        }
    }
    if depth == 0 || rng.gen_bool(0.5) {
        let (x, y) = (term(rng, arity, max_const, 2), term(rng, arity, max_const, 2));
        return if rng.gen_bool(0.5) { Qf::Eq(x, y) } else { Qf::Lt(x, y) };
    }
    let sub = |rng: &mut R| Box::new(random_qf(rng, arity, max_const, depth - 1));
    match rng.gen_range(0..3) {
        0 => Qf::Not(sub(rng)),
        1 => Qf::And(sub(rng), sub(rng)),
        _ => Qf::Or(sub(rng), sub(rng)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quant {
    Sigma,
    Pi,
}

impl Quant {
    pub fn dual(self) -> Quant {
        match self {
            Quant::Sigma => Quant::Pi,
            Quant::Pi => Quant::Sigma,
        }
    }

    pub fn tag(self) -> u64 {
        match self {
            Quant::Sigma => 1,
            Quant::Pi => 2,
        }
    }

    pub fn from_tag(t: u64) -> Option<Quant> {
        match t {
            1 => Some(Quant::Sigma),
            2 => Some(Quant::Pi),
            _ => None,
        }
    }
}

/// An index `⟨X, π(α), i, e⟩`. For `α = 0`, `e` is a formula number.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InfIndex {
    pub x: Quant,
    pub alpha: Ordinal,
    pub i: u64,
    pub e: BigUint,
}

impl InfIndex {
    pub fn new(x: Quant, alpha: Ordinal, i: u64, e: BigUint) -> Self {
        InfIndex { x, alpha, i, e }
    }

    pub fn code(&self) -> BigUint {
        TupleCode::encode(&[
            BigUint::from(self.x.tag()),
            PolyNotation::encode(&self.alpha).0,
            BigUint::from(self.i),
            self.e.clone(),
        ])
    }

    pub fn decode(code: &BigUint) -> Option<Self> {
        let v = TupleCode::decode(code)?;
        let [x, p, i, e] = <[BigUint; 4]>::try_from(v).ok()?;
        Some(InfIndex { x: Quant::from_tag(x.to_u64()?)?, alpha: PolyNotation(p).decode().ok()?, i: i.to_u64()?, e })
    }
}

impl fmt::Display for InfIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = if self.x == Quant::Sigma { "Sigma" } else { "Pi" };
        write!(f, "{x}@{}:i={}:e={}", self.alpha, self.i, self.e)
    }
}

impl FromStr for InfIndex {
    type Err = ComputabilityError;

    /// `Sigma@w^1:i=1:e=7`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| ComputabilityError::Index(format!("{m} in `{s}`"));
        let (x, rest) = s.split_once('@').ok_or_else(|| bad("missing `@`"))?;
        let x = match x.trim() {
            "Sigma" | "Σ" => Quant::Sigma,
            "Pi" | "Π" => Quant::Pi,
            _ => return Err(bad("expected Sigma or Pi")),
        };
        let mut parts = rest.split(':');
        let alpha: Ordinal = parts.next().unwrap_or("").trim().parse().map_err(|_| bad("bad ordinal"))?;
        let mut i = None;
        let mut e = None;
        for p in parts {
            match p.trim().split_once('=') {
                Some(("i", v)) => i = Some(v.trim().parse::<u64>().map_err(|_| bad("bad i"))?),
                Some(("e", v)) => e = Some(v.trim().parse::<BigUint>().map_err(|_| bad("bad e"))?),
                _ => return Err(bad("expected i=… or e=…")),
            }
        }
        Ok(InfIndex { x, alpha, i: i.ok_or_else(|| bad("missing i"))?, e: e.ok_or_else(|| bad("missing e"))? })
    }
}

/// `⟨idx, ⟨n_1, …, n_i⟩⟩`: the input of the satisfaction predicate, which is
/// also the index of the instantiated formula.
pub fn sub(idx: &InfIndex, a: &[u64]) -> Result<BigUint, ComputabilityError> {
    if a.len() as u64 != idx.i {
        return Err(ComputabilityError::Arity { expected: idx.i, got: a.len() });
    }
    Ok(TupleCode::encode(&[idx.code(), TupleCode::encode_u64(a)]))
}

pub fn unsub(inp: &BigUint) -> Option<(InfIndex, Vec<u64>)> {
    let v = TupleCode::decode(inp)?;
    let [c, a] = <[BigUint; 2]>::try_from(v).ok()?;
    let idx = InfIndex::decode(&c)?;
    let a = TupleCode::decode_u64(&a)?;
    (a.len() as u64 == idx.i).then_some((idx, a))
}

/// A member `⟨π(β), k, e′⟩` of some `W_e`.
pub fn member_code(beta: &Ordinal, k: u64, e: &BigUint) -> BigUint {
    TupleCode::encode(&[PolyNotation::encode(beta).0, BigUint::from(k), e.clone()])
}

pub fn decode_member(m: &BigUint) -> Option<(Ordinal, u64, BigUint)> {
    let [p, k, e] = <[BigUint; 3]>::try_from(TupleCode::decode(m)?).ok()?;
    Some((PolyNotation(p).decode().ok()?, k.to_u64()?, e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl std::ops::Not for Truth {
    type Output = Truth;

    fn not(self) -> Truth {
        match self {
            Truth::True => Truth::False,
            Truth::False => Truth::True,
            Truth::Unknown => Truth::Unknown,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Step bound for `Halt`.
    pub halt: usize,
    /// Largest number tried as a member of `W_e` and as a quantifier witness.
    pub witness: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { halt: 256, witness: 64 }
    }
}

/// Members of `W_e` visible under the budget, and whether they are all of
/// them (only when the machine carries a certified finite domain).
pub fn visible_members(e: &BigUint, budget: Budget) -> (Vec<BigUint>, bool) {
    let Some(m) = FlatMachine::decode(e) else {
        // A malformed description never halts: W_e is empty, and that is certain.
        return (vec![], true);
    };
    if let Some(dom) = m.certified_domain() {
        let tm = m.to_tm();
        let within: Vec<BigUint> = dom.iter().filter(|n| halts(&tm, n, budget.halt)).cloned().collect();
        let complete = within.len() == dom.len();
        return (within, complete);
    }
    (enumerate_we(e, budget.halt, budget.witness).into_iter().collect(), false)
}

/// Three-valued truth of `φ^{X_α}_{e,i}(a)`. Definite answers are sound.
pub fn bounded_sat(idx: &InfIndex, a: &[u64], budget: Budget) -> Result<Truth, ComputabilityError> {
    if a.len() as u64 != idx.i {
        return Err(ComputabilityError::Arity { expected: idx.i, got: a.len() });
    }
    Ok(sat_rec(idx, a, budget))
}

fn sat_rec(idx: &InfIndex, a: &[u64], budget: Budget) -> Truth {
    if idx.alpha.is_zero() {
        // An invalid formula number denotes no formula; it counts as false.
        return match Qf::from_number(&idx.e, idx.i) {
            Some(f) if f.eval(a) => Truth::True,
            _ => Truth::False,
        };
    }
    let (members, complete) = visible_members(&idx.e, budget);
    let sigma = idx.x == Quant::Sigma;
    let mut exact = complete;
    for m in &members {
        let Some((beta, k, e2)) = decode_member(m) else { continue };
        if beta >= idx.alpha {
            continue;
        }
        let inner = InfIndex::new(idx.x.dual(), beta, idx.i + k, e2);
        let v = block(&inner, a, k, budget, sigma);
        let decisive = if sigma { Truth::True } else { Truth::False };
        if v == decisive {
            return decisive;
        }
        if v == Truth::Unknown {
            exact = false;
        }
    }
    match (exact, sigma) {
        (true, true) => Truth::False,
        (true, false) => Truth::True,
        _ => Truth::Unknown,
    }
}

/// `∃`/`∀` over `k` witnesses up to the bound. Unbounded quantifiers can be
/// settled only in the decisive direction, so for `k > 0` the other answer
/// becomes `Unknown`.
fn block(inner: &InfIndex, a: &[u64], k: u64, budget: Budget, exists: bool) -> Truth {
    let decisive = if exists { Truth::True } else { Truth::False };
    let mut unknown = k > 0;
    let mut w = vec![0u64; k as usize];
    loop {
        let mut full = a.to_vec();
        full.extend_from_slice(&w);
        match sat_rec(inner, &full, budget) {
            v if v == decisive => return decisive,
            Truth::Unknown => unknown = true,
            _ => {}
        }
        if !next_tuple(&mut w, budget.witness) {
            break;
        }
    }
    if unknown {
        Truth::Unknown
    } else {
        !decisive
    }
}

fn next_tuple(w: &mut [u64], bound: u64) -> bool {
    for x in w.iter_mut() {
        if *x < bound {
            *x += 1;
            return true;
        }
        *x = 0;
    }
    false
}

/// The index of a formula equivalent to the negation, where one can be built:
/// negation of the formula for `α = 0`, and a new finite-set machine listing
/// the dual members when `W_e` is certified finite.
pub fn dual_index(idx: &InfIndex) -> Option<InfIndex> {
    if idx.alpha.is_zero() {
        let f = Qf::from_number(&idx.e, idx.i)?;
        return Some(InfIndex::new(idx.x.dual(), Ordinal::zero(), idx.i, f.negate().number()));
    }
    let dom = FlatMachine::decode(&idx.e)?.certified_domain()?;
    let mut members = Vec::new();
    for m in dom {
        let (beta, k, e2) = decode_member(&m)?;
        let inner = dual_index(&InfIndex::new(idx.x.dual(), beta.clone(), idx.i + k, e2))?;
        members.push(member_code(&beta, k, &inner.e));
    }
    Some(InfIndex::new(idx.x.dual(), idx.alpha.clone(), idx.i, toys::finite_set(&members).code()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn halting_basics() {
        let imm = toys::immediate().code();
        assert!(halt(&big(5), &imm, 1));
        assert!(!halt(&big(5), &imm, 0));
        let div = toys::diverging().code();
        assert!(enumerate_we(&div, 256, 64).is_empty());
        assert!(!halt(&big(0), &big(12345), 100));
    }

    #[test]
    fn evens_machine() {
        let ev = toys::evens().code();
        let w: Vec<u64> = enumerate_we(&ev, 16, 6).iter().map(|n| n.to_u64().unwrap()).collect();
        assert_eq!(w, vec![0, 2, 4, 6]);
        assert_eq!(toys::evens().certified_domain(), None);
    }

    #[test]
    fn finite_set_domain() {
        let members = [big(0), big(5), big(6), big(1_000_003)];
        let m = toys::finite_set(&members);
        assert_eq!(m.certified_domain().unwrap(), members.iter().cloned().collect());
        let e = m.code();
        for n in 0..40u64 {
            assert_eq!(halt(&big(n), &e, 64), n == 0 || n == 5 || n == 6);
        }
        assert!(halt(&big(1_000_003), &e, 64));
    }

    #[test]
    fn qf_examples() {
        let f: Qf = "x1+1=2".parse().unwrap();
        assert_eq!(qf_eval(&f.number(), 1, &[1]), Ok(true));
        let g: Qf = "x1<x2".parse().unwrap();
        assert_eq!(qf_eval(&g.number(), 2, &[3, 3]), Ok(false));
        let h: Qf = "x1+1=0".parse().unwrap();
        assert!((0..20).all(|n| qf_eval(&h.number(), 1, &[n]) == Ok(false)));
        assert!(qf_eval(&g.number(), 1, &[3]).is_err());
        assert_eq!(f.to_string(), "x1+1=2");
        let p: Qf = "~(x1=0 | x1=1) & 3*(x2+1) < 9".parse().unwrap();
        assert_eq!(p.to_string().parse::<Qf>().unwrap().number(), p.number());
    }

    #[test]
    fn index_literals_and_sub() {
        let idx: InfIndex = "Sigma@w^1:i=1:e=7".parse().unwrap();
        assert_eq!(idx.alpha, Ordinal::omega());
        assert_eq!(InfIndex::decode(&idx.code()), Some(idx.clone()));
        let inp = sub(&idx, &[4]).unwrap();
        assert_eq!(unsub(&inp), Some((idx.clone(), vec![4])));
        assert!(sub(&idx, &[]).is_err());
    }

    fn sigma1_equality() -> InfIndex {
        let eq: Qf = "x1=x2".parse().unwrap();
        let m = toys::finite_set(&[member_code(&Ordinal::zero(), 1, &eq.number())]);
        InfIndex::new(Quant::Sigma, Ordinal::nat(1), 1, m.code())
    }

    #[test]
    fn sigma_one_example() {
        let idx = sigma1_equality();
        for n in 0..=64 {
            assert_eq!(bounded_sat(&idx, &[n], Budget::default()), Ok(Truth::True));
        }
        let empty = InfIndex::new(Quant::Pi, Ordinal::nat(1), 0, toys::finite_set(&[]).code());
        assert_eq!(bounded_sat(&empty, &[], Budget::default()), Ok(Truth::True));
    }

    #[test]
    fn duals_flip() {
        let idx = sigma1_equality();
        let d = dual_index(&idx).unwrap();
        assert_eq!(d.x, Quant::Pi);
        assert_eq!(bounded_sat(&d, &[3], Budget::default()), Ok(Truth::False));
    }
}
