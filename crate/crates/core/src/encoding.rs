//! Formulas that encode string rewriting and the satisfaction predicate, the
//! sequent `seq(inp)` in both variants, and host versions of the two
//! computable functions the construction needs.
//!
//! Reserved atoms are spelled in ASCII: `a_L a_R a_1 a_2 a_Sigma a_Pi eps
//! okay go wait fail fin` (`eps` is the energy atom ε, `fin` is ♦).
//!
//! Run-length sequents write `p^{n}` for `n` consecutive copies of the
//! primitive `p`, e.g. `a_L, a_1^{412}, a_Sigma, eps, … |- a_L.okay`. The
//! count is a decimal natural; `p^{0}` denotes nothing.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One as _, ToPrimitive, Zero as _};
use thiserror::Error;

use crate::computability::{decode_member, halt_time, qf_eval, unsub, Budget, InfIndex, Quant};
use crate::ordinals::{Ordinal, PolyNotation, TupleCode};
use crate::rewriting::{sym, Rule, Srs};
use crate::syntax::{
    bang, meet, meets, nabla, prim, prod, prods, star, sugar, under, unders, write_formula, Formula, ParseError,
    Sequent, SugarKind,
};

pub const A_L: &str = "a_L";
pub const A_R: &str = "a_R";
pub const A_1: &str = "a_1";
pub const A_2: &str = "a_2";
pub const A_SIGMA: &str = "a_Sigma";
pub const A_PI: &str = "a_Pi";
pub const EPS: &str = "eps";
pub const OKAY: &str = "okay";
pub const GO: &str = "go";
pub const WAIT: &str = "wait";
pub const FAIL: &str = "fail";
pub const FIN: &str = "fin";

pub const RESERVED: [&str; 12] = [A_L, A_R, A_1, A_2, A_SIGMA, A_PI, EPS, OKAY, GO, WAIT, FAIL, FIN];

/// Alphabet symbols of the two placeholder systems standing in for `SR_0`
/// and `SR_1`.
pub const SR0_SYM: &str = "SR0";
pub const SR1_SYM: &str = "SR1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodeError {
    #[error("rule `{0}` has an empty side")]
    EmptySide(String),
    #[error("empty rewriting system")]
    EmptySystem,
}

fn p(name: &str) -> Formula {
    prim(name)
}

pub fn okay_formula() -> Formula {
    sugar(SugarKind::Okay, None, None)
}

/// `c_m\…\c_1\(b_1·…·b_n·∇wait)` for the rule `c_1…c_m → b_1…b_n`.
pub fn fm(rule: &Rule) -> Result<Formula, EncodeError> {
    if rule.lhs.is_empty() || rule.rhs.is_empty() {
        return Err(EncodeError::EmptySide(format!("{} -> {}", rule.lhs.join(" "), rule.rhs.join(" "))));
    }
    let lhs: Vec<Formula> = rule.lhs.iter().rev().map(|c| p(c)).collect();
    let mut rhs: Vec<Formula> = rule.rhs.iter().map(|b| p(b)).collect();
    rhs.push(nabla(p(WAIT)));
    Ok(unders(&lhs, prods(&rhs)))
}

/// `go\⋀_r (∇fm(r)·(wait\go))`, conjuncts in rule order.
pub fn rule_formula(sr: &Srs) -> Result<Formula, EncodeError> {
    if sr.rules.is_empty() {
        return Err(EncodeError::EmptySystem);
    }
    let conj = sr
        .rules
        .iter()
        .map(|r| Ok(prod(nabla(fm(r)?), under(p(WAIT), p(GO)))))
        .collect::<Result<Vec<_>, EncodeError>>()?;
    Ok(under(p(GO), meets(&conj)))
}

/// The values `f(a_1)`, `f(a_2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FnTable {
    pub on_a1: Formula,
    pub on_a2: Formula,
}

impl FnTable {
    pub fn f0() -> Self {
        FnTable { on_a1: p(OKAY), on_a2: p(GO) }
    }

    pub fn f_sigma() -> Self {
        FnTable { on_a1: p(FAIL), on_a2: prod(p(A_PI), p(EPS)) }
    }

    pub fn f_pi() -> Self {
        FnTable { on_a1: p(OKAY), on_a2: prod(p(A_SIGMA), p(EPS)) }
    }

    pub fn apply(&self, a: &str) -> Option<&Formula> {
        match a {
            A_1 => Some(&self.on_a1),
            A_2 => Some(&self.on_a2),
            _ => None,
        }
    }
}

/// `go\(a_R·go·!Rule_SR·go\fin\((a_1\f(a_1)) ∧ (a_2\f(a_2))))`.
pub fn technical_formula(sr: &Srs, f: &FnTable) -> Result<Formula, EncodeError> {
    Ok(technical_from_rule(rule_formula(sr)?, f))
}

fn technical_from_rule(rule: Formula, f: &FnTable) -> Formula {
    let exit = unders(&[p(GO), p(FIN)], meet(under(p(A_1), f.on_a1.clone()), under(p(A_2), f.on_a2.clone())));
    under(p(GO), prods(&[p(A_R), p(GO), bang(rule), exit]))
}

fn placeholder(name: &str) -> Srs {
    Srs::from_rules(vec![Rule { lhs: vec![sym(name)], rhs: vec![sym(name)] }]).expect("placeholder rule")
}

pub fn sr0() -> Srs {
    placeholder(SR0_SYM)
}

pub fn sr1() -> Srs {
    placeholder(SR1_SYM)
}

/// Which of the three technical formulas of the construction, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TechKind {
    /// `Technical(SR_0, f_0)`
    Zero,
    /// `Technical(SR_1, f_Σ)`
    Sigma,
    /// `Technical(SR_1, f_Π)`
    Pi,
}

impl TechKind {
    pub fn formula(self) -> Formula {
        match self {
            TechKind::Zero => technical_formula(&sr0(), &FnTable::f0()),
            TechKind::Sigma => technical_formula(&sr1(), &FnTable::f_sigma()),
            TechKind::Pi => technical_formula(&sr1(), &FnTable::f_pi()),
        }
        .expect("placeholder systems are well formed")
    }

    pub fn table(self) -> FnTable {
        match self {
            TechKind::Zero => FnTable::f0(),
            TechKind::Sigma => FnTable::f_sigma(),
            TechKind::Pi => FnTable::f_pi(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnergyKind {
    Sigma,
    Pi,
    /// `Energy = (a_Σ\E_Σ) ∧ (a_Π\E_Π)`
    Base,
    Level(usize),
    HLevel(usize),
    Killer,
}

pub fn energy_formula(kind: EnergyKind) -> Formula {
    let ok = okay_formula();
    match kind {
        EnergyKind::Sigma => {
            let query = sugar(
                SugarKind::Query,
                Some(&p(GO)),
                Some(&bang(sugar(SugarKind::Arrow, Some(&p(GO)), Some(&p(A_2))))),
            );
            prods(&[p(GO), TechKind::Zero.formula(), meet(ok.clone(), query), meet(ok, TechKind::Sigma.formula())])
        }
        EnergyKind::Pi => {
            let arrow = sugar(SugarKind::Arrow, Some(&p(GO)), Some(&star(p(A_2))));
            prods(&[p(GO), TechKind::Zero.formula(), meet(ok.clone(), arrow), meet(ok, TechKind::Pi.formula())])
        }
        EnergyKind::Base => {
            meet(under(p(A_SIGMA), energy_formula(EnergyKind::Sigma)), under(p(A_PI), energy_formula(EnergyKind::Pi)))
        }
        EnergyKind::Level(0) | EnergyKind::HLevel(0) => meet(ok, under(p(EPS), energy_formula(EnergyKind::Base))),
        EnergyKind::Level(k) => {
            let inner = bang(energy_formula(EnergyKind::Level(k - 1)));
            meet(ok, sugar(SugarKind::Query, Some(&p(EPS)), Some(&inner)))
        }
        EnergyKind::HLevel(k) => {
            let inner = star(energy_formula(EnergyKind::HLevel(k - 1)));
            meet(ok, sugar(SugarKind::Query, Some(&p(EPS)), Some(&inner)))
        }
        EnergyKind::Killer => {
            let branch = |x: &str| unders(&[p(x), star(p(A_1))], p(OKAY));
            under(p(EPS), meet(branch(A_SIGMA), branch(A_PI)))
        }
    }
}

/// The {∗,!}-depth.
pub fn star_bang_depth(f: &Formula) -> usize {
    f.depth()
}

/// A recognizable piece of the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Named {
    Okay,
    Base,
    Sigma,
    Pi,
    Level(usize),
    HLevel(usize),
    Killer,
    Tech(TechKind),
    Rule0,
    Rule1,
}

impl fmt::Display for Named {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Named::Okay => f.write_str("OKAY"),
            Named::Base => f.write_str("Energy"),
            Named::Sigma => f.write_str("E_Sigma"),
            Named::Pi => f.write_str("E_Pi"),
            Named::Level(k) => write!(f, "E_{k}"),
            Named::HLevel(k) => write!(f, "H_{k}"),
            Named::Killer => f.write_str("Killer"),
            Named::Tech(TechKind::Zero) => f.write_str("Tech(SR0,f0)"),
            Named::Tech(TechKind::Sigma) => f.write_str("Tech(SR1,f_Sigma)"),
            Named::Tech(TechKind::Pi) => f.write_str("Tech(SR1,f_Pi)"),
            Named::Rule0 => f.write_str("Rule_SR0"),
            Named::Rule1 => f.write_str("Rule_SR1"),
        }
    }
}

struct Fixed {
    okay: Formula,
    base: Formula,
    sigma: Formula,
    pi: Formula,
    killer: Formula,
    tech: [(TechKind, Formula); 3],
    rule0: Formula,
    rule1: Formula,
}

fn fixed() -> &'static Fixed {
    static CELL: std::sync::OnceLock<Fixed> = std::sync::OnceLock::new();
    CELL.get_or_init(|| Fixed {
        okay: okay_formula(),
        base: energy_formula(EnergyKind::Base),
        sigma: energy_formula(EnergyKind::Sigma),
        pi: energy_formula(EnergyKind::Pi),
        killer: energy_formula(EnergyKind::Killer),
        tech: [TechKind::Zero, TechKind::Sigma, TechKind::Pi].map(|k| (k, k.formula())),
        rule0: rule_formula(&sr0()).expect("placeholder"),
        rule1: rule_formula(&sr1()).expect("placeholder"),
    })
}

/// Recognizes the named formulas of the construction structurally.
pub fn classify(f: &Formula) -> Option<Named> {
    let fx = fixed();
    if let Formula::Meet(a, b) = f {
        if **a == fx.okay {
            if let Formula::Under(e, body) = &**b {
                if e.prim_name() == Some(EPS) {
                    if **body == fx.base {
                        return Some(Named::Level(0));
                    }
                    if let Formula::Prod(e2, inner) = &**body {
                        if e2.prim_name() == Some(EPS) {
                            match &**inner {
                                Formula::Bang(x) => {
                                    if let Some(Named::Level(k)) = classify(x) {
                                        return Some(Named::Level(k + 1));
                                    }
                                }
                                Formula::Star(x) => match classify(x) {
                                    Some(Named::HLevel(k)) | Some(Named::Level(k @ 0)) => {
                                        return Some(Named::HLevel(k + 1))
                                    }
                                    _ => {}
                                },
                                _ => {}
                            }
                        }
                    }
                }
            }
        }
    }
    if *f == fx.okay {
        return Some(Named::Okay);
    }
    if *f == fx.base {
        return Some(Named::Base);
    }
    if *f == fx.sigma {
        return Some(Named::Sigma);
    }
    if *f == fx.pi {
        return Some(Named::Pi);
    }
    if *f == fx.killer {
        return Some(Named::Killer);
    }
    if *f == fx.rule0 {
        return Some(Named::Rule0);
    }
    if *f == fx.rule1 {
        return Some(Named::Rule1);
    }
    fx.tech.iter().find(|(_, t)| t == f).map(|(k, _)| Named::Tech(*k))
}

/// Prints `f` with named subformulas abbreviated; with `expand_top` the
/// outermost connective is spelled out even when `f` itself has a name.
pub fn abbreviate(f: &Formula, expand_top: bool) -> String {
    let mut out = String::new();
    let top: *const Formula = f;
    let names = |y: &Formula| {
        if expand_top && std::ptr::eq(y, top) {
            return None;
        }
        classify(y).map(|n| n.to_string())
    };
    write_formula(&mut out, f, &names).expect("writing to a String");
    out
}

/// `n` consecutive copies of a primitive formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Run {
    pub atom: Arc<str>,
    pub count: BigUint,
}

impl Run {
    pub fn new(atom: &str, count: impl Into<BigUint>) -> Self {
        Run { atom: Arc::from(atom), count: count.into() }
    }

    pub fn one(atom: &str) -> Self {
        Run::new(atom, 1u32)
    }
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.count.is_one() {
            f.write_str(&self.atom)
        } else {
            write!(f, "{}^{{{}}}", self.atom, self.count)
        }
    }
}

/// A word over primitive formulas in run-length form.
pub type RunWord = Vec<Run>;

/// Merges neighbours with the same atom and drops empty runs.
pub fn normalize(w: &[Run]) -> RunWord {
    let mut out: RunWord = Vec::new();
    for r in w {
        if r.count.is_zero() {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.atom == r.atom => last.count += &r.count,
            _ => out.push(r.clone()),
        }
    }
    out
}

/// An antecedent item: a run of a primitive formula or a single formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Item {
    Run(Run),
    Formula(Formula),
}

impl Item {
    pub fn prim(name: &str) -> Self {
        Item::Run(Run::one(name))
    }
}

/// A sequent whose antecedent may contain long runs of primitives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RunSequent {
    pub ant: Vec<Item>,
    pub succ: Formula,
}

impl RunSequent {
    /// Number of formulas in the expanded antecedent.
    pub fn ant_len(&self) -> BigUint {
        self.ant
            .iter()
            .map(|i| match i {
                Item::Run(r) => r.count.clone(),
                Item::Formula(_) => BigUint::one(),
            })
            .sum()
    }

    /// The expanded sequent, if it has at most `cap` antecedent formulas.
    pub fn expand(&self, cap: usize) -> Option<Sequent> {
        if self.ant_len() > BigUint::from(cap) {
            return None;
        }
        let mut ant = Vec::new();
        for i in &self.ant {
            match i {
                Item::Run(r) => {
                    let n = r.count.to_usize()?;
                    ant.extend(std::iter::repeat_n(Formula::Prim(r.atom.clone()), n));
                }
                Item::Formula(f) => ant.push(f.clone()),
            }
        }
        Some(Sequent::new(ant, self.succ.clone()))
    }

    /// Compresses an ordinary sequent.
    pub fn from_sequent(s: &Sequent) -> Self {
        let mut ant: Vec<Item> = Vec::new();
        for f in &s.ant {
            match (f, ant.last_mut()) {
                (Formula::Prim(a), Some(Item::Run(r))) if r.atom == *a => r.count += 1u32,
                (Formula::Prim(a), _) => ant.push(Item::Run(Run::new(a, 1u32))),
                (f, _) => ant.push(Item::Formula(f.clone())),
            }
        }
        RunSequent { ant, succ: s.succ.clone() }
    }

    /// The human-readable form with named formulas abbreviated.
    pub fn abbreviated(&self) -> String {
        let ant: Vec<String> = self
            .ant
            .iter()
            .map(|i| match i {
                Item::Run(r) => r.to_string(),
                Item::Formula(f) => abbreviate(f, false),
            })
            .collect();
        format!("{} |- {}", ant.join(", "), self.succ)
    }
}

impl fmt::Display for RunSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.ant.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            match i {
                Item::Run(r) => write!(f, "{r}")?,
                Item::Formula(x) => write!(f, "{x}")?,
            }
        }
        if !self.ant.is_empty() {
            f.write_char(' ')?;
        }
        write!(f, "|- {}", self.succ)
    }
}

use std::fmt::Write as _;

impl FromStr for RunSequent {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |pos: usize, msg: &str| ParseError { pos, msg: msg.to_string() };
        let at = s.find("|-").ok_or_else(|| err(0, "missing `|-`"))?;
        let succ: Formula = s[at + 2..].parse().map_err(|e: ParseError| err(at + 2 + e.pos, &e.msg))?;
        let mut ant = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        let head = &s[..at];
        let mut pieces = Vec::new();
        for (k, c) in head.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    pieces.push((start, &head[start..k]));
                    start = k + 1;
                }
                _ => {}
            }
        }
        pieces.push((start, &head[start..]));
        if head.trim().is_empty() {
            pieces.clear();
        }
        for (off, piece) in pieces {
            let t = piece.trim();
            if t.is_empty() {
                return Err(err(off, "empty antecedent formula"));
            }
            if let Some((name, rest)) = t.split_once("^{") {
                let count = rest
                    .strip_suffix('}')
                    .and_then(|n| n.parse::<BigUint>().ok())
                    .ok_or_else(|| err(off, "bad run count"))?;
                let atom: Formula = name.parse().map_err(|e: ParseError| err(off + e.pos, &e.msg))?;
                let Formula::Prim(a) = atom else {
                    return Err(err(off, "only primitive formulas can be repeated"));
                };
                ant.push(Item::Run(Run { atom: a, count }));
                continue;
            }
            let f: Formula = t.parse().map_err(|e: ParseError| err(off + e.pos, &e.msg))?;
            ant.push(match f {
                Formula::Prim(a) => Item::Run(Run { atom: a, count: BigUint::one() }),
                f => Item::Formula(f),
            });
        }
        let mut out = RunSequent { ant, succ };
        out.ant = merge_items(out.ant);
        Ok(out)
    }
}

/// Merges neighbouring runs of the same atom and drops empty ones.
pub fn merge_items(items: Vec<Item>) -> Vec<Item> {
    let mut out: Vec<Item> = Vec::new();
    for i in items {
        match (i, out.last_mut()) {
            (Item::Run(r), _) if r.count.is_zero() => {}
            (Item::Run(r), Some(Item::Run(last))) if last.atom == r.atom => last.count += r.count,
            (i, _) => out.push(i),
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Standard,
    Minus,
}

/// The input of the reduction, `⟨⟨X, π(α), i, e⟩, ⟨n_1, …, n_i⟩⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionInput {
    pub index: InfIndex,
    pub assignment: Vec<u64>,
}

impl ReductionInput {
    pub fn code(&self) -> BigUint {
        TupleCode::encode(&[self.index.code(), TupleCode::encode_u64(&self.assignment)])
    }

    pub fn parse_code(inp: &BigUint) -> Option<Self> {
        unsub(inp).map(|(index, assignment)| ReductionInput { index, assignment })
    }
}

/// The exponents `h_1 ≥ … ≥ h_M` with `ω^{h_1}+…+ω^{h_M} = α+1`, or nothing
/// for a malformed input.
pub fn energy_exponents(inp: &BigUint) -> Vec<usize> {
    match ReductionInput::parse_code(inp) {
        Some(r) => r.index.alpha.succ().omega_powers(),
        None => vec![],
    }
}

/// `a_L, a_1^inp, a_X, eps, E_{h_M}, …, E_{h_1} |- a_L.okay`; the minus
/// variant uses the `Ĥ` formulas and appends `Killer`. A malformed input
/// gets `M = 0` and the atom `a_Sigma`.
pub fn seq_encode(inp: &BigUint, variant: Variant) -> RunSequent {
    let parsed = ReductionInput::parse_code(inp);
    let x = match parsed.as_ref().map(|r| r.index.x) {
        Some(Quant::Pi) => A_PI,
        _ => A_SIGMA,
    };
    let hs = energy_exponents(inp);
    seq_with_exponents(inp, x, &hs, variant)
}

/// The main sequent for an arbitrary exponent list (highest first).
pub fn seq_with_exponents(inp: &BigUint, x: &str, hs: &[usize], variant: Variant) -> RunSequent {
    let mut ant = vec![Item::prim(A_L)];
    if !inp.is_zero() {
        ant.push(Item::Run(Run::new(A_1, inp.clone())));
    }
    ant.push(Item::prim(x));
    ant.push(Item::prim(EPS));
    for &h in hs.iter().rev() {
        let kind = match variant {
            Variant::Standard => EnergyKind::Level(h),
            Variant::Minus => EnergyKind::HLevel(h),
        };
        ant.push(Item::Formula(energy_formula(kind)));
    }
    if variant == Variant::Minus {
        ant.push(Item::Formula(energy_formula(EnergyKind::Killer)));
    }
    RunSequent { ant, succ: goal() }
}

/// `a_L·okay`
pub fn goal() -> Formula {
    prod(p(A_L), p(OKAY))
}

/// The string `a_1^n` read off a run word over `{a_1}` (`a_1^0` is empty).
fn power_of(w: &[Run], atom: &str) -> Option<BigUint> {
    match w {
        [] => Some(BigUint::zero()),
        [r] if &*r.atom == atom => Some(r.count.clone()),
        _ => None,
    }
}

/// `ℱ_0` on `a_1^inp`: `a_1` for a true quantifier-free instance,
/// `a_1^inp a_2` when `α > 0`, and `None` (divergence) otherwise.
pub fn f0_direct(w: &[Run]) -> Option<RunWord> {
    let w = normalize(w);
    let inp = power_of(&w, A_1)?;
    let r = ReductionInput::parse_code(&inp)?;
    if r.index.alpha.is_zero() {
        let truth = qf_eval(&r.index.e, r.index.i, &r.assignment).unwrap_or(false);
        return truth.then(|| vec![Run::one(A_1)]);
    }
    Some(vec![Run::new(A_1, inp), Run::one(A_2)])
}

/// `ℱ_1` on `a_1^{inp_1} a_2^{inp_2}`. `None` only when `Halt(c′, e, y)`
/// asks for more than `budget.halt` steps and the machine has not halted by
/// then.
pub fn f1_direct(w: &[Run], budget: Budget) -> Option<RunWord> {
    let reject = Some(vec![Run::one(A_1)]);
    let w = normalize(w);
    let (inp1, inp2) = match w.as_slice() {
        [a] if &*a.atom == A_1 => (a.count.clone(), BigUint::zero()),
        [a] if &*a.atom == A_2 => (BigUint::zero(), a.count.clone()),
        [a, b] if &*a.atom == A_1 && &*b.atom == A_2 => (a.count.clone(), b.count.clone()),
        [] => (BigUint::zero(), BigUint::zero()),
        _ => return reject,
    };
    let Some(r) = ReductionInput::parse_code(&inp1) else { return reject };
    if r.index.alpha.is_zero() {
        return reject;
    }
    let Some(parts) = TupleCode::decode(&inp2) else { return reject };
    let [c1, y, ws] = match <[BigUint; 3]>::try_from(parts) {
        Ok(v) => v,
        Err(_) => return reject,
    };
    let (Some((beta, j, e1)), Some(ws)) = (decode_member(&c1), TupleCode::decode_u64(&ws)) else {
        return reject;
    };
    if beta >= r.index.alpha || ws.len() as u64 != j {
        return reject;
    }
    let halted = match y.to_usize() {
        Some(y) if y <= budget.halt => halt_time(&c1, &r.index.e, y).is_some(),
        _ => {
            halt_time(&c1, &r.index.e, budget.halt)?;
            true
        }
    };
    if !halted {
        return reject;
    }
    let mut a = r.assignment.clone();
    a.extend_from_slice(&ws);
    let next = ReductionInput { index: InfIndex::new(r.index.x.dual(), beta, r.index.i + j, e1), assignment: a };
    Some(vec![Run::new(A_1, next.code()), Run::one(A_2)])
}

/// `⟨c′, y, ⟨witnesses⟩⟩`, the number of `a_2` copies that selects one
/// conjunct or disjunct.
pub fn choice_code(member: &BigUint, y: u64, witnesses: &[u64]) -> BigUint {
    TupleCode::encode(&[member.clone(), BigUint::from(y), TupleCode::encode_u64(witnesses)])
}

/// `π(α)` of a parsed input, for display.
pub fn notation_of(r: &ReductionInput) -> PolyNotation {
    PolyNotation::encode(&r.index.alpha)
}

/// `α` of a well-formed input.
pub fn alpha_of(inp: &BigUint) -> Option<Ordinal> {
    ReductionInput::parse_code(inp).map(|r| r.index.alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::computability::{member_code, toys, Qf};

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    fn rule(l: &str, r: &str) -> Rule {
        Rule { lhs: crate::rewriting::word(l), rhs: crate::rewriting::word(r) }
    }

    #[test]
    fn fm_example() {
        assert_eq!(fm(&rule("a c", "b b a")).unwrap(), f("c\\a\\(b.b.a.@wait)"));
        assert_eq!(fm(&rule("a", "a")).unwrap(), f("a\\(a.@wait)"));
        assert!(fm(&rule("", "a")).is_err());
        assert_eq!(fm(&rule("a c", "b b a")).unwrap().depth(), 0);
    }

    #[test]
    fn rule_and_technical_shapes() {
        let sr = Srs::from_rules(vec![rule("a", "b")]).unwrap();
        assert_eq!(rule_formula(&sr).unwrap(), f("go\\(@(a\\(b.@wait)).(wait\\go))"));
        let t0 = TechKind::Zero.formula();
        let Formula::Under(g, _) = &t0 else { panic!() };
        assert_eq!(g.prim_name(), Some(GO));
        assert_eq!(abbreviate(&t0, true), "go\\(a_R.go.!Rule_SR0.go\\fin\\(a_1\\okay & a_2\\go))");
        assert!(abbreviate(&TechKind::Sigma.formula(), true).contains("a_2\\(a_Pi.eps)"));
    }

    #[test]
    fn energy_levels() {
        let e1 = energy_formula(EnergyKind::Level(1));
        assert_eq!(abbreviate(&e1, true), "OKAY & eps\\(eps.!E_0)");
        assert_eq!(e1, f(&format!("(okay\\okay) & eps\\(eps.!({}))", energy_formula(EnergyKind::Level(0)))));
        assert_eq!(energy_formula(EnergyKind::HLevel(0)), energy_formula(EnergyKind::Level(0)));
        for h in 0..=4 {
            assert_eq!(star_bang_depth(&energy_formula(EnergyKind::Level(h))), h + 1);
            assert_eq!(classify(&energy_formula(EnergyKind::Level(h))), Some(Named::Level(h)));
        }
        assert_eq!(classify(&energy_formula(EnergyKind::HLevel(2))), Some(Named::HLevel(2)));
        assert_eq!(
            abbreviate(&energy_formula(EnergyKind::Killer), true),
            "eps\\(a_Sigma\\a_1*\\okay & a_Pi\\a_1*\\okay)"
        );
    }

    fn qf_input(x: Quant, src: &str, a: &[u64]) -> BigUint {
        let q: Qf = src.parse().unwrap();
        ReductionInput { index: InfIndex::new(x, Ordinal::zero(), a.len() as u64, q.number()), assignment: a.to_vec() }
            .code()
    }

    #[test]
    fn sequent_shapes() {
        let inp = qf_input(Quant::Sigma, "x1+1=2", &[1]);
        let s = seq_encode(&inp, Variant::Standard);
        assert_eq!(s.ant.len(), 5);
        assert_eq!(s.ant[4], Item::Formula(energy_formula(EnergyKind::Level(0))));
        let m = seq_encode(&inp, Variant::Minus);
        assert_eq!(m.ant.last(), Some(&Item::Formula(energy_formula(EnergyKind::Killer))));
        assert_eq!(s.ant_len(), inp.clone() + 4u32);
        let back: RunSequent = s.to_string().parse().unwrap();
        assert_eq!(back, s);
        let w = seq_with_exponents(&BigUint::from(3u32), A_PI, &[2, 1, 0], Variant::Standard);
        assert_eq!(w.abbreviated(), "a_L, a_1^{3}, a_Pi, eps, E_0, E_1, E_2 |- a_L.okay");
        let bad = seq_encode(&BigUint::from(5u32), Variant::Standard);
        assert_eq!(bad.abbreviated(), "a_L, a_1^{5}, a_Sigma, eps |- a_L.okay");
    }

    #[test]
    fn omega_input_exponents() {
        let idx = InfIndex::new(Quant::Sigma, Ordinal::omega(), 0, toys::finite_set(&[]).code());
        let inp = ReductionInput { index: idx, assignment: vec![] }.code();
        assert_eq!(energy_exponents(&inp), vec![1, 0]);
    }

    #[test]
    fn f0_cases() {
        let t = qf_input(Quant::Sigma, "x1+1=2", &[1]);
        assert_eq!(f0_direct(&[Run::new(A_1, t)]), Some(vec![Run::one(A_1)]));
        let fl = qf_input(Quant::Pi, "x1+1=2", &[5]);
        assert_eq!(f0_direct(&[Run::new(A_1, fl)]), None);
        let idx = InfIndex::new(Quant::Sigma, Ordinal::nat(1), 0, toys::finite_set(&[]).code());
        let inp = ReductionInput { index: idx, assignment: vec![] }.code();
        assert_eq!(f0_direct(&[Run::new(A_1, inp.clone())]), Some(vec![Run::new(A_1, inp), Run::one(A_2)]));
        assert_eq!(f0_direct(&[Run::new(A_1, 7u32)]), None);
    }

    #[test]
    fn f1_cases() {
        let b = Budget::default();
        assert_eq!(f1_direct(&[Run::new(A_1, 7u32)], b), Some(vec![Run::one(A_1)]));
        let eq: Qf = "x1=x2".parse().unwrap();
        let member = member_code(&Ordinal::zero(), 1, &eq.number());
        let e = toys::finite_set(std::slice::from_ref(&member)).code();
        for x in [Quant::Sigma, Quant::Pi] {
            let inp = ReductionInput { index: InfIndex::new(x, Ordinal::nat(1), 1, e.clone()), assignment: vec![4] };
            let y = halt_time(&member, &e, 256).unwrap() as u64;
            let c = choice_code(&member, y, &[4]);
            let out = f1_direct(&[Run::new(A_1, inp.code()), Run::new(A_2, c)], b).unwrap();
            let expect = ReductionInput {
                index: InfIndex::new(x.dual(), Ordinal::zero(), 2, eq.number()),
                assignment: vec![4, 4],
            };
            assert_eq!(out, vec![Run::new(A_1, expect.code()), Run::one(A_2)]);
            let early = choice_code(&member, y - 1, &[4]);
            assert_eq!(f1_direct(&[Run::new(A_1, inp.code()), Run::new(A_2, early)], b), Some(vec![Run::one(A_1)]));
        }
    }
}
