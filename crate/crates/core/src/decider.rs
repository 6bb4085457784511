//! Bottom-top analysis (BTA) of sequents `Γ, A, Ψ ⊢ a_L·okay` and an engine
//! that decides encoded sequents by replaying the correctness argument of the
//! reduction step by step.
//!
//! The first formula of the antecedent is the *focus*; everything before it
//! is primitive. A step either rewrites the sequent into an equiderivable one
//! (`Det`), splits it into alternatives (`Exists`), or quantifies over a
//! number of copies (`ExistsN`, `ForallN`).

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::computability::{decode_member, halt_time, visible_members, Budget};
use crate::encoding::{
    abbreviate, choice_code, classify, energy_formula, f0_direct, f1_direct, goal, merge_items, okay_formula,
    seq_encode, seq_with_exponents, EnergyKind, FnTable, Item, Named, ReductionInput, Run, RunSequent, RunWord,
    TechKind, Variant, A_1, A_2, A_L, A_PI, A_R, A_SIGMA, EPS, FIN, GO, OKAY,
};
use crate::ordinals::Ordinal;
use crate::rewriting::{sym, Srs, Sym};
use crate::syntax::{bang, prim, star, sugar, Formula, SugarKind};

pub use crate::search::{bounded_search, saturate, SearchCaps, SearchResult, Verdict};

/// Most positions tried for a `∇` focus, and most copies materialized.
const PLACEMENT_CAP: usize = 10_000;
/// Most witness tuples tried per member of `W_e`.
const WITNESS_CAP: usize = 4_096;

/// `p\B`, or `(p\B) ∧ (q\C)`, with `p`, `q` primitive.
pub fn is_locked(f: &Formula) -> bool {
    match f {
        Formula::Under(p, _) => p.is_prim(),
        Formula::Meet(a, b) => {
            matches!((&**a, &**b), (Formula::Under(p, _), Formula::Under(q, _)) if p.is_prim() && q.is_prim())
        }
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Statement {
    Under,
    Prod,
    Meet,
    Bang,
    Star,
    Nabla,
    UnderChain,
    /// `(A_1 ∧ … ∧ A_n)` with `n > 2`, split in one step.
    Wedge(usize),
    /// `q*\C` after a block of `q`.
    StarUnder,
    Unfold,
    Technical,
    OkayClose,
    GoShift,
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Under => write!(f, "1a (\\)"),
            Statement::Prod => write!(f, "1b (.)"),
            Statement::Meet => write!(f, "1c (&)"),
            Statement::Bang => write!(f, "1d (!)"),
            Statement::Star => write!(f, "1e (*)"),
            Statement::Nabla => write!(f, "2a (@)"),
            Statement::UnderChain => write!(f, "2b (\\)"),
            Statement::Wedge(n) => write!(f, "wedge-{n} (&)"),
            Statement::StarUnder => write!(f, "1a* (\\)"),
            Statement::Unfold => write!(f, "unfold_rules"),
            Statement::Technical => write!(f, "technical"),
            Statement::OkayClose => write!(f, "okay-close"),
            Statement::GoShift => write!(f, "shift_go"),
        }
    }
}

/// A family of sequents indexed by `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// `before, B^n, after`.
    Copies { before: Vec<Item>, body: Formula, after: Vec<Item>, succ: Formula },
    /// `Γ′, C, after` where `gamma = Γ′, q^n`.
    Trailing { gamma: Vec<Item>, atom: Arc<str>, body: Formula, after: Vec<Item>, succ: Formula },
}

impl Family {
    /// Largest admissible `n`; `None` when unbounded.
    pub fn bound(&self) -> Option<BigUint> {
        match self {
            Family::Copies { .. } => None,
            Family::Trailing { gamma, atom, .. } => Some(match gamma.last() {
                Some(Item::Run(r)) if r.atom == *atom => r.count.clone(),
                _ => BigUint::zero(),
            }),
        }
    }

    /// The member for `n`; `None` past the bound or when `n` copies of a
    /// compound formula would not fit in memory.
    pub fn instance(&self, n: &BigUint) -> Option<RunSequent> {
        match self {
            Family::Copies { before, body, after, succ } => {
                let mut items = before.clone();
                match body {
                    Formula::Prim(a) => items.push(Item::Run(Run { atom: a.clone(), count: n.clone() })),
                    _ => {
                        let n = n.to_usize().filter(|&n| n <= PLACEMENT_CAP)?;
                        items.extend(std::iter::repeat_n(Item::Formula(body.clone()), n));
                    }
                }
                items.extend(after.iter().cloned());
                Some(build(items, succ))
            }
            Family::Trailing { gamma, body, after, succ, .. } => {
                if *n > self.bound()? {
                    return None;
                }
                let mut items = gamma.clone();
                if !n.is_zero() {
                    if let Some(Item::Run(r)) = items.last_mut() {
                        r.count -= n;
                    }
                }
                items.push(item(body));
                items.extend(after.iter().cloned());
                Some(build(items, succ))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Det {
        label: Statement,
        next: RunSequent,
    },
    Exists {
        label: Statement,
        branches: Vec<RunSequent>,
    },
    /// Derivable iff some member is.
    ExistsN {
        label: Statement,
        family: Family,
    },
    /// Derivable iff every member is.
    ForallN {
        label: Statement,
        family: Family,
    },
    /// Underivable.
    Fail {
        label: Statement,
        why: String,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BtaError {
    #[error("no formula in the antecedent")]
    NoFocus,
    #[error("context after the focus is not locked: {0}")]
    NotLocked(String),
    #[error("side condition fails: {0}")]
    SideCondition(String),
    #[error("no statement covers the focus {0}")]
    NoItem(String),
    #[error("too many alternatives: {0}")]
    TooLarge(String),
}

fn first_formula(s: &RunSequent) -> Option<usize> {
    s.ant.iter().position(|i| matches!(i, Item::Formula(_)))
}

fn item(f: &Formula) -> Item {
    match f {
        Formula::Prim(a) => Item::Run(Run { atom: a.clone(), count: BigUint::one() }),
        f => Item::Formula(f.clone()),
    }
}

fn build(items: Vec<Item>, succ: &Formula) -> RunSequent {
    RunSequent { ant: merge_items(items), succ: succ.clone() }
}

/// Removes one trailing `p`.
fn pop_atom(items: &mut Vec<Item>, p: &str) -> bool {
    let Some(Item::Run(r)) = items.last_mut() else { return false };
    if &*r.atom != p || r.count.is_zero() {
        return false;
    }
    r.count -= 1u32;
    if r.count.is_zero() {
        items.pop();
    }
    true
}

fn is_single(i: &Item, atom: &str) -> bool {
    matches!(i, Item::Run(r) if &*r.atom == atom && r.count.is_one())
}

fn flatten_prod<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::Prod(a, b) => {
            flatten_prod(a, out);
            flatten_prod(b, out);
        }
        f => out.push(f),
    }
}

fn flatten_meet<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
    match f {
        Formula::Meet(a, b) => {
            flatten_meet(a, out);
            flatten_meet(b, out);
        }
        f => out.push(f),
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    /// `Γ, A, Ψ` with `Ψ` locked.
    Locked,
    /// `Γ, A, Θ, Ψ` with `Θ` primitive and nonempty.
    Mixed,
}

fn context(s: &RunSequent, fi: usize) -> Result<Ctx, BtaError> {
    let after = &s.ant[fi + 1..];
    let r = after.iter().take_while(|i| matches!(i, Item::Run(_))).count();
    for i in &after[r..] {
        match i {
            Item::Formula(f) if is_locked(f) => {}
            Item::Formula(f) => return Err(BtaError::NotLocked(abbreviate(f, false))),
            Item::Run(run) => return Err(BtaError::NotLocked(format!("{run} after a formula"))),
        }
    }
    if r == 0 {
        return Ok(Ctx::Locked);
    }
    side_condition(s, fi)?;
    Ok(Ctx::Mixed)
}

/// The first formula after the focus is `b\E` and `b` is not among the
/// primitives of the sequent.
fn side_condition(s: &RunSequent, fi: usize) -> Result<(), BtaError> {
    let psi = s.ant[fi + 1..].iter().find_map(|i| match i {
        Item::Formula(f) => Some(f),
        Item::Run(_) => None,
    });
    let b = match psi {
        Some(Formula::Under(b, _)) => b
            .prim_name()
            .ok_or_else(|| BtaError::SideCondition("the formula after the primitives must be b\\E".into()))?,
        _ => return Err(BtaError::SideCondition("the formula after the primitives must be b\\E".into())),
    };
    let clash = s.ant.iter().any(|i| matches!(i, Item::Run(r) if &*r.atom == b));
    if clash {
        return Err(BtaError::SideCondition(format!("{b} occurs among the primitives")));
    }
    Ok(())
}

/// One step of bottom-top analysis on the first formula of the antecedent.
pub fn bta_step(s: &RunSequent) -> Result<Step, BtaError> {
    if s.succ != goal() {
        return Err(BtaError::SideCondition("the succedent must be a_L.okay".into()));
    }
    let fi = first_formula(s).ok_or(BtaError::NoFocus)?;
    let Item::Formula(focus) = &s.ant[fi] else { unreachable!("first_formula") };
    let gamma = &s.ant[..fi];
    let after = &s.ant[fi + 1..];
    let with = |mid: Vec<Item>| -> RunSequent {
        let mut items = gamma.to_vec();
        items.extend(mid);
        items.extend(after.iter().cloned());
        build(items, &s.succ)
    };

    match focus {
        Formula::Prod(..) => {
            let mut parts = Vec::new();
            flatten_prod(focus, &mut parts);
            let next = with(parts.into_iter().map(item).collect());
            return Ok(Step::Det { label: Statement::Prod, next });
        }
        Formula::Star(b) => {
            let family = Family::Copies {
                before: gamma.to_vec(),
                body: (**b).clone(),
                after: after.to_vec(),
                succ: s.succ.clone(),
            };
            return Ok(Step::ForallN { label: Statement::Star, family });
        }
        _ => {}
    }

    let ctx = context(s, fi)?;
    match (ctx, focus) {
        (_, Formula::Nabla(b)) => {
            if ctx == Ctx::Locked {
                side_condition(s, fi)?;
            }
            let branches = placements(gamma, after, b, &s.succ)?;
            Ok(Step::Exists { label: Statement::Nabla, branches })
        }
        (Ctx::Locked, Formula::Under(p, b)) if p.is_prim() => {
            let p = p.prim_name().expect("primitive");
            let mut g = gamma.to_vec();
            if !pop_atom(&mut g, p) {
                let why = format!("{p} does not stand right before the focus");
                return Ok(Step::Fail { label: Statement::Under, why });
            }
            g.push(item(b));
            g.extend(after.iter().cloned());
            Ok(Step::Det { label: Statement::Under, next: build(g, &s.succ) })
        }
        (Ctx::Locked, Formula::Under(l, c)) if matches!(&**l, Formula::Star(q) if q.is_prim()) => {
            let Formula::Star(q) = &**l else { unreachable!() };
            let family = Family::Trailing {
                gamma: gamma.to_vec(),
                atom: Arc::from(q.prim_name().expect("primitive")),
                body: (**c).clone(),
                after: after.to_vec(),
                succ: s.succ.clone(),
            };
            Ok(Step::ExistsN { label: Statement::StarUnder, family })
        }
        (Ctx::Locked, Formula::Meet(..)) => {
            let mut parts = Vec::new();
            flatten_meet(focus, &mut parts);
            let label = if parts.len() == 2 { Statement::Meet } else { Statement::Wedge(parts.len()) };
            let branches = parts.into_iter().map(|a| with(vec![item(a)])).collect();
            Ok(Step::Exists { label, branches })
        }
        (Ctx::Locked, Formula::Bang(b)) => {
            let family = Family::Copies {
                before: gamma.to_vec(),
                body: (**b).clone(),
                after: after.to_vec(),
                succ: s.succ.clone(),
            };
            Ok(Step::ExistsN { label: Statement::Bang, family })
        }
        (Ctx::Mixed, Formula::Under(p, _)) if p.is_prim() => {
            let mut body = focus;
            let mut ps = Vec::new();
            while let Formula::Under(p, b) = body {
                match p.prim_name() {
                    Some(a) => {
                        ps.push(a);
                        body = b;
                    }
                    None => break,
                }
            }
            let mut g = gamma.to_vec();
            for a in &ps {
                if !pop_atom(&mut g, a) {
                    let why = format!("{a} does not stand where the chain needs it");
                    return Ok(Step::Fail { label: Statement::UnderChain, why });
                }
            }
            g.push(item(body));
            g.extend(after.iter().cloned());
            Ok(Step::Det { label: Statement::UnderChain, next: build(g, &s.succ) })
        }
        _ => Err(BtaError::NoItem(abbreviate(focus, false))),
    }
}

/// All ways to put `B` somewhere among the remaining antecedent.
fn placements(gamma: &[Item], after: &[Item], b: &Formula, succ: &Formula) -> Result<Vec<RunSequent>, BtaError> {
    let rest: Vec<Item> = gamma.iter().chain(after).cloned().collect();
    let total = RunSequent { ant: rest.clone(), succ: succ.clone() }.ant_len() + 1u32;
    if total > BigUint::from(PLACEMENT_CAP) {
        return Err(BtaError::TooLarge(format!("{total} placements")));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |items: Vec<Item>| {
        let s = build(items, succ);
        if seen.insert(s.clone()) {
            out.push(s);
        }
    };
    for k in 0..=rest.len() {
        let mut items = rest[..k].to_vec();
        items.push(item(b));
        items.extend(rest[k..].iter().cloned());
        push(items);
        if let Some(Item::Run(r)) = rest.get(k) {
            let c = r.count.to_usize().expect("bounded by the cap");
            for j in 1..c {
                let mut items = rest[..k].to_vec();
                items.push(Item::Run(Run { atom: r.atom.clone(), count: j.into() }));
                items.push(item(b));
                items.push(Item::Run(Run { atom: r.atom.clone(), count: (c - j).into() }));
                items.extend(rest[k + 1..].iter().cloned());
                push(items);
            }
        }
    }
    Ok(out)
}

/// `a_L, okay` followed only by formulas `OKAY ∧ (p\B)`.
pub fn okay_closes(s: &RunSequent) -> bool {
    let okay = okay_formula();
    s.succ == goal()
        && s.ant.len() >= 2
        && is_single(&s.ant[0], A_L)
        && is_single(&s.ant[1], OKAY)
        && s.ant[2..].iter().all(|i| match i {
            Item::Formula(Formula::Meet(a, b)) => **a == okay && matches!(&**b, Formula::Under(p, _) if p.is_prim()),
            _ => false,
        })
}

/// `Γ, go, ([go]→p)^c, Ψ` becomes `Γ, p^c, go, Ψ`.
pub fn shift_go(s: &RunSequent) -> Option<RunSequent> {
    let fi = first_formula(s).unwrap_or(s.ant.len());
    let mut gamma = s.ant[..fi].to_vec();
    if !pop_atom(&mut gamma, GO) {
        return None;
    }
    let arrow_of = |f: &Formula| -> Option<Arc<str>> {
        if let Formula::Under(g, body) = f {
            if let (Some(GO), Formula::Prod(p, g2)) = (g.prim_name(), &**body) {
                if g2.prim_name() == Some(GO) {
                    if let Formula::Prim(p) = &**p {
                        return Some(p.clone());
                    }
                }
            }
        }
        None
    };
    let mut k = fi;
    let mut p: Option<Arc<str>> = None;
    while let Some(Item::Formula(f)) = s.ant.get(k) {
        match (arrow_of(f), &p) {
            (Some(q), None) => p = Some(q),
            (Some(q), Some(p0)) if q == *p0 => {}
            _ => break,
        }
        k += 1;
    }
    let psi = &s.ant[k..];
    if !psi.iter().all(|i| matches!(i, Item::Formula(f) if is_locked(f))) {
        return None;
    }
    if let Some(p) = p {
        gamma.push(Item::Run(Run { atom: p, count: (k - fi).into() }));
    }
    gamma.push(Item::prim(GO));
    gamma.extend(psi.iter().cloned());
    Some(build(gamma, &s.succ))
}

/// `U, go, Rule^l, Ψ` becomes the sequents `W, go, Ψ` with `U ⇒^l W`.
pub fn unfold_rules(s: &RunSequent, srs: &Srs, rule: &Formula, cap: usize) -> Option<Vec<RunSequent>> {
    let fi = first_formula(s)?;
    let mut u = s.ant[..fi].to_vec();
    if !pop_atom(&mut u, GO) {
        return None;
    }
    let l = s.ant[fi..].iter().take_while(|i| matches!(i, Item::Formula(f) if f == rule)).count();
    let psi = &s.ant[fi + l..];
    if !psi.iter().all(|i| matches!(i, Item::Formula(f) if is_locked(f))) {
        return None;
    }
    let mut layer: HashSet<Vec<Sym>> = HashSet::from([expand_runs(&u, cap)?]);
    for _ in 0..l {
        layer = layer.iter().flat_map(|w| srs.one_step(w)).collect();
    }
    let mut words: Vec<Vec<Sym>> = layer.into_iter().collect();
    words.sort();
    Some(
        words
            .into_iter()
            .map(|w| {
                let mut items: Vec<Item> = w.iter().map(|a| Item::prim(a)).collect();
                items.push(Item::prim(GO));
                items.extend(psi.iter().cloned());
                build(items, &s.succ)
            })
            .collect(),
    )
}

fn expand_runs(items: &[Item], cap: usize) -> Option<Vec<Sym>> {
    let mut out = Vec::new();
    for i in items {
        let Item::Run(r) = i else { return None };
        let c = r.count.to_usize().filter(|&c| out.len() + c <= cap)?;
        out.extend(std::iter::repeat_n(r.atom.clone(), c));
    }
    Some(out)
}

/// Result of running the function behind a technical formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HostResult {
    Output(RunWord),
    Diverges,
    Unknown(String),
}

/// Receives `u` from `a_L u` and returns `F(u)`.
pub type HostFn = Arc<dyn Fn(&[Run], &DecideBudget) -> HostResult + Send + Sync>;

/// How the engine evaluates a technical formula.
#[derive(Clone)]
pub enum TechImpl {
    /// A Rust function standing in for the rewriting system.
    Host { f: HostFn, table: FnTable },
    /// An actual rewriting system over `a_L`, `a_R`, `fin`, `a_1`, `a_2`.
    Literal { srs: Srs, table: FnTable },
}

impl TechImpl {
    fn table(&self) -> &FnTable {
        match self {
            TechImpl::Host { table, .. } | TechImpl::Literal { table, .. } => table,
        }
    }
}

impl fmt::Debug for TechImpl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TechImpl::Host { table, .. } => f.debug_struct("Host").field("table", table).finish(),
            TechImpl::Literal { srs, table } => {
                f.debug_struct("Literal").field("srs", srs).field("table", table).finish()
            }
        }
    }
}

pub fn f0_host() -> HostFn {
    Arc::new(|u, _| match f0_direct(u) {
        Some(v) => HostResult::Output(v),
        None => HostResult::Diverges,
    })
}

pub fn f1_host() -> HostFn {
    Arc::new(|u, budget| match f1_direct(u, budget.computability()) {
        Some(v) => HostResult::Output(v),
        None => HostResult::Unknown(format!("Halt needs more than {} steps", budget.halt)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Segment {
    /// The continuations `W, f(a_i), Ψ`; the sequent is derivable iff one is.
    Branches(Vec<RunSequent>),
    Unknown(String),
}

/// Runs the segment `U, go, Tech(SR, f), Ψ` for `U = a_L u`.
pub fn sr_segment(s: &RunSequent, imp: &TechImpl, budget: &DecideBudget) -> Result<Segment, BtaError> {
    let fi = first_formula(s).ok_or(BtaError::NoFocus)?;
    if context(s, fi)? != Ctx::Locked {
        return Err(BtaError::SideCondition("locked formulas must follow the technical formula".into()));
    }
    let mut u = s.ant[..fi].to_vec();
    if !pop_atom(&mut u, GO) {
        return Err(BtaError::SideCondition("go must precede the technical formula".into()));
    }
    let runs: Vec<Run> = u
        .iter()
        .map(|i| match i {
            Item::Run(r) => r.clone(),
            Item::Formula(_) => unreachable!("prefix before the focus"),
        })
        .collect();
    let psi = &s.ant[fi + 1..];

    let outs: Vec<(RunWord, &str)> = match imp {
        TechImpl::Host { f, .. } => {
            let Some(rest) = strip_first(&runs, A_L) else {
                return Ok(Segment::Unknown("the input does not start with a_L".into()));
            };
            match f(&rest, budget) {
                HostResult::Output(v) => split_last(&v)
                    .map(|(w, a)| {
                        let mut full = vec![Run::one(A_L)];
                        full.extend(w);
                        vec![(full, a)]
                    })
                    .unwrap_or_default(),
                HostResult::Diverges => vec![],
                HostResult::Unknown(why) => return Ok(Segment::Unknown(why)),
            }
        }
        TechImpl::Literal { srs, .. } => {
            let mut start = expand_runs(&u, PLACEMENT_CAP)
                .ok_or_else(|| BtaError::TooLarge("input word of the rewriting system".into()))?;
            start.push(sym(A_R));
            let Some(closure) = srs.closure(&start, budget.closure) else {
                return Ok(Segment::Unknown(format!("more than {} reachable strings", budget.closure)));
            };
            closure
                .iter()
                .filter_map(|v| match v.as_slice() {
                    [w @ .., a, fin] if &**fin == FIN && (&**a == A_1 || &**a == A_2) => {
                        let a = if &**a == A_1 { A_1 } else { A_2 };
                        Some((w.iter().map(|x| Run::one(x)).collect(), a))
                    }
                    _ => None,
                })
                .collect()
        }
    };
    let table = imp.table();
    let branches = outs
        .into_iter()
        .map(|(w, a)| {
            let mut items: Vec<Item> = w.into_iter().map(Item::Run).collect();
            items.push(item(table.apply(a).expect("a_1 or a_2")));
            items.extend(psi.iter().cloned());
            build(items, &s.succ)
        })
        .collect();
    Ok(Segment::Branches(branches))
}

fn strip_first(w: &[Run], atom: &str) -> Option<RunWord> {
    let (first, rest) = w.split_first()?;
    if &*first.atom != atom || first.count.is_zero() {
        return None;
    }
    let mut out = Vec::with_capacity(w.len());
    if first.count > BigUint::one() {
        out.push(Run { atom: first.atom.clone(), count: &first.count - 1u32 });
    }
    out.extend(rest.iter().cloned());
    Some(out)
}

fn split_last(w: &[Run]) -> Option<(RunWord, &'static str)> {
    let mut w = crate::encoding::normalize(w);
    let last = w.last_mut()?;
    let a = match &*last.atom {
        A_1 => A_1,
        A_2 => A_2,
        _ => return None,
    };
    last.count -= 1u32;
    if last.count.is_zero() {
        w.pop();
    }
    Some((w, a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecideBudget {
    /// Step bound `Y` for `Halt`.
    pub halt: usize,
    /// Witness bound `N`.
    pub witness: u64,
    /// Largest `n` tried for `!` or `∗` outside the encoded pattern.
    pub n_cap: u64,
    /// Engine steps before giving up.
    pub max_steps: usize,
    /// Strings explored when running a literal rewriting system.
    pub closure: usize,
}

impl Default for DecideBudget {
    fn default() -> Self {
        DecideBudget { halt: 256, witness: 64, n_cap: 4, max_steps: 1_000_000, closure: 100_000 }
    }
}

impl DecideBudget {
    pub fn computability(&self) -> Budget {
        Budget { halt: self.halt, witness: self.witness }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLine {
    pub depth: usize,
    pub sequent: String,
    pub label: String,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:width$}{}", "", self.sequent, width = 2 * self.depth)?;
        if !self.label.is_empty() {
            write!(f, "  {}", self.label)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub trace: Vec<TraceLine>,
    pub steps: usize,
}

/// The antecedent with the focus in brackets and named formulas abbreviated.
pub fn render(s: &RunSequent, focus: Option<usize>) -> String {
    let ant: Vec<String> = s
        .ant
        .iter()
        .enumerate()
        .map(|(k, i)| match i {
            Item::Run(r) => r.to_string(),
            Item::Formula(f) if focus == Some(k) => format!("[{}]", abbreviate(f, true)),
            Item::Formula(f) => abbreviate(f, false),
        })
        .collect();
    if ant.is_empty() {
        format!("|- {}", s.succ)
    } else {
        format!("{} |- {}", ant.join(", "), s.succ)
    }
}

fn any_of(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut unknown = None;
    for v in vs {
        match v {
            Verdict::Derivable => return Verdict::Derivable,
            Verdict::Unknown(why) => {
                unknown.get_or_insert(why);
            }
            Verdict::Underivable => {}
        }
    }
    unknown.map_or(Verdict::Underivable, Verdict::Unknown)
}

/// The decision engine. Every definite verdict is backed by the trace.
pub struct Decider {
    budget: DecideBudget,
    techs: Vec<(Formula, TechImpl)>,
    trace: Vec<TraceLine>,
    steps: usize,
}

impl Decider {
    /// An engine with the three technical formulas of the construction
    /// backed by `ℱ_0` and `ℱ_1`.
    pub fn new(budget: DecideBudget) -> Self {
        let mut d = Decider { budget, techs: Vec::new(), trace: Vec::new(), steps: 0 };
        for kind in [TechKind::Zero, TechKind::Sigma, TechKind::Pi] {
            let f = if kind == TechKind::Zero { f0_host() } else { f1_host() };
            d.register(kind.formula(), TechImpl::Host { f, table: kind.table() });
        }
        d
    }

    /// Later registrations of the same formula win.
    pub fn register(&mut self, formula: Formula, imp: TechImpl) {
        self.techs.retain(|(f, _)| *f != formula);
        self.techs.push((formula, imp));
    }

    pub fn decide(&mut self, s: &RunSequent) -> Decision {
        self.trace.clear();
        self.steps = 0;
        let verdict = self.run(s.clone(), 0);
        Decision { verdict, trace: std::mem::take(&mut self.trace), steps: self.steps }
    }

    fn log(&mut self, depth: usize, s: &RunSequent, focus: Option<usize>, label: impl Into<String>) {
        self.trace.push(TraceLine { depth, sequent: render(s, focus), label: label.into() });
    }

    fn run(&mut self, s: RunSequent, depth: usize) -> Verdict {
        self.steps += 1;
        if self.steps > self.budget.max_steps {
            return Verdict::Unknown(format!("more than {} steps", self.budget.max_steps));
        }
        let Some(fi) = first_formula(&s) else {
            let ok = s.succ == goal() && s.ant.len() == 2 && is_single(&s.ant[0], A_L) && is_single(&s.ant[1], OKAY);
            self.log(depth, &s, None, if ok { "axiom" } else { "stuck" });
            return if ok { Verdict::Derivable } else { Verdict::Underivable };
        };
        if s.ant.iter().any(|i| matches!(i, Item::Formula(Formula::Zero))) {
            self.log(depth, &s, None, "axiom (0)");
            return Verdict::Derivable;
        }
        if okay_closes(&s) {
            self.log(depth, &s, None, Statement::OkayClose.to_string());
            return Verdict::Derivable;
        }
        let Item::Formula(focus) = s.ant[fi].clone() else { unreachable!() };

        if let Some(v) = self.tech(&s, fi, &focus, depth) {
            return v;
        }
        if let Some(v) = self.raise_energy(&s, fi, &focus, depth) {
            return v;
        }
        if let Some(v) = self.choice(&s, fi, &focus, depth) {
            return v;
        }
        self.generic(s, fi, depth)
    }

    fn tech(&mut self, s: &RunSequent, fi: usize, focus: &Formula, depth: usize) -> Option<Verdict> {
        let imp = self.techs.iter().find(|(f, _)| f == focus)?.1.clone();
        if !matches!(s.ant[..fi].last(), Some(Item::Run(r)) if &*r.atom == GO) {
            return None;
        }
        match sr_segment(s, &imp, &self.budget) {
            Err(e) => Some(Verdict::Unknown(e.to_string())),
            Ok(Segment::Unknown(why)) => {
                self.log(depth, s, Some(fi), format!("{} unknown: {why}", Statement::Technical));
                Some(Verdict::Unknown(why))
            }
            Ok(Segment::Branches(bs)) => {
                let label = match bs.len() {
                    0 => format!("{} (no halting run)", Statement::Technical),
                    _ => Statement::Technical.to_string(),
                };
                self.log(depth, s, Some(fi), label);
                let mut out = Vec::new();
                for b in bs {
                    let v = self.run(b, depth + 1);
                    let done = v == Verdict::Derivable;
                    out.push(v);
                    if done {
                        break;
                    }
                }
                Some(any_of(out))
            }
        }
    }

    /// `a_L, a_1^inp, a_X, eps, [!E_k], E…` (standard) or
    /// `…, [Ĥ_k*], Ĥ…, Killer` (minus): the energy is raised just above `α`.
    fn raise_energy(&mut self, s: &RunSequent, fi: usize, focus: &Formula, depth: usize) -> Option<Verdict> {
        let (body, minus) = match focus {
            Formula::Bang(b) => ((**b).clone(), false),
            Formula::Star(b) => ((**b).clone(), true),
            _ => return None,
        };
        let k = match (classify(&body)?, minus) {
            (Named::Level(k), false) => k,
            (Named::Level(0), true) => 0,
            (Named::HLevel(k), true) => k,
            _ => return None,
        };
        let (inp, x) = main_prefix(&s.ant[..fi])?;
        let r = ReductionInput::parse_code(&inp)?;
        let want = match r.index.x {
            crate::computability::Quant::Sigma => A_SIGMA,
            crate::computability::Quant::Pi => A_PI,
        };
        if &*x != want {
            return None;
        }
        let after = &s.ant[fi + 1..];
        let (levels, killer) = match (minus, after.split_last()) {
            (true, Some((Item::Formula(kf), init))) if classify(kf) == Some(Named::Killer) => (init, true),
            _ => (after, false),
        };
        if minus && !killer {
            return None;
        }
        let mut rest = Ordinal::zero();
        for i in levels {
            let Item::Formula(f) = i else { return None };
            let h = match (classify(f)?, minus) {
                (Named::Level(h), false) => h,
                (Named::Level(0), true) => 0,
                (Named::HLevel(h), true) => h,
                _ => return None,
            };
            rest = rest.hsum(&Ordinal::omega_pow(h));
        }
        let alpha = &r.index.alpha;
        let top = alpha.coeff(k) + 1;
        let energy = |l: u64| rest.hsum(&Ordinal::omega_pow(k).mul_nat(l));
        let least = (0..=top).find(|&l| energy(l) > *alpha);
        let make = |l: u64| -> RunSequent {
            let mut items = s.ant[..fi].to_vec();
            items.extend(std::iter::repeat_n(Item::Formula(body.clone()), l as usize));
            items.extend(after.iter().cloned());
            build(items, &s.succ)
        };
        if !minus {
            let Some(l) = least else {
                self.log(depth, s, Some(fi), format!("{} no l lifts the energy above alpha", Statement::Bang));
                return Some(Verdict::Unknown("the remaining energy cannot exceed alpha".into()));
            };
            self.log(depth, s, Some(fi), format!("{} l={l}", Statement::Bang));
            return Some(self.run(make(l), depth + 1));
        }
        let upto = least.unwrap_or(top);
        self.log(depth, s, Some(fi), format!("{} l=0..={upto}", Statement::Star));
        let mut unknown = None;
        for l in 0..=upto {
            match self.run(make(l), depth + 1) {
                Verdict::Underivable => return Some(Verdict::Underivable),
                Verdict::Unknown(why) => {
                    unknown.get_or_insert(why);
                }
                Verdict::Derivable => {}
            }
        }
        Some(match (least, unknown) {
            (_, Some(why)) => Verdict::Unknown(why),
            (None, None) => Verdict::Unknown("the remaining energy cannot exceed alpha".into()),
            (Some(_), None) => Verdict::Derivable,
        })
    }

    /// `a_L, a_1^inp, go, [!([go]→a_2)], B` (Σ) and
    /// `a_L, a_1^inp, [a_2*], go, B` (Π): one branch per choice code.
    fn choice(&mut self, s: &RunSequent, fi: usize, focus: &Formula, depth: usize) -> Option<Verdict> {
        let arrow = sugar(SugarKind::Arrow, Some(&prim(GO)), Some(&prim(A_2)));
        let gamma = &s.ant[..fi];
        let after = &s.ant[fi + 1..];
        let (sigma, rest, inp_items) = if *focus == bang(arrow) {
            let [pre @ .., g] = gamma else { return None };
            if !is_single(g, GO) {
                return None;
            }
            (true, after, pre)
        } else if *focus == star(prim(A_2)) {
            let (g, rest) = after.split_first()?;
            if !is_single(g, GO) {
                return None;
            }
            (false, rest, gamma)
        } else {
            return None;
        };
        let inp = match inp_items {
            [l] if is_single(l, A_L) => BigUint::zero(),
            [l, Item::Run(a)] if is_single(l, A_L) && &*a.atom == A_1 => a.count.clone(),
            _ => return None,
        };
        let (codes, exact) = choice_codes(&inp, &self.budget);
        let label = if sigma { Statement::Bang } else { Statement::Star };
        let mut unknown = None;
        for c in codes {
            self.log(depth, s, Some(fi), format!("{label} c={c}, {}", Statement::GoShift));
            let mut items = vec![Item::prim(A_L)];
            if !inp.is_zero() {
                items.push(Item::Run(Run::new(A_1, inp.clone())));
            }
            items.push(Item::Run(Run::new(A_2, c)));
            items.push(Item::prim(GO));
            items.extend(rest.iter().cloned());
            match (self.run(build(items, &s.succ), depth + 1), sigma) {
                (Verdict::Derivable, true) => return Some(Verdict::Derivable),
                (Verdict::Underivable, false) => return Some(Verdict::Underivable),
                (Verdict::Unknown(why), _) => {
                    unknown.get_or_insert(why);
                }
                _ => {}
            }
        }
        Some(match (unknown, exact) {
            (Some(why), _) => Verdict::Unknown(why),
            (None, false) => Verdict::Unknown("W_e or the witnesses exceed the budget".into()),
            (None, true) if sigma => Verdict::Underivable,
            (None, true) => Verdict::Derivable,
        })
    }

    fn generic(&mut self, s: RunSequent, fi: usize, depth: usize) -> Verdict {
        let step = match bta_step(&s) {
            Ok(step) => step,
            Err(e) => {
                self.log(depth, &s, Some(fi), format!("unknown: {e}"));
                return Verdict::Unknown(e.to_string());
            }
        };
        match step {
            Step::Det { label, next } => {
                self.log(depth, &s, Some(fi), label.to_string());
                self.run(next, depth + 1)
            }
            Step::Fail { label, why } => {
                self.log(depth, &s, Some(fi), format!("{label} fails: {why}"));
                Verdict::Underivable
            }
            Step::Exists { label, branches } => {
                self.log(depth, &s, Some(fi), label.to_string());
                let mut out = Vec::new();
                for b in branches {
                    let v = self.run(b, depth + 1);
                    let done = v == Verdict::Derivable;
                    out.push(v);
                    if done {
                        break;
                    }
                }
                any_of(out)
            }
            Step::ExistsN { label, family } => {
                let (ns, complete) = self.indices(&family);
                self.log(depth, &s, Some(fi), format!("{label} n<={}", self.budget.n_cap));
                let mut out = Vec::new();
                for n in ns {
                    let Some(next) = family.instance(&n) else { continue };
                    let v = self.run(next, depth + 1);
                    let done = v == Verdict::Derivable;
                    out.push(v);
                    if done {
                        return Verdict::Derivable;
                    }
                }
                match any_of(out) {
                    Verdict::Underivable if !complete => {
                        Verdict::Unknown(format!("{label}: no instance up to n={} succeeds", self.budget.n_cap))
                    }
                    v => v,
                }
            }
            Step::ForallN { label, family } => {
                let (ns, complete) = self.indices(&family);
                self.log(depth, &s, Some(fi), format!("{label} n<={}", self.budget.n_cap));
                let mut unknown = None;
                for n in ns {
                    let Some(next) = family.instance(&n) else { continue };
                    match self.run(next, depth + 1) {
                        Verdict::Underivable => return Verdict::Underivable,
                        Verdict::Unknown(why) => {
                            unknown.get_or_insert(why);
                        }
                        Verdict::Derivable => {}
                    }
                }
                match unknown {
                    Some(why) => Verdict::Unknown(why),
                    None if complete => Verdict::Derivable,
                    None => Verdict::Unknown(format!("{label}: all instances up to n={} succeed", self.budget.n_cap)),
                }
            }
        }
    }

    /// Indices to try, and whether they exhaust the family.
    fn indices(&self, family: &Family) -> (Vec<BigUint>, bool) {
        let cap = BigUint::from(self.budget.n_cap);
        match family.bound() {
            None => (num_iter(&cap), false),
            Some(b) if b <= cap => (num_iter(&b), true),
            Some(b) => {
                let mut ns = vec![b];
                ns.extend(num_iter(&cap));
                (ns, false)
            }
        }
    }
}

fn num_iter(upto: &BigUint) -> Vec<BigUint> {
    let n = upto.to_u64().unwrap_or(u64::MAX);
    (0..=n).map(BigUint::from).collect()
}

/// `a_L, a_1^inp, a_X, eps` (the `a_1` block may be empty).
fn main_prefix(gamma: &[Item]) -> Option<(BigUint, Arc<str>)> {
    match gamma {
        [l, Item::Run(a), Item::Run(x), e]
            if is_single(l, A_L) && &*a.atom == A_1 && x.count.is_one() && is_single(e, EPS) =>
        {
            Some((a.count.clone(), x.atom.clone()))
        }
        [l, Item::Run(x), e] if is_single(l, A_L) && x.count.is_one() && is_single(e, EPS) => {
            Some((BigUint::zero(), x.atom.clone()))
        }
        _ => None,
    }
}

/// Choice codes with pairwise different `ℱ_1` outputs: `0` stands for every
/// invalid code, then one code per visible member and witness tuple. The flag
/// says whether these are all outputs there are.
pub fn choice_codes(inp: &BigUint, budget: &DecideBudget) -> (Vec<BigUint>, bool) {
    let mut codes = vec![BigUint::zero()];
    let Some(r) = ReductionInput::parse_code(inp) else { return (codes, true) };
    if r.index.alpha.is_zero() {
        return (codes, true);
    }
    let (members, mut exact) = visible_members(&r.index.e, budget.computability());
    for m in members {
        let Some((beta, j, _)) = decode_member(&m) else { continue };
        if beta >= r.index.alpha {
            continue;
        }
        let Some(y) = halt_time(&m, &r.index.e, budget.halt) else {
            exact = false;
            continue;
        };
        if j > 0 {
            exact = false;
        }
        let Some(j) = usize::try_from(j).ok().filter(|&j| j <= 16) else { continue };
        let mut ws = vec![0u64; j];
        let mut count = 0;
        loop {
            codes.push(choice_code(&m, y as u64, &ws));
            count += 1;
            if count >= WITNESS_CAP || !next_tuple(&mut ws, budget.witness) {
                break;
            }
        }
    }
    (codes, exact)
}

/// Odometer over `[0, max]^len`; false once it wraps around.
fn next_tuple(ws: &mut [u64], max: u64) -> bool {
    for w in ws.iter_mut() {
        if *w < max {
            *w += 1;
            return true;
        }
        *w = 0;
    }
    false
}

/// Decides `Seq(inp)` of the given variant.
pub fn decide_encoded(inp: &BigUint, variant: Variant, budget: DecideBudget) -> Decision {
    Decider::new(budget).decide(&seq_encode(inp, variant))
}

/// The walk from `a_L, a_1^inp, a_Pi, eps, E_0, E_1, E_2` down to the
/// sequent with `E_Pi` in front, one line per statement used.
pub fn dispatch_chain(inp: &BigUint) -> Result<Vec<String>, BtaError> {
    let mut s = seq_with_exponents(inp, A_PI, &[2, 1, 0], Variant::Standard);
    let mut lines = Vec::new();
    loop {
        let fi = first_formula(&s).ok_or(BtaError::NoFocus)?;
        if let Item::Formula(f) = &s.ant[fi] {
            if classify(f) == Some(Named::Pi) {
                lines.push(render(&s, None));
                return Ok(lines);
            }
        }
        let (label, next) = match bta_step(&s)? {
            Step::Det { label, next } => (label, next),
            Step::Exists { label, branches } => {
                let mut live: Vec<RunSequent> =
                    branches.into_iter().filter(|b| !matches!(bta_step(b), Ok(Step::Fail { .. }))).collect();
                if live.len() != 1 {
                    return Err(BtaError::NoItem(format!("{} live branches", live.len())));
                }
                (label, live.remove(0))
            }
            _ => return Err(BtaError::NoItem(render(&s, Some(fi)))),
        };
        lines.push(format!("{}  {label}", render(&s, Some(fi))));
        s = next;
    }
}

/// The `Killer` formula closing the minus-variant sequent.
pub fn killer() -> Formula {
    energy_formula(EnergyKind::Killer)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(text: &str) -> RunSequent {
        text.parse().expect("run sequent")
    }

    fn decide(text: &str) -> Verdict {
        Decider::new(DecideBudget::default()).decide(&rs(text)).verdict
    }

    #[test]
    fn locked_shapes() {
        assert!(is_locked(&"p\\q".parse::<Formula>().unwrap()));
        assert!(is_locked(&"p\\q & r\\(s.t)".parse::<Formula>().unwrap()));
        assert!(!is_locked(&"p.q".parse::<Formula>().unwrap()));
        assert!(!is_locked(&"(p.q)\\r".parse::<Formula>().unwrap()));
    }

    #[test]
    fn under_needs_the_atom_in_front() {
        let s = rs("a_L, okay, okay\\okay |- a_L.okay");
        assert!(matches!(bta_step(&s), Ok(Step::Det { label: Statement::Under, .. })));
        let s = rs("a_L, okay, eps\\okay |- a_L.okay");
        assert!(matches!(bta_step(&s), Ok(Step::Fail { .. })));
    }

    #[test]
    fn mixed_context_side_condition() {
        let s = rs("a_L, @p, okay, go\\okay |- a_L.okay");
        let Ok(Step::Exists { label: Statement::Nabla, branches }) = bta_step(&s) else { panic!() };
        assert_eq!(branches.len(), 4);
        let s = rs("a_L, @p, go, go\\okay |- a_L.okay");
        assert!(matches!(bta_step(&s), Err(BtaError::SideCondition(_))));
    }

    #[test]
    fn chain_strips_all_layers() {
        let s = rs("a_L, q, p, p\\q\\okay, go, s\\r |- a_L.okay");
        let Ok(Step::Det { label: Statement::UnderChain, next }) = bta_step(&s) else { panic!() };
        assert_eq!(next.to_string(), "a_L, okay, go, s\\r |- a_L.okay");
    }

    #[test]
    fn small_verdicts() {
        assert_eq!(decide("a_L, okay |- a_L.okay"), Verdict::Derivable);
        assert_eq!(decide("a_L, okay, okay |- a_L.okay"), Verdict::Underivable);
        assert_eq!(decide("a_L, p, p\\okay |- a_L.okay"), Verdict::Derivable);
        assert_eq!(decide("a_L, p, (q\\okay) & (p\\okay) |- a_L.okay"), Verdict::Derivable);
        assert_eq!(decide("a_L, p*\\okay |- a_L.okay"), Verdict::Derivable);
        assert_eq!(decide("a_L, p^{3}, p*\\okay |- a_L.okay"), Verdict::Derivable);
        assert!(matches!(decide("a_L, !p, p\\okay |- a_L.okay"), Verdict::Derivable));
    }

    #[test]
    fn go_block_moves() {
        let s = rs("a_L, go, go\\(p.go), go\\(p.go), go\\okay |- a_L.okay");
        assert_eq!(shift_go(&s).unwrap().to_string(), "a_L, p^{2}, go, go\\okay |- a_L.okay");
    }

    #[test]
    fn okay_closure_shape() {
        assert!(okay_closes(&rs("a_L, okay, (okay\\okay) & (go\\eps) |- a_L.okay")));
        assert!(!okay_closes(&rs("a_L, okay, go\\eps |- a_L.okay")));
    }

    #[test]
    fn dispatch_chain_for_five() {
        let lines = dispatch_chain(&BigUint::from(5u32)).unwrap();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "a_L, a_1^{5}, a_Pi, eps, [OKAY & eps\\Energy], E_1, E_2 |- a_L.okay  1c (&)");
        assert_eq!(lines[4], "a_L, a_1^{5}, E_Pi, E_1, E_2 |- a_L.okay");
    }
}
