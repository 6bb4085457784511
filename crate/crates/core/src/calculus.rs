//! Rule applications, finite derivation trees, the premise function on Gödel
//! codes, and the transformations that bring a derivation into basic form.
//!
//! A rule application is addressed by a [`RuleDescriptor`]: `m` is the
//! position of the principal formula (`0` for the succedent, `1..=n` for the
//! antecedent) and `l` is a rule-specific parameter:
//!
//! | principal          | `l`                                              |
//! |--------------------|--------------------------------------------------|
//! | `B\A` on the left  | length of `Π` (taken immediately to the left)    |
//! | `A/B` on the left  | length of `Π` (taken immediately to the right)   |
//! | `A∧B` on the left  | `1` or `2`, the conjunct kept                    |
//! | `!A` on the left   | `n`, the number of copies                        |
//! | `∇A` on the left   | `0` for ∇L, `2d-1` / `2d` to move it `d` places right / left going up |
//! | `A·B` on the right | length of the antecedent part proving `A`        |
//! | `A∨B` on the right | `1` or `2`, the disjunct proved                  |
//! | `A*` on the right  | `⟨n-1, lens⟩` with `lens` the first `n-1` part lengths |
//! | anything else      | `0`                                              |
//!
//! An optional [`Perm`] fuses one ∇-permutation under the rule: it is applied
//! to the conclusion first and `(m, l)` then address the permuted sequent.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::ordinals::{pair, unpair};
use crate::syntax::Formula::*;
use crate::syntax::{goedel_decode, goedel_encode, meet, Formula, Sequent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    /// ∇P_1: going up, the ∇-formula moves right.
    Right,
    /// ∇P_2: going up, the ∇-formula moves left.
    Left,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    /// 1-based antecedent position of the ∇-formula in the conclusion.
    pub pos: usize,
    pub dir: Dir,
    pub dist: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleDescriptor {
    pub m: usize,
    pub l: u64,
    pub perm: Option<Perm>,
}

impl RuleDescriptor {
    pub fn new(m: usize, l: u64) -> Self {
        RuleDescriptor { m, l, perm: None }
    }

    /// `t = 2⟨m,l⟩` for plain rules, `2⟨⟨m,l⟩,⟨pos,⟨dir,dist⟩⟩⟩+1` with a fused
    /// permutation.
    pub fn code(&self) -> Option<u64> {
        let ml = pair(self.m as u64, self.l)?;
        match self.perm {
            None => ml.checked_mul(2),
            Some(p) => {
                let dir = u64::from(p.dir == Dir::Left);
                let pp = pair(p.pos as u64, pair(dir, p.dist as u64)?)?;
                pair(ml, pp)?.checked_mul(2)?.checked_add(1)
            }
        }
    }

    pub fn decode(t: u64) -> Option<Self> {
        let half = t / 2;
        if t.is_multiple_of(2) {
            let (m, l) = unpair(half);
            return Some(RuleDescriptor { m: usize::try_from(m).ok()?, l, perm: None });
        }
        let (ml, pp) = unpair(half);
        let (m, l) = unpair(ml);
        let (pos, dd) = unpair(pp);
        let (dir, dist) = unpair(dd);
        let dir = match dir {
            0 => Dir::Right,
            1 => Dir::Left,
            _ => return None,
        };
        Some(RuleDescriptor {
            m: usize::try_from(m).ok()?,
            l,
            perm: Some(Perm { pos: usize::try_from(pos).ok()?, dir, dist: usize::try_from(dist).ok()? }),
        })
    }
}

impl fmt::Display for RuleDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{}", self.m, self.l)?;
        if let Some(p) = self.perm {
            let d = if p.dir == Dir::Right { 'R' } else { 'L' };
            write!(f, ",{},{},{}", p.pos, d, p.dist)?;
        }
        f.write_str(")")
    }
}

/// Encodes the first `n-1` part lengths of a ∗R_n split.
pub fn encode_lens(lens: &[u64]) -> Option<u64> {
    match lens {
        [] => Some(0),
        [x] => Some(*x),
        [x, rest @ ..] => pair(*x, encode_lens(rest)?),
    }
}

fn decode_lens(code: u64, k: usize) -> Option<Vec<u64>> {
    match k {
        0 => (code == 0).then(Vec::new),
        1 => Some(vec![code]),
        _ => {
            let (x, rest) = unpair(code);
            let mut v = vec![x];
            v.extend(decode_lens(rest, k - 1)?);
            Some(v)
        }
    }
}

/// `l` for a ∗R_n application with the given part lengths (all `n` of them).
pub fn star_right_param(lens: &[u64]) -> Option<u64> {
    let n = lens.len().checked_sub(1)?;
    pair(n as u64, encode_lens(&lens[..n])?)
}

pub fn is_axiom(s: &Sequent) -> bool {
    (s.ant.len() == 1 && s.ant[0] == s.succ)
        || (s.ant.is_empty() && matches!(s.succ, One | Star(_)))
        || s.ant.contains(&Zero)
}

/// Applies a fused permutation to a conclusion.
pub fn apply_perm(s: &Sequent, p: Perm) -> Option<Sequent> {
    let i = p.pos.checked_sub(1)?;
    if p.dist == 0 || !matches!(s.ant.get(i)?, Nabla(_)) {
        return None;
    }
    let j = match p.dir {
        Dir::Right => i + p.dist,
        Dir::Left => i.checked_sub(p.dist)?,
    };
    if j >= s.ant.len() {
        return None;
    }
    let mut ant = s.ant.clone();
    let f = ant.remove(i);
    ant.insert(j, f);
    Some(Sequent::new(ant, s.succ.clone()))
}

fn with_ant(s: &Sequent, ant: Vec<Formula>) -> Sequent {
    Sequent::new(ant, s.succ.clone())
}

fn splice(ant: &[Formula], lo: usize, hi: usize, mid: &[Formula]) -> Vec<Formula> {
    let mut v = ant[..lo].to_vec();
    v.extend_from_slice(mid);
    v.extend_from_slice(&ant[hi..]);
    v
}

/// Premises of an application, or `None` when the descriptor does not
/// denote one. The ω-rule has no finite premise list and is `None` here; see
/// [`premise_at`].
pub fn premises(s: &Sequent, d: &RuleDescriptor) -> Option<Vec<Sequent>> {
    match Application::resolve(s, d)? {
        Application::Finite(v) => Some(v),
        Application::Omega { .. } => None,
    }
}

/// The `k`-th premise (0-based), including the ω-rule whose `k`-th premise
/// has `k` copies of the starred formula.
pub fn premise_at(s: &Sequent, d: &RuleDescriptor, k: usize) -> Option<Sequent> {
    match Application::resolve(s, d)? {
        Application::Finite(v) => v.get(k).cloned(),
        Application::Omega { base, pos, body } => {
            let mid = vec![body; k];
            Some(with_ant(&base, splice(&base.ant, pos, pos + 1, &mid)))
        }
    }
}

enum Application {
    Finite(Vec<Sequent>),
    Omega { base: Sequent, pos: usize, body: Formula },
}

impl Application {
    fn resolve(s: &Sequent, d: &RuleDescriptor) -> Option<Self> {
        let s = match d.perm {
            None => s.clone(),
            Some(p) => {
                let t = apply_perm(s, p)?;
                // A fused permutation must sit under a genuine rule.
                if d.m > 0 && matches!(t.ant.get(d.m - 1), Some(Nabla(_))) && d.l > 0 {
                    return None;
                }
                t
            }
        };
        if is_axiom(&s) && d.m == 0 && matches!(s.succ, One) {
            return None;
        }
        if d.m == 0 {
            right_rule(&s, d.l).map(Application::Finite)
        } else {
            left_rule(&s, d.m - 1, d.l)
        }
    }
}

fn right_rule(s: &Sequent, l: u64) -> Option<Vec<Sequent>> {
    let ant = &s.ant;
    match &s.succ {
        Under(b, a) if l == 0 => {
            let mut v = vec![(**b).clone()];
            v.extend_from_slice(ant);
            Some(vec![Sequent::new(v, (**a).clone())])
        }
        Over(a, b) if l == 0 => {
            let mut v = ant.clone();
            v.push((**b).clone());
            Some(vec![Sequent::new(v, (**a).clone())])
        }
        Prod(a, b) => {
            let k = usize::try_from(l).ok().filter(|&k| k <= ant.len())?;
            Some(vec![Sequent::new(ant[..k].to_vec(), (**a).clone()), Sequent::new(ant[k..].to_vec(), (**b).clone())])
        }
        Meet(a, b) if l == 0 => {
            Some(vec![Sequent::new(ant.clone(), (**a).clone()), Sequent::new(ant.clone(), (**b).clone())])
        }
        Join(a, b) => match l {
            1 => Some(vec![Sequent::new(ant.clone(), (**a).clone())]),
            2 => Some(vec![Sequent::new(ant.clone(), (**b).clone())]),
            _ => None,
        },
        Bang(b) if l == 0 => match ant.as_slice() {
            [Bang(a)] => Some(vec![Sequent::new(vec![(**a).clone()], (**b).clone())]),
            _ => None,
        },
        Nabla(b) if l == 0 => match ant.as_slice() {
            [Nabla(a)] => Some(vec![Sequent::new(vec![(**a).clone()], (**b).clone())]),
            _ => None,
        },
        Star(a) => {
            let (n1, lens_code) = unpair(l);
            let n1 = usize::try_from(n1).ok().filter(|&n| n < ant.len().max(1) + 1)?;
            let lens = decode_lens(lens_code, n1)?;
            let total: u64 = lens.iter().try_fold(0u64, |acc, &x| acc.checked_add(x))?;
            let rest = (ant.len() as u64).checked_sub(total)?;
            let mut out = Vec::with_capacity(n1 + 1);
            let mut at = 0usize;
            for len in lens.into_iter().chain(std::iter::once(rest)) {
                let len = len as usize;
                out.push(Sequent::new(ant[at..at + len].to_vec(), (**a).clone()));
                at += len;
            }
            Some(out)
        }
        _ => None,
    }
}

fn left_rule(s: &Sequent, i: usize, l: u64) -> Option<Application> {
    let ant = &s.ant;
    let f = ant.get(i)?;
    let fin = |v: Vec<Sequent>| Some(Application::Finite(v));
    match f {
        Under(b, a) => {
            let k = usize::try_from(l).ok().filter(|&k| k <= i)?;
            let lo = i - k;
            fin(vec![
                with_ant(s, splice(ant, lo, i + 1, &[(**a).clone()])),
                Sequent::new(ant[lo..i].to_vec(), (**b).clone()),
            ])
        }
        Over(a, b) => {
            let k = usize::try_from(l).ok().filter(|&k| i + 1 + k <= ant.len())?;
            fin(vec![
                with_ant(s, splice(ant, i, i + 1 + k, &[(**a).clone()])),
                Sequent::new(ant[i + 1..i + 1 + k].to_vec(), (**b).clone()),
            ])
        }
        Prod(a, b) if l == 0 => fin(vec![with_ant(s, splice(ant, i, i + 1, &[(**a).clone(), (**b).clone()]))]),
        Meet(a, b) => match l {
            1 => fin(vec![with_ant(s, splice(ant, i, i + 1, &[(**a).clone()]))]),
            2 => fin(vec![with_ant(s, splice(ant, i, i + 1, &[(**b).clone()]))]),
            _ => None,
        },
        Join(a, b) if l == 0 => fin(vec![
            with_ant(s, splice(ant, i, i + 1, &[(**a).clone()])),
            with_ant(s, splice(ant, i, i + 1, &[(**b).clone()])),
        ]),
        One if l == 0 => fin(vec![with_ant(s, splice(ant, i, i + 1, &[]))]),
        Bang(a) => {
            let n = usize::try_from(l).ok()?;
            // Guard against absurd copy counts coming from decoded numbers.
            if n > 1 << 16 {
                return None;
            }
            fin(vec![with_ant(s, splice(ant, i, i + 1, &vec![(**a).clone(); n]))])
        }
        Star(a) if l == 0 => Some(Application::Omega { base: s.clone(), pos: i, body: (**a).clone() }),
        Nabla(a) => {
            if l == 0 {
                return fin(vec![with_ant(s, splice(ant, i, i + 1, &[(**a).clone()]))]);
            }
            let dist = usize::try_from(l.div_ceil(2)).ok()?;
            let dir = if l % 2 == 1 { Dir::Right } else { Dir::Left };
            fin(vec![apply_perm(s, Perm { pos: i + 1, dir, dist })?])
        }
        _ => None,
    }
}

/// Human-readable rule name of a valid application.
pub fn rule_name(s: &Sequent, d: &RuleDescriptor) -> Option<String> {
    let t = match d.perm {
        None => s.clone(),
        Some(p) => apply_perm(s, p)?,
    };
    let base = if d.m == 0 {
        match &t.succ {
            Under(..) => "\\R".to_string(),
            Over(..) => "/R".to_string(),
            Prod(..) => ".R".to_string(),
            Meet(..) => "&R".to_string(),
            Join(..) => format!("|R{}", d.l),
            Bang(_) => "!R".to_string(),
            Nabla(_) => "@R".to_string(),
            Star(_) => format!("*R{}", unpair(d.l).0 + 1),
            _ => return None,
        }
    } else {
        match t.ant.get(d.m - 1)? {
            Under(..) => "\\L".to_string(),
            Over(..) => "/L".to_string(),
            Prod(..) => ".L".to_string(),
            Meet(..) => format!("&L{}", d.l),
            Join(..) => "|L".to_string(),
            One => "1L".to_string(),
            Bang(_) => format!("!L{}", d.l),
            Star(_) => "*Lw".to_string(),
            Nabla(_) if d.l == 0 => "@L".to_string(),
            Nabla(_) => format!("@P{}", if d.l % 2 == 1 { 1 } else { 2 }),
            _ => return None,
        }
    };
    Some(match d.perm {
        None => base,
        Some(p) => format!("{base}+@P{}", if p.dir == Dir::Right { 1 } else { 2 }),
    })
}

/// Whether every premise has strictly smaller rank than the conclusion. For
/// the ω-rule the first `OMEGA_PROBE` premises are compared.
pub fn rank_decreases(s: &Sequent, d: &RuleDescriptor) -> Option<bool> {
    let r = s.rank();
    match premises(s, d) {
        Some(ps) => Some(ps.iter().all(|p| p.rank() < r)),
        None => {
            let ps: Option<Vec<Sequent>> = (0..OMEGA_PROBE).map(|k| premise_at(s, d, k)).collect();
            ps.map(|ps| ps.iter().all(|p| p.rank() < r))
        }
    }
}

const OMEGA_PROBE: usize = 8;

/// For each antecedent position of the conclusion, where that occurrence
/// lands in each premise. Principal formulas map to `None`.
pub fn occurrence_map(s: &Sequent, d: &RuleDescriptor) -> Option<Vec<Vec<Option<usize>>>> {
    let n = s.ant.len();
    // Position of each conclusion occurrence inside the permuted sequent.
    let mut through: Vec<usize> = (0..n).collect();
    if let Some(p) = d.perm {
        apply_perm(s, p)?;
        let i = p.pos - 1;
        let j = if p.dir == Dir::Right { i + p.dist } else { i - p.dist };
        let mut order: Vec<usize> = (0..n).collect();
        let x = order.remove(i);
        order.insert(j, x);
        for (newpos, &old) in order.iter().enumerate() {
            through[old] = newpos;
        }
    }
    let t = match d.perm {
        None => s.clone(),
        Some(p) => apply_perm(s, p)?,
    };
    let inner = inner_map(&t, d)?;
    Some(inner.into_iter().map(|per| through.iter().map(|&k| per[k]).collect()).collect())
}

fn inner_map(t: &Sequent, d: &RuleDescriptor) -> Option<Vec<Vec<Option<usize>>>> {
    let n = t.ant.len();
    let id = |shift: isize, lo: usize, hi: usize| -> Vec<Option<usize>> {
        (0..n).map(|k| (k >= lo && k < hi).then(|| (k as isize + shift) as usize)).collect()
    };
    let ident = || (0..n).map(Some).collect::<Vec<_>>();
    if d.m == 0 {
        return Some(match &t.succ {
            Under(..) => vec![id(1, 0, n)],
            Over(..) => vec![ident()],
            Prod(..) => {
                let k = d.l as usize;
                vec![id(0, 0, k), id(-(k as isize), k, n)]
            }
            Meet(..) => vec![ident(), ident()],
            Join(..) => vec![ident()],
            Bang(_) | Nabla(_) => vec![vec![None; n]],
            Star(_) => {
                let ps = premises(t, d)?;
                let mut out = Vec::new();
                let mut at = 0usize;
                for p in &ps {
                    let len = p.ant.len();
                    out.push(id(-(at as isize), at, at + len));
                    at += len;
                }
                out
            }
            _ => return None,
        });
    }
    let i = d.m - 1;
    let skip = |grow: isize| -> Vec<Option<usize>> {
        // Occurrences left of `i` stay; right of `i` shift by `grow`.
        (0..n)
            .map(|j| match j.cmp(&i) {
                std::cmp::Ordering::Less => Some(j),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some((j as isize + grow) as usize),
            })
            .collect()
    };
    Some(match t.ant.get(i)? {
        Under(..) => {
            let k = d.l as usize;
            let lo = i - k;
            let first: Vec<Option<usize>> = (0..n)
                .map(|j| {
                    if j < lo {
                        Some(j)
                    } else if j <= i {
                        None
                    } else {
                        Some(j - k)
                    }
                })
                .collect();
            vec![first, id(-(lo as isize), lo, i)]
        }
        Over(..) => {
            let k = d.l as usize;
            let first: Vec<Option<usize>> = (0..n)
                .map(|j| {
                    if j < i {
                        Some(j)
                    } else if j <= i + k {
                        None
                    } else {
                        Some(j - k)
                    }
                })
                .collect();
            vec![first, id(-(i as isize + 1), i + 1, i + 1 + k)]
        }
        Prod(..) => vec![skip(1)],
        Meet(..) => vec![skip(0)],
        Join(..) => vec![skip(0), skip(0)],
        One => vec![skip(-1)],
        Bang(_) => vec![skip(d.l as isize - 1)],
        Nabla(_) if d.l == 0 => vec![skip(0)],
        Nabla(_) => {
            let p = t.ant.len();
            let dist = d.l.div_ceil(2) as usize;
            let j = if d.l % 2 == 1 { i + dist } else { i - dist };
            let mut order: Vec<usize> = (0..p).collect();
            let x = order.remove(i);
            order.insert(j, x);
            let mut m = vec![None; p];
            for (newpos, &old) in order.iter().enumerate() {
                if old != i {
                    m[old] = Some(newpos);
                }
            }
            vec![m]
        }
        _ => return None,
    })
}

/// Every application of a non-permutation rule to `s`, with `!L_n` capped at
/// `n_max` and ∗R_n restricted to nonempty parts. The ω-rule is omitted.
pub fn applications(s: &Sequent, n_max: u64) -> Vec<(RuleDescriptor, Vec<Sequent>)> {
    let mut out = Vec::new();
    let mut push = |d: RuleDescriptor| {
        if let Some(ps) = premises(s, &d) {
            out.push((d, ps));
        }
    };
    let n = s.ant.len();
    match &s.succ {
        Prod(..) => (0..=n as u64).for_each(|k| push(RuleDescriptor::new(0, k))),
        Join(..) => (1..=2).for_each(|k| push(RuleDescriptor::new(0, k))),
        Star(_) => {
            for lens in compositions(n) {
                if let Some(l) = star_right_param(&lens) {
                    push(RuleDescriptor::new(0, l));
                }
            }
        }
        _ => push(RuleDescriptor::new(0, 0)),
    }
    for (i, f) in s.ant.iter().enumerate() {
        let m = i + 1;
        match f {
            Under(..) => (0..=i as u64).for_each(|k| push(RuleDescriptor::new(m, k))),
            Over(..) => (0..(n - i) as u64).for_each(|k| push(RuleDescriptor::new(m, k))),
            Meet(..) => (1..=2).for_each(|k| push(RuleDescriptor::new(m, k))),
            Bang(_) => (0..=n_max).for_each(|k| push(RuleDescriptor::new(m, k))),
            Star(_) | Prim(_) | Zero => {}
            _ => push(RuleDescriptor::new(m, 0)),
        }
    }
    out
}

/// All ∇-permutations applicable to `s`, as bare descriptors.
pub fn permutations(s: &Sequent) -> Vec<Perm> {
    let n = s.ant.len();
    let mut out = Vec::new();
    for (i, f) in s.ant.iter().enumerate() {
        if matches!(f, Nabla(_)) {
            for d in 1..n - i {
                out.push(Perm { pos: i + 1, dir: Dir::Right, dist: d });
            }
            for d in 1..=i {
                out.push(Perm { pos: i + 1, dir: Dir::Left, dist: d });
            }
        }
    }
    out
}

/// Applications of generalized rules: plain ones plus every single fused
/// permutation followed by a non-permutation rule.
pub fn generalized_applications(s: &Sequent, n_max: u64) -> Vec<(RuleDescriptor, Vec<Sequent>)> {
    let mut out = applications(s, n_max);
    out.retain(|(d, _)| !is_bare_perm(s, d));
    for p in permutations(s) {
        let t = apply_perm(s, p).expect("enumerated permutation applies");
        for (d, ps) in applications(&t, n_max) {
            if is_bare_perm(&t, &d) {
                continue;
            }
            out.push((RuleDescriptor { perm: Some(p), ..d }, ps));
        }
    }
    out
}

fn is_bare_perm(s: &Sequent, d: &RuleDescriptor) -> bool {
    d.m > 0 && d.l > 0 && matches!(s.ant.get(d.m - 1), Some(Nabla(_)))
}

/// Ordered splits of `n` into nonempty parts (just `[0]` when `n = 0`).
fn compositions(n: usize) -> Vec<Vec<u64>> {
    if n == 0 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for mask in 0u64..(1 << (n - 1)) {
        let mut parts = Vec::new();
        let mut len = 1u64;
        for b in 0..n - 1 {
            if mask >> b & 1 == 1 {
                parts.push(len);
                len = 1;
            } else {
                len += 1;
            }
        }
        parts.push(len);
        out.push(parts);
    }
    out
}

/// `Premise(c, t, k)` on Gödel codes: the code of the `(k+1)`-th premise,
/// `⌜1 ⊢ 1⌝` past the last premise, and `0` for an invalid code or rule.
pub fn premise_code(c: &BigUint, t: u64, k: usize) -> BigUint {
    let (Some(s), Some(d)) = (goedel_decode(c), RuleDescriptor::decode(t)) else {
        return BigUint::zero();
    };
    if let Some(ps) = premises(&s, &d) {
        return match ps.get(k) {
            Some(p) => goedel_encode(p),
            None => goedel_encode(&Sequent::new(vec![One], One)),
        };
    }
    match premise_at(&s, &d, k) {
        Some(p) => goedel_encode(&p),
        None => BigUint::zero(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Step {
    Axiom,
    Hyp,
    Rule(RuleDescriptor),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DerivationTree {
    pub node: Sequent,
    pub step: Step,
    pub children: Vec<DerivationTree>,
}

impl DerivationTree {
    pub fn axiom(node: Sequent) -> Self {
        DerivationTree { node, step: Step::Axiom, children: vec![] }
    }

    pub fn hyp(node: Sequent) -> Self {
        DerivationTree { node, step: Step::Hyp, children: vec![] }
    }

    pub fn rule(node: Sequent, d: RuleDescriptor, children: Vec<DerivationTree>) -> Self {
        DerivationTree { node, step: Step::Rule(d), children }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(DerivationTree::size).sum::<usize>()
    }

    pub fn hypotheses(&self) -> Vec<&Sequent> {
        if self.step == Step::Hyp {
            return vec![&self.node];
        }
        self.children.iter().flat_map(DerivationTree::hypotheses).collect()
    }

    /// Indented text, one node per line, `@(m,l[,pos,dir,dist])`, `@(ax)` or
    /// `@(hyp)` at the end of each line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }

    fn write_text(&self, depth: usize, out: &mut String) {
        use std::fmt::Write;
        let tag = match self.step {
            Step::Axiom => "(ax)".to_string(),
            Step::Hyp => "(hyp)".to_string(),
            Step::Rule(d) => d.to_string(),
        };
        let _ = writeln!(out, "{}{} @{}", "  ".repeat(depth), self.node, tag);
        for c in &self.children {
            c.write_text(depth + 1, out);
        }
    }

    pub fn parse(text: &str) -> Result<Self, ProofFileError> {
        let mut lines = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            if raw.trim().is_empty() || raw.trim_start().starts_with('#') {
                continue;
            }
            let indent = raw.len() - raw.trim_start().len();
            let (seq, step) = split_step(raw.trim())
                .ok_or(ProofFileError { line: no + 1, msg: "missing or malformed rule suffix".into() })?;
            let node: Sequent = seq
                .parse()
                .map_err(|e: crate::syntax::ParseError| ProofFileError { line: no + 1, msg: e.to_string() })?;
            lines.push((no + 1, indent, node, step));
        }
        let mut pos = 0;
        let tree = build(&lines, &mut pos, 0)?;
        if pos != lines.len() {
            return Err(ProofFileError { line: lines[pos].0, msg: "more than one root".into() });
        }
        Ok(tree)
    }
}

impl fmt::Debug for DerivationTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("proof file line {line}: {msg}")]
pub struct ProofFileError {
    pub line: usize,
    pub msg: String,
}

fn split_step(line: &str) -> Option<(&str, Step)> {
    let body = line.strip_suffix(')')?;
    let open = body.rfind("@(")?;
    let inner = &body[open + 2..];
    let step = match inner {
        "ax" => Step::Axiom,
        "hyp" => Step::Hyp,
        _ => {
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            let num = |s: &str| s.parse::<u64>().ok();
            let (m, l) = (num(parts.first()?)? as usize, num(parts.get(1)?)?);
            let perm = match parts.len() {
                2 => None,
                5 => Some(Perm {
                    pos: num(parts[2])? as usize,
                    dir: match parts[3] {
                        "R" => Dir::Right,
                        "L" => Dir::Left,
                        _ => return None,
                    },
                    dist: num(parts[4])? as usize,
                }),
                _ => return None,
            };
            Step::Rule(RuleDescriptor { m, l, perm })
        }
    };
    Some((body[..open].trim_end(), step))
}

fn build(
    lines: &[(usize, usize, Sequent, Step)],
    pos: &mut usize,
    indent: usize,
) -> Result<DerivationTree, ProofFileError> {
    let Some((no, ind, node, step)) = lines.get(*pos).cloned() else {
        return Err(ProofFileError { line: 0, msg: "empty proof".into() });
    };
    if ind != indent {
        return Err(ProofFileError { line: no, msg: format!("expected indentation {indent}") });
    }
    *pos += 1;
    let mut children = Vec::new();
    while let Some((_, ci, _, _)) = lines.get(*pos) {
        if *ci <= indent {
            break;
        }
        let child_indent = *ci;
        children.push(build(lines, pos, child_indent)?);
    }
    Ok(DerivationTree { node, step, children })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("node {path:?} ({node}): {msg}")]
pub struct CheckError {
    pub path: Vec<usize>,
    pub node: String,
    pub msg: String,
}

/// Verifies every inference; reports the first failing node.
pub fn check_derivation(d: &DerivationTree, allow_hypotheses: bool) -> Result<(), CheckError> {
    check_at(d, allow_hypotheses, &mut Vec::new())
}

fn check_at(d: &DerivationTree, allow_hyp: bool, path: &mut Vec<usize>) -> Result<(), CheckError> {
    let fail = |msg: &str, path: &Vec<usize>| CheckError {
        path: path.clone(),
        node: d.node.to_string(),
        msg: msg.to_string(),
    };
    match d.step {
        Step::Axiom => {
            if !d.children.is_empty() || !is_axiom(&d.node) {
                return Err(fail("not an axiom", path));
            }
        }
        Step::Hyp => {
            if !allow_hyp {
                return Err(fail("hypothesis leaf in a complete derivation", path));
            }
        }
        Step::Rule(r) => {
            let Some(ps) = premises(&d.node, &r) else {
                return Err(fail(&format!("descriptor {r} is not a rule application here"), path));
            };
            let got: Vec<&Sequent> = d.children.iter().map(|c| &c.node).collect();
            if got.len() != ps.len() || got.iter().zip(&ps).any(|(a, b)| *a != b) {
                return Err(fail("children do not match the rule's premises", path));
            }
            for (k, c) in d.children.iter().enumerate() {
                path.push(k);
                check_at(c, allow_hyp, path)?;
                path.pop();
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicnessReport {
    pub ok: bool,
    pub violations: Vec<(Vec<usize>, u8)>,
}

/// Checks the three normal-form conditions of basic derivations.
pub fn check_basic(d: &DerivationTree) -> BasicnessReport {
    let mut violations = Vec::new();
    basic_at(d, &mut Vec::new(), &mut violations);
    BasicnessReport { ok: violations.is_empty(), violations }
}

fn basic_at(d: &DerivationTree, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, u8)>) {
    if let Step::Rule(r) = d.step {
        let t = match r.perm {
            None => Some(d.node.clone()),
            Some(p) => apply_perm(&d.node, p),
        };
        if let Some(t) = t {
            if r.m == 0 {
                if let Prod(a, b) = &t.succ {
                    if a.is_prim() && b.is_prim() && t.ant != [(**a).clone(), (**b).clone()] {
                        out.push((path.clone(), 2));
                    }
                }
            } else if let Some(f) = t.ant.get(r.m - 1) {
                match f {
                    Under(p, _) if p.is_prim() => {
                        if r.l != 1 || t.ant[r.m - 2] != **p {
                            out.push((path.clone(), 1));
                        }
                    }
                    Meet(a1, a2) => {
                        let chosen = if r.l == 1 { a1 } else { a2 };
                        if matches!(**chosen, Under(..)) {
                            let ok = d.children.first().is_some_and(|c| {
                                c.step == Step::Rule(RuleDescriptor::new(r.m, c_l(c)))
                                    && matches!(c.node.ant.get(r.m - 1), Some(Under(..)))
                                    && r.perm.is_none()
                            });
                            if !ok {
                                out.push((path.clone(), 3));
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
    }
    for (k, c) in d.children.iter().enumerate() {
        path.push(k);
        basic_at(c, path, out);
        path.pop();
    }
}

fn c_l(c: &DerivationTree) -> u64 {
    match c.step {
        Step::Rule(r) => r.l,
        _ => u64::MAX,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("root succedent is not primitive")]
    NotPrimitive,
    #[error("context sequent equals the trivial ⊢ p")]
    TrivialContext,
    #[error("hypothesis {found} does not match grafted root {expected}")]
    Mismatch { found: String, expected: String },
    #[error("occurrence {0} not found")]
    NoOccurrence(usize),
    #[error("malformed derivation: {0}")]
    Malformed(String),
}

/// `Aug(d; (Γ; Δ; C))`: replays `d : Π ⊢ p` inside the context, leaving the
/// single hypothesis `Γ, p, Δ ⊢ C`.
pub fn aug(
    d: &DerivationTree,
    gamma: &[Formula],
    delta: &[Formula],
    c: &Formula,
) -> Result<DerivationTree, TransformError> {
    if !d.node.succ.is_prim() {
        return Err(TransformError::NotPrimitive);
    }
    if gamma.is_empty() && delta.is_empty() && *c == d.node.succ {
        return Err(TransformError::TrivialContext);
    }
    aug_rec(d, gamma, delta, c)
}

fn aug_rec(
    d: &DerivationTree,
    gamma: &[Formula],
    delta: &[Formula],
    c: &Formula,
) -> Result<DerivationTree, TransformError> {
    let mut ant = gamma.to_vec();
    ant.extend_from_slice(&d.node.ant);
    ant.extend_from_slice(delta);
    let node = Sequent::new(ant, c.clone());
    match d.step {
        Step::Axiom if d.node.ant.len() == 1 && d.node.ant[0] == d.node.succ => {
            let mut h = gamma.to_vec();
            h.push(d.node.succ.clone());
            h.extend_from_slice(delta);
            Ok(DerivationTree::hyp(Sequent::new(h, c.clone())))
        }
        Step::Axiom => Ok(DerivationTree::axiom(node)),
        Step::Hyp => Err(TransformError::Malformed("hypothesis inside Aug input".into())),
        Step::Rule(r) => {
            if r.m == 0 {
                return Err(TransformError::Malformed("right rule with primitive succedent".into()));
            }
            let shift = gamma.len();
            let r2 = RuleDescriptor { m: r.m + shift, l: r.l, perm: r.perm.map(|p| Perm { pos: p.pos + shift, ..p }) };
            let t = match r.perm {
                None => d.node.clone(),
                Some(p) => apply_perm(&d.node, p).ok_or(TransformError::Malformed("bad perm".into()))?,
            };
            let two_sided = matches!(t.ant.get(r.m - 1), Some(Under(..) | Over(..)));
            let mut children = Vec::with_capacity(d.children.len());
            for (k, ch) in d.children.iter().enumerate() {
                if two_sided && k == 1 {
                    children.push(ch.clone());
                } else {
                    children.push(aug_rec(ch, gamma, delta, c)?);
                }
            }
            Ok(DerivationTree::rule(node, r2, children))
        }
    }
}

/// `t[d]`: replaces every hypothesis leaf of `t` by `d`.
pub fn graft(t: &DerivationTree, d: &DerivationTree) -> Result<DerivationTree, TransformError> {
    match t.step {
        Step::Hyp if t.node == d.node => Ok(d.clone()),
        Step::Hyp => Err(TransformError::Mismatch { found: t.node.to_string(), expected: d.node.to_string() }),
        _ => Ok(DerivationTree {
            node: t.node.clone(),
            step: t.step,
            children: t.children.iter().map(|c| graft(c, d)).collect::<Result<_, _>>()?,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Widen `A` to `A∧B` (∧L_1).
    First,
    /// Widen `A` to `B∧A` (∧L_2).
    Second,
}

/// `d|_{A∧B}`: turns a derivation of `Γ, A, Δ ⊢ D` (with `A` at index `pos`)
/// into one of `Γ, A∧B, Δ ⊢ D`, introducing the conjunction only where the
/// traced occurrence of `A` is principal or stops being traceable.
pub fn conj_widen(d: &DerivationTree, pos: usize, b: &Formula, side: Side) -> Result<DerivationTree, TransformError> {
    let a = d.node.ant.get(pos).ok_or(TransformError::NoOccurrence(pos))?.clone();
    let w = match side {
        Side::First => meet(a.clone(), b.clone()),
        Side::Second => meet(b.clone(), a.clone()),
    };
    let mut ant = d.node.ant.clone();
    ant[pos] = w;
    let node = Sequent::new(ant, d.node.succ.clone());
    let wrap = || {
        let l = if side == Side::First { 1 } else { 2 };
        DerivationTree::rule(node.clone(), RuleDescriptor::new(pos + 1, l), vec![d.clone()])
    };
    match d.step {
        Step::Axiom if node.ant.contains(&Zero) && a != Zero => Ok(DerivationTree::axiom(node)),
        Step::Axiom | Step::Hyp => Ok(wrap()),
        Step::Rule(r) => {
            let map = occurrence_map(&d.node, &r).ok_or(TransformError::Malformed("invalid rule".into()))?;
            let principal = map.iter().all(|m| m[pos].is_none());
            if principal {
                return Ok(wrap());
            }
            let children = d
                .children
                .iter()
                .zip(&map)
                .map(|(c, m)| match m[pos] {
                    Some(j) => conj_widen(c, j, b, side),
                    None => Ok(c.clone()),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(DerivationTree::rule(node, r, children))
        }
    }
}

/// A derivation of `A ⊢ A` that bottoms out in primitive axioms (and `B* ⊢ B*`,
/// which has no finite expansion).
pub fn eta_axiom(a: &Formula) -> DerivationTree {
    let s = Sequent::new(vec![a.clone()], a.clone());
    let r = RuleDescriptor::new;
    match a {
        Prim(_) | Star(_) | Zero => DerivationTree::axiom(s),
        One => DerivationTree::rule(s, r(1, 0), vec![DerivationTree::axiom(Sequent::new(vec![], One))]),
        Under(x, y) => {
            let mid = Sequent::new(vec![(**x).clone(), a.clone()], (**y).clone());
            let lower = DerivationTree::rule(mid, r(2, 1), vec![eta_axiom(y), eta_axiom(x)]);
            DerivationTree::rule(s, r(0, 0), vec![lower])
        }
        Over(y, x) => {
            let mid = Sequent::new(vec![a.clone(), (**x).clone()], (**y).clone());
            let lower = DerivationTree::rule(mid, r(1, 1), vec![eta_axiom(y), eta_axiom(x)]);
            DerivationTree::rule(s, r(0, 0), vec![lower])
        }
        Prod(x, y) => {
            let mid = Sequent::new(vec![(**x).clone(), (**y).clone()], a.clone());
            let lower = DerivationTree::rule(mid, r(0, 1), vec![eta_axiom(x), eta_axiom(y)]);
            DerivationTree::rule(s, r(1, 0), vec![lower])
        }
        Meet(x, y) => {
            let l = DerivationTree::rule(Sequent::new(vec![a.clone()], (**x).clone()), r(1, 1), vec![eta_axiom(x)]);
            let rr = DerivationTree::rule(Sequent::new(vec![a.clone()], (**y).clone()), r(1, 2), vec![eta_axiom(y)]);
            DerivationTree::rule(s, r(0, 0), vec![l, rr])
        }
        Join(x, y) => {
            let l = DerivationTree::rule(Sequent::new(vec![(**x).clone()], a.clone()), r(0, 1), vec![eta_axiom(x)]);
            let rr = DerivationTree::rule(Sequent::new(vec![(**y).clone()], a.clone()), r(0, 2), vec![eta_axiom(y)]);
            DerivationTree::rule(s, r(1, 0), vec![l, rr])
        }
        Bang(x) | Nabla(x) => DerivationTree::rule(s, r(0, 0), vec![eta_axiom(x)]),
    }
}

fn eta_expand(d: &DerivationTree) -> DerivationTree {
    match d.step {
        Step::Axiom if d.node.ant.len() == 1 && d.node.ant[0] == d.node.succ => eta_axiom(&d.node.succ),
        Step::Axiom | Step::Hyp => d.clone(),
        Step::Rule(_) => {
            DerivationTree { node: d.node.clone(), step: d.step, children: d.children.iter().map(eta_expand).collect() }
        }
    }
}

/// Normalizes a complete derivation into basic form by the case analysis on
/// the last rule: primitive `p\A` on the left, primitive `p·q` on the right,
/// a meet whose kept conjunct is a division, and everything else.
pub fn basicize(d: &DerivationTree) -> Result<DerivationTree, TransformError> {
    basicize_rec(&eta_expand(d))
}

fn basicize_rec(d: &DerivationTree) -> Result<DerivationTree, TransformError> {
    let Step::Rule(r) = d.step else {
        return Ok(d.clone());
    };
    let node = &d.node;
    if r.perm.is_none() {
        if r.m > 0 {
            let i = r.m - 1;
            match &node.ant[i] {
                Under(p, _) if p.is_prim() => {
                    let d1 = basicize_rec(&d.children[0])?;
                    let d2 = basicize_rec(&d.children[1])?;
                    let k = r.l as usize;
                    let gamma = &node.ant[..i - k];
                    let delta_with = &node.ant[i..];
                    let t = aug(&d2, gamma, delta_with, &node.succ)?;
                    let mut ant = gamma.to_vec();
                    ant.push((**p).clone());
                    ant.extend_from_slice(delta_with);
                    let leaf = DerivationTree::axiom(Sequent::new(vec![(**p).clone()], (**p).clone()));
                    let d1b = DerivationTree::rule(
                        Sequent::new(ant, node.succ.clone()),
                        RuleDescriptor::new(gamma.len() + 2, 1),
                        vec![d1, leaf],
                    );
                    return graft(&t, &d1b);
                }
                Meet(a1, a2) => {
                    let (chosen, other, side) = if r.l == 1 { (a1, a2, Side::First) } else { (a2, a1, Side::Second) };
                    if matches!(**chosen, Under(..)) {
                        let d0 = basicize_rec(&d.children[0])?;
                        return conj_widen(&d0, i, other, side);
                    }
                }
                _ => {}
            }
        } else if let Prod(p1, p2) = &node.succ {
            if p1.is_prim() && p2.is_prim() {
                let d1 = basicize_rec(&d.children[0])?;
                let d2 = basicize_rec(&d.children[1])?;
                let theta2 = d2.node.ant.clone();
                let t1 = aug(&d1, &[], &theta2, &node.succ)?;
                let t2 = aug(&d2, &[(**p1).clone()], &[], &node.succ)?;
                let d3 = DerivationTree::rule(
                    Sequent::new(vec![(**p1).clone(), (**p2).clone()], node.succ.clone()),
                    RuleDescriptor::new(0, 1),
                    vec![
                        DerivationTree::axiom(Sequent::new(vec![(**p1).clone()], (**p1).clone())),
                        DerivationTree::axiom(Sequent::new(vec![(**p2).clone()], (**p2).clone())),
                    ],
                );
                return graft(&t1, &graft(&t2, &d3)?);
            }
        }
    }
    Ok(DerivationTree {
        node: node.clone(),
        step: d.step,
        children: d.children.iter().map(basicize_rec).collect::<Result<_, _>>()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Sequent {
        t.parse().unwrap()
    }

    #[test]
    fn descriptor_codes_round_trip() {
        for d in [
            RuleDescriptor::new(3, 2),
            RuleDescriptor::new(0, 0),
            RuleDescriptor { m: 2, l: 1, perm: Some(Perm { pos: 1, dir: Dir::Left, dist: 3 }) },
        ] {
            assert_eq!(RuleDescriptor::decode(d.code().unwrap()), Some(d));
        }
    }

    #[test]
    fn premise_example() {
        let c = s("p, p\\q, q\\r, r\\s |- s");
        let ps = premises(&c, &RuleDescriptor::new(3, 2)).unwrap();
        assert_eq!(ps, vec![s("r, r\\s |- s"), s("p, p\\q |- q")]);
        assert_eq!(premises(&s("p |- p"), &RuleDescriptor::new(1, 0)), None);
        assert_eq!(premises(&s("p |- p"), &RuleDescriptor::new(0, 0)), None);
        assert_eq!(premises(&s("a, !p, b |- c"), &RuleDescriptor::new(2, 0)), Some(vec![s("a, b |- c")]));
    }

    #[test]
    fn premise_codes() {
        let c = s("p, p\\q, q\\r, r\\s |- s");
        let code = goedel_encode(&c);
        let t = RuleDescriptor::new(3, 2).code().unwrap();
        assert_eq!(premise_code(&code, t, 0), goedel_encode(&s("r, r\\s |- s")));
        assert_eq!(premise_code(&code, t, 5), goedel_encode(&s("1 |- 1")));
        assert_eq!(premise_code(&BigUint::zero(), t, 0), BigUint::zero());
    }

    #[test]
    fn star_right_split() {
        let c = s("p, p |- p*");
        let l = star_right_param(&[1, 1]).unwrap();
        let d = DerivationTree::rule(
            c.clone(),
            RuleDescriptor::new(0, l),
            vec![DerivationTree::axiom(s("p |- p")), DerivationTree::axiom(s("p |- p"))],
        );
        assert!(check_derivation(&d, false).is_ok());
        assert!(check_derivation(&DerivationTree::axiom(s("p |- q")), false).is_err());
    }

    #[test]
    fn permutation_ranks() {
        let c = s("@d, a/b, x, y |- c");
        let bare = RuleDescriptor::new(1, 1);
        assert_eq!(premises(&c, &bare), Some(vec![s("a/b, @d, x, y |- c")]));
        assert_eq!(rank_decreases(&c, &bare), Some(false));
        // The ∇-formula joins Π of the /L application.
        let gen = RuleDescriptor { m: 1, l: 3, perm: Some(Perm { pos: 1, dir: Dir::Right, dist: 2 }) };
        assert_eq!(premises(&c, &gen), Some(vec![s("a |- c"), s("x, @d, y |- b")]));
        assert_eq!(rank_decreases(&c, &gen), Some(true));
        assert_eq!(rank_decreases(&s("a.b |- c"), &RuleDescriptor::new(1, 0)), Some(true));
    }

    #[test]
    fn aug_example() {
        let d = DerivationTree::rule(
            s("p, p\\q |- q"),
            RuleDescriptor::new(2, 1),
            vec![DerivationTree::axiom(s("q |- q")), DerivationTree::axiom(s("p |- p"))],
        );
        let t = aug(&d, &[crate::syntax::prim("x"), crate::syntax::prim("y")], &[], &crate::syntax::prim("z")).unwrap();
        assert_eq!(t.node, s("x, y, p, p\\q |- z"));
        assert_eq!(t.children[0].node, s("x, y, q |- z"));
        assert_eq!(t.hypotheses(), vec![&s("x, y, q |- z")]);
        assert!(check_derivation(&t, true).is_ok());
    }

    #[test]
    fn proof_file_round_trip() {
        let d = DerivationTree::rule(
            s("@(p), p\\q |- q"),
            RuleDescriptor::new(1, 0),
            vec![DerivationTree::rule(
                s("p, p\\q |- q"),
                RuleDescriptor::new(2, 1),
                vec![DerivationTree::axiom(s("q |- q")), DerivationTree::axiom(s("p |- p"))],
            )],
        );
        let text = d.to_text();
        assert_eq!(DerivationTree::parse(&text).unwrap(), d);
    }
}
