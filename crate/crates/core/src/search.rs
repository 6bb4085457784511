//! Brute-force cut-free proof search and the immediate-derivability operator
//! on a finite universe.
//!
//! Sequents that differ only by where their ∇-formulas sit are derivable
//! together, so the search works on permutation classes: it tries every
//! arrangement of the ∇-formulas and then every non-permutation rule. Each
//! such rule lowers the rank, which bounds the search without loop checks.
//! The answer is exhaustive unless `!L` (capped) or the ω-rule was on the
//! table, or a cap was hit.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::calculus::{
    applications, is_axiom, permutations, premise_at, premises, DerivationTree, Dir, Perm, RuleDescriptor,
};
use crate::syntax::{Formula, Sequent};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Derivable,
    Underivable,
    Unknown(String),
}

impl Verdict {
    pub fn is_definite(&self) -> bool {
        !matches!(self, Verdict::Unknown(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Derivable => "Derivable",
            Verdict::Underivable => "Underivable",
            Verdict::Unknown(_) => "Unknown",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Unknown(why) => write!(f, "Unknown ({why})"),
            v => f.write_str(v.label()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchCaps {
    /// Largest `n` tried for `!L_n`.
    pub n_max: u64,
    /// Permutation classes visited before giving up.
    pub max_nodes: usize,
    /// Arrangements tried per class.
    pub max_arrangements: usize,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { n_max: 3, max_nodes: 200_000, max_arrangements: 5_000 }
    }
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub verdict: Verdict,
    pub tree: Option<DerivationTree>,
    pub nodes: usize,
}

#[derive(Clone)]
enum Res {
    Proved { member: Sequent, tree: Arc<DerivationTree> },
    Refuted,
    Open(&'static str),
}

type ClassKey = (Vec<Formula>, Vec<Formula>, Formula);

fn class_key(s: &Sequent) -> ClassKey {
    let mut fixed = Vec::new();
    let mut mobile = Vec::new();
    for f in &s.ant {
        if matches!(f, Formula::Nabla(_)) {
            mobile.push(f.clone());
        } else {
            fixed.push(f.clone());
        }
    }
    mobile.sort();
    (fixed, mobile, s.succ.clone())
}

/// Every placement of the ∇-formulas of `s` among its other formulas,
/// starting with `s` itself. `None` when there are more than `cap`.
pub fn arrangements(s: &Sequent, cap: usize) -> Option<Vec<Sequent>> {
    let (fixed, mut mobile, succ) = class_key(s);
    if mobile.is_empty() {
        return Some(vec![s.clone()]);
    }
    mobile.sort();
    let mut out = vec![s.clone()];
    let mut seen: HashSet<Vec<Formula>> = HashSet::from([s.ant.clone()]);
    let mut cur = Vec::new();
    let mut used = vec![false; mobile.len()];
    let ok = place(&fixed, &mobile, 0, &mut used, &mut cur, &mut |ant| {
        if seen.insert(ant.to_vec()) {
            out.push(Sequent::new(ant.to_vec(), succ.clone()));
        }
        out.len() <= cap
    });
    ok.then_some(out)
}

fn place(
    fixed: &[Formula],
    mobile: &[Formula],
    i: usize,
    used: &mut [bool],
    cur: &mut Vec<Formula>,
    emit: &mut dyn FnMut(&[Formula]) -> bool,
) -> bool {
    if i == fixed.len() && used.iter().all(|&u| u) {
        return emit(cur);
    }
    for k in 0..mobile.len() {
        if used[k] || (k > 0 && mobile[k] == mobile[k - 1] && !used[k - 1]) {
            continue;
        }
        used[k] = true;
        cur.push(mobile[k].clone());
        let go_on = place(fixed, mobile, i, used, cur, emit);
        cur.pop();
        used[k] = false;
        if !go_on {
            return false;
        }
    }
    if i < fixed.len() {
        cur.push(fixed[i].clone());
        let go_on = place(fixed, mobile, i + 1, used, cur, emit);
        cur.pop();
        return go_on;
    }
    true
}

/// Bare ∇-permutation steps carrying `from` to `to`, then `top` (rooted at
/// `to`).
fn perm_chain(from: &Sequent, to: &Sequent, top: DerivationTree) -> DerivationTree {
    let mut cur = from.clone();
    let mut steps: Vec<(Sequent, Perm)> = Vec::new();
    for i in 0..cur.ant.len() {
        while cur.ant[i] != to.ant[i] {
            let p = if matches!(to.ant[i], Formula::Nabla(_)) {
                let j = (i + 1..cur.ant.len()).find(|&j| cur.ant[j] == to.ant[i]).expect("same class");
                Perm { pos: j + 1, dir: Dir::Left, dist: j - i }
            } else {
                let j = (i + 1..cur.ant.len()).find(|&j| cur.ant[j] == to.ant[i]).expect("same class");
                Perm { pos: i + 1, dir: Dir::Right, dist: j - i }
            };
            let next = crate::calculus::apply_perm(&cur, p).expect("∇ at the moved position");
            steps.push((cur, p));
            cur = next;
        }
    }
    steps.into_iter().rev().fold(top, |acc, (node, p)| {
        let l = match p.dir {
            Dir::Right => 2 * p.dist as u64 - 1,
            Dir::Left => 2 * p.dist as u64,
        };
        DerivationTree::rule(node, RuleDescriptor::new(p.pos, l), vec![acc])
    })
}

struct Searcher {
    caps: SearchCaps,
    memo: HashMap<ClassKey, Res>,
    nodes: usize,
}

impl Searcher {
    fn prove(&mut self, s: &Sequent) -> Res {
        let key = class_key(s);
        if let Some(r) = self.memo.get(&key) {
            return r.clone();
        }
        let r = self.prove_class(s);
        self.memo.insert(key, r.clone());
        r
    }

    fn prove_class(&mut self, s: &Sequent) -> Res {
        self.nodes += 1;
        if self.nodes > self.caps.max_nodes {
            return Res::Open("node cap");
        }
        let Some(members) = arrangements(s, self.caps.max_arrangements) else {
            return Res::Open("arrangement cap");
        };
        let mut open: Option<&'static str> = None;
        for t in &members {
            if is_axiom(t) {
                return Res::Proved { member: t.clone(), tree: Arc::new(DerivationTree::axiom(t.clone())) };
            }
        }
        // ∗L is invertible: one underivable instance refutes the sequent.
        for (i, f) in s.ant.iter().enumerate() {
            if !matches!(f, Formula::Star(_)) {
                continue;
            }
            for n in 0..=self.caps.n_max as usize {
                let Some(p) = premise_at(s, &RuleDescriptor::new(i + 1, 0), n) else { break };
                if matches!(self.prove(&p), Res::Refuted) {
                    return Res::Refuted;
                }
            }
        }
        for t in &members {
            if t.ant.iter().any(|f| matches!(f, Formula::Star(_))) {
                open = Some("ω-rule not explored");
            }
            if t.ant.iter().any(|f| matches!(f, Formula::Bang(_))) {
                open = open.or(Some("!L capped"));
            }
            'apps: for (d, ps) in applications(t, self.caps.n_max) {
                if d.m > 0 && d.l > 0 && matches!(t.ant[d.m - 1], Formula::Nabla(_)) {
                    continue;
                }
                let mut kids = Vec::with_capacity(ps.len());
                for p in &ps {
                    match self.prove(p) {
                        Res::Proved { member, tree } => kids.push(perm_chain(p, &member, (*tree).clone())),
                        Res::Refuted => continue 'apps,
                        Res::Open(why) => {
                            open = Some(why);
                            continue 'apps;
                        }
                    }
                }
                let tree = DerivationTree::rule(t.clone(), d, kids);
                return Res::Proved { member: t.clone(), tree: Arc::new(tree) };
            }
        }
        match open {
            Some(why) => Res::Open(why),
            None => Res::Refuted,
        }
    }
}

/// Searches for a cut-free derivation of `s`.
pub fn bounded_search(s: &Sequent, caps: SearchCaps) -> SearchResult {
    let mut se = Searcher { caps, memo: HashMap::new(), nodes: 0 };
    let r = se.prove(s);
    let (verdict, tree) = match r {
        Res::Proved { member, tree } => (Verdict::Derivable, Some(perm_chain(s, &member, (*tree).clone()))),
        Res::Refuted => (Verdict::Underivable, None),
        Res::Open(why) => (Verdict::Unknown(why.to_string()), None),
    };
    SearchResult { verdict, tree, nodes: se.nodes }
}

/// Least fixpoint of the immediate-derivability operator restricted to
/// `universe`: members that follow from members by one rule application.
/// Returned in universe order. The ω-rule never fires on a finite universe.
pub fn saturate(universe: &[Sequent], n_max: u64) -> Vec<Sequent> {
    let index: HashSet<&Sequent> = universe.iter().collect();
    let mut have: HashSet<Sequent> = HashSet::new();
    loop {
        let mut grew = false;
        for s in universe {
            if have.contains(s) {
                continue;
            }
            let fires = is_axiom(s)
                || one_step(s, n_max).iter().any(|ps| ps.iter().all(|p| index.contains(p) && have.contains(p)));
            if fires {
                have.insert(s.clone());
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    universe.iter().filter(|s| have.contains(*s)).cloned().collect()
}

/// Premise lists of every finitary rule application to `s`, permutations
/// included.
fn one_step(s: &Sequent, n_max: u64) -> Vec<Vec<Sequent>> {
    let mut out: Vec<Vec<Sequent>> = applications(s, n_max).into_iter().map(|(_, ps)| ps).collect();
    for p in permutations(s) {
        let l = match p.dir {
            Dir::Right => 2 * p.dist as u64 - 1,
            Dir::Left => 2 * p.dist as u64,
        };
        if let Some(ps) = premises(s, &RuleDescriptor::new(p.pos, l)) {
            out.push(ps);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::check_derivation;

    fn s(x: &str) -> Sequent {
        x.parse().unwrap()
    }

    #[test]
    fn small_cases() {
        let r = bounded_search(&s("p, p\\q |- q"), SearchCaps::default());
        assert_eq!(r.verdict, Verdict::Derivable);
        let t = r.tree.unwrap();
        assert_eq!(t.size(), 3);
        check_derivation(&t, false).unwrap();
        assert_eq!(bounded_search(&s("p |- q"), SearchCaps::default()).verdict, Verdict::Underivable);
        assert_eq!(bounded_search(&s("p\\q, p |- q"), SearchCaps::default()).verdict, Verdict::Underivable);
    }

    #[test]
    fn nabla_moves() {
        let r = bounded_search(&s("p, @q, p\\(q\\r) |- r"), SearchCaps::default());
        assert_eq!(r.verdict, Verdict::Derivable);
        check_derivation(&r.tree.unwrap(), false).unwrap();
        assert_eq!(bounded_search(&s("p, q, p\\(q\\r) |- r"), SearchCaps::default()).verdict, Verdict::Underivable);
    }

    #[test]
    fn star_right_and_bang() {
        let r = bounded_search(&s("p, p |- p*"), SearchCaps::default());
        assert_eq!(r.verdict, Verdict::Derivable);
        check_derivation(&r.tree.unwrap(), false).unwrap();
        let r = bounded_search(&s("!p |- p.p"), SearchCaps::default());
        assert_eq!(r.verdict, Verdict::Derivable);
        assert!(!bounded_search(&s("!p |- q"), SearchCaps::default()).verdict.is_definite());
    }

    #[test]
    fn saturation() {
        let u = vec![s("p |- p")];
        assert_eq!(saturate(&u, 2), u);
        let u = vec![s("p |- p"), s("p, p\\q |- q"), s("q |- q")];
        assert_eq!(saturate(&u, 2), u);
        let u = vec![s("p |- p"), s("p, p\\q |- q")];
        assert_eq!(saturate(&u, 2), vec![s("p |- p")]);
    }
}
