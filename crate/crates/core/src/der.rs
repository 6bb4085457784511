//! The formulas `Der_p(x_1)` that arithmetize derivability, evaluated
//! structurally over Gödel codes, and their rank.
//!
//! `Der_p(x) = Axiom(x) ∨ ⩔_{n,t} ((x = n) ∧ ⩕_k ⩔_{p′≺p} Der_{p′}(Premise(n,t,k)))`.
//! Only `n = x` can hold, so evaluation ranges over rule codes `t`. The
//! ω-rule has infinitely many premises and is never unrolled, which is why
//! evaluation answers True or Unknown and never False.

use std::collections::HashMap;

use num_bigint::BigUint;

use crate::calculus::{generalized_applications, is_axiom};
use crate::ordinals::{Ordinal, OrdinalError, PolyNotation};
use crate::syntax::{goedel_decode, Sequent};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DerTruth {
    True,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerCaps {
    /// Largest `n` for `!L_n`.
    pub n_max: u64,
    /// Largest rule code `t` considered.
    pub t_max: u64,
}

impl Default for DerCaps {
    fn default() -> Self {
        DerCaps { n_max: 8, t_max: 4096 }
    }
}

/// `Axiom(c)`: `c` codes `A ⊢ A`, `⊢ 1`, `⊢ A*` or a sequent with `0` on the left.
pub fn axiom_pred(c: &BigUint) -> bool {
    goedel_decode(c).is_some_and(|s| is_axiom(&s))
}

/// Bounded evaluation of `Der_p(c)`.
pub fn der_eval(p: &PolyNotation, c: &BigUint, caps: DerCaps) -> DerTruth {
    let (Ok(alpha), Some(s)) = (p.decode(), goedel_decode(c)) else {
        return DerTruth::Unknown;
    };
    let mut ev = Evaluator { caps, memo: HashMap::new() };
    if ev.holds(&alpha, &s) {
        DerTruth::True
    } else {
        DerTruth::Unknown
    }
}

struct Evaluator {
    caps: DerCaps,
    memo: HashMap<(Ordinal, Sequent), bool>,
}

impl Evaluator {
    fn holds(&mut self, alpha: &Ordinal, s: &Sequent) -> bool {
        if is_axiom(s) {
            return true;
        }
        if alpha.is_zero() {
            return false;
        }
        let key = (alpha.clone(), s.clone());
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let mut found = false;
        for (d, premises) in generalized_applications(s, self.caps.n_max) {
            if d.code().is_none_or(|t| t > self.caps.t_max) {
                continue;
            }
            if premises.iter().all(|q| {
                let beta = below(alpha, q, self.caps.n_max);
                self.holds(&beta, q)
            }) {
                found = true;
                break;
            }
        }
        self.memo.insert(key, found);
        found
    }
}

/// The `p′ ≺ p` tried for a premise. `Der` is monotone in `p′`, so the
/// predecessor is best for a successor; below a limit the premise's own rank
/// suffices when it is smaller.
fn below(alpha: &Ordinal, q: &Sequent, n: u64) -> Ordinal {
    if let Some(b) = alpha.pred() {
        return b;
    }
    let r = q.rank();
    if r < *alpha {
        return r;
    }
    alpha.fundamental(n).unwrap_or_else(Ordinal::zero)
}

/// Classification of `Der_p` as `Σ_γ`: the number in the statement of the
/// rank claim, and the one the construction actually assembles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerRank {
    pub statement: Ordinal,
    pub assembled: Ordinal,
}

/// `α·2+1` and `α·2+3`; for `α = 0` both are `1`, since `Der_{π(0)} = Axiom`.
pub fn der_rank(p: &PolyNotation) -> Result<DerRank, OrdinalError> {
    let alpha = p.decode()?;
    if alpha.is_zero() {
        let one = Ordinal::nat(1);
        return Ok(DerRank { statement: one.clone(), assembled: one });
    }
    let doubled = alpha.mul_nat(2);
    Ok(DerRank { statement: doubled.succ(), assembled: doubled.succ().succ().succ() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::goedel_encode;

    fn code(text: &str) -> BigUint {
        goedel_encode(&text.parse().unwrap())
    }

    fn pi(n: u64) -> PolyNotation {
        PolyNotation::encode(&Ordinal::nat(n))
    }

    #[test]
    fn axioms() {
        assert!(axiom_pred(&code("p |- p")));
        assert!(axiom_pred(&code("|- 1")));
        assert!(!axiom_pred(&code("p |- q")));
        assert!(!axiom_pred(&BigUint::from(0u32)));
    }

    #[test]
    fn modus_ponens_needs_one_level() {
        let c = code("p, p\\q |- q");
        assert_eq!(der_eval(&pi(0), &c, DerCaps::default()), DerTruth::Unknown);
        assert_eq!(der_eval(&pi(1), &c, DerCaps::default()), DerTruth::True);
        assert_eq!(der_eval(&pi(1), &BigUint::from(0u32), DerCaps::default()), DerTruth::Unknown);
    }

    #[test]
    fn ranks() {
        assert_eq!(der_rank(&pi(0)).unwrap().statement, Ordinal::nat(1));
        assert_eq!(der_rank(&pi(1)).unwrap().statement, Ordinal::nat(3));
        assert_eq!(der_rank(&pi(1)).unwrap().assembled, Ordinal::nat(5));
        let w = PolyNotation::encode(&Ordinal::omega());
        assert_eq!(der_rank(&w).unwrap().statement, Ordinal::omega().mul_nat(2).succ());
    }
}
