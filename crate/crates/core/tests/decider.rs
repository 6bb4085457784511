use std::sync::Arc;

use actomega::computability::{InfIndex, Qf, Quant};
use actomega::decider::{decide_encoded, DecideBudget, Decider, HostResult, TechImpl};
use actomega::encoding::{
    goal, merge_items, seq_with_exponents, technical_formula, FnTable, Item, ReductionInput, Run, RunSequent, Variant,
    A_1, A_2, A_PI, A_SIGMA, GO, OKAY,
};
use actomega::ordinals::Ordinal;
use actomega::rewriting::{compile_tm, Move, Transition, TuringMachine};
use actomega::search::Verdict;
use actomega::suites::random_alpha0;
use actomega::syntax::{prim, under, Formula};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Flips the last letter of a word over `{a_1, a_2}` and walks home.
fn flip_last() -> TuringMachine {
    let t = Transition::new;
    TuringMachine {
        states: ["q0", "q1", "qa"].map(Into::into).to_vec(),
        tape: ["a_1", "a_2", "_"].map(Into::into).to_vec(),
        input: ["a_1", "a_2"].map(Into::into).to_vec(),
        output: ["a_1", "a_2"].map(Into::into).to_vec(),
        blank: "_".into(),
        q0: "q0".into(),
        qa: "qa".into(),
        delta: vec![
            t("q0", "a_1", "q1", "a_2", Move::N),
            t("q0", "a_2", "q1", "a_1", Move::N),
            t("q0", "_", "qa", "_", Move::N),
            t("q1", "a_1", "q1", "a_1", Move::L),
            t("q1", "a_2", "q1", "a_2", Move::L),
            t("q1", "_", "qa", "_", Move::N),
        ],
    }
}

fn flip_host(u: &[Run], _: &DecideBudget) -> HostResult {
    let mut letters: Vec<&str> = Vec::new();
    for r in u {
        let Ok(n) = usize::try_from(&r.count) else {
            return HostResult::Unknown("run too long".into());
        };
        letters.extend(std::iter::repeat_n(&*r.atom, n));
    }
    if let Some(last) = letters.last_mut() {
        *last = if *last == A_1 { A_2 } else { A_1 };
    }
    HostResult::Output(letters.into_iter().map(Run::one).collect())
}

fn words(max: usize) -> Vec<Vec<&'static str>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..max {
        layer = layer.iter().flat_map(|w: &Vec<&str>| [A_1, A_2].map(|a| [w.clone(), vec![a]].concat())).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn compiled_machine_and_host_function_agree() {
    let table = FnTable { on_a1: prim(OKAY), on_a2: prim(A_1) };
    let compiled = compile_tm(&flip_last(), "a_L", "a_R", "fin").unwrap();
    let tech = technical_formula(&compiled.srs, &table).unwrap();

    let budget = DecideBudget::default();
    let mut literal = Decider::new(budget);
    literal.register(tech.clone(), TechImpl::Literal { srs: compiled.srs, table: table.clone() });
    let mut host = Decider::new(budget);
    host.register(tech.clone(), TechImpl::Host { f: Arc::new(flip_host), table });

    let psis: [Vec<Formula>; 3] = [vec![], vec![under(prim(OKAY), prim(OKAY))], vec![under(prim(A_1), prim(OKAY))]];
    let mut seen = [0usize; 2];
    for u in words(3) {
        for psi in &psis {
            let mut items = vec![Item::prim("a_L")];
            items.extend(u.iter().map(|a| Item::prim(a)));
            items.push(Item::prim(GO));
            items.push(Item::Formula(tech.clone()));
            items.extend(psi.iter().cloned().map(Item::Formula));
            let s = RunSequent { ant: merge_items(items), succ: goal() };
            let (a, b) = (literal.decide(&s).verdict, host.decide(&s).verdict);
            assert_eq!(a, b, "{s}");
            assert!(a.is_definite(), "{s}: {a}");
            seen[usize::from(a == Verdict::Derivable)] += 1;
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn minus_without_levels_is_derivable_for_any_input() {
    for n in [0u32, 1, 2, 7, 40] {
        for x in [A_SIGMA, A_PI] {
            let s = seq_with_exponents(&BigUint::from(n), x, &[], Variant::Minus);
            assert_eq!(Decider::new(DecideBudget::default()).decide(&s).verdict, Verdict::Derivable, "{s}");
        }
    }
}

fn alpha0(qf: &str, x: Quant, a: &[u64]) -> BigUint {
    let q: Qf = qf.parse().unwrap();
    let idx = InfIndex::new(x, Ordinal::zero(), a.len() as u64, q.number());
    ReductionInput { index: idx, assignment: a.to_vec() }.code()
}

#[test]
fn alpha0_examples() {
    let b = DecideBudget::default();
    for x in [Quant::Sigma, Quant::Pi] {
        assert_eq!(decide_encoded(&alpha0("x1 + 1 = 2", x, &[1]), Variant::Standard, b).verdict, Verdict::Derivable);
        assert_eq!(decide_encoded(&alpha0("x1 + 1 = 2", x, &[2]), Variant::Standard, b).verdict, Verdict::Underivable);
    }
}

#[test]
fn malformed_input_does_not_panic() {
    let b = DecideBudget::default();
    for n in [0u32, 1, 5, 1000] {
        let v = decide_encoded(&BigUint::from(n), Variant::Standard, b).verdict;
        assert!(matches!(v, Verdict::Derivable | Verdict::Underivable | Verdict::Unknown(_)));
    }
}

#[test]
fn verdicts_refine_monotonically() {
    let small = DecideBudget { halt: 16, witness: 4, n_cap: 2, max_steps: 2_000, closure: 1_000 };
    let large = DecideBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut inputs: Vec<BigUint> = (0..40).map(|_| random_alpha0(&mut rng).0).collect();
    inputs.extend(actomega::suites::alpha1_pair().into_iter().map(|p| p.1));
    for inp in inputs {
        for variant in [Variant::Standard, Variant::Minus] {
            let a = decide_encoded(&inp, variant, small).verdict;
            let b = decide_encoded(&inp, variant, large).verdict;
            if a.is_definite() {
                assert_eq!(a, b, "inp {inp}");
            }
        }
    }
}

#[test]
fn trace_starts_at_the_input_sequent() {
    let d = decide_encoded(&alpha0("x1 = 0", Quant::Sigma, &[0]), Variant::Standard, DecideBudget::default());
    assert_eq!(d.verdict, Verdict::Derivable);
    assert!(!d.trace.is_empty());
    assert_eq!(d.trace[0].depth, 0);
    assert!(d.steps >= d.trace.len());
}
