use actomega::calculus::{applications, premise_at, premise_code, premises, rank_decreases};
use actomega::der::{der_eval, DerCaps, DerTruth};
use actomega::encoding::{Item, Run, RunSequent};
use actomega::ordinals::{pair, prime_power_code, prime_power_decode, unpair, Ordinal, PolyNotation, TupleCode};
use actomega::syntax::{goedel_decode, goedel_encode, Formula, Sequent};
use num_bigint::BigUint;
use proptest::prelude::*;

fn ordinal() -> impl Strategy<Value = Ordinal> {
    prop::collection::vec(0u64..=9, 0..=6).prop_map(Ordinal::from_coeffs)
}

fn formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => prop::sample::select(vec!["p", "q", "r"]).prop_map(actomega::syntax::prim),
        1 => Just(Formula::One),
        1 => Just(Formula::Zero),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        use actomega::syntax::*;
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| under(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| over(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| prod(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| meet(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| join(a, b)),
            inner.clone().prop_map(bang),
            inner.clone().prop_map(star),
            inner.prop_map(nabla),
        ]
    })
}

fn sequent() -> impl Strategy<Value = Sequent> {
    (prop::collection::vec(formula(3), 0..=3), formula(3)).prop_map(|(ant, succ)| Sequent::new(ant, succ))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn hessenberg_sum_is_commutative_and_associative(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.hsum(&b), b.hsum(&a));
        prop_assert_eq!(a.hsum(&b).hsum(&c), a.hsum(&b.hsum(&c)));
    }

    #[test]
    fn hessenberg_sum_is_strictly_monotone(a in ordinal(), b in ordinal(), c in ordinal()) {
        if a < b {
            prop_assert!(a.hsum(&c) < b.hsum(&c));
            prop_assert!(c.hsum(&a) < c.hsum(&b));
        }
    }

    #[test]
    fn natural_sum_dominates_ordinal_sum(a in ordinal(), b in ordinal()) {
        prop_assert!(a.add(&b) <= a.hsum(&b));
    }

    #[test]
    fn notation_round_trips_and_orders(a in ordinal(), b in ordinal()) {
        let (pa, pb) = (PolyNotation::encode(&a), PolyNotation::encode(&b));
        prop_assert_eq!(pa.decode().unwrap(), a.clone());
        prop_assert_eq!(pa.precedes(&pb).unwrap(), a < b);
    }

    #[test]
    fn ordinal_text_round_trips(a in ordinal()) {
        prop_assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a);
    }

    #[test]
    fn omega_powers_round_trip(a in ordinal()) {
        prop_assert_eq!(Ordinal::omega_power_sum(&a.omega_powers()).unwrap(), a);
    }

    #[test]
    fn successor_and_predecessor(a in ordinal()) {
        prop_assert_eq!(a.succ().pred(), Some(a.clone()));
        prop_assert!(a < a.succ());
    }

    #[test]
    fn fundamental_sequences_stay_below(a in ordinal(), n in 0u64..20) {
        if a.is_limit() {
            let f = a.fundamental(n).unwrap();
            prop_assert!(f < a);
            prop_assert!(f <= a.fundamental(n + 1).unwrap());
        }
    }

    #[test]
    fn pairing_round_trips(x in 0u64..1 << 20, y in 0u64..1 << 20) {
        let z = pair(x, y).unwrap();
        prop_assert_eq!(unpair(z), (x, y));
    }

    #[test]
    fn tuple_codes_round_trip(v in prop::collection::vec(0u64..1000, 0..6)) {
        prop_assert_eq!(TupleCode::decode_u64(&TupleCode::encode_u64(&v)), Some(v.clone()));
        // Exponent lists cannot carry trailing zeros.
        let mut trimmed = v.clone();
        while trimmed.last() == Some(&0) {
            trimmed.pop();
        }
        prop_assert_eq!(prime_power_decode(&prime_power_code(&v)), Some(trimmed));
    }

    #[test]
    fn sequent_text_and_codes_round_trip(s in sequent()) {
        prop_assert_eq!(s.to_string().parse::<Sequent>().unwrap(), s.clone());
        prop_assert_eq!(goedel_decode(&goedel_encode(&s)), Some(s));
    }

    #[test]
    fn run_sequent_text_round_trips(
        runs in prop::collection::vec((prop::sample::select(vec!["a_1", "a_2", "go"]), 1u32..50), 1..5),
        tail in formula(2),
    ) {
        let mut items: Vec<Item> = runs.iter().map(|(a, n)| Item::Run(Run::new(a, *n))).collect();
        items.push(Item::Formula(tail));
        let s = RunSequent { ant: actomega::encoding::merge_items(items), succ: actomega::encoding::goal() };
        // Parsing folds primitive formulas into runs, so compare canonical forms.
        let t: RunSequent = s.to_string().parse().unwrap();
        prop_assert_eq!(t.to_string(), s.to_string());
        prop_assert_eq!(t.to_string().parse::<RunSequent>().unwrap(), t.clone());
        prop_assert_eq!(t.expand(1000), s.expand(1000));
    }

    #[test]
    fn premise_code_commutes_with_coding(s in sequent(), k in 0usize..3) {
        let c = goedel_encode(&s);
        for (d, ps) in applications(&s, 3) {
            let Some(t) = d.code() else { continue };
            let want = match premises(&s, &d) {
                Some(_) => ps.get(k).map(goedel_encode),
                None => premise_at(&s, &d, k).map(|p| goedel_encode(&p)),
            };
            if let Some(w) = want {
                prop_assert_eq!(premise_code(&c, t, k), w);
            }
        }
    }

    #[test]
    fn rules_lower_the_rank(s in sequent()) {
        for (d, _) in applications(&s, 3) {
            prop_assert_eq!(rank_decreases(&s, &d), Some(true), "{} via {:?}", s, d);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn der_is_monotone_in_the_ordinal(
        idx in 0..actomega::suites::CORPUS_SIZE,
        a in ordinal(),
        b in ordinal(),
    ) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let s = &actomega::suites::corpus()[idx].sequent;
        let c = goedel_encode(s);
        let caps = DerCaps::default();
        if der_eval(&PolyNotation::encode(&lo), &c, caps) == DerTruth::True {
            prop_assert_eq!(der_eval(&PolyNotation::encode(&hi), &c, caps), DerTruth::True);
        }
    }
}

#[test]
fn invalid_codes_have_no_premises() {
    assert_eq!(premise_code(&BigUint::from(0u32), 0, 0), BigUint::from(0u32));
}
