use std::cell::RefCell;
use std::collections::HashSet;

use basesem::arith::{decide_equation, eval_value, weight, EquationVerdict};
use basesem::rulebase::{builtin_base, check_derivation, random_forward_derivations, BaseKind, Derivation};
use basesem::support::{ToySemantics, ToyUniverse};
use basesem::syntax::{parse_formula, parse_term, Atom, Formula, Signature, Term};
use proptest::prelude::*;

fn closed_term(constants: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![4 => Just(Term::Zero), 1 => (1..=constants.max(1)).prop_map(move |i| if constants == 0 {
        Term::Zero
    } else {
        Term::Const(i)
    })];
    leaf.prop_recursive(6, 40, 2, |inner| {
        prop_oneof![
            3 => inner.clone().prop_map(Term::succ),
            1 => (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::add(l, r)),
            1 => (inner.clone(), inner).prop_map(|(l, r)| Term::mul(l, r)),
        ]
    })
}

fn open_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::Zero), Just(Term::Const(2)), "[xyz]".prop_map(Term::var)];
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::succ),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::add(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Term::mul(l, r)),
        ]
    })
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Bot),
        "[pq]".prop_map(Formula::prop),
        (open_term(), open_term()).prop_map(|(l, r)| Formula::eq(l, r)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            ("[xyz]", inner).prop_map(|(v, b)| Formula::forall(v, b)),
        ]
    })
}

fn toy_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![Just(Formula::Bot), "[pq]".prop_map(Formula::prop)];
    leaf.prop_recursive(3, 12, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)))
}

thread_local! {
    static TOY: RefCell<Option<ToySemantics>> = const { RefCell::new(None) };
}

fn with_toy<R>(f: impl FnOnce(&ToySemantics) -> R) -> R {
    TOY.with(|cell| {
        let mut slot = cell.borrow_mut();
        let sem = slot.get_or_insert_with(|| ToySemantics::new(&ToyUniverse::new(&["p", "q"]).unwrap()).unwrap());
        f(sem)
    })
}

proptest! {
    #[test]
    fn terms_round_trip(t in closed_term(3)) {
        let sig = Signature::extended(3);
        prop_assert_eq!(parse_term(&t.to_string(), &sig).unwrap(), t);
    }

    #[test]
    fn formulas_round_trip(f in formula()) {
        let sig = Signature::extended(3);
        let back = parse_formula(&f.to_string(), &sig).unwrap();
        prop_assert_eq!(&back, &f, "{}", f);
    }

    #[test]
    fn weight_is_value(t in closed_term(4)) {
        prop_assert_eq!(weight(&t).unwrap().0, eval_value(&t).unwrap());
    }

    #[test]
    fn decide_equation_is_evaluation(a in closed_term(0), b in closed_term(0)) {
        let kind = BaseKind::APlus;
        let same = eval_value(&a).unwrap() == eval_value(&b).unwrap();
        match decide_equation(&a, &b, kind).unwrap() {
            EquationVerdict::True { certificate } => {
                prop_assert!(same);
                prop_assert_eq!(&certificate.atom, &Atom::eq(a, b));
                prop_assert!(check_derivation(&builtin_base(kind), &certificate, &HashSet::new()).is_ok());
            }
            EquationVerdict::False { lhs, rhs } => {
                prop_assert!(!same);
                prop_assert_eq!(lhs.0, eval_value(&a).unwrap());
                prop_assert_eq!(rhs.0, eval_value(&b).unwrap());
            }
        }
    }

    #[test]
    fn toy_support_is_monotone(f in toy_formula(), base in 0u64..256, extra in 0u64..256) {
        with_toy(|sem| {
            if sem.support(base, &f).unwrap().is_verified() {
                prop_assert!(sem.support(base | extra, &f).unwrap().is_verified(), "{}", f);
            }
            Ok(())
        })?;
    }

    #[test]
    fn certificates_round_trip_through_json(seed in any::<u64>()) {
        let base = builtin_base(BaseKind::AExt(2));
        for d in random_forward_derivations(&base, 4, 5, seed) {
            let back = Derivation::from_json_str(&d.to_json_string(), base.signature()).unwrap();
            prop_assert_eq!(back, d);
        }
    }
}
