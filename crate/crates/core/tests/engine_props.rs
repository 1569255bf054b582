//! Propagation keeps every solution and its result does not depend on the
//! visiting order.

mod common;

use common::{extend, ints, points};
use intprop::decompose::{decompose, Variant};
use intprop::engine::{Mode, Propagation, Solver};
use intprop::{Cmp, Csp, Expr, OpCounters};
use proptest::prelude::*;

fn csp() -> impl Strategy<Value = Csp> {
    let monomial = (prop_oneof![-3i64..=-1, 1i64..=3], prop::collection::vec((0usize..3, 1u32..=3), 1..=2))
        .prop_map(|(c, f)| f.into_iter().fold(Expr::lit(c), |e, (v, n)| e * Expr::var(v).pow_mul(n)));
    let constraint = (
        prop::collection::vec(monomial, 1..=3),
        prop_oneof![Just(Cmp::Eq), Just(Cmp::Le), Just(Cmp::Ne)],
        -12i64..=12,
    );
    (prop::collection::vec(common::bounded(5), 3), prop::collection::vec(constraint, 1..=3)).prop_map(|(doms, cs)| {
        let mut csp = Csp::new();
        for (i, d) in doms.into_iter().enumerate() {
            csp.add_var(format!("x{i}"), d);
        }
        for (ms, cmp, b) in cs {
            csp.add_constraint(Expr::sum(ms), cmp, Expr::lit(b));
        }
        csp
    })
}

fn fixpoint(dec: &intprop::decompose::DecomposedCsp, mode: Mode) -> Option<Vec<intprop::IntegerInterval>> {
    let mut s = Solver::new(dec, mode);
    match s.propagate() {
        Propagation::Fixpoint => Some(s.store),
        Propagation::EmptyDomain(_) => None,
        Propagation::StepLimit => panic!("step limit"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1_000))]

    #[test]
    fn cycle_and_schedule_reach_the_same_fixpoint(csp in csp(), weak in any::<bool>()) {
        for variant in Variant::ALL {
            let dec = decompose(&csp, variant, weak);
            if dec.infeasible {
                continue;
            }
            prop_assert_eq!(fixpoint(&dec, Mode::Cycle), fixpoint(&dec, Mode::Scheduled), "{}", variant);
        }
    }

    #[test]
    fn fixpoints_keep_every_solution_and_are_stable(csp in csp()) {
        let solutions: Vec<_> = points(&csp.domains()).into_iter().map(|p| ints(&p)).filter(|p| csp.verify(p)).collect();
        for variant in Variant::ALL {
            let dec = decompose(&csp, variant, false);
            if dec.infeasible {
                prop_assert!(solutions.is_empty());
                continue;
            }
            match fixpoint(&dec, Mode::Scheduled) {
                None => prop_assert!(solutions.is_empty(), "{} lost {:?}", variant, solutions),
                Some(store) => {
                    for p in &solutions {
                        let full = extend(&dec, p);
                        prop_assert!(store.iter().zip(&full).all(|(d, v)| d.contains(v)), "{} lost {:?}", variant, p);
                    }
                    let mut ops = OpCounters::new();
                    for r in &dec.rules {
                        let mut s = store.clone();
                        prop_assert_eq!(r.apply(&mut s, &mut ops), intprop::rules::RuleOutcome::Unchanged);
                    }
                }
            }
        }
    }
}
