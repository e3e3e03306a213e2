mod common;

use common::d;
use mvrelay::lattice::{
    compose_lattice, eval_lattice, explore, search_expressible, Lattice, LatticeOp, SearchOutcome, SearchSpec,
};
use mvrelay::rational::ratio;
use mvrelay::{compose_parallel, compose_series, Distribution};
use num_traits::Zero;
use proptest::prelude::*;

fn uniform_spec(target: Distribution, max_switches: usize) -> SearchSpec {
    SearchSpec::new(
        Lattice::diamond(),
        vec![d("1/4,1/4,1/4,1/4")],
        true,
        max_switches,
        target,
    )
}

fn middle(p: (i64, i64)) -> Distribution {
    Distribution::new(vec![ratio(0, 1), ratio(p.1 - p.0, p.1), ratio(p.0, p.1), ratio(0, 1)]).unwrap()
}

#[test]
fn middle_targets_are_not_realizable() {
    for p in [(1, 4), (1, 2), (3, 4)] {
        let outcome = search_expressible(&uniform_spec(middle(p), 4)).unwrap();
        assert!(!outcome.is_found(), "p = {}/{}", p.0, p.1);
        let text = outcome.to_json(&Lattice::diamond()).to_string();
        assert!(text.contains("not realizable within explored space"));
    }
}

#[test]
fn verdicts_are_reproducible() {
    let run = || match search_expressible(&uniform_spec(middle((1, 2)), 4)).unwrap() {
        SearchOutcome::NotRealizable {
            explored, combinations, ..
        } => (explored, combinations),
        other => panic!("{other:?}"),
    };
    let parallel = run();
    assert_eq!(parallel, run());
    assert_eq!(parallel, mvrelay::par::sequential(run));
}

#[test]
fn found_circuits_evaluate_to_target() {
    let ex = explore(&uniform_spec(d("1,0,0,0"), 3), false).unwrap();
    for target in ex.all().iter().step_by(7) {
        match search_expressible(&uniform_spec(target.clone(), 3)).unwrap() {
            SearchOutcome::Found { circuit, .. } => {
                assert_eq!(&eval_lattice(&Lattice::diamond(), &circuit).unwrap(), target)
            }
            other => panic!("{target}: {other:?}"),
        }
    }
}

#[test]
fn series_factor_of_a_middle_distribution_is_that_distribution() {
    let lattice = Lattice::diamond();
    let ex = explore(&uniform_spec(d("1,0,0,0"), 3), false).unwrap();
    let all = ex.all();
    let mut hits = 0;
    for x in all {
        for y in all {
            let v = compose_lattice(&lattice, x, y, LatticeOp::Meet).unwrap();
            if v.prob(0).is_zero() && v.prob(3).is_zero() {
                hits += 1;
                assert!(x == &v || y == &v, "{x} meet {y} = {v}");
            }
        }
    }
    assert!(hits > 0);
}

#[test]
fn level_sets_partition_the_exploration() {
    let ex = explore(&uniform_spec(d("1,0,0,0"), 4), false).unwrap();
    let total: usize = (1..=4).map(|k| ex.level(k).count()).sum();
    assert_eq!(total, ex.distinct());
    assert_eq!(ex.level(1).count(), 5);
}

proptest! {
    #[test]
    fn chain_composition_is_min_max(p in common::arb_distribution(4), q in common::arb_distribution(4)) {
        let chain = Lattice::chain(4).unwrap();
        prop_assert_eq!(compose_lattice(&chain, &p, &q, LatticeOp::Meet).unwrap(), compose_series(&p, &q).unwrap());
        prop_assert_eq!(compose_lattice(&chain, &p, &q, LatticeOp::Join).unwrap(), compose_parallel(&p, &q).unwrap());
    }

    #[test]
    fn diamond_composition_is_normalized(p in common::arb_distribution(4), q in common::arb_distribution(4)) {
        let lattice = Lattice::diamond();
        for op in [LatticeOp::Meet, LatticeOp::Join] {
            let r = compose_lattice(&lattice, &p, &q, op).unwrap();
            prop_assert!(Distribution::new(r.probs().to_vec()).is_ok());
        }
    }
}
