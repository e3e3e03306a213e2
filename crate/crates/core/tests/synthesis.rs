mod common;

use common::{compositions, d, targets};
use mvrelay::synthesis::{
    block_interval_cut, complexity_bound, complexity_bound_recursive, composite_bound, composite_synthesis,
    denominator_bound, denominator_bound_recursive, denominator_reduction, state_reduction, synth_binary_nstate,
    SwitchSet, TargetSpec,
};
use mvrelay::{eval, Assignment, Distribution};
use proptest::prelude::*;

fn value(c: &mvrelay::Circuit) -> Distribution {
    eval(c, &Assignment::new()).unwrap()
}

#[test]
fn binary_exact_and_bounded_small_targets() {
    for states in 2..=5 {
        let max_n = if states <= 3 { 6 } else { 4 };
        for n in 0..=max_n {
            for t in targets(1 << n, states) {
                let spec = TargetSpec::dyadic(t.clone()).unwrap();
                let r = synth_binary_nstate(&spec).unwrap();
                assert_eq!(value(&r.circuit), t, "target {t}");
                assert!(
                    r.pswitch_count as u64 <= complexity_bound(spec.exponent(), states),
                    "target {t}: {} pswitches",
                    r.pswitch_count
                );
                if states == 3 && spec.exponent() > 0 {
                    assert!((r.pswitch_count as u32) < 2 * spec.exponent());
                }
            }
        }
    }
}

#[test]
fn binary_choose_first_prefix_above_half() {
    for t in targets(16, 4) {
        let r = synth_binary_nstate(&TargetSpec::dyadic(t.clone()).unwrap()).unwrap();
        if let Some(first) = r.trace.first() {
            let prefix = t.cumulative();
            let half = mvrelay::rational::half();
            let k = prefix.iter().position(|s| *s > half).unwrap();
            assert_eq!(first.index, k);
        }
    }
}

#[test]
fn complexity_table() {
    let table: [[u64; 11]; 9] = [
        [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10],
        [0, 1, 3, 5, 7, 9, 11, 13, 15, 17, 19],
        [0, 1, 3, 6, 9, 12, 15, 18, 21, 24, 27],
        [0, 1, 3, 7, 11, 15, 19, 23, 27, 31, 35],
        [0, 1, 3, 7, 12, 17, 22, 27, 32, 37, 42],
        [0, 1, 3, 7, 13, 19, 25, 31, 37, 43, 49],
        [0, 1, 3, 7, 14, 21, 28, 35, 42, 49, 56],
        [0, 1, 3, 7, 15, 23, 31, 39, 47, 55, 63],
    ];
    for (row, values) in table.iter().enumerate() {
        for (n, &v) in values.iter().enumerate() {
            assert_eq!(complexity_bound(n as u32, row + 1), v);
            assert_eq!(complexity_bound_recursive(n as u32, row + 1), v);
        }
    }
    for n in 0..=12 {
        for states in 1..=12 {
            assert_eq!(complexity_bound(n, states), complexity_bound_recursive(n, states));
        }
    }
}

#[test]
fn denominator_recursion_never_exceeds_closed_form() {
    for q in 2..=6 {
        for n in 0..=4 {
            for states in 1..=8 {
                assert!(denominator_bound_recursive(q, n, states) <= denominator_bound(q, n, states));
            }
        }
    }
}

#[test]
fn state_reduction_properties() {
    for q in 2..=12u64 {
        let rounds = mvrelay::synthesis::ceil_log(2, q);
        for states in 2..=4 {
            for t in targets(q, states) {
                let r = state_reduction(&TargetSpec::rational(t.clone()).unwrap()).unwrap();
                assert_eq!(value(&r.report.circuit), t);
                assert!(r.half_switches as u64 <= r.half_bound, "target {t}");
                assert!(r.leaf_switches < states);
                assert!(r.report.within_bound());
                assert!(r.report.trace.iter().all(|c| c.depth as u32 <= rounds), "target {t}");
                r.report.circuit.root().for_each_leaf(&mut |e| {
                    if let mvrelay::SwitchElement::Pswitch { dist, .. } = e {
                        assert!(dist.active_states().len() == 2);
                    }
                });
            }
        }
    }
}

#[test]
fn denominator_reduction_sweep() {
    for q in [2u64, 3, 4, 5] {
        let switches = SwitchSet::reciprocals(4, q);
        let switches3 = SwitchSet::reciprocals(3, q);
        for n in 0..=2 {
            for (states, set) in [(3, &switches3), (4, &switches)] {
                if states == 4 && q.pow(n) > 25 {
                    continue;
                }
                for t in targets(q.pow(n), states) {
                    let spec = TargetSpec::with_exponent(t.clone(), q, n).unwrap();
                    let r = denominator_reduction(&spec, set).unwrap();
                    assert_eq!(value(&r.circuit), t);
                    assert!(r.within_bound(), "q={q} target {t}: {} > {}", r.pswitch_count, r.bound);
                }
            }
        }
    }
}

#[test]
fn composite_sweep() {
    for (q, max_n) in [(6u64, 2), (10, 2), (12, 1)] {
        let largest = mvrelay::synthesis::factorize(q).last().unwrap().0;
        let switches = SwitchSet::reciprocals(3, largest);
        for n in 1..=max_n {
            for t in targets(q.pow(n), 3) {
                let spec = TargetSpec::with_exponent(t.clone(), q, n).unwrap();
                let r = composite_synthesis(&spec, &switches).unwrap();
                assert_eq!(value(&r.circuit), t);
                assert_eq!(r.bound, denominator_bound(q, n, 3));
                assert!(r.within_bound(), "q={q} target {t}");
            }
        }
    }
}

#[test]
fn composite_prime_sum_is_not_a_bound() {
    // (1/6,2/3,1/6) needs 4 pswitches in every prime order; the per-prime sum is 3
    let t = TargetSpec::new(d("1/6,2/3,1/6"), 6).unwrap();
    let r = composite_synthesis(&t, &SwitchSet::reciprocals(3, 3)).unwrap();
    assert_eq!(r.pswitch_count, 4);
    assert_eq!(composite_bound(6, 3), 3);
    assert!(r.within_bound());
}

#[test]
fn compositions_count() {
    assert_eq!(compositions(16, 3).len(), 153);
    assert_eq!(targets(4, 2).len(), 5);
    assert_eq!(d("1/2,1/2").states(), 2);
}

proptest! {
    #[test]
    fn cut_identity(p in common::arb_distribution(4), num in 1i64..12, extra in 1i64..12) {
        let at = mvrelay::rational::ratio(num, num + extra);
        let cut = block_interval_cut(&p, &at).unwrap();
        prop_assert_eq!(value(&cut.recombined(&at).unwrap()), p);
    }
}
