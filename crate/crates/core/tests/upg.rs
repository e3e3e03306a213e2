use mvrelay::circuit::{count_switches, remap_states};
use mvrelay::upg::{
    all_inputs, build_upg, build_upg_range, encode_input, input_count, upg_truth_table, Construction, UpgInput, UpgSpec,
};
use mvrelay::{eval, Distribution, SwitchElement};
use num_bigint::BigInt;
use proptest::prelude::*;

mod common;

/// Sizes checked exhaustively for every construction.
const SIZES: [(usize, u32); 11] = [
    (2, 0),
    (2, 1),
    (2, 2),
    (2, 3),
    (2, 4),
    (2, 5),
    (3, 1),
    (3, 2),
    (3, 3),
    (4, 2),
    (5, 1),
];

#[test]
fn truth_tables_match_decoding() {
    for construction in Construction::ALL {
        for (states, bits) in SIZES {
            let rows = upg_truth_table(&UpgSpec::new(states, bits, construction)).unwrap();
            assert_eq!(BigInt::from(rows.len()), input_count(states, bits));
            for (input, output) in rows {
                assert_eq!(
                    output,
                    input.decode().unwrap(),
                    "{construction} N={states} n={bits} {input:?}"
                );
            }
        }
    }
}

#[test]
fn encode_then_evaluate_round_trips() {
    for construction in Construction::ALL {
        let spec = UpgSpec::new(3, 3, construction);
        let circuit = build_upg(&spec).unwrap();
        for target in common::targets(8, 3) {
            let input = encode_input(&target, 3).unwrap();
            assert_eq!(eval(&circuit, &input.assignment()).unwrap(), target);
        }
    }
}

#[test]
fn sub_range_upg_is_clamped_to_its_states() {
    for construction in Construction::ALL {
        for (lo, hi) in [(0, 1), (1, 2), (2, 3), (1, 3), (0, 2)] {
            let spec = UpgSpec::new(4, 2, construction);
            let circuit = build_upg_range(&spec, lo, hi).unwrap();
            for input in all_inputs(4, 2) {
                let prefixes = input.prefixes().unwrap();
                let sub = UpgInput::from_prefixes(hi - lo + 1, 2, &prefixes[lo..hi]).unwrap();
                let mapping: Vec<usize> = (lo..=hi).collect();
                let expected = remap_states(&sub.decode().unwrap(), &mapping, 4).unwrap();
                assert_eq!(
                    eval(&circuit, &input.assignment()).unwrap(),
                    expected,
                    "{construction} [{lo},{hi}]"
                );
            }
        }
    }
}

#[test]
fn two_state_switch_counts() {
    for bits in 1..=6u32 {
        let n = bits as usize;
        let counts = |c| count_switches(&build_upg(&UpgSpec::new(2, bits, c)).unwrap());
        let exp = counts(Construction::Exponential);
        assert_eq!(exp.pswitches, (1 << n) - 1);
        let sp = counts(Construction::BitRemovedSp);
        assert_eq!((sp.pswitches, sp.non_stochastic()), (2 * n, 2 * n + 1));
        let nonsp = counts(Construction::BitRemovedNonsp);
        assert_eq!((nonsp.pswitches, nonsp.non_stochastic()), (n, 3 * n + 1));
        assert!(build_upg(&UpgSpec::new(2, bits, Construction::BitRemovedSp))
            .unwrap()
            .is_sp());
        assert!(!build_upg(&UpgSpec::new(2, bits, Construction::BitRemovedNonsp))
            .unwrap()
            .is_sp());
        for c in Construction::ALL {
            assert_eq!(counts(c).distinct_pswitches, n, "{c}");
        }
    }
}

#[test]
fn reduced_growth_is_polynomial() {
    // one same-range copy per level: three-state size is quadratic in n
    let sizes: Vec<usize> = (1..=8)
        .map(|n| count_switches(&build_upg(&UpgSpec::new(3, n, Construction::ReducedSp)).unwrap()).pswitches)
        .collect();
    let exp: Vec<usize> = (1..=8)
        .map(|n| count_switches(&build_upg(&UpgSpec::new(3, n, Construction::Exponential)).unwrap()).pswitches)
        .collect();
    assert!(sizes[7] * 4 < exp[7], "{sizes:?} vs {exp:?}");
    // second differences of a quadratic are constant
    let diffs: Vec<i64> = sizes
        .windows(3)
        .map(|w| w[2] as i64 - 2 * w[1] as i64 + w[0] as i64)
        .collect();
    assert!(diffs.windows(2).skip(1).all(|w| w[0] == w[1]), "{sizes:?}");
}

fn with_fresh_ids(shared: &mvrelay::Circuit) -> mvrelay::Circuit {
    let mut next = 0;
    shared
        .map_leaves(|leaf| {
            Ok(match leaf {
                SwitchElement::Pswitch { dist, .. } => {
                    next += 1;
                    SwitchElement::Pswitch {
                        dist: dist.clone(),
                        id: format!("q{next}"),
                    }
                }
                other => other.clone(),
            })
        })
        .unwrap()
}

fn wrong_rows(circuit: &mvrelay::Circuit, states: usize, bits: u32) -> usize {
    all_inputs(states, bits)
        .into_iter()
        .filter(|input| eval(circuit, &input.assignment()).unwrap() != input.decode().unwrap())
        .count()
}

#[test]
fn three_state_reduced_forms_need_shared_level_switches() {
    for construction in Construction::ALL {
        for bits in 2..=3 {
            let fresh = |states| with_fresh_ids(&build_upg(&UpgSpec::new(states, bits, construction)).unwrap());
            assert_eq!(wrong_rows(&fresh(2), 2, bits), 0, "{construction}");
            let broken = wrong_rows(&fresh(3), 3, bits);
            if construction == Construction::Exponential {
                assert_eq!(broken, 0);
            } else {
                assert!(broken > 0, "{construction} n={bits}");
            }
        }
    }
}

proptest! {
    #[test]
    fn random_dyadic_targets(seed in any::<u64>(), c in 0..5usize) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let states = rng.random_range(2..=4usize);
        let bits = rng.random_range(0..=if states == 2 { 6 } else { 3 });
        let mut xs: Vec<u64> = (0..states - 1).map(|_| rng.random_range(0..=1u64 << bits)).collect();
        xs.sort_unstable();
        let input = UpgInput::from_prefixes(states, bits, &xs).unwrap();
        let target: Distribution = input.decode().unwrap();
        let circuit = build_upg(&UpgSpec::new(states, bits, Construction::ALL[c])).unwrap();
        prop_assert_eq!(eval(&circuit, &encode_input(&target, bits).unwrap().assignment()).unwrap(), target);
    }
}
