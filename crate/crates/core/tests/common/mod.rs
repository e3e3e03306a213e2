//! Shared helpers for the integration tests: target enumeration and random
//! circuit generation.

#![allow(dead_code)]

use mvrelay::rational::{self, Rational};
use mvrelay::{Circuit, Distribution, Node};
use proptest::prelude::*;
use rand::Rng;

/// Every tuple of `parts` non-negative integers summing to `total`.
pub fn compositions(total: u64, parts: usize) -> Vec<Vec<u64>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every `states`-state distribution over the denominator `denom`.
pub fn targets(denom: u64, states: usize) -> Vec<Distribution> {
    compositions(denom, states)
        .into_iter()
        .map(|xs| Distribution::new(xs.iter().map(|&x| rational::ratio(x as i64, denom as i64)).collect()).unwrap())
        .collect()
}

pub fn d(text: &str) -> Distribution {
    Distribution::parse(text).unwrap()
}

/// Distribution with a random denominator up to `max_denom`.
pub fn random_distribution(rng: &mut impl Rng, states: usize, max_denom: i64) -> Distribution {
    let denom = rng.random_range(1..=max_denom);
    let mut cuts: Vec<i64> = (0..states - 1).map(|_| rng.random_range(0..=denom)).collect();
    cuts.sort_unstable();
    let mut probs = Vec::with_capacity(states);
    let mut prev = 0;
    for c in cuts.into_iter().chain([denom]) {
        probs.push(Rational::new((c - prev).into(), denom.into()));
        prev = c;
    }
    Distribution::new(probs).unwrap()
}

/// Random series-parallel circuit with `leaves` leaves, mostly pswitches with
/// distinct ids and some deterministic switches.
pub fn random_sp_circuit(rng: &mut impl Rng, states: usize, leaves: usize) -> Circuit {
    let mut next = 0;
    let root = random_node(rng, states, leaves, &mut next);
    Circuit::new(states, root).unwrap()
}

fn random_node(rng: &mut impl Rng, states: usize, leaves: usize, next: &mut usize) -> Node {
    if leaves == 1 {
        if rng.random_bool(0.2) {
            return Node::det(rng.random_range(0..states));
        }
        *next += 1;
        return Node::pswitch(random_distribution(rng, states, 12), format!("p{next}"));
    }
    let arity = rng.random_range(2..=leaves.min(3));
    let mut sizes = vec![1; arity];
    for _ in arity..leaves {
        sizes[rng.random_range(0..arity)] += 1;
    }
    let children = sizes.into_iter().map(|k| random_node(rng, states, k, next)).collect();
    if rng.random_bool(0.5) {
        Node::Series(children)
    } else {
        Node::Parallel(children)
    }
}

pub fn arb_distribution(states: usize) -> impl Strategy<Value = Distribution> {
    (1i64..=12, proptest::collection::vec(0i64..=12, states - 1)).prop_map(move |(denom, raw)| {
        let mut cuts: Vec<i64> = raw.into_iter().map(|c| c % (denom + 1)).collect();
        cuts.sort_unstable();
        let mut probs = Vec::with_capacity(cuts.len() + 1);
        let mut prev = 0;
        for c in cuts.into_iter().chain([denom]) {
            probs.push(Rational::new((c - prev).into(), denom.into()));
            prev = c;
        }
        Distribution::new(probs).unwrap()
    })
}

/// Random sp circuit via a seed, so proptest can shrink toward small seeds.
pub fn arb_sp_circuit(max_states: usize, max_leaves: usize) -> impl Strategy<Value = Circuit> {
    (2..=max_states, 1..=max_leaves, any::<u64>()).prop_map(|(states, leaves, seed)| {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        random_sp_circuit(&mut rng, states, leaves)
    })
}
