//! Rational targets: state reduction, denominator reduction and composite denominators.

use num_traits::ToPrimitive;

use crate::circuit::{clamp_node, Circuit, IdGen, Node};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::par;
use crate::rational::{self as q, Rational};

use super::binary::halve;
use super::bounds::{ceil_log, complexity_bound, denominator_bound, factorize};
use super::cut::block_interval_cut;
use super::{CutRecord, SwitchSet, SynthesisReport, TargetSpec};

/// Output of [`state_reduction`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateReduction {
    /// `report.bound` is `half_bound + (N - 1)`: the cut switches plus one
    /// leaf per remaining two-state piece.
    pub report: SynthesisReport,
    /// `(1/2, 0, ..., 0, 1/2)` pswitches, including any clamped into place.
    pub half_switches: usize,
    /// Leaves with exactly two active states that are not `1/2` switches.
    pub leaf_switches: usize,
    /// `f_{ceil(log2 q), N}`.
    pub half_bound: u64,
    /// Deepest cut round.
    pub rounds: usize,
}

fn small_denominator(target: &TargetSpec) -> Result<u64> {
    target
        .denominator()
        .to_u64()
        .ok_or_else(|| Error::InvalidTarget(format!("denominator {} is too large", target.denominator())))
}

/// Cuts the target at one half until every piece has at most two active
/// states. Two-state pieces become leaf pswitches; pieces that split their
/// mass evenly become clamped `1/2` switches.
pub fn state_reduction(target: &TargetSpec) -> Result<StateReduction> {
    let states = target.states();
    let denom = small_denominator(target)?;
    let half = Distribution::half(states);
    let top = states - 1;
    let even = q::half();
    let mut ids = IdGen::default();
    let mut trace = Vec::new();
    let root = halve(target.dist(), 1, &mut ids, &mut trace, &mut |p, ids| {
        if let Some(s) = p.point_state() {
            return Some(Node::det(s));
        }
        match p.active_states()[..] {
            [lo, hi] if *p.prob(lo) == even => Some(clamp_node(Node::pswitch(half.clone(), ids.fresh()), lo, hi, top)),
            [_, _] => Some(Node::pswitch(p.clone(), ids.fresh())),
            _ => None,
        }
    });
    let circuit = Circuit::new(states, root)?;
    let mut half_switches = 0;
    let mut leaf_switches = 0;
    circuit.root().for_each_leaf(&mut |e| {
        if let crate::circuit::SwitchElement::Pswitch { dist, .. } = e {
            if *dist == half {
                half_switches += 1;
            } else {
                leaf_switches += 1;
            }
        }
    });
    let half_bound = complexity_bound(ceil_log(2, denom), states);
    let rounds = trace.iter().map(|c| c.depth).max().unwrap_or(0);
    let report = SynthesisReport::new(target.dist().clone(), circuit, half_bound + top as u64, trace);
    Ok(StateReduction {
        report,
        half_switches,
        leaf_switches,
        half_bound,
        rounds,
    })
}

fn require_reciprocals(switches: &SwitchSet, states: usize, q: u64) -> Result<()> {
    if !switches.allow_deterministic {
        return Err(Error::InsufficientSwitchSet("deterministic".into()));
    }
    for j in 2..=q {
        if !switches.contains(&SwitchSet::reciprocal(states, j)) {
            return Err(Error::InsufficientSwitchSet(format!("1/{j}")));
        }
    }
    Ok(())
}

/// Realizes a target over `q^n` with the `1/2, ..., 1/q` switches. Each
/// round cuts the remaining interval at `(q-1)/q`, `(q-2)/(q-1)`, ..., `1/2`,
/// leaving `q` pieces over `q^(n-1)` that are realized recursively.
pub fn denominator_reduction(target: &TargetSpec, switches: &SwitchSet) -> Result<SynthesisReport> {
    let states = target.states();
    let q = target.base();
    require_reciprocals(switches, states, q)?;
    let bases = vec![q; target.exponent() as usize];
    let mut ids = IdGen::default();
    let mut trace = Vec::new();
    let root = reduce_rounds(target.dist(), &bases, 0, switches, &mut ids, &mut trace);
    let circuit = Circuit::new(states, root)?;
    let bound = denominator_bound(q, target.exponent(), states);
    Ok(SynthesisReport::new(target.dist().clone(), circuit, bound, trace))
}

/// Realizes a target whose denominator factors into several primes by
/// running denominator-reduction rounds for each prime in turn. Every order
/// of the distinct primes is tried and the smallest circuit kept.
/// `bound` is the denominator-reduction closed form for the target's base;
/// see [`composite_bound`](super::composite_bound) for the per-prime sum.
pub fn composite_synthesis(target: &TargetSpec, switches: &SwitchSet) -> Result<SynthesisReport> {
    let states = target.states();
    let denom = small_denominator(target)?;
    let factors = factorize(denom);
    let largest = factors.last().map_or(2, |f| f.0);
    require_reciprocals(switches, states, largest)?;

    let mut primes: Vec<(u64, u32)> = factors.iter().rev().copied().collect();
    let orders = if primes.len() <= 4 {
        permutations(&mut primes)
    } else {
        vec![primes]
    };
    let candidates = par::map_slice(&orders, |order| {
        let bases: Vec<u64> = order
            .iter()
            .flat_map(|&(p, k)| std::iter::repeat_n(p, k as usize))
            .collect();
        let mut ids = IdGen::default();
        let mut trace = Vec::new();
        let root = reduce_rounds(target.dist(), &bases, 0, switches, &mut ids, &mut trace);
        (root, trace)
    });
    let mut best: Option<SynthesisReport> = None;
    for (root, trace) in candidates {
        let report = SynthesisReport::new(
            target.dist().clone(),
            Circuit::new(states, root)?,
            denominator_bound(target.base(), target.exponent(), states),
            trace,
        );
        if best.as_ref().is_none_or(|b| report.pswitch_count < b.pswitch_count) {
            best = Some(report);
        }
    }
    Ok(best.expect("at least one prime order"))
}

fn permutations<T: Clone>(items: &mut [T]) -> Vec<Vec<T>> {
    fn go<T: Clone>(items: &mut [T], k: usize, out: &mut Vec<Vec<T>>) {
        if k == items.len() {
            out.push(items.to_vec());
            return;
        }
        for i in k..items.len() {
            items.swap(k, i);
            go(items, k + 1, out);
            items.swap(k, i);
        }
    }
    let mut out = Vec::new();
    go(items, 0, &mut out);
    out
}

/// One denominator-reduction round with base `bases[level]`, then recursion
/// on every piece with the remaining bases.
fn reduce_rounds(
    p: &Distribution,
    bases: &[u64],
    level: usize,
    switches: &SwitchSet,
    ids: &mut IdGen,
    trace: &mut Vec<CutRecord>,
) -> Node {
    if let Some(s) = p.point_state() {
        return Node::det(s);
    }
    if switches.contains(p) {
        return Node::pswitch(p.clone(), ids.fresh());
    }
    let states = p.states();
    let base = *bases
        .get(level)
        .expect("the target denominator divides the product of the bases");
    let mut rest = p.clone();
    let mut terms = Vec::new();
    for j in (2..=base).rev() {
        let at = Rational::new((j - 1).into(), j.into());
        let cut = block_interval_cut(&rest, &at).expect("cut points lie strictly inside (0, 1)");
        trace.push(CutRecord {
            cut: at,
            index: cut.index,
            depth: level + 1,
            left: cut.left.clone(),
            right: cut.right.clone(),
        });
        let switch = Node::pswitch(SwitchSet::reciprocal(states, j), ids.fresh());
        terms.push(if cut.right == Distribution::point(states, states - 1) {
            switch
        } else {
            Node::series2(
                switch,
                reduce_rounds(&cut.right, bases, level + 1, switches, ids, trace),
            )
        });
        rest = cut.left;
        if rest.point_state().is_some() {
            break;
        }
    }
    let mut children = Vec::with_capacity(terms.len() + 1);
    if rest != Distribution::point(states, 0) {
        children.push(reduce_rounds(&rest, bases, level + 1, switches, ids, trace));
    }
    children.extend(terms.into_iter().rev());
    Node::parallel(children)
}
