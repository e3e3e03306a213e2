//! Targets with denominator `2^n` from `1/2` switches.

use crate::circuit::{Circuit, IdGen, Node};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::rational as q;

use super::bounds::complexity_bound;
use super::cut::{cut_at, first_above_half};
use super::{CutRecord, SynthesisReport, TargetSpec};

/// Realizes a dyadic target with `(1/2, 0, ..., 0, 1/2)` pswitches and
/// deterministic switches, using at most `f_{n,N}` pswitches.
pub fn synth_binary_nstate(target: &TargetSpec) -> Result<SynthesisReport> {
    if target.base() != 2 {
        return Err(Error::InvalidTarget(format!(
            "binary synthesis needs a denominator 2^n, got base {}",
            target.base()
        )));
    }
    let states = target.states();
    let half = Distribution::half(states);
    let mut ids = IdGen::default();
    let mut trace = Vec::new();
    let root = halve(target.dist(), 1, &mut ids, &mut trace, &mut |p, ids| {
        if let Some(s) = p.point_state() {
            Some(Node::det(s))
        } else if *p == half {
            Some(Node::pswitch(half.clone(), ids.fresh()))
        } else {
            None
        }
    });
    let circuit = Circuit::new(states, root)?;
    let bound = complexity_bound(target.exponent(), states);
    Ok(SynthesisReport::new(target.dist().clone(), circuit, bound, trace))
}

/// Recursively cuts `p` at one half, at the first block whose prefix sum
/// exceeds one half, until `terminal` accepts a piece. Zero-width pieces
/// (`point(0)` on the left, `point(N-1)` on the right) are left out.
pub(crate) fn halve(
    p: &Distribution,
    depth: usize,
    ids: &mut IdGen,
    trace: &mut Vec<CutRecord>,
    terminal: &mut dyn FnMut(&Distribution, &mut IdGen) -> Option<Node>,
) -> Node {
    if let Some(node) = terminal(p, ids) {
        return node;
    }
    let states = p.states();
    let half = q::half();
    let cut = cut_at(p, &half, first_above_half(p));
    trace.push(CutRecord {
        cut: half,
        index: cut.index,
        depth,
        left: cut.left.clone(),
        right: cut.right.clone(),
    });
    let switch = Node::pswitch(Distribution::half(states), ids.fresh());
    let branch = if cut.right == Distribution::point(states, states - 1) {
        switch
    } else {
        Node::series2(switch, halve(&cut.right, depth + 1, ids, trace, terminal))
    };
    if cut.left == Distribution::point(states, 0) {
        branch
    } else {
        Node::parallel2(halve(&cut.left, depth + 1, ids, trace, terminal), branch)
    }
}
