//! Synthesis of circuits that realize a target distribution exactly.
//!
//! Every algorithm here is built on the block-interval cut ([`block_interval_cut`]):
//! cutting a distribution at `q` splits it into a left and right conditional
//! distribution that recombine as `left + (q, 0, ..., 1-q) * right`.
//!
//! * [`synth_binary_nstate`] handles targets with denominator `2^n`.
//! * [`state_reduction`] cuts any rational target at `1/2` until every piece
//!   has at most two active states.
//! * [`denominator_reduction`] cuts into `q` equal intervals per round using
//!   the `1/2, ..., 1/q` switches; [`composite_synthesis`] chains rounds over
//!   the prime factors of a composite denominator.

mod binary;
mod bounds;
mod cut;
mod reduction;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Pow};
use serde_json::json;

use crate::circuit::Circuit;
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::netlist;
use crate::rational::{self as q, Rational};

pub use binary::synth_binary_nstate;
pub use bounds::{
    ceil_log, complexity_bound, complexity_bound_recursive, composite_bound, denominator_bound,
    denominator_bound_recursive, factorize,
};
pub use cut::{block_interval_cut, Cut};
pub use reduction::{composite_synthesis, denominator_reduction, state_reduction, StateReduction};

/// A target distribution whose probabilities are all multiples of `1 / base^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetSpec {
    dist: Distribution,
    base: u64,
    exponent: u32,
}

impl TargetSpec {
    /// Uses the smallest exponent that covers every denominator of `dist`.
    pub fn new(dist: Distribution, base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidTarget(format!("base must be at least 2, got {base}")));
        }
        let denom = q::common_denominator(dist.probs());
        let exponent = q::dividing_power(&denom, base).ok_or_else(|| {
            Error::InvalidTarget(format!(
                "{dist} has denominator {denom}, which does not divide any power of {base}"
            ))
        })?;
        Ok(Self { dist, base, exponent })
    }

    /// Denominator `2^n` form.
    pub fn dyadic(dist: Distribution) -> Result<Self> {
        Self::new(dist, 2)
    }

    /// Uses the given exponent, which must cover every denominator.
    pub fn with_exponent(dist: Distribution, base: u64, exponent: u32) -> Result<Self> {
        let spec = Self::new(dist, base)?;
        if spec.exponent > exponent {
            return Err(Error::InvalidTarget(format!(
                "{} needs denominator {base}^{}, more than {base}^{exponent}",
                spec.dist, spec.exponent
            )));
        }
        Ok(Self { exponent, ..spec })
    }

    /// Denominator form `base^1` with base the least common denominator.
    pub fn rational(dist: Distribution) -> Result<Self> {
        let denom = q::common_denominator(dist.probs());
        let base =
            u64::try_from(&denom).map_err(|_| Error::InvalidTarget(format!("denominator {denom} is too large")))?;
        if base == 1 {
            return Ok(Self {
                dist,
                base: 2,
                exponent: 0,
            });
        }
        Ok(Self {
            dist,
            base,
            exponent: 1,
        })
    }

    pub fn dist(&self) -> &Distribution {
        &self.dist
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn states(&self) -> usize {
        self.dist.states()
    }

    /// `base^exponent`.
    pub fn denominator(&self) -> BigInt {
        Pow::pow(BigInt::from(self.base), self.exponent)
    }

    /// Integer numerators over [`Self::denominator`].
    pub fn numerators(&self) -> Vec<BigInt> {
        let d = Rational::from_integer(self.denominator());
        self.dist.probs().iter().map(|p| (p * &d).to_integer()).collect()
    }
}

/// Base switches synthesis may use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwitchSet {
    pub pswitches: BTreeSet<Distribution>,
    pub allow_deterministic: bool,
}

impl SwitchSet {
    pub fn new(pswitches: impl IntoIterator<Item = Distribution>, allow_deterministic: bool) -> Self {
        Self {
            pswitches: pswitches.into_iter().collect(),
            allow_deterministic,
        }
    }

    /// The `(1 - 1/j, 0, ..., 0, 1/j)` switch.
    pub fn reciprocal(states: usize, j: u64) -> Distribution {
        Distribution::top_with(states, Rational::new(BigInt::one(), BigInt::from(j))).expect("1/j switch is valid")
    }

    /// `{1/2, 1/3, ..., 1/q}` plus deterministic switches.
    pub fn reciprocals(states: usize, q: u64) -> Self {
        Self::new((2..=q).map(|j| Self::reciprocal(states, j)), true)
    }

    pub fn contains(&self, dist: &Distribution) -> bool {
        self.pswitches.contains(dist)
    }
}

/// One block-interval cut performed during synthesis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutRecord {
    pub cut: Rational,
    pub index: usize,
    /// Recursion round, starting at 1 for cuts of the target itself.
    pub depth: usize,
    pub left: Distribution,
    pub right: Distribution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisReport {
    pub target: Distribution,
    pub circuit: Circuit,
    /// Pswitch leaves in the circuit.
    pub pswitch_count: usize,
    /// Closed-form bound that applies to the algorithm used.
    pub bound: u64,
    pub trace: Vec<CutRecord>,
}

impl SynthesisReport {
    pub(crate) fn new(target: Distribution, circuit: Circuit, bound: u64, trace: Vec<CutRecord>) -> Self {
        let pswitch_count = crate::circuit::count_switches(&circuit).pswitches;
        Self {
            target,
            circuit,
            pswitch_count,
            bound,
            trace,
        }
    }

    pub fn within_bound(&self) -> bool {
        self.pswitch_count as u64 <= self.bound
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "target": self.target.to_strings(),
            "pswitch_count": self.pswitch_count,
            "bound": self.bound,
            "trace": self.trace.iter().map(|c| json!({
                "cut": q::format(&c.cut),
                "index": c.index,
                "depth": c.depth,
                "left": c.left.to_strings(),
                "right": c.right.to_strings(),
            })).collect::<Vec<_>>(),
            "netlist": netlist::to_value(&self.circuit),
        })
    }
}
