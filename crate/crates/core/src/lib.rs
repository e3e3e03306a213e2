//! Exact-arithmetic toolkit for multivalued stochastic relay circuits.
//!
//! A relay in this model takes one of `N` totally ordered states. Series
//! composition takes the minimum of its parts and parallel composition the
//! maximum; general two-terminal networks take the maximum over s-t paths of
//! the minimum along each path. Stochastic relays ("pswitches") carry a
//! probability distribution over the states, and every probability in this
//! crate is an exact [`Rational`].
//!
//! The crate is organised around the workflow of turning a target
//! distribution into a circuit and then checking that circuit:
//!
//! * [`circuit`], [`eval`] and [`netlist`] represent, evaluate and serialize
//!   circuits, including a brute-force joint-outcome oracle and duality.
//! * [`synthesis`] realizes dyadic and rational targets from small switch sets
//!   and computes the matching switch-count bounds.
//! * [`robustness`] perturbs base switches and measures the worst-case output
//!   error exactly.
//! * [`upg`] builds universal probability generators driven by input bits.
//! * [`lattice`] generalizes composition to join/meet on finite lattices and
//!   searches for realizable distributions.
//!
//! Heavy enumeration loops run on rayon when the `parallel` feature is on
//! (the default); see [`par`].

pub mod circuit;
pub mod distribution;
pub mod error;
pub mod eval;
pub mod lattice;
pub mod netlist;
pub mod par;
pub mod rational;
pub mod render;
pub mod robustness;
pub mod synthesis;
pub mod upg;

pub use circuit::{count_switches, Circuit, Edge, Graph, IdGen, Node, SwitchCounts, SwitchElement};
pub use distribution::Distribution;
pub use error::{Error, Result};
pub use eval::{compose_parallel, compose_series, eval, eval_oracle, Assignment, EvalOptions};
pub use rational::Rational;
