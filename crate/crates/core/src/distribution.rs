use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A probability distribution over the totally ordered states `0..N`.
///
/// Every entry lies in `[0, 1]`, the entries sum to exactly one and `N >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Distribution {
    probs: Vec<Rational>,
}

impl Distribution {
    pub fn new(probs: Vec<Rational>) -> Result<Self> {
        if probs.len() < 2 {
            return Err(Error::InvalidDistribution(format!(
                "need at least 2 states, got {}",
                probs.len()
            )));
        }
        let zero = Rational::zero();
        let one = Rational::one();
        if let Some(bad) = probs.iter().find(|p| **p < zero || **p > one) {
            return Err(Error::InvalidDistribution(format!(
                "probability {} outside [0, 1]",
                rational::format(bad)
            )));
        }
        let total: Rational = probs.iter().sum();
        if total != one {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {}",
                rational::format(&total)
            )));
        }
        Ok(Self { probs })
    }

    /// Builds a distribution from `(numerator, denominator)` pairs.
    pub fn from_ratios(pairs: &[(i64, i64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(n, d)| rational::ratio(n, d)).collect())
    }

    /// Parses the comma-separated form, e.g. `"5/8,1/4,1/8"`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(rational::parse_list(text)?)
    }

    /// Point mass on `state`.
    pub fn point(states: usize, state: usize) -> Self {
        assert!(states >= 2 && state < states, "point mass out of range");
        let mut probs = vec![Rational::zero(); states];
        probs[state] = Rational::one();
        Self { probs }
    }

    /// `(1 - q, 0, ..., 0, q)`: the switch closed to the top state with probability `q`.
    pub fn top_with(states: usize, q: Rational) -> Result<Self> {
        let mut probs = vec![Rational::zero(); states];
        probs[0] = Rational::one() - &q;
        probs[states - 1] = q;
        Self::new(probs)
    }

    /// The symmetric `(1/2, 0, ..., 0, 1/2)` switch.
    pub fn half(states: usize) -> Self {
        Self::top_with(states, rational::half()).expect("half switch is valid")
    }

    /// The cut switch `(q, 0, ..., 0, 1 - q)`.
    pub fn cut_switch(states: usize, q: &Rational) -> Result<Self> {
        Self::top_with(states, Rational::one() - q)
    }

    pub(crate) fn from_vec_unchecked(probs: Vec<Rational>) -> Self {
        debug_assert!(Self::new(probs.clone()).is_ok());
        Self { probs }
    }

    pub fn states(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn prob(&self, state: usize) -> &Rational {
        &self.probs[state]
    }

    pub fn into_probs(self) -> Vec<Rational> {
        self.probs
    }

    /// The dual distribution: state `i` takes the mass of state `N - 1 - i`.
    pub fn reversed(&self) -> Self {
        let mut probs = self.probs.clone();
        probs.reverse();
        Self { probs }
    }

    /// The state carrying all the mass, if there is one.
    pub fn point_state(&self) -> Option<usize> {
        self.probs.iter().position(|p| p.is_one())
    }

    /// States with non-zero probability, in increasing order.
    pub fn active_states(&self) -> Vec<usize> {
        (0..self.states()).filter(|&i| !self.probs[i].is_zero()).collect()
    }

    /// `P(X <= i)` for every `i`.
    pub fn cumulative(&self) -> Vec<Rational> {
        let mut acc = Rational::zero();
        self.probs
            .iter()
            .map(|p| {
                acc += p;
                acc.clone()
            })
            .collect()
    }

    pub fn check_states(&self, states: usize) -> Result<()> {
        if self.states() != states {
            return Err(Error::Dimension {
                expected: states,
                found: self.states(),
            });
        }
        Ok(())
    }

    pub fn to_strings(&self) -> Vec<String> {
        rational::format_list(&self.probs)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(","))
    }
}
