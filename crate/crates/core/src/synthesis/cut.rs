//! The block-interval cut.

use num_traits::{One, Zero};

use crate::circuit::{Circuit, Node};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::rational::{self as q, Rational};

/// Result of cutting a distribution at some point `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    /// The distribution conditioned on the interval `[0, q]`.
    pub left: Distribution,
    /// The distribution conditioned on the interval `[q, 1]`.
    pub right: Distribution,
    /// The state whose block contains the cut.
    pub index: usize,
}

impl Cut {
    /// `left + (q, 0, ..., 0, 1-q) * right`, which evaluates to the cut distribution.
    pub fn recombined(&self, q: &Rational) -> Result<Circuit> {
        let states = self.left.states();
        Circuit::new(
            states,
            Node::parallel2(
                Node::pswitch(self.left.clone(), "left"),
                Node::series2(
                    Node::pswitch(Distribution::cut_switch(states, q)?, "cut"),
                    Node::pswitch(self.right.clone(), "right"),
                ),
            ),
        )
    }
}

/// Cuts `p` at `q`, choosing the smallest index `k` whose prefix sum reaches `q`.
pub fn block_interval_cut(p: &Distribution, q: &Rational) -> Result<Cut> {
    if !(q > &Rational::zero() && q < &Rational::one()) {
        return Err(Error::InvalidCut(q::format(q)));
    }
    let prefix = p.cumulative();
    let k = prefix.iter().position(|s| s >= q).expect("prefix sums end at 1");
    Ok(cut_at(p, q, k))
}

/// Cuts `p` at `q` inside block `k`. Requires `sum_{i<k} p_i <= q <= sum_{i<=k} p_i`.
pub(crate) fn cut_at(p: &Distribution, q: &Rational, k: usize) -> Cut {
    let n = p.states();
    let below: Rational = p.probs()[..k].iter().sum();
    let through = &below + p.prob(k);
    debug_assert!(&below <= q && q <= &through);
    let rest = Rational::one() - q;
    let mut left = vec![Rational::zero(); n];
    let mut right = vec![Rational::zero(); n];
    for i in 0..k {
        left[i] = p.prob(i) / q;
    }
    left[k] = (q - &below) / q;
    right[k] = (&through - q) / &rest;
    for i in k + 1..n {
        right[i] = p.prob(i) / &rest;
    }
    Cut {
        left: Distribution::from_vec_unchecked(left),
        right: Distribution::from_vec_unchecked(right),
        index: k,
    }
}

/// Index of the first prefix sum strictly above one half.
pub(crate) fn first_above_half(p: &Distribution) -> usize {
    let half = q::half();
    p.cumulative()
        .iter()
        .position(|s| s > &half)
        .expect("prefix sums end at 1")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::{eval, Assignment};

    fn d(text: &str) -> Distribution {
        Distribution::parse(text).unwrap()
    }

    fn check(p: &str, at: &str, left: &str, right: &str, index: usize) {
        let p = d(p);
        let at = q::parse(at).unwrap();
        let cut = block_interval_cut(&p, &at).unwrap();
        assert_eq!(
            cut,
            Cut {
                left: d(left),
                right: d(right),
                index
            }
        );
        assert_eq!(eval(&cut.recombined(&at).unwrap(), &Assignment::new()).unwrap(), p);
    }

    #[test]
    fn examples() {
        check("5/8,1/4,1/8", "1/2", "1,0,0", "1/4,1/2,1/4", 0);
        check("1/2,1/2", "1/2", "1,0", "0,1", 0);
        check("1/3,1/3,1/3", "1/2", "2/3,1/3,0", "0,1/3,2/3", 1);
        check("1/3,1/3,1/3", "2/3", "1/2,1/2,0", "0,0,1", 1);
    }

    #[test]
    fn rejects_cut_outside_unit_interval() {
        let p = d("1/2,1/2");
        for bad in ["0", "1", "3/2", "-1/2"] {
            assert!(matches!(
                block_interval_cut(&p, &q::parse(bad).unwrap()),
                Err(Error::InvalidCut(_))
            ));
        }
    }

    #[test]
    fn strict_half_index() {
        assert_eq!(first_above_half(&d("1/2,1/4,1/4")), 1);
        assert_eq!(first_above_half(&d("5/8,1/4,1/8")), 0);
    }
}
