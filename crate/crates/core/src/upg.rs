//! Universal probability generators.
//!
//! An N-state UPG with `n` bits is a circuit with `N - 1` input vectors of
//! `n + 1` bits each. Vector `i` holds the prefix sum `(x_0 + ... + x_i) / 2^n`
//! in binary, read in the order `v_0, v_n, v_{n-1}, ..., v_1`: `v_0` is the
//! integer part and `v_n` the one-half bit. A set bit is the state `N - 1`, a
//! clear bit the state `0`. Given such an input the circuit realizes
//! `(x_0, ..., x_{N-1}) / 2^n`.
//!
//! Vectors are named `r` for two states, `r` and `s` for three, and
//! `r0, r1, ...` otherwise; bit `j` of vector `v` is the input `v_j`.
//!
//! Level `m` of every construction uses `(1/2, 0, ..., 0, 1/2)` pswitches that
//! all carry the id `p{m}`: they are contacts of a single relay. Each UPG then
//! maps the shared bits `p_n, ..., p_1` (read as a uniform binary fraction)
//! to the target quantile.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::circuit::{clamp_node, Circuit, Edge, Graph, Node};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::eval::{eval, Assignment};
use crate::par;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Construction {
    /// Direct recursion on the binary algorithm; two sub-UPG copies per level.
    Exponential,
    /// Series-parallel form with one sub-UPG copy per level.
    ReducedSp,
    /// Bridge form with one pswitch per level.
    ReducedNonsp,
    /// [`Construction::ReducedSp`] with the integer-part bits applied once at the end.
    BitRemovedSp,
    /// [`Construction::ReducedNonsp`] with the integer-part bits applied once at the end.
    BitRemovedNonsp,
}

impl Construction {
    pub const ALL: [Construction; 5] = [
        Construction::Exponential,
        Construction::ReducedSp,
        Construction::ReducedNonsp,
        Construction::BitRemovedSp,
        Construction::BitRemovedNonsp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Construction::Exponential => "exponential",
            Construction::ReducedSp => "reduced_sp",
            Construction::ReducedNonsp => "reduced_nonsp",
            Construction::BitRemovedSp => "bit_removed_sp",
            Construction::BitRemovedNonsp => "bit_removed_nonsp",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == text.trim())
            .ok_or_else(|| Error::Parse(format!("unknown UPG construction `{text}`")))
    }

    fn bit_removed(self) -> bool {
        matches!(self, Construction::BitRemovedSp | Construction::BitRemovedNonsp)
    }
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpgSpec {
    pub states: usize,
    pub bits: u32,
    pub construction: Construction,
}

impl UpgSpec {
    pub fn new(states: usize, bits: u32, construction: Construction) -> Self {
        Self {
            states,
            bits,
            construction,
        }
    }

    fn check(&self) -> Result<()> {
        if self.states < 2 {
            return Err(Error::InvalidTarget(format!(
                "a UPG needs at least 2 states, got {}",
                self.states
            )));
        }
        if self.bits > 24 {
            return Err(Error::Capacity(format!(
                "{} bits is beyond the supported 24",
                self.bits
            )));
        }
        Ok(())
    }
}

/// Input vector names for an `states`-state UPG.
pub fn vector_names(states: usize) -> Vec<String> {
    match states {
        2 => vec!["r".into()],
        3 => vec!["r".into(), "s".into()],
        _ => (0..states - 1).map(|i| format!("r{i}")).collect(),
    }
}

/// Input variable name of bit `bit` of vector `vector`.
pub fn bit_name(states: usize, vector: usize, bit: u32) -> String {
    format!("{}_{bit}", vector_names(states)[vector])
}

/// One UPG input: `N - 1` prefix-sum vectors of `n + 1` symbols each.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UpgInput {
    states: usize,
    bits: u32,
    /// `vectors[i][j]` is the symbol of bit `j` of vector `i`, in `{0, N - 1}`.
    vectors: Vec<Vec<usize>>,
}

impl UpgInput {
    /// Input whose vector `i` encodes the prefix numerator `prefixes[i] / 2^n`.
    pub fn from_prefixes(states: usize, bits: u32, prefixes: &[u64]) -> Result<Self> {
        let full = 1u64 << bits;
        if prefixes.len() + 1 != states {
            return Err(Error::Dimension {
                expected: states - 1,
                found: prefixes.len(),
            });
        }
        if prefixes.windows(2).any(|w| w[0] > w[1]) || prefixes.iter().any(|&x| x > full) {
            return Err(Error::InvalidTarget(
                "prefix sums must be non-decreasing and at most 1".into(),
            ));
        }
        let top = states - 1;
        let sym = |b: bool| if b { top } else { 0 };
        let vectors = prefixes
            .iter()
            .map(|&x| {
                std::iter::once(sym(x == full))
                    .chain((1..=bits).map(|j| sym(x >> (j - 1) & 1 == 1)))
                    .collect()
            })
            .collect();
        Ok(Self { states, bits, vectors })
    }

    /// Parses vectors written in the order `v_0, v_n, ..., v_1`, e.g. `["002", "020"]`.
    pub fn parse(states: usize, vectors: &[&str]) -> Result<Self> {
        if vectors.len() + 1 != states {
            return Err(Error::Dimension {
                expected: states - 1,
                found: vectors.len(),
            });
        }
        let top = states - 1;
        let mut parsed = Vec::with_capacity(vectors.len());
        let mut bits = None;
        for text in vectors {
            let symbols: Vec<usize> = text
                .chars()
                .map(|c| match c.to_digit(10).map(|d| d as usize) {
                    Some(0) => Ok(0),
                    Some(d) if d == top => Ok(top),
                    _ => Err(Error::Parse(format!("`{text}`: symbols must be 0 or {top}"))),
                })
                .collect::<Result<_>>()?;
            if symbols.is_empty() || bits.is_some_and(|b| b + 1 != symbols.len()) {
                return Err(Error::Parse("input vectors must be non-empty and equally long".into()));
            }
            bits = Some(symbols.len() - 1);
            // written order v_0, v_n, ..., v_1 to index order v_0, v_1, ..., v_n
            let mut v = vec![symbols[0]];
            v.extend(symbols[1..].iter().rev());
            parsed.push(v);
        }
        let input = Self {
            states,
            bits: bits.unwrap_or(0) as u32,
            vectors: parsed,
        };
        input.prefixes()?;
        Ok(input)
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Prefix numerators over `2^n`, validated as a monotone encoding.
    pub fn prefixes(&self) -> Result<Vec<u64>> {
        let full = 1u64 << self.bits;
        let mut out = Vec::with_capacity(self.vectors.len());
        for v in &self.vectors {
            let low: u64 = (1..=self.bits as usize)
                .filter(|&j| v[j] != 0)
                .map(|j| 1u64 << (j - 1))
                .sum();
            let x = if v[0] != 0 {
                if low != 0 {
                    return Err(Error::InvalidTarget("encoded prefix sum exceeds 1".into()));
                }
                full
            } else {
                low
            };
            out.push(x);
        }
        if out.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidTarget("prefix sums must be non-decreasing".into()));
        }
        Ok(out)
    }

    /// The distribution this input asks for.
    pub fn decode(&self) -> Result<Distribution> {
        let prefixes = self.prefixes()?;
        let denom = BigInt::one() << self.bits;
        let mut probs = Vec::with_capacity(self.states);
        let mut prev = 0;
        for x in prefixes.into_iter().chain([1u64 << self.bits]) {
            probs.push(Rational::new(BigInt::from(x - prev), denom.clone()));
            prev = x;
        }
        Distribution::new(probs)
    }

    /// Binds every input variable of the UPG.
    pub fn assignment(&self) -> Assignment {
        let mut a = Assignment::new();
        for (i, v) in self.vectors.iter().enumerate() {
            for (j, &s) in v.iter().enumerate() {
                a.set(bit_name(self.states, i, j as u32), s);
            }
        }
        a
    }

    /// Vector name to its symbols in the order `v_0, v_n, ..., v_1`.
    pub fn to_strings(&self) -> Vec<(String, String)> {
        vector_names(self.states)
            .into_iter()
            .zip(&self.vectors)
            .map(|(name, v)| {
                let text = std::iter::once(v[0])
                    .chain(v[1..].iter().rev().copied())
                    .map(|s| char::from_digit(s as u32, 10).unwrap_or('?'))
                    .collect();
                (name, text)
            })
            .collect()
    }
}

/// Input vectors for a dyadic target with denominator dividing `2^bits`.
pub fn encode_input(target: &Distribution, bits: u32) -> Result<UpgInput> {
    let scale = Rational::from_integer(BigInt::one() << bits);
    let mut prefixes = Vec::with_capacity(target.states() - 1);
    let mut acc = Rational::zero();
    for p in &target.probs()[..target.states() - 1] {
        acc += p;
        let scaled = &acc * &scale;
        if !scaled.is_integer() {
            return Err(Error::InvalidTarget(format!(
                "{target} is not a multiple of 1/2^{bits}"
            )));
        }
        prefixes.push(scaled.to_integer().to_u64().expect("prefix is at most 2^bits"));
    }
    UpgInput::from_prefixes(target.states(), bits, &prefixes)
}

/// Every valid input of an `states`-state, `bits`-bit UPG in lexicographic
/// prefix order.
pub fn all_inputs(states: usize, bits: u32) -> Vec<UpgInput> {
    fn go(prefix: &mut Vec<u64>, left: usize, from: u64, full: u64, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            out.push(prefix.clone());
            return;
        }
        for x in from..=full {
            prefix.push(x);
            go(prefix, left - 1, x, full, out);
            prefix.pop();
        }
    }
    let mut raw = Vec::new();
    go(&mut Vec::new(), states - 1, 0, 1u64 << bits, &mut raw);
    raw.into_iter()
        .map(|p| UpgInput::from_prefixes(states, bits, &p).expect("enumerated prefixes are valid"))
        .collect()
}

/// Number of valid inputs: `C(2^n + N - 1, N - 1)`.
pub fn input_count(states: usize, bits: u32) -> BigInt {
    let n = BigInt::from(1u64 << bits) + BigInt::from(states - 1);
    let k = states - 1;
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= &n - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num.div_floor(&den)
}

/// Builds the UPG `U_{[0, N-1], n}`.
pub fn build_upg(spec: &UpgSpec) -> Result<Circuit> {
    build_upg_range(spec, 0, spec.states - 1)
}

/// Builds `U_{[lo, hi], n}`: the UPG over states `lo..=hi` driven by vectors
/// `lo..hi`, clamped into `[lo, hi]`.
pub fn build_upg_range(spec: &UpgSpec, lo: usize, hi: usize) -> Result<Circuit> {
    spec.check()?;
    if lo >= hi || hi >= spec.states {
        return Err(Error::InvalidRange { lo, hi });
    }
    let b = Builder {
        states: spec.states,
        top: spec.states - 1,
        construction: spec.construction,
    };
    let node = if spec.construction.bit_removed() {
        let base = b.base(lo, hi);
        match b.raw(lo, hi, spec.bits) {
            Some(rest) => Node::series2(base, rest),
            None => base,
        }
    } else {
        b.raw(lo, hi, spec.bits)
            .expect("only bit-removed forms have an empty base")
    };
    Circuit::new(spec.states, clamp_node(node, lo, hi, spec.states - 1))
}

struct Builder {
    states: usize,
    top: usize,
    construction: Construction,
}

impl Builder {
    fn bit(&self, vector: usize, bit: u32) -> Node {
        Node::input(bit_name(self.states, vector, bit))
    }

    fn bit_not(&self, vector: usize, bit: u32) -> Node {
        Node::input_not(bit_name(self.states, vector, bit))
    }

    fn pswitch(&self, level: u32) -> Node {
        Node::pswitch(Distribution::half(self.states), format!("p{level}"))
    }

    /// Closed iff prefix `vector` is at least one half at `level`.
    fn flag(&self, vector: usize, level: u32) -> Node {
        if self.construction.bit_removed() {
            self.bit(vector, level)
        } else {
            Node::parallel2(self.bit(vector, 0), self.bit(vector, level))
        }
    }

    fn flag_not(&self, vector: usize, level: u32) -> Node {
        if self.construction.bit_removed() {
            self.bit_not(vector, level)
        } else {
            Node::series2(self.bit_not(vector, 0), self.bit_not(vector, level))
        }
    }

    /// Level-0 UPG: the first prefix equal to one picks the state.
    fn base(&self, lo: usize, hi: usize) -> Node {
        let mut node = self.bit_not(hi - 1, 0);
        for i in (lo..hi - 1).rev() {
            node = Node::series2(self.bit_not(i, 0), Node::parallel2(Node::det(i + 1), node));
        }
        node
    }

    /// Unclamped `U_{[lo, hi], level}`; `None` stands for the identity.
    fn raw(&self, lo: usize, hi: usize, level: u32) -> Option<Node> {
        if level == 0 {
            return (!self.construction.bit_removed()).then(|| self.base(lo, hi));
        }
        Some(match self.construction {
            Construction::Exponential => self.exponential(lo, hi, level),
            Construction::ReducedSp | Construction::BitRemovedSp => self.reduced(lo, hi, level, false),
            Construction::ReducedNonsp | Construction::BitRemovedNonsp => self.reduced(lo, hi, level, true),
        })
    }

    /// Clamped `U_{[a, b], level}` for a range narrower than its parent.
    fn sub(&self, a: usize, b: usize, level: u32) -> Node {
        if a == b {
            return Node::det(a);
        }
        match self.raw(a, b, level) {
            Some(node) => clamp_node(node, a, b, self.top),
            None => Node::det(b),
        }
    }

    fn exponential(&self, lo: usize, hi: usize, m: u32) -> Node {
        let same = || self.raw(lo, hi, m - 1).expect("exponential form has a base");
        // left: the sub-UPG below the first prefix at or above one half
        let mut left = same();
        for j in (lo..hi).rev() {
            let skip = Node::series2(self.flag_not(j, m), left);
            left = if j == lo {
                skip
            } else {
                Node::parallel2(Node::series2(self.flag(j, m), self.sub(lo, j, m - 1)), skip)
            };
        }
        // right: the sub-UPG above it
        let mut right: Option<Node> = None;
        for j in (lo..hi).rev() {
            let here = if j == lo { same() } else { self.sub(j, hi, m - 1) };
            let skip = match right {
                Some(r) => Node::series2(self.flag_not(j, m), r),
                None => self.flag_not(j, m),
            };
            right = Some(Node::parallel2(Node::series2(self.flag(j, m), here), skip));
        }
        Node::parallel2(left, Node::series2(self.pswitch(m), right.expect("range is non-empty")))
    }

    /// `f(j) * U_{[..]} + not f(j) * (next)` chained over `lo+1..hi`, ending in the top state.
    fn chain(&self, lo: usize, hi: usize, m: u32, pick: impl Fn(usize) -> Node) -> Option<Node> {
        let mut acc: Option<Node> = None;
        for j in (lo + 1..hi).rev() {
            let skip = match acc {
                Some(a) => Node::series2(self.flag_not(j, m), a),
                None => self.flag_not(j, m),
            };
            acc = Some(Node::parallel2(Node::series2(self.flag(j, m), pick(j)), skip));
        }
        acc
    }

    fn reduced(&self, lo: usize, hi: usize, m: u32, bridge: bool) -> Node {
        let inner = self.raw(lo, hi, m - 1);
        let left1 = self.chain(lo, hi, m, |j| self.sub(lo, j, m - 1));
        let right1 = self.chain(lo, hi, m, |j| self.sub(j, hi, m - 1));
        let with_not = |rest: &Option<Node>| match rest {
            Some(r) => Node::series2(self.flag_not(lo, m), r.clone()),
            None => self.flag_not(lo, m),
        };
        let a = with_not(&left1);
        let b = with_not(&right1);
        let p = self.pswitch(m);

        if bridge {
            let edge = |from: &str, to: &str, element: Node| Edge {
                from: from.into(),
                to: to.into(),
                element,
            };
            let mid = if inner.is_some() { "a" } else { "s" };
            let mut edges = Vec::with_capacity(5);
            if let Some(u) = inner {
                edges.push(edge("s", "a", u));
            }
            edges.push(edge(mid, "t", a));
            edges.push(edge("s", "b", b));
            edges.push(edge("b", "t", p));
            edges.push(edge(mid, "b", self.flag(lo, m)));
            return Node::Graph(Graph {
                source: "s".into(),
                sink: "t".into(),
                edges,
            });
        }

        let gate = if left1.is_none() {
            Node::parallel2(a, p.clone())
        } else {
            Node::parallel2(a, Node::series2(p.clone(), self.flag(lo, m)))
        };
        let first = match inner {
            Some(u) => Node::series2(u, gate),
            None => gate,
        };
        Node::parallel2(first, Node::series2(p, b))
    }
}

/// Evaluates the UPG on every valid input.
pub fn upg_truth_table(spec: &UpgSpec) -> Result<Vec<(UpgInput, Distribution)>> {
    let circuit = build_upg(spec)?;
    let inputs = all_inputs(spec.states, spec.bits);
    par::map_slice(&inputs, |input| {
        Ok((input.clone(), eval(&circuit, &input.assignment())?))
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::count_switches;

    fn d(text: &str) -> Distribution {
        Distribution::parse(text).unwrap()
    }

    fn run(spec: &UpgSpec, vectors: &[&str]) -> Distribution {
        let c = build_upg(spec).unwrap();
        eval(&c, &UpgInput::parse(spec.states, vectors).unwrap().assignment()).unwrap()
    }

    #[test]
    fn encoding_examples() {
        let r = encode_input(&d("1/8,7/8"), 3).unwrap();
        assert_eq!(r.to_strings(), vec![("r".to_string(), "0001".to_string())]);
        let rs = encode_input(&d("1/4,1/4,1/2"), 2).unwrap();
        assert_eq!(
            rs.to_strings(),
            vec![
                ("r".to_string(), "002".to_string()),
                ("s".to_string(), "020".to_string())
            ]
        );
        let one = encode_input(&d("1,0"), 4).unwrap();
        assert_eq!(one.to_strings()[0].1, "10000");
        assert!(matches!(encode_input(&d("1/3,2/3"), 4), Err(Error::InvalidTarget(_))));
        assert_eq!(rs.decode().unwrap(), d("1/4,1/4,1/2"));
    }

    #[test]
    fn parse_rejects_bad_inputs() {
        assert!(UpgInput::parse(3, &["020", "002"]).is_err());
        assert!(UpgInput::parse(3, &["012", "002"]).is_err());
        assert!(UpgInput::parse(2, &["1001"]).is_err());
        assert!(UpgInput::parse(2, &["10", "01"]).is_err());
    }

    #[test]
    fn zero_bits_is_complemented_input() {
        for construction in Construction::ALL {
            let c = build_upg(&UpgSpec::new(2, 0, construction)).unwrap();
            assert_eq!(c.root(), &Node::input_not("r_0"));
        }
    }

    #[test]
    fn spot_rows() {
        for construction in Construction::ALL {
            let two = UpgSpec::new(2, 3, construction);
            assert_eq!(run(&two, &["0001"]), d("1/8,7/8"), "{construction}");
            assert_eq!(run(&two, &["0101"]), d("5/8,3/8"), "{construction}");
            let three = UpgSpec::new(3, 2, construction);
            assert_eq!(run(&three, &["002", "020"]), d("1/4,1/4,1/2"), "{construction}");
            assert_eq!(run(&three, &["020", "022"]), d("1/2,1/4,1/4"), "{construction}");
            assert_eq!(run(&three, &["000", "000"]), Distribution::point(3, 2));
        }
    }

    #[test]
    fn two_state_counts() {
        let c = |k| count_switches(&build_upg(&UpgSpec::new(2, 3, k)).unwrap());
        let sp = c(Construction::BitRemovedSp);
        assert_eq!((sp.pswitches, sp.non_stochastic()), (6, 7));
        let nonsp = c(Construction::BitRemovedNonsp);
        assert_eq!((nonsp.pswitches, nonsp.non_stochastic()), (3, 10));
        assert_eq!(c(Construction::ReducedSp).pswitches, 6);
        assert_eq!(c(Construction::Exponential).pswitches, 7);
        assert_eq!(c(Construction::ReducedSp).distinct_pswitches, 3);
    }

    #[test]
    fn counts_inputs() {
        assert_eq!(input_count(2, 3), BigInt::from(9));
        assert_eq!(input_count(3, 2), BigInt::from(15));
        assert_eq!(all_inputs(4, 2).len(), 35);
    }

    #[test]
    fn construction_names_round_trip() {
        for c in Construction::ALL {
            assert_eq!(Construction::parse(c.name()).unwrap(), c);
        }
        assert!(Construction::parse("quadratic").is_err());
    }
}
