//! Exact evaluation.
//!
//! [`eval`] works compositionally: series and parallel nodes combine child
//! distributions with the cumulative identities, and graph nodes enumerate
//! the joint outcomes of their edges and take the bottleneck (max over s-t
//! paths of the min along the path) for each outcome. Pswitch ids that label
//! more than one leaf are conditioned on first, so every sub-evaluation sees
//! independent inputs.
//!
//! [`eval_oracle`] shares none of that machinery. It compiles the circuit to
//! a plain min/max expression over one variable per pswitch id and
//! enumerates every joint outcome.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::circuit::{Circuit, Graph, Node, SwitchElement};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::par;
use crate::rational::{self, Rational};

/// Input variable bindings: name to state.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, usize>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: impl Into<String>, state: usize) -> Self {
        self.set(name, state);
        self
    }

    pub fn set(&mut self, name: impl Into<String>, state: usize) {
        self.0.insert(name.into(), state);
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.0.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn input_state(&self, name: &str, complemented: bool, states: usize) -> Result<usize> {
        let s = self
            .get(name)
            .ok_or_else(|| Error::MissingAssignment(name.to_string()))?;
        if s >= states {
            return Err(Error::InvalidAssignment(format!(
                "input `{name}` set to state {s} in a {states}-state circuit"
            )));
        }
        Ok(if complemented { states - 1 - s } else { s })
    }
}

impl<S: Into<String>> FromIterator<(S, usize)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, usize)>>(iter: I) -> Self {
        Self(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// Enumeration limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    /// Most stochastic edges a single graph node may enumerate.
    pub max_graph_switches: usize,
    /// Most joint outcomes any single enumeration may visit.
    pub max_outcomes: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            max_graph_switches: 20,
            max_outcomes: 1 << 24,
        }
    }
}

/// Distribution of `min(X, Y)` for independent `X ~ p`, `Y ~ q`.
pub fn compose_series(p: &Distribution, q: &Distribution) -> Result<Distribution> {
    q.check_states(p.states())?;
    // P(min >= k) = P(X >= k) P(Y >= k)
    let tail = |d: &Distribution| -> Vec<Rational> {
        let mut acc = Rational::zero();
        let mut out: Vec<Rational> = d
            .probs()
            .iter()
            .rev()
            .map(|x| {
                acc += x;
                acc.clone()
            })
            .collect();
        out.reverse();
        out
    };
    let joint: Vec<Rational> = tail(p).iter().zip(tail(q)).map(|(a, b)| a * b).collect();
    let n = joint.len();
    let probs = (0..n)
        .map(|k| {
            if k + 1 < n {
                &joint[k] - &joint[k + 1]
            } else {
                joint[k].clone()
            }
        })
        .collect();
    Ok(Distribution::from_vec_unchecked(probs))
}

/// Distribution of `max(X, Y)` for independent `X ~ p`, `Y ~ q`.
pub fn compose_parallel(p: &Distribution, q: &Distribution) -> Result<Distribution> {
    q.check_states(p.states())?;
    // P(max <= k) = P(X <= k) P(Y <= k)
    let joint: Vec<Rational> = p.cumulative().iter().zip(q.cumulative()).map(|(a, b)| a * b).collect();
    let probs = (0..joint.len())
        .map(|k| {
            if k == 0 {
                joint[0].clone()
            } else {
                &joint[k] - &joint[k - 1]
            }
        })
        .collect();
    Ok(Distribution::from_vec_unchecked(probs))
}

/// Evaluates with the default [`EvalOptions`].
pub fn eval(circuit: &Circuit, assignment: &Assignment) -> Result<Distribution> {
    eval_with(circuit, assignment, &EvalOptions::default())
}

pub fn eval_with(circuit: &Circuit, assignment: &Assignment, options: &EvalOptions) -> Result<Distribution> {
    let states = circuit.states();
    let shared: Vec<(String, Distribution)> = {
        let occurrences = circuit.pswitch_occurrences();
        circuit
            .pswitches()
            .into_iter()
            .filter(|(id, _)| occurrences[id] > 1)
            .collect()
    };
    let ctx = Context {
        states,
        assignment,
        options,
    };
    if shared.is_empty() {
        return ctx.node(circuit.root(), &HashMap::new());
    }

    let factors: Vec<Vec<(usize, Rational)>> = shared.iter().map(|(_, d)| support(d)).collect();
    let total = outcome_count(&factors, options.max_outcomes)?;
    let radices: Vec<usize> = factors.iter().map(Vec::len).collect();
    let parts = par::map_range(total as usize, |index| -> Result<Vec<Rational>> {
        let choice = mixed_radix(index, &radices);
        let mut fixed = HashMap::with_capacity(shared.len());
        let mut weight = Rational::one();
        for ((i, (id, _)), c) in shared.iter().enumerate().zip(&choice) {
            let (state, p) = &factors[i][*c];
            fixed.insert(id.as_str(), *state);
            weight *= p;
        }
        let d = ctx.node(circuit.root(), &fixed)?;
        Ok(d.probs().iter().map(|x| x * &weight).collect())
    });
    let mut acc = vec![Rational::zero(); states];
    for part in parts {
        for (a, x) in acc.iter_mut().zip(part?) {
            *a += x;
        }
    }
    Ok(Distribution::from_vec_unchecked(acc))
}

struct Context<'a> {
    states: usize,
    assignment: &'a Assignment,
    options: &'a EvalOptions,
}

impl Context<'_> {
    fn node(&self, node: &Node, fixed: &HashMap<&str, usize>) -> Result<Distribution> {
        match node {
            Node::Leaf(SwitchElement::Pswitch { dist, id }) => Ok(match fixed.get(id.as_str()) {
                Some(&s) => Distribution::point(self.states, s),
                None => dist.clone(),
            }),
            Node::Leaf(SwitchElement::Det(s)) => Ok(Distribution::point(self.states, *s)),
            Node::Leaf(SwitchElement::Input { name, complemented }) => Ok(Distribution::point(
                self.states,
                self.assignment.input_state(name, *complemented, self.states)?,
            )),
            Node::Series(children) => self.fold(children, fixed, compose_series),
            Node::Parallel(children) => self.fold(children, fixed, compose_parallel),
            Node::Graph(g) => self.graph(g, fixed),
        }
    }

    fn fold(
        &self,
        children: &[Node],
        fixed: &HashMap<&str, usize>,
        op: fn(&Distribution, &Distribution) -> Result<Distribution>,
    ) -> Result<Distribution> {
        let mut acc = self.node(&children[0], fixed)?;
        for child in &children[1..] {
            acc = op(&acc, &self.node(child, fixed)?)?;
        }
        Ok(acc)
    }

    fn graph(&self, g: &Graph, fixed: &HashMap<&str, usize>) -> Result<Distribution> {
        let shape = GraphShape::new(g);
        let factors: Vec<Vec<(usize, Rational)>> = g
            .edges
            .iter()
            .map(|e| self.node(&e.element, fixed).map(|d| support(&d)))
            .collect::<Result<_>>()?;
        let stochastic = factors.iter().filter(|f| f.len() > 1).count();
        if stochastic > self.options.max_graph_switches {
            return Err(Error::Capacity(format!(
                "graph has {stochastic} stochastic edges, limit is {}",
                self.options.max_graph_switches
            )));
        }
        let probs = enumerate_states(&factors, self.states, self.options.max_outcomes, |values| {
            shape.bottleneck(values)
        })?;
        Ok(Distribution::from_vec_unchecked(probs))
    }
}

fn support(d: &Distribution) -> Vec<(usize, Rational)> {
    d.probs()
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(s, p)| (s, p.clone()))
        .collect()
}

fn outcome_count<T>(factors: &[Vec<T>], cap: u64) -> Result<u64> {
    let mut total: u64 = 1;
    for f in factors {
        total = total
            .checked_mul(f.len() as u64)
            .filter(|&t| t <= cap)
            .ok_or_else(|| Error::Capacity(format!("joint outcome space exceeds {cap} outcomes")))?;
    }
    Ok(total)
}

fn mixed_radix(mut index: usize, radices: &[usize]) -> Vec<usize> {
    radices
        .iter()
        .map(|&r| {
            let digit = index % r;
            index /= r;
            digit
        })
        .collect()
}

/// Vertex-indexed copy of a graph's topology.
struct GraphShape {
    vertices: usize,
    source: usize,
    sink: usize,
    ends: Vec<(usize, usize)>,
}

impl GraphShape {
    fn new(g: &Graph) -> Self {
        fn id<'a>(index: &mut HashMap<&'a str, usize>, name: &'a str) -> usize {
            let next = index.len();
            *index.entry(name).or_insert(next)
        }
        let mut index = HashMap::new();
        let source = id(&mut index, &g.source);
        let sink = id(&mut index, &g.sink);
        let ends = g
            .edges
            .iter()
            .map(|e| (id(&mut index, &e.from), id(&mut index, &e.to)))
            .collect();
        Self {
            vertices: index.len(),
            source,
            sink,
            ends,
        }
    }

    /// Largest `v` such that the edges with value `>= v` connect the terminals.
    fn bottleneck(&self, values: &[usize]) -> usize {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_unstable_by(|&a, &b| values[b].cmp(&values[a]));
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(parent: &mut [usize], mut v: usize) -> usize {
            while parent[v] != v {
                parent[v] = parent[parent[v]];
                v = parent[v];
            }
            v
        }
        for e in order {
            let (a, b) = self.ends[e];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
            if find(&mut parent, self.source) == find(&mut parent, self.sink) {
                return values[e];
            }
        }
        unreachable!("validated graphs connect their terminals")
    }
}

/// Probability weight usable by the outcome enumerator.
trait Mass: Clone + Send + Sync {
    fn nothing() -> Self;
    fn unit() -> Self;
    fn times(&self, other: &Self) -> Self;
    fn accumulate(&mut self, other: &Self);
}

impl Mass for u128 {
    fn nothing() -> Self {
        0
    }
    fn unit() -> Self {
        1
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn accumulate(&mut self, other: &Self) {
        *self += other;
    }
}

impl Mass for Rational {
    fn nothing() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn accumulate(&mut self, other: &Self) {
        *self += other;
    }
}

/// Sums the weight of every joint outcome of `factors` into the state chosen
/// by `value`. Factors list `(state, probability)` pairs with non-zero mass.
/// Exact integer weights are used whenever the common denominators fit.
fn enumerate_states<F>(factors: &[Vec<(usize, Rational)>], states: usize, cap: u64, value: F) -> Result<Vec<Rational>>
where
    F: Fn(&[usize]) -> usize + Sync,
{
    outcome_count(factors, cap)?;
    if let Some((scaled, denom)) = integer_factors(factors) {
        let counts = enumerate_mass(&scaled, states, &value);
        let denom = BigInt::from(denom);
        return Ok(counts
            .into_iter()
            .map(|c| Rational::new(BigInt::from(c), denom.clone()))
            .collect());
    }
    Ok(enumerate_mass(factors, states, &value))
}

/// Per-factor integer weights and the product of their denominators.
type IntegerFactors = (Vec<Vec<(usize, u128)>>, u128);

/// Rescales every factor to integer weights over its own common denominator.
/// Returns `None` when the product of those denominators overflows `u128`.
fn integer_factors(factors: &[Vec<(usize, Rational)>]) -> Option<IntegerFactors> {
    let mut total: u128 = 1;
    let mut scaled = Vec::with_capacity(factors.len());
    for f in factors {
        let d = rational::common_denominator(f.iter().map(|(_, p)| p));
        let d_small = d.to_u128()?;
        total = total.checked_mul(d_small)?;
        let dr = Rational::from_integer(d);
        scaled.push(
            f.iter()
                .map(|(s, p)| Some((*s, (p * &dr).to_integer().to_u128()?)))
                .collect::<Option<Vec<_>>>()?,
        );
    }
    Some((scaled, total))
}

fn enumerate_mass<M: Mass, F>(factors: &[Vec<(usize, M)>], states: usize, value: &F) -> Vec<M>
where
    F: Fn(&[usize]) -> usize + Sync,
{
    // fan out over a prefix of the factors, then walk the rest depth-first
    let mut split = 0;
    let mut prefixes: u64 = 1;
    while split < factors.len() && prefixes < 256 {
        prefixes *= factors[split].len() as u64;
        split += 1;
    }
    let radices: Vec<usize> = factors[..split].iter().map(Vec::len).collect();
    let parts = par::map_range(prefixes as usize, |index| {
        let digits = mixed_radix(index, &radices);
        let mut chosen = Vec::with_capacity(factors.len());
        let mut weight = M::unit();
        for (f, &d) in factors.iter().zip(&digits) {
            let (s, p) = &f[d];
            chosen.push(*s);
            weight = weight.times(p);
        }
        let mut acc = vec![M::nothing(); states];
        walk(factors, split, &mut chosen, &weight, &mut acc, value);
        acc
    });
    let mut acc = vec![M::nothing(); states];
    for part in parts {
        for (a, x) in acc.iter_mut().zip(&part) {
            a.accumulate(x);
        }
    }
    acc
}

fn walk<M: Mass, F>(
    factors: &[Vec<(usize, M)>],
    level: usize,
    chosen: &mut Vec<usize>,
    weight: &M,
    acc: &mut [M],
    value: &F,
) where
    F: Fn(&[usize]) -> usize,
{
    if level == factors.len() {
        acc[value(chosen)].accumulate(weight);
        return;
    }
    for (s, p) in &factors[level] {
        chosen.push(*s);
        walk(factors, level + 1, chosen, &weight.times(p), acc, value);
        chosen.pop();
    }
}

/// Evaluates with the default [`EvalOptions`] by full joint enumeration.
pub fn eval_oracle(circuit: &Circuit, assignment: &Assignment) -> Result<Distribution> {
    eval_oracle_with(circuit, assignment, &EvalOptions::default())
}

/// Brute-force reference evaluator: one variable per pswitch id, every joint
/// outcome enumerated, each outcome evaluated as a deterministic circuit.
pub fn eval_oracle_with(circuit: &Circuit, assignment: &Assignment, options: &EvalOptions) -> Result<Distribution> {
    let states = circuit.states();
    let switches = circuit.pswitches();
    let slots: HashMap<&str, usize> = switches
        .iter()
        .enumerate()
        .map(|(i, (id, _))| (id.as_str(), i))
        .collect();
    let expr = Expr::compile(circuit.root(), &slots, assignment, states)?;
    let factors: Vec<Vec<(usize, Rational)>> = switches.iter().map(|(_, d)| support(d)).collect();
    let probs = enumerate_states(&factors, states, options.max_outcomes, |values| expr.value(values))?;
    Ok(Distribution::from_vec_unchecked(probs))
}

enum Expr {
    Const(usize),
    Var(usize),
    Min(Vec<Expr>),
    Max(Vec<Expr>),
    Graph(GraphShape, Vec<Expr>),
}

impl Expr {
    fn compile(node: &Node, slots: &HashMap<&str, usize>, assignment: &Assignment, states: usize) -> Result<Expr> {
        let all = |children: &[Node]| -> Result<Vec<Expr>> {
            children
                .iter()
                .map(|c| Expr::compile(c, slots, assignment, states))
                .collect()
        };
        Ok(match node {
            Node::Leaf(SwitchElement::Pswitch { id, .. }) => Expr::Var(slots[id.as_str()]),
            Node::Leaf(SwitchElement::Det(s)) => Expr::Const(*s),
            Node::Leaf(SwitchElement::Input { name, complemented }) => {
                Expr::Const(assignment.input_state(name, *complemented, states)?)
            }
            Node::Series(c) => Expr::Min(all(c)?),
            Node::Parallel(c) => Expr::Max(all(c)?),
            Node::Graph(g) => Expr::Graph(
                GraphShape::new(g),
                g.edges
                    .iter()
                    .map(|e| Expr::compile(&e.element, slots, assignment, states))
                    .collect::<Result<_>>()?,
            ),
        })
    }

    fn value(&self, vars: &[usize]) -> usize {
        match self {
            Expr::Const(s) => *s,
            Expr::Var(i) => vars[*i],
            Expr::Min(c) => c.iter().map(|e| e.value(vars)).min().unwrap(),
            Expr::Max(c) => c.iter().map(|e| e.value(vars)).max().unwrap(),
            Expr::Graph(shape, edges) => {
                let values: Vec<usize> = edges.iter().map(|e| e.value(vars)).collect();
                shape.bottleneck(&values)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Edge;

    fn d(text: &str) -> Distribution {
        Distribution::parse(text).unwrap()
    }

    fn both(c: &Circuit, a: &Assignment) -> Distribution {
        let x = eval(c, a).unwrap();
        assert_eq!(x, eval_oracle(c, a).unwrap());
        x
    }

    #[test]
    fn composition_examples() {
        let h = d("1/2,1/2");
        assert_eq!(compose_series(&h, &h).unwrap(), d("3/4,1/4"));
        assert_eq!(compose_parallel(&h, &h).unwrap(), d("1/4,3/4"));
        let h3 = d("1/2,0,1/2");
        assert_eq!(compose_series(&h3, &h3).unwrap(), d("3/4,0,1/4"));
        assert_eq!(
            compose_parallel(&h3, &Distribution::point(3, 1)).unwrap(),
            d("0,1/2,1/2")
        );
        assert_eq!(
            compose_series(&Distribution::point(3, 0), &d("1/5,2/5,2/5")).unwrap(),
            Distribution::point(3, 0)
        );
        assert_eq!(
            compose_parallel(&Distribution::point(3, 2), &d("1/5,2/5,2/5")).unwrap(),
            Distribution::point(3, 2)
        );
        assert!(matches!(compose_series(&h, &h3), Err(Error::Dimension { .. })));
    }

    #[test]
    fn eleven_sixteenths_chain() {
        let h = || Node::pswitch(d("1/2,1/2"), "");
        let mut n = 0;
        let mut fresh = || {
            n += 1;
            match h() {
                Node::Leaf(SwitchElement::Pswitch { dist, .. }) => Node::pswitch(dist, format!("p{n}")),
                _ => unreachable!(),
            }
        };
        let inner = Node::parallel2(fresh(), fresh());
        let chain = Node::parallel2(Node::series2(inner, fresh()), fresh());
        let c = Circuit::new(2, chain).unwrap();
        assert_eq!(both(&c, &Assignment::new()), d("5/16,11/16"));
    }

    #[test]
    fn fig3c_bottom_circuit() {
        let h = d("1/2,0,1/2");
        let top = Node::parallel2(Node::pswitch(h.clone(), "a"), Node::det(1));
        let c = Circuit::new(3, Node::series2(top, Node::pswitch(h, "b"))).unwrap();
        assert_eq!(both(&c, &Assignment::new()), d("1/2,1/4,1/4"));
    }

    #[test]
    fn inputs() {
        let c = Circuit::new(3, Node::input("r")).unwrap();
        assert_eq!(both(&c, &Assignment::new().with("r", 2)), Distribution::point(3, 2));
        let nc = Circuit::new(3, Node::input_not("r")).unwrap();
        assert_eq!(both(&nc, &Assignment::new().with("r", 2)), Distribution::point(3, 0));
        assert!(matches!(eval(&c, &Assignment::new()), Err(Error::MissingAssignment(_))));
        assert!(matches!(
            eval_oracle(&c, &Assignment::new()),
            Err(Error::MissingAssignment(_))
        ));
        assert!(matches!(
            eval(&c, &Assignment::new().with("r", 3)),
            Err(Error::InvalidAssignment(_))
        ));
    }

    #[test]
    fn deterministic_circuit_is_point_mass() {
        let c = Circuit::new(
            4,
            Node::parallel2(Node::series2(Node::det(3), Node::det(1)), Node::det(2)),
        )
        .unwrap();
        assert_eq!(both(&c, &Assignment::new()), Distribution::point(4, 2));
    }

    #[test]
    fn shared_id_is_one_relay() {
        let h = d("1/2,1/2");
        let c = Circuit::new(2, Node::series2(Node::pswitch(h.clone(), "p"), Node::pswitch(h, "p"))).unwrap();
        assert_eq!(both(&c, &Assignment::new()), d("1/2,1/2"));
    }

    fn edge(from: &str, to: &str, element: Node) -> Edge {
        Edge {
            from: from.into(),
            to: to.into(),
            element,
        }
    }

    #[test]
    fn bridge_graph() {
        let h = d("1/2,1/2");
        let g = Graph {
            source: "s".into(),
            sink: "t".into(),
            edges: vec![
                edge("s", "a", Node::pswitch(h.clone(), "e1")),
                edge("s", "b", Node::pswitch(h.clone(), "e2")),
                edge("a", "t", Node::pswitch(h.clone(), "e3")),
                edge("b", "t", Node::pswitch(h.clone(), "e4")),
                edge("a", "b", Node::pswitch(h, "e5")),
            ],
        };
        let c = Circuit::new(2, Node::Graph(g)).unwrap();
        // a five-switch bridge of fair switches conducts with probability 1/2
        assert_eq!(both(&c, &Assignment::new()), d("1/2,1/2"));
    }

    #[test]
    fn graph_edges_are_undirected() {
        let g = Graph {
            source: "s".into(),
            sink: "t".into(),
            edges: vec![edge("a", "s", Node::det(2)), edge("t", "a", Node::det(1))],
        };
        let c = Circuit::new(3, Node::Graph(g)).unwrap();
        assert_eq!(both(&c, &Assignment::new()), Distribution::point(3, 1));
    }

    #[test]
    fn graph_cap() {
        let h = d("1/2,1/2");
        let edges = (0..3)
            .map(|i| edge("s", "t", Node::pswitch(h.clone(), format!("e{i}"))))
            .collect();
        let c = Circuit::new(
            2,
            Node::Graph(Graph {
                source: "s".into(),
                sink: "t".into(),
                edges,
            }),
        )
        .unwrap();
        let tight = EvalOptions {
            max_graph_switches: 2,
            ..EvalOptions::default()
        };
        assert!(eval_with(&c, &Assignment::new(), &tight).unwrap_err().is_capacity());
        let small = EvalOptions {
            max_outcomes: 4,
            ..EvalOptions::default()
        };
        assert!(eval_oracle_with(&c, &Assignment::new(), &small)
            .unwrap_err()
            .is_capacity());
        assert_eq!(eval(&c, &Assignment::new()).unwrap(), d("1/8,7/8"));
    }

    #[test]
    fn big_denominators_fall_back_to_rationals() {
        let big = Rational::new(BigInt::one(), BigInt::from(3u8).pow(90));
        let dist = Distribution::new(vec![Rational::one() - &big, big.clone()]).unwrap();
        let c = Circuit::new(
            2,
            Node::series2(Node::pswitch(dist.clone(), "a"), Node::pswitch(dist, "b")),
        )
        .unwrap();
        let out = both(&c, &Assignment::new());
        assert_eq!(out.prob(1), &(&big * &big));
    }

    #[test]
    fn sequential_matches_parallel() {
        let h = d("1/3,1/3,1/3");
        let leaves: Vec<Node> = (0..6).map(|i| Node::pswitch(h.clone(), format!("p{i}"))).collect();
        let c = Circuit::new(
            3,
            Node::Parallel(vec![
                Node::Series(leaves[..3].to_vec()),
                Node::Series(leaves[3..].to_vec()),
            ]),
        )
        .unwrap();
        let a = Assignment::new();
        assert_eq!(
            par::sequential(|| eval_oracle(&c, &a)).unwrap(),
            eval_oracle(&c, &a).unwrap()
        );
    }
}
