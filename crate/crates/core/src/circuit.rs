//! Circuit representation and structural transforms.
//!
//! A [`Circuit`] is a state count plus a [`Node`] tree. Leaves are switch
//! elements; interior nodes are series (min), parallel (max) or an explicit
//! two-terminal [`Graph`] whose edges each carry a sub-circuit.
//!
//! A pswitch id names one physical relay. The same id may label several
//! leaves (several contacts of one relay), in which case all of them see the
//! same random outcome and must carry the same distribution. Builders in this
//! crate hand out fresh ids through [`IdGen`] unless they need that sharing.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::distribution::Distribution;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SwitchElement {
    Pswitch {
        dist: Distribution,
        id: String,
    },
    Det(usize),
    /// Input variable; the complemented form evaluates to `N - 1 - s`.
    Input {
        name: String,
        complemented: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub element: Node,
}

/// Two-terminal network. Edges are undirected.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    pub source: String,
    pub sink: String,
    pub edges: Vec<Edge>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf(SwitchElement),
    Series(Vec<Node>),
    Parallel(Vec<Node>),
    Graph(Graph),
}

impl Node {
    pub fn pswitch(dist: Distribution, id: impl Into<String>) -> Node {
        Node::Leaf(SwitchElement::Pswitch { dist, id: id.into() })
    }

    pub fn det(state: usize) -> Node {
        Node::Leaf(SwitchElement::Det(state))
    }

    pub fn input(name: impl Into<String>) -> Node {
        Node::Leaf(SwitchElement::Input {
            name: name.into(),
            complemented: false,
        })
    }

    pub fn input_not(name: impl Into<String>) -> Node {
        Node::Leaf(SwitchElement::Input {
            name: name.into(),
            complemented: true,
        })
    }

    /// Series composition; a single child is returned unchanged.
    pub fn series(mut children: Vec<Node>) -> Node {
        assert!(!children.is_empty(), "series needs at least one child");
        if children.len() == 1 {
            children.pop().unwrap()
        } else {
            Node::Series(children)
        }
    }

    /// Parallel composition; a single child is returned unchanged.
    pub fn parallel(mut children: Vec<Node>) -> Node {
        assert!(!children.is_empty(), "parallel needs at least one child");
        if children.len() == 1 {
            children.pop().unwrap()
        } else {
            Node::Parallel(children)
        }
    }

    pub fn series2(a: Node, b: Node) -> Node {
        Node::Series(vec![a, b])
    }

    pub fn parallel2(a: Node, b: Node) -> Node {
        Node::Parallel(vec![a, b])
    }

    pub fn is_sp(&self) -> bool {
        match self {
            Node::Leaf(_) => true,
            Node::Series(c) | Node::Parallel(c) => c.iter().all(Node::is_sp),
            Node::Graph(_) => false,
        }
    }

    /// Visits every leaf in depth-first order.
    pub fn for_each_leaf<'a>(&'a self, f: &mut impl FnMut(&'a SwitchElement)) {
        match self {
            Node::Leaf(e) => f(e),
            Node::Series(c) | Node::Parallel(c) => c.iter().for_each(|n| n.for_each_leaf(f)),
            Node::Graph(g) => g.edges.iter().for_each(|e| e.element.for_each_leaf(f)),
        }
    }

    fn map_leaves(&self, f: &mut impl FnMut(&SwitchElement) -> Result<SwitchElement>) -> Result<Node> {
        Ok(match self {
            Node::Leaf(e) => Node::Leaf(f(e)?),
            Node::Series(c) => Node::Series(c.iter().map(|n| n.map_leaves(f)).collect::<Result<_>>()?),
            Node::Parallel(c) => Node::Parallel(c.iter().map(|n| n.map_leaves(f)).collect::<Result<_>>()?),
            Node::Graph(g) => Node::Graph(Graph {
                source: g.source.clone(),
                sink: g.sink.clone(),
                edges: g
                    .edges
                    .iter()
                    .map(|e| {
                        Ok(Edge {
                            from: e.from.clone(),
                            to: e.to.clone(),
                            element: e.element.map_leaves(f)?,
                        })
                    })
                    .collect::<Result<_>>()?,
            }),
        })
    }
}

/// A validated circuit over `states` states.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Circuit {
    states: usize,
    root: Node,
}

impl Circuit {
    pub fn new(states: usize, root: Node) -> Result<Self> {
        if states < 2 {
            return Err(Error::InvalidCircuit(format!(
                "state count must be at least 2, got {states}"
            )));
        }
        let mut ids: HashMap<&str, &Distribution> = HashMap::new();
        validate_node(&root, states, &mut ids)?;
        Ok(Self { states, root })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn into_root(self) -> Node {
        self.root
    }

    pub fn is_sp(&self) -> bool {
        self.root.is_sp()
    }

    /// Distinct pswitch ids with their distributions, in first-occurrence order.
    pub fn pswitches(&self) -> Vec<(String, Distribution)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.root.for_each_leaf(&mut |e| {
            if let SwitchElement::Pswitch { dist, id } = e {
                if seen.insert(id.clone()) {
                    out.push((id.clone(), dist.clone()));
                }
            }
        });
        out
    }

    /// Number of leaves carrying each pswitch id.
    pub fn pswitch_occurrences(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        self.root.for_each_leaf(&mut |e| {
            if let SwitchElement::Pswitch { id, .. } = e {
                *counts.entry(id.clone()).or_insert(0) += 1;
            }
        });
        counts
    }

    /// Input variable names in sorted order.
    pub fn input_names(&self) -> BTreeSet<String> {
        let mut names = BTreeSet::new();
        self.root.for_each_leaf(&mut |e| {
            if let SwitchElement::Input { name, .. } = e {
                names.insert(name.clone());
            }
        });
        names
    }

    /// Replaces every leaf through `f` and revalidates.
    pub fn map_leaves(&self, mut f: impl FnMut(&SwitchElement) -> Result<SwitchElement>) -> Result<Circuit> {
        Circuit::new(self.states, self.root.map_leaves(&mut f)?)
    }
}

fn validate_node<'a>(node: &'a Node, states: usize, ids: &mut HashMap<&'a str, &'a Distribution>) -> Result<()> {
    match node {
        Node::Leaf(SwitchElement::Det(s)) => {
            if *s >= states {
                return Err(Error::InvalidCircuit(format!(
                    "deterministic state {s} out of range for {states} states"
                )));
            }
        }
        Node::Leaf(SwitchElement::Pswitch { dist, id }) => {
            dist.check_states(states)?;
            if id.is_empty() {
                return Err(Error::InvalidCircuit("pswitch id must not be empty".into()));
            }
            if let Some(prev) = ids.insert(id, dist) {
                if prev != dist {
                    return Err(Error::InvalidCircuit(format!(
                        "pswitch `{id}` appears with two different distributions"
                    )));
                }
            }
        }
        Node::Leaf(SwitchElement::Input { name, .. }) => {
            if name.is_empty() {
                return Err(Error::InvalidCircuit("input name must not be empty".into()));
            }
        }
        Node::Series(children) | Node::Parallel(children) => {
            if children.len() < 2 {
                return Err(Error::InvalidCircuit(
                    "series/parallel nodes need at least 2 children".into(),
                ));
            }
            for child in children {
                validate_node(child, states, ids)?;
            }
        }
        Node::Graph(graph) => {
            validate_graph(graph)?;
            for edge in &graph.edges {
                validate_node(&edge.element, states, ids)?;
            }
        }
    }
    Ok(())
}

fn validate_graph(graph: &Graph) -> Result<()> {
    if graph.source == graph.sink {
        return Err(Error::InvalidCircuit("graph terminals must differ".into()));
    }
    let mut adjacency: HashMap<&str, Vec<&str>> = HashMap::new();
    for e in &graph.edges {
        adjacency.entry(&e.from).or_default().push(&e.to);
        adjacency.entry(&e.to).or_default().push(&e.from);
    }
    let mut seen = BTreeSet::from([graph.source.as_str()]);
    let mut stack = vec![graph.source.as_str()];
    while let Some(v) = stack.pop() {
        for &w in adjacency.get(v).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(w) {
                stack.push(w);
            }
        }
    }
    if !seen.contains(graph.sink.as_str()) {
        return Err(Error::InvalidCircuit(format!(
            "no path between terminals `{}` and `{}`",
            graph.source, graph.sink
        )));
    }
    Ok(())
}

/// Hands out fresh pswitch ids `prefix1`, `prefix2`, ...
#[derive(Debug, Clone)]
pub struct IdGen {
    prefix: String,
    next: usize,
}

impl IdGen {
    pub fn new(prefix: impl Into<String>) -> Self {
        Self {
            prefix: prefix.into(),
            next: 1,
        }
    }

    pub fn fresh(&mut self) -> String {
        let id = format!("{}{}", self.prefix, self.next);
        self.next += 1;
        id
    }

    pub fn issued(&self) -> usize {
        self.next - 1
    }
}

impl Default for IdGen {
    fn default() -> Self {
        Self::new("p")
    }
}

/// Leaf counts by kind. Every occurrence is counted, including repeated
/// contacts of one pswitch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct SwitchCounts {
    pub pswitches: usize,
    pub deterministic: usize,
    pub inputs: usize,
    /// Distinct pswitch ids.
    pub distinct_pswitches: usize,
}

impl SwitchCounts {
    /// Deterministic switches plus input switches: every non-stochastic leaf.
    pub fn non_stochastic(&self) -> usize {
        self.deterministic + self.inputs
    }
}

pub fn count_switches(circuit: &Circuit) -> SwitchCounts {
    let mut counts = SwitchCounts::default();
    let mut ids = BTreeSet::new();
    circuit.root().for_each_leaf(&mut |e| match e {
        SwitchElement::Pswitch { id, .. } => {
            counts.pswitches += 1;
            ids.insert(id.clone());
        }
        SwitchElement::Det(_) => counts.deterministic += 1,
        SwitchElement::Input { .. } => counts.inputs += 1,
    });
    counts.distinct_pswitches = ids.len();
    counts
}

/// The dual circuit: switches replaced by their duals and series swapped
/// with parallel. Defined for series-parallel circuits only.
pub fn dual(circuit: &Circuit) -> Result<Circuit> {
    fn go(node: &Node, top: usize) -> Result<Node> {
        Ok(match node {
            Node::Leaf(SwitchElement::Pswitch { dist, id }) => Node::pswitch(dist.reversed(), id.clone()),
            Node::Leaf(SwitchElement::Det(s)) => Node::det(top - s),
            Node::Leaf(SwitchElement::Input { name, complemented }) => Node::Leaf(SwitchElement::Input {
                name: name.clone(),
                complemented: !complemented,
            }),
            Node::Series(c) => Node::Parallel(c.iter().map(|n| go(n, top)).collect::<Result<_>>()?),
            Node::Parallel(c) => Node::Series(c.iter().map(|n| go(n, top)).collect::<Result<_>>()?),
            Node::Graph(_) => {
                return Err(Error::UnsupportedStructure(
                    "duality is only defined for series-parallel circuits".into(),
                ))
            }
        })
    }
    Circuit::new(circuit.states(), go(circuit.root(), circuit.states() - 1)?)
}

/// Wraps `node` so its value becomes `min(max(x, lo), hi)`. Sides that would
/// be identities (`lo == 0`, `hi == top`) are left out.
pub fn clamp_node(node: Node, lo: usize, hi: usize, top: usize) -> Node {
    debug_assert!(lo <= hi && hi <= top);
    let raised = if lo > 0 {
        Node::parallel2(node, Node::det(lo))
    } else {
        node
    };
    if hi < top {
        Node::series2(raised, Node::det(hi))
    } else {
        raised
    }
}

/// Clamps the circuit output to `[lo, hi]`: parallel with `Det(lo)`, then
/// series with `Det(hi)`.
pub fn clamp(circuit: &Circuit, lo: usize, hi: usize) -> Result<Circuit> {
    let top = circuit.states() - 1;
    if lo > hi || hi > top {
        return Err(Error::InvalidRange { lo, hi });
    }
    Circuit::new(circuit.states(), clamp_node(circuit.root().clone(), lo, hi, top))
}

/// Moves the mass of state `i` to state `mapping[i]` in an `states`-state
/// distribution. The mapping must be strictly increasing.
pub fn remap_states(dist: &Distribution, mapping: &[usize], states: usize) -> Result<Distribution> {
    if mapping.len() != dist.states() {
        return Err(Error::InvalidMapping(format!(
            "mapping has {} entries for a {}-state distribution",
            mapping.len(),
            dist.states()
        )));
    }
    if mapping.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidMapping("mapping must be strictly increasing".into()));
    }
    if mapping.last().is_some_and(|&m| m >= states) {
        return Err(Error::InvalidMapping(format!(
            "mapping target out of range for {states} states"
        )));
    }
    let mut probs = vec![num_traits::Zero::zero(); states];
    for (p, &m) in dist.probs().iter().zip(mapping) {
        probs[m] = p.clone();
    }
    Distribution::new(probs)
}
