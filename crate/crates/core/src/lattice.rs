//! Composition over finite lattices and bounded expressibility search.
//!
//! A lattice distribution is a [`Distribution`] indexed by lattice element.
//! Series composition takes the meet of the two outcomes, parallel the join.
//! On a chain both reduce to the min/max composition of totally ordered
//! states.

use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::circuit::{Circuit, IdGen, Node, SwitchElement};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::par;
use crate::rational::Rational;

/// A finite lattice with precomputed join and meet tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    elements: Vec<String>,
    leq: Vec<Vec<bool>>,
    join: Vec<Vec<usize>>,
    meet: Vec<Vec<usize>>,
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct LatticeDoc {
    elements: Vec<String>,
    leq: Vec<(String, String)>,
}

impl Lattice {
    /// Builds a lattice from the generating relation `leq`, which is closed
    /// reflexively and transitively. Fails unless the closure is a partial
    /// order in which every pair has a unique join and meet.
    pub fn new(elements: Vec<String>, leq: &[(String, String)]) -> Result<Self> {
        let n = elements.len();
        if n < 2 {
            return Err(Error::InvalidLattice("need at least 2 elements".into()));
        }
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.as_str(), i).is_some() {
                return Err(Error::InvalidLattice(format!("duplicate element `{e}`")));
            }
        }
        let lookup = |e: &str| {
            index
                .get(e)
                .copied()
                .ok_or_else(|| Error::InvalidLattice(format!("unknown element `{e}`")))
        };
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in leq {
            rel[lookup(a)?][lookup(b)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    for j in 0..n {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if rel[i][j] && rel[j][i] {
                    return Err(Error::InvalidLattice(format!(
                        "`{}` and `{}` are ordered both ways",
                        elements[i], elements[j]
                    )));
                }
            }
        }
        let bound = |i: usize, j: usize, upper: bool| -> Result<usize> {
            let above = |a: usize, b: usize| if upper { rel[a][b] } else { rel[b][a] };
            let candidates: Vec<usize> = (0..n).filter(|&c| above(i, c) && above(j, c)).collect();
            candidates
                .iter()
                .copied()
                .find(|&c| candidates.iter().all(|&d| above(c, d)))
                .ok_or_else(|| {
                    Error::InvalidLattice(format!(
                        "`{}` and `{}` have no {}",
                        elements[i],
                        elements[j],
                        if upper { "join" } else { "meet" }
                    ))
                })
        };
        let mut join = vec![vec![0; n]; n];
        let mut meet = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                join[i][j] = bound(i, j, true)?;
                meet[i][j] = bound(i, j, false)?;
            }
        }
        Ok(Self {
            elements,
            leq: rel,
            join,
            meet,
        })
    }

    /// The total order `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Result<Self> {
        let elements: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let leq: Vec<(String, String)> = elements.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        Self::new(elements, &leq)
    }

    /// `00 < 01, 10 < 11` with `01` and `10` incomparable.
    pub fn diamond() -> Self {
        let e = |s: &str| s.to_string();
        let leq = [
            (e("00"), e("01")),
            (e("00"), e("10")),
            (e("01"), e("11")),
            (e("10"), e("11")),
        ];
        Self::new(vec![e("00"), e("01"), e("10"), e("11")], &leq).expect("the diamond is a lattice")
    }

    /// Parses `{"elements": [...], "leq": [["a", "b"], ...]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: LatticeDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(doc.elements, &doc.leq)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a][b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn element(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    /// Checks that `dist` has one entry per element.
    pub fn check(&self, dist: &Distribution) -> Result<()> {
        if dist.states() != self.len() {
            return Err(Error::InvalidLattice(format!(
                "distribution has {} entries for a {}-element lattice",
                dist.states(),
                self.len()
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LatticeOp {
    Join,
    Meet,
}

/// `result(e) = sum over x op y = e of p(x) q(y)`.
pub fn compose_lattice(lattice: &Lattice, p: &Distribution, q: &Distribution, op: LatticeOp) -> Result<Distribution> {
    lattice.check(p)?;
    lattice.check(q)?;
    Ok(compose_unchecked(lattice, p, q, op))
}

fn compose_unchecked(lattice: &Lattice, p: &Distribution, q: &Distribution, op: LatticeOp) -> Distribution {
    let table = match op {
        LatticeOp::Join => &lattice.join,
        LatticeOp::Meet => &lattice.meet,
    };
    let mut out = vec![Rational::zero(); lattice.len()];
    for (x, px) in p.probs().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
        for (y, qy) in q.probs().iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            out[table[x][y]] += px * qy;
        }
    }
    Distribution::from_vec_unchecked(out)
}

/// Evaluates a series-parallel circuit whose states are lattice elements.
/// Every pswitch must occur once.
pub fn eval_lattice(lattice: &Lattice, circuit: &Circuit) -> Result<Distribution> {
    if circuit.states() != lattice.len() {
        return Err(Error::InvalidLattice(format!(
            "circuit has {} states for a {}-element lattice",
            circuit.states(),
            lattice.len()
        )));
    }
    if circuit.pswitch_occurrences().values().any(|&k| k > 1) {
        return Err(Error::UnsupportedStructure(
            "lattice evaluation needs distinct pswitch ids".into(),
        ));
    }
    fn go(lattice: &Lattice, node: &Node) -> Result<Distribution> {
        let fold = |children: &[Node], op| -> Result<Distribution> {
            let mut it = children.iter();
            let first = go(lattice, it.next().expect("composite nodes have children"))?;
            it.try_fold(first, |acc, c| {
                Ok(compose_unchecked(lattice, &acc, &go(lattice, c)?, op))
            })
        };
        match node {
            Node::Leaf(SwitchElement::Pswitch { dist, .. }) => Ok(dist.clone()),
            Node::Leaf(SwitchElement::Det(s)) => Ok(Distribution::point(lattice.len(), *s)),
            Node::Leaf(SwitchElement::Input { name, .. }) => Err(Error::MissingAssignment(name.clone())),
            Node::Series(children) => fold(children, LatticeOp::Meet),
            Node::Parallel(children) => fold(children, LatticeOp::Join),
            Node::Graph(_) => Err(Error::UnsupportedStructure(
                "lattice evaluation needs a series-parallel circuit".into(),
            )),
        }
    }
    go(lattice, circuit.root())
}

/// Bounded search problem: can `target` be built from at most
/// `max_switches` switches drawn from `switches` (and point masses when
/// `include_deterministic` is set)?
#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub lattice: Lattice,
    pub switches: Vec<Distribution>,
    pub include_deterministic: bool,
    pub max_switches: usize,
    pub target: Distribution,
    /// Largest number of distinct distributions kept before giving up.
    pub max_distributions: usize,
}

impl SearchSpec {
    pub fn new(
        lattice: Lattice,
        switches: Vec<Distribution>,
        include_deterministic: bool,
        max_switches: usize,
        target: Distribution,
    ) -> Self {
        Self {
            lattice,
            switches,
            include_deterministic,
            max_switches,
            target,
            max_distributions: 2_000_000,
        }
    }

    fn check(&self) -> Result<()> {
        if self.max_switches == 0 {
            return Err(Error::InvalidTarget("max switches must be at least 1".into()));
        }
        self.lattice.check(&self.target)?;
        for s in &self.switches {
            self.lattice.check(s)?;
        }
        if self.switches.is_empty() && !self.include_deterministic {
            return Err(Error::InsufficientSwitchSet("the switch set is empty".into()));
        }
        Ok(())
    }
}

/// How a distribution in the search was first reached.
#[derive(Clone, Debug)]
enum Origin {
    Switch(usize),
    Det(usize),
    Combine(LatticeOp, usize, usize),
}

/// Every distribution reachable within the switch budget, grouped by the
/// fewest switches that reach it.
#[derive(Clone, Debug)]
pub struct Exploration {
    dists: Vec<Distribution>,
    origins: Vec<Origin>,
    /// `levels[k]` holds indices into `dists` first reached with `k + 1` switches.
    levels: Vec<Vec<usize>>,
    /// Number of compositions evaluated.
    pub combinations: u64,
    /// Index of the target, when the search stopped on it.
    found: Option<usize>,
}

impl Exploration {
    pub fn distinct(&self) -> usize {
        self.dists.len()
    }

    /// Distributions first reached with exactly `switches` switches.
    pub fn level(&self, switches: usize) -> impl Iterator<Item = &Distribution> {
        self.levels
            .get(switches.wrapping_sub(1))
            .into_iter()
            .flatten()
            .map(|&i| &self.dists[i])
    }

    pub fn all(&self) -> &[Distribution] {
        &self.dists
    }
}

/// Enumerates series-parallel circuits of up to `max_switches` leaves,
/// keeping one representative per distinct distribution. Stops early if
/// `spec.target` is reached and `stop_on_target` is set.
pub fn explore(spec: &SearchSpec, stop_on_target: bool) -> Result<Exploration> {
    spec.check()?;
    let lattice = &spec.lattice;
    let mut ex = Exploration {
        dists: Vec::new(),
        origins: Vec::new(),
        levels: Vec::new(),
        combinations: 0,
        found: None,
    };
    let mut seen: HashMap<Distribution, usize> = HashMap::new();

    let mut first = Vec::new();
    let leaves = spec
        .switches
        .iter()
        .enumerate()
        .map(|(i, d)| (d.clone(), Origin::Switch(i)))
        .chain(
            (0..lattice.len())
                .filter(|_| spec.include_deterministic)
                .map(|e| (Distribution::point(lattice.len(), e), Origin::Det(e))),
        );
    for (d, origin) in leaves {
        if !seen.contains_key(&d) {
            seen.insert(d.clone(), ex.dists.len());
            first.push(ex.dists.len());
            ex.dists.push(d);
            ex.origins.push(origin);
        }
    }
    ex.levels.push(first);
    ex.found = seen.get(&spec.target).copied();

    for k in 2..=spec.max_switches {
        if stop_on_target && ex.found.is_some() {
            break;
        }
        let mut pairs = Vec::new();
        for a in 1..=k / 2 {
            let b = k - a;
            for (ia, &x) in ex.levels[a - 1].iter().enumerate() {
                let ys = &ex.levels[b - 1];
                let start = if a == b { ia } else { 0 };
                pairs.push((x, &ys[start..]));
            }
        }
        let batches = par::map_slice(&pairs, |&(x, ys)| {
            let mut out = Vec::with_capacity(ys.len() * 2);
            for &y in ys {
                for op in [LatticeOp::Meet, LatticeOp::Join] {
                    out.push((compose_unchecked(lattice, &ex.dists[x], &ex.dists[y], op), op, x, y));
                }
            }
            out
        });
        let mut level = Vec::new();
        for (d, op, x, y) in batches.into_iter().flatten() {
            ex.combinations += 1;
            if seen.contains_key(&d) {
                continue;
            }
            if seen.len() >= spec.max_distributions {
                return Err(Error::Capacity(format!(
                    "more than {} distinct distributions within {} switches",
                    spec.max_distributions, spec.max_switches
                )));
            }
            let id = ex.dists.len();
            if d == spec.target && ex.found.is_none() {
                ex.found = Some(id);
            }
            seen.insert(d.clone(), id);
            ex.dists.push(d);
            ex.origins.push(Origin::Combine(op, x, y));
            level.push(id);
        }
        ex.levels.push(level);
    }
    Ok(ex)
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found {
        circuit: Circuit,
        switches: usize,
        explored: usize,
        combinations: u64,
    },
    NotRealizable {
        explored: usize,
        combinations: u64,
        max_switches: usize,
    },
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }

    pub fn to_json(&self, lattice: &Lattice) -> serde_json::Value {
        match self {
            SearchOutcome::Found {
                circuit,
                switches,
                explored,
                combinations,
            } => json!({
                "result": "FOUND",
                "switches": switches,
                "explored_distributions": explored,
                "combinations": combinations,
                "elements": lattice.elements(),
                "netlist": crate::netlist::to_value(circuit),
            }),
            SearchOutcome::NotRealizable {
                explored,
                combinations,
                max_switches,
            } => json!({
                "result": "NOT_REALIZABLE",
                "message": format!("not realizable within explored space (at most {max_switches} switches)"),
                "explored_distributions": explored,
                "combinations": combinations,
                "max_switches": max_switches,
            }),
        }
    }
}

/// Searches for a series-parallel circuit realizing `spec.target`.
///
/// A negative answer covers only the explored space: the given switch set and
/// circuits of at most `spec.max_switches` switches.
pub fn search_expressible(spec: &SearchSpec) -> Result<SearchOutcome> {
    let ex = explore(spec, true)?;
    let Some(found) = ex.found else {
        return Ok(SearchOutcome::NotRealizable {
            explored: ex.distinct(),
            combinations: ex.combinations,
            max_switches: spec.max_switches,
        });
    };
    let mut ids = IdGen::new("p");
    let root = rebuild(&ex, spec, found, &mut ids);
    let switches = ex
        .levels
        .iter()
        .position(|l| l.contains(&found))
        .expect("found index is in a level")
        + 1;
    Ok(SearchOutcome::Found {
        circuit: Circuit::new(spec.lattice.len(), root)?,
        switches,
        explored: ex.distinct(),
        combinations: ex.combinations,
    })
}

fn rebuild(ex: &Exploration, spec: &SearchSpec, index: usize, ids: &mut IdGen) -> Node {
    match &ex.origins[index] {
        Origin::Switch(i) => Node::pswitch(spec.switches[*i].clone(), ids.fresh()),
        Origin::Det(e) => Node::det(*e),
        Origin::Combine(op, x, y) => {
            let a = rebuild(ex, spec, *x, ids);
            let b = rebuild(ex, spec, *y, ids);
            match op {
                LatticeOp::Meet => Node::series2(a, b),
                LatticeOp::Join => Node::parallel2(a, b),
            }
        }
    }
}
