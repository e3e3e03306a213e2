//! JSON netlist format.
//!
//! ```json
//! {"states": 3, "circuit": {"op": "series", "children": [
//!     {"op": "pswitch", "dist": ["1/2", "0", "1/2"], "id": "p1"},
//!     {"op": "det", "state": 1}]}}
//! ```
//!
//! Other node kinds are `{"op": "input", "name": "r0", "complemented": false}`,
//! `{"op": "parallel", "children": [...]}` and
//! `{"op": "graph", "terminals": ["s", "t"], "edges": [{"from": "s", "to": "a", "element": node}]}`.
//! Probabilities are lowest-terms rational strings, so serializing a parsed
//! netlist is canonical.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Edge, Graph, Node, SwitchElement};
use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::rational;

#[derive(Serialize, Deserialize)]
struct NetlistDoc {
    states: usize,
    circuit: NodeDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase", deny_unknown_fields)]
enum NodeDoc {
    Pswitch {
        dist: Vec<String>,
        id: String,
    },
    Det {
        state: usize,
    },
    Input {
        name: String,
        complemented: bool,
    },
    Series {
        children: Vec<NodeDoc>,
    },
    Parallel {
        children: Vec<NodeDoc>,
    },
    Graph {
        terminals: [String; 2],
        edges: Vec<EdgeDoc>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: String,
    to: String,
    element: NodeDoc,
}

fn to_doc(node: &Node) -> NodeDoc {
    match node {
        Node::Leaf(SwitchElement::Pswitch { dist, id }) => NodeDoc::Pswitch {
            dist: dist.to_strings(),
            id: id.clone(),
        },
        Node::Leaf(SwitchElement::Det(s)) => NodeDoc::Det { state: *s },
        Node::Leaf(SwitchElement::Input { name, complemented }) => NodeDoc::Input {
            name: name.clone(),
            complemented: *complemented,
        },
        Node::Series(c) => NodeDoc::Series {
            children: c.iter().map(to_doc).collect(),
        },
        Node::Parallel(c) => NodeDoc::Parallel {
            children: c.iter().map(to_doc).collect(),
        },
        Node::Graph(g) => NodeDoc::Graph {
            terminals: [g.source.clone(), g.sink.clone()],
            edges: g
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    from: e.from.clone(),
                    to: e.to.clone(),
                    element: to_doc(&e.element),
                })
                .collect(),
        },
    }
}

fn from_doc(doc: NodeDoc) -> Result<Node> {
    Ok(match doc {
        NodeDoc::Pswitch { dist, id } => {
            let probs = dist.iter().map(|s| rational::parse(s)).collect::<Result<_>>()?;
            Node::pswitch(Distribution::new(probs)?, id)
        }
        NodeDoc::Det { state } => Node::det(state),
        NodeDoc::Input { name, complemented } => Node::Leaf(SwitchElement::Input { name, complemented }),
        NodeDoc::Series { children } => Node::Series(children.into_iter().map(from_doc).collect::<Result<_>>()?),
        NodeDoc::Parallel { children } => Node::Parallel(children.into_iter().map(from_doc).collect::<Result<_>>()?),
        NodeDoc::Graph {
            terminals: [source, sink],
            edges,
        } => Node::Graph(Graph {
            source,
            sink,
            edges: edges
                .into_iter()
                .map(|e| {
                    Ok(Edge {
                        from: e.from,
                        to: e.to,
                        element: from_doc(e.element)?,
                    })
                })
                .collect::<Result<_>>()?,
        }),
    })
}

/// Netlist as a JSON value.
pub fn to_value(circuit: &Circuit) -> serde_json::Value {
    serde_json::to_value(NetlistDoc {
        states: circuit.states(),
        circuit: to_doc(circuit.root()),
    })
    .expect("netlist documents always serialize")
}

/// Pretty-printed netlist text.
pub fn to_string(circuit: &Circuit) -> String {
    serde_json::to_string_pretty(&to_value(circuit)).expect("netlist documents always serialize")
}

pub fn from_value(value: serde_json::Value) -> Result<Circuit> {
    let doc: NetlistDoc = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    Circuit::new(doc.states, from_doc(doc.circuit)?)
}

/// Parses and validates a netlist.
pub fn from_str(text: &str) -> Result<Circuit> {
    let doc: NetlistDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Circuit::new(doc.states, from_doc(doc.circuit)?)
}
