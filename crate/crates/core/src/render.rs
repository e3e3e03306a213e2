//! Text renderings of circuits: Graphviz DOT and a bracketed ASCII form.
//!
//! The ASCII form writes series as `(a * b)` and parallel as `(a + b)`. Leaves
//! print as `det(s)`, `r` / `~r` for inputs, the closed probability for a
//! two-state pswitch (`1/2`), and the full vector otherwise (`(1/2,0,1/2)`).

use std::fmt::Write;

use crate::circuit::{Circuit, Node, SwitchElement};
use crate::rational;

pub fn ascii(circuit: &Circuit) -> String {
    let mut out = String::new();
    ascii_node(circuit.root(), &mut out);
    out
}

fn leaf_label(e: &SwitchElement) -> String {
    match e {
        SwitchElement::Pswitch { dist, .. } if dist.states() == 2 => rational::format(dist.prob(1)),
        SwitchElement::Pswitch { dist, .. } => dist.to_string(),
        SwitchElement::Det(s) => format!("det({s})"),
        SwitchElement::Input {
            name,
            complemented: false,
        } => name.clone(),
        SwitchElement::Input {
            name,
            complemented: true,
        } => format!("~{name}"),
    }
}

fn ascii_node(node: &Node, out: &mut String) {
    match node {
        Node::Leaf(e) => out.push_str(&leaf_label(e)),
        Node::Series(c) | Node::Parallel(c) => {
            let sep = if matches!(node, Node::Series(_)) { " * " } else { " + " };
            out.push('(');
            for (i, child) in c.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                ascii_node(child, out);
            }
            out.push(')');
        }
        Node::Graph(g) => {
            let _ = write!(out, "graph[{}->{}:", g.source, g.sink);
            for (i, e) in g.edges.iter().enumerate() {
                let _ = write!(out, "{} {}-{}=", if i > 0 { "," } else { "" }, e.from, e.to);
                ascii_node(&e.element, out);
            }
            out.push(']');
        }
    }
}

/// Graphviz rendering. Series children are chained through fresh junction
/// nodes, parallel children share both end nodes, and every leaf becomes a
/// labeled edge.
pub fn dot(circuit: &Circuit) -> String {
    let mut r = DotWriter::default();
    let s = r.vertex("s");
    let t = r.vertex("t");
    r.node(circuit.root(), s, t);
    let mut out = String::from("graph circuit {\n  rankdir=LR;\n  node [shape=point];\n");
    for (id, label) in &r.vertices {
        if label.is_empty() {
            let _ = writeln!(out, "  v{id};");
        } else {
            let _ = writeln!(out, "  v{id} [shape=circle, label=\"{label}\"];");
        }
    }
    for (a, b, label) in &r.edges {
        let _ = writeln!(out, "  v{a} -- v{b} [label=\"{label}\"];");
    }
    out.push_str("}\n");
    out
}

#[derive(Default)]
struct DotWriter {
    vertices: Vec<(usize, String)>,
    edges: Vec<(usize, usize, String)>,
}

impl DotWriter {
    fn vertex(&mut self, label: &str) -> usize {
        let id = self.vertices.len();
        self.vertices.push((id, label.to_string()));
        id
    }

    fn node(&mut self, node: &Node, from: usize, to: usize) {
        match node {
            Node::Leaf(e) => {
                let label = match e {
                    SwitchElement::Pswitch { id, .. } => format!("{} [{id}]", leaf_label(e)),
                    _ => leaf_label(e),
                };
                self.edges.push((from, to, label));
            }
            Node::Series(c) => {
                let mut at = from;
                for (i, child) in c.iter().enumerate() {
                    let next = if i + 1 == c.len() { to } else { self.vertex("") };
                    self.node(child, at, next);
                    at = next;
                }
            }
            Node::Parallel(c) => c.iter().for_each(|child| self.node(child, from, to)),
            Node::Graph(g) => {
                let mut names: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
                names.insert(g.source.clone(), from);
                names.insert(g.sink.clone(), to);
                for e in &g.edges {
                    let mut at = |name: &str, w: &mut Self| match names.get(name) {
                        Some(&v) => v,
                        None => {
                            let v = w.vertex("");
                            names.insert(name.to_string(), v);
                            v
                        }
                    };
                    let a = at(&e.from, self);
                    let b = at(&e.to, self);
                    self.node(&e.element, a, b);
                }
            }
        }
    }
}
