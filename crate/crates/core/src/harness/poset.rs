use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::rootdata::CartanData;
use crate::weyl::{bruhat_leq, lower_interval, WeylElt};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetNode {
    pub id: usize,
    pub label: String,
    /// Reduced words (1-based) of the Weyl group data labelling the prime.
    pub words: Vec<Vec<usize>>,
}

/// Covering relation `from ⊂ to` of the inclusion order on H-primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetEdge {
    pub from: usize,
    pub to: usize,
}

/// Hasse diagram of the H-primes under inclusion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PosetGraph {
    pub kind: String,
    pub nodes: Vec<PosetNode>,
    pub edges: Vec<PosetEdge>,
}

fn one_based(w: &WeylElt) -> Vec<usize> {
    w.word().iter().map(|i| i + 1).collect()
}

fn covers(leq: impl Fn(usize, usize) -> bool, n: usize) -> Vec<PosetEdge> {
    let lt = |a: usize, b: usize| a != b && leq(a, b);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                edges.push(PosetEdge { from: a, to: b });
            }
        }
    }
    edges
}

impl PosetGraph {
    /// Primes `I_w(u)` for `u <= w`; `I_w(u) ⊆ I_w(u')` iff `u <= u'`.
    pub fn uw(cd: &CartanData, w: &WeylElt) -> Self {
        let elems = lower_interval(cd, w);
        let nodes = elems
            .iter()
            .enumerate()
            .map(|(id, u)| PosetNode { id, label: format!("I({u})"), words: vec![one_based(u)] })
            .collect();
        let edges = covers(|a, b| bruhat_leq(cd, &elems[a], &elems[b]), elems.len());
        PosetGraph { kind: "uw".into(), nodes, edges }
    }

    /// Primes `I_{u,v}` for `(u, v)` in `elems x elems`; `I_{u',v'} ⊆ I_{u,v}`
    /// iff `u' >= u` and `v' >= v`.
    pub fn rqg(cd: &CartanData, elems: &[WeylElt]) -> Self {
        let pairs: Vec<(&WeylElt, &WeylElt)> =
            elems.iter().flat_map(|u| elems.iter().map(move |v| (u, v))).collect();
        let nodes = pairs
            .iter()
            .enumerate()
            .map(|(id, (u, v))| PosetNode {
                id,
                label: format!("I({u},{v})"),
                words: vec![one_based(u), one_based(v)],
            })
            .collect();
        let edges = covers(
            |a, b| bruhat_leq(cd, pairs[b].0, pairs[a].0) && bruhat_leq(cd, pairs[b].1, pairs[a].1),
            pairs.len(),
        );
        PosetGraph { kind: "rqg".into(), nodes, edges }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        writeln!(s, "digraph hprimes_{} {{", self.kind).unwrap();
        writeln!(s, "  rankdir=BT;").unwrap();
        for n in &self.nodes {
            writeln!(s, "  n{} [label=\"{}\"];", n.id, n.label).unwrap();
        }
        for e in &self.edges {
            writeln!(s, "  n{} -> n{};", e.from, e.to).unwrap();
        }
        s.push_str("}\n");
        s
    }
}

/// Writes `path` as DOT and the same graph as JSON next to it (`.json` extension).
pub fn emit_poset(graph: &PosetGraph, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, graph.to_dot())?;
    fs::write(path.with_extension("json"), serde_json::to_string_pretty(graph)? + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::longest_element;

    #[test]
    fn hasse_diagrams() {
        let a1 = CartanData::preset("A1").unwrap();
        let w = longest_element(&a1).unwrap();
        let g = PosetGraph::uw(&a1, &w);
        assert_eq!((g.nodes.len(), g.edges.len()), (2, 1));
        let g = PosetGraph::rqg(&a1, &lower_interval(&a1, &w));
        assert_eq!((g.nodes.len(), g.edges.len()), (4, 4));
        // (s1,s1) is the smallest ideal
        assert!(g.edges.iter().any(|e| g.nodes[e.from].label == "I(s1,s1)" && g.nodes[e.to].label == "I(e,s1)"));

        let a2 = CartanData::preset("A2").unwrap();
        let w0 = longest_element(&a2).unwrap();
        let g = PosetGraph::uw(&a2, &w0);
        assert_eq!((g.nodes.len(), g.edges.len()), (6, 8));
        assert!(g.to_dot().starts_with("digraph hprimes_uw {"));
    }
}
