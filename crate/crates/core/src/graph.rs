//! Small graph utilities over index-labelled finite automata.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

/// Successor lists; parallel edges (one per letter) are kept.
pub(crate) type Adjacency = Vec<Vec<usize>>;

/// Strongly connected components in reverse topological order
/// (a component only reaches components listed before it).
pub(crate) fn components(adj: &Adjacency) -> Vec<Vec<usize>> {
    let mut g = DiGraph::<(), ()>::with_capacity(adj.len(), 0);
    let nodes: Vec<NodeIndex> = (0..adj.len()).map(|_| g.add_node(())).collect();
    for (p, targets) in adj.iter().enumerate() {
        for &q in targets {
            g.add_edge(nodes[p], nodes[q], ());
        }
    }
    tarjan_scc(&g)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(NodeIndex::index).collect();
            c.sort_unstable();
            c
        })
        .collect()
}

pub(crate) fn reachable(adj: &Adjacency, sources: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut stack: Vec<usize> = sources.into_iter().collect();
    for &s in &stack {
        seen[s] = true;
    }
    while let Some(p) = stack.pop() {
        for &q in &adj[p] {
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
    }
    seen
}

pub(crate) fn reversed(adj: &Adjacency) -> Adjacency {
    let mut rev = vec![Vec::new(); adj.len()];
    for (p, targets) in adj.iter().enumerate() {
        for &q in targets {
            rev[q].push(p);
        }
    }
    rev
}

/// Number of edges with both ends in `comp`, counting parallel edges.
pub(crate) fn internal_edges(adj: &Adjacency, comp: &[usize], comp_of: &[usize], id: usize) -> usize {
    comp.iter()
        .map(|&p| adj[p].iter().filter(|&&q| comp_of[q] == id).count())
        .sum()
}

pub(crate) fn component_index(n: usize, comps: &[Vec<usize>]) -> Vec<usize> {
    let mut comp_of = vec![usize::MAX; n];
    for (i, c) in comps.iter().enumerate() {
        for &p in c {
            comp_of[p] = i;
        }
    }
    comp_of
}
