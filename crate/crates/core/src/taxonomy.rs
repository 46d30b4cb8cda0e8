//! Structural taxonomy: strongly connected components, the condensation DAG,
//! connectivity classes, and the reach / cabal / exclusive / common split.

use crate::error::{Error, Result};
use crate::graph::Digraph;
use crate::scalar::Real;
use std::collections::BTreeSet;

/// SCC partition of a digraph together with its condensation DAG and a
/// topological order of the components.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    /// Vertex sets (1-based ids, ascending) of each SCC, indexed by SCC id.
    pub sccs: Vec<Vec<usize>>,
    /// Condensation edges (from SCC id, to SCC id), deduplicated.
    pub edges: Vec<(usize, usize)>,
    /// SCC ids in topological order: for every edge (a, b), a appears first.
    /// Components are layered by longest-path depth from the sources and
    /// ordered inside a layer by their smallest vertex id.
    pub order: Vec<usize>,
    component_of: Vec<usize>,
}

impl Condensation {
    /// SCC id containing vertex `v` (1-based).
    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v - 1]
    }

    pub fn len(&self) -> usize {
        self.sccs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sccs.is_empty()
    }

    /// SCC ids with no incoming condensation edge.
    pub fn sources(&self) -> Vec<usize> {
        let mut has_in = vec![false; self.sccs.len()];
        for &(_, b) in &self.edges {
            has_in[b] = true;
        }
        (0..self.sccs.len()).filter(|&c| !has_in[c]).collect()
    }
}

/// Iterative Tarjan over the 0-based adjacency lists.
fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut comps: Vec<Vec<usize>> = Vec::new();

    // Explicit DFS stack: (vertex, next child position).
    let mut call: Vec<(usize, usize)> = Vec::new();
    for start in 0..n {
        if index[start] != usize::MAX {
            continue;
        }
        call.push((start, 0));
        index[start] = next_index;
        low[start] = next_index;
        next_index += 1;
        stack.push(start);
        on_stack[start] = true;

        while let Some(&mut (v, ref mut child)) = call.last_mut() {
            if *child < adj[v].len() {
                let w = adj[v][*child];
                *child += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comps.push(comp);
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
            }
        }
    }
    comps
}

/// Compute the SCC partition, condensation DAG, and topological order.
pub fn condensation<T: Real>(g: &Digraph<T>) -> Condensation {
    let n = g.n();
    let adj = g.out_neighbors();
    let mut sccs: Vec<Vec<usize>> = tarjan(&adj)
        .into_iter()
        .map(|mut comp| {
            comp.sort_unstable();
            comp.iter().map(|v| v + 1).collect()
        })
        .collect();
    // Stable component ids: ascending by smallest contained vertex.
    sccs.sort_by_key(|c| c[0]);

    let mut component_of = vec![0usize; n];
    for (cid, comp) in sccs.iter().enumerate() {
        for &v in comp {
            component_of[v - 1] = cid;
        }
    }

    let mut edge_set = BTreeSet::new();
    for e in g.edges() {
        let (a, b) = (component_of[e.tail - 1], component_of[e.head - 1]);
        if a != b {
            edge_set.insert((a, b));
        }
    }
    let edges: Vec<(usize, usize)> = edge_set.into_iter().collect();

    // Longest-path depth from the sources, then smallest vertex id in layer.
    let k = sccs.len();
    let mut depth = vec![0usize; k];
    let mut indeg = vec![0usize; k];
    let mut out = vec![Vec::new(); k];
    for &(a, b) in &edges {
        indeg[b] += 1;
        out[a].push(b);
    }
    let mut queue: Vec<usize> = (0..k).filter(|&c| indeg[c] == 0).collect();
    let mut head = 0;
    while head < queue.len() {
        let a = queue[head];
        head += 1;
        for &b in &out[a] {
            depth[b] = depth[b].max(depth[a] + 1);
            indeg[b] -= 1;
            if indeg[b] == 0 {
                queue.push(b);
            }
        }
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&c| (depth[c], sccs[c][0]));

    Condensation {
        sccs,
        edges,
        order,
        component_of,
    }
}

/// Connectivity gradations of a digraph, strongest first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Connectivity {
    Strong,
    Unilateral,
    Weak,
    Disconnected,
}

impl std::fmt::Display for Connectivity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Connectivity::Strong => "strong",
            Connectivity::Unilateral => "unilateral",
            Connectivity::Weak => "weak",
            Connectivity::Disconnected => "disconnected",
        };
        f.write_str(s)
    }
}

/// Weakly connected components (1-based vertex sets, each ascending),
/// ordered by smallest contained vertex.
pub fn weak_components<T: Real>(g: &Digraph<T>) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.tail - 1].push(e.head - 1);
        adj[e.head - 1].push(e.tail - 1);
    }
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![s + 1];
        comp[s] = id;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w + 1);
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    comps
}

/// Strongest connectivity class that holds, testing strong → unilateral →
/// weak → disconnected. Unilateral is decided on the condensation: a DAG is
/// unilaterally connected iff its topological order is a Hamiltonian path.
pub fn connectivity_class<T: Real>(g: &Digraph<T>) -> Connectivity {
    if weak_components(g).len() > 1 {
        return Connectivity::Disconnected;
    }
    let c = condensation(g);
    if c.len() == 1 {
        return Connectivity::Strong;
    }
    let edges: BTreeSet<(usize, usize)> = c.edges.iter().copied().collect();
    let hamiltonian = c
        .order
        .windows(2)
        .all(|w| edges.contains(&(w[0], w[1])));
    if hamiltonian {
        Connectivity::Unilateral
    } else {
        Connectivity::Weak
    }
}

/// One reach: its full vertex set, cabal, exclusive part, and common part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reach {
    pub set: BTreeSet<usize>,
    pub cabal: BTreeSet<usize>,
    pub exclusive: BTreeSet<usize>,
    pub common: BTreeSet<usize>,
}

/// All reaches of a weakly connected digraph, ordered by the smallest vertex
/// id of their cabal, plus the underlying condensation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachDecomposition {
    pub reaches: Vec<Reach>,
    pub condensation: Condensation,
}

impl ReachDecomposition {
    /// Number of reaches.
    pub fn k(&self) -> usize {
        self.reaches.len()
    }

    /// Union of all cabals (1-based vertex ids).
    pub fn cabal_union(&self) -> BTreeSet<usize> {
        self.reaches
            .iter()
            .flat_map(|r| r.cabal.iter().copied())
            .collect()
    }

    /// Index of the reach whose cabal contains `v`, if any.
    pub fn reach_of_cabal_vertex(&self, v: usize) -> Option<usize> {
        self.reaches.iter().position(|r| r.cabal.contains(&v))
    }
}

/// SCC ids reachable from `start` in the condensation (including `start`).
fn reachable_components(c: &Condensation, start: usize) -> BTreeSet<usize> {
    let mut out = vec![Vec::new(); c.len()];
    for &(a, b) in &c.edges {
        out[a].push(b);
    }
    let mut seen = BTreeSet::new();
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(a) = stack.pop() {
        for &b in &out[a] {
            if seen.insert(b) {
                stack.push(b);
            }
        }
    }
    seen
}

/// Decompose a weakly connected digraph into reaches. Each source SCC of the
/// condensation is a cabal; its reach is everything reachable from it; the
/// exclusive part is what no other reach sees; the rest is common.
pub fn reach_decomposition<T: Real>(g: &Digraph<T>) -> Result<ReachDecomposition> {
    let weak = weak_components(g);
    if weak.len() != 1 {
        return Err(Error::NotWeaklyConnected {
            components: weak.len(),
        });
    }
    let c = condensation(g);
    let mut sources = c.sources();
    // Reach order: ascending smallest vertex id of the cabal.
    sources.sort_by_key(|&s| c.sccs[s][0]);

    let reach_components: Vec<BTreeSet<usize>> = sources
        .iter()
        .map(|&s| reachable_components(&c, s))
        .collect();

    let mut reaches = Vec::with_capacity(sources.len());
    for (m, &s) in sources.iter().enumerate() {
        let mine = &reach_components[m];
        let seen_by_others: BTreeSet<usize> = reach_components
            .iter()
            .enumerate()
            .filter(|&(other, _)| other != m)
            .flat_map(|(_, comps)| comps.iter().copied())
            .collect();
        let mut set = BTreeSet::new();
        let mut exclusive = BTreeSet::new();
        let mut common = BTreeSet::new();
        for &comp in mine {
            for &v in &c.sccs[comp] {
                set.insert(v);
                if seen_by_others.contains(&comp) {
                    common.insert(v);
                } else {
                    exclusive.insert(v);
                }
            }
        }
        let cabal: BTreeSet<usize> = c.sccs[s].iter().copied().collect();
        reaches.push(Reach {
            set,
            cabal,
            exclusive,
            common,
        });
    }

    Ok(ReachDecomposition {
        reaches,
        condensation: c,
    })
}
