//! Undirected simple graphs with connectivity and hop-distance primitives.
//!
//! Every other module works on [`Graph`]. Neighbor lists are sorted
//! ascending so that any iteration over the graph is reproducible.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};

/// Undirected simple graph on nodes `0..num_nodes`.
///
/// Edges are stored once as `(u, v)` with `u < v`; the adjacency lists hold
/// both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

/// Result of [`build_graph`]: the graph plus what was dropped on the way in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphBuild {
    pub graph: Graph,
    pub self_loops_dropped: usize,
    pub duplicates_dropped: usize,
}

/// Builds a simple graph from a raw edge list.
///
/// Input self-loops are dropped and tallied; the augmented adjacency used by
/// the sensitivity module adds exactly one self-loop per node on its own.
pub fn build_graph(num_nodes: usize, edge_list: &[(usize, usize)]) -> Result<GraphBuild> {
    let mut set = BTreeSet::new();
    let mut self_loops_dropped = 0;
    let mut duplicates_dropped = 0;
    for (position, &(u, v)) in edge_list.iter().enumerate() {
        if u >= num_nodes || v >= num_nodes {
            return Err(Error::NodeOutOfRange {
                position,
                u,
                v,
                num_nodes,
            });
        }
        if u == v {
            self_loops_dropped += 1;
            continue;
        }
        if !set.insert((u.min(v), u.max(v))) {
            duplicates_dropped += 1;
        }
    }
    Ok(GraphBuild {
        graph: Graph::from_sorted_unique(num_nodes, set.into_iter().collect()),
        self_loops_dropped,
        duplicates_dropped,
    })
}

impl Graph {
    /// Shorthand for [`build_graph`] that discards the drop tallies.
    pub fn new(num_nodes: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        build_graph(num_nodes, edge_list).map(|b| b.graph)
    }

    /// Graph with no edges.
    pub fn empty(num_nodes: usize) -> Self {
        Self::from_sorted_unique(num_nodes, Vec::new())
    }

    fn from_sorted_unique(num_nodes: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); num_nodes];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph {
            num_nodes,
            edges,
            adjacency,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.num_nodes && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Same node set with `extra` edges added. Already-present edges and
    /// self-loops are ignored.
    pub fn with_added_edges(&self, extra: &[(usize, usize)]) -> Result<Self> {
        let mut all = self.edges.clone();
        all.extend_from_slice(extra);
        Graph::new(self.num_nodes, &all)
    }

    /// Subgraph induced by `nodes` (in the given order), reindexed to
    /// `0..nodes.len()`.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Graph {
        let mut local = vec![usize::MAX; self.num_nodes];
        for (i, &n) in nodes.iter().enumerate() {
            local[n] = i;
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(u, v)| local[u] != usize::MAX && local[v] != usize::MAX)
            .map(|&(u, v)| {
                let (a, b) = (local[u], local[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        edges.sort_unstable();
        Graph::from_sorted_unique(nodes.len(), edges)
    }

    /// Applies the node relabeling `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.num_nodes {
            return Err(Error::NodeCountMismatch {
                expected: self.num_nodes,
                found: perm.len(),
            });
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| (perm[u], perm[v]))
            .collect();
        Graph::new(self.num_nodes, &edges)
    }
}

/// Per-node component ids, contiguous from 0 and ordered by the smallest
/// node each component contains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentLabeling {
    pub label: Vec<usize>,
    pub sizes: Vec<usize>,
    pub num_components: usize,
}

impl ComponentLabeling {
    /// Nodes of component `id`, ascending.
    pub fn members(&self, id: usize) -> Vec<usize> {
        self.label
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == id)
            .map(|(n, _)| n)
            .collect()
    }

    /// Largest component; ties go to the one containing the smallest node.
    pub fn largest(&self) -> Option<usize> {
        // Ids are ordered by smallest member, so the first maximum wins.
        let mut best: Option<usize> = None;
        for (id, &size) in self.sizes.iter().enumerate() {
            if best.is_none_or(|b| size > self.sizes[b]) {
                best = Some(id);
            }
        }
        best
    }

    pub fn same_component(&self, u: usize, v: usize) -> bool {
        self.label[u] == self.label[v]
    }

    /// Number of ordered pairs `(u, v)`, `u != v`, inside a common component.
    pub fn ordered_pair_count(&self) -> usize {
        self.sizes.iter().map(|&s| s * s.saturating_sub(1)).sum()
    }
}

pub fn connected_components(g: &Graph) -> ComponentLabeling {
    let n = g.num_nodes();
    let mut label = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        label[start] = id;
        queue.push_back(start);
        let mut size = 0;
        while let Some(x) = queue.pop_front() {
            size += 1;
            for &y in g.neighbors(x) {
                if label[y] == usize::MAX {
                    label[y] = id;
                    queue.push_back(y);
                }
            }
        }
        sizes.push(size);
    }
    ComponentLabeling {
        num_components: sizes.len(),
        label,
        sizes,
    }
}

/// Hop distances from `source`; `None` marks unreachable nodes.
pub fn bfs_distances(g: &Graph, source: usize) -> Result<Vec<Option<usize>>> {
    if source >= g.num_nodes() {
        return Err(Error::InvalidNode {
            node: source,
            num_nodes: g.num_nodes(),
        });
    }
    let mut dist = vec![None; g.num_nodes()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        let next = dist[x].map(|d| d + 1);
        for &y in g.neighbors(x) {
            if dist[y].is_none() {
                dist[y] = next;
                queue.push_back(y);
            }
        }
    }
    Ok(dist)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diameter {
    /// Maximum eccentricity over all components.
    pub value: usize,
    /// Diameter of each component, indexed by component id.
    pub per_component: Vec<usize>,
}

/// Diameter as the maximum over component diameters; singleton components
/// contribute 0.
pub fn diameter(g: &Graph) -> Diameter {
    let comps = connected_components(g);
    let mut per_component = vec![0; comps.num_components];
    for source in 0..g.num_nodes() {
        let ecc = bfs_distances(g, source)
            .expect("source is in range")
            .into_iter()
            .flatten()
            .max()
            .unwrap_or(0);
        let c = comps.label[source];
        per_component[c] = per_component[c].max(ecc);
    }
    Diameter {
        value: per_component.iter().copied().max().unwrap_or(0),
        per_component,
    }
}
