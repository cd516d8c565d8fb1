//! Semimetric graphs, threshold graphs, and deterministic graph primitives.
//!
//! A [`SemimetricGraph`] stores a finite point set with positive exact
//! rational distances on an explicit edge set. Absent pairs are at infinite
//! distance; the triangle inequality is never assumed or checked. A
//! [`ThresholdGraph`] is the unweighted graph keeping the edges at distance
//! at most a chosen threshold (closed comparison).
//!
//! Every traversal here is deterministic: adjacency lists are sorted by
//! vertex id, breadth-first search explores neighbors in ascending order and
//! records the first discoverer as parent, and the spanning forest is built
//! by Kruskal's algorithm with ties broken on `(weight, u, v)` ascending.
//! Identical inputs therefore always produce identical outputs, which the
//! query-accounting layers above rely on.

use std::collections::VecDeque;
use std::fmt;

use num::Signed;

use crate::rational::Rat;
use crate::Node;

/// Sentinel hop count for unreachable vertices.
///
/// Using the maximum value (rather than an `Option`) lets unreachable
/// comparisons fall out of plain integer ordering: `INFINITE_HOPS <=
/// INFINITE_HOPS` holds, and any finite count compares below it, which is
/// exactly the tie policy the separator stage wants.
pub const INFINITE_HOPS: usize = usize::MAX;

/// Error raised while validating graph construction input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// An edge endpoint is `>= n`.
    NodeOutOfRange { node: Node, n: usize },
    /// An edge connects a vertex to itself.
    SelfLoop { node: Node },
    /// The same unordered pair appears twice.
    DuplicateEdge { u: Node, v: Node },
    /// A distance is zero or negative.
    NonPositiveWeight { u: Node, v: Node },
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::NodeOutOfRange { node, n } => {
                write!(f, "node {node} out of range for graph on {n} vertices")
            }
            GraphError::SelfLoop { node } => write!(f, "self loop at node {node}"),
            GraphError::DuplicateEdge { u, v } => write!(f, "duplicate edge ({u}, {v})"),
            GraphError::NonPositiveWeight { u, v } => {
                write!(f, "edge ({u}, {v}) has non-positive weight")
            }
        }
    }
}

impl std::error::Error for GraphError {}

/// Finite semimetric on `n` points, stored as a weighted undirected graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemimetricGraph {
    n: usize,
    /// Canonical edge list: `u < v`, sorted by `(u, v)`.
    edges: Vec<(Node, Node, Rat)>,
    /// Per vertex: `(neighbor, edge index)` sorted by neighbor id.
    adj: Vec<Vec<(Node, usize)>>,
}

impl SemimetricGraph {
    /// Validates and builds a semimetric graph.
    ///
    /// Edges may be given in any order and orientation; they are stored
    /// canonically with `u < v`. Rejects out-of-range endpoints, self loops,
    /// duplicate pairs, and non-positive weights.
    pub fn new(n: usize, edges: Vec<(Node, Node, Rat)>) -> Result<Self, GraphError> {
        let mut canonical: Vec<(Node, Node, Rat)> = Vec::with_capacity(edges.len());
        for (u, v, w) in edges {
            for node in [u, v] {
                if node >= n {
                    return Err(GraphError::NodeOutOfRange { node, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { node: u });
            }
            if !w.is_positive() {
                return Err(GraphError::NonPositiveWeight {
                    u: u.min(v),
                    v: u.max(v),
                });
            }
            let (a, b) = (u.min(v), u.max(v));
            canonical.push((a, b, w));
        }
        canonical.sort_by_key(|x| (x.0, x.1));
        for pair in canonical.windows(2) {
            if pair[0].0 == pair[1].0 && pair[0].1 == pair[1].1 {
                return Err(GraphError::DuplicateEdge {
                    u: pair[0].0,
                    v: pair[0].1,
                });
            }
        }
        let mut adj = vec![Vec::new(); n];
        for (idx, (u, v, _)) in canonical.iter().enumerate() {
            adj[*u].push((*v, idx));
            adj[*v].push((*u, idx));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(SemimetricGraph {
            n,
            edges: canonical,
            adj,
        })
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Canonical edge list (`u < v`, sorted).
    pub fn edges(&self) -> &[(Node, Node, Rat)] {
        &self.edges
    }

    /// Distance between `u` and `v`: `Some(w)` if the pair is present, else
    /// `None`, meaning infinite distance.
    pub fn distance(&self, u: Node, v: Node) -> Option<&Rat> {
        let list = &self.adj[u];
        list.binary_search_by_key(&v, |&(nb, _)| nb)
            .ok()
            .map(|pos| &self.edges[list[pos].1].2)
    }

    /// Neighbors of `u` with finite distance, ascending, with edge weights.
    pub fn weighted_neighbors(&self, u: Node) -> impl Iterator<Item = (Node, &Rat)> {
        self.adj[u].iter().map(|&(nb, idx)| (nb, &self.edges[idx].2))
    }

    /// Sorted, deduplicated list of the distinct distances present.
    pub fn distinct_weights(&self) -> Vec<Rat> {
        let mut ws: Vec<Rat> = self.edges.iter().map(|(_, _, w)| w.clone()).collect();
        ws.sort();
        ws.dedup();
        ws
    }

    /// Unweighted graph of the pairs at distance `<= eps` (closed threshold).
    pub fn threshold(&self, eps: &Rat) -> ThresholdGraph {
        self.threshold_filtered(eps, |_| true)
    }

    /// Threshold graph restricted to the vertices where `alive` is true.
    ///
    /// The vertex index space is unchanged (still `0..n`); edges touching a
    /// dead vertex are simply dropped, so dead vertices come out isolated.
    pub fn threshold_within(&self, eps: &Rat, alive: &[bool]) -> ThresholdGraph {
        assert_eq!(alive.len(), self.n, "alive mask has wrong length");
        self.threshold_filtered(eps, |v| alive[v])
    }

    fn threshold_filtered(&self, eps: &Rat, keep: impl Fn(Node) -> bool) -> ThresholdGraph {
        let mut adj = vec![Vec::new(); self.n];
        for (u, v, w) in &self.edges {
            if w <= eps && keep(*u) && keep(*v) {
                adj[*u].push(*v);
                adj[*v].push(*u);
            }
        }
        // Neighbor lists come out sorted because the edge list is sorted by
        // (u, v), but the reversed orientation interleaves; sort to be sure.
        for list in &mut adj {
            list.sort_unstable();
        }
        ThresholdGraph {
            n: self.n,
            eps: eps.clone(),
            adj,
        }
    }

    /// Connected components of the `<= eps` graph induced on `subset`.
    ///
    /// Components are sorted internally and ordered by their minimum member.
    /// This is the grouping step of margin-based separation, which runs on
    /// small vertex subsets; it touches only edges inside the subset.
    pub fn components_within(&self, subset: &[Node], eps: &Rat) -> Vec<Vec<Node>> {
        let mut member = vec![false; self.n];
        for &v in subset {
            member[v] = true;
        }
        let mut uf = UnionFind::new(self.n);
        for &v in subset {
            for &(nb, idx) in &self.adj[v] {
                if nb > v && member[nb] && self.edges[idx].2 <= *eps {
                    uf.union(v, nb);
                }
            }
        }
        let mut sorted: Vec<Node> = subset.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        group_by_root(&sorted, &mut uf)
    }

    /// Minimum spanning forest by Kruskal's algorithm.
    ///
    /// Candidate edges are taken in ascending `(weight, u, v)` order, so the
    /// forest is unique even when weights repeat.
    pub fn mst(&self) -> SpanningForest {
        let mut order: Vec<usize> = (0..self.edges.len()).collect();
        order.sort_by(|&a, &b| {
            let ea = &self.edges[a];
            let eb = &self.edges[b];
            ea.2.cmp(&eb.2).then_with(|| (ea.0, ea.1).cmp(&(eb.0, eb.1)))
        });
        let mut uf = UnionFind::new(self.n);
        let mut picked = Vec::with_capacity(self.n.saturating_sub(1));
        for idx in order {
            let (u, v, ref w) = self.edges[idx];
            if uf.union(u, v) {
                picked.push((u, v, w.clone()));
            }
        }
        picked.sort_by_key(|x| (x.0, x.1));
        SpanningForest {
            n: self.n,
            edges: picked,
        }
    }
}

/// Unweighted graph of the pairs at distance at most a fixed threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdGraph {
    n: usize,
    eps: Rat,
    adj: Vec<Vec<Node>>,
}

impl ThresholdGraph {
    /// Builds a threshold graph directly from an unweighted edge list.
    ///
    /// Mostly useful in tests; the usual constructors are
    /// [`SemimetricGraph::threshold`] and [`SpanningForest::threshold`].
    pub fn from_edges(n: usize, eps: Rat, edges: &[(Node, Node)]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n && u != v, "bad edge ({u}, {v})");
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        ThresholdGraph { n, eps, adj }
    }

    /// Number of vertices (dense ids `0..n`).
    pub fn n(&self) -> usize {
        self.n
    }

    /// The threshold this graph was built at.
    pub fn eps(&self) -> &Rat {
        &self.eps
    }

    /// Neighbors of `v`, ascending.
    pub fn neighbors(&self, v: Node) -> &[Node] {
        &self.adj[v]
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Hop distances from `source` to every vertex ([`INFINITE_HOPS`] when
    /// unreachable). Deterministic breadth-first search.
    pub fn bfs_distances(&self, source: Node) -> Vec<usize> {
        self.bfs_distances_filtered(source, |_| true).0
    }

    /// Hop distances from `source` inside the subgraph induced by `allowed`.
    pub fn bfs_distances_within(&self, source: Node, allowed: &[bool]) -> Vec<usize> {
        assert!(allowed[source], "source excluded from induced subgraph");
        self.bfs_distances_filtered(source, |v| allowed[v]).0
    }

    fn bfs_distances_filtered(
        &self,
        source: Node,
        keep: impl Fn(Node) -> bool,
    ) -> (Vec<usize>, Vec<Node>) {
        let mut dist = vec![INFINITE_HOPS; self.n];
        let mut parent = vec![INFINITE_HOPS; self.n];
        let mut queue = VecDeque::new();
        dist[source] = 0;
        parent[source] = source;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            for &nb in &self.adj[v] {
                if keep(nb) && dist[nb] == INFINITE_HOPS {
                    dist[nb] = dist[v] + 1;
                    parent[nb] = v;
                    queue.push_back(nb);
                }
            }
        }
        (dist, parent)
    }

    /// Shortest path from `s` to `t` as a vertex sequence, or `None` when
    /// unreachable.
    ///
    /// Ties resolve to the lexicographically smallest shortest path (as a
    /// forward vertex sequence): breadth-first search explores neighbors in
    /// ascending id order and keeps the first discoverer as parent.
    pub fn shortest_path(&self, s: Node, t: Node) -> Option<Vec<Node>> {
        self.shortest_path_filtered(s, t, |_| true)
    }

    /// Shortest path inside the subgraph induced by `allowed`.
    pub fn shortest_path_within(&self, s: Node, t: Node, allowed: &[bool]) -> Option<Vec<Node>> {
        assert!(
            allowed[s] && allowed[t],
            "path endpoints excluded from induced subgraph"
        );
        self.shortest_path_filtered(s, t, |v| allowed[v])
    }

    fn shortest_path_filtered(
        &self,
        s: Node,
        t: Node,
        keep: impl Fn(Node) -> bool,
    ) -> Option<Vec<Node>> {
        let (dist, parent) = self.bfs_distances_filtered(s, keep);
        if dist[t] == INFINITE_HOPS {
            return None;
        }
        let mut path = vec![t];
        let mut cur = t;
        while cur != s {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }

    /// Vertices reachable from `v`, sorted ascending (includes `v`).
    pub fn connected_component(&self, v: Node) -> Vec<Node> {
        self.component_filtered(v, |_| true)
    }

    /// Component of `v` inside the subgraph induced by `allowed`.
    pub fn connected_component_within(&self, v: Node, allowed: &[bool]) -> Vec<Node> {
        assert!(allowed[v], "component root excluded from induced subgraph");
        self.component_filtered(v, |u| allowed[u])
    }

    fn component_filtered(&self, v: Node, keep: impl Fn(Node) -> bool) -> Vec<Node> {
        let (dist, _) = self.bfs_distances_filtered(v, keep);
        (0..self.n).filter(|&u| dist[u] != INFINITE_HOPS).collect()
    }

    /// All connected components, each sorted, ordered by minimum member.
    pub fn components(&self) -> Vec<Vec<Node>> {
        let mut uf = UnionFind::new(self.n);
        for v in 0..self.n {
            for &nb in &self.adj[v] {
                if nb > v {
                    uf.union(v, nb);
                }
            }
        }
        let all: Vec<Node> = (0..self.n).collect();
        group_by_root(&all, &mut uf)
    }

    /// Edges with exactly one endpoint in `inside`, as `(in, out)` pairs
    /// sorted by `(in, out)`.
    pub fn cut_edges(&self, inside: &[bool]) -> Vec<(Node, Node)> {
        assert_eq!(inside.len(), self.n, "membership mask has wrong length");
        let mut cut = Vec::new();
        for v in 0..self.n {
            if !inside[v] {
                continue;
            }
            for &nb in &self.adj[v] {
                if !inside[nb] {
                    cut.push((v, nb));
                }
            }
        }
        cut
    }
}

/// Minimum spanning forest of a semimetric graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningForest {
    n: usize,
    /// Canonical edge list: `u < v`, sorted by `(u, v)`.
    edges: Vec<(Node, Node, Rat)>,
}

impl SpanningForest {
    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Forest edges (`u < v`, sorted).
    pub fn edges(&self) -> &[(Node, Node, Rat)] {
        &self.edges
    }

    /// Sorted, deduplicated list of the distinct edge weights in the forest.
    pub fn distinct_weights(&self) -> Vec<Rat> {
        let mut ws: Vec<Rat> = self.edges.iter().map(|(_, _, w)| w.clone()).collect();
        ws.sort();
        ws.dedup();
        ws
    }

    /// Unweighted graph of the forest edges with weight `<= eps`.
    pub fn threshold(&self, eps: &Rat) -> ThresholdGraph {
        let mut adj = vec![Vec::new(); self.n];
        for (u, v, w) in &self.edges {
            if w <= eps {
                adj[*u].push(*v);
                adj[*v].push(*u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        ThresholdGraph {
            n: self.n,
            eps: eps.clone(),
            adj,
        }
    }
}

/// Disjoint-set forest with union by rank and path halving.
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (hi, lo) = if self.rank[ra] >= self.rank[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[lo] = hi;
        if self.rank[hi] == self.rank[lo] {
            self.rank[hi] += 1;
        }
        true
    }
}

/// Groups `members` (sorted ascending) by union-find root; components come
/// out sorted internally and ordered by minimum member.
fn group_by_root(members: &[Node], uf: &mut UnionFind) -> Vec<Vec<Node>> {
    let mut by_root: Vec<(usize, Node)> = members.iter().map(|&v| (uf.find(v), v)).collect();
    // Stable grouping keyed by (first member of root, root): since `members`
    // is ascending, the first occurrence of each root is its minimum member.
    let mut first_member = std::collections::BTreeMap::new();
    for &(root, v) in &by_root {
        first_member.entry(root).or_insert(v);
    }
    by_root.sort_by_key(|&(root, v)| (first_member[&root], v));
    let mut out: Vec<Vec<Node>> = Vec::new();
    let mut last_root = None;
    for (root, v) in by_root {
        if last_root != Some(root) {
            out.push(Vec::new());
            last_root = Some(root);
        }
        out.last_mut().expect("group exists").push(v);
    }
    out
}
