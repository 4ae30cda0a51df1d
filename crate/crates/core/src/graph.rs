//! Simple undirected graphs on the vertex set `0..n`.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// An undirected edge stored canonically with `u < v`.
pub type Edge = (usize, usize);

#[inline]
pub fn canonical(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A simple labeled graph. The edge list is sorted and free of loops and
/// duplicates; `adj[v]` is the sorted neighbor list of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Build a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            list.push(canonical(u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge(w[0].0, w[0].1));
        }
        Ok(Self::from_canonical_sorted(n, list))
    }

    /// Like [`Graph::from_edges`] but silently merges duplicate edges.
    pub fn from_edges_dedup<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut list = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            list.push(canonical(u, v));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Self::from_canonical_sorted(n, list))
    }

    /// Trusted constructor: `edges` must be canonical, sorted and unique.
    pub(crate) fn from_canonical_sorted(n: usize, edges: Vec<Edge>) -> Self {
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        let mut deg = vec![0usize; n];
        for &(u, v) in &edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut adj: Vec<Vec<usize>> = deg.iter().map(|&d| Vec::with_capacity(d)).collect();
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        // Edges are sorted by (u, v), so adj[u] receives its larger neighbors in
        // order but smaller ones interleaved; sort once.
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_canonical_sorted(n, edges)
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_canonical_sorted(n, edges)
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let mut edges: Vec<Edge> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((0, n - 1));
        edges.sort_unstable();
        Self::from_canonical_sorted(n, edges)
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        let edges = (1..=leaves).map(|v| (0, v)).collect();
        Self::from_canonical_sorted(leaves + 1, edges)
    }

    /// Wheel on `n` vertices: hub 0 joined to a rim cycle on `1..n`.
    pub fn wheel(n: usize) -> Self {
        assert!(n >= 4, "a wheel needs at least 4 vertices");
        let mut edges: Vec<Edge> = (1..n).map(|v| (0, v)).collect();
        for v in 2..n {
            edges.push((v - 1, v));
        }
        edges.push((1, n - 1));
        edges.sort_unstable();
        edges.dedup();
        Self::from_canonical_sorted(n, edges)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n || u == v {
            return false;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Position of the edge `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.binary_search(&canonical(u, v)).ok()
    }

    /// Induced subgraph on `vertices`, relabeled to `0..vertices.len()` in the
    /// given order. Returns the subgraph and the local-to-host label map.
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = local[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        edges.sort_unstable();
        (
            Graph::from_canonical_sorted(vertices.len(), edges),
            vertices.to_vec(),
        )
    }

    /// Whether the vertices in `set` induce a connected subgraph.
    pub fn is_connected_on(&self, set: &[usize]) -> bool {
        if set.is_empty() {
            return true;
        }
        let mut inside = vec![false; self.n];
        for &v in set {
            inside[v] = true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([set[0]]);
        seen[set[0]] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if inside[w] && !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == set.len()
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || connected_components(self).len() == 1
    }

    /// Checks the structural invariants; used by tests.
    pub fn check_invariants(&self) -> bool {
        if self.adj.len() != self.n {
            return false;
        }
        if !self.edges.windows(2).all(|w| w[0] < w[1]) {
            return false;
        }
        if self.edges.iter().any(|&(u, v)| u >= v || v >= self.n) {
            return false;
        }
        let degree_sum: usize = self.adj.iter().map(Vec::len).sum();
        if degree_sum != 2 * self.edges.len() {
            return false;
        }
        self.adj.iter().enumerate().all(|(v, list)| {
            list.windows(2).all(|w| w[0] < w[1])
                && list.iter().all(|&w| w != v && self.adj[w].binary_search(&v).is_ok())
        })
    }
}

/// Edge-set union of two graphs on the same vertex count.
pub fn union_graphs(g1: &Graph, g2: &Graph) -> Result<Graph> {
    if g1.n != g2.n {
        return Err(Error::VertexCountMismatch {
            left: g1.n,
            right: g2.n,
        });
    }
    let (a, b) = (&g1.edges, &g2.edges);
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                merged.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                merged.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                merged.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    merged.extend_from_slice(&a[i..]);
    merged.extend_from_slice(&b[j..]);
    Ok(Graph::from_canonical_sorted(g1.n, merged))
}

/// Connected components, each sorted ascending, ordered by decreasing size
/// and then by smallest label. The giant component is always index 0.
pub fn connected_components(g: &Graph) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; g.n];
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..g.n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        queue.push_back(s);
        let mut members = vec![s];
        while let Some(v) = queue.pop_front() {
            for &w in &g.adj[v] {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                    queue.push_back(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    // Components are discovered in order of their smallest label, so a stable
    // sort by size keeps the label tie-break.
    out.sort_by_key(|c| std::cmp::Reverse(c.len()));
    out
}
