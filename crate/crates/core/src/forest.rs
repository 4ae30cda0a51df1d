//! Trees, spanning forests and their degree profiles.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{canonical, connected_components, Edge, Graph};

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// A tree on a subset of the host vertex set `0..host_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    host_n: usize,
    vertices: Vec<usize>,
    edges: Vec<Edge>,
}

impl Tree {
    /// Validates that `edges` form a spanning tree of `vertices`.
    pub fn new(host_n: usize, vertices: Vec<usize>, edges: Vec<Edge>) -> Result<Self> {
        let mut vertices = vertices;
        vertices.sort_unstable();
        vertices.dedup();
        if let Some(&v) = vertices.iter().find(|&&v| v >= host_n) {
            return Err(Error::VertexOutOfRange { vertex: v, n: host_n });
        }
        let mut edges: Vec<Edge> = edges.into_iter().map(|(u, v)| canonical(u, v)).collect();
        edges.sort_unstable();
        if vertices.is_empty() {
            return Err(Error::Degenerate("tree without vertices".into()));
        }
        if edges.len() + 1 != vertices.len() {
            return Err(Error::Degenerate(format!(
                "{} edges cannot span {} vertices as a tree",
                edges.len(),
                vertices.len()
            )));
        }
        let index = |v: usize| vertices.binary_search(&v).ok();
        let mut uf = UnionFind::new(vertices.len());
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let (Some(a), Some(b)) = (index(u), index(v)) else {
                return Err(Error::Degenerate(format!(
                    "edge ({u}, {v}) leaves the tree's vertex set"
                )));
            };
            if !uf.union(a, b) {
                return Err(Error::Degenerate(format!("edge ({u}, {v}) closes a cycle")));
            }
        }
        Ok(Tree {
            host_n,
            vertices,
            edges,
        })
    }

    pub(crate) fn from_parts_unchecked(host_n: usize, mut vertices: Vec<usize>, mut edges: Vec<Edge>) -> Self {
        vertices.sort_unstable();
        for e in &mut edges {
            *e = canonical(e.0, e.1);
        }
        edges.sort_unstable();
        let t = Tree {
            host_n,
            vertices,
            edges,
        };
        debug_assert!(Tree::new(t.host_n, t.vertices.clone(), t.edges.clone()).is_ok());
        t
    }

    pub fn host_n(&self) -> usize {
        self.host_n
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&canonical(u, v)).is_ok()
    }

    /// Degrees indexed by host label (zero outside the tree).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.host_n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Leaves in ascending order. A single vertex has no leaves.
    pub fn leaves(&self) -> Vec<usize> {
        let deg = self.degrees();
        self.vertices.iter().copied().filter(|&v| deg[v] == 1).collect()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves().len()
    }

    pub fn is_subgraph_of(&self, g: &Graph) -> bool {
        g.n() == self.host_n && self.edges.iter().all(|&(u, v)| g.has_edge(u, v))
    }

    pub fn profile(&self) -> DegreeProfile {
        DegreeProfile::from_edges(self.host_n, self.vertices.iter().copied(), &self.edges)
    }
}

/// An acyclic spanning subgraph of a host graph, one tree per component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningForest {
    host_n: usize,
    edges: Vec<Edge>,
    roots: Vec<usize>,
}

impl SpanningForest {
    /// Build from an acyclic edge set on `0..host_n`. Roots are the smallest
    /// vertex of each tree, listed in ascending order.
    pub fn from_edges(host_n: usize, edges: Vec<Edge>) -> Result<Self> {
        let mut edges: Vec<Edge> = edges.into_iter().map(|(u, v)| canonical(u, v)).collect();
        edges.sort_unstable();
        let mut uf = UnionFind::new(host_n);
        for &(u, v) in &edges {
            if v >= host_n {
                return Err(Error::VertexOutOfRange { vertex: v, n: host_n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if !uf.union(u, v) {
                return Err(Error::Degenerate(format!("edge ({u}, {v}) closes a cycle")));
            }
        }
        let mut seen = vec![false; host_n];
        let mut roots = Vec::new();
        for v in 0..host_n {
            let r = uf.find(v);
            if !seen[r] {
                seen[r] = true;
                roots.push(v);
            }
        }
        Ok(SpanningForest {
            host_n,
            edges,
            roots,
        })
    }

    /// Union of vertex-disjoint trees; uncovered vertices become singletons.
    pub fn from_trees(host_n: usize, trees: &[Tree]) -> Result<Self> {
        let mut covered = vec![false; host_n];
        let mut edges = Vec::new();
        for t in trees {
            if t.host_n != host_n {
                return Err(Error::VertexCountMismatch {
                    left: t.host_n,
                    right: host_n,
                });
            }
            for &v in &t.vertices {
                if covered[v] {
                    return Err(Error::Degenerate(format!("vertex {v} lies in two trees")));
                }
                covered[v] = true;
            }
            edges.extend_from_slice(&t.edges);
        }
        Self::from_edges(host_n, edges)
    }

    pub fn host_n(&self) -> usize {
        self.host_n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn component_count(&self) -> usize {
        self.roots.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.host_n];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn leaf_count(&self) -> usize {
        self.degrees().iter().filter(|&&d| d == 1).count()
    }

    pub fn is_tree(&self) -> bool {
        self.roots.len() == 1
    }

    /// Spanning-forest validation against a host graph: acyclic (by
    /// construction), host-edge subset, and `c(F) = c(G)`.
    pub fn validate_against(&self, g: &Graph) -> Result<()> {
        if g.n() != self.host_n {
            return Err(Error::VertexCountMismatch {
                left: g.n(),
                right: self.host_n,
            });
        }
        if let Some(&(u, v)) = self.edges.iter().find(|&&(u, v)| !g.has_edge(u, v)) {
            return Err(Error::Degenerate(format!(
                "forest edge ({u}, {v}) is not a host edge"
            )));
        }
        if self.edges.len() + self.roots.len() != self.host_n {
            return Err(Error::Degenerate("edge count is not n - c(F)".into()));
        }
        let c = connected_components(g).len();
        if c != self.roots.len() {
            return Err(Error::Degenerate(format!(
                "forest has {} components but the host has {c}",
                self.roots.len()
            )));
        }
        Ok(())
    }

    /// Trees of the forest, ordered by root.
    pub fn trees(&self) -> Vec<Tree> {
        let mut uf = UnionFind::new(self.host_n);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        let mut slot = vec![usize::MAX; self.host_n];
        let mut parts: Vec<(Vec<usize>, Vec<Edge>)> = Vec::new();
        for &r in &self.roots {
            slot[uf.find(r)] = parts.len();
            parts.push((Vec::new(), Vec::new()));
        }
        for v in 0..self.host_n {
            parts[slot[uf.find(v)]].0.push(v);
        }
        for &(u, v) in &self.edges {
            parts[slot[uf.find(u)]].1.push((u, v));
        }
        parts
            .into_iter()
            .map(|(vs, es)| Tree::from_parts_unchecked(self.host_n, vs, es))
            .collect()
    }
}

/// Degree classes `L_k` of a forest or tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub classes: BTreeMap<usize, Vec<usize>>,
    pub leaf_count: usize,
}

impl DegreeProfile {
    fn from_edges<I: Iterator<Item = usize>>(host_n: usize, vertices: I, edges: &[Edge]) -> Self {
        let mut deg = vec![0usize; host_n];
        for &(u, v) in edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in vertices {
            classes.entry(deg[v]).or_default().push(v);
        }
        let leaf_count = classes.get(&1).map_or(0, Vec::len);
        DegreeProfile {
            classes,
            leaf_count,
        }
    }

    pub fn class(&self, k: usize) -> &[usize] {
        self.classes.get(&k).map_or(&[], Vec::as_slice)
    }

    pub fn class_size(&self, k: usize) -> usize {
        self.class(k).len()
    }

    pub fn vertex_count(&self) -> usize {
        self.classes.values().map(Vec::len).sum()
    }

    pub fn degree_sum(&self) -> usize {
        self.classes.iter().map(|(k, vs)| k * vs.len()).sum()
    }
}

pub fn degree_profile(f: &SpanningForest) -> DegreeProfile {
    DegreeProfile::from_edges(f.host_n, 0..f.host_n, &f.edges)
}

/// The subtree induced by the non-leaves of `t`.
pub fn inner_tree(t: &Tree) -> Result<Tree> {
    if t.len() <= 2 {
        return Err(Error::Degenerate(format!(
            "inner tree of a {}-vertex tree is empty",
            t.len()
        )));
    }
    let deg = t.degrees();
    let vertices: Vec<usize> = t.vertices.iter().copied().filter(|&v| deg[v] >= 2).collect();
    let edges: Vec<Edge> = t
        .edges
        .iter()
        .copied()
        .filter(|&(u, v)| deg[u] >= 2 && deg[v] >= 2)
        .collect();
    Ok(Tree::from_parts_unchecked(t.host_n, vertices, edges))
}
