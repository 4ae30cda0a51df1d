//! Spanning trees with many leaves via producer rewrites.
//!
//! A *producer* for a tree `T` is a host edge `{u1, u2}` outside `T` together
//! with a degree-2 vertex `u*` adjacent to `u2` such that both neighbors of
//! `u*` are internal, `u1` is internal and `T`-adjacent to neither neighbor of
//! `u*`, and `u*` separates `u1` from `u2` in `T`. Replacing `u2 u*` by `u1 u2`
//! keeps a spanning tree and turns `u*` into a leaf without destroying any
//! other leaf.

use std::io::Write;

use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forest::{inner_tree, Tree};
use crate::graph::{canonical, connected_components, Edge, Graph};
use crate::rng::{derive_seed, rng_from_seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProducerMove {
    pub u1: usize,
    pub u2: usize,
    pub u_star: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeafRunParams {
    /// Stop once the leaf count reaches this fraction of the tree's vertices.
    pub target_leaf_fraction: f64,
    /// Sampling budget as a multiple of the tree's vertex count.
    pub max_steps_factor: f64,
    pub seed: u64,
    /// Record one trace row per sampling step.
    pub trace: bool,
}

impl LeafRunParams {
    /// Parameters with the default budget for `target`.
    pub fn new(target_leaf_fraction: f64, seed: u64) -> Result<Self> {
        let params = LeafRunParams {
            target_leaf_fraction,
            max_steps_factor: default_steps_factor(target_leaf_fraction),
            seed,
            trace: false,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_budget(mut self, max_steps_factor: f64) -> Result<Self> {
        self.max_steps_factor = max_steps_factor;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_leaf_fraction > 0.0 && self.target_leaf_fraction < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "target leaf fraction {} outside (0, 1)",
                self.target_leaf_fraction
            )));
        }
        if !(self.max_steps_factor > 0.0 && self.max_steps_factor.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "step budget factor {} must be positive",
                self.max_steps_factor
            )));
        }
        Ok(())
    }
}

/// `ceil(1 / (4 (1/3 - target)))`, the number of samples per vertex after
/// which the producer count bound forces termination. Targets at or above
/// one third get a flat budget of 100.
pub fn default_steps_factor(target: f64) -> f64 {
    let gap = 1.0 / 3.0 - target;
    if gap <= 1e-3 {
        100.0
    } else {
        (1.0 / (4.0 * gap) - 1e-9).ceil().min(100.0)
    }
}

/// Rooted working copy of a tree on local labels `0..k`.
///
/// Keeps parent pointers and DFS entry/exit times so that "the neighbor of
/// `a` on the path towards `b`" is an O(log deg) query.
struct WorkTree {
    host: Vec<usize>,
    adj: Vec<Vec<usize>>,
    parent: Vec<usize>,
    tin: Vec<usize>,
    tout: Vec<usize>,
    children: Vec<Vec<usize>>,
    leaves: usize,
}

const NONE: usize = usize::MAX;

impl WorkTree {
    fn new(t: &Tree, local: &mut [usize]) -> Self {
        let host = t.vertices().to_vec();
        for (i, &v) in host.iter().enumerate() {
            local[v] = i;
        }
        let k = host.len();
        let mut adj = vec![Vec::new(); k];
        for &(u, v) in t.edges() {
            let (a, b) = (local[u], local[v]);
            adj[a].push(b);
            adj[b].push(a);
        }
        let leaves = adj.iter().filter(|l| l.len() == 1).count();
        let mut w = WorkTree {
            host,
            adj,
            parent: vec![NONE; k],
            tin: vec![0; k],
            tout: vec![0; k],
            children: vec![Vec::new(); k],
            leaves,
        };
        w.reroot();
        w
    }

    fn reroot(&mut self) {
        let k = self.adj.len();
        if k == 0 {
            return;
        }
        for c in &mut self.children {
            c.clear();
        }
        self.parent[0] = NONE;
        let mut clock = 0;
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        self.tin[0] = clock;
        clock += 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < self.adj[v].len() {
                let w = self.adj[v][*next];
                *next += 1;
                if w != self.parent[v] {
                    self.parent[w] = v;
                    self.children[v].push(w);
                    self.tin[w] = clock;
                    clock += 1;
                    stack.push((w, 0));
                }
            } else {
                self.tout[v] = clock;
                stack.pop();
            }
        }
    }

    #[inline]
    fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.parent[a] == b || self.parent[b] == a
    }

    #[inline]
    fn is_ancestor(&self, a: usize, b: usize) -> bool {
        self.tin[a] <= self.tin[b] && self.tin[b] < self.tout[a]
    }

    /// Neighbor of `a` on the tree path from `a` to `b` (`a != b`).
    fn step_towards(&self, a: usize, b: usize) -> usize {
        if self.is_ancestor(a, b) {
            let ch = &self.children[a];
            let idx = ch.partition_point(|&c| self.tin[c] <= self.tin[b]);
            ch[idx - 1]
        } else {
            self.parent[a]
        }
    }

    /// The `u*` making `(u1, u2, u*)` a producer, if any.
    fn producer_oriented(&self, u1: usize, u2: usize) -> Option<usize> {
        if u1 == u2 || self.degree(u1) < 2 || self.adjacent(u1, u2) {
            return None;
        }
        let s = self.step_towards(u2, u1);
        if s == u1 || self.degree(s) != 2 {
            return None;
        }
        let w = if self.adj[s][0] == u2 {
            self.adj[s][1]
        } else {
            self.adj[s][0]
        };
        if self.degree(u2) < 2 || self.degree(w) < 2 {
            return None;
        }
        if w != u1 && self.adjacent(u1, w) {
            return None;
        }
        Some(s)
    }

    /// Both orientations; the smaller `u*` label wins, then the smaller `u1`.
    fn find_producer(&self, a: usize, b: usize) -> Option<(usize, usize, usize)> {
        let (x, y) = if self.host[a] < self.host[b] { (a, b) } else { (b, a) };
        let first = self.producer_oriented(x, y).map(|s| (x, y, s));
        let second = self.producer_oriented(y, x).map(|s| (y, x, s));
        match (first, second) {
            (Some(f), Some(s)) if self.host[s.2] < self.host[f.2] => Some(s),
            (Some(f), _) => Some(f),
            (None, s) => s,
        }
    }

    fn apply(&mut self, u1: usize, u2: usize, s: usize) {
        remove_item(&mut self.adj[u2], s);
        remove_item(&mut self.adj[s], u2);
        self.adj[u1].push(u2);
        self.adj[u2].push(u1);
        self.leaves += 1;
        self.reroot();
    }

    fn to_tree(&self, host_n: usize) -> Tree {
        let mut edges = Vec::with_capacity(self.adj.len().saturating_sub(1));
        for (a, list) in self.adj.iter().enumerate() {
            for &b in list {
                if a < b {
                    edges.push(canonical(self.host[a], self.host[b]));
                }
            }
        }
        Tree::from_parts_unchecked(host_n, self.host.clone(), edges)
    }
}

fn remove_item(list: &mut Vec<usize>, x: usize) {
    if let Some(pos) = list.iter().position(|&y| y == x) {
        list.swap_remove(pos);
    }
}

/// Randomized depth-first spanning tree of `component`. Depth-first trees of
/// sparse random graphs are long and have few leaves, which makes them the
/// starting point that leaves the rewriting the most work.
pub fn spanning_tree_arbitrary(g: &Graph, component: &[usize], seed: u64) -> Result<Tree> {
    spanning_tree_search(g, component, seed, SearchOrder::Depth)
}

/// Randomized breadth-first spanning tree of `component`.
pub fn spanning_tree_bfs(g: &Graph, component: &[usize], seed: u64) -> Result<Tree> {
    spanning_tree_search(g, component, seed, SearchOrder::Breadth)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SearchOrder {
    Depth,
    Breadth,
}

fn spanning_tree_search(
    g: &Graph,
    component: &[usize],
    seed: u64,
    order: SearchOrder,
) -> Result<Tree> {
    use rand::seq::SliceRandom;
    if component.is_empty() {
        return Err(Error::Degenerate("empty vertex set".into()));
    }
    let n = g.n();
    let mut inside = vec![false; n];
    for &v in component {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        inside[v] = true;
    }
    let mut rng = rng_from_seed(seed);
    let root = component[rng.gen_range(0..component.len())];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut edges: Vec<Edge> = Vec::with_capacity(component.len() - 1);
    let shuffled = |v: usize, rng: &mut crate::rng::Rng| {
        let mut nb: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| inside[w]).collect();
        nb.shuffle(rng);
        nb
    };
    match order {
        SearchOrder::Depth => {
            let mut stack: Vec<(usize, Vec<usize>, usize)> = vec![(root, shuffled(root, &mut rng), 0)];
            while let Some(top) = stack.last_mut() {
                if top.2 < top.1.len() {
                    let w = top.1[top.2];
                    top.2 += 1;
                    if !seen[w] {
                        seen[w] = true;
                        edges.push(canonical(top.0, w));
                        let nb = shuffled(w, &mut rng);
                        stack.push((w, nb, 0));
                    }
                } else {
                    stack.pop();
                }
            }
        }
        SearchOrder::Breadth => {
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                for w in shuffled(v, &mut rng) {
                    if !seen[w] {
                        seen[w] = true;
                        edges.push(canonical(v, w));
                        queue.push_back(w);
                    }
                }
            }
        }
    }
    if edges.len() + 1 != component.len() {
        return Err(Error::Disconnected);
    }
    Ok(Tree::from_parts_unchecked(n, component.to_vec(), edges))
}

/// The producer move that adds `e` to `t`, if `e` is a producer edge.
pub fn find_producer(t: &Tree, e: Edge) -> Option<ProducerMove> {
    let (a, b) = e;
    if a == b || !t.contains_vertex(a) || !t.contains_vertex(b) || t.contains_edge(a, b) {
        return None;
    }
    let mut local = vec![NONE; t.host_n()];
    let w = WorkTree::new(t, &mut local);
    w.find_producer(local[a], local[b]).map(|(u1, u2, s)| ProducerMove {
        u1: w.host[u1],
        u2: w.host[u2],
        u_star: w.host[s],
    })
}

/// `(t - {u2 u*}) + {u1 u2}`, after checking every producer condition.
pub fn apply_producer(t: &Tree, mv: &ProducerMove) -> Result<Tree> {
    let ProducerMove { u1, u2, u_star } = *mv;
    for v in [u1, u2, u_star] {
        if v >= t.host_n() || !t.contains_vertex(v) {
            return Err(Error::InvalidMove(format!("vertex {v} is not in the tree")));
        }
    }
    let mut local = vec![NONE; t.host_n()];
    let w = WorkTree::new(t, &mut local);
    let (a, b, s) = (local[u1], local[u2], local[u_star]);
    if w.adjacent(a, b) {
        return Err(Error::InvalidMove(format!("{u1} and {u2} are already tree-adjacent")));
    }
    match w.producer_oriented(a, b) {
        Some(found) if found == s => {}
        _ => {
            return Err(Error::InvalidMove(format!(
                "({u1}, {u2}, {u_star}) violates the producer conditions"
            )))
        }
    }
    let mut w = w;
    w.apply(a, b, s);
    Ok(w.to_tree(t.host_n()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub step: usize,
    pub leaf_count: usize,
    pub producer_applied: bool,
}

#[derive(Clone, Debug)]
pub struct LeafRun {
    pub tree: Tree,
    pub initial_leaves: usize,
    pub final_leaves: usize,
    pub steps: usize,
    pub producers_applied: usize,
    pub reached_target: bool,
    pub trace: Vec<TraceRow>,
}

/// The leaf-increasing loop: sample host edges uniformly with replacement from
/// the edges of `g` inside `V(t)` and apply each one that is a producer,
/// until the leaf target is met or the sampling budget runs out.
///
/// `t` need not be a subgraph of `g`; only the sampled edges come from `g`.
pub fn leaf_increase(g: &Graph, t: &Tree, params: &LeafRunParams) -> Result<LeafRun> {
    params.validate()?;
    if g.n() != t.host_n() {
        return Err(Error::VertexCountMismatch {
            left: g.n(),
            right: t.host_n(),
        });
    }
    let mut local = vec![NONE; g.n()];
    let mut work = WorkTree::new(t, &mut local);
    let k = work.host.len();
    let candidates: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .filter_map(|&(u, v)| {
            let (a, b) = (local[u], local[v]);
            (a != NONE && b != NONE).then_some((a, b))
        })
        .collect();

    let target = (params.target_leaf_fraction * k as f64).ceil() as usize;
    let budget = (params.max_steps_factor * k as f64).ceil() as usize;
    let initial_leaves = work.leaves;
    let mut rng = rng_from_seed(params.seed);
    let mut steps = 0;
    let mut applied = 0;
    let mut trace = Vec::new();
    while work.leaves < target && steps < budget && !candidates.is_empty() {
        let (a, b) = candidates[rng.gen_range(0..candidates.len())];
        steps += 1;
        let hit = work.find_producer(a, b);
        if let Some((u1, u2, s)) = hit {
            work.apply(u1, u2, s);
            applied += 1;
        }
        if params.trace {
            trace.push(TraceRow {
                step: steps,
                leaf_count: work.leaves,
                producer_applied: hit.is_some(),
            });
        }
    }
    let tree = work.to_tree(g.n());
    debug_assert_eq!(tree.leaf_count(), work.leaves);
    Ok(LeafRun {
        final_leaves: work.leaves,
        reached_target: work.leaves >= target,
        tree,
        initial_leaves,
        steps,
        producers_applied: applied,
        trace,
    })
}

pub fn write_trace_csv<W: Write>(out: W, trace: &[TraceRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "leafCount", "producerApplied"])
        .map_err(csv_err)?;
    for row in trace {
        w.write_record([
            row.step.to_string(),
            row.leaf_count.to_string(),
            row.producer_applied.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Io(std::io::Error::other(format!("{other:?}"))),
    }
}

#[derive(Clone, Debug)]
pub struct TwoPhaseTree {
    /// Spanning tree of the giant component of `g1`.
    pub tree: Tree,
    pub t1: Tree,
    pub t2: Tree,
    pub giant_size: usize,
    pub t1_leaves: usize,
    pub t2_leaves: usize,
    /// `|L(T) ∪ L(I(T))|` for the output tree.
    pub union_leaves: usize,
    /// T2 leaves that received a reattached T1 leaf.
    pub collisions: usize,
    pub phase1: LeafRunStats,
    pub phase2: LeafRunStats,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LeafRunStats {
    pub initial_leaves: usize,
    pub final_leaves: usize,
    pub steps: usize,
    pub producers_applied: usize,
}

impl From<&LeafRun> for LeafRunStats {
    fn from(r: &LeafRun) -> Self {
        LeafRunStats {
            initial_leaves: r.initial_leaves,
            final_leaves: r.final_leaves,
            steps: r.steps,
            producers_applied: r.producers_applied,
        }
    }
}

/// `|L(T) ∪ L(I(T))|` for a tree `T`.
pub fn leaves_with_inner_leaves(t: &Tree) -> usize {
    let leaves = t.leaf_count();
    if t.len() <= 2 {
        return leaves;
    }
    let inner = inner_tree(t).expect("tree has at least three vertices");
    leaves + inner.leaf_count()
}

/// Two rounds of leaf increasing: first on a spanning tree of the giant
/// component of `g1`, then on its inner tree using edges of `g2`; the leaves
/// of the first tree are finally hung back on their original neighbors.
pub fn two_phase_leafy_tree(g1: &Graph, g2: &Graph, params: &LeafRunParams) -> Result<TwoPhaseTree> {
    params.validate()?;
    if g1.n() != g2.n() {
        return Err(Error::VertexCountMismatch {
            left: g1.n(),
            right: g2.n(),
        });
    }
    let n = g1.n();
    if n == 0 {
        return Err(Error::Degenerate("empty graph".into()));
    }
    let giant = connected_components(g1).swap_remove(0);
    let start = spanning_tree_arbitrary(g1, &giant, derive_seed(params.seed, 1))?;
    let p1 = LeafRunParams {
        seed: derive_seed(params.seed, 2),
        trace: false,
        ..*params
    };
    let run1 = leaf_increase(g1, &start, &p1)?;
    let t1 = run1.tree.clone();

    if t1.len() <= 2 {
        let union_leaves = leaves_with_inner_leaves(&t1);
        let leaves = t1.leaf_count();
        return Ok(TwoPhaseTree {
            tree: t1.clone(),
            t2: t1.clone(),
            t1,
            giant_size: giant.len(),
            t1_leaves: leaves,
            t2_leaves: 0,
            union_leaves,
            collisions: 0,
            phase1: (&run1).into(),
            phase2: LeafRunStats::default(),
        });
    }

    let inner = inner_tree(&t1)?;
    let (t2, phase2) = if inner.len() >= 3 {
        let p2 = LeafRunParams {
            seed: derive_seed(params.seed, 3),
            trace: false,
            ..*params
        };
        let run2 = leaf_increase(g2, &inner, &p2)?;
        let stats = LeafRunStats::from(&run2);
        (run2.tree, stats)
    } else {
        (inner.clone(), LeafRunStats::default())
    };

    // Hang every T1 leaf back on its T1 neighbor.
    let t1_deg = t1.degrees();
    let mut pendant: Vec<Edge> = Vec::new();
    for &(u, v) in t1.edges() {
        if t1_deg[u] == 1 || t1_deg[v] == 1 {
            pendant.push((u, v));
        }
    }
    let t2_leaf_set = t2.leaves();
    let mut receives = vec![false; n];
    for &(u, v) in &pendant {
        let anchor = if t1_deg[u] == 1 { v } else { u };
        receives[anchor] = true;
    }
    let collisions = t2_leaf_set.iter().filter(|&&v| receives[v]).count();
    let mut edges = t2.edges().to_vec();
    edges.extend_from_slice(&pendant);
    let tree = Tree::new(n, t1.vertices().to_vec(), edges)?;
    let union_leaves = leaves_with_inner_leaves(&tree);

    Ok(TwoPhaseTree {
        t1_leaves: t1.leaf_count(),
        t2_leaves: t2_leaf_set.len(),
        tree,
        t1,
        t2,
        giant_size: giant.len(),
        union_leaves,
        collisions,
        phase1: (&run1).into(),
        phase2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_tree(n: usize) -> Tree {
        Tree::new(n, (0..n).collect(), (1..n).map(|v| (v - 1, v)).collect()).unwrap()
    }

    #[test]
    fn p6_producer() {
        // a..f = 0..5; e = {b, d}
        let t = path_tree(6);
        let mv = find_producer(&t, (1, 3)).unwrap();
        assert_eq!(mv, ProducerMove { u1: 1, u2: 3, u_star: 2 });
        let t2 = apply_producer(&t, &mv).unwrap();
        assert_eq!(t2.leaves(), vec![0, 2, 5]);
        assert_eq!(t2.edges().len(), 5);
    }

    #[test]
    fn p4_has_no_producer() {
        let t = path_tree(4);
        for u in 0..4 {
            for v in u + 1..4 {
                assert_eq!(find_producer(&t, (u, v)), None, "edge ({u},{v})");
            }
        }
    }

    #[test]
    fn tree_edge_is_not_a_producer() {
        assert_eq!(find_producer(&path_tree(6), (2, 3)), None);
    }

    #[test]
    fn invalid_moves_rejected() {
        let t = path_tree(6);
        let adjacent = ProducerMove { u1: 2, u2: 3, u_star: 4 };
        assert!(matches!(apply_producer(&t, &adjacent), Err(Error::InvalidMove(_))));
        let wrong_star = ProducerMove { u1: 1, u2: 3, u_star: 4 };
        assert!(apply_producer(&t, &wrong_star).is_err());
        let leaf_u1 = ProducerMove { u1: 0, u2: 3, u_star: 2 };
        assert!(apply_producer(&t, &leaf_u1).is_err());
    }

    #[test]
    fn spanning_trees_are_valid() {
        let g = Graph::complete(4);
        let all: Vec<usize> = (0..4).collect();
        for seed in 0..5 {
            let t = spanning_tree_arbitrary(&g, &all, seed).unwrap();
            assert_eq!(t.edges().len(), 3);
            assert!(t.is_subgraph_of(&g));
            let b = spanning_tree_bfs(&g, &all, seed).unwrap();
            assert!(b.is_subgraph_of(&g));
        }
        let p = Graph::path(5);
        let t = spanning_tree_arbitrary(&p, &(0..5).collect::<Vec<_>>(), 3).unwrap();
        assert_eq!(t.edges(), p.edges());
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(
            spanning_tree_arbitrary(&two, &[0, 1, 2, 3], 0),
            Err(Error::Disconnected)
        ));
    }

    #[test]
    fn no_extra_edges_means_no_change() {
        let g = Graph::path(8);
        let t = path_tree(8);
        let run = leaf_increase(&g, &t, &LeafRunParams::new(0.3, 1).unwrap()).unwrap();
        assert_eq!(run.tree, t);
        assert_eq!(run.producers_applied, 0);
        assert!(!run.reached_target);
    }

    #[test]
    fn default_budget_formula() {
        assert_eq!(default_steps_factor(0.30), 8.0);
        assert_eq!(default_steps_factor(0.25), 3.0);
        assert_eq!(default_steps_factor(0.34), 100.0);
    }

    #[test]
    fn two_phase_with_empty_second_layer() {
        use crate::generators::{gen_gnp, GnpParams};
        let g1 = gen_gnp(&GnpParams::new(400, 0.05, 4).unwrap()).unwrap();
        let g2 = Graph::empty(400);
        let res = two_phase_leafy_tree(&g1, &g2, &LeafRunParams::new(0.3, 9).unwrap()).unwrap();
        let inner = inner_tree(&res.t1).unwrap();
        assert_eq!(res.t2, inner);
        assert_eq!(res.tree, res.t1);
        assert_eq!(res.union_leaves, res.t1.leaf_count() + inner.leaf_count());
        for l in res.t1.leaves() {
            assert_eq!(res.tree.degrees()[l], 1);
        }
    }
}
