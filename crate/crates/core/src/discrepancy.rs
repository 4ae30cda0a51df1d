//! Colour discrepancy of spanning forests, the matching-swap boost, and
//! stitching forests into spanning trees.
//!
//! The boost starts from a two-phase leafy tree `T` of the giant component.
//! Pendant edges of `T` (and of its inner tree `I(T)`) are split by colour
//! into `E1` and `E2`, each edge carrying a designated leaf `v_e`. A maximum
//! matching between the designated leaves `V1` and `V2` then lets every
//! matching edge `uv` of the majority colour replace the opposite-coloured
//! pendant edge at its losing endpoint, shifting the signed sum by two.

use std::collections::VecDeque;

use serde::Serialize;

use crate::coloring::{EdgeColoring, Sign};
use crate::error::{Error, Result};
use crate::forest::{inner_tree, SpanningForest, Tree, UnionFind};
use crate::graph::{canonical, connected_components, union_graphs, Edge, Graph};
use crate::leaf::{spanning_tree_bfs, two_phase_leafy_tree, LeafRunParams};
use crate::matching::max_bipartite_matching;
use crate::rng::derive_seed;

/// Signed colour sum over `edges`.
pub fn signed_sum(edges: &[Edge], chi: &EdgeColoring) -> Result<i64> {
    edges
        .iter()
        .try_fold(0i64, |acc, &(u, v)| Ok(acc + chi.color(u, v)?.value()))
}

/// `(signed sum, |signed sum|)` of the forest's edges under `chi`.
pub fn discrepancy(f: &SpanningForest, chi: &EdgeColoring) -> Result<(i64, u64)> {
    let s = signed_sum(f.edges(), chi)?;
    Ok((s, s.unsigned_abs()))
}

/// Whether `v_e` is a leaf of the tree or a leaf of its inner tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PendantKind {
    TreeLeaf,
    InnerLeaf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DesignatedEdge {
    pub edge: Edge,
    /// The leaf endpoint `v_e`.
    pub vertex: usize,
    pub kind: PendantKind,
    pub color: Sign,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoostContext {
    /// `L(T) ∪ N_T(L(T))`, sorted.
    pub m1: Vec<usize>,
    /// `L(I(T)) ∪ N_I(T)(L(I(T)))`, sorted.
    pub m2: Vec<usize>,
    pub e1: Vec<DesignatedEdge>,
    pub e2: Vec<DesignatedEdge>,
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    /// 1 when both colours have `floor(delta n)` pendant edges, else 2.
    pub case_tag: u8,
    /// Colour of every edge in `e1`; `e2` has the opposite colour.
    pub e1_color: Sign,
    pub delta: f64,
    /// `floor(delta n)`.
    pub quota: usize,
}

/// Leaves of `t` and the edges hanging them, excluding a two-vertex tree
/// where both ends are leaves.
fn pendant_edges(t: &Tree, chi: &EdgeColoring, kind: PendantKind) -> Result<Vec<DesignatedEdge>> {
    let deg = t.degrees();
    let mut out = Vec::new();
    for &(u, v) in t.edges() {
        let leaf = match (deg[u] == 1, deg[v] == 1) {
            (true, false) => u,
            (false, true) => v,
            _ => continue,
        };
        out.push(DesignatedEdge {
            edge: (u, v),
            vertex: leaf,
            kind,
            color: chi.color(u, v)?,
        });
    }
    Ok(out)
}

fn leaves_and_neighbors(t: &Tree) -> Vec<usize> {
    let deg = t.degrees();
    let mut set: Vec<usize> = Vec::new();
    for &(u, v) in t.edges() {
        if deg[u] == 1 || deg[v] == 1 {
            set.push(u);
            set.push(v);
        }
    }
    if t.len() == 1 {
        set.extend_from_slice(t.vertices());
    }
    set.sort_unstable();
    set.dedup();
    set
}

/// Classify the pendant edges of `t` and pick `E1`, `E2`.
///
/// Case 1 takes every pendant edge of each colour. Case 2 takes the first
/// `floor(delta n)` pendant edges of the majority colour as `E1` and the
/// first `floor(delta n)` opposite-coloured pendant edges of `T` or `I(T)`
/// avoiding `V(E1)` as `E2`, in edge order.
pub fn build_boost_context(t: &Tree, chi: &EdgeColoring, delta: f64) -> Result<BoostContext> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta {delta} outside (0, 1)")));
    }
    let n = t.host_n();
    let quota = (delta * n as f64).floor() as usize;
    let tree_pendant = pendant_edges(t, chi, PendantKind::TreeLeaf)?;
    let inner = if t.len() >= 3 { Some(inner_tree(t)?) } else { None };
    let inner_pendant = match &inner {
        Some(i) => pendant_edges(i, chi, PendantKind::InnerLeaf)?,
        None => Vec::new(),
    };
    let m1 = leaves_and_neighbors(t);
    let m2 = inner.as_ref().map(leaves_and_neighbors).unwrap_or_default();

    let plus = tree_pendant.iter().filter(|d| d.color == Sign::Plus).count();
    let minus = tree_pendant.len() - plus;

    let (case_tag, e1_color, e1, e2) = if plus >= quota && minus >= quota {
        let (e1, e2): (Vec<_>, Vec<_>) = tree_pendant.iter().partition(|d| d.color == Sign::Plus);
        (1u8, Sign::Plus, e1, e2)
    } else {
        let major = if plus >= minus { Sign::Plus } else { Sign::Minus };
        if plus.max(minus) < quota {
            return Err(Error::ContextInfeasible(format!(
                "only {} pendant edges of either colour, need {quota}",
                plus.max(minus)
            )));
        }
        let e1: Vec<DesignatedEdge> = tree_pendant
            .iter()
            .filter(|d| d.color == major)
            .take(quota)
            .copied()
            .collect();
        let mut used = vec![false; n];
        for d in &e1 {
            used[d.edge.0] = true;
            used[d.edge.1] = true;
        }
        let mut candidates: Vec<DesignatedEdge> = tree_pendant
            .iter()
            .chain(inner_pendant.iter())
            .filter(|d| d.color != major && !used[d.edge.0] && !used[d.edge.1])
            .copied()
            .collect();
        candidates.sort_by_key(|d| d.edge);
        if candidates.len() < quota {
            return Err(Error::ContextInfeasible(format!(
                "{} edges of colour {} available for E2, need {quota}",
                candidates.len(),
                major.flip()
            )));
        }
        candidates.truncate(quota);
        (2u8, major, e1, candidates)
    };

    if case_tag == 2 {
        let mut in_e1 = vec![false; n];
        for d in &e1 {
            in_e1[d.edge.0] = true;
            in_e1[d.edge.1] = true;
        }
        assert!(
            e2.iter().all(|d| !in_e1[d.edge.0] && !in_e1[d.edge.1]),
            "V(E1) and V(E2) intersect"
        );
    }
    let v1 = e1.iter().map(|d| d.vertex).collect();
    let v2 = e2.iter().map(|d| d.vertex).collect();
    Ok(BoostContext {
        m1,
        m2,
        e1,
        e2,
        v1,
        v2,
        case_tag,
        e1_color,
        delta,
        quota,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoostParams {
    pub delta: f64,
    /// Required leaf fraction of the output forest.
    pub alpha: f64,
    /// A tree at least this discrepant (as a fraction of `n`) is returned
    /// without swapping.
    pub epsilon: f64,
    pub leaf: LeafRunParams,
}

pub const DEFAULT_EPSILON: f64 = 0.01;
pub const DEFAULT_LEAF_TARGET: f64 = 0.30;

impl BoostParams {
    pub fn new(delta: f64, alpha: f64, seed: u64) -> Result<Self> {
        let params = BoostParams {
            delta,
            alpha,
            epsilon: DEFAULT_EPSILON,
            leaf: LeafRunParams::new(DEFAULT_LEAF_TARGET, seed)?,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta {} outside (0, 1)", self.delta)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon {} is negative", self.epsilon)));
        }
        self.leaf.validate()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum BoostStatus {
    /// Swaps were attempted from a valid context.
    Boosted,
    /// The starting tree was already discrepant enough.
    AlreadyDiscrepant,
    /// No context could be built and the tree was not discrepant enough.
    Infeasible,
}

#[derive(Clone, Debug)]
pub struct DiscrepancyResult {
    pub forest: SpanningForest,
    pub signed_sum: i64,
    pub abs_discrepancy: u64,
    pub leaf_count: usize,
    pub swaps_applied: usize,
    pub epsilon_achieved: f64,
    /// 0 when no context was used.
    pub case_tag: u8,
    pub initial_sum: i64,
    pub majority: Option<Sign>,
    pub matching_size: usize,
    /// Majority-coloured matching edges skipped because the swap would
    /// disconnect the tree or push the leaf count below `alpha n`.
    pub skipped: usize,
    /// `signed_sum == initial_sum + 2 * swaps * majority`.
    pub swap_identity_holds: bool,
    pub status: BoostStatus,
    pub giant_size: usize,
    pub union_leaves: usize,
}

impl DiscrepancyResult {
    pub fn leaf_fraction(&self) -> f64 {
        self.leaf_count as f64 / self.forest.host_n().max(1) as f64
    }

    /// Discrepancy and leaf targets both met.
    pub fn meets(&self, epsilon: f64, alpha: f64) -> bool {
        let n = self.forest.host_n() as f64;
        self.abs_discrepancy as f64 >= epsilon * n && self.leaf_count as f64 >= alpha * n
    }
}

/// Host-indexed adjacency of a tree that supports edge swaps.
struct SwapTree {
    adj: Vec<Vec<usize>>,
    leaves: usize,
}

impl SwapTree {
    fn new(t: &Tree) -> Self {
        let mut adj = vec![Vec::new(); t.host_n()];
        for &(u, v) in t.edges() {
            adj[u].push(v);
            adj[v].push(u);
        }
        let leaves = t.leaf_count();
        SwapTree { adj, leaves }
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    /// Whether `target` lies on `from`'s side once edge `(from, cut)` is removed.
    fn same_side_without(&self, from: usize, cut: usize, target: usize) -> bool {
        let mut seen = vec![from];
        let mut queue = VecDeque::from([from]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if (x == from && y == cut) || seen.contains(&y) {
                    continue;
                }
                if y == target {
                    return true;
                }
                seen.push(y);
                queue.push_back(y);
            }
        }
        false
    }

    /// Leaf count after replacing `(l, x)` by `(l, w)`.
    fn leaves_after(&self, x: usize, w: usize) -> usize {
        let mut leaves = self.leaves;
        match self.adj[x].len() {
            2 => leaves += 1,
            1 => leaves -= 1,
            _ => {}
        }
        if self.adj[w].len() == 1 {
            leaves -= 1;
        } else if self.adj[w].is_empty() {
            leaves += 1;
        }
        leaves
    }

    fn swap(&mut self, l: usize, x: usize, w: usize, leaves_after: usize) {
        if let Some(pos) = self.adj[l].iter().position(|&y| y == x) {
            self.adj[l].swap_remove(pos);
        }
        if let Some(pos) = self.adj[x].iter().position(|&y| y == l) {
            self.adj[x].swap_remove(pos);
        }
        self.adj[l].push(w);
        self.adj[w].push(l);
        self.leaves = leaves_after;
    }

    fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

/// Spanning forest of `g` with many leaves and large discrepancy under `chi`.
///
/// The giant component gets a two-phase leafy tree (both phases use `g`),
/// then the matching swaps; every other component gets a breadth-first tree.
pub fn boost_forest(g: &Graph, chi: &EdgeColoring, params: &BoostParams) -> Result<DiscrepancyResult> {
    params.validate()?;
    let n = g.n();
    let two = two_phase_leafy_tree(g, g, &params.leaf)?;
    let tree = two.tree;

    let components = connected_components(g);
    let mut rest_edges: Vec<Edge> = Vec::new();
    for (i, comp) in components.iter().enumerate().skip(1) {
        if comp.len() > 1 {
            let t = spanning_tree_bfs(g, comp, derive_seed(params.leaf.seed, 100 + i as u64))?;
            rest_edges.extend_from_slice(t.edges());
        }
    }
    let rest_sum = signed_sum(&rest_edges, chi)?;
    let tree_sum = signed_sum(tree.edges(), chi)?;
    let initial_sum = tree_sum + rest_sum;

    let finish = |tree_edges: Vec<Edge>,
                  swaps: usize,
                  majority: Option<Sign>,
                  case_tag: u8,
                  matching_size: usize,
                  skipped: usize,
                  status: BoostStatus|
     -> Result<DiscrepancyResult> {
        let mut edges = tree_edges;
        edges.extend_from_slice(&rest_edges);
        let forest = SpanningForest::from_edges(n, edges)?;
        let (signed, abs) = discrepancy(&forest, chi)?;
        let expected = initial_sum + 2 * swaps as i64 * majority.map_or(0, Sign::value);
        Ok(DiscrepancyResult {
            leaf_count: forest.leaf_count(),
            forest,
            signed_sum: signed,
            abs_discrepancy: abs,
            swaps_applied: swaps,
            epsilon_achieved: abs as f64 / n as f64,
            case_tag,
            initial_sum,
            majority,
            matching_size,
            skipped,
            swap_identity_holds: signed == expected,
            status,
            giant_size: two.giant_size,
            union_leaves: two.union_leaves,
        })
    };

    if initial_sum.unsigned_abs() as f64 >= params.epsilon * n as f64 {
        return finish(tree.edges().to_vec(), 0, None, 0, 0, 0, BoostStatus::AlreadyDiscrepant);
    }
    let ctx = match build_boost_context(&tree, chi, params.delta) {
        Ok(ctx) => ctx,
        Err(Error::ContextInfeasible(_)) => {
            return finish(tree.edges().to_vec(), 0, None, 0, 0, 0, BoostStatus::Infeasible);
        }
        Err(e) => return Err(e),
    };

    let matching = max_bipartite_matching(g, &ctx.v1, &ctx.v2);
    let mut plus = 0usize;
    let mut colored = Vec::with_capacity(matching.size());
    for &(a, b) in &matching.pairs {
        let c = chi.color(a, b)?;
        if c == Sign::Plus {
            plus += 1;
        }
        colored.push((a, b, c));
    }
    let minus = matching.size() - plus;
    let majority = match plus.cmp(&minus) {
        std::cmp::Ordering::Greater => Sign::Plus,
        std::cmp::Ordering::Less => Sign::Minus,
        std::cmp::Ordering::Equal => Sign::of(initial_sum),
    };

    let mut designated = vec![usize::MAX; n];
    for d in ctx.e1.iter().chain(ctx.e2.iter()) {
        let other = if d.edge.0 == d.vertex { d.edge.1 } else { d.edge.0 };
        designated[d.vertex] = other;
    }
    let loser_in_v2 = ctx.e1_color == majority;
    let floor = (params.alpha * n as f64).ceil() as usize;
    let other_leaves = rest_leaves(&rest_edges, n);
    let mut work = SwapTree::new(&tree);
    let mut swaps = 0usize;
    let mut skipped = 0usize;
    for &(a, b, c) in &colored {
        if c != majority {
            continue;
        }
        let (l, w) = if loser_in_v2 { (b, a) } else { (a, b) };
        let x = designated[l];
        debug_assert_ne!(x, usize::MAX);
        if work.has_edge(l, w) || !work.has_edge(l, x) || work.same_side_without(l, x, w) {
            skipped += 1;
            continue;
        }
        let after = work.leaves_after(x, w);
        if after + other_leaves < floor {
            skipped += 1;
            continue;
        }
        work.swap(l, x, w, after);
        swaps += 1;
    }
    finish(
        work.edges(),
        swaps,
        Some(majority),
        ctx.case_tag,
        matching.size(),
        skipped,
        BoostStatus::Boosted,
    )
}

fn rest_leaves(rest: &[Edge], n: usize) -> usize {
    let mut deg = vec![0u32; n];
    for &(u, v) in rest {
        deg[u] += 1;
        deg[v] += 1;
    }
    deg.iter().filter(|&&d| d == 1).count()
}

/// Join the trees of `f` into one spanning tree with the fewest connector
/// edges, scanning connector edges in label order.
pub fn forest_to_tree(f: &SpanningForest, connector: &Graph) -> Result<(Tree, Vec<Edge>)> {
    let n = f.host_n();
    if connector.n() != n {
        return Err(Error::VertexCountMismatch {
            left: n,
            right: connector.n(),
        });
    }
    let mut uf = UnionFind::new(n);
    for &(u, v) in f.edges() {
        uf.union(u, v);
    }
    let mut components = f.component_count();
    let mut added = Vec::new();
    for &(u, v) in connector.edges() {
        if components == 1 {
            break;
        }
        if uf.union(u, v) {
            added.push((u, v));
            components -= 1;
        }
    }
    if components != 1 {
        return Err(Error::Disconnected);
    }
    let mut edges = f.edges().to_vec();
    edges.extend_from_slice(&added);
    let tree = Tree::new(n, (0..n).collect(), edges)?;
    Ok((tree, added))
}

#[derive(Clone, Debug)]
pub struct SpanningTreeResult {
    pub tree: Tree,
    /// The boosted forest of `g2`.
    pub forest: DiscrepancyResult,
    pub added_edges: Vec<Edge>,
    pub signed_sum: i64,
    pub abs_discrepancy: u64,
    /// Edges of the more frequent colour, `(n - 1 + |sum|) / 2`.
    pub majority_count: usize,
    pub leaf_count: usize,
    /// `majority_count >= ((n - 1) + |forest sum| - added) / 2`.
    pub majority_bound_holds: bool,
}

/// A spanning tree of `g1 ∪ g2` whose majority colour class is large: boost
/// a forest of `g2`, then join its trees with edges of `g1 ∪ g2`.
pub fn high_disc_spanning_tree(
    g1: &Graph,
    g2: &Graph,
    chi: &EdgeColoring,
    params: &BoostParams,
) -> Result<SpanningTreeResult> {
    let union = union_graphs(g1, g2)?;
    let chi2 = chi.restrict(g2)?;
    let forest = boost_forest(g2, &chi2, params)?;
    let (tree, added_edges) = forest_to_tree(&forest.forest, &union)?;
    let signed = signed_sum(tree.edges(), chi)?;
    let abs = signed.unsigned_abs();
    let n = g1.n();
    let edges = n.saturating_sub(1);
    let majority_count = (edges + abs as usize) / 2;
    let bound = (edges as i64 + forest.abs_discrepancy as i64 - added_edges.len() as i64) as f64 / 2.0;
    Ok(SpanningTreeResult {
        leaf_count: tree.leaf_count(),
        majority_bound_holds: majority_count as f64 >= bound,
        tree,
        forest,
        added_edges,
        signed_sum: signed,
        abs_discrepancy: abs,
        majority_count,
    })
}

/// Remove `e` and add `f` in a tree given as a sorted edge list.
pub(crate) fn exchange(edges: &mut Vec<Edge>, remove: Edge, add: Edge) {
    let remove = canonical(remove.0, remove.1);
    if let Ok(i) = edges.binary_search(&remove) {
        edges.remove(i);
    }
    let add = canonical(add.0, add.1);
    if let Err(i) = edges.binary_search(&add) {
        edges.insert(i, add);
    }
}
