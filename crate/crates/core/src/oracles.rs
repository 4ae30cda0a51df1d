//! Brute-force ground truth for small graphs and concrete adversarial
//! colourings.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::coloring::{EdgeColoring, Sign};
use crate::discrepancy::{boost_forest, signed_sum, BoostParams};
use crate::error::{Error, Result};
use crate::forest::{SpanningForest, Tree};
use crate::graph::{connected_components, Edge, Graph};
use crate::rng::{derive_seed, rng_from_seed};

/// Default cap on the number of spanning trees any enumeration may visit.
pub const DEFAULT_TREE_BUDGET: u128 = 1_000_000;

/// Number of spanning trees of `g` by the matrix-tree theorem, using
/// fraction-free (Bareiss) elimination on a reduced Laplacian.
pub fn kirchhoff_count(g: &Graph) -> Result<u128> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Degenerate("graph without vertices".into()));
    }
    let k = n - 1;
    if k == 0 {
        return Ok(1);
    }
    let mut m = vec![vec![0i128; k]; k];
    for &(u, v) in g.edges() {
        if u < k {
            m[u][u] += 1;
        }
        if v < k {
            m[v][v] += 1;
        }
        if u < k && v < k {
            m[u][v] -= 1;
            m[v][u] -= 1;
        }
    }
    let overflow = || Error::TooLarge { n, limit: n };
    let mut sign = 1i128;
    let mut prev = 1i128;
    for p in 0..k {
        if m[p][p] == 0 {
            let Some(r) = (p + 1..k).find(|&r| m[r][p] != 0) else {
                return Ok(0);
            };
            m.swap(p, r);
            sign = -sign;
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let a = m[i][j].checked_mul(m[p][p]).ok_or_else(overflow)?;
                let b = m[i][p].checked_mul(m[p][j]).ok_or_else(overflow)?;
                m[i][j] = a.checked_sub(b).ok_or_else(overflow)? / prev;
            }
            m[i][p] = 0;
        }
        prev = m[p][p];
    }
    let det = sign * m[k - 1][k - 1];
    Ok(det.max(0) as u128)
}

/// Call `visit` with the edge list of every spanning tree of the connected
/// graph `g`, in lexicographic order of the edge-inclusion choices.
///
/// The Kirchhoff count is checked against `budget` before enumerating.
pub fn for_each_spanning_tree<F>(g: &Graph, budget: u128, mut visit: F) -> Result<u128>
where
    F: FnMut(&[Edge]),
{
    let n = g.n();
    if n == 0 {
        return Err(Error::Degenerate("graph without vertices".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let count = kirchhoff_count(g)?;
    if count > budget {
        return Err(Error::BudgetExceeded(format!(
            "{count} spanning trees exceed the budget of {budget}"
        )));
    }
    let mut chosen = Vec::with_capacity(n - 1);
    let labels: Vec<usize> = (0..n).collect();
    let mut visited = 0u128;
    descend(g.edges(), 0, &labels, &mut chosen, n, &mut visited, &mut visit);
    debug_assert_eq!(visited, count);
    Ok(visited)
}

fn descend<F: FnMut(&[Edge])>(
    edges: &[Edge],
    i: usize,
    labels: &[usize],
    chosen: &mut Vec<Edge>,
    n: usize,
    visited: &mut u128,
    visit: &mut F,
) {
    if chosen.len() + 1 == n {
        *visited += 1;
        visit(chosen);
        return;
    }
    if i == edges.len() || edges.len() - i < n - 1 - chosen.len() {
        return;
    }
    let (u, v) = edges[i];
    let (lu, lv) = (labels[u], labels[v]);
    if lu != lv {
        let merged: Vec<usize> = labels.iter().map(|&l| if l == lv { lu } else { l }).collect();
        chosen.push((u, v));
        descend(edges, i + 1, &merged, chosen, n, visited, visit);
        chosen.pop();
    }
    if can_still_span(edges, i + 1, labels) {
        descend(edges, i + 1, labels, chosen, n, visited, visit);
    }
}

/// Whether the current partition plus `edges[from..]` is connected.
fn can_still_span(edges: &[Edge], from: usize, labels: &[usize]) -> bool {
    let mut l = labels.to_vec();
    let root = |l: &mut Vec<usize>, mut x: usize| {
        while l[x] != x {
            l[x] = l[l[x]];
            x = l[x];
        }
        x
    };
    for &(u, v) in &edges[from..] {
        let (a, b) = (root(&mut l, u), root(&mut l, v));
        if a != b {
            l[b] = a;
        }
    }
    let r = root(&mut l, 0);
    (0..labels.len()).all(|x| root(&mut l, x) == r)
}

/// All spanning trees of `g`.
pub fn enumerate_spanning_trees(g: &Graph, budget: u128) -> Result<Vec<Tree>> {
    let n = g.n();
    let mut out = Vec::new();
    for_each_spanning_tree(g, budget, |edges| {
        out.push(Tree::from_parts_unchecked(n, (0..n).collect(), edges.to_vec()));
    })?;
    Ok(out)
}

fn leaf_count_of(n: usize, edges: &[Edge]) -> usize {
    let mut deg = vec![0u32; n];
    for &(u, v) in edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    deg.iter().filter(|&&d| d == 1).count()
}

/// Largest leaf count over all spanning trees of the connected graph `g`.
pub fn max_leaf_tree_bruteforce(g: &Graph) -> Result<usize> {
    let mut best = 0;
    for_each_spanning_tree(g, DEFAULT_TREE_BUDGET, |edges| {
        best = best.max(leaf_count_of(g.n(), edges));
    })?;
    Ok(best)
}

/// Spanning forest of `g` maximizing `|sum chi|` among those with at least
/// `alpha n` leaves, with that maximum. `None` when no spanning forest has
/// enough leaves.
pub fn max_discrepancy_forest_bruteforce(
    g: &Graph,
    chi: &EdgeColoring,
    alpha: f64,
) -> Result<Option<(SpanningForest, u64)>> {
    let n = g.n();
    // Per component: for each reachable sum, the most leaves and a witness.
    let mut table: Vec<(i64, usize, Vec<Vec<Edge>>)> = vec![(0, 0, Vec::new())];
    for comp in connected_components(g) {
        if comp.len() == 1 {
            continue;
        }
        let (sub, labels) = g.induced(&comp);
        let mut options: std::collections::BTreeMap<i64, (usize, Vec<Edge>)> = Default::default();
        let mut failure = None;
        for_each_spanning_tree(&sub, DEFAULT_TREE_BUDGET, |edges| {
            let host: Vec<Edge> = edges.iter().map(|&(a, b)| (labels[a], labels[b])).collect();
            let s = match signed_sum(&host, chi) {
                Ok(s) => s,
                Err(e) => {
                    failure.get_or_insert(e);
                    return;
                }
            };
            let leaves = leaf_count_of(sub.n(), edges);
            let slot = options.entry(s).or_insert((0, Vec::new()));
            if slot.1.is_empty() || leaves > slot.0 {
                *slot = (leaves, host);
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        let mut next: std::collections::BTreeMap<i64, (usize, Vec<Vec<Edge>>)> = Default::default();
        for (s0, l0, parts) in &table {
            for (s1, (l1, edges)) in &options {
                let key = s0 + s1;
                let leaves = l0 + l1;
                let better = next.get(&key).is_none_or(|(l, _)| leaves > *l);
                if better {
                    let mut p = parts.clone();
                    p.push(edges.clone());
                    next.insert(key, (leaves, p));
                }
            }
        }
        table = next.into_iter().map(|(s, (l, p))| (s, l, p)).collect();
    }
    let need = alpha * n as f64;
    let best = table
        .into_iter()
        .filter(|(_, leaves, _)| *leaves as f64 >= need)
        .max_by_key(|(s, _, _)| (s.unsigned_abs(), *s));
    let Some((s, _, parts)) = best else {
        return Ok(None);
    };
    let forest = SpanningForest::from_edges(n, parts.concat())?;
    Ok(Some((forest, s.unsigned_abs())))
}

/// Exhaustive search for a separating vertex set of size at most `k`.
/// Returns the smallest one in size, then lexicographic, order.
pub fn min_vertex_cut_bruteforce(g: &Graph, k: usize) -> Option<Vec<usize>> {
    let n = g.n();
    fn rec(g: &Graph, start: usize, size: usize, cur: &mut Vec<usize>) -> bool {
        if cur.len() == size {
            let mut removed = vec![false; g.n()];
            for &v in cur.iter() {
                removed[v] = true;
            }
            let rest: Vec<usize> = (0..g.n()).filter(|&v| !removed[v]).collect();
            return rest.len() >= 2 && !g.is_connected_on(&rest);
        }
        for v in start..g.n() {
            cur.push(v);
            if rec(g, v + 1, size, cur) {
                return true;
            }
            cur.pop();
        }
        false
    }
    for size in 0..=k.min(n.saturating_sub(2)) {
        let mut cur = Vec::new();
        if rec(g, 0, size, &mut cur) {
            return Some(cur);
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum AdversaryKind {
    UniformRandom,
    BalancedLocal,
    CutColoring,
    AdaptiveRecolor,
}

impl AdversaryKind {
    pub fn name(self) -> &'static str {
        match self {
            AdversaryKind::UniformRandom => "uniformRandom",
            AdversaryKind::BalancedLocal => "balancedLocal",
            AdversaryKind::CutColoring => "cutColoring",
            AdversaryKind::AdaptiveRecolor => "adaptiveRecolor",
        }
    }
}

impl std::str::FromStr for AdversaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniformRandom" | "uniform-random" | "uniform" => Ok(AdversaryKind::UniformRandom),
            "balancedLocal" | "balanced-local" | "balanced" => Ok(AdversaryKind::BalancedLocal),
            "cutColoring" | "cut-coloring" | "cut" => Ok(AdversaryKind::CutColoring),
            "adaptiveRecolor" | "adaptive-recolor" | "adaptive" => Ok(AdversaryKind::AdaptiveRecolor),
            other => Err(Error::InvalidParameter(format!("unknown adversary {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversarySpec {
    pub kind: AdversaryKind,
    pub seed: u64,
    /// Boost/recolour rounds; only used by `AdaptiveRecolor`.
    pub rounds: usize,
}

impl AdversarySpec {
    pub fn new(kind: AdversaryKind, seed: u64) -> Self {
        AdversarySpec { kind, seed, rounds: 1 }
    }

    pub fn adaptive(rounds: usize, seed: u64) -> Result<Self> {
        let spec = AdversarySpec {
            kind: AdversaryKind::AdaptiveRecolor,
            seed,
            rounds,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidParameter("adversary rounds must be at least 1".into()));
        }
        Ok(())
    }
}

/// Fraction of forest edges flipped per adaptive round.
pub const ADAPTIVE_FLIP_FRACTION: f64 = 0.1;

/// Colour `g` according to `spec`. `boost` is only used by the adaptive
/// adversary, which replays the boost against its own candidates.
pub fn make_coloring(g: &Graph, spec: &AdversarySpec, boost: &BoostParams) -> Result<EdgeColoring> {
    spec.validate()?;
    match spec.kind {
        AdversaryKind::UniformRandom => Ok(uniform_coloring(g, spec.seed)),
        AdversaryKind::BalancedLocal => Ok(balanced_local_coloring(g)),
        AdversaryKind::CutColoring => Ok(cut_coloring(g)),
        AdversaryKind::AdaptiveRecolor => adaptive_coloring(g, spec.seed, spec.rounds, boost),
    }
}

/// Independent fair signs.
pub fn uniform_coloring(g: &Graph, seed: u64) -> EdgeColoring {
    let mut rng = rng_from_seed(seed);
    EdgeColoring::from_fn(g, |_, _| if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus })
}

/// Greedy over edges in label order: each edge takes the sign that keeps the
/// running incident sums of its endpoints closest to zero, `+1` on ties.
pub fn balanced_local_coloring(g: &Graph) -> EdgeColoring {
    let mut imbalance = vec![0i64; g.n()];
    EdgeColoring::from_fn(g, |_, (u, v)| {
        let cost = |s: i64| (imbalance[u] + s).abs() + (imbalance[v] + s).abs();
        let sign = if cost(-1) < cost(1) { Sign::Minus } else { Sign::Plus };
        imbalance[u] += sign.value();
        imbalance[v] += sign.value();
        sign
    })
}

/// `+1` inside the first half `0..n/2` of the labels, `-1` elsewhere.
pub fn cut_coloring(g: &Graph) -> EdgeColoring {
    let half = g.n() / 2;
    EdgeColoring::from_fn(g, |_, (u, v)| if u < half && v < half { Sign::Plus } else { Sign::Minus })
}

/// Start from a uniform colouring; each round runs the boost and then flips
/// the smallest-labelled tenth of the forest's edges carrying the colour of
/// its signed sum. Returns the candidate on which the boost did worst.
pub fn adaptive_coloring(g: &Graph, seed: u64, rounds: usize, boost: &BoostParams) -> Result<EdgeColoring> {
    let mut chi = uniform_coloring(g, derive_seed(seed, 0));
    let mut best: Option<(u64, EdgeColoring)> = None;
    for _ in 0..rounds {
        let r = boost_forest(g, &chi, boost)?;
        if best.as_ref().is_none_or(|(v, _)| r.abs_discrepancy < *v) {
            best = Some((r.abs_discrepancy, chi.clone()));
        }
        let target = Sign::of(r.signed_sum);
        let flips = (ADAPTIVE_FLIP_FRACTION * r.forest.edges().len() as f64).ceil() as usize;
        let picked: Vec<Edge> = r
            .forest
            .edges()
            .iter()
            .copied()
            .filter(|&(u, v)| chi.get(u, v) == Some(target))
            .take(flips)
            .collect();
        for (u, v) in picked {
            chi.set(u, v, target.flip())?;
        }
    }
    Ok(best.map(|(_, c)| c).expect("at least one round"))
}

/// A connected graph on `n` vertices: `G(n, p)` with `p` drawn from
/// `[p_lo, p_hi]`, resampled until connected.
pub fn random_connected_graph(n: usize, p_lo: f64, p_hi: f64, seed: u64) -> Result<Graph> {
    use crate::generators::{gen_gnp, GnpParams};
    if n == 0 || !(0.0 < p_lo && p_lo <= p_hi && p_hi <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "cannot sample a connected graph with n = {n}, p in [{p_lo}, {p_hi}]"
        )));
    }
    let mut rng = rng_from_seed(seed);
    for attempt in 0..10_000u64 {
        let p = rng.gen_range(p_lo..=p_hi);
        let g = gen_gnp(&GnpParams::new(n, p, derive_seed(seed, attempt))?)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Ok(Graph::complete(n))
}

/// `count` connected graphs with vertex counts cycling through `sizes`.
pub fn connected_corpus(count: usize, sizes: &[usize], seed: u64) -> Result<Vec<Graph>> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("empty size list".into()));
    }
    (0..count)
        .map(|i| random_connected_graph(sizes[i % sizes.len()], 0.3, 0.8, derive_seed(seed, i as u64)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts() {
        assert_eq!(kirchhoff_count(&Graph::cycle(4)).unwrap(), 4);
        assert_eq!(kirchhoff_count(&Graph::complete(4)).unwrap(), 16);
        assert_eq!(kirchhoff_count(&Graph::complete(7)).unwrap(), 16807);
        assert_eq!(kirchhoff_count(&Graph::path(6)).unwrap(), 1);
        assert_eq!(kirchhoff_count(&Graph::empty(3)).unwrap(), 0);
        assert_eq!(enumerate_spanning_trees(&Graph::cycle(4), DEFAULT_TREE_BUDGET).unwrap().len(), 4);
        let k4 = enumerate_spanning_trees(&Graph::complete(4), DEFAULT_TREE_BUDGET).unwrap();
        assert_eq!(k4.len(), 16);
        let mut distinct: Vec<_> = k4.iter().map(|t| t.edges().to_vec()).collect();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 16);
        let p = Graph::path(5);
        let only = enumerate_spanning_trees(&p, DEFAULT_TREE_BUDGET).unwrap();
        assert_eq!(only.len(), 1);
        assert_eq!(only[0].edges(), p.edges());
        assert!(matches!(
            enumerate_spanning_trees(&Graph::complete(9), 1000),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn max_leaf_examples() {
        assert_eq!(max_leaf_tree_bruteforce(&Graph::complete(4)).unwrap(), 3);
        assert_eq!(max_leaf_tree_bruteforce(&Graph::path(6)).unwrap(), 2);
        assert_eq!(max_leaf_tree_bruteforce(&Graph::wheel(7)).unwrap(), 6);
    }

    #[test]
    fn max_discrepancy_examples() {
        let c4 = Graph::cycle(4);
        // Edges in order (0,1), (0,3), (1,2), (2,3).
        let chi = EdgeColoring::from_fn(&c4, |i, _| if i < 2 { Sign::Plus } else { Sign::Minus });
        // Every spanning tree keeps three of the four edges, so the sum is odd
        // and the best is 1.
        let (f, v) = max_discrepancy_forest_bruteforce(&c4, &chi, 0.0).unwrap().unwrap();
        assert_eq!(v, 1);
        assert_eq!(signed_sum(f.edges(), &chi).unwrap().unsigned_abs(), v);

        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
        let chi = EdgeColoring::constant(&g, Sign::Minus);
        let (f, v) = max_discrepancy_forest_bruteforce(&g, &chi, 0.0).unwrap().unwrap();
        assert_eq!(v, 6 - 3);
        f.validate_against(&g).unwrap();
        assert!(max_discrepancy_forest_bruteforce(&Graph::path(5), &EdgeColoring::constant(&Graph::path(5), Sign::Plus), 0.5)
            .unwrap()
            .is_none());
    }

    #[test]
    fn balanced_local_alternates_on_even_cycle() {
        let c6 = Graph::cycle(6);
        let chi = balanced_local_coloring(&c6);
        let mut incident = [0i64; 6];
        for ((u, v), s) in chi.iter() {
            incident[u] += s.value();
            incident[v] += s.value();
        }
        assert_eq!(incident, [0; 6]);
        for v in 0..6 {
            let a = chi.get(v, (v + 1) % 6).unwrap();
            let b = chi.get((v + 1) % 6, (v + 2) % 6).unwrap();
            assert_ne!(a, b);
        }
    }

    #[test]
    fn cut_coloring_rule() {
        let chi = cut_coloring(&Graph::complete(6));
        assert_eq!(chi.get(0, 2), Some(Sign::Plus));
        assert_eq!(chi.get(2, 3), Some(Sign::Minus));
        assert_eq!(chi.get(4, 5), Some(Sign::Minus));
    }

    #[test]
    fn uniform_is_reproducible() {
        let g = Graph::complete(30);
        assert_eq!(uniform_coloring(&g, 4), uniform_coloring(&g, 4));
        assert_ne!(uniform_coloring(&g, 4), uniform_coloring(&g, 5));
        assert!(uniform_coloring(&g, 4).total().abs() < 4 * 21);
    }

    #[test]
    fn bruteforce_cut_examples() {
        let mut edges = Vec::new();
        for a in 0..5 {
            for b in a + 1..5 {
                edges.push((a, b));
                edges.push((a + 4, b + 4));
            }
        }
        let g = Graph::from_edges_dedup(9, edges).unwrap();
        assert_eq!(min_vertex_cut_bruteforce(&g, 2), Some(vec![4]));
        assert_eq!(min_vertex_cut_bruteforce(&Graph::complete(6), 4), None);
        assert_eq!(min_vertex_cut_bruteforce(&Graph::empty(3), 1), Some(vec![]));
    }
}
