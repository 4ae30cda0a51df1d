//! Randomly perturbed dense graphs: small vertex cuts, d-connected
//! decompositions, conflict-graph matchings, separation-number certificates,
//! the two-clique sharpness instance, and a local-search tree maximizing
//! colour discrepancy.

use std::collections::VecDeque;

use rand::Rng as _;
use serde::Serialize;

use crate::coloring::{EdgeColoring, Sign};
use crate::discrepancy::{exchange, signed_sum};
use crate::error::{Error, Result};
use crate::forest::Tree;
use crate::generators::{gen_gnp, GnpParams};
use crate::graph::{canonical, connected_components, union_graphs, Edge, Graph};
use crate::leaf::spanning_tree_bfs;
use crate::matching::Matching;
use crate::rng::{derive_seed, rng_from_seed};

const BIG: i32 = i32::MAX / 4;

/// Vertex-split flow network: `in(x) = 2x`, `out(x) = 2x + 1`, a unit arc
/// `in(x) -> out(x)` per vertex and uncapacitated arcs `out(x) -> in(y)` per
/// edge direction.
struct SplitNet {
    n: usize,
    start: Vec<usize>,
    arcs: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<i32>,
    flow: Vec<i32>,
}

impl SplitNet {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut from = Vec::with_capacity(2 * n + 4 * g.m());
        let mut to = Vec::with_capacity(from.capacity());
        let mut cap = Vec::with_capacity(from.capacity());
        let mut add = |a: usize, b: usize, c: i32| {
            from.push(a);
            to.push(b);
            cap.push(c);
            from.push(b);
            to.push(a);
            cap.push(0);
        };
        for x in 0..n {
            add(2 * x, 2 * x + 1, 1);
        }
        for &(u, v) in g.edges() {
            add(2 * u + 1, 2 * v, BIG);
            add(2 * v + 1, 2 * u, BIG);
        }
        let nodes = 2 * n;
        let mut start = vec![0usize; nodes + 1];
        for &a in &from {
            start[a + 1] += 1;
        }
        for i in 0..nodes {
            start[i + 1] += start[i];
        }
        let mut fill = start.clone();
        let mut arcs = vec![0usize; from.len()];
        for (id, &a) in from.iter().enumerate() {
            arcs[fill[a]] = id;
            fill[a] += 1;
        }
        let flow = vec![0; to.len()];
        SplitNet {
            n,
            start,
            arcs,
            to,
            cap,
            flow,
        }
    }

    fn residual(&self, id: usize) -> i32 {
        self.cap[id] - self.flow[id]
    }

    /// Internally vertex-disjoint `s`-`t` paths, stopping at `limit`. When
    /// fewer than `limit` exist, also returns a minimum separating set.
    fn local_connectivity(&mut self, s: usize, t: usize, limit: usize) -> (usize, Option<Vec<usize>>) {
        self.flow.iter_mut().for_each(|f| *f = 0);
        let source = 2 * s + 1;
        let sink = 2 * t;
        let nodes = 2 * self.n;
        let mut pred = vec![usize::MAX; nodes];
        let mut paths = 0;
        while paths < limit {
            pred.iter_mut().for_each(|p| *p = usize::MAX);
            pred[source] = usize::MAX - 1;
            let mut queue = VecDeque::from([source]);
            let mut reached = false;
            'bfs: while let Some(a) = queue.pop_front() {
                for &id in &self.arcs[self.start[a]..self.start[a + 1]] {
                    let b = self.to[id];
                    if pred[b] == usize::MAX && self.residual(id) > 0 {
                        pred[b] = id;
                        if b == sink {
                            reached = true;
                            break 'bfs;
                        }
                        queue.push_back(b);
                    }
                }
            }
            if !reached {
                // `pred` now marks the residual-reachable set.
                let cut = (0..self.n)
                    .filter(|&x| x != s && x != t)
                    .filter(|&x| pred[2 * x] != usize::MAX && pred[2 * x + 1] == usize::MAX)
                    .collect();
                return (paths, Some(cut));
            }
            let mut b = sink;
            while b != source {
                let id = pred[b];
                self.flow[id] += 1;
                self.flow[id ^ 1] -= 1;
                b = self.to[id ^ 1];
            }
            paths += 1;
        }
        (paths, None)
    }
}

/// Union of `k` successive breadth-first spanning forests: a sparse subgraph
/// that is `k`-vertex-connected exactly when `g` is.
fn sparse_certificate(g: &Graph, k: usize) -> Graph {
    let n = g.n();
    let mut remaining: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).to_vec()).collect();
    let mut kept: Vec<Edge> = Vec::new();
    for _ in 0..k {
        let mut seen = vec![false; n];
        let mut taken: Vec<Edge> = Vec::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for &y in &remaining[x] {
                    if !seen[y] {
                        seen[y] = true;
                        taken.push(canonical(x, y));
                        queue.push_back(y);
                    }
                }
            }
        }
        if taken.is_empty() {
            break;
        }
        taken.sort_unstable();
        for list in remaining.iter_mut().enumerate() {
            let (x, l) = list;
            l.retain(|&y| taken.binary_search(&canonical(x, y)).is_err());
        }
        kept.extend(taken);
    }
    kept.sort_unstable();
    Graph::from_canonical_sorted(n, kept)
}

fn separates(g: &Graph, cut: &[usize]) -> bool {
    let mut removed = vec![false; g.n()];
    for &v in cut {
        removed[v] = true;
    }
    let rest: Vec<usize> = (0..g.n()).filter(|&v| !removed[v]).collect();
    rest.len() >= 2 && !g.is_connected_on(&rest)
}

/// Search `h` for a separating set of size at most `bound`, smallest first.
///
/// Among any `bound + 1` pivots one avoids a given small cut, so for each
/// pivot `v` we certify every other vertex as inseparable from `v`: either
/// directly by flow, or for free when it has `bound + 1` certified
/// neighbors (no `bound`-set can block all of them).
fn small_cut_in(h: &Graph, bound: usize) -> Option<Vec<usize>> {
    let n = h.n();
    let mut net = SplitNet::new(h);
    let mut best: Option<Vec<usize>> = None;
    let mut bound = bound;
    'restart: loop {
        let pivots = (bound + 1).min(n);
        for v in 0..pivots {
            let mut certified = vec![false; n];
            let mut count = vec![0usize; n];
            let mut queue: VecDeque<usize> = VecDeque::new();
            let admit = |x: usize, certified: &mut [bool], count: &mut [usize], queue: &mut VecDeque<usize>| {
                certified[x] = true;
                for &y in h.neighbors(x) {
                    count[y] += 1;
                    if !certified[y] && count[y] == bound + 1 {
                        queue.push_back(y);
                    }
                }
            };
            admit(v, &mut certified, &mut count, &mut queue);
            for &y in h.neighbors(v) {
                if !certified[y] {
                    admit(y, &mut certified, &mut count, &mut queue);
                }
            }
            let mut next_unresolved = 0;
            loop {
                while let Some(x) = queue.pop_front() {
                    if !certified[x] {
                        admit(x, &mut certified, &mut count, &mut queue);
                    }
                }
                while next_unresolved < n && certified[next_unresolved] {
                    next_unresolved += 1;
                }
                if next_unresolved == n {
                    break;
                }
                let t = next_unresolved;
                let (paths, cut) = net.local_connectivity(v, t, bound + 1);
                if paths > bound {
                    admit(t, &mut certified, &mut count, &mut queue);
                    continue;
                }
                let cut = cut.expect("fewer paths than the limit come with a cut");
                let size = cut.len();
                best = Some(cut);
                if size == 0 {
                    return best;
                }
                bound = size - 1;
                continue 'restart;
            }
        }
        return best;
    }
}

/// Smallest separating set of `g` with at most `bound` vertices, if any.
/// Works on any graph; a disconnected graph yields the empty set.
pub(crate) fn min_vertex_cut_bounded(g: &Graph, bound: usize) -> Option<Vec<usize>> {
    let n = g.n();
    if n < 2 {
        return None;
    }
    if !g.is_connected() {
        return Some(Vec::new());
    }
    if g.m() == n * (n - 1) / 2 {
        return None;
    }
    let sparse = if g.m() > (bound + 1) * n {
        Some(sparse_certificate(g, bound + 1))
    } else {
        None
    };
    if let Some(h) = &sparse {
        match small_cut_in(h, bound) {
            None => return None,
            Some(cut) if separates(g, &cut) => {
                // The certificate has no smaller cuts than `g`.
                return Some(cut);
            }
            Some(_) => {}
        }
    }
    small_cut_in(g, bound)
}

/// A separating set of at most `d` vertices of smallest size, or `None` when
/// `g` has no such cut. Requires more than `d + 1` vertices.
pub fn vertex_cut_upto(g: &Graph, d: usize) -> Result<Option<Vec<usize>>> {
    if g.n() <= d + 1 {
        return Err(Error::TooSmall(format!(
            "{} vertices cannot be tested for cuts of size {d}",
            g.n()
        )));
    }
    Ok(min_vertex_cut_bounded(g, d))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    /// Removed cut vertices, sorted.
    pub removed: Vec<usize>,
    /// Parts with no separating set of size at most `d`, each sorted, in
    /// decreasing size then smallest label.
    pub parts: Vec<Vec<usize>>,
}

/// Repeatedly remove vertex cuts of size at most `d` until every remaining
/// component has none.
pub fn d_connected_decomposition(g: &Graph, d: usize) -> Decomposition {
    let mut removed: Vec<usize> = Vec::new();
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut work: Vec<Vec<usize>> = connected_components(g);
    work.reverse();
    while let Some(set) = work.pop() {
        if set.len() <= 2 {
            parts.push(set);
            continue;
        }
        let (sub, labels) = g.induced(&set);
        match min_vertex_cut_bounded(&sub, d) {
            None => parts.push(set),
            Some(cut) => {
                let mut gone = vec![false; sub.n()];
                for &c in &cut {
                    gone[c] = true;
                    removed.push(labels[c]);
                }
                let rest: Vec<usize> = (0..sub.n()).filter(|&x| !gone[x]).collect();
                let (rest_graph, rest_labels) = sub.induced(&rest);
                let mut pieces = connected_components(&rest_graph);
                pieces.reverse();
                for piece in pieces {
                    let mut host: Vec<usize> = piece.iter().map(|&x| labels[rest_labels[x]]).collect();
                    host.sort_unstable();
                    work.push(host);
                }
            }
        }
    }
    removed.sort_unstable();
    parts.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    Decomposition { removed, parts }
}

/// No set of at most two vertices disconnects `g`. Requires four vertices.
pub fn is_three_connected(g: &Graph) -> Result<bool> {
    if g.n() < 4 {
        return Err(Error::TooSmall(format!(
            "3-connectivity needs at least 4 vertices, got {}",
            g.n()
        )));
    }
    Ok(min_vertex_cut_bounded(g, 2).is_none())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConflictContext {
    /// Vertices of `vi` with a neighbor in `vj`.
    pub s1: Vec<usize>,
    /// Pairs of `s1` with a common neighbor in `vj`; the edges of the
    /// conflict graph.
    pub gamma_edges: Vec<Edge>,
    /// An independent set of the conflict graph.
    pub independent_set: Vec<usize>,
}

impl ConflictContext {
    /// `|S1|^2 / (|S1| + 2 |E(Gamma)|)`.
    pub fn turan_bound(&self) -> f64 {
        let s = self.s1.len() as f64;
        if s == 0.0 {
            return 0.0;
        }
        s * s / (s + 2.0 * self.gamma_edges.len() as f64)
    }

    pub fn meets_turan_bound(&self) -> bool {
        self.independent_set.len() as f64 + 1e-9 >= self.turan_bound()
    }
}

/// Matching between `vi` and `vj` from an independent set of the conflict
/// graph: vertices of `vi` that share no `vj`-neighbor each keep their
/// smallest `vj`-neighbor.
pub fn conflict_matching(g: &Graph, vi: &[usize], vj: &[usize]) -> Result<(ConflictContext, Matching)> {
    let n = g.n();
    let mut side = vec![0u8; n];
    for &v in vi {
        side[v] = 1;
    }
    for &v in vj {
        if side[v] == 1 {
            return Err(Error::InvalidParameter(format!("vertex {v} lies on both sides")));
        }
        side[v] = 2;
    }
    let mut s1: Vec<usize> = vi
        .iter()
        .copied()
        .filter(|&v| g.neighbors(v).iter().any(|&w| side[w] == 2))
        .collect();
    s1.sort_unstable();
    s1.dedup();
    let mut gamma: Vec<Edge> = Vec::new();
    let mut vj_sorted = vj.to_vec();
    vj_sorted.sort_unstable();
    vj_sorted.dedup();
    for &w in &vj_sorted {
        let near: Vec<usize> = g.neighbors(w).iter().copied().filter(|&x| side[x] == 1).collect();
        for (i, &a) in near.iter().enumerate() {
            for &b in &near[i + 1..] {
                gamma.push(canonical(a, b));
            }
        }
    }
    gamma.sort_unstable();
    gamma.dedup();

    // Greedy minimum-degree independent set.
    let slot = |v: usize| s1.binary_search(&v).expect("conflict endpoint in S1");
    let k = s1.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
    for &(a, b) in &gamma {
        let (i, j) = (slot(a), slot(b));
        adj[i].push(j);
        adj[j].push(i);
    }
    let mut degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut alive = vec![true; k];
    let mut buckets: std::collections::BTreeSet<(usize, usize)> = (0..k).map(|i| (degree[i], i)).collect();
    let mut independent = Vec::new();
    while let Some((_, i)) = buckets.pop_first() {
        independent.push(s1[i]);
        alive[i] = false;
        let mut dropped = Vec::new();
        for &j in &adj[i] {
            if alive[j] {
                alive[j] = false;
                buckets.remove(&(degree[j], j));
                dropped.push(j);
            }
        }
        for j in dropped {
            for &x in &adj[j] {
                if alive[x] {
                    buckets.remove(&(degree[x], x));
                    degree[x] -= 1;
                    buckets.insert((degree[x], x));
                }
            }
        }
    }
    independent.sort_unstable();

    let pairs: Vec<(usize, usize)> = independent
        .iter()
        .map(|&a| {
            let b = *g
                .neighbors(a)
                .iter()
                .find(|&&w| side[w] == 2)
                .expect("S1 vertex has a neighbor across");
            (a, b)
        })
        .collect();
    let ctx = ConflictContext {
        s1,
        gamma_edges: gamma,
        independent_set: independent,
    };
    assert!(ctx.meets_turan_bound(), "greedy independent set below the Turan bound");
    let matching = Matching { pairs };
    debug_assert!(matching.is_valid_in(g));
    Ok((ctx, matching))
}

pub const SEPARATION_EXACT_LIMIT: usize = 14;

/// Minimum `|S|` over partitions `V = V1 ∪ V2 ∪ S` with `|V1| = |V2|` and no
/// edge between `V1` and `V2`, by enumerating `V1`.
pub fn separation_number_exact(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > SEPARATION_EXACT_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: SEPARATION_EXACT_LIMIT,
        });
    }
    let closed: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(1u32 << v, |m, &w| m | (1 << w)))
        .collect();
    let full: u32 = if n == 0 { 0 } else { (1u32 << n) - 1 };
    let mut best = 0usize;
    for mask in 1..=full {
        let size = mask.count_ones() as usize;
        if size <= best || 2 * size > n {
            continue;
        }
        let mut blocked = 0u32;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            blocked |= closed[v];
            rest &= rest - 1;
        }
        if (full & !blocked).count_ones() as usize >= size {
            best = size;
        }
    }
    Ok(n - 2 * best)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PerturbParams {
    pub alpha: f64,
    pub p: f64,
    /// Connectivity parameter, `p alpha^2 n^2 / 16` by default.
    pub d: f64,
    pub c1: f64,
    /// `c1 alpha^2 / 32`.
    pub lambda: f64,
}

pub const DEFAULT_C1: f64 = 1.0;

impl PerturbParams {
    pub fn new(n: usize, alpha: f64, p: f64, c1: f64) -> Result<Self> {
        let nn = n as f64;
        let params = PerturbParams {
            alpha,
            p,
            d: p * alpha * alpha * nn * nn / 16.0,
            c1,
            lambda: c1 * alpha * alpha / 32.0,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_d(mut self, d: f64) -> Result<Self> {
        self.d = d;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha {} outside (0, 1)", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(format!("p {} outside [0, 1]", self.p)));
        }
        if !(self.d > 0.0 && self.d.is_finite()) {
            return Err(Error::InvalidParameter(format!("d {} must be positive", self.d)));
        }
        if !(self.c1 > 0.0 && self.c1.is_finite()) {
            return Err(Error::InvalidParameter(format!("C1 {} must be positive", self.c1)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SeparationCertificate {
    pub valid: bool,
    pub reason: Option<String>,
    pub d: f64,
    #[serde(skip)]
    pub removed: Vec<usize>,
    #[serde(skip)]
    pub parts: Vec<Vec<usize>>,
    pub u_size: usize,
    pub part_sizes: Vec<usize>,
    /// Conflict matching size per part pair `(i, j)`, `i < j`, row-major.
    pub matching_sizes: Vec<usize>,
    pub certified_bound: usize,
}

impl SeparationCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

/// Lower bound on `s(g)` from a d-connected decomposition whose parts are
/// large, few, and pairwise joined by matchings of size `2d`.
pub fn certify_separation_bound(g: &Graph, params: &PerturbParams) -> Result<SeparationCertificate> {
    params.validate()?;
    let n = g.n() as f64;
    let d = params.d;
    let dec = d_connected_decomposition(g, d.floor() as usize);
    let part_sizes: Vec<usize> = dec.parts.iter().map(Vec::len).collect();
    let mut cert = SeparationCertificate {
        valid: false,
        reason: None,
        d,
        u_size: dec.removed.len(),
        part_sizes,
        matching_sizes: Vec::new(),
        certified_bound: 0,
        removed: dec.removed,
        parts: dec.parts,
    };
    let fail = |mut c: SeparationCertificate, why: String| {
        c.reason = Some(why);
        Ok(c)
    };
    let min_part = params.alpha * n / 2.0;
    if let Some(small) = cert.part_sizes.iter().find(|&&s| (s as f64) < min_part) {
        return fail(cert.clone(), format!("part of size {small} below alpha n / 2 = {min_part}"));
    }
    let q = cert.parts.len() as f64;
    if q > 2.0 / params.alpha {
        return fail(cert.clone(), format!("{q} parts exceed 2 / alpha"));
    }
    for i in 0..cert.parts.len() {
        for j in i + 1..cert.parts.len() {
            let (_, m) = conflict_matching(g, &cert.parts[i], &cert.parts[j])?;
            cert.matching_sizes.push(m.size());
        }
    }
    if let Some(pos) = cert.matching_sizes.iter().position(|&s| (s as f64) < 2.0 * d) {
        let size = cert.matching_sizes[pos];
        return fail(cert.clone(), format!("part pair matching of size {size} below 2d = {}", 2.0 * d));
    }
    if (n - d / 2.0) / 2.0 <= cert.u_size as f64 {
        let u = cert.u_size;
        return fail(cert.clone(), format!("{u} removed vertices reach (n - d/2) / 2"));
    }
    cert.valid = true;
    cert.certified_bound = (d / 2.0).ceil() as usize;
    Ok(cert)
}

/// Two disjoint cliques `A = 0..n/2` and `B = n/2..n` united with
/// `G(n, p)`. Edges inside `A` are `+1`, every other edge `-1`.
pub fn sharpness_instance(n: usize, alpha: f64, p: f64, seed: u64) -> Result<(Graph, EdgeColoring)> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidParameter(format!("alpha {alpha} outside (0, 1/2)")));
    }
    let half = n / 2;
    let need = (alpha * n as f64).ceil() as usize;
    if half == 0 || half - 1 < need {
        return Err(Error::InvalidParameter(format!(
            "cliques of size {half} cannot have minimum degree {need}"
        )));
    }
    let mut base = Vec::with_capacity(half * half);
    for (lo, hi) in [(0, half), (half, n)] {
        for u in lo..hi {
            for v in u + 1..hi {
                base.push((u, v));
            }
        }
    }
    let base = Graph::from_canonical_sorted(n, base);
    let noise = gen_gnp(&GnpParams::new(n, p, seed)?)?;
    let g = union_graphs(&base, &noise)?;
    let chi = EdgeColoring::from_fn(&g, |_, (u, v)| if u < half && v < half { Sign::Plus } else { Sign::Minus });
    Ok((g, chi))
}

#[derive(Clone, Debug)]
pub struct LocalSearchResult {
    pub tree: Tree,
    pub initial_sum: i64,
    pub signed_sum: i64,
    pub abs_discrepancy: u64,
    pub swaps: usize,
    pub steps: usize,
    pub leaf_count: usize,
}

/// Rooted tree with parent pointers and depths for cycle walks.
struct Rooted {
    adj: Vec<Vec<usize>>,
    parent: Vec<usize>,
    depth: Vec<usize>,
}

impl Rooted {
    fn new(n: usize, edges: &[Edge]) -> Self {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut r = Rooted {
            adj,
            parent: vec![usize::MAX; n],
            depth: vec![0; n],
        };
        r.reroot();
        r
    }

    fn reroot(&mut self) {
        let n = self.adj.len();
        self.parent.iter_mut().for_each(|p| *p = usize::MAX);
        let mut seen = vec![false; n];
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            self.depth[root] = 0;
            let mut stack = vec![root];
            while let Some(x) = stack.pop() {
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        self.parent[y] = x;
                        self.depth[y] = self.depth[x] + 1;
                        stack.push(y);
                    }
                }
            }
        }
    }

    /// First edge on the tree path `u .. v` satisfying `pick`, walking up
    /// from the deeper endpoint.
    fn path_edge<F: Fn(usize, usize) -> bool>(&self, mut u: usize, mut v: usize, pick: F) -> Option<Edge> {
        while u != v {
            if self.depth[u] < self.depth[v] {
                std::mem::swap(&mut u, &mut v);
            }
            let p = self.parent[u];
            if pick(u, p) {
                return Some(canonical(u, p));
            }
            u = p;
        }
        None
    }

    fn exchange(&mut self, remove: Edge, add: Edge) {
        let (a, b) = remove;
        self.adj[a].retain(|&x| x != b);
        self.adj[b].retain(|&x| x != a);
        self.adj[add.0].push(add.1);
        self.adj[add.1].push(add.0);
        self.reroot();
    }
}

/// Local search for a spanning tree of `h` with large `|sum chi|`: from a
/// random breadth-first tree, sample non-tree edges of the leading colour
/// and swap each for an opposite-coloured edge on its tree cycle. Every
/// accepted swap raises `|sum|` by two.
pub fn perturbed_discrepancy_tree(
    h: &Graph,
    chi: &EdgeColoring,
    max_steps: usize,
    seed: u64,
) -> Result<LocalSearchResult> {
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = h.n();
    let all: Vec<usize> = (0..n).collect();
    let start = spanning_tree_bfs(h, &all, derive_seed(seed, 1))?;
    let mut edges = start.edges().to_vec();
    let initial_sum = signed_sum(&edges, chi)?;
    let lead = Sign::of(initial_sum);
    let pool: Vec<Edge> = chi
        .iter()
        .filter(|&((u, v), s)| s == lead && h.has_edge(u, v))
        .map(|(e, _)| e)
        .collect();
    let mut rooted = Rooted::new(n, &edges);
    let mut rng = rng_from_seed(derive_seed(seed, 2));
    let mut sum = initial_sum;
    let mut swaps = 0;
    let mut steps = 0;
    while steps < max_steps && !pool.is_empty() {
        steps += 1;
        let (u, v) = pool[rng.gen_range(0..pool.len())];
        if edges.binary_search(&(u, v)).is_ok() {
            continue;
        }
        let hit = rooted.path_edge(u, v, |a, b| chi.get(a, b) == Some(lead.flip()));
        if let Some(out) = hit {
            exchange(&mut edges, out, (u, v));
            rooted.exchange(out, (u, v));
            let before = sum.unsigned_abs();
            sum += 2 * lead.value();
            debug_assert!(sum.unsigned_abs() > before);
            swaps += 1;
        }
    }
    let tree = Tree::new(n, all, edges)?;
    debug_assert_eq!(signed_sum(tree.edges(), chi)?, sum);
    Ok(LocalSearchResult {
        leaf_count: tree.leaf_count(),
        tree,
        initial_sum,
        signed_sum: sum,
        abs_discrepancy: sum.unsigned_abs(),
        swaps,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::min_vertex_cut_bruteforce;

    fn two_cliques_sharing(k: usize) -> Graph {
        let mut edges = Vec::new();
        for a in 0..k {
            for b in a + 1..k {
                edges.push((a, b));
                edges.push((a + k - 1, b + k - 1));
            }
        }
        Graph::from_edges_dedup(2 * k - 1, edges).unwrap()
    }

    fn cliques_joined_by_edge(k: usize) -> Graph {
        let mut edges = vec![(k - 1, k)];
        for a in 0..k {
            for b in a + 1..k {
                edges.push((a, b));
                edges.push((a + k, b + k));
            }
        }
        Graph::from_edges(2 * k, edges).unwrap()
    }

    #[test]
    fn cut_examples() {
        assert_eq!(vertex_cut_upto(&two_cliques_sharing(5), 1).unwrap(), Some(vec![4]));
        assert_eq!(vertex_cut_upto(&Graph::complete(6), 4).unwrap(), None);
        assert!(vertex_cut_upto(&Graph::complete(3), 2).is_err());
        assert_eq!(vertex_cut_upto(&Graph::cycle(8), 2).unwrap().map(|c| c.len()), Some(2));
    }

    #[test]
    fn cuts_agree_with_exhaustive_search() {
        for seed in 0..40 {
            let g = crate::oracles::random_connected_graph(20, 0.12, 0.3, seed).unwrap();
            let fast = vertex_cut_upto(&g, 2).unwrap();
            let slow = min_vertex_cut_bruteforce(&g, 2);
            assert_eq!(fast.as_ref().map(Vec::len), slow.as_ref().map(Vec::len), "seed {seed}");
            if let Some(cut) = fast {
                assert!(separates(&g, &cut));
            }
        }
    }

    #[test]
    fn sparse_certificate_path_agrees() {
        // Dense enough that the certificate is used.
        for seed in 0..10 {
            let g = crate::oracles::random_connected_graph(24, 0.5, 0.7, seed).unwrap();
            let fast = min_vertex_cut_bounded(&g, 1);
            assert_eq!(fast.map(|c| c.len()), min_vertex_cut_bruteforce(&g, 1).map(|c| c.len()));
            let h = sparse_certificate(&g, 3);
            assert!(h.m() <= 3 * g.n());
            assert_eq!(
                min_vertex_cut_bruteforce(&h, 2).is_some(),
                min_vertex_cut_bruteforce(&g, 2).is_some()
            );
        }
    }

    #[test]
    fn decomposition_examples() {
        let g = cliques_joined_by_edge(10);
        let dec = d_connected_decomposition(&g, 2);
        assert_eq!(dec.removed.len(), 1);
        assert!(dec.removed == vec![9] || dec.removed == vec![10]);
        let sizes: Vec<usize> = dec.parts.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![10, 9]);

        let k = Graph::complete(8);
        let dec = d_connected_decomposition(&k, 5);
        assert!(dec.removed.is_empty());
        assert_eq!(dec.parts, vec![(0..8).collect::<Vec<_>>()]);
    }

    #[test]
    fn three_connectivity() {
        assert!(is_three_connected(&Graph::complete(4)).unwrap());
        assert!(!is_three_connected(&Graph::cycle(6)).unwrap());
        assert!(is_three_connected(&Graph::wheel(7)).unwrap());
        assert!(is_three_connected(&Graph::path(3)).is_err());
    }

    #[test]
    fn conflict_matching_examples() {
        // Perfect cross matching, no shared neighbors.
        let g = Graph::from_edges(6, [(0, 3), (1, 4), (2, 5)]).unwrap();
        let (ctx, m) = conflict_matching(&g, &[0, 1, 2], &[3, 4, 5]).unwrap();
        assert!(ctx.gamma_edges.is_empty());
        assert_eq!(m.size(), 3);
        // Star across: everything conflicts, one survivor.
        let g = Graph::from_edges(4, [(0, 3), (1, 3), (2, 3)]).unwrap();
        let (ctx, m) = conflict_matching(&g, &[0, 1, 2], &[3]).unwrap();
        assert_eq!(ctx.gamma_edges.len(), 3);
        assert_eq!(m.pairs, vec![(0, 3)]);
        assert!(ctx.meets_turan_bound());
        let ctx = ConflictContext {
            s1: (0..10).collect(),
            gamma_edges: (0..5).map(|i| (2 * i, 2 * i + 1)).collect(),
            independent_set: vec![],
        };
        assert_eq!(ctx.turan_bound(), 5.0);
    }

    #[test]
    fn separation_examples() {
        let two_k3 = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(separation_number_exact(&two_k3).unwrap(), 0);
        assert_eq!(separation_number_exact(&Graph::complete(4)).unwrap(), 4);
        assert_eq!(separation_number_exact(&Graph::path(4)).unwrap(), 2);
        assert_eq!(separation_number_exact(&Graph::empty(5)).unwrap(), 1);
        assert!(separation_number_exact(&Graph::empty(15)).is_err());
    }

    #[test]
    fn certificate_on_disconnected_base_fails() {
        let (g, _) = crate::generators::dense_base(60, 0.3, crate::generators::DenseFamily::CliqueUnion, 0).unwrap();
        let params = PerturbParams::new(60, 0.3, 0.01, DEFAULT_C1).unwrap().with_d(1.0).unwrap();
        let cert = certify_separation_bound(&g, &params).unwrap();
        assert!(!cert.valid);
        assert!(cert.reason.as_deref().unwrap().contains("matching"));
        assert_eq!(cert.certified_bound, 0);
        let json = cert.to_json();
        assert!(json.contains("\"certifiedBound\":0"));
    }

    #[test]
    fn sharpness_shape() {
        let (g, chi) = sharpness_instance(200, 0.3, 0.001, 3).unwrap();
        assert!(g.min_degree() >= 60);
        assert_eq!(chi.get(0, 99), Some(Sign::Plus));
        assert_eq!(chi.get(100, 199), Some(Sign::Minus));
        assert!(sharpness_instance(200, 0.5, 0.001, 3).is_err());
    }

    #[test]
    fn local_search_monotone_and_valid() {
        let g = crate::oracles::random_connected_graph(40, 0.15, 0.3, 1).unwrap();
        let chi = crate::oracles::uniform_coloring(&g, 2);
        let r = perturbed_discrepancy_tree(&g, &chi, 2000, 3).unwrap();
        assert!(r.abs_discrepancy >= r.initial_sum.unsigned_abs());
        assert_eq!(r.abs_discrepancy, r.initial_sum.unsigned_abs() + 2 * r.swaps as u64);
        assert!(r.tree.is_subgraph_of(&g));
        let mono = EdgeColoring::constant(&g, Sign::Plus);
        let r = perturbed_discrepancy_tree(&g, &mono, 100, 3).unwrap();
        assert_eq!((r.abs_discrepancy, r.swaps), (39, 0));
    }
}
