//! Random graph generators and the giant-component fixed point.

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::graph::{canonical, Edge, Graph};
use crate::rng::rng_from_seed;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GnpParams {
    pub n: usize,
    pub p: f64,
    pub seed: u64,
}

impl GnpParams {
    pub fn new(n: usize, p: f64, seed: u64) -> Result<Self> {
        let params = GnpParams { n, p, seed };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(format!(
                "edge probability {} outside [0, 1]",
                self.p
            )));
        }
        Ok(())
    }

    /// Mean degree parameter `C` in `p = C / n`.
    pub fn mean_degree(&self) -> f64 {
        self.p * self.n as f64
    }
}

/// Binomial random graph `G(n, p)`.
///
/// Walks the pair sequence `(0,1), (0,2), (1,2), (0,3), ...` with geometric
/// skips, so the expected work is proportional to the number of edges.
pub fn gen_gnp(params: &GnpParams) -> Result<Graph> {
    params.validate()?;
    let GnpParams { n, p, seed } = *params;
    if p <= 0.0 || n < 2 {
        return Ok(Graph::empty(n));
    }
    if p >= 1.0 {
        return Ok(Graph::complete(n));
    }
    let mut rng = rng_from_seed(seed);
    let log_q = (1.0 - p).ln();
    let mut edges: Vec<Edge> = Vec::new();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / log_q).floor();
        // Clamp absurd skips (r extremely close to 1) to "past the end".
        let skip = if skip.is_finite() && skip < (n as f64) * (n as f64) {
            skip as i64
        } else {
            i64::MAX / 4
        };
        w += 1 + skip;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_canonical_sorted(n, edges))
}

/// Uniform random graph with exactly `m` edges.
pub fn gen_gnm(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let total = n * n.saturating_sub(1) / 2;
    if m > total {
        return Err(Error::InvalidParameter(format!(
            "m = {m} exceeds the {total} available pairs"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges: Vec<Edge> = index::sample(&mut rng, total, m)
        .into_iter()
        .map(pair_from_index)
        .collect();
    edges.sort_unstable();
    Ok(Graph::from_canonical_sorted(n, edges))
}

/// Inverse of the colexicographic pair numbering `k = v(v-1)/2 + u`, `u < v`.
fn pair_from_index(k: usize) -> Edge {
    let mut v = ((((8 * k + 1) as f64).sqrt() + 1.0) / 2.0).floor() as usize;
    while v * (v - 1) / 2 > k {
        v -= 1;
    }
    while (v + 1) * v / 2 <= k {
        v += 1;
    }
    (k - v * (v - 1) / 2, v)
}

/// Root in `(0, 1)` of `rho = exp(-c (1 - rho))`: the extinction probability of a
/// Poisson(`c`) branching process, so `(1 - rho) n` is the giant component size
/// of `G(n, c/n)`. Bisection until the residual is at most `tol`.
pub fn rho_fixed_point(c: f64, tol: f64) -> Result<f64> {
    if !(c.is_finite() && c > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "mean degree {c} must exceed 1 for a nontrivial fixed point"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be positive"
        )));
    }
    // f < 0 on [0, rho*) and f > 0 on (rho*, 1); f(1) = 0 is the trivial root.
    let f = |r: f64| r - (-c * (1.0 - r)).exp();
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut mid = 0.5;
    for _ in 0..2000 {
        mid = 0.5 * (lo + hi);
        let val = f(mid);
        if val.abs() <= tol {
            return Ok(mid);
        }
        if val < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON * mid.max(f64::MIN_POSITIVE) {
            break;
        }
    }
    Ok(mid)
}

pub const DEFAULT_RHO_TOL: f64 = 1e-12;

/// Families of dense base graphs with minimum degree at least `alpha * n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DenseFamily {
    /// Disjoint cliques of size at least `ceil(alpha n) + 1`.
    CliqueUnion,
    /// Blow-up of a cycle (or complete graph) with balanced blobs.
    BlowUp,
    /// Random graph of density about `2 alpha`, patched up to the degree bound.
    Random,
}

/// A dense base graph with `min_degree >= ceil(alpha n)`, together with the
/// vertex blocks it was built from (cliques, blobs, or one block).
pub fn dense_base(
    n: usize,
    alpha: f64,
    family: DenseFamily,
    seed: u64,
) -> Result<(Graph, Vec<Vec<usize>>)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha {alpha} outside (0, 1)"
        )));
    }
    let need = (alpha * n as f64).ceil() as usize;
    if need + 1 > n {
        return Err(Error::InvalidParameter(format!(
            "minimum degree {need} impossible on {n} vertices"
        )));
    }
    match family {
        DenseFamily::CliqueUnion => {
            let q = (n / (need + 1)).max(1);
            let blocks = balanced_blocks(n, q);
            let mut edges = Vec::new();
            for b in &blocks {
                for (i, &u) in b.iter().enumerate() {
                    for &v in &b[i + 1..] {
                        edges.push((u, v));
                    }
                }
            }
            edges.sort_unstable();
            Ok((Graph::from_canonical_sorted(n, edges), blocks))
        }
        DenseFamily::BlowUp => {
            // Cycle template C_k: each vertex sees its own blob and the two
            // neighboring blobs, degree about 3n/k - 1.
            let k = ((3.0 / alpha).floor() as usize).max(1);
            let mut k = k.min(n);
            loop {
                let blocks = balanced_blocks(n, k);
                let smallest = blocks.iter().map(Vec::len).min().unwrap_or(0);
                let deg = if k <= 3 { n - 1 } else { 3 * smallest - 1 };
                if deg >= need || k <= 3 {
                    let mut edges = Vec::new();
                    for i in 0..k {
                        let near: Vec<usize> = if k <= 3 {
                            (0..k).collect()
                        } else {
                            vec![(i + k - 1) % k, i, (i + 1) % k]
                        };
                        for &u in &blocks[i] {
                            for &j in &near {
                                for &v in &blocks[j] {
                                    if u < v {
                                        edges.push((u, v));
                                    }
                                }
                            }
                        }
                    }
                    edges.sort_unstable();
                    edges.dedup();
                    return Ok((Graph::from_canonical_sorted(n, edges), blocks));
                }
                k -= 1;
            }
        }
        DenseFamily::Random => {
            let p0 = (2.0 * alpha).min(1.0);
            let base = gen_gnp(&GnpParams::new(n, p0, seed)?)?;
            let mut rng = rng_from_seed(seed ^ 0xD1B5_4A32_D192_ED03);
            let mut adj: Vec<Vec<bool>> = vec![vec![false; n]; n];
            let mut deg = vec![0usize; n];
            for &(u, v) in base.edges() {
                adj[u][v] = true;
                adj[v][u] = true;
                deg[u] += 1;
                deg[v] += 1;
            }
            let mut order: Vec<usize> = (0..n).collect();
            for v in 0..n {
                if deg[v] >= need {
                    continue;
                }
                order.shuffle(&mut rng);
                for &w in &order {
                    if deg[v] >= need {
                        break;
                    }
                    if w != v && !adj[v][w] {
                        adj[v][w] = true;
                        adj[w][v] = true;
                        deg[v] += 1;
                        deg[w] += 1;
                    }
                }
            }
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if adj[u][v] {
                        edges.push(canonical(u, v));
                    }
                }
            }
            Ok((
                Graph::from_canonical_sorted(n, edges),
                vec![(0..n).collect()],
            ))
        }
    }
}

/// Split `0..n` into `q` contiguous blocks whose sizes differ by at most one.
pub fn balanced_blocks(n: usize, q: usize) -> Vec<Vec<usize>> {
    let q = q.max(1).min(n.max(1));
    let base = n / q;
    let extra = n % q;
    let mut out = Vec::with_capacity(q);
    let mut start = 0;
    for i in 0..q {
        let len = base + usize::from(i < extra);
        out.push((start..start + len).collect());
        start += len;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_extremes() {
        let g = gen_gnp(&GnpParams::new(5, 0.0, 1).unwrap()).unwrap();
        assert_eq!((g.n(), g.m()), (5, 0));
        let g = gen_gnp(&GnpParams::new(5, 1.0, 1).unwrap()).unwrap();
        assert_eq!(g.m(), 10);
        assert!(GnpParams::new(5, 1.5, 1).is_err());
        assert!(GnpParams::new(0, 0.5, 1).is_err());
    }

    #[test]
    fn gnp_edge_count_concentrates() {
        let n = 10_000;
        let p = 2.0 / n as f64;
        let g = gen_gnp(&GnpParams::new(n, p, 7).unwrap()).unwrap();
        let pairs = (n * (n - 1) / 2) as f64;
        let mean = pairs * p;
        let sd = (pairs * p * (1.0 - p)).sqrt();
        assert!((g.m() as f64 - mean).abs() <= 3.0 * sd, "m = {}", g.m());
        assert!(g.check_invariants());
    }

    #[test]
    fn gnp_is_deterministic() {
        let a = gen_gnp(&GnpParams::new(500, 0.02, 11).unwrap()).unwrap();
        let b = gen_gnp(&GnpParams::new(500, 0.02, 11).unwrap()).unwrap();
        let c = gen_gnp(&GnpParams::new(500, 0.02, 12).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn gnp_pair_frequencies_are_uniform() {
        // Every pair of a 6-vertex graph should appear with frequency ~p.
        let trials = 4000;
        let p = 0.3;
        let mut hits = [[0u32; 6]; 6];
        for s in 0..trials {
            let g = gen_gnp(&GnpParams::new(6, p, s).unwrap()).unwrap();
            for &(u, v) in g.edges() {
                hits[u][v] += 1;
            }
        }
        let sd = (trials as f64 * p * (1.0 - p)).sqrt();
        for u in 0..6 {
            for v in u + 1..6 {
                let dev = (hits[u][v] as f64 - trials as f64 * p).abs();
                assert!(dev < 4.5 * sd, "pair ({u},{v}) hit {}", hits[u][v]);
            }
        }
    }

    #[test]
    fn gnm_examples() {
        assert_eq!(gen_gnm(4, 6, 0).unwrap(), Graph::complete(4));
        assert_eq!(gen_gnm(4, 0, 0).unwrap().m(), 0);
        let g = gen_gnm(6, 5, 3).unwrap();
        assert_eq!(g.m(), 5);
        assert!(g.check_invariants());
        assert!(gen_gnm(4, 7, 0).is_err());
    }

    #[test]
    fn pair_index_roundtrip() {
        let mut k = 0;
        for v in 1..60 {
            for u in 0..v {
                assert_eq!(pair_from_index(k), (u, v));
                k += 1;
            }
        }
    }

    #[test]
    fn rho_values() {
        let r2 = rho_fixed_point(2.0, 1e-10).unwrap();
        assert!((r2 - (-2.0 * (1.0 - r2)).exp()).abs() <= 1e-10);
        assert!((r2 - 0.2032).abs() < 1e-4);
        let r10 = rho_fixed_point(10.0, 1e-10).unwrap();
        assert!(r10 < 1e-4 && r10 > 0.0);
        assert!((r10 - (-10.0 * (1.0 - r10)).exp()).abs() <= 1e-10);
        let rs: Vec<f64> = [2.0, 3.0, 5.0, 10.0]
            .iter()
            .map(|&c| rho_fixed_point(c, 1e-12).unwrap())
            .collect();
        assert!(rs.windows(2).all(|w| w[0] > w[1]));
        assert!(rho_fixed_point(1.0, 1e-10).is_err());
        assert!(rho_fixed_point(0.5, 1e-10).is_err());
        assert!(rho_fixed_point(2.0, 0.0).is_err());
    }

    #[test]
    fn dense_families_meet_min_degree() {
        for family in [DenseFamily::CliqueUnion, DenseFamily::BlowUp, DenseFamily::Random] {
            for &(n, alpha) in &[(60usize, 0.3f64), (100, 0.2), (50, 0.45)] {
                let (g, blocks) = dense_base(n, alpha, family, 5).unwrap();
                let need = (alpha * n as f64).ceil() as usize;
                assert!(g.min_degree() >= need, "{family:?} n={n} alpha={alpha}");
                assert_eq!(blocks.iter().map(Vec::len).sum::<usize>(), n);
                assert!(g.check_invariants());
            }
        }
    }
}
