//! Maximum bipartite matching between two disjoint vertex sets of a graph.

use std::collections::VecDeque;

use crate::graph::Graph;

/// Vertex-disjoint edges, each stored as `(a, b)` with `a` from the first
/// side and `b` from the second.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    /// No vertex is used twice and every pair is a host edge.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut used = vec![false; g.n()];
        for &(a, b) in &self.pairs {
            if a >= g.n() || b >= g.n() || used[a] || used[b] || !g.has_edge(a, b) {
                return false;
            }
            used[a] = true;
            used[b] = true;
        }
        true
    }
}

const FREE: usize = usize::MAX;

/// Maximum-cardinality matching in the bipartite subgraph of `g` between
/// `v1` and `v2` (Hopcroft–Karp). Deterministic given the input order.
/// Vertices present in both sets are ignored on the second side.
pub fn max_bipartite_matching(g: &Graph, v1: &[usize], v2: &[usize]) -> Matching {
    let n = g.n();
    let mut right_slot = vec![FREE; n];
    for (j, &v) in v2.iter().enumerate() {
        if right_slot[v] == FREE {
            right_slot[v] = j;
        }
    }
    let mut in_left = vec![false; n];
    for &v in v1 {
        in_left[v] = true;
    }
    for &v in v1 {
        right_slot[v] = FREE;
    }
    let left: Vec<usize> = {
        let mut seen = vec![false; n];
        v1.iter().copied().filter(|&v| !std::mem::replace(&mut seen[v], true)).collect()
    };
    let adj: Vec<Vec<usize>> = left
        .iter()
        .map(|&u| {
            g.neighbors(u)
                .iter()
                .filter_map(|&w| (right_slot[w] != FREE).then_some(right_slot[w]))
                .collect()
        })
        .collect();

    let (l, r) = (left.len(), v2.len());
    let mut match_l = vec![FREE; l];
    let mut match_r = vec![FREE; r];
    let mut dist = vec![0usize; l];

    loop {
        // Layered BFS from free left vertices.
        let mut queue = VecDeque::new();
        for i in 0..l {
            if match_l[i] == FREE {
                dist[i] = 0;
                queue.push_back(i);
            } else {
                dist[i] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(i) = queue.pop_front() {
            for &j in &adj[i] {
                let k = match_r[j];
                if k == FREE {
                    found = true;
                } else if dist[k] == usize::MAX {
                    dist[k] = dist[i] + 1;
                    queue.push_back(k);
                }
            }
        }
        if !found {
            break;
        }
        let mut iter = vec![0usize; l];
        for i in 0..l {
            if match_l[i] == FREE {
                augment(i, &adj, &mut match_l, &mut match_r, &mut dist, &mut iter);
            }
        }
    }

    let mut pairs: Vec<(usize, usize)> = (0..l)
        .filter(|&i| match_l[i] != FREE)
        .map(|i| (left[i], v2[match_l[i]]))
        .collect();
    pairs.sort_unstable();
    Matching { pairs }
}

/// Iterative DFS along the BFS layers; returns whether an augmenting path
/// from `start` was found and applied.
fn augment(
    start: usize,
    adj: &[Vec<usize>],
    match_l: &mut [usize],
    match_r: &mut [usize],
    dist: &mut [usize],
    iter: &mut [usize],
) -> bool {
    let mut stack: Vec<(usize, usize)> = vec![(start, FREE)];
    loop {
        let Some(&(i, _)) = stack.last() else {
            return false;
        };
        if iter[i] >= adj[i].len() {
            dist[i] = usize::MAX;
            stack.pop();
            continue;
        }
        let j = adj[i][iter[i]];
        iter[i] += 1;
        let k = match_r[j];
        if k == FREE {
            // Flip the path.
            stack.last_mut().unwrap().1 = j;
            for &(a, b) in stack.iter() {
                match_l[a] = b;
                match_r[b] = a;
            }
            return true;
        }
        if dist[k] == dist[i].wrapping_add(1) {
            stack.last_mut().unwrap().1 = j;
            stack.push((k, FREE));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Simple augmenting-path matching (Kuhn) as an independent check.
    fn kuhn(g: &Graph, v1: &[usize], v2: &[usize]) -> usize {
        let in_right: Vec<bool> = {
            let mut m = vec![false; g.n()];
            for &v in v2 {
                m[v] = true;
            }
            m
        };
        let mut owner = vec![usize::MAX; g.n()];
        fn try_kuhn(
            u: usize,
            g: &Graph,
            in_right: &[bool],
            seen: &mut [bool],
            owner: &mut [usize],
        ) -> bool {
            for &w in g.neighbors(u) {
                if in_right[w] && !seen[w] {
                    seen[w] = true;
                    if owner[w] == usize::MAX || try_kuhn(owner[w], g, in_right, seen, owner) {
                        owner[w] = u;
                        return true;
                    }
                }
            }
            false
        }
        let mut size = 0;
        for &u in v1 {
            let mut seen = vec![false; g.n()];
            if try_kuhn(u, g, &in_right, &mut seen, &mut owner) {
                size += 1;
            }
        }
        size
    }

    #[test]
    fn complete_bipartite_and_empty() {
        let g = Graph::complete(6);
        let m = max_bipartite_matching(&g, &[0, 1, 2], &[3, 4, 5]);
        assert_eq!(m.size(), 3);
        assert!(m.is_valid_in(&g));
        let g = Graph::from_edges(6, [(0, 1), (3, 4)]).unwrap();
        assert_eq!(max_bipartite_matching(&g, &[0, 1, 2], &[3, 4, 5]).size(), 0);
    }

    #[test]
    fn agrees_with_kuhn_on_random_instances() {
        use crate::generators::{gen_gnp, GnpParams};
        for seed in 0..60u64 {
            let n = 20 + (seed as usize * 3) % 180;
            let g = gen_gnp(&GnpParams::new(n, 3.0 / n as f64, seed).unwrap()).unwrap();
            let v1: Vec<usize> = (0..n).filter(|v| v % 3 == 0).collect();
            let v2: Vec<usize> = (0..n).filter(|v| v % 3 == 1).collect();
            let m = max_bipartite_matching(&g, &v1, &v2);
            assert!(m.is_valid_in(&g));
            assert!(m.pairs.iter().all(|&(a, b)| a % 3 == 0 && b % 3 == 1));
            assert_eq!(m.size(), kuhn(&g, &v1, &v2), "seed {seed}");
        }
    }
}
