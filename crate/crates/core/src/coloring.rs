//! Two-colourings of edge sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{canonical, Edge, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    #[inline]
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// Sign of a nonzero integer; zero maps to `Plus`.
    pub fn of(x: i64) -> Sign {
        if x < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn from_i64(x: i64) -> Option<Sign> {
        match x {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// A map from edges to `{+1, -1}`, stored as a sorted edge list with a
/// parallel colour vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    edges: Vec<Edge>,
    colors: Vec<Sign>,
}

impl EdgeColoring {
    /// Colour every edge of `g` with `f(edge_index, edge)`.
    pub fn from_fn<F>(g: &Graph, mut f: F) -> Self
    where
        F: FnMut(usize, Edge) -> Sign,
    {
        let edges = g.edges().to_vec();
        let colors = edges.iter().enumerate().map(|(i, &e)| f(i, e)).collect();
        EdgeColoring { edges, colors }
    }

    pub fn constant(g: &Graph, sign: Sign) -> Self {
        Self::from_fn(g, |_, _| sign)
    }

    /// Build from explicit `(edge, sign)` pairs; rejects duplicates.
    pub fn from_pairs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Edge, Sign)>,
    {
        let mut list: Vec<(Edge, Sign)> = pairs
            .into_iter()
            .map(|((u, v), s)| (canonical(u, v), s))
            .collect();
        list.sort_unstable_by_key(|&(e, _)| e);
        if let Some(w) = list.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateEdge(w[0].0 .0, w[0].0 .1));
        }
        let (edges, colors) = list.into_iter().unzip();
        Ok(EdgeColoring { edges, colors })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn colors(&self) -> &[Sign] {
        &self.colors
    }

    pub fn iter(&self) -> impl Iterator<Item = (Edge, Sign)> + '_ {
        self.edges.iter().copied().zip(self.colors.iter().copied())
    }

    pub fn get(&self, u: usize, v: usize) -> Option<Sign> {
        self.edges
            .binary_search(&canonical(u, v))
            .ok()
            .map(|i| self.colors[i])
    }

    pub fn color(&self, u: usize, v: usize) -> Result<Sign> {
        self.get(u, v).ok_or(Error::Uncolored(u.min(v), u.max(v)))
    }

    pub fn set(&mut self, u: usize, v: usize, sign: Sign) -> Result<()> {
        let i = self
            .edges
            .binary_search(&canonical(u, v))
            .map_err(|_| Error::Uncolored(u.min(v), u.max(v)))?;
        self.colors[i] = sign;
        Ok(())
    }

    /// Whether the domain is exactly `E(g)`.
    pub fn covers_exactly(&self, g: &Graph) -> bool {
        self.edges == g.edges()
    }

    /// Restriction to the edges of `g`; every edge of `g` must be coloured.
    pub fn restrict(&self, g: &Graph) -> Result<EdgeColoring> {
        let mut colors = Vec::with_capacity(g.m());
        for &(u, v) in g.edges() {
            colors.push(self.color(u, v)?);
        }
        Ok(EdgeColoring {
            edges: g.edges().to_vec(),
            colors,
        })
    }

    /// The global colour flip `-chi`.
    pub fn negated(&self) -> EdgeColoring {
        EdgeColoring {
            edges: self.edges.clone(),
            colors: self.colors.iter().map(|s| s.flip()).collect(),
        }
    }

    /// Signed sum over all coloured edges.
    pub fn total(&self) -> i64 {
        self.colors.iter().map(|s| s.value()).sum()
    }
}
