//! Plain-text edge lists.
//!
//! ```text
//! # comment
//! n 3
//! 0 1 +1
//! 1 2 -1
//! ```
//!
//! The first non-comment line is `n <count>`; every further line is `u v` or
//! `u v c` with `c` one of `+1`, `-1`. Either every edge carries a colour or
//! none does. Saving writes edges once, `u < v`, in ascending order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::coloring::{EdgeColoring, Sign};
use crate::error::{Error, Result};
use crate::graph::{canonical, Graph};

pub fn parse_edge_list(text: &str) -> Result<(Graph, Option<EdgeColoring>)> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut colors = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let Some(count) = n else {
            match fields.as_slice() {
                ["n", c] => {
                    n = Some(c.parse().map_err(|_| err(format!("bad vertex count {c:?}")))?);
                    continue;
                }
                _ => return Err(err("expected header `n <count>`".into())),
            }
        };
        let parse_vertex = |s: &str| -> Result<usize> {
            let v: usize = s.parse().map_err(|_| err(format!("bad vertex {s:?}")))?;
            if v >= count {
                return Err(err(format!("vertex {v} out of range for n = {count}")));
            }
            Ok(v)
        };
        let (u, v, c) = match fields.as_slice() {
            [u, v] => (parse_vertex(u)?, parse_vertex(v)?, None),
            [u, v, c] => {
                let sign = match *c {
                    "+1" | "1" => Sign::Plus,
                    "-1" => Sign::Minus,
                    other => return Err(err(format!("colour {other:?} is not +1 or -1"))),
                };
                (parse_vertex(u)?, parse_vertex(v)?, Some(sign))
            }
            _ => return Err(err(format!("expected `u v` or `u v c`, got {line:?}"))),
        };
        if u == v {
            return Err(err(format!("self-loop at vertex {u}")));
        }
        edges.push(canonical(u, v));
        colors.push((line_no, c));
    }
    let n = n.ok_or(Error::Parse {
        line: 0,
        msg: "missing header `n <count>`".into(),
    })?;

    let colored = colors.iter().filter(|(_, c)| c.is_some()).count();
    if colored != 0 && colored != colors.len() {
        let line = colors
            .iter()
            .find(|(_, c)| c.is_none())
            .map_or(0, |&(l, _)| l);
        return Err(Error::Parse {
            line,
            msg: "either every edge or no edge may carry a colour".into(),
        });
    }

    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by_key(|&i| edges[i]);
    for w in order.windows(2) {
        if edges[w[0]] == edges[w[1]] {
            let (a, b) = edges[w[1]];
            return Err(Error::Parse {
                line: colors[w[1].max(w[0])].0,
                msg: format!("duplicate edge ({a}, {b})"),
            });
        }
    }
    let graph = Graph::from_edges(n, edges.iter().copied())?;
    let coloring = if colored > 0 {
        Some(EdgeColoring::from_pairs(
            edges.iter().copied().zip(colors.iter().map(|(_, c)| c.unwrap())),
        )?)
    } else {
        None
    };
    Ok((graph, coloring))
}

pub fn format_edge_list(g: &Graph, coloring: Option<&EdgeColoring>) -> Result<String> {
    let mut out = String::with_capacity(16 + 12 * g.m());
    writeln!(out, "n {}", g.n()).unwrap();
    for &(u, v) in g.edges() {
        match coloring {
            Some(chi) => writeln!(out, "{u} {v} {}", chi.color(u, v)?).unwrap(),
            None => writeln!(out, "{u} {v}").unwrap(),
        }
    }
    Ok(out)
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<(Graph, Option<EdgeColoring>)> {
    parse_edge_list(&fs::read_to_string(path)?)
}

pub fn save_edge_list(
    g: &Graph,
    coloring: Option<&EdgeColoring>,
    path: impl AsRef<Path>,
) -> Result<()> {
    fs::write(path, format_edge_list(g, coloring)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_coloring() {
        let (g, chi) = parse_edge_list("# a path\nn 3\n0 1 +1\n1 2 -1\n").unwrap();
        assert_eq!(g, Graph::path(3));
        let chi = chi.unwrap();
        assert_eq!(chi.get(0, 1), Some(Sign::Plus));
        assert_eq!(chi.get(2, 1), Some(Sign::Minus));
    }

    #[test]
    fn canonical_roundtrip() {
        let text = "n 4\n3 1 -1\n0 1 +1  # trailing comment\n\n2 0 +1\n";
        let (g, chi) = parse_edge_list(text).unwrap();
        let saved = format_edge_list(&g, chi.as_ref()).unwrap();
        assert_eq!(saved, "n 4\n0 1 +1\n0 2 +1\n1 3 -1\n");
        let (g2, chi2) = parse_edge_list(&saved).unwrap();
        assert_eq!(g, g2);
        assert_eq!(chi, chi2);
        assert_eq!(format_edge_list(&g2, chi2.as_ref()).unwrap(), saved);
    }

    #[test]
    fn rejects_bad_input() {
        let cases = [
            "n 3\n0 0\n",
            "n 3\n0 3\n",
            "n 3\n0 1\n1 0\n",
            "n 3\n0 1 2\n",
            "n 3\n0 1 +1\n1 2\n",
            "0 1\n",
            "n 3\n0 x\n",
            "",
        ];
        for text in cases {
            assert!(parse_edge_list(text).is_err(), "{text:?} should fail");
        }
        match parse_edge_list("n 3\n0 1\n0 0\n") {
            Err(Error::Parse { line: 3, msg }) => assert!(msg.contains("self-loop")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn file_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.txt");
        let g = Graph::complete(5);
        let chi = EdgeColoring::from_fn(&g, |i, _| if i % 3 == 0 { Sign::Minus } else { Sign::Plus });
        save_edge_list(&g, Some(&chi), &path).unwrap();
        let (g2, chi2) = load_edge_list(&path).unwrap();
        assert_eq!((g, Some(chi)), (g2, chi2));
        save_edge_list(&Graph::path(3), None, &path).unwrap();
        assert_eq!(load_edge_list(&path).unwrap(), (Graph::path(3), None));
    }
}
