//! Line-oriented graph files.
//!
//! ```text
//! # comment
//! n 3
//! v 0 a          (optional node names; default is the index)
//! v 1 b
//! v 2 c
//! e a b 1        (endpoints by name or index)
//! e 1 2 1
//! e 0 2 3
//! ```

use super::{SsspResult, WeightedDigraph};
use crate::{fmt, Error, Result};

fn node_ref(names: &[String], tok: &str) -> Option<usize> {
    names.iter().position(|n| n == tok).or_else(|| tok.parse::<usize>().ok().filter(|&i| i < names.len()))
}

/// Parses a graph; node payloads are their names.
pub fn read_graph(text: &str) -> Result<WeightedDigraph<String>> {
    let mut names: Option<Vec<String>> = None;
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks[0] {
            "n" => {
                if names.is_some() {
                    return Err(Error::parse(line_no, "duplicate `n` line"));
                }
                let [_, count] = toks[..] else {
                    return Err(Error::parse(line_no, "expected `n <count>`"));
                };
                let count: usize = count.parse().map_err(|_| Error::parse(line_no, format!("bad node count {count:?}")))?;
                names = Some((0..count).map(|k| k.to_string()).collect());
            }
            "v" => {
                let [_, idx, name] = toks[..] else {
                    return Err(Error::parse(line_no, "expected `v <index> <name>`"));
                };
                let names = names.as_mut().ok_or_else(|| Error::parse(line_no, "`v` before `n`"))?;
                let idx: usize = idx
                    .parse()
                    .ok()
                    .filter(|&k| k < names.len())
                    .ok_or_else(|| Error::parse(line_no, format!("bad node index {idx:?}")))?;
                if names.iter().enumerate().any(|(k, n)| k != idx && n == name) {
                    return Err(Error::parse(line_no, format!("duplicate node name {name:?}")));
                }
                names[idx] = name.to_string();
            }
            "e" => {
                let [_, src, dst, w] = toks[..] else {
                    return Err(Error::parse(line_no, "expected `e <src> <dst> <weight>`"));
                };
                let names = names.as_ref().ok_or_else(|| Error::parse(line_no, "`e` before `n`"))?;
                let u = node_ref(names, src).ok_or_else(|| Error::parse(line_no, format!("unknown node {src:?}")))?;
                let v = node_ref(names, dst).ok_or_else(|| Error::parse(line_no, format!("unknown node {dst:?}")))?;
                let w: f64 = w.parse().map_err(|_| Error::parse(line_no, format!("bad weight {w:?}")))?;
                if !(w >= 0.0) || !w.is_finite() {
                    return Err(Error::parse(line_no, format!("edge weight {w} must be finite and >= 0")));
                }
                edges.push((u, v, w));
            }
            other => return Err(Error::parse(line_no, format!("unknown record {other:?}"))),
        }
    }
    let names = names.ok_or_else(|| Error::parse(0, "missing `n <count>` line"))?;
    let mut g = WeightedDigraph::new(names);
    for (u, v, w) in edges {
        g.add_edge(u, v, w)?;
    }
    Ok(g)
}

pub fn write_graph(g: &WeightedDigraph<String>) -> String {
    let mut out = format!("n {}\n", g.len());
    for (k, name) in g.payloads().iter().enumerate() {
        if *name != k.to_string() {
            out.push_str(&format!("v {k} {name}\n"));
        }
    }
    for (u, v, w) in g.edges() {
        out.push_str(&format!("e {u} {v} {}\n", fmt::real(w)));
    }
    out
}

/// CSV with header `node,dist,pred`; unreachable distances print as `inf`,
/// missing predecessors as an empty field.
pub fn sssp_csv(r: &SsspResult) -> String {
    let mut out = String::from("node,dist,pred\n");
    for (k, (d, p)) in r.dist.iter().zip(&r.pred).enumerate() {
        let p = p.map(|p| p.to_string()).unwrap_or_default();
        out.push_str(&format!("{k},{},{p}\n", fmt::real(*d)));
    }
    out
}
