//! Line-oriented workspace files.
//!
//! ```text
//! node <id> <kind> <label...>
//! edge <kind> <src> <dst> [t=<gap>] [jump=<score>] [unc=<score>]
//! ```
//!
//! Text after `#` is ignored.

use super::{Edge, EdgeKind, NodeKind, WorkspaceGraph};
use crate::{fmt, Error, Result};

pub fn read_workspace(text: &str) -> Result<WorkspaceGraph> {
    let mut ws = WorkspaceGraph::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let at_line = |e: Error| Error::parse(line_no, e.to_string());
        match toks[0] {
            "node" => {
                if toks.len() < 3 {
                    return Err(Error::parse(line_no, "expected `node <id> <kind> <label>`"));
                }
                let kind: NodeKind = toks[2].parse().map_err(at_line)?;
                ws.add_node(toks[1], kind, toks[3..].join(" ")).map_err(at_line)?;
            }
            "edge" => {
                if toks.len() < 4 {
                    return Err(Error::parse(line_no, "expected `edge <kind> <src> <dst>`"));
                }
                let kind: EdgeKind = toks[1].parse().map_err(at_line)?;
                let mut edge = Edge::new(kind, toks[2], toks[3]);
                for attr in &toks[4..] {
                    let (key, val) = attr
                        .split_once('=')
                        .ok_or_else(|| Error::parse(line_no, format!("expected key=value, got {attr:?}")))?;
                    let val: f64 = val.parse().map_err(|_| Error::parse(line_no, format!("bad number in {attr:?}")))?;
                    match key {
                        "t" => edge.time = Some(val),
                        "jump" => edge.jump = Some(val),
                        "unc" => edge.uncertainty = Some(val),
                        _ => return Err(Error::parse(line_no, format!("unknown edge attribute {key:?}"))),
                    }
                }
                ws.add_edge(edge).map_err(at_line)?;
            }
            other => return Err(Error::parse(line_no, format!("unknown record {other:?}"))),
        }
    }
    Ok(ws)
}

pub fn write_workspace(ws: &WorkspaceGraph) -> String {
    let mut out = String::new();
    for n in ws.nodes() {
        out.push_str(format!("node {} {} {}", n.id, n.kind, n.label).trim_end());
        out.push('\n');
    }
    for e in ws.edges() {
        out.push_str(&format!("edge {} {} {}", e.kind, e.src, e.dst));
        for (key, v) in [("t", e.time), ("jump", e.jump), ("unc", e.uncertainty)] {
            if let Some(v) = v {
                out.push_str(&format!(" {key}={}", fmt::real(v)));
            }
        }
        out.push('\n');
    }
    out
}
