//! Episodic workspace graphs.
//!
//! Nodes are actors, objects, events, state snapshots and locations; edges
//! are temporal, causal, role, spatial and episodic-binding links. Temporal
//! and causal edges carry episodic weights for explanation-chain search. Role
//! edges become zero-weight links from the entity to its event; spatial and
//! binding edges become zero-weight connectors in both directions. Role links
//! stay one-way so that two events sharing an actor are not joined for free.

mod format;
mod loss;

pub use format::{read_workspace, write_workspace};
pub use loss::{ws_fact_loss, ws_geo_loss, Fact, FactScorer, FactSet, LOG_FLOOR};

use std::fmt;
use std::str::FromStr;

use crate::planner::{shortest_path, PathResult, WeightedDigraph};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Actor,
    Object,
    Event,
    State,
    Location,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Temporal,
    Causal,
    RoleAgent,
    RoleTheme,
    Spatial,
    EpisodicBinding,
}

impl NodeKind {
    pub const ALL: [NodeKind; 5] = [NodeKind::Actor, NodeKind::Object, NodeKind::Event, NodeKind::State, NodeKind::Location];

    pub fn name(self) -> &'static str {
        match self {
            NodeKind::Actor => "actor",
            NodeKind::Object => "object",
            NodeKind::Event => "event",
            NodeKind::State => "state",
            NodeKind::Location => "location",
        }
    }
}

impl EdgeKind {
    pub const ALL: [EdgeKind; 6] = [
        EdgeKind::Temporal,
        EdgeKind::Causal,
        EdgeKind::RoleAgent,
        EdgeKind::RoleTheme,
        EdgeKind::Spatial,
        EdgeKind::EpisodicBinding,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EdgeKind::Temporal => "temporal",
            EdgeKind::Causal => "causal",
            EdgeKind::RoleAgent => "role-agent",
            EdgeKind::RoleTheme => "role-theme",
            EdgeKind::Spatial => "spatial",
            EdgeKind::EpisodicBinding => "episodic-binding",
        }
    }

    /// Temporal and causal edges are weighted; the rest are connectors.
    pub fn is_weighted(self) -> bool {
        matches!(self, EdgeKind::Temporal | EdgeKind::Causal)
    }

    /// Connectors traversable in both directions.
    pub fn is_bidirectional_connector(self) -> bool {
        matches!(self, EdgeKind::Spatial | EdgeKind::EpisodicBinding)
    }

    pub fn allows(self, src: NodeKind, dst: NodeKind) -> bool {
        use NodeKind::*;
        match self {
            EdgeKind::Temporal => src == State && dst == State,
            EdgeKind::Causal => matches!(src, Event | State) && matches!(dst, Event | State),
            EdgeKind::RoleAgent | EdgeKind::RoleTheme => matches!(src, Actor | Object) && dst == Event,
            EdgeKind::Spatial => src == State && dst == Location,
            EdgeKind::EpisodicBinding => matches!((src, dst), (State, Event) | (Event, State)),
        }
    }
}

macro_rules! parse_by_name {
    ($ty:ty, $what:literal) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<$ty> {
                <$ty>::ALL
                    .into_iter()
                    .find(|k| k.name() == s)
                    .ok_or_else(|| Error::InvalidArgument(format!(concat!("unknown ", $what, " kind {:?}"), s)))
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.name())
            }
        }
    };
}

parse_by_name!(NodeKind, "node");
parse_by_name!(EdgeKind, "edge");

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    pub label: String,
}

/// A typed link. `time` is the time gap the edge spans; `jump` and
/// `uncertainty` are caller-supplied narrative scores. All default to 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub kind: EdgeKind,
    pub src: String,
    pub dst: String,
    pub time: Option<f64>,
    pub jump: Option<f64>,
    pub uncertainty: Option<f64>,
}

impl Edge {
    pub fn new(kind: EdgeKind, src: impl Into<String>, dst: impl Into<String>) -> Edge {
        Edge { kind, src: src.into(), dst: dst.into(), time: None, jump: None, uncertainty: None }
    }

    pub fn with_time(mut self, t: f64) -> Edge {
        self.time = Some(t);
        self
    }

    pub fn with_jump(mut self, j: f64) -> Edge {
        self.jump = Some(j);
        self
    }

    pub fn with_uncertainty(mut self, u: f64) -> Edge {
        self.uncertainty = Some(u);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct WorkspaceGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

/// Pre-extracted nodes and edges to merge into a workspace.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Proposal {
    pub nodes: Vec<Node>,
    pub edges: Vec<Edge>,
}

impl WorkspaceGraph {
    pub fn new() -> WorkspaceGraph {
        WorkspaceGraph::default()
    }

    pub fn add_node(&mut self, id: impl Into<String>, kind: NodeKind, label: impl Into<String>) -> Result<()> {
        let id = id.into();
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(Error::InvalidArgument(format!("node id {id:?} must be non-empty without whitespace")));
        }
        if self.index_of(&id).is_some() {
            return Err(Error::InvalidArgument(format!("duplicate node id {id:?}")));
        }
        self.nodes.push(Node { id, kind, label: label.into() });
        Ok(())
    }

    pub fn add_edge(&mut self, edge: Edge) -> Result<()> {
        let kind_of = |id: &str| {
            self.node(id)
                .map(|n| n.kind)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown node {id:?}")))
        };
        let (sk, dk) = (kind_of(&edge.src)?, kind_of(&edge.dst)?);
        if !edge.kind.allows(sk, dk) {
            return Err(Error::InvalidArgument(format!(
                "{} edge cannot join {sk} {:?} to {dk} {:?}",
                edge.kind, edge.src, edge.dst
            )));
        }
        for (name, v) in [("t", edge.time), ("jump", edge.jump), ("unc", edge.uncertainty)] {
            if let Some(v) = v {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(Error::InvalidArgument(format!("edge attribute {name}={v} must be finite and >= 0")));
                }
            }
        }
        self.edges.push(edge);
        Ok(())
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    /// Merges a proposal. A proposed node replaces the kind and label of an
    /// existing node with the same id (last write wins); edges that no longer
    /// fit their endpoint kinds are dropped, then proposed edges are added.
    pub fn reconcile(&mut self, proposal: Proposal) -> Result<()> {
        for n in proposal.nodes {
            match self.nodes.iter_mut().find(|m| m.id == n.id) {
                Some(m) => *m = n,
                None => self.add_node(n.id, n.kind, n.label)?,
            }
        }
        let nodes = &self.nodes;
        let kind = |id: &str| nodes.iter().find(|n| n.id == id).map(|n| n.kind);
        self.edges.retain(|e| match (kind(&e.src), kind(&e.dst)) {
            (Some(s), Some(d)) => e.kind.allows(s, d),
            _ => false,
        });
        for e in proposal.edges {
            if !self.edges.contains(&e) {
                self.add_edge(e)?;
            }
        }
        Ok(())
    }
}

/// Coefficients of `w = α·Δt + β·jump + γ·uncertainty`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpisodicCoeffs {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for EpisodicCoeffs {
    fn default() -> Self {
        EpisodicCoeffs { alpha: 1.0, beta: 1.0, gamma: 1.0 }
    }
}

pub fn episodic_edge_weight(dt: f64, jump: f64, unc: f64, c: EpisodicCoeffs) -> Result<f64> {
    let inputs = [("dt", dt), ("jump", jump), ("uncertainty", unc), ("alpha", c.alpha), ("beta", c.beta), ("gamma", c.gamma)];
    for (name, v) in inputs {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::InvalidArgument(format!("{name} = {v} must be finite and >= 0")));
        }
    }
    Ok(c.alpha * dt + c.beta * jump + c.gamma * unc)
}

/// Node ids become payloads; node order is preserved.
pub fn to_weighted_digraph(ws: &WorkspaceGraph, coeffs: EpisodicCoeffs) -> Result<WeightedDigraph<String>> {
    let mut g = WeightedDigraph::new(ws.nodes.iter().map(|n| n.id.clone()).collect());
    for e in &ws.edges {
        let (u, v) = match (ws.index_of(&e.src), ws.index_of(&e.dst)) {
            (Some(u), Some(v)) => (u, v),
            _ => return Err(Error::InvalidArgument(format!("edge {} -> {} has an unknown endpoint", e.src, e.dst))),
        };
        if e.kind.is_weighted() {
            let w = episodic_edge_weight(
                e.time.unwrap_or(0.0),
                e.jump.unwrap_or(0.0),
                e.uncertainty.unwrap_or(0.0),
                coeffs,
            )?;
            g.add_edge(u, v, w)?;
        } else {
            g.add_edge(u, v, 0.0)?;
            if e.kind.is_bidirectional_connector() {
                g.add_edge(v, u, 0.0)?;
            }
        }
    }
    Ok(g)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExplanationChain {
    Found { nodes: Vec<String>, cost: f64 },
    Unreachable,
}

/// Minimum-weight chain of node ids from `src` to `dst`.
pub fn explanation_chain(ws: &WorkspaceGraph, src: &str, dst: &str, coeffs: EpisodicCoeffs) -> Result<ExplanationChain> {
    let find = |id: &str| ws.index_of(id).ok_or_else(|| Error::InvalidArgument(format!("unknown node {id:?}")));
    let (s, d) = (find(src)?, find(dst)?);
    let g = to_weighted_digraph(ws, coeffs)?;
    Ok(match shortest_path(&g, s, d)? {
        PathResult::Found { nodes, cost } => ExplanationChain::Found {
            nodes: nodes.into_iter().map(|k| g.payload(k).clone()).collect(),
            cost,
        },
        PathResult::Unreachable => ExplanationChain::Unreachable,
    })
}
