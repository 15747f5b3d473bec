//! The bipartite flow network behind the tree/unicycle Breaker strategy.
//!
//! For an `s`-uniform board the network has a source, a sink, one node per
//! edge and one per vertex. The source feeds each edge node with capacity
//! `s - 1`, each edge node sends capacity 1 to each of its vertices, and each
//! vertex drains capacity 1 into the sink. A flow saturating every source arc
//! picks `s - 1` vertices per edge, no vertex picked twice: a system of
//! pairwise disjoint `(s-1)`-sets, each inside its edge.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowArc {
    pub from: usize,
    pub to: usize,
    pub capacity: u64,
}

/// Node layout: `0` source, `1` sink, then one node per board edge, then one
/// per board vertex. Arcs are listed source arcs first (by edge), then edge
/// to vertex arcs (by edge, then vertex), then sink arcs (by vertex).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowNetwork {
    pub num_nodes: usize,
    pub arcs: Vec<FlowArc>,
    num_edges: usize,
    num_vertices: usize,
}

pub const SOURCE: usize = 0;
pub const SINK: usize = 1;

impl FlowNetwork {
    pub fn for_hypergraph(board: &Hypergraph) -> Result<Self> {
        let s = match board.uniformity() {
            Some(s) => s,
            None if board.is_edgeless() => 2,
            None => return Err(Error::NotUniform),
        };
        if s < 2 {
            return Err(Error::InvalidParameter("flow network needs edges of size >= 2".into()));
        }
        let num_edges = board.num_edges();
        let num_vertices = board.n();
        let mut net = Self {
            num_nodes: 2 + num_edges + num_vertices,
            arcs: Vec::with_capacity(num_edges * (s + 1) + num_vertices),
            num_edges,
            num_vertices,
        };
        for i in 0..num_edges {
            net.arcs.push(FlowArc {
                from: SOURCE,
                to: net.edge_node(i),
                capacity: s as u64 - 1,
            });
        }
        for (i, e) in board.edges().iter().enumerate() {
            for &v in e {
                net.arcs.push(FlowArc {
                    from: net.edge_node(i),
                    to: net.vertex_node(v),
                    capacity: 1,
                });
            }
        }
        for v in 0..num_vertices {
            net.arcs.push(FlowArc {
                from: net.vertex_node(v as Vertex),
                to: SINK,
                capacity: 1,
            });
        }
        Ok(net)
    }

    pub fn edge_node(&self, edge: usize) -> usize {
        2 + edge
    }

    pub fn vertex_node(&self, v: Vertex) -> usize {
        2 + self.num_edges + v as usize
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }
}

/// An integral maximum flow with the source side of a minimum cut.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxFlow {
    pub value: u64,
    /// Flow on each arc of the network, same order as `FlowNetwork::arcs`.
    pub arc_flow: Vec<u64>,
    /// Nodes reachable from the source in the final residual graph.
    pub source_side: Vec<bool>,
}

/// A minimum cut read back in board terms: the edges and vertices on the
/// source side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutCertificate {
    pub edges: Vec<usize>,
    pub vertices: Vec<Vertex>,
    pub value: u64,
}

impl MaxFlow {
    pub fn certificate(&self, net: &FlowNetwork) -> CutCertificate {
        let edges = (0..net.num_edges)
            .filter(|&i| self.source_side[net.edge_node(i)])
            .collect();
        let vertices = (0..net.num_vertices as Vertex)
            .filter(|&v| self.source_side[net.vertex_node(v)])
            .collect();
        let value = net
            .arcs
            .iter()
            .filter(|a| self.source_side[a.from] && !self.source_side[a.to])
            .map(|a| a.capacity)
            .sum();
        CutCertificate {
            edges,
            vertices,
            value,
        }
    }
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<u64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(net: &FlowNetwork) -> Self {
        let mut r = Residual {
            head: Vec::with_capacity(2 * net.arcs.len()),
            cap: Vec::with_capacity(2 * net.arcs.len()),
            adj: vec![Vec::new(); net.num_nodes],
        };
        for a in &net.arcs {
            r.adj[a.from].push(r.head.len());
            r.head.push(a.to);
            r.cap.push(a.capacity);
            r.adj[a.to].push(r.head.len());
            r.head.push(a.from);
            r.cap.push(0);
        }
        r
    }

    fn levels(&self, source: usize) -> Vec<u32> {
        let mut level = vec![u32::MAX; self.adj.len()];
        level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &id in &self.adj[u] {
                let v = self.head[id];
                if self.cap[id] > 0 && level[v] == u32::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, sink: usize, limit: u64, level: &[u32], next: &mut [usize]) -> u64 {
        if u == sink {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let id = self.adj[u][next[u]];
            let v = self.head[id];
            if self.cap[id] > 0 && level[v] == level[u] + 1 {
                let pushed = self.augment(v, sink, limit.min(self.cap[id]), level, next);
                if pushed > 0 {
                    self.cap[id] -= pushed;
                    self.cap[id ^ 1] += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0
    }
}

/// Dinic's algorithm from [`SOURCE`] to [`SINK`].
pub fn max_flow(net: &FlowNetwork) -> MaxFlow {
    let mut r = Residual::new(net);
    let mut value = 0;
    loop {
        let level = r.levels(SOURCE);
        if level[SINK] == u32::MAX {
            break;
        }
        let mut next = vec![0; net.num_nodes];
        loop {
            let pushed = r.augment(SOURCE, SINK, u64::MAX, &level, &mut next);
            if pushed == 0 {
                break;
            }
            value += pushed;
        }
    }
    let level = r.levels(SOURCE);
    let arc_flow = (0..net.arcs.len()).map(|i| r.cap[2 * i + 1]).collect();
    MaxFlow {
        value,
        arc_flow,
        source_side: level.iter().map(|&l| l != u32::MAX).collect(),
    }
}

/// For each board edge, the `s - 1` vertices that receive flow from it, if
/// the maximum flow saturates every source arc. The sets are pairwise
/// disjoint and each lies in its edge.
pub fn shrunken_edges(board: &Hypergraph) -> Result<Option<Vec<Vec<Vertex>>>> {
    let net = FlowNetwork::for_hypergraph(board)?;
    let flow = max_flow(&net);
    let wanted: u64 = net.arcs[..net.num_edges].iter().map(|a| a.capacity).sum();
    if flow.value < wanted {
        return Ok(None);
    }
    let mut picks = vec![Vec::new(); net.num_edges];
    for (arc, &f) in net.arcs.iter().zip(&flow.arc_flow) {
        if f > 0 && arc.from >= 2 && arc.from < 2 + net.num_edges && arc.to != SINK {
            let v = (arc.to - 2 - net.num_edges) as Vertex;
            picks[arc.from - 2].push(v);
        }
    }
    Ok(Some(picks))
}

/// The shrunken `(s-1)`-uniform system as a board on the same vertices, or
/// `None` when some edge set `F` has fewer than `(s-1)|F|` vertices.
pub fn extract_shrunken_system(board: &Hypergraph) -> Result<Option<Hypergraph>> {
    let Some(picks) = shrunken_edges(board)? else {
        return Ok(None);
    };
    if picks.is_empty() {
        return Ok(Some(Hypergraph::empty(board.n())));
    }
    let s = board.uniformity().expect("non-empty uniform board");
    Hypergraph::with_uniformity(board.n(), s - 1, picks).map(Some)
}
