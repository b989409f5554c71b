use std::collections::HashMap;

use serde::Deserialize;

use super::RoutingError;
use crate::geo::{haversine_distance, GeoPoint};

pub type NodeId = u64;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    /// Meters.
    pub length: f64,
    pub bidirectional: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    nodes: Vec<NodeRecord>,
    edges: Vec<EdgeRecord>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRecord {
    id: NodeId,
    lat: f64,
    lng: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeRecord {
    u: NodeId,
    v: NodeId,
    length: Option<f64>,
    #[serde(default = "default_true")]
    bidirectional: bool,
}

fn default_true() -> bool {
    true
}

/// Immutable road graph. Nodes are stored sorted by id, so index order and
/// id order agree.
#[derive(Debug, Clone)]
pub struct RoadGraph {
    ids: Vec<NodeId>,
    positions: Vec<GeoPoint>,
    index: HashMap<NodeId, usize>,
    edges: Vec<Edge>,
    // per node index: (edge id, neighbour index)
    adjacency: Vec<Vec<(EdgeId, usize)>>,
}

impl RoadGraph {
    pub fn new(
        nodes: impl IntoIterator<Item = (NodeId, GeoPoint)>,
        edges: Vec<Edge>,
    ) -> Result<Self, RoutingError> {
        let mut nodes: Vec<(NodeId, GeoPoint)> = nodes.into_iter().collect();
        nodes.sort_by_key(|(id, _)| *id);
        if let Some(w) = nodes.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(RoutingError::Graph(format!("duplicate node id {}", w[0].0)));
        }
        let ids: Vec<NodeId> = nodes.iter().map(|(id, _)| *id).collect();
        let positions: Vec<GeoPoint> = nodes.iter().map(|(_, p)| *p).collect();
        let index: HashMap<NodeId, usize> =
            ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let mut adjacency = vec![Vec::new(); ids.len()];
        for (eid, e) in edges.iter().enumerate() {
            let (Some(&a), Some(&b)) = (index.get(&e.u), index.get(&e.v)) else {
                return Err(RoutingError::Graph(format!(
                    "edge {eid} references a missing node ({} -> {})",
                    e.u, e.v
                )));
            };
            if a == b {
                return Err(RoutingError::Graph(format!(
                    "edge {eid} is a self-loop on {}",
                    e.u
                )));
            }
            if !(e.length > 0.0 && e.length.is_finite()) {
                return Err(RoutingError::Graph(format!(
                    "edge {eid} has non-positive length {}",
                    e.length
                )));
            }
            adjacency[a].push((eid, b));
            if e.bidirectional {
                adjacency[b].push((eid, a));
            }
        }
        Ok(Self {
            ids,
            positions,
            index,
            edges,
            adjacency,
        })
    }

    /// Parses the JSON graph format
    /// `{"nodes":[{id,lat,lng}],"edges":[{u,v,length?,bidirectional}]}`.
    /// Missing edge lengths are the great-circle distance between endpoints.
    pub fn from_json(text: &str) -> Result<Self, RoutingError> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| RoutingError::Graph(e.to_string()))?;
        let mut nodes = Vec::with_capacity(file.nodes.len());
        let mut lookup = HashMap::new();
        for n in &file.nodes {
            let p = GeoPoint::new(n.lat, n.lng)
                .map_err(|e| RoutingError::Graph(format!("node {}: {e}", n.id)))?;
            nodes.push((n.id, p));
            lookup.insert(n.id, p);
        }
        let mut edges = Vec::with_capacity(file.edges.len());
        for (i, e) in file.edges.iter().enumerate() {
            let length = match e.length {
                Some(l) => l,
                None => match (lookup.get(&e.u), lookup.get(&e.v)) {
                    (Some(&a), Some(&b)) => haversine_distance(a, b),
                    _ => {
                        return Err(RoutingError::Graph(format!(
                            "edge {i} references a missing node ({} -> {})",
                            e.u, e.v
                        )))
                    }
                },
            };
            edges.push(Edge {
                u: e.u,
                v: e.v,
                length,
                bidirectional: e.bidirectional,
            });
        }
        Self::new(nodes, edges)
    }

    pub fn node_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id]
    }

    pub fn node_ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn position(&self, id: NodeId) -> Option<GeoPoint> {
        self.index.get(&id).map(|&i| self.positions[i])
    }

    pub(crate) fn index_of(&self, id: NodeId) -> Result<usize, RoutingError> {
        self.index
            .get(&id)
            .copied()
            .ok_or(RoutingError::UnknownNode(id))
    }

    pub(crate) fn id_at(&self, index: usize) -> NodeId {
        self.ids[index]
    }

    pub(crate) fn neighbours(&self, index: usize) -> &[(EdgeId, usize)] {
        &self.adjacency[index]
    }
}

/// Node nearest to `p`; ties go to the lowest id. `None` for an empty graph.
pub fn snap_to_graph(graph: &RoadGraph, p: GeoPoint) -> Option<NodeId> {
    let mut best: Option<(f64, usize)> = None;
    for (i, &q) in graph.positions.iter().enumerate() {
        let d = haversine_distance(p, q);
        if best.is_none_or(|(bd, _)| d < bd) {
            best = Some((d, i));
        }
    }
    best.map(|(_, i)| graph.ids[i])
}
