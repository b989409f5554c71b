//! Candidate route sources: Dijkstra and penalty-based alternatives over a
//! local road graph, and a client for an external directions provider.

mod alternatives;
mod dijkstra;
mod directions;
mod graph;

pub use alternatives::{k_alternatives, k_alternatives_by, DEFAULT_K, DEFAULT_PENALTY};
pub use dijkstra::{dijkstra, ShortestPath};
pub use directions::{fetch_provider_routes, DirectionsClient, DirectionsError};
pub use graph::{snap_to_graph, Edge, EdgeId, NodeId, RoadGraph};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::{GeoPoint, Route};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RoutingError {
    #[error("no route: {0}")]
    NoRoute(String),
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("edge {edge} has invalid cost {cost}")]
    InvalidCost { edge: EdgeId, cost: f64 },
    #[error("invalid graph: {0}")]
    Graph(String),
    #[error("{0}")]
    Argument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CandidateSource {
    Local,
    Provider,
    File,
}

/// Endpoint tolerance, in degrees, between a candidate route and its set.
const ENDPOINT_TOLERANCE_DEG: f64 = 1e-9;

/// A handful of alternative routes between one origin and destination.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    origin: GeoPoint,
    destination: GeoPoint,
    routes: Vec<Route>,
    source: CandidateSource,
}

fn near(a: GeoPoint, b: GeoPoint) -> bool {
    (a.lat() - b.lat()).abs() <= ENDPOINT_TOLERANCE_DEG
        && (a.lng() - b.lng()).abs() <= ENDPOINT_TOLERANCE_DEG
}

impl CandidateSet {
    /// Builds a set whose origin and destination are those of the first
    /// route; every other route must share them.
    pub fn new(routes: Vec<Route>, source: CandidateSource) -> Result<Self, RoutingError> {
        let first = routes
            .first()
            .ok_or_else(|| RoutingError::NoRoute("empty candidate set".into()))?;
        let (origin, destination) = (first.start(), first.destination());
        if let Some(r) = routes
            .iter()
            .find(|r| !near(r.start(), origin) || !near(r.destination(), destination))
        {
            return Err(RoutingError::Argument(format!(
                "candidate {} does not share the set's endpoints",
                r.id()
            )));
        }
        Ok(Self {
            origin,
            destination,
            routes,
            source,
        })
    }

    pub fn origin(&self) -> GeoPoint {
        self.origin
    }

    pub fn destination(&self) -> GeoPoint {
        self.destination
    }

    pub fn routes(&self) -> &[Route] {
        &self.routes
    }

    pub fn source(&self) -> CandidateSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.routes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }
}
