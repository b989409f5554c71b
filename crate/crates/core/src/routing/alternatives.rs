use super::{dijkstra, CandidateSet, CandidateSource, NodeId, RoadGraph, RoutingError};
use crate::geo::GeoPoint;

pub const DEFAULT_K: usize = 3;
pub const DEFAULT_PENALTY: f64 = 1.3;

// Searches allowed per requested route before giving up on more alternatives.
const ATTEMPTS_PER_ROUTE: usize = 8;

/// Up to `k` distinct routes from `src` to `dst` by iterative penalization:
/// after each search, every edge on the found path has its cost multiplied
/// by `penalty`. Results are sorted by true (unpenalized) length, ascending,
/// and named `route0`, `route1`, ….
pub fn k_alternatives(
    graph: &RoadGraph,
    src: NodeId,
    dst: NodeId,
    k: usize,
    penalty: f64,
) -> Result<CandidateSet, RoutingError> {
    k_alternatives_by(graph, src, dst, k, penalty, |_, e| e.length)
}

/// As [`k_alternatives`] with a custom base edge cost. Output order still
/// uses graph lengths.
pub fn k_alternatives_by<F>(
    graph: &RoadGraph,
    src: NodeId,
    dst: NodeId,
    k: usize,
    penalty: f64,
    base_cost: F,
) -> Result<CandidateSet, RoutingError>
where
    F: Fn(super::EdgeId, &super::Edge) -> f64,
{
    if k == 0 {
        return Err(RoutingError::Argument("k must be at least 1".into()));
    }
    if !(penalty > 1.0 && penalty.is_finite()) {
        return Err(RoutingError::Argument(format!(
            "penalty must be greater than 1, got {penalty}"
        )));
    }
    let mut factors = vec![1.0f64; graph.edges().len()];
    let mut found: Vec<(f64, Vec<GeoPoint>, Vec<NodeId>)> = Vec::new();
    for _ in 0..k * ATTEMPTS_PER_ROUTE {
        let path = dijkstra(graph, src, dst, |eid, e| base_cost(eid, e) * factors[eid])?;
        let geometry: Vec<GeoPoint> = path
            .nodes
            .iter()
            .map(|&n| graph.position(n).expect("path nodes exist"))
            .collect();
        if !found.iter().any(|(_, g, _)| *g == geometry) {
            found.push((path.length(graph), geometry, path.nodes.clone()));
            if found.len() == k {
                break;
            }
        }
        for &e in &path.edges {
            factors[e] *= penalty;
        }
    }
    // stable: equal lengths keep discovery order
    found.sort_by(|a, b| a.0.total_cmp(&b.0));
    let routes = found
        .into_iter()
        .enumerate()
        .map(|(i, (_, geometry, _))| {
            crate::geo::Route::from_positions(format!("route{i}"), geometry)
                .map_err(|e| RoutingError::NoRoute(format!("degenerate path: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    CandidateSet::new(routes, CandidateSource::Local)
}
