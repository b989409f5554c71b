use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Edge, EdgeId, NodeId, RoadGraph, RoutingError};
use crate::geo::Route;

/// A minimum-cost path through the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPath {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
    /// Total cost under the cost function used for the search.
    pub cost: f64,
}

impl ShortestPath {
    /// Sum of the graph lengths of the traversed edges, in meters.
    pub fn length(&self, graph: &RoadGraph) -> f64 {
        self.edges
            .iter()
            .fold(0.0, |acc, &e| acc + graph.edge(e).length)
    }

    pub fn to_route(
        &self,
        graph: &RoadGraph,
        id: impl Into<String>,
    ) -> Result<Route, RoutingError> {
        let positions = self
            .nodes
            .iter()
            .map(|&n| graph.position(n).ok_or(RoutingError::UnknownNode(n)));
        let positions: Vec<_> = positions.collect::<Result<_, _>>()?;
        Route::from_positions(id, positions)
            .map_err(|e| RoutingError::NoRoute(format!("degenerate path: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Entry {
    cost: f64,
    node: usize,
}

impl Eq for Entry {}

// Reversed so BinaryHeap pops the smallest cost, then the lowest node index.
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .cost
            .total_cmp(&self.cost)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Minimum-cost path from `src` to `dst`. `edge_cost` must return finite
/// positive costs. Equal-cost frontier entries pop in node-id order and a
/// parent changes only on strict improvement, so results are deterministic.
pub fn dijkstra<F>(
    graph: &RoadGraph,
    src: NodeId,
    dst: NodeId,
    edge_cost: F,
) -> Result<ShortestPath, RoutingError>
where
    F: Fn(EdgeId, &Edge) -> f64,
{
    let s = graph.index_of(src)?;
    let t = graph.index_of(dst)?;
    if s == t {
        return Err(RoutingError::NoRoute(format!(
            "origin and destination are the same node ({src})"
        )));
    }
    let n = graph.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut parent: Vec<Option<(usize, EdgeId)>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = 0.0;
    heap.push(Entry { cost: 0.0, node: s });

    while let Some(Entry { cost, node }) = heap.pop() {
        if settled[node] {
            continue;
        }
        settled[node] = true;
        if node == t {
            break;
        }
        for &(eid, next) in graph.neighbours(node) {
            if settled[next] {
                continue;
            }
            let c = edge_cost(eid, graph.edge(eid));
            if !(c.is_finite() && c > 0.0) {
                return Err(RoutingError::InvalidCost { edge: eid, cost: c });
            }
            let candidate = cost + c;
            if candidate < dist[next] {
                dist[next] = candidate;
                parent[next] = Some((node, eid));
                heap.push(Entry {
                    cost: candidate,
                    node: next,
                });
            }
        }
    }

    if !settled[t] {
        return Err(RoutingError::NoRoute(format!(
            "{dst} is unreachable from {src}"
        )));
    }
    let mut nodes = vec![graph.id_at(t)];
    let mut edges = Vec::new();
    let mut cur = t;
    while let Some((prev, eid)) = parent[cur] {
        nodes.push(graph.id_at(prev));
        edges.push(eid);
        cur = prev;
    }
    nodes.reverse();
    edges.reverse();
    Ok(ShortestPath {
        nodes,
        edges,
        cost: dist[t],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::GeoPoint;

    fn line_graph(lengths: &[(NodeId, NodeId, f64)], nodes: usize) -> RoadGraph {
        RoadGraph::new(
            (0..nodes as NodeId).map(|i| (i, GeoPoint::new(0.0, i as f64 * 0.001).unwrap())),
            lengths
                .iter()
                .map(|&(u, v, length)| Edge {
                    u,
                    v,
                    length,
                    bidirectional: true,
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn triangle_prefers_two_hops() {
        // A=0 B=1 C=2
        let g = line_graph(&[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 3.0)], 3);
        let p = dijkstra(&g, 0, 2, |_, e| e.length).unwrap();
        assert_eq!(p.nodes, vec![0, 1, 2]);
        assert_eq!(p.cost, 2.0);
    }

    #[test]
    fn same_node_is_no_route() {
        let g = line_graph(&[(0, 1, 1.0)], 2);
        assert!(matches!(
            dijkstra(&g, 1, 1, |_, e| e.length),
            Err(RoutingError::NoRoute(_))
        ));
    }

    #[test]
    fn unreachable_and_unknown() {
        let g = line_graph(&[(0, 1, 1.0)], 3);
        assert!(matches!(
            dijkstra(&g, 0, 2, |_, e| e.length),
            Err(RoutingError::NoRoute(_))
        ));
        assert_eq!(
            dijkstra(&g, 0, 9, |_, e| e.length),
            Err(RoutingError::UnknownNode(9))
        );
    }

    #[test]
    fn one_way_edges() {
        let g = RoadGraph::new(
            (0..2).map(|i| (i, GeoPoint::new(0.0, i as f64).unwrap())),
            vec![Edge {
                u: 0,
                v: 1,
                length: 1.0,
                bidirectional: false,
            }],
        )
        .unwrap();
        assert!(dijkstra(&g, 0, 1, |_, e| e.length).is_ok());
        assert!(dijkstra(&g, 1, 0, |_, e| e.length).is_err());
    }

    #[test]
    fn rejects_non_positive_cost() {
        let g = line_graph(&[(0, 1, 1.0)], 2);
        assert!(matches!(
            dijkstra(&g, 0, 1, |_, _| 0.0),
            Err(RoutingError::InvalidCost { edge: 0, .. })
        ));
    }

    #[test]
    fn ties_resolve_through_lower_ids() {
        // 0 -> {1, 2} -> 3 with equal costs: the path through 1 wins
        let g = line_graph(&[(0, 2, 1.0), (2, 3, 1.0), (0, 1, 1.0), (1, 3, 1.0)], 4);
        for _ in 0..10 {
            assert_eq!(
                dijkstra(&g, 0, 3, |_, e| e.length).unwrap().nodes,
                vec![0, 1, 3]
            );
        }
    }
}
