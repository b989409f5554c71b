//! Wires configured route and elevation sources into the ranking pipeline.
//! Shared by the CLI and the HTTP service so both produce identical reports.

use std::sync::Arc;
use std::thread;
use std::time::Duration;

use terrarank_core::elevation::{
    attach_elevations, load_dem, CachedProvider, DemProvider, ElevationCache, ElevationError,
    ElevationProvider, RemoteElevationClient,
};
use terrarank_core::geo::{decode_polyline, resample_route, GeoPoint, Route};
use terrarank_core::json::to_canonical_string;
use terrarank_core::ranking::{
    comparison_report, elevation_profile, rank_candidates, ElevationProfile, Preference,
    RankedRoute, RankingError, Report,
};
use terrarank_core::routing::{
    fetch_provider_routes, k_alternatives, k_alternatives_by, snap_to_graph, CandidateSet,
    DirectionsClient, DirectionsError, RoadGraph, RoutingError,
};
use terrarank_core::transport::{transport_for, Transport, TransportError};
use terrarank_core::weighting::{slope_weight, Factor, GradeMode, WeightSpec};
use thiserror::Error;

use crate::config::AppConfig;

const RETRY_DELAY: Duration = Duration::from_millis(200);

/// Retries once, after a short pause, when the failure is connection-level.
pub struct RetryingTransport {
    inner: Arc<dyn Transport>,
    delay: Duration,
}

impl RetryingTransport {
    pub fn new(inner: Arc<dyn Transport>, delay: Duration) -> Self {
        Self { inner, delay }
    }
}

impl Transport for RetryingTransport {
    fn get(&self, url: &str) -> Result<String, TransportError> {
        match self.inner.get(url) {
            Err(e) if e.is_transient() => {
                tracing::warn!(error = %e, "upstream request failed, retrying once");
                thread::sleep(self.delay);
                self.inner.get(url)
            }
            other => other,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EngineError {
    #[error("{0}")]
    InvalidRequest(String),
    #[error("{0}")]
    NoRoute(String),
    #[error("{0}")]
    Upstream(String),
    #[error("{0}")]
    Elevation(String),
    #[error("{0}")]
    Setup(String),
    #[error("{0}")]
    Internal(String),
}

impl EngineError {
    /// Stable machine-readable code used in HTTP error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::InvalidRequest(_) => "invalid_request",
            EngineError::NoRoute(_) => "no_route",
            EngineError::Upstream(_) => "provider_error",
            EngineError::Elevation(_) => "elevation_unavailable",
            EngineError::Setup(_) | EngineError::Internal(_) => "internal",
        }
    }
}

impl From<RankingError> for EngineError {
    fn from(e: RankingError) -> Self {
        match e {
            RankingError::Elevation(e) => EngineError::Elevation(e.to_string()),
            other => EngineError::Internal(other.to_string()),
        }
    }
}

impl From<ElevationError> for EngineError {
    fn from(e: ElevationError) -> Self {
        EngineError::Elevation(e.to_string())
    }
}

enum RouteSource {
    Provider(DirectionsClient),
    Graph {
        graph: RoadGraph,
        // per node id order, when weight-in-search is enabled
        node_elevations: Option<Vec<f64>>,
    },
}

/// A rank request after validation.
#[derive(Debug, Clone, PartialEq)]
pub struct RankQuery {
    pub origin: GeoPoint,
    pub destination: GeoPoint,
    pub preference: Preference,
    pub alpha: Option<f64>,
    pub k: Option<usize>,
}

pub struct RankOutcome {
    pub ranked: Vec<RankedRoute>,
    pub report: Report,
}

pub struct Engine {
    config: AppConfig,
    routes: RouteSource,
    elevation: Arc<dyn ElevationProvider>,
}

fn retrying(url: &str) -> Arc<dyn Transport> {
    Arc::new(RetryingTransport::new(transport_for(url), RETRY_DELAY))
}

impl Engine {
    pub fn from_config(config: AppConfig) -> Result<Self, EngineError> {
        let problems = config.problems();
        if !problems.is_empty() {
            return Err(EngineError::Setup(problems.join("; ")));
        }
        let api_key = config.api_key.as_ref().map(|k| k.expose().to_string());

        let elevation: Arc<dyn ElevationProvider> = if let Some(path) = &config.dem_path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| EngineError::Setup(format!("{}: {e}", path.display())))?;
            let grid = load_dem(&text)
                .map_err(|e| EngineError::Setup(format!("{}: {e}", path.display())))?;
            // Interpolation is cheap and exact; a cache keyed on a coarser
            // grid could alias neighbouring points.
            Arc::new(DemProvider::new(Arc::new(grid)))
        } else {
            let url = config.elevation_url.clone().expect("validated source");
            let remote =
                RemoteElevationClient::with_transport(&url, api_key.clone(), retrying(&url));
            let cache = match &config.cache_path {
                Some(path) => open_cache(path)?,
                None => ElevationCache::in_memory(),
            };
            Arc::new(CachedProvider::new(remote, Arc::new(cache)))
        };

        let routes = if let Some(url) = &config.directions_url {
            RouteSource::Provider(DirectionsClient::with_transport(
                url,
                api_key,
                retrying(url),
            ))
        } else {
            let path = config.graph_path.as_ref().expect("validated source");
            let text = std::fs::read_to_string(path)
                .map_err(|e| EngineError::Setup(format!("{}: {e}", path.display())))?;
            let graph = RoadGraph::from_json(&text)
                .map_err(|e| EngineError::Setup(format!("{}: {e}", path.display())))?;
            let node_elevations = if config.weighted_search {
                let positions: Vec<GeoPoint> = graph
                    .node_ids()
                    .iter()
                    .map(|&id| graph.position(id).expect("listed node"))
                    .collect();
                let samples = elevation.elevations(&positions)?;
                Some(samples.iter().map(|s| s.elevation).collect())
            } else {
                None
            };
            RouteSource::Graph {
                graph,
                node_elevations,
            }
        };

        Ok(Self {
            config,
            routes,
            elevation,
        })
    }

    pub fn config(&self) -> &AppConfig {
        &self.config
    }

    /// "dem" or "remote".
    pub fn elevation_source(&self) -> &'static str {
        self.elevation.source().as_str()
    }

    /// "provider" or "graph".
    pub fn route_source(&self) -> &'static str {
        match self.routes {
            RouteSource::Provider(_) => "provider",
            RouteSource::Graph { .. } => "graph",
        }
    }

    fn weight_spec(&self, alpha: f64) -> Result<WeightSpec, EngineError> {
        WeightSpec::new(Factor::Slope, alpha, self.config.grade_mode)
            .map_err(|e| EngineError::InvalidRequest(e.to_string()))
    }

    fn candidates(
        &self,
        origin: GeoPoint,
        destination: GeoPoint,
        k: usize,
        spec: &WeightSpec,
    ) -> Result<CandidateSet, EngineError> {
        match &self.routes {
            RouteSource::Provider(client) => fetch_provider_routes(client, origin, destination, k)
                .map_err(|e| match e {
                    DirectionsError::Status { ref status, .. } if status == "ZERO_RESULTS" => {
                        EngineError::NoRoute(e.to_string())
                    }
                    DirectionsError::Argument(m) => EngineError::InvalidRequest(m),
                    other => EngineError::Upstream(other.to_string()),
                }),
            RouteSource::Graph {
                graph,
                node_elevations,
            } => {
                let (Some(src), Some(dst)) = (
                    snap_to_graph(graph, origin),
                    snap_to_graph(graph, destination),
                ) else {
                    return Err(EngineError::NoRoute("road graph is empty".into()));
                };
                let result = match node_elevations {
                    None => k_alternatives(graph, src, dst, k, self.config.penalty),
                    Some(elevations) => {
                        let ids = graph.node_ids();
                        let elevation_of = |id| elevations[ids.binary_search(&id).expect("node")];
                        let grade_spec = WeightSpec {
                            grade_mode: GradeMode::Absolute,
                            ..*spec
                        };
                        k_alternatives_by(graph, src, dst, k, self.config.penalty, |_, e| {
                            e.length
                                * slope_weight(
                                    elevation_of(e.u),
                                    elevation_of(e.v),
                                    e.length,
                                    &grade_spec,
                                )
                        })
                    }
                };
                result.map_err(|e| match e {
                    RoutingError::NoRoute(m) => EngineError::NoRoute(m),
                    RoutingError::Argument(m) => EngineError::InvalidRequest(m),
                    other => EngineError::Internal(other.to_string()),
                })
            }
        }
    }

    pub fn rank(&self, query: &RankQuery) -> Result<RankOutcome, EngineError> {
        if query.origin == query.destination {
            return Err(EngineError::NoRoute(
                "origin and destination are the same point".into(),
            ));
        }
        let alpha = query.alpha.unwrap_or(self.config.alpha);
        let k = query.k.unwrap_or(self.config.k);
        if k == 0 {
            return Err(EngineError::InvalidRequest("k must be at least 1".into()));
        }
        let spec = self.weight_spec(alpha)?;
        let candidates = self.candidates(query.origin, query.destination, k, &spec)?;
        let ranked = rank_candidates(
            &candidates,
            self.elevation.as_ref(),
            &spec,
            query.preference,
            self.config.resample_interval_m,
        )?;
        let report = comparison_report(&ranked, query.preference, alpha);
        Ok(RankOutcome { ranked, report })
    }

    /// Elevation profile of an arbitrary encoded polyline, sampled like a
    /// ranked candidate.
    pub fn profile_polyline(&self, encoded: &str) -> Result<ElevationProfile, EngineError> {
        let points = decode_polyline(encoded)
            .map_err(|e| EngineError::InvalidRequest(format!("polyline: {e}")))?;
        let route = Route::from_positions("polyline", points)
            .map_err(|e| EngineError::InvalidRequest(format!("polyline: {e}")))?;
        let sampled = resample_route(&route, self.config.resample_interval_m)
            .map_err(|e| EngineError::InvalidRequest(e.to_string()))?;
        let annotated = attach_elevations(&sampled, self.elevation.as_ref())?;
        elevation_profile(&annotated).map_err(EngineError::from)
    }
}

/// Canonical JSON body shared by the HTTP endpoint and `rank --format json`.
pub fn report_json(report: &Report) -> Result<String, EngineError> {
    to_canonical_string(report).map_err(|e| EngineError::Internal(e.to_string()))
}

fn open_cache(path: &std::path::Path) -> Result<ElevationCache, EngineError> {
    ElevationCache::persistent(path).map_err(|e| EngineError::Setup(e.to_string()))
}
