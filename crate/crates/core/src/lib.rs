//! Elevation-aware route ranking.
//!
//! Candidate routes between two places are scored by their plain great-circle
//! length (`od`) and by a weighted length `wd = Σ w·d` in which each segment's
//! length is scaled by an environmental weight, typically derived from the
//! grade between its endpoints. Candidates come either from a local road
//! graph (Dijkstra plus penalty-based alternatives) or from an external
//! directions provider; elevations come from an ESRI ASCII DEM or an
//! elevation service, optionally behind a cache.

pub mod elevation;
pub mod geo;
pub mod json;
pub mod ranking;
pub mod routing;
pub mod transport;
pub mod weighting;
