//! Elevation sources: ESRI ASCII DEM rasters, a remote elevation service and
//! a quantized cache in front of either.

mod cache;
mod dem;
mod provider;
mod remote;

pub use cache::{cache_key, CachedProvider, ElevationCache};
pub use dem::{dem_elevation, load_dem, DemGrid, DemParseError};
pub use provider::{attach_elevations, fetch_elevations, DemProvider, ElevationProvider};
pub use remote::RemoteElevationClient;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::GeoPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElevationSource {
    Dem,
    Remote,
    Cache,
}

impl ElevationSource {
    pub fn as_str(self) -> &'static str {
        match self {
            ElevationSource::Dem => "dem",
            ElevationSource::Remote => "remote",
            ElevationSource::Cache => "cache",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElevationSample {
    pub point: GeoPoint,
    /// Meters.
    pub elevation: f64,
    pub source: ElevationSource,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElevationError {
    #[error("point {0} lies outside the DEM coverage")]
    OutOfBounds(GeoPoint),
    #[error("DEM cell (row {row}, col {col}) holds no data")]
    NoData { row: usize, col: usize },
    #[error("elevation request without points")]
    EmptyRequest,
    #[error("elevation provider failed ({} unresolved points): {message}", unresolved.len())]
    Provider {
        message: String,
        /// Indices into the request that have no elevation.
        unresolved: Vec<usize>,
    },
    #[error("cache file: {0}")]
    Cache(String),
}
