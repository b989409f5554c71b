//! Geodesic substrate: points, routes, great-circle distance, the encoded
//! polyline codec and great-circle resampling.

mod distance;
mod geojson;
mod point;
mod polyline;
mod resample;
mod route;

pub use distance::{haversine_distance, interpolate, path_length, EARTH_RADIUS_M};
pub use geojson::route_to_geojson;
pub use point::GeoPoint;
pub use polyline::{decode_polyline, encode_polyline, quantize, PolylineError, POLYLINE_FACTOR};
pub use resample::resample_route;
pub use route::{Route, RoutePoint};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    #[error("latitude {0} outside [-90, 90]")]
    Latitude(f64),
    #[error("longitude {0} is not finite")]
    Longitude(f64),
    #[error("elevation at point {index} is not finite")]
    Elevation { index: usize },
    #[error("route needs at least two distinct points, got {0}")]
    TooFewPoints(usize),
    #[error("{0}")]
    Argument(String),
}
