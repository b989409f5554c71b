use std::sync::Arc;

use super::{dem_elevation, DemGrid, ElevationError, ElevationSample, ElevationSource};
use crate::geo::{GeoPoint, Route};

/// Something that can answer elevation queries for a batch of points.
pub trait ElevationProvider: Send + Sync {
    /// The underlying source kind (caches report what they wrap).
    fn source(&self) -> ElevationSource;

    /// One sample per input point, in order, or an error listing the points
    /// left unresolved.
    fn elevations(&self, points: &[GeoPoint]) -> Result<Vec<ElevationSample>, ElevationError>;
}

impl<P: ElevationProvider + ?Sized> ElevationProvider for Arc<P> {
    fn source(&self) -> ElevationSource {
        (**self).source()
    }

    fn elevations(&self, points: &[GeoPoint]) -> Result<Vec<ElevationSample>, ElevationError> {
        (**self).elevations(points)
    }
}

pub struct DemProvider {
    grid: Arc<DemGrid>,
}

impl DemProvider {
    pub fn new(grid: Arc<DemGrid>) -> Self {
        Self { grid }
    }

    pub fn grid(&self) -> &DemGrid {
        &self.grid
    }
}

impl ElevationProvider for DemProvider {
    fn source(&self) -> ElevationSource {
        ElevationSource::Dem
    }

    fn elevations(&self, points: &[GeoPoint]) -> Result<Vec<ElevationSample>, ElevationError> {
        let mut samples = Vec::with_capacity(points.len());
        let mut unresolved = Vec::new();
        let mut first_error = None;
        for (i, &point) in points.iter().enumerate() {
            match dem_elevation(&self.grid, point) {
                Ok(elevation) => samples.push(ElevationSample {
                    point,
                    elevation,
                    source: ElevationSource::Dem,
                }),
                Err(e) => {
                    unresolved.push(i);
                    first_error.get_or_insert(e);
                }
            }
        }
        match first_error {
            None => Ok(samples),
            Some(e) => Err(ElevationError::Provider {
                message: e.to_string(),
                unresolved,
            }),
        }
    }
}

pub fn fetch_elevations(
    provider: &dyn ElevationProvider,
    points: &[GeoPoint],
) -> Result<Vec<ElevationSample>, ElevationError> {
    if points.is_empty() {
        return Err(ElevationError::EmptyRequest);
    }
    let samples = provider.elevations(points)?;
    if samples.len() != points.len() {
        return Err(ElevationError::Provider {
            message: format!(
                "provider returned {} samples for {} points",
                samples.len(),
                points.len()
            ),
            unresolved: (samples.len().min(points.len())..points.len()).collect(),
        });
    }
    Ok(samples)
}

/// Same route with every point's elevation taken from `provider`.
pub fn attach_elevations(
    route: &Route,
    provider: &dyn ElevationProvider,
) -> Result<Route, ElevationError> {
    let positions: Vec<GeoPoint> = route.positions().collect();
    let samples = fetch_elevations(provider, &positions)?;
    let elevations: Vec<f64> = samples.iter().map(|s| s.elevation).collect();
    route
        .with_elevations(&elevations)
        .map_err(|e| ElevationError::Provider {
            message: e.to_string(),
            unresolved: Vec::new(),
        })
}
