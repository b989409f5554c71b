use serde::{Deserialize, Serialize};

use super::{GeoError, GeoPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoutePoint {
    pub position: GeoPoint,
    /// Meters above the reference datum.
    pub elevation: Option<f64>,
}

impl RoutePoint {
    pub fn new(position: GeoPoint) -> Self {
        Self {
            position,
            elevation: None,
        }
    }
}

impl From<GeoPoint> for RoutePoint {
    fn from(position: GeoPoint) -> Self {
        Self::new(position)
    }
}

/// An ordered series of route points from start (first) to destination
/// (last). Consecutive duplicate positions are collapsed at construction, so
/// every segment of a `Route` has positive length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Route {
    id: String,
    points: Vec<RoutePoint>,
}

impl Route {
    pub fn new(id: impl Into<String>, points: Vec<RoutePoint>) -> Result<Self, GeoError> {
        let mut collapsed: Vec<RoutePoint> = Vec::with_capacity(points.len());
        for (index, point) in points.into_iter().enumerate() {
            if point.elevation.is_some_and(|e| !e.is_finite()) {
                return Err(GeoError::Elevation { index });
            }
            if collapsed.last().map(|p| p.position) == Some(point.position) {
                continue;
            }
            collapsed.push(point);
        }
        if collapsed.len() < 2 {
            return Err(GeoError::TooFewPoints(collapsed.len()));
        }
        Ok(Self {
            id: id.into(),
            points: collapsed,
        })
    }

    pub fn from_positions(
        id: impl Into<String>,
        positions: impl IntoIterator<Item = GeoPoint>,
    ) -> Result<Self, GeoError> {
        Self::new(id, positions.into_iter().map(RoutePoint::new).collect())
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn points(&self) -> &[RoutePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; kept alongside `len` for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn start(&self) -> GeoPoint {
        self.points[0].position
    }

    pub fn destination(&self) -> GeoPoint {
        self.points[self.points.len() - 1].position
    }

    pub fn positions(&self) -> impl Iterator<Item = GeoPoint> + '_ {
        self.points.iter().map(|p| p.position)
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    /// Same geometry with every elevation replaced. `elevations` must have one
    /// finite entry per point.
    pub fn with_elevations(&self, elevations: &[f64]) -> Result<Self, GeoError> {
        if elevations.len() != self.points.len() {
            return Err(GeoError::Argument(format!(
                "expected {} elevations, got {}",
                self.points.len(),
                elevations.len()
            )));
        }
        let mut points = self.points.clone();
        for (index, (point, &e)) in points.iter_mut().zip(elevations).enumerate() {
            if !e.is_finite() {
                return Err(GeoError::Elevation { index });
            }
            point.elevation = Some(e);
        }
        Ok(Self {
            id: self.id.clone(),
            points,
        })
    }

    /// Sub-route from point `from` to point `to` inclusive (indices into
    /// `points`).
    pub fn slice(&self, from: usize, to: usize) -> Result<Self, GeoError> {
        if from >= to || to >= self.points.len() {
            return Err(GeoError::Argument(format!(
                "invalid slice {from}..={to} of {} points",
                self.points.len()
            )));
        }
        Self::new(self.id.clone(), self.points[from..=to].to_vec())
    }
}
