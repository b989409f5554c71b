use serde::{Deserialize, Serialize};

use super::RankingError;
use crate::geo::{haversine_distance, Route};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    /// Cumulative great-circle distance from the start, meters.
    pub distance: f64,
    pub elevation: f64,
}

/// Elevation against distance from the start, one sample per route point.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ElevationProfile {
    pub samples: Vec<ProfileSample>,
}

impl ElevationProfile {
    pub fn distances(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.distance).collect()
    }

    pub fn elevations(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.elevation).collect()
    }

    pub fn max_elevation(&self) -> Option<f64> {
        self.samples.iter().map(|s| s.elevation).reduce(f64::max)
    }

    pub fn total_length(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.distance)
    }

    /// `d_m,e_m` CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("d_m,e_m\n");
        for s in &self.samples {
            out.push_str(&format!("{},{}\n", s.distance, s.elevation));
        }
        out
    }
}

pub fn elevation_profile(route: &Route) -> Result<ElevationProfile, RankingError> {
    let mut samples = Vec::with_capacity(route.len());
    let mut distance = 0.0;
    let mut prev = None;
    for (index, point) in route.points().iter().enumerate() {
        let elevation = point
            .elevation
            .ok_or(RankingError::MissingElevation { index })?;
        if let Some(p) = prev {
            distance += haversine_distance(p, point.position);
        }
        prev = Some(point.position);
        samples.push(ProfileSample {
            distance,
            elevation,
        });
    }
    Ok(ElevationProfile { samples })
}
