use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Preference, RankedRoute};
use crate::geo::encode_polyline;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileArrays {
    /// Distance from start, meters.
    pub d: Vec<f64>,
    /// Elevation, meters.
    pub e: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRoute {
    pub id: String,
    /// Point count of the candidate as supplied (before resampling).
    pub points: usize,
    pub od_m: f64,
    pub wd_m: f64,
    pub rank: usize,
    pub profile: ProfileArrays,
    /// Candidate geometry as an encoded polyline.
    pub polyline: String,
}

/// Ranking outcome, one entry per route in rank order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub preference: Preference,
    pub alpha: f64,
    pub routes: Vec<ReportRoute>,
}

pub fn comparison_report(ranked: &[RankedRoute], preference: Preference, alpha: f64) -> Report {
    let mut routes: Vec<ReportRoute> = ranked
        .iter()
        .map(|r| ReportRoute {
            id: r.route.id().to_string(),
            points: r.route.len(),
            od_m: r.od,
            wd_m: r.wd,
            rank: r.rank,
            profile: ProfileArrays {
                d: r.profile.distances(),
                e: r.profile.elevations(),
            },
            polyline: encode_polyline(&r.route.positions().collect::<Vec<_>>()),
        })
        .collect();
    routes.sort_by_key(|r| r.rank);
    Report {
        preference,
        alpha,
        routes,
    }
}

impl Report {
    /// Plain-text table with distances rounded to whole meters.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<5} {:<12} {:>6} {:>8} {:>8}\n",
            "Rank", "Route", "Points", "od m", "wd m"
        );
        for r in &self.routes {
            out.push_str(&format!(
                "{:<5} {:<12} {:>6} {:>8.0} {:>8.0}\n",
                r.rank, r.id, r.points, r.od_m, r.wd_m
            ));
        }
        out
    }

    pub fn route(&self, id: &str) -> Option<&ReportRoute> {
        self.routes.iter().find(|r| r.id == id)
    }
}

/// GeoJSON `FeatureCollection` of ranked candidates with `rank`, `od_m` and
/// `wd_m` properties.
pub fn ranked_to_geojson(ranked: &[RankedRoute]) -> Value {
    let features: Vec<Value> = ranked
        .iter()
        .map(|r| {
            let coordinates: Vec<Value> = r
                .route
                .positions()
                .map(|p| json!([p.lng(), p.lat()]))
                .collect();
            json!({
                "type": "Feature",
                "geometry": {"type": "LineString", "coordinates": coordinates},
                "properties": {
                    "id": r.route.id(),
                    "rank": r.rank,
                    "od_m": r.od,
                    "wd_m": r.wd,
                },
            })
        })
        .collect();
    json!({"type": "FeatureCollection", "features": features})
}
