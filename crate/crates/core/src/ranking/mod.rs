//! Re-ranking of candidate routes by weighted distance, elevation profiles
//! and the comparison report.

mod profile;
mod rank;
mod report;

pub use profile::{elevation_profile, ElevationProfile, ProfileSample};
pub use rank::{rank_candidates, Preference, RankedRoute, DEFAULT_RESAMPLE_INTERVAL_M};
pub use report::{comparison_report, ranked_to_geojson, ProfileArrays, Report, ReportRoute};

use thiserror::Error;

use crate::elevation::ElevationError;
use crate::geo::GeoError;
use crate::weighting::WeightError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RankingError {
    #[error("no candidate routes to rank")]
    EmptyCandidates,
    #[error("route point {index} has no elevation")]
    MissingElevation { index: usize },
    #[error(transparent)]
    Elevation(#[from] ElevationError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Geo(#[from] GeoError),
}
