use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{elevation_profile, ElevationProfile, RankingError};
use crate::elevation::{attach_elevations, ElevationProvider};
use crate::geo::{path_length, resample_route, GeoError, Route};
use crate::routing::CandidateSet;
use crate::weighting::{weighted_distance, WeightSpec};

pub const DEFAULT_RESAMPLE_INTERVAL_M: f64 = 30.0;

/// How candidates are ordered: by plain length, by weighted length (gentle
/// first) or by weighted length descending (hardest first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Preference {
    Shortest,
    #[default]
    Comfort,
    Challenge,
}

impl Preference {
    pub fn as_str(self) -> &'static str {
        match self {
            Preference::Shortest => "shortest",
            Preference::Comfort => "comfort",
            Preference::Challenge => "challenge",
        }
    }
}

impl fmt::Display for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preference {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "shortest" => Ok(Preference::Shortest),
            "comfort" => Ok(Preference::Comfort),
            "challenge" => Ok(Preference::Challenge),
            other => Err(format!(
                "unknown preference '{other}' (expected shortest, comfort or challenge)"
            )),
        }
    }
}

/// A scored candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedRoute {
    /// The candidate as supplied.
    pub route: Route,
    /// The candidate after resampling, with elevations on every point.
    pub sampled: Route,
    /// Position of the candidate in the input set.
    pub candidate_index: usize,
    /// Plain great-circle length of `sampled` (equal to that of `route` up
    /// to rounding), meters. Measured on the same points as `wd`.
    pub od: f64,
    /// Weighted length, meters.
    pub wd: f64,
    pub rank: usize,
    /// One sample per point of `sampled`.
    pub profile: ElevationProfile,
}

fn score(
    index: usize,
    route: &Route,
    provider: &dyn ElevationProvider,
    spec: &WeightSpec,
    resample_interval: f64,
) -> Result<RankedRoute, RankingError> {
    let resampled = resample_route(route, resample_interval)?;
    let sampled = attach_elevations(&resampled, provider)?;
    let wd = weighted_distance(&sampled, spec)?;
    let od = path_length(&sampled);
    let profile = elevation_profile(&sampled)?;
    Ok(RankedRoute {
        route: route.clone(),
        sampled,
        candidate_index: index,
        od,
        wd,
        rank: 0,
        profile,
    })
}

/// Resamples, annotates and scores every candidate, then sorts them for
/// `preference`. Ties fall back to smaller `od`, then to input order.
pub fn rank_candidates(
    candidates: &CandidateSet,
    provider: &dyn ElevationProvider,
    spec: &WeightSpec,
    preference: Preference,
    resample_interval: f64,
) -> Result<Vec<RankedRoute>, RankingError> {
    if candidates.routes().is_empty() {
        return Err(RankingError::EmptyCandidates);
    }
    spec.validate()?;
    if !(resample_interval > 0.0 && resample_interval.is_finite()) {
        return Err(GeoError::Argument(format!(
            "resample interval must be positive, got {resample_interval}"
        ))
        .into());
    }
    let mut ranked = candidates
        .routes()
        .par_iter()
        .enumerate()
        .map(|(i, route)| score(i, route, provider, spec, resample_interval))
        .collect::<Result<Vec<_>, _>>()?;

    ranked.sort_by(|a, b| {
        let primary = match preference {
            Preference::Shortest => Ordering::Equal,
            Preference::Comfort => a.wd.total_cmp(&b.wd),
            Preference::Challenge => b.wd.total_cmp(&a.wd),
        };
        primary
            .then_with(|| a.od.total_cmp(&b.od))
            .then_with(|| a.candidate_index.cmp(&b.candidate_index))
    });
    for (rank, r) in ranked.iter_mut().enumerate() {
        r.rank = rank;
    }
    Ok(ranked)
}
