//! Environmental segment weights and the weighted accumulations
//! `wd = Σ w·d` (distance) and `Σ w·t` (time).
//!
//! Slope weights are dimensionless multipliers `1 + alpha·grade`, so `wd`
//! stays in meters and never drops below the plain length. Traffic and
//! road-quality weights are taken verbatim from externally supplied
//! per-segment scores.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::{haversine_distance, Route, RoutePoint};

pub const DEFAULT_ALPHA: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Factor {
    #[default]
    Slope,
    Traffic,
    RoadQuality,
    Unit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GradeMode {
    /// Climbs and descents both add weight.
    #[default]
    Absolute,
    /// Only climbs add weight.
    UphillOnly,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("alpha must be finite and non-negative, got {0}")]
    InvalidAlpha(f64),
    #[error("route point {index} has no elevation")]
    MissingElevation { index: usize },
    #[error("factor {0:?} needs externally supplied per-segment scores")]
    ScoresRequired(Factor),
    #[error("expected {expected} segment scores, got {got}")]
    ScoreCount { expected: usize, got: usize },
    #[error("segment {index} has invalid weight {value}")]
    InvalidScore { index: usize, value: f64 },
    #[error("{0}")]
    Argument(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub factor: Factor,
    pub alpha: f64,
    pub grade_mode: GradeMode,
}

impl Default for WeightSpec {
    fn default() -> Self {
        Self {
            factor: Factor::Slope,
            alpha: DEFAULT_ALPHA,
            grade_mode: GradeMode::Absolute,
        }
    }
}

impl WeightSpec {
    pub fn new(factor: Factor, alpha: f64, grade_mode: GradeMode) -> Result<Self, WeightError> {
        let spec = Self {
            factor,
            alpha,
            grade_mode,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn slope(alpha: f64) -> Result<Self, WeightError> {
        Self::new(Factor::Slope, alpha, GradeMode::Absolute)
    }

    pub fn unit() -> Self {
        Self {
            factor: Factor::Unit,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), WeightError> {
        if self.alpha.is_finite() && self.alpha >= 0.0 {
            Ok(())
        } else {
            Err(WeightError::InvalidAlpha(self.alpha))
        }
    }
}

/// One sub-route: its weight, length in meters and signed elevation change
/// (when both endpoints carry elevations).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentWeight {
    pub w: f64,
    pub d: f64,
    pub delta_e: Option<f64>,
}

/// `1 + alpha·grade` for a segment of horizontal length `d_jk` rising from
/// `e_j` to `e_k`. Zero-length segments get weight 1.
pub fn slope_weight(e_j: f64, e_k: f64, d_jk: f64, spec: &WeightSpec) -> f64 {
    if d_jk <= 0.0 {
        return 1.0;
    }
    let rise = e_k - e_j;
    let grade = match spec.grade_mode {
        GradeMode::Absolute => rise.abs() / d_jk,
        GradeMode::UphillOnly => rise.max(0.0) / d_jk,
    };
    1.0 + spec.alpha * grade
}

/// Assigns a weight to each sub-route of a route.
pub trait SegmentWeigher {
    fn weight(
        &self,
        index: usize,
        from: &RoutePoint,
        to: &RoutePoint,
        length: f64,
    ) -> Result<f64, WeightError>;

    /// Number of segments this weigher was built for, if fixed.
    fn segment_count(&self) -> Option<usize> {
        None
    }
}

struct SpecWeigher<'a>(&'a WeightSpec);

impl SegmentWeigher for SpecWeigher<'_> {
    fn weight(
        &self,
        index: usize,
        from: &RoutePoint,
        to: &RoutePoint,
        length: f64,
    ) -> Result<f64, WeightError> {
        match self.0.factor {
            Factor::Unit => Ok(1.0),
            Factor::Slope => {
                let e_j = from
                    .elevation
                    .ok_or(WeightError::MissingElevation { index })?;
                let e_k = to
                    .elevation
                    .ok_or(WeightError::MissingElevation { index: index + 1 })?;
                Ok(slope_weight(e_j, e_k, length, self.0))
            }
            f @ (Factor::Traffic | Factor::RoadQuality) => Err(WeightError::ScoresRequired(f)),
        }
    }
}

/// Weights supplied from outside, one per segment: a traffic metric or a
/// road-quality evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreWeigher {
    scores: Vec<f64>,
}

impl ScoreWeigher {
    pub fn new(scores: Vec<f64>) -> Result<Self, WeightError> {
        if let Some((index, &value)) = scores
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(WeightError::InvalidScore { index, value });
        }
        Ok(Self { scores })
    }
}

impl SegmentWeigher for ScoreWeigher {
    fn weight(
        &self,
        index: usize,
        _: &RoutePoint,
        _: &RoutePoint,
        _: f64,
    ) -> Result<f64, WeightError> {
        self.scores
            .get(index)
            .copied()
            .ok_or(WeightError::ScoreCount {
                expected: index + 1,
                got: self.scores.len(),
            })
    }

    fn segment_count(&self) -> Option<usize> {
        Some(self.scores.len())
    }
}

pub fn segment_weights_with(
    route: &Route,
    weigher: &dyn SegmentWeigher,
) -> Result<Vec<SegmentWeight>, WeightError> {
    let expected = route.len() - 1;
    if let Some(got) = weigher.segment_count().filter(|&n| n != expected) {
        return Err(WeightError::ScoreCount { expected, got });
    }
    route
        .points()
        .windows(2)
        .enumerate()
        .map(|(index, pair)| {
            let (from, to) = (&pair[0], &pair[1]);
            let d = haversine_distance(from.position, to.position);
            let w = weigher.weight(index, from, to, d)?;
            if !(w.is_finite() && w >= 0.0) {
                return Err(WeightError::InvalidScore { index, value: w });
            }
            let delta_e = from.elevation.zip(to.elevation).map(|(a, b)| b - a);
            Ok(SegmentWeight { w, d, delta_e })
        })
        .collect()
}

/// Per-segment decomposition of `weighted_distance`.
pub fn segment_weights(
    route: &Route,
    spec: &WeightSpec,
) -> Result<Vec<SegmentWeight>, WeightError> {
    spec.validate()?;
    segment_weights_with(route, &SpecWeigher(spec))
}

fn accumulate(segments: &[SegmentWeight]) -> f64 {
    segments.iter().fold(0.0, |acc, s| acc + s.w * s.d)
}

/// `Σ w·d` over consecutive point pairs, summed left to right.
pub fn weighted_distance(route: &Route, spec: &WeightSpec) -> Result<f64, WeightError> {
    Ok(accumulate(&segment_weights(route, spec)?))
}

pub fn weighted_distance_with(
    route: &Route,
    weigher: &dyn SegmentWeigher,
) -> Result<f64, WeightError> {
    Ok(accumulate(&segment_weights_with(route, weigher)?))
}

/// `Σ w·t` for per-segment travel times in seconds.
pub fn weighted_time(segment_times: &[f64], weights: &[f64]) -> Result<f64, WeightError> {
    if segment_times.is_empty() {
        return Err(WeightError::Argument("no segments".into()));
    }
    if segment_times.len() != weights.len() {
        return Err(WeightError::Argument(format!(
            "{} segment times but {} weights",
            segment_times.len(),
            weights.len()
        )));
    }
    if let Some(t) = segment_times
        .iter()
        .find(|t| !(t.is_finite() && **t >= 0.0))
    {
        return Err(WeightError::Argument(format!("invalid segment time {t}")));
    }
    if let Some((index, &value)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| !(w.is_finite() && **w >= 0.0))
    {
        return Err(WeightError::InvalidScore { index, value });
    }
    Ok(segment_times
        .iter()
        .zip(weights)
        .fold(0.0, |acc, (t, w)| acc + w * t))
}
