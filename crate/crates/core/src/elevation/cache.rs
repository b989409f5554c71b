use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::Path;
use std::sync::{Arc, Mutex, RwLock};

use super::{ElevationError, ElevationProvider, ElevationSample, ElevationSource};
use crate::geo::{GeoPoint, POLYLINE_FACTOR};

/// Cache key: latitude and longitude on the 1e-5 degree grid.
pub fn cache_key(p: GeoPoint) -> (i64, i64) {
    (
        (p.lat() * POLYLINE_FACTOR).round() as i64,
        (p.lng() * POLYLINE_FACTOR).round() as i64,
    )
}

/// Concurrent elevation cache keyed on the polyline grid, optionally
/// persisted as `lat,lng,elevation` lines appended to a file.
#[derive(Default)]
pub struct ElevationCache {
    entries: RwLock<HashMap<(i64, i64), f64>>,
    log: Option<Mutex<File>>,
}

impl ElevationCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Loads `path` if it exists and appends new entries to it from then on.
    pub fn persistent(path: &Path) -> Result<Self, ElevationError> {
        let mut entries = HashMap::new();
        if path.exists() {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ElevationError::Cache(format!("{}: {e}", path.display())))?;
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let (key, elevation) = parse_record(line).ok_or_else(|| {
                    ElevationError::Cache(format!("{}:{}: malformed record", path.display(), i + 1))
                })?;
                entries.insert(key, elevation);
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| ElevationError::Cache(format!("{}: {e}", path.display())))?;
        Ok(Self {
            entries: RwLock::new(entries),
            log: Some(Mutex::new(file)),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, p: GeoPoint) -> Option<f64> {
        self.entries.read().unwrap().get(&cache_key(p)).copied()
    }

    pub fn insert_many(&self, items: &[(GeoPoint, f64)]) -> Result<(), ElevationError> {
        let mut fresh = Vec::new();
        {
            let mut entries = self.entries.write().unwrap();
            for &(p, e) in items {
                let key = cache_key(p);
                if entries.insert(key, e) != Some(e) {
                    fresh.push((key, e));
                }
            }
        }
        if let (Some(log), false) = (&self.log, fresh.is_empty()) {
            let mut text = String::new();
            for ((lat, lng), e) in fresh {
                text.push_str(&format_record(lat, lng, e));
            }
            let mut file = log.lock().unwrap();
            file.write_all(text.as_bytes())
                .map_err(|e| ElevationError::Cache(e.to_string()))?;
        }
        Ok(())
    }
}

fn format_record(lat: i64, lng: i64, elevation: f64) -> String {
    format!(
        "{:.5},{:.5},{}\n",
        lat as f64 / POLYLINE_FACTOR,
        lng as f64 / POLYLINE_FACTOR,
        elevation
    )
}

fn parse_record(line: &str) -> Option<((i64, i64), f64)> {
    let mut parts = line.trim().split(',');
    let lat: f64 = parts.next()?.trim().parse().ok()?;
    let lng: f64 = parts.next()?.trim().parse().ok()?;
    let elevation: f64 = parts.next()?.trim().parse().ok()?;
    if parts.next().is_some() || !elevation.is_finite() {
        return None;
    }
    let p = GeoPoint::new(lat, lng).ok()?;
    Some((cache_key(p), elevation))
}

/// Consults the cache first and forwards only misses to `inner`.
pub struct CachedProvider<P> {
    inner: P,
    cache: Arc<ElevationCache>,
}

impl<P: ElevationProvider> CachedProvider<P> {
    pub fn new(inner: P, cache: Arc<ElevationCache>) -> Self {
        Self { inner, cache }
    }

    pub fn cache(&self) -> &ElevationCache {
        &self.cache
    }
}

impl<P: ElevationProvider> ElevationProvider for CachedProvider<P> {
    fn source(&self) -> ElevationSource {
        self.inner.source()
    }

    fn elevations(&self, points: &[GeoPoint]) -> Result<Vec<ElevationSample>, ElevationError> {
        let mut out: Vec<Option<ElevationSample>> = points
            .iter()
            .map(|&point| {
                self.cache.get(point).map(|elevation| ElevationSample {
                    point,
                    elevation,
                    source: ElevationSource::Cache,
                })
            })
            .collect();
        let missing: Vec<usize> = (0..points.len()).filter(|&i| out[i].is_none()).collect();
        if !missing.is_empty() {
            let query: Vec<GeoPoint> = missing.iter().map(|&i| points[i]).collect();
            let fetched = self.inner.elevations(&query).map_err(|e| match e {
                ElevationError::Provider {
                    message,
                    unresolved,
                } => ElevationError::Provider {
                    message,
                    unresolved: unresolved.into_iter().map(|j| missing[j]).collect(),
                },
                other => other,
            })?;
            if fetched.len() != query.len() {
                return Err(ElevationError::Provider {
                    message: format!(
                        "provider returned {} samples for {} points",
                        fetched.len(),
                        query.len()
                    ),
                    unresolved: missing,
                });
            }
            let items: Vec<(GeoPoint, f64)> =
                fetched.iter().map(|s| (s.point, s.elevation)).collect();
            self.cache.insert_many(&items)?;
            for (&i, sample) in missing.iter().zip(fetched) {
                out[i] = Some(ElevationSample {
                    point: points[i],
                    ..sample
                });
            }
        }
        Ok(out
            .into_iter()
            .map(|s| s.expect("every slot filled"))
            .collect())
    }
}
