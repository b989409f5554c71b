use std::sync::Arc;

use serde::Deserialize;

use super::{ElevationError, ElevationProvider, ElevationSample, ElevationSource};
use crate::geo::GeoPoint;
use crate::transport::{join_query, transport_for, Transport};

/// Points per request; keeps URLs well under common length limits.
const BATCH: usize = 100;

#[derive(Debug, Deserialize)]
struct Response {
    status: String,
    #[serde(default)]
    results: Vec<ResultEntry>,
    #[serde(default)]
    error_message: Option<String>,
}

#[derive(Debug, Deserialize)]
struct ResultEntry {
    #[allow(dead_code)]
    location: Location,
    elevation: f64,
}

#[derive(Debug, Deserialize)]
struct Location {
    #[allow(dead_code)]
    lat: f64,
    #[allow(dead_code)]
    lng: f64,
}

/// Client for an elevation service answering
/// `GET <url>?locations=lat,lng|lat,lng…[&key=…]` with
/// `{"results":[{"location":{"lat","lng"},"elevation"}…],"status":"OK"}`.
pub struct RemoteElevationClient {
    base_url: String,
    api_key: Option<String>,
    transport: Arc<dyn Transport>,
}

impl RemoteElevationClient {
    pub fn new(base_url: impl Into<String>, api_key: Option<String>) -> Self {
        let base_url = base_url.into();
        let transport = transport_for(&base_url);
        Self::with_transport(base_url, api_key, transport)
    }

    pub fn with_transport(
        base_url: impl Into<String>,
        api_key: Option<String>,
        transport: Arc<dyn Transport>,
    ) -> Self {
        Self {
            base_url: base_url.into(),
            api_key,
            transport,
        }
    }

    fn request_url(&self, points: &[GeoPoint]) -> String {
        let locations: Vec<String> = points
            .iter()
            .map(|p| format!("{},{}", p.lat(), p.lng()))
            .collect();
        let mut params = vec![("locations", locations.join("|"))];
        if let Some(key) = &self.api_key {
            params.push(("key", key.clone()));
        }
        join_query(&self.base_url, &params)
    }

    fn fetch_batch(&self, points: &[GeoPoint]) -> Result<Vec<f64>, String> {
        let body = self
            .transport
            .get(&self.request_url(points))
            .map_err(|e| e.to_string())?;
        let response: Response =
            serde_json::from_str(&body).map_err(|e| format!("malformed response: {e}"))?;
        if response.status != "OK" {
            return Err(match response.error_message {
                Some(m) => format!("status {}: {m}", response.status),
                None => format!("status {}", response.status),
            });
        }
        if response.results.len() != points.len() {
            return Err(format!(
                "{} results for {} locations",
                response.results.len(),
                points.len()
            ));
        }
        let elevations: Vec<f64> = response.results.iter().map(|r| r.elevation).collect();
        if elevations.iter().any(|e| !e.is_finite()) {
            return Err("non-finite elevation in response".into());
        }
        Ok(elevations)
    }
}

impl ElevationProvider for RemoteElevationClient {
    fn source(&self) -> ElevationSource {
        ElevationSource::Remote
    }

    fn elevations(&self, points: &[GeoPoint]) -> Result<Vec<ElevationSample>, ElevationError> {
        let mut samples = Vec::with_capacity(points.len());
        for (chunk_index, chunk) in points.chunks(BATCH).enumerate() {
            let elevations =
                self.fetch_batch(chunk)
                    .map_err(|message| ElevationError::Provider {
                        message,
                        unresolved: (chunk_index * BATCH..points.len()).collect(),
                    })?;
            samples.extend(chunk.iter().zip(elevations).map(|(&point, elevation)| {
                ElevationSample {
                    point,
                    elevation,
                    source: ElevationSource::Remote,
                }
            }));
        }
        Ok(samples)
    }
}
