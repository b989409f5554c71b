use std::sync::Arc;

use serde::Deserialize;
use thiserror::Error;

use super::{CandidateSet, CandidateSource};
use crate::geo::{decode_polyline, GeoPoint, PolylineError, Route};
use crate::transport::{join_query, transport_for, Transport, TransportError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DirectionsError {
    #[error(transparent)]
    Transport(#[from] TransportError),
    /// Non-OK status from the provider, carried verbatim.
    #[error("directions provider status {status}{}", message.as_deref().map(|m| format!(": {m}")).unwrap_or_default())]
    Status {
        status: String,
        message: Option<String>,
    },
    #[error("malformed directions response: {0}")]
    Malformed(String),
    #[error("route {route}: undecodable polyline: {source}")]
    Polyline { route: usize, source: PolylineError },
    #[error("{0}")]
    Argument(String),
}

#[derive(Debug, Deserialize)]
struct Response {
    status: String,
    #[serde(default)]
    routes: Vec<RouteEntry>,
    #[serde(default)]
    error_message: Option<String>,
}

#[derive(Debug, Deserialize)]
struct RouteEntry {
    overview_polyline: Polyline,
}

#[derive(Debug, Deserialize)]
struct Polyline {
    points: String,
}

/// Client for a directions service answering
/// `GET <url>?origin=lat,lng&destination=lat,lng&alternatives=true[&key=…]`
/// with `{"status":"OK","routes":[{"overview_polyline":{"points":"…"}}…]}`.
/// A `file://` URL serves a fixed response from disk.
pub struct DirectionsClient {
    base_url: String,
    api_key: Option<String>,
    transport: Arc<dyn Transport>,
}

impl DirectionsClient {
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

    fn request_url(&self, origin: GeoPoint, destination: GeoPoint) -> String {
        let mut params = vec![
            ("origin", format!("{},{}", origin.lat(), origin.lng())),
            (
                "destination",
                format!("{},{}", destination.lat(), destination.lng()),
            ),
            ("alternatives", "true".to_string()),
        ];
        if let Some(key) = &self.api_key {
            params.push(("key", key.clone()));
        }
        join_query(&self.base_url, &params)
    }

    /// Raw encoded polylines in provider order.
    pub fn fetch_polylines(
        &self,
        origin: GeoPoint,
        destination: GeoPoint,
    ) -> Result<Vec<String>, DirectionsError> {
        let body = self.transport.get(&self.request_url(origin, destination))?;
        let response: Response =
            serde_json::from_str(&body).map_err(|e| DirectionsError::Malformed(e.to_string()))?;
        if response.status != "OK" {
            return Err(DirectionsError::Status {
                status: response.status,
                message: response.error_message,
            });
        }
        if response.routes.is_empty() {
            return Err(DirectionsError::Malformed("status OK but no routes".into()));
        }
        Ok(response
            .routes
            .into_iter()
            .map(|r| r.overview_polyline.points)
            .collect())
    }
}

/// At most `k` provider routes, in provider order, named `route0`, `route1`, ….
pub fn fetch_provider_routes(
    client: &DirectionsClient,
    origin: GeoPoint,
    destination: GeoPoint,
    k: usize,
) -> Result<CandidateSet, DirectionsError> {
    if k == 0 {
        return Err(DirectionsError::Argument("k must be at least 1".into()));
    }
    let polylines = client.fetch_polylines(origin, destination)?;
    let routes = polylines
        .iter()
        .take(k)
        .enumerate()
        .map(|(i, encoded)| {
            let points = decode_polyline(encoded)
                .map_err(|source| DirectionsError::Polyline { route: i, source })?;
            Route::from_positions(format!("route{i}"), points)
                .map_err(|e| DirectionsError::Malformed(format!("route {i}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    CandidateSet::new(routes, CandidateSource::Provider)
        .map_err(|e| DirectionsError::Malformed(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Mutex;

    struct Canned(String, Mutex<Vec<String>>);

    impl Transport for Canned {
        fn get(&self, url: &str) -> Result<String, TransportError> {
            self.1.lock().unwrap().push(url.to_string());
            Ok(self.0.clone())
        }
    }

    fn client(body: &str) -> (DirectionsClient, Arc<Canned>) {
        let t = Arc::new(Canned(body.to_string(), Mutex::new(Vec::new())));
        (
            DirectionsClient::with_transport("http://dir/json", Some("KEY".into()), t.clone()),
            t,
        )
    }

    fn pt(lat: f64, lng: f64) -> GeoPoint {
        GeoPoint::new(lat, lng).unwrap()
    }

    #[test]
    fn request_url() {
        let (c, t) = client(
            r#"{"status":"OK","routes":[{"overview_polyline":{"points":"_p~iF~ps|U_ulLnnqC"}}]}"#,
        );
        let set = fetch_provider_routes(&c, pt(1.0, 2.0), pt(3.0, 4.0), 3).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(
            t.1.lock().unwrap()[0],
            "http://dir/json?origin=1,2&destination=3,4&alternatives=true&key=KEY"
        );
    }

    #[test]
    fn status_passthrough() {
        let (c, _) = client(r#"{"status":"ZERO_RESULTS","routes":[]}"#);
        let err = fetch_provider_routes(&c, pt(1.0, 2.0), pt(3.0, 4.0), 3).unwrap_err();
        assert_eq!(
            err,
            DirectionsError::Status {
                status: "ZERO_RESULTS".into(),
                message: None
            }
        );
        assert!(err.to_string().contains("ZERO_RESULTS"));
    }

    #[test]
    fn bad_polyline_fails_whole_set() {
        let (c, _) = client(
            r#"{"status":"OK","routes":[{"overview_polyline":{"points":"_p~iF~ps|U_ulLnnqC"}},{"overview_polyline":{"points":"_p~iF"}}]}"#,
        );
        assert!(matches!(
            fetch_provider_routes(&c, pt(1.0, 2.0), pt(3.0, 4.0), 3),
            Err(DirectionsError::Polyline { route: 1, .. })
        ));
    }

    #[test]
    fn malformed_body() {
        let (c, _) = client("<html>");
        assert!(matches!(
            fetch_provider_routes(&c, pt(1.0, 2.0), pt(3.0, 4.0), 3),
            Err(DirectionsError::Malformed(_))
        ));
    }
}
