mod common;

use common::{file_url, read, DESTINATION, ORIGIN};
use std::sync::Arc;
use terrarank_core::elevation::{
    fetch_elevations, CachedProvider, ElevationCache, ElevationSource, RemoteElevationClient,
};
use terrarank_core::geo::{encode_polyline, GeoPoint};
use terrarank_core::routing::{
    fetch_provider_routes, CandidateSource, DirectionsClient, DirectionsError,
};

fn endpoints() -> (GeoPoint, GeoPoint) {
    (
        GeoPoint::new(ORIGIN.0, ORIGIN.1).unwrap(),
        GeoPoint::new(DESTINATION.0, DESTINATION.1).unwrap(),
    )
}

#[test]
fn remote_mock_returns_payload_samples() {
    let payload: serde_json::Value = serde_json::from_str(&read("elevation_3pts.json")).unwrap();
    let results = payload["results"].as_array().unwrap();
    let points: Vec<GeoPoint> = results
        .iter()
        .map(|r| {
            GeoPoint::new(
                r["location"]["lat"].as_f64().unwrap(),
                r["location"]["lng"].as_f64().unwrap(),
            )
            .unwrap()
        })
        .collect();

    let client = RemoteElevationClient::new(file_url("elevation_3pts.json"), Some("k".into()));
    let samples = fetch_elevations(&client, &points).unwrap();
    assert_eq!(samples.len(), 3);
    for ((sample, result), point) in samples.iter().zip(results).zip(&points) {
        assert_eq!(sample.elevation, result["elevation"].as_f64().unwrap());
        assert_eq!(sample.point, *point);
        assert_eq!(sample.source, ElevationSource::Remote);
    }
}

#[test]
fn cached_remote_serves_repeat_requests_from_cache() {
    let client = RemoteElevationClient::new(file_url("elevation_3pts.json"), None);
    let cache = Arc::new(ElevationCache::in_memory());
    let provider = CachedProvider::new(client, cache.clone());
    let points = [
        GeoPoint::new(34.861989, 135.675334).unwrap(),
        GeoPoint::new(34.857, 135.684).unwrap(),
        GeoPoint::new(34.853106, 135.693976).unwrap(),
    ];
    let first = fetch_elevations(&provider, &points).unwrap();
    assert_eq!(cache.len(), 3);
    let second = fetch_elevations(&provider, &points).unwrap();
    for (a, b) in first.iter().zip(&second) {
        assert_eq!(a.elevation, b.elevation);
        assert_eq!(b.source, ElevationSource::Cache);
    }
}

#[test]
fn directions_mock_yields_fixture_routes() {
    let (origin, destination) = endpoints();
    let client = DirectionsClient::new(file_url("directions.json"), None);
    let set = fetch_provider_routes(&client, origin, destination, 3).unwrap();
    assert_eq!(set.source(), CandidateSource::Provider);
    let counts: Vec<usize> = set.routes().iter().map(|r| r.len()).collect();
    assert_eq!(counts, [29, 34, 31]);
    let ids: Vec<&str> = set.routes().iter().map(|r| r.id()).collect();
    assert_eq!(ids, ["route0", "route1", "route2"]);
}

#[test]
fn decoded_routes_reencode_byte_for_byte() {
    let (origin, destination) = endpoints();
    let raw: serde_json::Value = serde_json::from_str(&read("directions.json")).unwrap();
    let client = DirectionsClient::new(file_url("directions.json"), None);
    let set = fetch_provider_routes(&client, origin, destination, 3).unwrap();
    for (route, entry) in set.routes().iter().zip(raw["routes"].as_array().unwrap()) {
        let original = entry["overview_polyline"]["points"].as_str().unwrap();
        assert_eq!(
            encode_polyline(&route.positions().collect::<Vec<_>>()),
            original
        );
    }
}

#[test]
fn k_truncates_provider_routes() {
    let (origin, destination) = endpoints();
    let client = DirectionsClient::new(file_url("directions.json"), None);
    let set = fetch_provider_routes(&client, origin, destination, 1).unwrap();
    assert_eq!(set.len(), 1);
    assert_eq!(set.routes()[0].id(), "route0");
    assert_eq!(set.routes()[0].len(), 29);
}

#[test]
fn zero_results_status_is_passed_through() {
    let (origin, destination) = endpoints();
    let client = DirectionsClient::new(file_url("directions_zero.json"), None);
    match fetch_provider_routes(&client, origin, destination, 3) {
        Err(DirectionsError::Status { status, .. }) => assert_eq!(status, "ZERO_RESULTS"),
        other => panic!("expected status error, got {other:?}"),
    }
}

#[test]
fn missing_mock_file_is_a_transport_error() {
    let (origin, destination) = endpoints();
    let client = DirectionsClient::new(file_url("no_such_file.json"), None);
    assert!(matches!(
        fetch_provider_routes(&client, origin, destination, 3),
        Err(DirectionsError::Transport(_))
    ));
}
