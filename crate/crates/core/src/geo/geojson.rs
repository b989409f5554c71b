use serde_json::{json, Value};

use super::Route;

/// GeoJSON `Feature` with a `LineString` geometry in `[lng, lat]` order. When
/// every point has an elevation, an `elevations` property parallel to the
/// coordinates is added.
pub fn route_to_geojson(route: &Route) -> Value {
    let coordinates: Vec<Value> = route
        .positions()
        .map(|p| json!([p.lng(), p.lat()]))
        .collect();
    let elevations: Option<Vec<f64>> = route.points().iter().map(|p| p.elevation).collect();
    let mut properties = serde_json::Map::new();
    properties.insert("id".into(), json!(route.id()));
    if let Some(e) = elevations {
        properties.insert("elevations".into(), json!(e));
    }
    json!({
        "type": "Feature",
        "geometry": {"type": "LineString", "coordinates": coordinates},
        "properties": properties,
    })
}
