use super::{haversine_distance, interpolate, GeoError, Route, RoutePoint};

/// Insert great-circle-interpolated points so that no segment is longer than
/// `max_interval` meters. Original points are kept in order with their
/// elevations; inserted points carry no elevation.
pub fn resample_route(route: &Route, max_interval: f64) -> Result<Route, GeoError> {
    if !(max_interval > 0.0 && max_interval.is_finite()) {
        return Err(GeoError::Argument(format!(
            "resample interval must be positive, got {max_interval}"
        )));
    }
    let points = route.points();
    let mut out = Vec::with_capacity(points.len());
    for pair in points.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        out.push(a);
        let d = haversine_distance(a.position, b.position);
        if d <= max_interval {
            continue;
        }
        let mut pieces = (d / max_interval).ceil();
        if d / pieces > max_interval * (1.0 - 1e-9) {
            pieces += 1.0;
        }
        let pieces = pieces as usize;
        for i in 1..pieces {
            let t = i as f64 / pieces as f64;
            out.push(RoutePoint::new(interpolate(a.position, b.position, t)));
        }
    }
    out.push(points[points.len() - 1]);
    Route::new(route.id(), out)
}
