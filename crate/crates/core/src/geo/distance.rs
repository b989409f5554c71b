use super::{GeoPoint, Route};

/// Mean Earth radius in meters.
pub const EARTH_RADIUS_M: f64 = 6_371_008.8;

/// Great-circle distance in meters (haversine form).
pub fn haversine_distance(p: GeoPoint, q: GeoPoint) -> f64 {
    let (lat1, lat2) = (p.lat().to_radians(), q.lat().to_radians());
    // abs() keeps the result bitwise symmetric in its arguments
    let dlat = (q.lat() - p.lat()).abs().to_radians();
    let dlng = (q.lng() - p.lng()).abs().to_radians();
    let s_lat = (dlat / 2.0).sin();
    let s_lng = (dlng / 2.0).sin();
    let a = s_lat * s_lat + lat1.cos() * lat2.cos() * s_lng * s_lng;
    let a = a.clamp(0.0, 1.0);
    2.0 * EARTH_RADIUS_M * a.sqrt().atan2((1.0 - a).sqrt())
}

/// Sum of great-circle distances over consecutive route points.
pub fn path_length(route: &Route) -> f64 {
    route
        .points()
        .windows(2)
        .map(|w| haversine_distance(w[0].position, w[1].position))
        .fold(0.0, |acc, d| acc + d)
}

/// Point at fraction `t` of the great-circle arc from `p` to `q`.
pub fn interpolate(p: GeoPoint, q: GeoPoint, t: f64) -> GeoPoint {
    let a = p.to_unit_vector();
    let b = q.to_unit_vector();
    let dot = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0);
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let sin_omega = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    let omega = sin_omega.atan2(dot);
    if sin_omega < 1e-15 {
        return p;
    }
    let wa = ((1.0 - t) * omega).sin() / sin_omega;
    let wb = (t * omega).sin() / sin_omega;
    GeoPoint::from_unit_vector([
        wa * a[0] + wb * b[0],
        wa * a[1] + wb * b[1],
        wa * a[2] + wb * b[2],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(lat: f64, lng: f64) -> GeoPoint {
        GeoPoint::new(lat, lng).unwrap()
    }

    // Spherical law of cosines, kept separate from the haversine path.
    fn law_of_cosines(p: GeoPoint, q: GeoPoint) -> f64 {
        let (a, b) = (p.lat().to_radians(), q.lat().to_radians());
        let dl = (q.lng() - p.lng()).to_radians();
        let c = (a.sin() * b.sin() + a.cos() * b.cos() * dl.cos()).clamp(-1.0, 1.0);
        EARTH_RADIUS_M * c.acos()
    }

    #[test]
    fn identical_points_are_zero() {
        let p = pt(34.861989, 135.675334);
        assert_eq!(haversine_distance(p, p), 0.0);
    }

    #[test]
    fn station_to_community() {
        let p = pt(34.861989, 135.675334);
        let q = pt(34.853106, 135.693976);
        let d = haversine_distance(p, q);
        // 1966.962372773 m from a 40-digit law-of-cosines evaluation
        assert!((d - 1966.962372773).abs() < 1e-6, "{d}");
        assert!((d - law_of_cosines(p, q)).abs() < 0.01);
    }

    #[test]
    fn antipodal_on_equator() {
        let d = haversine_distance(pt(0.0, 0.0), pt(0.0, 180.0));
        assert!((d - std::f64::consts::PI * EARTH_RADIUS_M).abs() < 1e-6);
    }

    #[test]
    fn crosses_antimeridian() {
        let d = haversine_distance(pt(0.0, 179.5), pt(0.0, -179.5));
        let expected = EARTH_RADIUS_M * 1f64.to_radians();
        assert!((d - expected).abs() < 1e-6);
    }

    #[test]
    fn interpolate_midpoint_splits_length() {
        let p = pt(34.861989, 135.675334);
        let q = pt(34.853106, 135.693976);
        let m = interpolate(p, q, 0.5);
        let whole = haversine_distance(p, q);
        assert!((haversine_distance(p, m) - whole / 2.0).abs() < 1e-6);
        assert!((haversine_distance(m, q) - whole / 2.0).abs() < 1e-6);
        assert_eq!(interpolate(p, q, 0.0), p);
    }

    proptest! {
        #[test]
        fn symmetric_and_nonnegative(a in -90.0..90.0f64, b in -180.0..180.0f64,
                                     c in -90.0..90.0f64, d in -180.0..180.0f64) {
            let (p, q) = (pt(a, b), pt(c, d));
            let pq = haversine_distance(p, q);
            prop_assert!(pq >= 0.0);
            prop_assert_eq!(pq.to_bits(), haversine_distance(q, p).to_bits());
        }
    }
}
