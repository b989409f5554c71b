//! Encoded polyline format at 1e-5 degree precision.
//!
//! Each coordinate is the zigzag-encoded delta from the previous one, split
//! into 5-bit chunks (least significant first), `0x20` marking continuation,
//! and offset by 63 into printable ASCII. Latitude precedes longitude.

use thiserror::Error;

use super::GeoPoint;

pub const POLYLINE_FACTOR: f64 = 1e5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolylineError {
    #[error("invalid byte {byte:#04x} at offset {offset}")]
    InvalidByte { offset: usize, byte: u8 },
    #[error("truncated chunk sequence at offset {offset}")]
    Truncated { offset: usize },
    #[error("value overflow at offset {offset}")]
    Overflow { offset: usize },
    #[error("decoded coordinate out of range at offset {offset}")]
    OutOfRange { offset: usize },
}

fn scaled(v: f64) -> i64 {
    (v * POLYLINE_FACTOR).round() as i64
}

/// Round a point to the polyline grid.
pub fn quantize(p: GeoPoint) -> GeoPoint {
    GeoPoint::new(
        scaled(p.lat()) as f64 / POLYLINE_FACTOR,
        scaled(p.lng()) as f64 / POLYLINE_FACTOR,
    )
    .expect("quantized point stays in range")
}

fn push_value(out: &mut String, delta: i64) {
    let mut v = ((delta << 1) ^ (delta >> 63)) as u64;
    while v >= 0x20 {
        out.push((((v & 0x1f) | 0x20) as u8 + 63) as char);
        v >>= 5;
    }
    out.push((v as u8 + 63) as char);
}

pub fn encode_polyline(points: &[GeoPoint]) -> String {
    let mut out = String::new();
    let (mut prev_lat, mut prev_lng) = (0i64, 0i64);
    for p in points {
        let (lat, lng) = (scaled(p.lat()), scaled(p.lng()));
        push_value(&mut out, lat - prev_lat);
        push_value(&mut out, lng - prev_lng);
        prev_lat = lat;
        prev_lng = lng;
    }
    out
}

fn read_value(bytes: &[u8], pos: &mut usize) -> Result<i64, PolylineError> {
    let start = *pos;
    let mut result: u64 = 0;
    let mut shift = 0u32;
    loop {
        let Some(&byte) = bytes.get(*pos) else {
            return Err(PolylineError::Truncated { offset: *pos });
        };
        if !(63..=126).contains(&byte) {
            return Err(PolylineError::InvalidByte { offset: *pos, byte });
        }
        if shift > 60 {
            return Err(PolylineError::Overflow { offset: start });
        }
        let chunk = u64::from(byte - 63);
        result |= (chunk & 0x1f) << shift;
        shift += 5;
        *pos += 1;
        if chunk & 0x20 == 0 {
            break;
        }
    }
    Ok(((result >> 1) as i64) ^ -((result & 1) as i64))
}

pub fn decode_polyline(encoded: &str) -> Result<Vec<GeoPoint>, PolylineError> {
    let bytes = encoded.as_bytes();
    let mut points = Vec::new();
    let mut pos = 0;
    let (mut lat, mut lng) = (0i64, 0i64);
    while pos < bytes.len() {
        let offset = pos;
        let dlat = read_value(bytes, &mut pos)?;
        let dlng = read_value(bytes, &mut pos)?;
        lat = lat
            .checked_add(dlat)
            .ok_or(PolylineError::Overflow { offset })?;
        lng = lng
            .checked_add(dlng)
            .ok_or(PolylineError::Overflow { offset })?;
        let point = GeoPoint::new(lat as f64 / POLYLINE_FACTOR, lng as f64 / POLYLINE_FACTOR)
            .map_err(|_| PolylineError::OutOfRange { offset })?;
        points.push(point);
    }
    Ok(points)
}
