#![allow(dead_code)]

use std::path::PathBuf;

pub const ORIGIN: (f64, f64) = (34.861989, 135.675334);
pub const DESTINATION: (f64, f64) = (34.853106, 135.693976);

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn file_url(name: &str) -> String {
    format!("file://{}", fixture(name).display())
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}
