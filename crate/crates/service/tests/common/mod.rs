#![allow(dead_code)]

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use terrarank_service::cli;
use terrarank_service::config::{load_config, AppConfig};
use terrarank_service::engine::Engine;
use tower::ServiceExt;

pub const ORIGIN: &str = "34.861989,135.675334";
pub const DESTINATION: &str = "34.853106,135.693976";

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> PathBuf {
    fixtures().join(name)
}

pub fn config_from(path: &Path) -> AppConfig {
    let text = std::fs::read_to_string(path).unwrap();
    let mut config = load_config(&text, &HashMap::new()).unwrap();
    config.resolve_relative_to(path.parent().unwrap());
    config
}

pub fn fixture_config() -> AppConfig {
    config_from(&fixture("config.json"))
}

pub fn engine(config: AppConfig) -> Engine {
    Engine::from_config(config).unwrap()
}

pub fn rank_body(origin: (f64, f64), destination: (f64, f64), preference: &str) -> String {
    serde_json::json!({
        "origin": {"lat": origin.0, "lng": origin.1},
        "destination": {"lat": destination.0, "lng": destination.1},
        "preference": preference,
    })
    .to_string()
}

pub fn query_body(preference: &str) -> String {
    rank_body((34.861989, 135.675334), (34.853106, 135.693976), preference)
}

pub async fn send(app: &Router, method: &str, uri: &str, body: String) -> (StatusCode, String) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body))
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run_cli(args: &[&str], env: &HashMap<String, String>) -> CliOutput {
    let mut argv = vec!["terrarank".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cli::run(&argv, env, &mut out, &mut err);
    CliOutput {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

pub fn error_code(body: &str) -> String {
    let v: serde_json::Value = serde_json::from_str(body).unwrap();
    v["error"]["code"].as_str().unwrap().to_string()
}

/// Writes a DEM with a single constant height covering `lat`/`lng` ± 0.1°.
pub fn flat_dem(dir: &Path, lat: f64, lng: f64, height: f64) -> PathBuf {
    let mut text = format!(
        "ncols 21\nnrows 21\nxllcorner {}\nyllcorner {}\ncellsize 0.01\nNODATA_value -9999\n",
        lng - 0.105,
        lat - 0.105
    );
    for _ in 0..21 {
        let row = vec![height.to_string(); 21];
        text.push_str(&row.join(" "));
        text.push('\n');
    }
    let path = dir.join("flat.asc");
    std::fs::write(&path, text).unwrap();
    path
}
