mod common;

use std::collections::HashMap;
use std::process::Command;

use common::*;
use terrarank_core::geo::{encode_polyline, GeoPoint};

fn config_arg() -> String {
    fixture("config.json").display().to_string()
}

fn rank_args<'a>(config: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut args = vec![
        "rank",
        "--config",
        config,
        "--origin",
        ORIGIN,
        "--dest",
        DESTINATION,
    ];
    args.extend_from_slice(extra);
    args
}

#[test]
fn comfort_table_puts_route1_first() {
    let config = config_arg();
    let out = run_cli(
        &rank_args(&config, &["--mode", "comfort", "--format", "table"]),
        &HashMap::new(),
    );
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines.len(), 4);
    let header: Vec<&str> = lines[0].split_whitespace().collect();
    assert_eq!(header, ["Rank", "Route", "Points", "od", "m", "wd", "m"]);
    let first: Vec<&str> = lines[1].split_whitespace().collect();
    assert_eq!(first[..4], ["0", "route1", "34", "1606"]);
    assert!(out.stderr.is_empty());
}

#[test]
fn missing_dest_is_a_usage_error() {
    let out = run_cli(&["rank", "--origin", "1,2"], &HashMap::new());
    assert_eq!(out.code, 2);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("Usage"), "{}", out.stderr);
}

#[test]
fn bad_coordinates_are_usage_errors() {
    let config = config_arg();
    let args = [
        "rank",
        "--config",
        &config,
        "--origin",
        "95,1",
        "--dest",
        DESTINATION,
    ];
    assert_eq!(run_cli(&args, &HashMap::new()).code, 2);
}

fn check_number(v: &serde_json::Value, what: &str) {
    assert!(
        v.as_f64().is_some_and(f64::is_finite),
        "{what} must be a number"
    );
}

// Validates the report document shape field by field.
fn validate_report(doc: &serde_json::Value) {
    let obj = doc.as_object().expect("report is an object");
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["alpha", "preference", "routes"]);
    assert!(["comfort", "challenge", "shortest"].contains(&doc["preference"].as_str().unwrap()));
    check_number(&doc["alpha"], "alpha");
    for (i, route) in doc["routes"].as_array().unwrap().iter().enumerate() {
        let obj = route.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(
            keys,
            ["id", "od_m", "points", "polyline", "profile", "rank", "wd_m"]
        );
        assert!(route["id"].is_string());
        assert!(route["polyline"].is_string());
        assert!(route["points"].as_u64().unwrap() >= 2);
        assert_eq!(route["rank"].as_u64().unwrap(), i as u64);
        check_number(&route["od_m"], "od_m");
        check_number(&route["wd_m"], "wd_m");
        let d = route["profile"]["d"].as_array().unwrap();
        let e = route["profile"]["e"].as_array().unwrap();
        assert_eq!(d.len(), e.len());
        assert_eq!(route["profile"].as_object().unwrap().len(), 2);
        for x in d.iter().chain(e) {
            check_number(x, "profile value");
        }
    }
}

#[test]
fn json_output_matches_report_schema() {
    let config = config_arg();
    for mode in ["comfort", "challenge", "shortest"] {
        let out = run_cli(
            &rank_args(&config, &["--mode", mode, "--format", "json"]),
            &HashMap::new(),
        );
        assert_eq!(out.code, 0, "{}", out.stderr);
        let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        validate_report(&doc);
        assert_eq!(doc["preference"], mode);
    }
}

#[test]
fn geojson_output_is_a_feature_collection() {
    let config = config_arg();
    let out = run_cli(
        &rank_args(&config, &["--format", "geojson"]),
        &HashMap::new(),
    );
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["type"], "FeatureCollection");
    let features = doc["features"].as_array().unwrap();
    assert_eq!(features.len(), 3);
    assert_eq!(features[0]["properties"]["id"], "route1");
    assert_eq!(features[0]["geometry"]["type"], "LineString");
}

#[test]
fn alpha_and_k_flags() {
    let config = config_arg();
    let out = run_cli(
        &rank_args(&config, &["--alpha", "0", "--k", "1", "--format", "json"]),
        &HashMap::new(),
    );
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["alpha"], 0.0);
    assert_eq!(doc["routes"].as_array().unwrap().len(), 1);
}

#[test]
fn profile_by_route_id() {
    let config = config_arg();
    let args = [
        "profile",
        "--config",
        &config,
        "--route-id",
        "route1",
        "--origin",
        ORIGIN,
        "--dest",
        DESTINATION,
    ];
    let out = run_cli(&args, &HashMap::new());
    assert_eq!(out.code, 0, "{}", out.stderr);
    let mut lines = out.stdout.lines();
    assert_eq!(lines.next(), Some("d_m,e_m"));
    let rows: Vec<(f64, f64)> = lines
        .map(|l| {
            let (d, e) = l.split_once(',').unwrap();
            (d.parse().unwrap(), e.parse().unwrap())
        })
        .collect();
    assert!((rows.last().unwrap().0 - 1606.0).abs() < 0.5);

    // one row per resampled point, as in the report profile
    let report = run_cli(&rank_args(&config, &["--format", "json"]), &HashMap::new());
    let doc: serde_json::Value = serde_json::from_str(&report.stdout).unwrap();
    let route1 = doc["routes"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["id"] == "route1")
        .unwrap();
    assert_eq!(rows.len(), route1["profile"]["d"].as_array().unwrap().len());
}

#[test]
fn unknown_route_id_exits_3() {
    let config = config_arg();
    let args = [
        "profile",
        "--config",
        &config,
        "--route-id",
        "route9",
        "--origin",
        ORIGIN,
        "--dest",
        DESTINATION,
    ];
    let out = run_cli(&args, &HashMap::new());
    assert_eq!(out.code, 3);
    assert!(out.stdout.is_empty());
    assert!(out.stderr.contains("route9"));
}

#[test]
fn profile_of_polyline_over_flat_dem_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    flat_dem(dir.path(), 38.5, -120.2, 123.5);
    let config = dir.path().join("config.json");
    std::fs::write(
        &config,
        r#"{"dem_path": "flat.asc", "directions_url": "file://unused.json"}"#,
    )
    .unwrap();
    let config = config.display().to_string();
    let points = [(38.5, -120.2), (38.52, -120.25), (38.45, -120.28)]
        .map(|(lat, lng)| GeoPoint::new(lat, lng).unwrap());
    let encoded = encode_polyline(&points);
    let out = run_cli(
        &["profile", "--config", &config, "--polyline", &encoded],
        &HashMap::new(),
    );
    assert_eq!(out.code, 0, "{}", out.stderr);
    let rows: Vec<&str> = out.stdout.lines().skip(1).collect();
    assert!(rows.len() > 3);
    for row in rows {
        assert_eq!(row.split_once(',').unwrap().1, "123.5");
    }
}

#[test]
fn profile_needs_a_source() {
    let config = config_arg();
    assert_eq!(
        run_cli(&["profile", "--config", &config], &HashMap::new()).code,
        2
    );
    let bad = run_cli(
        &["profile", "--config", &config, "--polyline", "@@@@~"],
        &HashMap::new(),
    );
    assert_eq!(bad.code, 2);
}

#[test]
fn error_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: String| {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    };
    let dem = fixture("dem.asc").display().to_string();

    let zero = fixture("directions_zero.json").display().to_string();
    let cfg = write(
        "zero.json",
        format!(r#"{{"dem_path": "{dem}", "directions_url": "file://{zero}"}}"#),
    );
    let out = run_cli(&rank_args(&cfg, &[]), &HashMap::new());
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("ZERO_RESULTS"));

    let cfg = write(
        "down.json",
        format!(
            r#"{{"dem_path": "{dem}", "directions_url": "http://127.0.0.1:9/x", "api_key": "sekret-key-123"}}"#
        ),
    );
    let out = run_cli(&rank_args(&cfg, &[]), &HashMap::new());
    assert_eq!(out.code, 4);
    assert!(!out.stderr.contains("sekret-key-123"));

    let cfg = write("bad.json", r#"{"alpha": "steep", "colour": 1}"#.into());
    let out = run_cli(&rank_args(&cfg, &[]), &HashMap::new());
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("alpha") && out.stderr.contains("colour"));

    let out = run_cli(&rank_args("/no/such/config.json", &[]), &HashMap::new());
    assert_eq!(out.code, 2);

    let same = [
        "rank",
        "--config",
        &config_arg(),
        "--origin",
        ORIGIN,
        "--dest",
        ORIGIN,
    ];
    assert_eq!(run_cli(&same, &HashMap::new()).code, 3);
}

#[test]
fn config_from_environment() {
    let env: HashMap<String, String> = [
        ("TERRARANK_CONFIG".to_string(), config_arg()),
        ("TERRARANK_ALPHA".to_string(), "2.5".to_string()),
    ]
    .into();
    let out = run_cli(
        &[
            "rank",
            "--origin",
            ORIGIN,
            "--dest",
            DESTINATION,
            "--format",
            "json",
        ],
        &env,
    );
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["alpha"], 2.5);
}

#[test]
fn local_graph_config_ranks_three_routes() {
    let config = fixture("config_local.json").display().to_string();
    let out = run_cli(&rank_args(&config, &["--format", "json"]), &HashMap::new());
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    validate_report(&doc);
    assert_eq!(doc["routes"].as_array().unwrap().len(), 3);

    let env: HashMap<String, String> =
        [("TERRARANK_WEIGHTED_SEARCH".to_string(), "true".to_string())].into();
    let out = run_cli(&rank_args(&config, &["--format", "json"]), &env);
    assert_eq!(out.code, 0, "{}", out.stderr);
    validate_report(&serde_json::from_str(&out.stdout).unwrap());
}

#[test]
fn binary_runs() {
    let out = Command::new(env!("CARGO_BIN_EXE_terrarank"))
        .args(rank_args(&config_arg(), &["--format", "table"]))
        .env_remove("TERRARANK_CONFIG")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("route1"));

    let out = Command::new(env!("CARGO_BIN_EXE_terrarank"))
        .arg("rank")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}
