//! Application configuration: a JSON document with `TERRARANK_*`
//! environment overrides.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use terrarank_core::ranking::DEFAULT_RESAMPLE_INTERVAL_M;
use terrarank_core::routing::{DEFAULT_K, DEFAULT_PENALTY};
use terrarank_core::weighting::{GradeMode, DEFAULT_ALPHA};
use thiserror::Error;

pub const ENV_PREFIX: &str = "TERRARANK_";

/// API key; never printed by `Debug` or `Display`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Secret(String);

impl Secret {
    pub fn new(s: impl Into<String>) -> Self {
        Self(s.into())
    }

    pub fn expose(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Secret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Secret(***)")
    }
}

impl fmt::Display for Secret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("***")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AppConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub graph_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dem_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elevation_url: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directions_url: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub api_key: Option<Secret>,
    pub alpha: f64,
    pub grade_mode: GradeMode,
    pub resample_interval_m: f64,
    pub k: usize,
    pub penalty: f64,
    pub listen_addr: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cache_path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cors_origin: Option<String>,
    /// Fold slope weights into local Dijkstra edge costs (experimental).
    pub weighted_search: bool,
}

impl Default for AppConfig {
    fn default() -> Self {
        Self {
            graph_path: None,
            dem_path: None,
            elevation_url: None,
            directions_url: None,
            api_key: None,
            alpha: DEFAULT_ALPHA,
            grade_mode: GradeMode::Absolute,
            resample_interval_m: DEFAULT_RESAMPLE_INTERVAL_M,
            k: DEFAULT_K,
            penalty: DEFAULT_PENALTY,
            listen_addr: "127.0.0.1:8080".to_string(),
            cache_path: None,
            cors_origin: None,
            weighted_search: false,
        }
    }
}

/// Every problem found while loading, reported together.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid configuration: {}", problems.join("; "))]
pub struct ConfigError {
    pub problems: Vec<String>,
}

#[derive(Clone, Copy)]
enum Kind {
    Path,
    Text,
    Number,
    Count,
    Grade,
    Flag,
}

const KEYS: [(&str, Kind); 14] = [
    ("graph_path", Kind::Path),
    ("dem_path", Kind::Path),
    ("elevation_url", Kind::Text),
    ("directions_url", Kind::Text),
    ("api_key", Kind::Text),
    ("alpha", Kind::Number),
    ("grade_mode", Kind::Grade),
    ("resample_interval_m", Kind::Number),
    ("k", Kind::Count),
    ("penalty", Kind::Number),
    ("listen_addr", Kind::Text),
    ("cache_path", Kind::Path),
    ("cors_origin", Kind::Text),
    ("weighted_search", Kind::Flag),
];

enum Setting {
    Text(String),
    Number(f64),
    Count(usize),
    Grade(GradeMode),
    Flag(bool),
}

fn from_json(kind: Kind, value: &Value) -> Option<Setting> {
    match kind {
        Kind::Path | Kind::Text => value.as_str().map(|s| Setting::Text(s.to_string())),
        Kind::Number => value.as_f64().map(Setting::Number),
        Kind::Count => value
            .as_u64()
            .and_then(|n| usize::try_from(n).ok())
            .map(Setting::Count),
        Kind::Grade => serde_json::from_value(value.clone())
            .ok()
            .map(Setting::Grade),
        Kind::Flag => value.as_bool().map(Setting::Flag),
    }
}

fn from_env(kind: Kind, value: &str) -> Option<Setting> {
    match kind {
        Kind::Path | Kind::Text => Some(Setting::Text(value.to_string())),
        Kind::Number => value.trim().parse().ok().map(Setting::Number),
        Kind::Count => value.trim().parse().ok().map(Setting::Count),
        Kind::Grade => from_json(kind, &Value::String(value.trim().to_string())),
        Kind::Flag => value.trim().parse().ok().map(Setting::Flag),
    }
}

fn expected(kind: Kind) -> &'static str {
    match kind {
        Kind::Path | Kind::Text => "a string",
        Kind::Number => "a number",
        Kind::Count => "a non-negative integer",
        Kind::Grade => "\"absolute\" or \"uphill_only\"",
        Kind::Flag => "a boolean",
    }
}

fn apply(config: &mut AppConfig, key: &str, setting: Setting) {
    match (key, setting) {
        ("graph_path", Setting::Text(s)) => config.graph_path = Some(s.into()),
        ("dem_path", Setting::Text(s)) => config.dem_path = Some(s.into()),
        ("cache_path", Setting::Text(s)) => config.cache_path = Some(s.into()),
        ("elevation_url", Setting::Text(s)) => config.elevation_url = Some(s),
        ("directions_url", Setting::Text(s)) => config.directions_url = Some(s),
        ("api_key", Setting::Text(s)) => config.api_key = Some(Secret(s)),
        ("listen_addr", Setting::Text(s)) => config.listen_addr = s,
        ("cors_origin", Setting::Text(s)) => config.cors_origin = Some(s),
        ("alpha", Setting::Number(n)) => config.alpha = n,
        ("resample_interval_m", Setting::Number(n)) => config.resample_interval_m = n,
        ("penalty", Setting::Number(n)) => config.penalty = n,
        ("k", Setting::Count(n)) => config.k = n,
        ("grade_mode", Setting::Grade(g)) => config.grade_mode = g,
        ("weighted_search", Setting::Flag(b)) => config.weighted_search = b,
        _ => unreachable!("setting kind matches key table"),
    }
}

fn kind_of(key: &str) -> Option<Kind> {
    KEYS.iter().find(|(k, _)| *k == key).map(|(_, kind)| *kind)
}

/// Parse without checking cross-field invariants. Empty input means "all
/// defaults".
pub fn parse_config(
    file_content: &str,
    env_overrides: &HashMap<String, String>,
) -> Result<AppConfig, ConfigError> {
    let (config, problems) = parse_inner(file_content, env_overrides);
    if problems.is_empty() {
        Ok(config)
    } else {
        Err(ConfigError { problems })
    }
}

fn parse_inner(
    file_content: &str,
    env_overrides: &HashMap<String, String>,
) -> (AppConfig, Vec<String>) {
    let mut config = AppConfig::default();
    let mut problems = Vec::new();

    let document = if file_content.trim().is_empty() {
        Value::Object(Default::default())
    } else {
        match serde_json::from_str::<Value>(file_content) {
            Ok(v) => v,
            Err(e) => {
                problems.push(format!("config is not valid JSON: {e}"));
                Value::Object(Default::default())
            }
        }
    };
    match document {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            for key in keys {
                match kind_of(key) {
                    None => problems.push(format!("unknown key '{key}'")),
                    Some(kind) => match from_json(kind, &map[key]) {
                        Some(setting) => apply(&mut config, key, setting),
                        None => problems.push(format!("'{key}' must be {}", expected(kind))),
                    },
                }
            }
        }
        _ => problems.push("config must be a JSON object".to_string()),
    }

    let mut env_keys: Vec<&String> = env_overrides
        .keys()
        .filter(|k| k.starts_with(ENV_PREFIX))
        .collect();
    env_keys.sort();
    for env_key in env_keys {
        let key = env_key[ENV_PREFIX.len()..].to_ascii_lowercase();
        if key == "config" {
            continue;
        }
        match kind_of(&key) {
            None => problems.push(format!("unknown environment override '{env_key}'")),
            Some(kind) => match from_env(kind, &env_overrides[env_key]) {
                Some(setting) => apply(&mut config, &key, setting),
                None => problems.push(format!("'{env_key}' must be {}", expected(kind))),
            },
        }
    }
    (config, problems)
}

impl AppConfig {
    /// Cross-field checks; returns every violation.
    pub fn problems(&self) -> Vec<String> {
        let mut problems = Vec::new();
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            problems.push(format!("alpha must be finite and >= 0, got {}", self.alpha));
        }
        if !(self.resample_interval_m.is_finite() && self.resample_interval_m > 0.0) {
            problems.push(format!(
                "resample_interval_m must be > 0, got {}",
                self.resample_interval_m
            ));
        }
        if self.k == 0 {
            problems.push("k must be at least 1".to_string());
        }
        if !(self.penalty.is_finite() && self.penalty > 1.0) {
            problems.push(format!("penalty must be > 1, got {}", self.penalty));
        }
        match self.listen_addr.rsplit_once(':') {
            Some((host, port)) if !host.is_empty() && port.parse::<u16>().is_ok() => {}
            _ => problems.push(format!(
                "listen_addr must be host:port, got '{}'",
                self.listen_addr
            )),
        }
        if self.dem_path.is_none() && self.elevation_url.is_none() {
            problems.push("no elevation source: set dem_path or elevation_url".to_string());
        }
        if self.graph_path.is_none() && self.directions_url.is_none() {
            problems.push("no route source: set graph_path or directions_url".to_string());
        }
        problems
    }

    /// Makes relative file paths (and relative `file://` URLs) relative to
    /// `base` instead of the working directory.
    pub fn resolve_relative_to(&mut self, base: &Path) {
        for path in [
            &mut self.graph_path,
            &mut self.dem_path,
            &mut self.cache_path,
        ]
        .into_iter()
        .flatten()
        {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
        for url in [&mut self.elevation_url, &mut self.directions_url]
            .into_iter()
            .flatten()
        {
            if let Some(rest) = url.strip_prefix("file://") {
                if !rest.starts_with('/') {
                    *url = format!("file://{}", base.join(rest).display());
                }
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Parse, apply overrides, then validate.
pub fn load_config(
    file_content: &str,
    env_overrides: &HashMap<String, String>,
) -> Result<AppConfig, ConfigError> {
    let (config, mut problems) = parse_inner(file_content, env_overrides);
    problems.extend(config.problems());
    if problems.is_empty() {
        Ok(config)
    } else {
        Err(ConfigError { problems })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env(pairs: &[(&str, &str)]) -> HashMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    const SOURCES: &str = r#""dem_path":"dem.asc","directions_url":"file://directions.json""#;

    #[test]
    fn empty_file_gives_defaults_but_fails_validation() {
        let parsed = parse_config("", &HashMap::new()).unwrap();
        assert_eq!(parsed, AppConfig::default());
        assert_eq!(parsed.alpha, 10.0);
        assert_eq!(parsed.k, 3);
        assert_eq!(parsed.resample_interval_m, 30.0);
        let err = load_config("", &HashMap::new()).unwrap_err();
        assert_eq!(err.problems.len(), 2, "{err}");
    }

    #[test]
    fn env_overrides_file() {
        let text = format!(r#"{{"alpha":5,{SOURCES}}}"#);
        let c = load_config(&text, &env(&[("TERRARANK_ALPHA", "7")])).unwrap();
        assert_eq!(c.alpha, 7.0);
        let c = load_config(&text, &HashMap::new()).unwrap();
        assert_eq!(c.alpha, 5.0);
    }

    #[test]
    fn reports_every_problem() {
        let err = load_config(
            r#"{"alpha":"high","k":-1,"colour":"red","grade_mode":"sideways"}"#,
            &env(&[("TERRARANK_BOGUS", "1"), ("OTHER", "x")]),
        )
        .unwrap_err();
        // five parse problems plus the two missing sources
        assert_eq!(err.problems.len(), 7, "{:?}", err.problems);
        let text = err.to_string();
        assert!(text.contains("colour") && text.contains("TERRARANK_BOGUS"));
    }

    #[test]
    fn invariant_violations_listed_together() {
        let text = format!(r#"{{"alpha":-1,"k":0,"resample_interval_m":0,{SOURCES}}}"#);
        let err = load_config(&text, &HashMap::new()).unwrap_err();
        assert_eq!(err.problems.len(), 3, "{:?}", err.problems);
    }

    #[test]
    fn full_config_roundtrip() {
        let full = AppConfig {
            graph_path: Some("g.json".into()),
            dem_path: Some("d.asc".into()),
            elevation_url: Some("https://elev.example/json".into()),
            directions_url: Some("https://dir.example/json".into()),
            api_key: Some(Secret::new("k-123")),
            alpha: 12.5,
            grade_mode: GradeMode::UphillOnly,
            resample_interval_m: 25.0,
            k: 4,
            penalty: 1.5,
            listen_addr: "0.0.0.0:9000".into(),
            cache_path: Some("cache.txt".into()),
            cors_origin: Some("http://localhost:5173".into()),
            weighted_search: true,
        };
        let back = load_config(&full.to_json(), &HashMap::new()).unwrap();
        assert_eq!(back, full);
    }

    #[test]
    fn secret_never_debug_printed() {
        let c = AppConfig {
            api_key: Some(Secret::new("hunter2")),
            ..AppConfig::default()
        };
        assert!(!format!("{c:?}").contains("hunter2"));
        assert!(!Secret::new("hunter2").to_string().contains("hunter2"));
    }

    #[test]
    fn resolves_relative_paths() {
        let mut c = parse_config(
            r#"{"dem_path":"dem.asc","graph_path":"/abs/g.json","directions_url":"file://d.json","elevation_url":"http://x"}"#,
            &HashMap::new(),
        )
        .unwrap();
        c.resolve_relative_to(Path::new("/base"));
        assert_eq!(c.dem_path.unwrap(), PathBuf::from("/base/dem.asc"));
        assert_eq!(c.graph_path.unwrap(), PathBuf::from("/abs/g.json"));
        assert_eq!(c.directions_url.unwrap(), "file:///base/d.json");
        assert_eq!(c.elevation_url.unwrap(), "http://x");
    }

    #[test]
    fn invalid_json() {
        assert!(load_config("{", &HashMap::new()).is_err());
        assert!(load_config("[1]", &HashMap::new()).is_err());
    }
}
