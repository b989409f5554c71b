//! Command-line front end. `run` is the whole program minus process setup,
//! so tests can drive it in-process.

use std::collections::HashMap;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use terrarank_core::geo::GeoPoint;
use terrarank_core::json::to_canonical_string;
use terrarank_core::ranking::{ranked_to_geojson, Preference};

use crate::config::load_config;
use crate::engine::{report_json, Engine, EngineError, RankQuery};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_ROUTE: i32 = 3;
pub const EXIT_UPSTREAM: i32 = 4;

/// Environment variable naming a config file when --config is absent.
pub const CONFIG_ENV: &str = "TERRARANK_CONFIG";

#[derive(Debug, Parser)]
#[command(
    name = "terrarank",
    version,
    about = "Rank candidate routes by terrain"
)]
struct Cli {
    /// JSON config file; relative paths inside it resolve against its directory
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rank candidate routes between two points
    Rank {
        #[command(flatten)]
        query: QueryArgs,
        /// Output format
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Print an elevation profile as CSV (d_m,e_m)
    Profile {
        /// Encoded polyline to profile
        #[arg(long, conflicts_with_all = ["route_id", "origin", "dest"])]
        polyline: Option<String>,
        /// Candidate id from a rank run with the same query
        #[arg(long, requires_all = ["origin", "dest"])]
        route_id: Option<String>,
        #[arg(long, value_parser = parse_point, value_name = "LAT,LNG")]
        origin: Option<GeoPoint>,
        #[arg(long, value_parser = parse_point, value_name = "LAT,LNG")]
        dest: Option<GeoPoint>,
        /// comfort, challenge or shortest
        #[arg(long, default_value_t = Preference::Comfort)]
        mode: Preference,
        /// Slope sensitivity; overrides the config
        #[arg(long)]
        alpha: Option<f64>,
        /// Number of candidate routes; overrides the config
        #[arg(long)]
        k: Option<usize>,
    },
    /// Run the HTTP service
    Serve {
        /// Overrides listen_addr from the config
        #[arg(long, value_name = "HOST:PORT")]
        listen: Option<SocketAddr>,
    },
}

#[derive(Debug, Args)]
struct QueryArgs {
    /// Start point
    #[arg(long, value_parser = parse_point, value_name = "LAT,LNG")]
    origin: GeoPoint,
    /// End point
    #[arg(long, value_parser = parse_point, value_name = "LAT,LNG")]
    dest: GeoPoint,
    /// comfort, challenge or shortest
    #[arg(long, default_value_t = Preference::Comfort)]
    mode: Preference,
    /// Slope sensitivity; overrides the config
    #[arg(long)]
    alpha: Option<f64>,
    /// Number of candidate routes; overrides the config
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Geojson,
}

fn parse_point(s: &str) -> Result<GeoPoint, String> {
    let (lat, lng) = s
        .split_once(',')
        .ok_or_else(|| format!("expected LAT,LNG, got '{s}'"))?;
    let lat: f64 = lat
        .trim()
        .parse()
        .map_err(|_| format!("bad latitude '{lat}'"))?;
    let lng: f64 = lng
        .trim()
        .parse()
        .map_err(|_| format!("bad longitude '{lng}'"))?;
    GeoPoint::new(lat, lng).map_err(|e| e.to_string())
}

fn exit_code(e: &EngineError) -> i32 {
    match e {
        EngineError::InvalidRequest(_) | EngineError::Setup(_) => EXIT_USAGE,
        EngineError::NoRoute(_) => EXIT_NO_ROUTE,
        EngineError::Upstream(_) | EngineError::Elevation(_) => EXIT_UPSTREAM,
        EngineError::Internal(_) => EXIT_FAILURE,
    }
}

/// Load config from `path` (or `TERRARANK_CONFIG`) plus environment overrides
/// and build an engine.
pub fn engine_from(
    path: Option<&Path>,
    env: &HashMap<String, String>,
) -> Result<Engine, EngineError> {
    let path = path
        .map(Path::to_path_buf)
        .or_else(|| env.get(CONFIG_ENV).map(PathBuf::from));
    let (text, base) = match &path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| EngineError::Setup(format!("{}: {e}", p.display())))?;
            let base = p.parent().map(Path::to_path_buf).unwrap_or_default();
            (text, base)
        }
        None => (String::new(), PathBuf::from(".")),
    };
    let mut config = load_config(&text, env).map_err(|e| EngineError::Setup(e.to_string()))?;
    config.resolve_relative_to(&base);
    Engine::from_config(config)
}

fn fail(stderr: &mut dyn Write, e: &EngineError) -> i32 {
    let _ = writeln!(stderr, "error: {e}");
    exit_code(e)
}

/// Run with explicit arguments (including the program name), environment and
/// output streams. Returns the process exit code.
pub fn run(
    args: &[String],
    env: &HashMap<String, String>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let engine = match engine_from(cli.config.as_deref(), env) {
        Ok(engine) => engine,
        Err(e) => return fail(stderr, &e),
    };
    let result = match cli.command {
        Command::Rank { query, format } => rank(&engine, query, format),
        Command::Profile {
            polyline,
            route_id,
            origin,
            dest,
            mode,
            alpha,
            k,
        } => match (polyline, route_id, origin, dest) {
            (Some(encoded), ..) => engine.profile_polyline(&encoded).map(|p| p.to_csv()),
            (None, Some(id), Some(origin), Some(destination)) => {
                let query = RankQuery {
                    origin,
                    destination,
                    preference: mode,
                    alpha,
                    k,
                };
                profile_by_id(&engine, &query, &id)
            }
            _ => {
                let _ = writeln!(
                    stderr,
                    "error: profile needs --polyline, or --route-id with --origin and --dest"
                );
                return EXIT_USAGE;
            }
        },
        Command::Serve { listen } => return serve(engine, listen, stderr),
    };
    match result {
        Ok(text) => match stdout.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                EXIT_FAILURE
            }
        },
        Err(e) => fail(stderr, &e),
    }
}

fn rank(engine: &Engine, args: QueryArgs, format: Format) -> Result<String, EngineError> {
    let query = RankQuery {
        origin: args.origin,
        destination: args.dest,
        preference: args.mode,
        alpha: args.alpha,
        k: args.k,
    };
    let outcome = engine.rank(&query)?;
    Ok(match format {
        // no trailing newline: output is byte-identical to the HTTP body
        Format::Json => report_json(&outcome.report)?,
        Format::Table => outcome.report.to_table(),
        Format::Geojson => to_canonical_string(&ranked_to_geojson(&outcome.ranked))
            .map_err(|e| EngineError::Internal(e.to_string()))?,
    })
}

fn profile_by_id(engine: &Engine, query: &RankQuery, id: &str) -> Result<String, EngineError> {
    let outcome = engine.rank(query)?;
    outcome
        .ranked
        .iter()
        .find(|r| r.route.id() == id)
        .map(|r| r.profile.to_csv())
        .ok_or_else(|| EngineError::NoRoute(format!("no candidate with id '{id}'")))
}

fn serve(engine: Engine, listen: Option<SocketAddr>, stderr: &mut dyn Write) -> i32 {
    let addr = match listen {
        Some(addr) => addr,
        None => match engine.config().listen_addr.parse() {
            Ok(addr) => addr,
            Err(_) => {
                let _ = writeln!(stderr, "error: listen_addr is not HOST:PORT");
                return EXIT_USAGE;
            }
        },
    };
    let runtime = match tokio::runtime::Runtime::new() {
        Ok(rt) => rt,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_FAILURE;
        }
    };
    match runtime.block_on(crate::http::serve(Arc::new(engine), addr)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {addr}: {e}");
            EXIT_FAILURE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_parsing() {
        let p = parse_point("34.5, 135.25").unwrap();
        assert_eq!((p.lat(), p.lng()), (34.5, 135.25));
        assert!(parse_point("34.5").is_err());
        assert!(parse_point("95,1").is_err());
        assert!(parse_point("a,b").is_err());
    }

    #[test]
    fn error_exit_codes() {
        assert_eq!(exit_code(&EngineError::NoRoute(String::new())), 3);
        assert_eq!(exit_code(&EngineError::Upstream(String::new())), 4);
        assert_eq!(exit_code(&EngineError::Elevation(String::new())), 4);
        assert_eq!(exit_code(&EngineError::Setup(String::new())), 2);
        assert_eq!(exit_code(&EngineError::Internal(String::new())), 1);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            &["terrarank".into(), "--help".into()],
            &HashMap::new(),
            &mut out,
            &mut err,
        );
        assert_eq!(code, 0);
        assert!(String::from_utf8(out).unwrap().contains("rank"));
        assert!(err.is_empty());
    }
}
