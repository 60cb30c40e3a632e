use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use conegauge::classify::classify;
use conegauge::decomp::decompose;
use conegauge::form::build_form;
use conegauge::gauge::{distance, gauge_witness, Metric};
use conegauge::horo::{self, Horofunction};
use conegauge::maps::{vinberg_star, ConeMap};
use conegauge::plot::{render, PlotSpec};
use conegauge::suite::{run_criterion, run_suite, SuiteConfig, SuiteReport};
use conegauge::{ConeSpec, Error, Point};

#[derive(Parser)]
#[command(name = "conegauge", version, about = "Gauges, Hilbert/Thompson geometry and horofunctions on convex cones")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Seed for every sampler.
    #[arg(long, env = "CONEGAUGE_SEED", default_value_t = 0, global = true)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Svg,
}

/// Inputs are inline JSON or a path to a JSON file. Points also accept "1,2,3".
#[derive(Subcommand)]
enum Cmd {
    /// Distance between two points.
    Dist {
        #[arg(long)]
        cone: String,
        #[arg(long, default_value = "hilbert")]
        metric: String,
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        /// JSON list of [x, y] pairs.
        #[arg(long)]
        pairs: Option<String>,
    },
    /// The gauge M(x/y) and its witness.
    Gauge {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// The star map of a symmetric cone, optionally applied to a point.
    Star {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        x: Option<String>,
    },
    /// Classify a map: isotone, antitone, degree, isometry, gauge preserving/reversing.
    VerifyMap {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Bilinear form attached to a gauge-reversing involution (the star map by default).
    BuildForm {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        map: Option<String>,
    },
    /// Evaluate a horofunction at points.
    HoroEval {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        horo: String,
        #[arg(long, required = true)]
        y: Vec<String>,
    },
    /// Detour cost and distance between two horofunctions.
    Detour {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        xi: String,
        #[arg(long)]
        eta: String,
        #[arg(long, conflicts_with = "empirical")]
        formula: bool,
        #[arg(long)]
        empirical: bool,
        /// Grid size for --empirical.
        #[arg(long, default_value_t = 100_000)]
        points: usize,
    },
    /// Whether a horofunction's part is a singleton.
    SingletonCheck {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        horo: String,
    },
    /// Split a Thompson isometry into its homogeneous and anti-homogeneous factors.
    Decompose {
        #[arg(long)]
        cone: String,
        #[arg(long)]
        cone_prime: Option<String>,
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Run the acceptance battery.
    Suite {
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        criterion: Option<u32>,
    },
    /// SVG of a 2D section with Hilbert balls and chords.
    Plot {
        /// Full PlotSpec; other flags are ignored when given.
        #[arg(long)]
        spec: Option<String>,
        #[arg(long)]
        cone: Option<String>,
        #[arg(long)]
        center: Vec<String>,
        #[arg(long)]
        radius: Vec<f64>,
        /// Chord endpoints as "x;y".
        #[arg(long)]
        geodesic: Vec<String>,
    },
}

enum Fail {
    Validation(String, String),
    Verification(String, Value),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        match e {
            Error::Verification(m) => Fail::Verification(m, Value::Null),
            e => Fail::Validation(e.kind().into(), e.to_string()),
        }
    }
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail::Validation("invalid_argument".into(), msg.into())
}

fn read_json(arg: &str) -> Result<Value, Fail> {
    let t = arg.trim_start();
    let text = if t.starts_with('{') || t.starts_with('[') {
        arg.to_string()
    } else {
        fs::read_to_string(Path::new(arg)).map_err(|e| invalid(format!("{arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Fail::Validation("json".into(), format!("{arg}: {e}")))
}

fn cone(arg: &str) -> Result<ConeSpec, Fail> {
    Ok(serde_json::from_value(read_json(arg)?).map_err(Error::from)?)
}

fn point(arg: &str) -> Result<Point, Fail> {
    let t = arg.trim();
    let v: Vec<f64> = if t.starts_with('[') || !t.contains(',') && Path::new(t).exists() {
        serde_json::from_value(read_json(t)?).map_err(Error::from)?
    } else {
        t.split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| invalid(format!("bad coordinate {s:?}"))))
            .collect::<Result<_, _>>()?
    };
    Ok(Point::from_vec(v))
}

fn map_on(arg: &str, source: &ConeSpec) -> Result<ConeMap, Fail> {
    Ok(ConeMap::from_json(&read_json(arg)?, Some(source))?)
}

fn horofunction(arg: &str) -> Result<Horofunction, Fail> {
    Ok(serde_json::from_value(read_json(arg)?).map_err(Error::from)?)
}

fn with_schema(v: Value) -> Value {
    let mut out = serde_json::Map::new();
    out.insert("schema".into(), json!(1));
    match v {
        Value::Object(m) => out.extend(m),
        other => {
            out.insert("result".into(), other);
        }
    }
    Value::Object(out)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result serializes")
}

enum Output {
    Json(Value),
    Text(String),
}

fn run(cli: &Cli) -> Result<Output, Fail> {
    let seed = cli.common.seed;
    let fmt = cli.common.format;
    if fmt == Format::Svg && !matches!(cli.cmd, Cmd::Plot { .. }) {
        return Err(invalid("svg output is only available for plot"));
    }
    if fmt == Format::Csv && !matches!(cli.cmd, Cmd::Dist { .. } | Cmd::HoroEval { .. }) {
        return Err(invalid("csv output is available for dist and horo-eval"));
    }
    let out = match &cli.cmd {
        Cmd::Dist { cone: c, metric, x, y, pairs } => {
            let c = cone(c)?;
            let m: Metric = metric.parse()?;
            let pairs: Vec<(Point, Point)> = match (x, y, pairs) {
                (Some(x), Some(y), None) => vec![(point(x)?, point(y)?)],
                (None, None, Some(p)) => {
                    let raw: Vec<(Vec<f64>, Vec<f64>)> = serde_json::from_value(read_json(p)?).map_err(Error::from)?;
                    raw.into_iter().map(|(a, b)| (Point::from_vec(a), Point::from_vec(b))).collect()
                }
                _ => return Err(invalid("give --x and --y, or --pairs")),
            };
            let values = pairs.iter().map(|(a, b)| distance(&c, m, a, b)).collect::<conegauge::Result<Vec<f64>>>()?;
            if fmt == Format::Csv {
                let mut s = String::from("index,metric,value\n");
                for (i, v) in values.iter().enumerate() {
                    s.push_str(&format!("{i},{m},{v}\n"));
                }
                return Ok(Output::Text(s));
            }
            if x.is_some() {
                json!({ "metric": m.to_string(), "value": values[0] })
            } else {
                json!({ "metric": m.to_string(), "values": values })
            }
        }
        Cmd::Gauge { cone: c, x, y } => {
            let c = cone(c)?;
            let (m, w) = gauge_witness(&c, &point(x)?, &point(y)?)?;
            json!({ "value": m, "witness": w })
        }
        Cmd::Star { cone: c, x } => {
            let c = cone(c)?;
            let s = vinberg_star(&c)?;
            let mut v = json!({ "map": s.to_json() });
            if let Some(x) = x {
                let x = point(x)?;
                if !c.is_interior(&x) {
                    return Err(Error::NotInterior("star argument".into()).into());
                }
                v["image"] = to_value(&s.apply(&x).as_slice());
            }
            v
        }
        Cmd::VerifyMap { cone: c, map, samples, tol } => {
            let c = cone(c)?;
            let m = map_on(map, &c)?;
            json!({ "report": to_value(&classify(&m, *samples, seed, *tol)?) })
        }
        Cmd::BuildForm { cone: c, map } => {
            let c = cone(c)?;
            let m = match map {
                Some(m) => map_on(m, &c)?,
                None => vinberg_star(&c)?,
            };
            json!({ "certificate": to_value(&build_form(&c, &m, None, seed)?) })
        }
        Cmd::HoroEval { cone: c, horo: h, y } => {
            let c = cone(c)?;
            let h = horofunction(h)?;
            let values = y
                .iter()
                .map(|p| Ok(horo::eval(&c, &h, &point(p)?)?))
                .collect::<Result<Vec<f64>, Fail>>()?;
            if fmt == Format::Csv {
                let mut s = String::from("index,value\n");
                for (i, v) in values.iter().enumerate() {
                    s.push_str(&format!("{i},{v}\n"));
                }
                return Ok(Output::Text(s));
            }
            json!({ "metric": h.metric().to_string(), "values": values })
        }
        Cmd::Detour { cone: c, xi, eta, formula, empirical, points } => {
            let c = cone(c)?;
            let (xi, eta) = (horofunction(xi)?, horofunction(eta)?);
            if *empirical {
                let mut anchors = horo::payload_points(&c, &xi);
                anchors.extend(horo::payload_points(&c, &eta));
                let grid = horo::detour_grid(&c, *points, &anchors, seed);
                let h = horo::detour_empirical(&c, &xi, &eta, &grid)?;
                let back = horo::detour_empirical(&c, &eta, &xi, &grid)?;
                json!({ "mode": "empirical", "grid_points": grid.len(), "h_lower_bound": ext(h), "delta_lower_bound": ext(h + back) })
            } else {
                let _ = formula;
                let d = match (&xi, &eta) {
                    (Horofunction::ProductHoro { .. }, _) | (_, Horofunction::ProductHoro { .. }) => {
                        horo::detour_product_thompson(&c, &xi, &eta)?
                    }
                    _ => horo::detour_thompson(&c, &xi, &eta)?,
                };
                json!({ "mode": "formula", "detour": to_value(&d) })
            }
        }
        Cmd::SingletonCheck { cone: c, horo: h } => {
            let c = cone(c)?;
            json!({ "singleton": horo::is_singleton(&c, &horofunction(h)?)? })
        }
        Cmd::Decompose { cone: c, cone_prime, map, samples } => {
            let c = cone(c)?;
            let cp = match cone_prime {
                Some(p) => cone(p)?,
                None => c.clone(),
            };
            let mut v = read_json(map)?;
            if let Value::Object(o) = &mut v {
                o.entry("target").or_insert(to_value(&cp));
            }
            let m = ConeMap::from_json(&v, Some(&c))?;
            let r = decompose(&c, &cp, &m, *samples, seed)?;
            let v = json!({ "decomposition": to_value(&r) });
            if !r.verified {
                return Err(Fail::Verification(r.failures.join("; "), with_schema(v)));
            }
            v
        }
        Cmd::Suite { quick, criterion } => {
            let cfg = SuiteConfig { quick: *quick, seed };
            let report = match criterion {
                Some(id) => {
                    let c = run_criterion(*id, cfg);
                    SuiteReport { schema: 1, quick: *quick, seed, pass: c.pass, criteria: vec![c] }
                }
                None => run_suite(cfg),
            };
            for c in &report.criteria {
                eprintln!("{}", c.line());
            }
            let v = to_value(&report);
            if !report.pass {
                let failed: Vec<String> = report.criteria.iter().filter(|c| !c.pass).map(|c| c.id.to_string()).collect();
                return Err(Fail::Verification(format!("criteria failed: {}", failed.join(", ")), v));
            }
            return Ok(Output::Json(v));
        }
        Cmd::Plot { spec, cone: c, center, radius, geodesic } => {
            let spec: PlotSpec = match (spec, c) {
                (Some(s), _) => serde_json::from_value(read_json(s)?).map_err(Error::from)?,
                (None, Some(c)) => {
                    let chords = geodesic
                        .iter()
                        .map(|g| {
                            let (a, b) = g.split_once(';').ok_or_else(|| invalid("geodesic is \"x;y\""))?;
                            Ok((point(a)?.as_slice().to_vec(), point(b)?.as_slice().to_vec()))
                        })
                        .collect::<Result<Vec<_>, Fail>>()?;
                    PlotSpec {
                        cone: cone(c)?,
                        centers: center.iter().map(|p| Ok(point(p)?.as_slice().to_vec())).collect::<Result<_, Fail>>()?,
                        radii: radius.clone(),
                        geodesics: chords,
                        size: 480.0,
                        resolution: 360,
                    }
                }
                (None, None) => return Err(invalid("give --spec or --cone")),
            };
            let svg = render(&spec)?;
            if fmt == Format::Json {
                json!({ "svg": svg })
            } else {
                return Ok(Output::Text(svg));
            }
        }
    };
    Ok(Output::Json(with_schema(out)))
}

fn ext(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Fail> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json renders");
    s.push('\n');
    s
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::to_string(&json!({ "schema": 1, "error": { "kind": kind, "message": message } })).expect("json renders")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            eprintln!("{}", error_json("usage", e.to_string().trim_end()));
            return ExitCode::from(1);
        }
    };
    let result = run(&cli).and_then(|o| match o {
        Output::Json(v) => emit(&cli.common.out, &render_json(&v)),
        Output::Text(t) => emit(&cli.common.out, &t),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Validation(kind, msg)) => {
            eprintln!("{}", error_json(&kind, &msg));
            ExitCode::from(1)
        }
        Err(Fail::Verification(msg, payload)) => {
            if !payload.is_null() {
                let _ = emit(&cli.common.out, &render_json(&payload));
            }
            eprintln!("{}", error_json("verification", &msg));
            ExitCode::from(2)
        }
    }
}
