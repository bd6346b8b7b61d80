//! Run configuration: command-line flags layered over an optional JSON file.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::Args;
use isocrpc::families::{Domain, Params};
use serde::Deserialize;
use serde_json::Value;

/// A malformed invocation; the binary exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(UsageError(msg.into()).into())
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Family id, or `all` for `verify`
    #[arg(long)]
    pub family: Option<String>,
    /// Ratio a; a comma-separated list for `verify`
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Extra parameters, `k=v,...`
    #[arg(long, allow_hyphen_values = true)]
    pub params: Option<String>,
    /// Parameter box `umin,umax,vmin,vmax`
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    /// Grid resolution `NUxNV`
    #[arg(long)]
    pub res: Option<String>,
    /// Residual tolerance
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file (stdout if absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with the same keys as the flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// RNG seed (`verify`) or seed point `u,v` (`trace`)
    #[arg(long, allow_hyphen_values = true)]
    pub seed: Option<String>,
    /// Machine-readable output where supported
    #[arg(long)]
    pub json: bool,
}

/// Flags only `trace` understands.
#[derive(Debug, Clone, Default, Args)]
pub struct TraceArgs {
    /// char+, char-, principal1 or principal2
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub dt: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    family: Option<String>,
    a: Option<Value>,
    params: Option<Value>,
    domain: Option<Value>,
    res: Option<Value>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    seed: Option<Value>,
    json: Option<bool>,
    kind: Option<String>,
    steps: Option<usize>,
    dt: Option<f64>,
}

pub const DEFAULT_RES: (usize, usize) = (50, 50);
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_STEPS: usize = 1000;
pub const DEFAULT_DT: f64 = 1e-3;

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: Option<String>,
    pub a: Vec<f64>,
    pub params: Params,
    pub domain: Option<Domain>,
    pub res: (usize, usize),
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub seed: Option<String>,
    pub json: bool,
    pub kind: Option<String>,
    pub steps: usize,
    pub dt: f64,
}

impl RunConfig {
    pub fn resolve(common: &CommonArgs, trace: Option<&TraceArgs>) -> anyhow::Result<Self> {
        let file = match &common.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let text = |v: &Option<Value>| -> Option<String> {
            v.as_ref().map(|v| match v {
                Value::String(s) => s.clone(),
                Value::Array(xs) => xs.iter().map(value_text).collect::<Vec<_>>().join(","),
                Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", value_text(v))).collect::<Vec<_>>().join(","),
                other => value_text(other),
            })
        };
        let a = common.a.clone().or_else(|| text(&file.a));
        let params = common.params.clone().or_else(|| text(&file.params));
        let domain = common.domain.clone().or_else(|| text(&file.domain));
        let res = common.res.clone().or_else(|| text(&file.res));
        let t = trace.cloned().unwrap_or_default();
        Ok(RunConfig {
            family: common.family.clone().or(file.family),
            a: a.as_deref().map(parse_list).transpose()?.unwrap_or_default(),
            params: params.as_deref().map(parse_params).transpose()?.unwrap_or_default(),
            domain: domain.as_deref().map(parse_domain).transpose()?,
            res: res.as_deref().map(parse_res).transpose()?.unwrap_or(DEFAULT_RES),
            tol: common.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            out: common.out.clone().or(file.out),
            seed: common.seed.clone().or_else(|| text(&file.seed)),
            json: common.json || file.json.unwrap_or(false),
            kind: t.kind.or(file.kind),
            steps: t.steps.or(file.steps).unwrap_or(DEFAULT_STEPS),
            dt: t.dt.or(file.dt).unwrap_or(DEFAULT_DT),
        })
    }
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn read_file(p: &Path) -> anyhow::Result<FileConfig> {
    let raw = std::fs::read_to_string(p).map_err(|e| UsageError(format!("cannot read config {}: {e}", p.display())))?;
    serde_json::from_str(&raw).map_err(|e| UsageError(format!("bad config {}: {e}", p.display())).into())
}

fn number(s: &str) -> anyhow::Result<f64> {
    let t = s.trim().replace('\u{2212}', "-");
    match t.parse::<f64>() {
        Ok(x) => Ok(x),
        Err(_) => usage(format!("not a number: `{s}`")),
    }
}

pub fn parse_list(s: &str) -> anyhow::Result<Vec<f64>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(number).collect()
}

pub fn parse_params(s: &str) -> anyhow::Result<Params> {
    let mut p = Params::new();
    for item in s.split(',').filter(|p| !p.trim().is_empty()) {
        let Some((k, v)) = item.split_once('=') else {
            return usage(format!("parameter `{item}` is not k=v"));
        };
        p.insert(k.trim().to_string(), number(v)?);
    }
    Ok(p)
}

pub fn parse_domain(s: &str) -> anyhow::Result<Domain> {
    match parse_list(s)?[..] {
        [u0, u1, v0, v1] => Ok(Domain::new(u0, u1, v0, v1)),
        _ => usage(format!("domain `{s}` needs four numbers umin,umax,vmin,vmax")),
    }
}

pub fn parse_res(s: &str) -> anyhow::Result<(usize, usize)> {
    let parsed = s
        .split_once(['x', 'X'])
        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)));
    match parsed {
        Some(r) => Ok(r),
        None => usage(format!("resolution `{s}` is not NUxNV")),
    }
}

pub fn parse_point(s: &str) -> anyhow::Result<(f64, f64)> {
    match parse_list(s)?[..] {
        [u, v] => Ok((u, v)),
        _ => usage(format!("seed point `{s}` is not u,v")),
    }
}
