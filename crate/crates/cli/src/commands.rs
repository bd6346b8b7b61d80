//! The five subcommands, writing to a caller-supplied sink.

use std::io::Write;

use anyhow::Context;
use isocrpc::curves::{trace_direction_field, TraceKind};
use isocrpc::duality::{dual_jet, dual_surface_point};
use isocrpc::families::{catalog, FamilyId, FamilySpec, Params, EPS_SING};
use isocrpc::geometry::{
    euclidean_curvatures, height_jet_from_param, isotropic_curvatures, ratio_target, FD_STEP, K_EPS,
};
use isocrpc::io::{write_obj, write_trace_csv, write_verify_csv, Status, VerifyRow};
use isocrpc::mesh::{mask_stats, sample_grid, MeshGrid, Node};
use isocrpc::verification::family_ode_residual;
use isocrpc::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{parse_point, RunConfig, UsageError};

/// Ratios checked by `verify` when none are given.
pub const DEFAULT_RATIOS: [f64; 4] = [-2.0, -0.5, 0.5, 2.0];
/// Tolerance of the finite-difference dual curvature column.
pub const DUAL_TOL: f64 = 1e-4;
/// `max |H|` bound for minimal (a = -1) rows.
pub const MINIMAL_H_TOL: f64 = 1e-9;
/// Random points per row for the dual curvature column.
pub const DUAL_SAMPLES: usize = 24;
pub const DEFAULT_SEED: u64 = 0;

pub fn family_id(name: &str) -> anyhow::Result<FamilyId> {
    name.parse::<FamilyId>().map_err(|_| UsageError(format!("unknown family `{name}`; see `isocrpc list`")).into())
}

fn required_family(cfg: &RunConfig) -> anyhow::Result<FamilyId> {
    match cfg.family.as_deref() {
        Some("all") => Err(UsageError("`--family all` is only valid for verify".into()).into()),
        Some(name) => family_id(name),
        None => Err(UsageError("missing --family".into()).into()),
    }
}

fn single_ratio(cfg: &RunConfig) -> anyhow::Result<Option<f64>> {
    match cfg.a[..] {
        [] => Ok(None),
        [a] => Ok(Some(a)),
        _ => Err(UsageError("only verify accepts a list of ratios".into()).into()),
    }
}

/// The family from `--family`, `--a`, `--params` and `--domain`.
pub fn build_spec(cfg: &RunConfig, id: FamilyId, a: Option<f64>) -> isocrpc::Result<FamilySpec> {
    let mut params: Params = cfg.params.clone();
    if let Some(a) = a {
        params.insert("a".into(), a);
    }
    let spec = FamilySpec::new(id, params)?;
    Ok(match cfg.domain {
        Some(d) => spec.with_domain(d),
        None => spec,
    })
}

#[derive(Serialize)]
struct CatalogJson {
    id: &'static str,
    constraints: &'static str,
    fixed_ratio: Option<f64>,
    euclidean: bool,
    example_domain: [f64; 4],
}

pub fn cmd_list(cfg: &RunConfig, w: &mut dyn Write) -> anyhow::Result<()> {
    let rows = catalog();
    if cfg.json {
        let js: Vec<CatalogJson> = rows
            .iter()
            .map(|e| CatalogJson {
                id: e.id.name(),
                constraints: e.constraints,
                fixed_ratio: e.fixed_ratio,
                euclidean: e.euclidean,
                example_domain: [e.example_domain.u0, e.example_domain.u1, e.example_domain.v0, e.example_domain.v1],
            })
            .collect();
        serde_json::to_writer_pretty(&mut *w, &js)?;
        writeln!(w)?;
        return Ok(());
    }
    for e in rows {
        let ratio = match (e.fixed_ratio, e.euclidean) {
            (Some(r), _) => format!("{r}"),
            (None, true) => "a (euclidean)".into(),
            (None, false) => "a".into(),
        };
        let d = e.example_domain;
        writeln!(
            w,
            "{:<22}  {:<24}  ratio {:<14}  domain [{:.4}, {:.4}] x [{:.4}, {:.4}]",
            e.id.name(),
            e.constraints,
            ratio,
            d.u0,
            d.u1,
            d.v0,
            d.v1
        )?;
    }
    Ok(())
}

pub fn cmd_generate(cfg: &RunConfig, w: &mut dyn Write) -> anyhow::Result<MeshGrid> {
    let id = required_family(cfg)?;
    let spec = build_spec(cfg, id, single_ratio(cfg)?)?;
    let grid = sample_grid(&spec, cfg.res.0, cfg.res.1, None)?;
    write_obj(&grid, &mut *w)?;
    Ok(grid)
}

pub fn cmd_dual(cfg: &RunConfig, w: &mut dyn Write) -> anyhow::Result<MeshGrid> {
    let id = required_family(cfg)?;
    let spec = build_spec(cfg, id, single_ratio(cfg)?)?;
    let grid = sample_grid(&spec, cfg.res.0, cfg.res.1, None)?;
    let dual = grid.map_points(|n| {
        let Node::Live { u, v, k, .. } = *n else { unreachable!("only live nodes are mapped") };
        if k.abs() < K_EPS {
            return Err(Error::DegenerateK { k });
        }
        dual_surface_point(&spec.chart(u, v)?)
    })?;
    write_obj(&dual, &mut *w)?;
    Ok(dual)
}

pub fn cmd_trace(cfg: &RunConfig, w: &mut dyn Write) -> anyhow::Result<isocrpc::curves::CurveTrace> {
    let id = required_family(cfg)?;
    let spec = build_spec(cfg, id, single_ratio(cfg)?)?;
    let kind: TraceKind = match cfg.kind.as_deref() {
        Some(k) => k.parse().map_err(|_| UsageError(format!("unknown trace kind `{k}`")))?,
        None => TraceKind::CharacteristicPlus,
    };
    let seed = match cfg.seed.as_deref() {
        Some(s) => parse_point(s)?,
        None => spec.domain.point(0.5, 0.5),
    };
    let trace = trace_direction_field(&spec, seed, kind, cfg.steps, cfg.dt)?;
    write_trace_csv(&trace, &mut *w)?;
    Ok(trace)
}

/// One verification job: the family is built with `build_a`, residuals use `check_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Job {
    id: FamilyId,
    build_a: Option<f64>,
    check_a: f64,
}

fn jobs(cfg: &RunConfig) -> anyhow::Result<(Vec<Job>, bool)> {
    let (ids, all) = match cfg.family.as_deref() {
        None | Some("all") => (FamilyId::ALL.to_vec(), true),
        Some(name) => (vec![family_id(name)?], false),
    };
    let param_a = cfg.params.get("a").copied();
    let mut out = Vec::new();
    for id in ids {
        if let Some(r) = id.fixed_ratio() {
            let checks = if cfg.a.is_empty() || all { vec![r] } else { cfg.a.clone() };
            out.extend(checks.into_iter().map(|c| Job { id, build_a: None, check_a: c }));
            continue;
        }
        let mut ratios = if cfg.a.is_empty() {
            match param_a {
                Some(a) => vec![a],
                None => {
                    let mut d = DEFAULT_RATIOS.to_vec();
                    if id == FamilyId::Paraboloid {
                        d.push(1.0);
                    }
                    d
                }
            }
        } else {
            cfg.a.clone()
        };
        ratios.sort_by(f64::total_cmp);
        ratios.dedup();
        for c in ratios {
            let build = param_a.unwrap_or(c);
            if all && build_spec(cfg, id, Some(build)).is_err() {
                continue;
            }
            out.push(Job { id, build_a: Some(build), check_a: c });
        }
    }
    Ok((out, all))
}

fn row_seed(seed: u64, job: &Job) -> u64 {
    let fam = FamilyId::ALL.iter().position(|&i| i == job.id).unwrap_or(0) as u64;
    seed ^ fam.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ job.check_a.to_bits().rotate_left(17)
}

/// Euclidean counterpart of the ratio residual: `min |k2/k1 - a|, |k1/k2 - a|`.
fn euclidean_ratio_residual(h: &isocrpc::geometry::Jet2Height, a: f64) -> f64 {
    let e = euclidean_curvatures(h);
    (e.k2 / e.k1 - a).abs().min((e.k1 / e.k2 - a).abs())
}

fn dual_k_residual(spec: &FamilySpec, rng: &mut ChaCha8Rng) -> isocrpc::Result<f64> {
    let d = spec.domain;
    let margin = EPS_SING + 4.0 * FD_STEP;
    let mut worst = 0.0_f64;
    let mut taken = 0;
    for _ in 0..DUAL_SAMPLES * 20 {
        if taken == DUAL_SAMPLES {
            break;
        }
        let (u, v) = d.point(rng.gen::<f64>(), rng.gen::<f64>());
        if spec.locus_distance(u, v) < margin {
            continue;
        }
        let k = isotropic_curvatures(&height_jet_from_param(&spec.chart(u, v)?)?).k;
        if k.abs() < K_EPS {
            return Err(Error::DegenerateK { k });
        }
        let ks = isotropic_curvatures(&height_jet_from_param(&dual_jet(spec, u, v, FD_STEP)?)?).k;
        worst = worst.max((ks * k - 1.0).abs());
        taken += 1;
    }
    Ok(worst)
}

fn error_row(job: &Job, cfg: &RunConfig) -> VerifyRow {
    VerifyRow {
        family: job.id.name().into(),
        a: job.check_a,
        nu: cfg.res.0,
        nv: cfg.res.1,
        max_abs_crpc_residual: None,
        max_abs_h: None,
        ode_residual: None,
        dual_k_residual: None,
        status: Status::Error,
    }
}

fn verify_job(job: &Job, cfg: &RunConfig, seed: u64) -> VerifyRow {
    let attempt = || -> isocrpc::Result<VerifyRow> {
        let spec = build_spec(cfg, job.id, job.build_a)?;
        let grid = sample_grid(&spec, cfg.res.0, cfg.res.1, None)?;
        let (mut crpc, mut ode, mut has_ode) = (0.0_f64, 0.0_f64, false);
        for n in &grid.nodes {
            let Node::Live { u, v, .. } = *n else { continue };
            let h = height_jet_from_param(&spec.chart(u, v)?)?;
            let r = if job.id.is_euclidean() {
                euclidean_ratio_residual(&h, job.check_a)
            } else {
                isotropic_curvatures(&h).ratio_invariant()? - ratio_target(job.check_a)
            };
            crpc = crpc.max(r.abs());
            if let Some(res) = family_ode_residual(&spec, u, v) {
                has_ode = true;
                ode = ode.max(res?.normalized());
            }
        }
        let max_h = mask_stats(&grid).max_abs_h;
        let dual = dual_k_residual(&spec, &mut ChaCha8Rng::seed_from_u64(row_seed(seed, job)))?;
        let minimal = job.check_a == -1.0 && !job.id.is_euclidean();
        let pass = crpc <= cfg.tol
            && (!has_ode || ode <= cfg.tol)
            && dual <= DUAL_TOL
            && (!minimal || max_h <= MINIMAL_H_TOL);
        Ok(VerifyRow {
            family: job.id.name().into(),
            a: job.check_a,
            nu: cfg.res.0,
            nv: cfg.res.1,
            max_abs_crpc_residual: Some(crpc),
            max_abs_h: Some(max_h),
            ode_residual: has_ode.then_some(ode),
            dual_k_residual: Some(dual),
            status: if pass { Status::Pass } else { Status::Fail },
        })
    };
    attempt().unwrap_or_else(|_| error_row(job, cfg))
}

/// Verification rows in catalog order, then by ratio; computed in parallel.
pub fn verify_rows(cfg: &RunConfig) -> anyhow::Result<Vec<VerifyRow>> {
    let seed = match cfg.seed.as_deref() {
        Some(s) => s.trim().parse::<u64>().map_err(|_| UsageError(format!("verify seed `{s}` is not an integer")))?,
        None => DEFAULT_SEED,
    };
    let (jobs, _) = jobs(cfg)?;
    Ok(jobs.par_iter().map(|j| verify_job(j, cfg, seed)).collect())
}

/// Writes the report; returns whether every row passed.
pub fn cmd_verify(cfg: &RunConfig, w: &mut dyn Write) -> anyhow::Result<bool> {
    let rows = verify_rows(cfg)?;
    if cfg.json {
        let js: Vec<_> = rows
            .iter()
            .map(|r| {
                json!({
                    "family": r.family,
                    "a": r.a,
                    "nu": r.nu,
                    "nv": r.nv,
                    "max_abs_crpc_residual": r.max_abs_crpc_residual,
                    "max_abs_H": r.max_abs_h,
                    "ode_residual": r.ode_residual,
                    "dualK_residual": r.dual_k_residual,
                    "status": r.status.label(),
                })
            })
            .collect();
        serde_json::to_writer_pretty(&mut *w, &js)?;
        writeln!(w)?;
    } else {
        write_verify_csv(&rows, &mut *w).context("writing the report")?;
    }
    Ok(rows.iter().all(|r| r.status == Status::Pass))
}
