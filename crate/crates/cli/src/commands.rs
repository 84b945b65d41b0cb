use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::json;
use taubnut::diffcore::Point4;
use taubnut::finsler::{constancy_scan, einstein_check, sample_flagpoles, sample_flags, Flag, WIND_MARGIN};
use taubnut::killing::{build_field, classify_killing, EuclideanKilling, TaubNutKillingParams};
use taubnut::riemann::{
    curvature_campaign, killing_residual, AffineField, FlatMetric, MetricField, TaubNutMetric, VectorField,
};
use taubnut::sampling::{sample_ball, seeded_stream};
use taubnut::zermelo::{crosscheck_norm, wind_norm_closed_us, wind_norm_closed_vr, NavigationData, NormCrosscheck};

use crate::config::{CommandKind, ConfigError, FieldKind, RunConfig};
use crate::report::{Check, Comparison, ConfigEcho, Finding, Report, Status};

/// Base points are drawn from the ball `|x| ≤ SAMPLE_RADIUS`.
pub const SAMPLE_RADIUS: f64 = 2.0;
/// Flags per Einstein run.
pub const EINSTEIN_FLAGS: usize = 100;
/// RNG stream for flags; points use stream 0.
const FLAG_STREAM: u64 = 1;

/// Non-constancy floors: half the flag-curvature spread of the reference run
/// (a = 1, r = 1 resp. s = 1/4, seed 7, 100 flags: spreads 3.48222 and 1.74586).
pub const VR_SPREAD_FLOOR: f64 = 1.7411;
pub const US_SPREAD_FLOOR: f64 = 0.8729;
/// Floor for fields without a committed reference run.
pub const GENERIC_SPREAD_FLOOR: f64 = 1e-4;

type Result<T> = std::result::Result<T, ConfigError>;

fn spread_floor(field: Option<FieldKind>) -> f64 {
    match field {
        Some(FieldKind::Vr) => VR_SPREAD_FLOOR,
        Some(FieldKind::Us) => US_SPREAD_FLOOR,
        _ => GENERIC_SPREAD_FLOOR,
    }
}

pub fn default_tolerances(kind: CommandKind, field: Option<FieldKind>, flat: bool) -> BTreeMap<String, f64> {
    let pairs: Vec<(&str, f64)> = match kind {
        CommandKind::VerifyRicciFlat => vec![("ricci", 1e-8), ("riemann_floor", 1e-3)],
        CommandKind::ClassifyKilling if flat => vec![],
        CommandKind::ClassifyKilling => vec![("killing", 1e-9), ("pattern", 1e-9)],
        CommandKind::VerifyEinstein => {
            vec![
                ("einstein", 1e-6),
                ("k", 1e-7),
                ("c", 1e-9),
                ("spread", spread_floor(field)),
            ]
        }
        CommandKind::CrosscheckNorms => vec![("norm", 1e-10)],
        CommandKind::ScanFlagCurvature if flat => vec![("flat_k", 1e-9)],
        CommandKind::ScanFlagCurvature => vec![("spread", spread_floor(field))],
    };
    pairs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
}

pub fn execute(cfg: &RunConfig) -> Result<Report> {
    let (checks, findings) = match cfg.kind {
        CommandKind::VerifyRicciFlat => verify_ricci_flat(cfg)?,
        CommandKind::ClassifyKilling => classify(cfg)?,
        CommandKind::VerifyEinstein => verify_einstein(cfg)?,
        CommandKind::CrosscheckNorms => crosscheck_norms(cfg)?,
        CommandKind::ScanFlagCurvature => scan_flag_curvature(cfg)?,
    };
    Ok(Report {
        command: cfg.kind.name().to_owned(),
        config: ConfigEcho {
            a: cfg.a,
            m: cfg.m,
            n: cfg.n,
            r: cfg.r,
            s: cfg.s,
            seed: cfg.seed,
            samples: cfg.samples,
            field: cfg.field.map(|f| f.name().to_owned()),
            flat: cfg.flat,
            tolerances: cfg.tolerances.clone(),
            out: cfg.out.clone(),
            csv: cfg.csv.clone(),
        },
        checks,
        findings,
        version: env!("CARGO_PKG_VERSION").to_owned(),
        duration_ms: 0,
    })
}

type Outcome = (Vec<Check>, Vec<Finding>);

fn taub_nut(cfg: &RunConfig) -> Result<TaubNutMetric> {
    Ok(TaubNutMetric::new(cfg.a)?)
}

fn points(cfg: &RunConfig) -> Vec<Point4> {
    sample_ball(cfg.seed, cfg.samples, SAMPLE_RADIUS)
}

fn verify_ricci_flat(cfg: &RunConfig) -> Result<Outcome> {
    let reports = curvature_campaign(&taub_nut(cfg)?, &points(cfg))?;
    let ricci = reports.iter().fold(0.0f64, |m, r| m.max(r.ricci_max_abs));
    let riemann = reports.iter().fold(0.0f64, |m, r| m.max(r.riemann_max_abs));
    Ok((
        vec![
            Check::hard("ricci_max", ricci, Comparison::Below, cfg.tol("ricci")),
            Check::hard("riemann_max", riemann, Comparison::Above, cfg.tol("riemann_floor")),
        ],
        vec![],
    ))
}

/// `(m, n, r, s) ∈ {−1, 0, 1}⁴`
fn parameter_grid() -> Vec<TaubNutKillingParams> {
    let vals = [-1.0, 0.0, 1.0];
    let mut out = Vec::with_capacity(81);
    for m in vals {
        for n in vals {
            for r in vals {
                for s in vals {
                    out.push(TaubNutKillingParams::new(m, n, r, s));
                }
            }
        }
    }
    out
}

fn classify(cfg: &RunConfig) -> Result<Outcome> {
    let pts = points(cfg);
    if cfg.flat {
        let c = classify_killing(&FlatMetric, &pts)?;
        return Ok((
            vec![Check::hard("dimension", c.dimension() as f64, Comparison::Equal, 10.0)],
            vec![],
        ));
    }
    let metric = taub_nut(cfg)?;
    let c = classify_killing(&metric, &pts)?;
    let mut grid = 0.0f64;
    for p in parameter_grid() {
        grid = grid.max(killing_residual(&build_field(&p), &metric, &pts)?);
    }
    Ok((
        vec![
            Check::hard("grid_killing_residual", grid, Comparison::Below, cfg.tol("killing")),
            Check::hard("dimension", c.dimension() as f64, Comparison::Equal, 4.0),
            Check::hard(
                "pattern_residual",
                c.pattern_residual(),
                Comparison::Below,
                cfg.tol("pattern"),
            ),
        ],
        vec![],
    ))
}

fn field_params(cfg: &RunConfig, field: FieldKind) -> TaubNutKillingParams {
    match field {
        FieldKind::Vr => TaubNutKillingParams::v_r(cfg.r),
        FieldKind::Us => TaubNutKillingParams::u_s(cfg.s),
        FieldKind::Wmn => TaubNutKillingParams::w_mn(cfg.m, cfg.n),
    }
}

fn navigation(cfg: &RunConfig, field: FieldKind) -> Result<NavigationData<TaubNutMetric, EuclideanKilling>> {
    Ok(NavigationData::new(
        taub_nut(cfg)?,
        build_field(&field_params(cfg, field)),
    ))
}

fn empty_domain(field: &str, requested: usize) -> Finding {
    Finding {
        name: "empty-domain".into(),
        summary: format!("no sampled base point has wind norm below {WIND_MARGIN}"),
        data: json!({
            "field": field,
            "requested": requested,
            "draws": 100 * requested,
            "radius": SAMPLE_RADIUS,
        }),
    }
}

fn sparse_domain(field: &str, requested: usize, found: usize) -> Finding {
    Finding {
        name: "sparse-domain".into(),
        summary: format!("only {found} of {requested} requested admissible points found"),
        data: json!({ "field": field, "requested": requested, "found": found, "radius": SAMPLE_RADIUS }),
    }
}

fn verify_einstein(cfg: &RunConfig) -> Result<Outcome> {
    let field = cfg.field.unwrap_or(FieldKind::Vr);
    let nav = navigation(cfg, field)?;
    let sample = sample_flagpoles(&nav, &mut seeded_stream(cfg.seed, 0), cfg.samples, SAMPLE_RADIUS);
    let mut findings = Vec::new();
    if sample.is_empty() {
        return Ok((vec![], vec![empty_domain(field.name(), cfg.samples)]));
    }
    if sample.len() < cfg.samples {
        findings.push(sparse_domain(field.name(), cfg.samples, sample.len()));
    }
    let rep = einstein_check(&nav, &nav, &sample)?;
    let flags = sample_flags(
        &nav,
        &mut seeded_stream(cfg.seed, FLAG_STREAM),
        EINSTEIN_FLAGS,
        SAMPLE_RADIUS,
    );
    let scan = constancy_scan(&nav, &flags)?;
    let checks = vec![
        Check::hard(
            "einstein_relative_residual",
            rep.max_relative_residual,
            Comparison::Below,
            cfg.tol("einstein"),
        ),
        Check::hard("k_predicted", rep.k.abs(), Comparison::Below, cfg.tol("k")),
        Check::hard("k_fit", rep.k_fit.abs(), Comparison::Below, cfg.tol("k")),
        Check::hard("c", rep.c.abs(), Comparison::Below, cfg.tol("c")),
        Check::hard(
            "flag_curvature_spread",
            scan.spread,
            Comparison::Above,
            cfg.tol("spread"),
        ),
    ];
    Ok((checks, findings))
}

fn mismatch_finding(name: &str, summary: String, x: &NormCrosscheck) -> Finding {
    Finding {
        name: name.into(),
        summary,
        data: json!({
            "points": x.points,
            "max_abs_diff": x.max_abs_diff,
            "max_rel_diff": x.max_rel_diff,
            "worst_point": x.worst_point.coords(),
            "worst_closed": x.worst_closed,
            "worst_direct": x.worst_direct,
        }),
    }
}

fn crosscheck_norms(cfg: &RunConfig) -> Result<Outcome> {
    let metric = taub_nut(cfg)?;
    let pts = points(cfg);
    let tol = cfg.tol("norm");
    let (a, r, s) = (cfg.a, cfg.r, cfg.s);
    let mut checks = Vec::new();
    let mut findings = Vec::new();

    let us = crosscheck_norm(
        &NavigationData::new(metric, build_field(&TaubNutKillingParams::u_s(s))),
        |x| wind_norm_closed_us(a, s, x),
        &pts,
    )?;
    let check = Check::soft("us_closed_form", us.max_rel_diff, Comparison::Below, tol);
    if check.status == Status::Finding {
        findings.push(mismatch_finding(
            "us-closed-form-mismatch",
            "closed-form |U_s|² differs from direct contraction".into(),
            &us,
        ));
    }
    checks.push(check);

    let vr_nav = NavigationData::new(metric, build_field(&TaubNutKillingParams::v_r(r)));
    let vr = crosscheck_norm(&vr_nav, |x| wind_norm_closed_vr(a, r, x), &pts)?;
    let check = Check::soft("vr_closed_form", vr.max_rel_diff, Comparison::Below, tol);
    if check.status == Status::Finding {
        let probe = Point4::new([1.0, 0.0, 0.0, 0.0]).expect("finite");
        let probe_check = crosscheck_norm(&vr_nav, |x| wind_norm_closed_vr(a, r, x), &[probe])?;
        let mut f = mismatch_finding(
            "vr-closed-form-mismatch",
            "printed μ r²|x|² differs from direct contraction of |V_r|²".into(),
            &vr,
        );
        f.data["probe_point"] = json!(probe.coords());
        f.data["probe_closed"] = json!(probe_check.worst_closed);
        f.data["probe_direct"] = json!(probe_check.worst_direct);
        findings.push(f);
    }
    checks.push(check);

    let mut dual = AffineField::hopf_dual();
    dual.matrix = dual.matrix.map(|row| row.map(|v| v * r));
    let od = crosscheck_norm(
        &NavigationData::new(metric, dual),
        |x| wind_norm_closed_vr(a, r, x),
        &pts,
    )?;
    let check = Check::soft("omega_dual_pattern", od.max_rel_diff, Comparison::Below, tol);
    if check.status == Status::Finding {
        findings.push(mismatch_finding(
            "omega-dual-mismatch",
            "|rY|² differs from μ r²|x|²".into(),
            &od,
        ));
    }
    checks.push(check);
    Ok((checks, findings))
}

fn scan_flag_curvature(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.flat {
        let nav = NavigationData::new(FlatMetric, AffineField::constant([0.5, 0.0, 0.0, 0.0]));
        return run_scan(cfg, &nav, "flat");
    }
    let field = cfg.field.unwrap_or(FieldKind::Vr);
    run_scan(cfg, &navigation(cfg, field)?, field.name())
}

fn run_scan<M, V>(cfg: &RunConfig, nav: &NavigationData<M, V>, label: &str) -> Result<Outcome>
where
    M: MetricField + Sync,
    V: VectorField + Sync,
{
    let flags = sample_flags(
        nav,
        &mut seeded_stream(cfg.seed, FLAG_STREAM),
        cfg.samples,
        SAMPLE_RADIUS,
    );
    if flags.is_empty() {
        return Ok((vec![], vec![empty_domain(label, cfg.samples)]));
    }
    let mut findings = Vec::new();
    if flags.len() < cfg.samples {
        findings.push(sparse_domain(label, cfg.samples, flags.len()));
    }
    let scan = constancy_scan(nav, &flags)?;
    if let Some(path) = &cfg.csv {
        let body = scan_csv(&flags, &scan.values, scan.min, scan.max, scan.spread);
        std::fs::write(path, body).map_err(|e| ConfigError(format!("cannot write {path}: {e}")))?;
    }
    let check = if cfg.flat {
        let worst = scan.values.iter().flatten().fold(0.0f64, |m, k| m.max(k.abs()));
        Check::hard("max_abs_k", worst, Comparison::Below, cfg.tol("flat_k"))
    } else {
        Check::hard(
            "flag_curvature_spread",
            scan.spread,
            Comparison::Above,
            cfg.tol("spread"),
        )
    };
    Ok((vec![check], findings))
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Columns `x1..x4, y1..y4, u1..u4, K`, then `min`, `max`, `spread` rows
/// carrying their value in the `K` column. Degenerate flags leave `K` empty.
pub fn scan_csv(flags: &[Flag], values: &[Option<f64>], min: f64, max: f64, spread: f64) -> String {
    let mut out = String::from("x1,x2,x3,x4,y1,y2,y3,y4,u1,u2,u3,u4,K\n");
    for (flag, k) in flags.iter().zip(values) {
        let cells: Vec<String> = flag
            .x
            .coords()
            .iter()
            .chain(&flag.y)
            .chain(&flag.u)
            .map(|v| num(*v))
            .collect();
        let _ = writeln!(out, "{},{}", cells.join(","), k.map(num).unwrap_or_default());
    }
    for (label, v) in [("min", min), ("max", max), ("spread", spread)] {
        let _ = writeln!(out, "{label}{}{}", ",".repeat(12), num(v));
    }
    out
}
