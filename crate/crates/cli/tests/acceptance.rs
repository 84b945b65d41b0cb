//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p taubnut-cli --test acceptance -- --nocapture` to see them.

mod common;

use common::{all_pass, check, run, stable_body};
use taubnut::diffcore::{Point4, Sym4};
use taubnut::finsler::{flag_curvature, spray_coefficients, Flag};
use taubnut::killing::{build_field, TaubNutKillingParams};
use taubnut::riemann::{
    christoffel, gibbons_hawking_metric, ricci, sectional_curvature, AffineField, Chart3, GibbonsHawkingData,
    MetricField, TaubNutMetric,
};
use taubnut::sampling::{cube_vector, sample_ball, seeded_rng, unit_vector};
use taubnut::zermelo::{
    crosscheck_norm, randers_value, wind_norm_closed_us, zermelo_forward, zermelo_inverse, NavigationData,
    RandersMetric,
};

const SEED: u64 = 7;

fn verdict(id: u32, title: &str, ok: bool, detail: String) {
    println!(
        "[{}] criterion {id:>2} {title}: {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} ({title}) failed: {detail}");
}

fn value(report: &serde_json::Value, name: &str) -> f64 {
    check(report, name)["value"].as_f64().unwrap()
}

fn max_entry_diff(a: &Sym4, b: &Sym4) -> f64 {
    let mut m = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            m = m.max((a.get(i, j) - b.get(i, j)).abs());
        }
    }
    m
}

#[test]
fn criterion_01_ricci_flat_not_flat() {
    let mut ok = true;
    let mut detail = Vec::new();
    for a in ["0.1", "1", "5"] {
        let r = run(&["verify-ricci-flat", "--a", a, "--samples", "1000", "--seed", "7"]);
        let rep = r.json();
        let ric = value(&rep, "ricci_max");
        let riem = value(&rep, "riemann_max");
        ok &= r.code == 0 && all_pass(&rep) && ric < 1e-8 && riem > 1e-3;
        detail.push(format!("a={a} ricci={ric:.2e} riemann={riem:.2e}"));
    }
    verdict(1, "Ricci-flat, not flat", ok, detail.join("; "));
}

#[test]
fn criterion_02_dual_form_agreement() {
    let pts = sample_ball(SEED, 1000, 2.0);
    let mut worst = 0.0f64;
    for a in [0.1, 1.0, 5.0] {
        let m = TaubNutMetric::new(a).unwrap();
        for x in &pts {
            worst = worst.max(max_entry_diff(&m.at(x).unwrap(), &m.closed_form(x)));
        }
    }
    verdict(
        2,
        "dual-form agreement",
        worst < 1e-12,
        format!("max diff {worst:.2e} over 1000 points, a in {{0.1,1,5}}"),
    );
}

#[test]
fn criterion_03_killing_algebra() {
    let r = run(&["classify-killing", "--a", "1", "--seed", "7"]);
    let rep = r.json();
    let grid = value(&rep, "grid_killing_residual");
    let dim = value(&rep, "dimension");
    let pattern = value(&rep, "pattern_residual");
    let flat = run(&["classify-killing", "--flat", "--seed", "7"]).json();
    let flat_dim = value(&flat, "dimension");
    let ok = r.code == 0 && grid < 1e-9 && dim == 4.0 && pattern < 1e-9 && flat_dim == 10.0;
    verdict(
        3,
        "Killing fields of g_a",
        ok,
        format!(
            "81-grid residual {grid:.2e}, dimension {dim}, pattern residual {pattern:.2e}, flat dimension {flat_dim}"
        ),
    );
}

#[test]
fn criterion_04_us_norm_closed_form() {
    let pts = sample_ball(SEED, 1000, 2.0);
    let s = 0.25;
    let mut worst = 0.0f64;
    for a in [0.1, 1.0, 5.0] {
        let nav = NavigationData::new(
            TaubNutMetric::new(a).unwrap(),
            build_field(&TaubNutKillingParams::u_s(s)),
        );
        let x = crosscheck_norm(&nav, |p| wind_norm_closed_us(a, s, p), &pts).unwrap();
        worst = worst.max(x.max_abs_diff);
    }
    let cli = run(&["crosscheck-norms", "--a", "1", "--s", "0.25"]).json();
    let cli_status = check(&cli, "us_closed_form")["status"].clone();
    verdict(
        4,
        "U_s closed-form norm",
        worst < 1e-10 && cli_status == "pass",
        format!("max |closed - direct| {worst:.2e} over 1000 points, a in {{0.1,1,5}}; cli status {cli_status}"),
    );
}

#[test]
fn criterion_05_vr_norm_finding() {
    let r = run(&["crosscheck-norms", "--a", "1", "--r", "1"]);
    let rep = r.json();
    let finding = rep["findings"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["name"] == "vr-closed-form-mismatch")
        .cloned()
        .unwrap_or_default();
    let closed = finding["data"]["probe_closed"].as_f64().unwrap_or(f64::NAN);
    let direct = finding["data"]["probe_direct"].as_f64().unwrap_or(f64::NAN);
    let dual = value(&rep, "omega_dual_pattern");
    let ok = r.code == 0
        && check(&rep, "vr_closed_form")["status"] == "finding"
        && (closed - 0.5).abs() < 1e-12
        && (direct - 2.0).abs() < 1e-12
        && dual < 1e-10
        && check(&rep, "omega_dual_pattern")["status"] == "pass";
    verdict(
        5,
        "V_r norm discrepancy",
        ok,
        format!(
            "at (1,0,0,0) closed {closed} vs direct {direct}; omega-dual diff {dual:.2e}; exit {}",
            r.code
        ),
    );
}

fn einstein(id: u32, title: &str, args: &[&str], floor: f64) {
    let r = run(args);
    let rep = r.json();
    let res = value(&rep, "einstein_relative_residual");
    let k = value(&rep, "k_fit");
    let kp = value(&rep, "k_predicted");
    let c = value(&rep, "c");
    let spread = value(&rep, "flag_curvature_spread");
    let threshold = check(&rep, "flag_curvature_spread")["threshold"].as_f64().unwrap();
    let sparse = rep["findings"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f["name"] == "sparse-domain");
    let ok = r.code == 0
        && all_pass(&rep)
        && !sparse
        && res < 1e-6
        && k < 1e-7
        && kp < 1e-7
        && c < 1e-9
        && threshold == floor
        && spread > floor;
    verdict(
        id,
        title,
        ok,
        format!(
            "20 points: |Ric - 3KF²|/F² {res:.2e}, |K_fit| {k:.2e}, |c| {c:.2e}; spread {spread:.4} > floor {floor}"
        ),
    );
}

#[test]
fn criterion_06_einstein_vr() {
    einstein(
        6,
        "Einstein (g_a, V_r)",
        &["verify-einstein", "--field", "vr", "--a", "1", "--r", "1"],
        1.7411,
    );
}

#[test]
fn criterion_07_einstein_us() {
    einstein(
        7,
        "Einstein (g_a, U_s)",
        &["verify-einstein", "--field", "us", "--a", "1", "--s", "0.25"],
        0.8729,
    );
}

#[test]
fn criterion_08_riemannian_reduction() {
    let m = TaubNutMetric::new(1.0).unwrap();
    let f = RandersMetric::riemannian(m);
    let mut rng = seeded_rng(SEED);
    let pts = sample_ball(SEED, 50, 2.0);
    let (mut spray_err, mut flag_err) = (0.0f64, 0.0f64);
    for x in &pts {
        let y = unit_vector(&mut rng);
        let u = unit_vector(&mut rng);
        let g = spray_coefficients(&f, x, &y).unwrap();
        let gam = christoffel(&m, x).unwrap();
        for i in 0..4 {
            let mut c = 0.0;
            for j in 0..4 {
                for k in 0..4 {
                    c += gam[i][j][k] * y[j] * y[k];
                }
            }
            spray_err = spray_err.max((2.0 * g[i] - c).abs());
        }
        let k = flag_curvature(&f, &Flag::new(*x, y, u).unwrap()).unwrap();
        let s = sectional_curvature(&m, x, &y, &u).unwrap();
        flag_err = flag_err.max((k - s).abs());
    }
    verdict(
        8,
        "Riemannian reduction",
        spray_err < 1e-8 && flag_err < 1e-8,
        format!("50 configurations: spray {spray_err:.2e}, flag vs sectional {flag_err:.2e}"),
    );
}

#[test]
fn criterion_09_zermelo_round_trip() {
    let mut rng = seeded_rng(SEED);
    let pts = sample_ball(SEED, 100, 2.0);
    let (mut round, mut ident) = (0.0f64, 0.0f64);
    for x in &pts {
        let [a, scale] = cube_vector::<_, 2>(&mut rng, 1.0);
        let metric = TaubNutMetric::new(2.5 * (a + 1.0)).unwrap();
        let g = metric.at(x).unwrap();
        let dir = unit_vector(&mut rng);
        let v = dir.map(|c| c * 0.45 * (scale + 1.0) / g.bilinear(&dir, &dir).sqrt());
        let (aa, b) = zermelo_forward(&g, &v).unwrap();
        let (g2, v2) = zermelo_inverse(&aa, &b).unwrap();
        round = round.max(max_entry_diff(&g, &g2));
        round = round.max((0..4).fold(0.0f64, |m, i| m.max((v[i] - v2[i]).abs())));

        let wind = AffineField::constant(v);
        let nav = NavigationData::new(metric, wind);
        let y = unit_vector(&mut rng);
        let f = randers_value(&nav, x, &y).unwrap();
        let w: [f64; 4] = std::array::from_fn(|i| y[i] - f * v[i]);
        ident = ident.max((f - g.bilinear(&w, &w).sqrt()).abs());
    }
    verdict(
        9,
        "Zermelo round trip",
        round < 1e-10 && ident < 1e-10,
        format!("100 triples, |V| <= 0.9: round trip {round:.2e}, navigation identity {ident:.2e}"),
    );
}

#[test]
fn criterion_10_gibbons_hawking() {
    let chart = Chart3 {
        lo: [-1.0, -1.0, 1.0],
        hi: [1.0, 1.0, 2.0],
    };
    let probes: Vec<Point4> = chart
        .probe_grid()
        .iter()
        .map(|p| Point4::new([0.0, p[0], p[1], p[2]]).unwrap())
        .collect();
    let worst = |data| {
        let g = gibbons_hawking_metric(data).unwrap();
        probes
            .iter()
            .fold(0.0f64, |m, x| m.max(ricci(&g, x).unwrap().max_abs()))
    };
    let good = worst(GibbonsHawkingData::linear_monopole(chart));
    let bad = worst(GibbonsHawkingData::unbalanced(chart));
    verdict(
        10,
        "Gibbons-Hawking ansatz",
        good < 1e-8 && bad > 1e-3,
        format!("27 probes: monopole data Ricci {good:.2e}, unbalanced data Ricci {bad:.2e}"),
    );
}

#[test]
fn criterion_11_determinism() {
    let dir = std::env::temp_dir().join(format!("taubnut-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("scan.csv");
    let csv = csv.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["verify-ricci-flat", "--samples", "200"],
        vec!["classify-killing"],
        vec!["classify-killing", "--flat"],
        vec!["verify-einstein", "--field", "vr"],
        vec!["verify-einstein", "--field", "us"],
        vec!["verify-einstein", "--field", "wmn"],
        vec!["crosscheck-norms"],
        vec!["scan-flag-curvature", "--csv", csv],
        vec!["scan-flag-curvature", "--flat", "--samples", "30"],
    ];
    let mut identical = 0;
    for args in &commands {
        let first = run(args);
        let first_csv = std::fs::read(csv).ok();
        let second = run(args);
        let second_csv = std::fs::read(csv).ok();
        if stable_body(&first.stdout) == stable_body(&second.stdout)
            && first.code == second.code
            && first_csv == second_csv
        {
            identical += 1;
        } else {
            println!("nondeterministic: {args:?}");
        }
    }
    std::fs::remove_dir_all(&dir).unwrap();
    verdict(
        11,
        "determinism",
        identical == commands.len(),
        format!(
            "{identical}/{} invocations byte-identical across two runs (duration excluded)",
            commands.len()
        ),
    );
}
