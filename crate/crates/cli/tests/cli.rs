mod common;

use common::{all_pass, check, run, stable_body};

#[test]
fn ricci_flat_small_campaign_passes() {
    let r = run(&["verify-ricci-flat", "--a", "1", "--seed", "7", "--samples", "100"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rep = r.json();
    assert!(all_pass(&rep));
    assert!(check(&rep, "ricci_max")["value"].as_f64().unwrap() < 1e-8);
    assert_eq!(rep["config"]["seed"], 7);
    assert_eq!(rep["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn config_errors_exit_one() {
    for args in [
        &["verify-ricci-flat", "--a", "0"][..],
        &["verify-ricci-flat", "--a", "-2"],
        &["scan-flag-curvature", "--samples", "0"],
        &["classify-killing", "--samples", "1"],
        &["verify-ricci-flat", "--tol", "nonsense=1"],
        &["verify-ricci-flat", "--tol", "ricci"],
        &["no-such-command"],
    ] {
        let r = run(args);
        assert_eq!(r.code, 1, "{args:?}: {}", r.stdout);
        assert!(r.stdout.is_empty());
        assert!(!r.stderr.is_empty());
    }
}

#[test]
fn failed_check_exits_two() {
    let r = run(&["verify-ricci-flat", "--samples", "5", "--tol", "riemann_floor=1e6"]);
    assert_eq!(r.code, 2);
    assert_eq!(check(&r.json(), "riemann_max")["status"], "fail");
}

#[test]
fn findings_do_not_change_exit_code() {
    let r = run(&["crosscheck-norms", "--samples", "50"]);
    assert_eq!(r.code, 0);
    let rep = r.json();
    assert_eq!(check(&rep, "vr_closed_form")["status"], "finding");
    assert!(!rep["findings"].as_array().unwrap().is_empty());
}

#[test]
fn flat_diagnostics() {
    let rep = run(&["classify-killing", "--flat"]).json();
    assert_eq!(check(&rep, "dimension")["value"], 10.0);
    let rep = run(&["scan-flag-curvature", "--flat", "--samples", "20"]).json();
    assert!(check(&rep, "max_abs_k")["value"].as_f64().unwrap() < 1e-9);
}

#[test]
fn empty_domain_is_a_finding() {
    let r = run(&["verify-einstein", "--field", "us", "--s", "100"]);
    assert_eq!(r.code, 0);
    let rep = r.json();
    assert_eq!(rep["findings"][0]["name"], "empty-domain");
    assert!(rep["checks"].as_array().unwrap().is_empty());
}

#[test]
fn report_file_and_csv() {
    let dir = std::env::temp_dir().join(format!("taubnut-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let csv = dir.join("scan.csv");
    let r = run(&[
        "scan-flag-curvature",
        "--samples",
        "10",
        "--out",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(rep["command"], "scan-flag-curvature");
    let table = std::fs::read_to_string(&csv).unwrap();
    assert!(!table.contains('\r'));
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "x1,x2,x3,x4,y1,y2,y3,y4,u1,u2,u3,u4,K");
    assert_eq!(lines.len(), 1 + 10 + 3);
    let spread: f64 = lines[13].rsplit(',').next().unwrap().parse().unwrap();
    assert_eq!(spread, check(&rep, "flag_curvature_spread")["value"].as_f64().unwrap());
    // 17 significant digits: d.dddddddddddddddde±x
    let first = lines[1].split(',').next().unwrap();
    assert_eq!(first.split('e').next().unwrap().trim_start_matches('-').len(), 18);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn seed_changes_samples_but_not_layout() {
    let a = run(&["verify-ricci-flat", "--samples", "10", "--seed", "1"]);
    let b = run(&["verify-ricci-flat", "--samples", "10", "--seed", "2"]);
    assert_ne!(stable_body(&a.stdout), stable_body(&b.stdout));
    assert_eq!(a.stdout.lines().count(), b.stdout.lines().count());
}
