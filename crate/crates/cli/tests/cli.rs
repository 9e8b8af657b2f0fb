use std::path::Path;
use std::process::{Command, Output};

use chiralwalk::search::{dense_search_energies, GammaRule};
use chiralwalk::spectrum::walk_spectrum;
use chiralwalk::{ChiralCompleteGraph, SearchProblem};

fn chiralwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chiralwalk"))
        .args(args)
        .env_remove("CHIRALWALK_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = chiralwalk(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Data rows (after the column header) split into fields.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn column_header(csv: &str) -> &str {
    csv.lines().find(|l| !l.starts_with('#')).unwrap()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

/// The comment line after `label`, split into numbers.
fn footer_after(csv: &str, label: &str) -> Vec<f64> {
    let lines: Vec<&str> = csv.lines().collect();
    let at = lines.iter().position(|l| l.starts_with(label)).expect("footer label");
    lines[at + 1]
        .trim_start_matches("# ")
        .split(',')
        .map(num)
        .collect()
}

#[test]
fn spectrum_small_cases() {
    let csv = stdout_of(&["spectrum", "--n", "5", "--theta", "0"]);
    assert_eq!(column_header(&csv), "j,alpha_j,E_closed,E_dense_sorted_match");
    let e: Vec<f64> = rows(&csv).iter().map(|r| num(&r[2])).collect();
    assert_eq!(e, [0.0, 5.0, 5.0, 5.0, 5.0]);

    let csv = stdout_of(&["spectrum", "--n", "5", "--theta", "0.6"]);
    let want = [0.0, 2.388887229790575, 4.53691484458802, 3.716441304508763, 5.864468919306208];
    for (r, w) in rows(&csv).iter().zip(want) {
        assert!((num(&r[2]) - w).abs() < 1e-10);
        assert!((num(&r[3]) - w).abs() < 1e-10);
    }
}

#[test]
fn even_n_is_a_validation_error() {
    let out = chiralwalk(&["spectrum", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n must be odd"));
}

#[test]
fn sums_rows() {
    let csv = stdout_of(&["sums", "--theta-grid", "0:1.003885:2"]);
    assert_eq!(
        column_header(&csv),
        "theta,S1_exact,S1_asymptotic,S2_exact,S2_asymptotic,near_critical"
    );
    let r = rows(&csv);
    let n = 1023.0;
    assert!((num(&r[0][1]) / ((n - 1.0) / (n * n)) - 1.0).abs() < 1e-11);
    assert_eq!(r[0][5], "0");
    assert_eq!(r[1][5], "1");
    assert!(num(&r[1][1]).abs() > 10.0 * num(&r[0][1]));
}

#[test]
fn critical_table() {
    let csv = stdout_of(&["critical-thetas", "--j-max", "5"]);
    assert_eq!(column_header(&csv), "j,theta_c_exact,theta_c_approx,residual");
    let r = rows(&csv);
    let js: Vec<&str> = r.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(js, ["1", "3", "5"]);
    for (row, want) in r.iter().zip([1.0039, 1.3617, 1.4442]) {
        assert!((num(&row[1]) - want).abs() < 5e-4);
        assert!((num(&row[2]) - want).abs() < 5e-4);
        assert!(num(&row[3]).abs() < 1e-9);
    }
}

#[test]
fn overlap_support_pairs_shift() {
    for (theta, want) in [("0.8", [0.0, 1.0]), ("1.2", [1.0, 2.0]), ("1.4", [2.0, 3.0])] {
        let csv = stdout_of(&["overlaps", "--n", "255", "--theta", theta]);
        assert_eq!(column_header(&csv), "gamma_times_n,a,overlap_s,overlap_w,energy");
        assert_eq!(rows(&csv).len(), 200 * 6);
        let summary = footer_after(&csv, "# support_pair_at_gamma_s1");
        assert_eq!(summary[..2], want, "theta {theta}");
    }
}

#[test]
fn levels_match_dense_and_bracket_first_critical() {
    let csv = stdout_of(&["levels", "--theta-grid", "0:0:1", "--k-levels", "4"]);
    assert_eq!(column_header(&csv), "theta,E0,E1,E2,E3,near_critical");
    let g = ChiralCompleteGraph::new(1023, 0.0).unwrap();
    let gamma = GammaRule::ExactS1.gamma_for(&walk_spectrum(&g)).unwrap();
    let dense = dense_search_energies(&SearchProblem::new(g, gamma, 0).unwrap()).unwrap();
    for (field, e) in rows(&csv)[0][1..5].iter().zip(&dense) {
        assert!((num(field) - e).abs() < 1e-10);
    }

    let csv = stdout_of(&["levels", "--theta-grid", "0.95:1.05:2"]);
    let negatives: Vec<usize> = rows(&csv)
        .iter()
        .map(|r| r[1..7].iter().filter(|f| num(f) < 0.0).count())
        .collect();
    assert_eq!(negatives, [1, 2]);
}

#[test]
fn baseline_figure_peaks_on_time() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    stdout_of(&["reproduce", "1c", "--out", out]);
    let csv = std::fs::read_to_string(dir.path().join("fig_1c.csv")).unwrap();
    assert_eq!(column_header(&csv), "t,p");
    let first = &rows(&csv)[0];
    assert_eq!(num(&first[0]), 0.0);
    assert!((num(&first[1]) - 1.0 / 1023.0).abs() < 1e-15);
    let footer = footer_after(&csv, "# t_peak,p_peak,predicted_t_star,predicted_p_star");
    let t_star = std::f64::consts::PI * 1023f64.sqrt() / 2.0;
    assert!((footer[0] / t_star - 1.0).abs() < 0.01);
    assert!(footer[1] >= 0.99);
}

#[test]
fn reproduce_7a_is_evolve_at_figure_settings() {
    let dir = tempfile::tempdir().unwrap();
    let direct = dir.path().join("direct.csv");
    stdout_of(&["evolve", "--n", "1023", "--theta", "0.8", "--gamma", "s1", "--out", direct.to_str().unwrap()]);
    stdout_of(&["reproduce", "7a", "--out", dir.path().to_str().unwrap()]);
    let a = std::fs::read(&direct).unwrap();
    let b = std::fs::read(dir.path().join("fig_7a.csv")).unwrap();
    assert_eq!(a, b);
    let csv = String::from_utf8(a).unwrap();
    let footer = footer_after(&csv, "# t_peak,p_peak,predicted_t_star,predicted_p_star");
    assert!((footer[0] / 50.241 - 1.0).abs() < 0.05 && footer[1] >= 0.95);
}

#[test]
fn unknown_figure_is_a_usage_error() {
    assert_eq!(chiralwalk(&["reproduce", "2"]).status.code(), Some(2));
}

#[test]
fn identical_config_gives_identical_bytes() {
    let args = ["sums", "--n", "101", "--theta-grid", "0:1.5:31"];
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sums.csv");
    stdout_of(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    let first = stdout_of(&args);
    assert_eq!(first, std::fs::read_to_string(&path).unwrap());

    let threaded = Command::new(env!("CARGO_BIN_EXE_chiralwalk"))
        .args(args)
        .env("CHIRALWALK_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(threaded.stdout).unwrap(), first);
    assert!(first.lines().all(|l| !l.contains('\r')));
    assert!(first.starts_with(&format!("# chiralwalk {}\n", env!("CARGO_PKG_VERSION"))));
}

#[test]
fn bad_thread_count_is_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_chiralwalk"))
        .args(["critical-thetas", "--n", "11"])
        .env("CHIRALWALK_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let missing = Path::new("/nonexistent-dir/sub/out.csv");
    let out = chiralwalk(&["critical-thetas", "--n", "11", "--out", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent-dir"));
}

#[test]
fn overflowing_rate_is_a_numerical_error() {
    let out = chiralwalk(&["evolve", "--n", "5", "--theta", "0", "--gamma", "1e308", "--tmax", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn raw_phase_is_reduced_with_the_rate_sign() {
    // θ = 4 reduces to 4 - π with the Laplacian negated, so an explicit
    // γ must come out identical to -γ at the reduced phase.
    let common = ["evolve", "--n", "31", "--tmax", "5", "--dt", "0.25"];
    let raw = stdout_of(&[&common[..], &["--theta", "4", "--gamma", "0.07"]].concat());
    let reduced = (4.0 - std::f64::consts::PI).to_string();
    let direct = stdout_of(&[&common[..], &["--theta", &reduced, "--gamma", "-0.07"]].concat());
    assert_eq!(rows(&raw), rows(&direct));
    assert!(raw.contains("# gamma_sign: -1\n"));
}
