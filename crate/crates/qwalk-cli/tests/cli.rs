//! Black-box tests against the compiled binary: round-trips, determinism,
//! and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

// bundled CSV reader used by the round-trip checks
fn parse_csv(text: &str, header: &str) -> Vec<Vec<f64>> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(header));
    lines
        .map(|line| line.split(',').map(|f| f.parse::<f64>().unwrap()).collect())
        .collect()
}

#[test]
fn evolve_csv_normalized_and_round_trips() {
    let out = stdout(&qwalk(&[
        "evolve", "--type", "a", "--coin", "hadamard", "--state", "R", "--steps", "100",
        "--format", "csv",
    ]));
    let rows = parse_csv(&out, "k,prob,psiL_re,psiL_im,psiR_re,psiR_im");
    assert_eq!(rows.len(), 101);
    let total: f64 = rows.iter().map(|r| r[1]).sum();
    assert!((total - 1.0).abs() <= 1e-9);
    for r in &rows {
        // prob column must agree with the amplitudes it sits next to
        let from_amp = r[2] * r[2] + r[3] * r[3] + r[4] * r[4] + r[5] * r[5];
        assert!((r[1] - from_amp).abs() < 1e-15);
        // 17 significant digits survive the decimal round trip exactly
        assert_eq!(format!("{:.16e}", r[1]).parse::<f64>().unwrap(), r[1]);
    }
}

#[test]
fn evolve_json_matches_csv_bit_for_bit() {
    let args_common = [
        "--type", "g", "--coin", "gudder:0.8", "--state", "sym", "--steps", "24",
    ];
    let mut csv_args = vec!["evolve"];
    csv_args.extend_from_slice(&args_common);
    csv_args.extend_from_slice(&["--format", "csv"]);
    let csv = stdout(&qwalk(&csv_args));
    let rows = parse_csv(&csv, "k,prob,psiL_re,psiL_im,psiR_re,psiR_im");

    let mut json_args = vec!["evolve"];
    json_args.extend_from_slice(&args_common);
    json_args.extend_from_slice(&["--format", "json"]);
    let parsed: serde_json::Value = serde_json::from_str(&stdout(&qwalk(&json_args))).unwrap();
    assert_eq!(parsed["time"], 24);
    assert_eq!(parsed["walk_type"], "g");
    assert_eq!(parsed["coin"], "gudder:0.8");
    let entries = parsed["entries"].as_array().unwrap();
    assert_eq!(entries.len(), rows.len());
    for (entry, row) in entries.iter().zip(&rows) {
        let e = entry.as_array().unwrap();
        for (i, (field, expect)) in e.iter().zip(row).enumerate() {
            assert_eq!(field.as_f64().unwrap(), *expect, "column {i} of {e:?} vs {row:?}");
        }
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["evolve", "--coin", "h_rho:0.3", "--state", "L", "--steps", "40"],
        vec!["absorb", "--mode", "semi", "--k", "1", "--state", "R", "--n-max", "5000"],
        vec!["density", "--state", "R", "--grid", "64"],
        vec!["verify", "pqrs"],
    ] {
        let a = qwalk(&args);
        let b = qwalk(&args);
        assert_eq!(a.stdout, b.stdout, "args: {args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn absorb_semi_hadamard_matches_known_value() {
    let out = stdout(&qwalk(&[
        "absorb", "--type", "a", "--coin", "hadamard", "--mode", "semi", "--k", "1",
        "--state", "R", "--n-max", "20000",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let two_over_pi = 2.0 / std::f64::consts::PI;
    assert!((v["prob"].as_f64().unwrap() - 0.636620).abs() < 1e-5);
    assert!((v["closed_form"].as_f64().unwrap() - two_over_pi).abs() < 1e-14);
    assert!((v["cond_mean_T0"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-2);
    assert_eq!(v["spec"]["mode"], "semi");
    assert_eq!(v["spec"]["width"], serde_json::Value::Null);
}

#[test]
fn absorb_emit_series_round_trips() {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("series.csv");
    let out = stdout(&qwalk(&[
        "absorb", "--mode", "finite", "--n", "3", "--k", "1", "--state", "R",
        "--emit-series", path.to_str().unwrap(),
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["conjecture_rhs"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-14);
    let rows = parse_csv(
        &std::fs::read_to_string(&path).unwrap(),
        "n,P_n,p_re,p_im,r_re,r_im",
    );
    let total: f64 = rows.iter().map(|r| r[1]).sum();
    assert!((total - v["prob"].as_f64().unwrap()).abs() < 1e-12);
}

#[test]
fn density_integrates_to_one() {
    let out = stdout(&qwalk(&["density", "--coin", "hadamard", "--state", "sym", "--grid", "2000"]));
    let rows = parse_csv(&out, "x,f");
    assert_eq!(rows.len(), 2001);
    // trapezoid over the grid; the edge singularity is integrable, so the
    // sum lands near 1 without being a precision check
    let h = rows[1][0] - rows[0][0];
    let mass: f64 = rows.windows(2).map(|w| 0.5 * (w[0][1] + w[1][1]) * h).sum();
    assert!((mass - 1.0).abs() < 0.05, "mass {mass}");
}

#[test]
fn limit_stats_constants() {
    let out = stdout(&qwalk(&["limit-stats", "--coin", "hadamard", "--state", "R"]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let sqrt2 = std::f64::consts::SQRT_2;
    assert!((v["mean"].as_f64().unwrap() - (2.0 - sqrt2) / 2.0).abs() < 1e-14);
    assert!((v["sd"].as_f64().unwrap() - ((sqrt2 - 1.0) / 2.0).sqrt()).abs() < 1e-14);
}

#[test]
fn verify_conjecture_table_passes() {
    let out = qwalk(&["verify", "conjecture", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.ends_with(",pass")));
}

#[test]
fn exit_codes() {
    // parse / validation errors
    assert_eq!(qwalk(&["evolve", "--coin", "nope", "--steps", "1"]).status.code(), Some(2));
    assert_eq!(qwalk(&["absorb", "--mode", "finite", "--k", "1"]).status.code(), Some(2));
    assert_eq!(qwalk(&["verify", "bogus"]).status.code(), Some(2));
    assert_eq!(qwalk(&["evolve"]).status.code(), Some(2)); // missing --steps
    // truncation cut off far before the window test can pass
    let out = qwalk(&["absorb", "--mode", "semi", "--k", "1", "--state", "R", "--n-max", "300"]);
    assert_eq!(out.status.code(), Some(3));
}
