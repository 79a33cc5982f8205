use std::path::Path;
use std::process::{Command, Output};

use rkhs_interp::{solve_min_norm, InterpolationProblem, Kernel};

fn rkhs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rkhs"))
        .args(args)
        .output()
        .expect("rkhs runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    assert_eq!(code(out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV, parsed as floats, after checking the header.
fn rows(csv: &str, header: &str) -> Vec<Vec<f64>> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(header));
    lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

const SPLINE01: &str = r#"{"family":"Spline01","params":{}}"#;

#[test]
fn kernel_eval_tabulates_the_grid() {
    let csv = stdout(&rkhs(&["kernel-eval", "--kernel", SPLINE01, "--grid", "0:1:3"]));
    let rows = rows(&csv, "s,t,value");
    assert_eq!(rows.len(), 9);
    assert!(rows.contains(&vec![0.5, 1.0, 0.5]));
    for r in &rows {
        assert_eq!(r[2], r[0].min(r[1]));
    }
}

#[test]
fn kernel_eval_of_bernstein_and_a_sum() {
    let csv = stdout(&rkhs(&["kernel-eval", "--kernel", r#"{"family":"Bernstein1","params":{}}"#, "--grid", "0:1:2"]));
    assert!(rows(&csv, "s,t,value").contains(&vec![0.0, 1.0, 0.0]));
    let sum = r#"{"op":"add","args":[{"family":"H2Part","params":{"part":"K"}},{"family":"H2Part","params":{"part":"L"}}]}"#;
    let csv = stdout(&rkhs(&["kernel-eval", "--kernel", sum, "--grid", "1:1:1"]));
    let rows = rows(&csv, "s,t,value");
    assert!((rows[0][2] - 7.0 / 3.0).abs() < 1e-15);
}

#[test]
fn kernel_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let k = write(dir.path(), "k.json", SPLINE01);
    let a = rkhs(&["kernel-eval", "--kernel", &k, "--grid", "0:1:4"]);
    let b = rkhs(&["kernel-eval", "--kernel", SPLINE01, "--grid", "0:1:4"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn fit_then_eval_reproduces_lagrange() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(
        dir.path(),
        "c.json",
        r#"{"kernel":{"family":"Lagrange","params":{"nodes":[0,1]}},
            "constraints":[{"kind":"point","point":0,"target":0},{"kind":"point","point":1,"target":1}]}"#,
    );
    let fit = dir.path().join("fit.json");
    stdout(&rkhs(&["fit", "--constraints", &c, "--out", fit.to_str().unwrap()]));
    let csv = stdout(&rkhs(&["eval", "--interpolant", fit.to_str().unwrap(), "--grid", "0:1:11"]));
    for r in rows(&csv, "t,value") {
        assert!((r[1] - r[0]).abs() < 1e-12);
    }
}

#[test]
fn fit_reports_the_squared_norm() {
    let xs = [0.1, 0.25, 0.4, 0.6, 0.75, 0.9];
    let ys = [0.3, -0.2, 0.5, 0.1, -0.4, 0.2];
    let dir = tempfile::tempdir().unwrap();
    let constraints: Vec<String> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| format!(r#"{{"kind":"point","point":{x},"target":{y}}}"#))
        .collect();
    let c = write(dir.path(), "c.json", &format!("[{}]", constraints.join(",")));
    let json = stdout(&rkhs(&["fit", "--kernel", SPLINE01, "--constraints", &c]));
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let lambdas: Vec<f64> = serde_json::from_value(doc["lambdas"].clone()).unwrap();
    let dot: f64 = lambdas.iter().zip(ys).map(|(l, y)| l * y).sum();
    assert!((doc["norm_sq"].as_f64().unwrap() - dot).abs() < 1e-12);
    let sigma = solve_min_norm(&InterpolationProblem::points(Kernel::spline01(), &xs, &ys).unwrap()).unwrap();
    assert!((sigma.norm_sq() - dot).abs() < 1e-12);
}

#[test]
fn verify_reproduce_is_accurate() {
    let csv = stdout(&rkhs(&["verify-reproduce", "--kernel", SPLINE01, "--f", "sin"]));
    let rows = rows(&csv, "t,f,inner,abs_error");
    assert_eq!(rows.len(), 9);
    for r in rows {
        assert!(r[3] <= 1e-8, "{r:?}");
    }
}

#[test]
fn dirac_study_rows() {
    let csv = stdout(&rkhs(&["dirac-study", "--f", "one", "--t", "0.5", "--h-list", "0.2,0.1,0.05,0.025"]));
    let rows = rows(&csv, "h,t,approx,target,abs_error");
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![0.2, 0.1, 0.05, 0.025]);
    for r in rows {
        assert!(r[4] <= 1e-10);
    }
}

#[test]
fn gram_check_reports_a_psd_matrix() {
    let json = stdout(&rkhs(&["gram-check", "--kernel", SPLINE01, "--grid", "0.1:1:10"]));
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["n"], 10);
    assert!(doc["min_eigenvalue"].as_f64().unwrap() > 0.0);
    assert_eq!(doc["jitter_used"], 0.0);
}

#[test]
fn identical_inputs_give_identical_bytes() {
    for args in [
        &["kernel-eval", "--kernel", r#"{"family":"Fourier","params":{"n_terms":16}}"#, "--grid", "0:2:9"][..],
        &["dirac-study", "--f", "exp", "--t", "0.5", "--h-list", "0.1,0.05"][..],
        &["verify-reproduce", "--kernel", r#"{"family":"H2Part","params":{"part":"H"}}"#, "--f", "square"][..],
    ] {
        assert_eq!(rkhs(args).stdout, rkhs(args).stdout);
    }
}

#[test]
fn usage_and_parameter_errors_exit_2() {
    for args in [
        &["kernel-eval", "--kernel", r#"{"family":"Nope","params":{}}"#, "--grid", "0:1:3"][..],
        &["kernel-eval", "--kernel", SPLINE01, "--grid", "0:1"][..],
        &["kernel-eval", "--kernel", "{not json", "--grid", "0:1:3"][..],
        &["dirac-study", "--f", "sin", "--t", "0.5", "--h-list"][..],
        &["dirac-study", "--f", "nope", "--t", "0.5", "--h-list", "0.1"][..],
        &["fit", "--constraints", "/nonexistent/c.json"][..],
        &["frobnicate"][..],
    ] {
        let out = rkhs(args);
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn domain_errors_exit_3() {
    for args in [
        &["dirac-study", "--f", "sin", "--t", "0.1", "--h-list", "0.1"][..],
        &["kernel-eval", "--kernel", SPLINE01, "--grid", "0:2:3"][..],
    ] {
        assert_eq!(code(&rkhs(args)), 3, "{args:?}");
    }
}

#[test]
fn rank_deficiency_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    // every function of the space vanishes at a theta node
    let c = write(
        dir.path(),
        "c.json",
        r#"{"kernel":{"family":"OddSpline","params":{"m":2,"thetas":[0.1,0.9],"interval":[0,1]}},
            "constraints":[{"kind":"point","point":0.1,"target":1},{"kind":"point","point":0.5,"target":0}]}"#,
    );
    let out = rkhs(&["fit", "--constraints", &c]);
    assert_eq!(code(&out), 4, "{}", String::from_utf8_lossy(&out.stderr));
}
