mod common;

use std::process::Command;

use common::*;
use goldman_core::cli::run;
use goldman_core::group::Alphabet;
use goldman_core::twists::classical_twist;
use goldman_core::{Expansion, StandardCurve, SurfaceSignature, TruncatedTensor};

fn ok(args: &[&str]) -> String {
    let mut v = vec!["goldman"];
    v.extend_from_slice(args);
    let (code, out, err) = run(v);
    assert_eq!(code, 0, "{err}");
    out
}

fn code(args: &[&str]) -> (i32, String) {
    let mut v = vec!["goldman"];
    v.extend_from_slice(args);
    let (c, _, err) = run(v);
    (c, err)
}

#[test]
fn fig8_report() {
    let out = ok(&["fig8", "--z", "1", "--trunc", "3"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["b"], "-2");
    assert_eq!(v["c"], "1");
    assert_eq!(v["residual2"], "0");
    assert_eq!(v["residual3"], "1/6*[Y,[Y,X]]");
    let pretty = ok(&["fig8", "--z", "-3", "--format", "pretty"]);
    assert!(pretty.contains("residual3 = -1/2*[Y,[Y,X]]"));
}

#[test]
fn twist_matches_classical_oracle() {
    let out = ok(&["twist", "--curve", "a1", "--word", "b1", "--genus", "1", "--trunc", "4"]);
    let sig = SurfaceSignature::new(1, 1, 4).unwrap();
    let h = sig.homology();
    let theta = Expansion::symplectic(sig).unwrap();
    let w = Alphabet::surface(h).parse("b1").unwrap();
    let expected = theta
        .evaluate(&classical_twist(StandardCurve::Alpha1, &w, h).unwrap())
        .unwrap();
    assert_eq!(TruncatedTensor::from_json(&out, h).unwrap(), expected);
}

#[test]
fn expand_exponential_product() {
    let out = ok(&["expand", "--word", "a1 b1", "--trunc", "2", "--expansion", "exp"]);
    let h = SurfaceSignature::new(1, 1, 2).unwrap().homology();
    let t = TruncatedTensor::from_json(&out, h).unwrap();
    let mut p = poly_one();
    for (w, c) in [
        (vec![0u8], q(1, 1)),
        (vec![1], q(1, 1)),
        (vec![0, 1], q(1, 1)),
        (vec![0, 0], q(1, 2)),
        (vec![1, 1], q(1, 2)),
    ] {
        p.insert(w, c);
    }
    assert_eq!(poly_of(&t), p);
    let pretty = ok(&[
        "expand",
        "--word",
        "a1 b1",
        "--trunc",
        "2",
        "--expansion",
        "exp",
        "--format",
        "pretty",
    ]);
    assert_eq!(pretty, "θ(a1 b1) = 1 + A1 + B1 + 1/2*A1*A1 + A1*B1 + 1/2*B1*B1");
}

#[test]
fn other_subcommands_run() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["symp-exp", "--genus", "2", "--trunc", "3"])).unwrap();
    assert_eq!(v["generators"].as_array().unwrap().len(), 4);
    let br = ok(&["bracket", "--loop", "a1", "--loop", "a1", "--trunc", "3"]);
    assert!(br.contains("\"terms\":[]"));
    ok(&["sigma", "--loop", "a1", "--word", "b1 a1", "--trunc", "3"]);
    let j: serde_json::Value =
        serde_json::from_str(&ok(&["johnson", "--genus", "2", "--curve", "sep:1", "--trunc", "5"])).unwrap();
    assert_eq!(j["lowest_degree"], "4");
    assert_eq!(j["l_plus"], true);
    let s: serde_json::Value = serde_json::from_str(&ok(&["sac-demo", "--trunc", "4"])).unwrap();
    assert_eq!(s["matches_gamma0_x"], true);
    ok(&[
        "twist", "--loop", "a1 b1 a1", "--word", "a1", "--trunc", "3", "--z", "1/2",
    ]);
    ok(&[
        "expand",
        "--word",
        "a1",
        "--boundary",
        "2",
        "--expansion",
        "curve:sep-hom:1,1",
        "--trunc",
        "3",
    ]);
}

#[test]
fn error_exit_codes() {
    let (c, err) = code(&["expand", "--word", "zz"]);
    assert_eq!(c, 2);
    let v: serde_json::Value = serde_json::from_str(&err).unwrap();
    assert_eq!(v["error"]["category"], "parse");
    assert_eq!(code(&["nonsense"]).0, 2);
    assert_eq!(code(&["fig8", "--z", "0.5"]).0, 2);
    assert_eq!(code(&["symp-exp", "--boundary", "2"]).0, 3);
    assert_eq!(code(&["expand", "--word", "a1", "--trunc", "0"]).0, 3);
    assert_eq!(code(&["twist", "--curve", "sep:3", "--word", "a1"]).0, 3);
    assert_eq!(code(&["johnson", "--curve", "a1"]).0, 4);
    assert_eq!(code(&["bracket", "--loop", "a1"]).0, 2);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "johnson", "--genus", "2", "--curve", "sep:1", "--curve", "zeta", "--trunc", "4",
    ];
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn binary_exit_status_and_width() {
    let bin = env!("CARGO_BIN_EXE_goldman");
    let out = Command::new(bin).args(["fig8", "--z", "1"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        r#"{"z":"1","b":"-2","c":"1","residual2":"0","residual3":"1/6*[Y,[Y,X]]"}"#
    );
    let out = Command::new(bin).args(["expand", "--word", "q"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let wide = Command::new(bin)
        .args(["symp-exp", "--trunc", "3", "--format", "pretty"])
        .output()
        .unwrap();
    let narrow = Command::new(bin)
        .args(["symp-exp", "--trunc", "3", "--format", "pretty"])
        .env(goldman_core::cli::WIDTH_VAR, "24")
        .output()
        .unwrap();
    let (wide, narrow) = (
        String::from_utf8(wide.stdout).unwrap(),
        String::from_utf8(narrow.stdout).unwrap(),
    );
    assert!(narrow.lines().count() > wide.lines().count());
    let squash = |s: &str| s.split_whitespace().collect::<String>();
    assert_eq!(squash(&wide), squash(&narrow));
}
