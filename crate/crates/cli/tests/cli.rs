//! The binary end to end: exit codes, determinism, flag echo, and robustness
//! against mutated specs.

use std::path::{Path, PathBuf};
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use soliton_forge::{parse_spec, run, Command as Cmd, Options};

const BIN: &str = env!("CARGO_BIN_EXE_soliton-forge");

fn shipped(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

const SPECS: [&str; 5] = [
    "hyperbolic-half-space.json",
    "horospherical.json",
    "hyperbolic-half-space-ricci.json",
    "horospherical-ricci.json",
    "euclidean-constant.json",
];

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn forge(args: &[&str], threads: Option<&str>) -> Outcome {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("SOLITON_FORGE_THREADS", t),
        None => cmd.env_remove("SOLITON_FORGE_THREADS"),
    };
    let out = cmd.output().unwrap();
    Outcome {
        code: out.status.code().expect("terminated by signal"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn spec_json(name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(shipped(name)).unwrap()).unwrap()
}

fn write_spec(dir: &tempfile::TempDir, value: &Value) -> String {
    let path = dir.path().join("spec.json");
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path.display().to_string()
}

fn report(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--json", "-"]);
    let o = forge(&all, None);
    (
        o.code,
        serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}{}", o.stdout, o.stderr)),
    )
}

#[test]
fn shipped_specs_pass_check_and_identities() {
    for name in SPECS {
        let path = shipped(name).display().to_string();
        for cmd in ["check", "identities", "curvature"] {
            let (code, doc) = report(&[cmd, &path]);
            assert_eq!(code, 0, "{cmd} {name}: {doc:#}");
            assert_eq!(doc["status"], "pass");
        }
    }
}

#[test]
fn report_keys_are_exact() {
    let s = shipped("euclidean-constant.json").display().to_string();
    let raw = forge(&["classify", &s, "--json", "-"], None).stdout;
    let top: Vec<&str> = raw
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim_start().split('"').nth(1).unwrap())
        .collect();
    assert_eq!(top, ["spec", "version", "checks", "classification", "status"]);
    let doc: Value = serde_json::from_str(&raw).unwrap();
    let class = &doc["classification"];
    for flag in ["gradient", "solenoidal", "constant_length", "parallel"] {
        assert_eq!(class[flag]["holds"], true, "{flag}");
    }
    let (_, doc) = report(&["check", &shipped("euclidean-constant.json").display().to_string()]);
    assert!(doc["classification"].is_null());
}

#[test]
fn recover_lambda_at_a_point() {
    let o = forge(
        &[
            "recover-lambda",
            &shipped("horospherical.json").display().to_string(),
            "--at",
            "0,0,0",
        ],
        None,
    );
    assert_eq!(o.code, 0);
    for (key, want) in [
        ("recovered", "1.0"),
        ("norm_sq", "1.0"),
        ("v_norm_sq", "2.0"),
        ("laplacian_norm_sq", "8.0"),
        ("nabla_v_sq", "3.0"),
        ("div_v", "3.0"),
        ("v_div_v", "3.0"),
    ] {
        let line = o
            .stdout
            .lines()
            .find(|l| l.split_whitespace().next() == Some(key))
            .unwrap();
        assert_eq!(line.split_whitespace().nth(1), Some(want), "{key}");
    }
}

#[test]
fn perturbed_lambda_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = spec_json("hyperbolic-half-space.json");
    v["soliton"]["lambda"] = "-2/z - 1.1".into();
    let path = write_spec(&dir, &v);
    let (code, doc) = report(&["check", &path]);
    assert_eq!(code, 1);
    assert_eq!(doc["status"], "fail");
    let riemann = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "soliton.riemann")
        .unwrap();
    assert!(riemann["residual"].as_f64().unwrap() >= 0.1);
    assert_eq!(riemann["pass"], false);
}

#[test]
fn syntax_error_is_exit_two_with_offset() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = spec_json("hyperbolic-half-space.json");
    v["metric"][0][0] = "1/z^".into();
    let o = forge(&["check", &write_spec(&dir, &v)], None);
    assert_eq!(o.code, 2);
    assert!(
        o.stderr.contains("/metric/0/0") && o.stderr.contains("offset 4"),
        "{}",
        o.stderr
    );
}

#[test]
fn two_dimensional_riemann_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let v: Value = serde_json::json!({
        "name": "plane", "dimension": 2, "coordinates": ["x", "y"],
        "metric": [["1", "0"], ["1"]],
        "vector_field": {"components": ["1", "0"]},
        "soliton": {"kind": "riemann", "lambda": "0"},
        "sampling": {"box": {"x": [0, 1], "y": [0, 1]}, "count": 2, "seed": 0}
    });
    let o = forge(&["check", &write_spec(&dir, &v)], None);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("/soliton/kind"), "{}", o.stderr);
}

#[test]
fn singular_metric_is_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = spec_json("hyperbolic-half-space.json");
    v["metric"] = serde_json::json!([["1", "1", "0"], ["1", "0"], ["1"]]);
    let o = forge(&["check", &write_spec(&dir, &v)], None);
    assert_eq!(o.code, 3, "{}", o.stderr);
    assert!(o.stderr.contains("singular"), "{}", o.stderr);
}

#[test]
fn usage_errors_are_exit_two() {
    let s = shipped("hyperbolic-half-space.json").display().to_string();
    for args in [
        vec!["nope", &s],
        vec!["check", &s, "--kind", "einstein"],
        vec!["check", &s, "--at", "1,2"],
        vec!["check", &s, "--order", "4"],
        vec!["check", &s, "--tol", "-1"],
        vec!["curvature", &s, "--tensor", "weyl"],
        vec!["check", "/nonexistent/spec.json"],
    ] {
        assert_eq!(forge(&args, None).code, 2, "{args:?}");
    }
}

#[test]
fn json_is_byte_identical_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let s = shipped("horospherical.json").display().to_string();
    let mut outputs = Vec::new();
    for (i, threads) in [Some("1"), Some("4"), None].into_iter().enumerate() {
        let path = dir.path().join(format!("r{i}.json"));
        let o = forge(&["identities", &s, "--json", &path.display().to_string()], threads);
        assert_eq!(o.code, 0);
        outputs.push(std::fs::read(path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn tolerance_flag_is_echoed() {
    let s = shipped("hyperbolic-half-space.json").display().to_string();
    let (code, doc) = report(&["check", &s, "--tol", "1e-3"]);
    assert_eq!(code, 0);
    for c in doc["checks"].as_array().unwrap() {
        assert_eq!(c["tolerance"].as_f64(), Some(1e-3));
    }
    let dir = tempfile::tempdir().unwrap();
    let mut v = spec_json("hyperbolic-half-space.json");
    v["soliton"]["lambda"] = "-2/z - 1 + 0.00001".into();
    let path = write_spec(&dir, &v);
    assert_eq!(report(&["check", &path]).0, 1);
    assert_eq!(report(&["check", &path, "--tol", "1e-3"]).0, 0);
}

#[test]
fn curvature_tensor_document() {
    let s = shipped("horospherical.json").display().to_string();
    let (code, doc) = report(&["curvature", &s, "--at", "0,0,0", "--tensor", "conharmonic"]);
    assert_eq!(code, 0);
    assert_eq!(doc["variance"], serde_json::json!(["lower", "lower", "lower", "upper"]));
    // H(∂x, ∂y)∂y = 3∂x: slots [0, 1, 1; 0].
    assert_eq!(doc["components"][9 + 3].as_f64(), Some(3.0));
    let (_, doc) = report(&["curvature", &s, "--at", "0,0,0", "--tensor", "ricci"]);
    let ric: Vec<f64> = doc["components"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_f64().unwrap())
        .collect();
    assert_eq!(ric[0], -2.0);
    assert_eq!(ric[8], -2.0);
}

#[test]
fn kind_override() {
    let s = shipped("euclidean-constant.json").display().to_string();
    let (code, doc) = report(&["identities", &s, "--kind", "ricci"]);
    assert_eq!(code, 0);
    let names: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"soliton.ricci") && names.contains(&"conharmonic.criterion"));
    assert!(!names.contains(&"soliton.riemann"));
}

#[test]
fn exclusions_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = spec_json("euclidean-constant.json");
    v["metric"][2][2] = "x - 0.99".into();
    v["sampling"]["count"] = 40.into();
    let (code, doc) = report(&["check", &write_spec(&dir, &v)]);
    assert!(code == 0 || code == 1, "{doc:#}");
    let ex = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "sampling.exclusions")
        .unwrap();
    assert_eq!(ex["status"], "skipped");
    let excluded = ex["values"]["excluded"].as_f64().unwrap();
    let accepted = ex["values"]["accepted"].as_f64().unwrap();
    assert!(excluded > 0.0 && accepted > 0.0);
    assert_eq!(excluded + accepted, 40.0);
}

#[test]
fn single_character_mutations_never_crash() {
    let base = spec_json("hyperbolic-half-space.json");
    let alphabet: Vec<char> = "0123456789xyz+-*/^().e, sqrtlogexp_".chars().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let opts = Options::default();
    for _ in 0..300 {
        let mut v = base.clone();
        v["sampling"]["count"] = 2.into();
        let i = rng.gen_range(0..3usize);
        let j = rng.gen_range(0..3 - i);
        let mut text: Vec<char> = v["metric"][i][j].as_str().unwrap().chars().collect();
        let c = alphabet[rng.gen_range(0..alphabet.len())];
        match rng.gen_range(0..3) {
            0 if !text.is_empty() => {
                let k = rng.gen_range(0..text.len());
                text[k] = c;
            }
            1 if !text.is_empty() => {
                text.remove(rng.gen_range(0..text.len()));
            }
            _ => text.insert(rng.gen_range(0..=text.len()), c),
        }
        let mutated: String = text.into_iter().collect();
        v["metric"][i][j] = mutated.clone().into();
        let outcome = std::panic::catch_unwind(|| match parse_spec(&v.to_string()) {
            Ok(spec) => match run(Cmd::Check, &spec, &opts) {
                Ok(out) => {
                    if out.passed() {
                        0
                    } else {
                        1
                    }
                }
                Err(e) => e.exit_code(),
            },
            Err(e) => e.exit_code(),
        });
        let code = outcome.unwrap_or_else(|_| panic!("panic on metric entry {mutated:?}"));
        assert!(code <= 3, "{mutated:?}");
    }
    // A few through the binary as well.
    let dir = tempfile::tempdir().unwrap();
    for bad in ["1/z^", "1/(z^2", "1/zz^2", "1/z^2)", "", "1//z"] {
        let mut v = base.clone();
        v["metric"][0][0] = bad.into();
        assert_eq!(forge(&["check", &write_spec(&dir, &v)], None).code, 2, "{bad:?}");
    }
}
