use std::process::{Command, Output};

use serde_json::Value;

fn torsorkit(args: &[&str], scale: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_torsorkit"));
    cmd.args(args).env_remove("WC_GUARD_SCALE");
    if let Some(s) = scale {
        cmd.env("WC_GUARD_SCALE", s);
    }
    cmd.output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, String) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = torsorkit(&all, None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    (serde_json::from_str(&text).unwrap(), text)
}

#[test]
fn no_arguments_prints_usage() {
    let out = torsorkit(&[], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage: torsorkit"));
}

#[test]
fn classify_period_five() {
    let (v, _) = json(&["classify", "n=5", "aut=1,4"]);
    assert_eq!(v["command"], "classify");
    assert_eq!(v["result"]["iso_class_count"], 3);
    assert_eq!(v["result"]["derived_class_count"], 2);
    assert_eq!(v["result"]["generator_iso_classes"], 2);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn h1_real_example() {
    let (v, _) = json(&["h1-real", "a=-1/1", "b=0/1"]);
    assert_eq!(v["result"]["size"], 2);
    assert_eq!(v["result"]["discriminant"], "64/1");
    let (v, _) = json(&["h1-real", "a=1", "b=0"]);
    assert_eq!(v["result"]["size"], 1);
}

fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => n.is_i64() || n.is_u64(),
        Value::Array(a) => a.iter().all(no_floats),
        Value::Object(m) => m.values().all(no_floats),
        _ => true,
    }
}

#[test]
fn json_round_trips_byte_for_byte() {
    let cases: &[&[&str]] = &[
        &["classify", "n=12"],
        &["h1", "group=cyclic:2", "module=2,2", "action=1:0,1;1,0"],
        &["picd", "group=symmetric:3", "module=3", "alpha=0;0;0;0;0;0", "d=2"],
        &["ffcurve", "p=101", "a=3", "b=7"],
        &["cubic", "p=5", "coeffs=1,0,0,0,0,0,1,0,0,1"],
        &["orbit", "N=3", "m=9", "phi=2", "start=1,0"],
        &["sp", "genus=1", "m=6"],
        &["brauer", "n=4", "br=2", "brs=", "alpha=1:1", "beta=3:0"],
        &["reproduce", "existence"],
    ];
    for args in cases {
        let (v, text) = json(args);
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text, "{args:?}");
        assert!(no_floats(&v), "{args:?}");
    }
}

#[test]
fn reproduce_bundles_pass() {
    for name in ["finite-field", "real", "existence", "moduli-spaces", "polarized", "fibration"] {
        let (v, _) = json(&["reproduce", name]);
        assert_eq!(v["inputs"]["name"], name);
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true), "{name}");
    }
    let (v, _) = json(&["reproduce", "moduli-spaces", "N=3"]);
    assert_eq!(v["result"]["prime"], 11);
    assert_eq!(v["result"]["generator_iso_classes"], 5);
    let (v, _) = json(&["reproduce", "real", "--seed", "7"]);
    assert_eq!(v["result"]["seed"], 7);
}

#[test]
fn validation_errors_exit_two() {
    for args in [
        &["reproduce", "nonsense"][..],
        &["classify", "n=5", "colour=red"],
        &["classify", "n=6", "aut=1,2"],
        &["ffcurve", "p=9", "a=1", "b=1"],
        &["cubic", "p=5", "coeffs=1,0,0,0,0,0,1,0,0,0"],
        &["wibble"],
        &["h1-real", "a=0", "b=0"],
    ] {
        assert_eq!(torsorkit(args, None).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn failed_check_exits_one() {
    // With phi = 0 the orbit of (1, 0) reaches (0, 0), which is not a
    // coprime multiple of 1 mod 5.
    let out = torsorkit(&["polarized-check", "N=1", "m=5", "phi=0"], None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("check coprime_multiple: FAIL"));
}

#[test]
fn guard_scale_from_environment() {
    let args = ["ffcurve", "p=1000003", "a=1", "b=1"];
    assert_eq!(torsorkit(&args, None).status.code(), Some(2));
    assert_eq!(torsorkit(&args, Some("2")).status.code(), Some(0));
    assert_eq!(torsorkit(&args, Some("zero")).status.code(), Some(2));
}

#[test]
fn module_file_matches_inline_arguments() {
    let dir = std::env::temp_dir().join(format!("torsorkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("swap.txt");
    std::fs::write(&path, "# conjugation swaps the basis\ngroup cyclic:2\nmodule 2,2\naction 1:0,1;1,0\n").unwrap();
    let file_arg = format!("file={}", path.display());
    let (a, _) = json(&["h1", &file_arg]);
    let (b, _) = json(&["h1", "group=cyclic:2", "module=2,2", "action=1:0,1;1,0"]);
    assert_eq!(a["result"], b["result"]);
    assert_eq!(a["result"]["size"], 1);
    let (c, _) = json(&["h1", "group=table:0,1;1,0", "module=2,2", "action=1:0,1;1,0"]);
    assert_eq!(c["result"], b["result"]);
    std::fs::remove_dir_all(&dir).unwrap();
}
