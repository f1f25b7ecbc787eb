use std::process::Command;

use polytau::schur::schur_of_partition;
use polytau::Polynomial;
use serde_json::Value;

fn polytau(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_polytau"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).expect("output is JSON")
}

#[test]
fn tau_kp_without_shifts_is_the_schur_polynomial() {
    let (code, out) = polytau(&["tau-kp", "--partition", "2,1", "--shifts", "[{},{}]"]);
    assert_eq!(code, 0);
    let p = Polynomial::from_json_str(out.trim()).unwrap();
    assert_eq!(p, schur_of_partition(&"2,1".parse().unwrap()));
    // t_1^3/3 - t_3
    let expect = &Polynomial::t(1).pow(3).scale(&polytau::exactalg::rat(1, 3)) - &Polynomial::t(3);
    assert_eq!(p, expect);
}

#[test]
fn four_periodic_partition() {
    let (code, out) = polytau(&["check-n-periodic", "--n", "4", "--partition", "6,3,2,1"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["pass"], Value::Bool(true));
    let (code, _) = polytau(&["check-n-periodic", "--n", "3", "--partition", "6,3,2,1"]);
    assert_eq!(code, 1);
}

#[test]
fn mkdv_flow_on_a_kdv_chain_from_a_file() {
    let (code, out) = polytau(&[
        "tau-nkdv-data", "--n", "2", "--perm", "1,2", "--m", "1,0", "--shifts", r#"[{"1":"2/3","3":"-1"},{}]"#,
    ]);
    assert_eq!(code, 0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.json");
    std::fs::write(&path, &out).unwrap();
    let path = path.to_str().unwrap();
    for flow in ["1", "3"] {
        let (code, out) = polytau(&["verify-mkdv", "--n", "2", "--chain", path, "--flow", flow]);
        assert_eq!(code, 0, "{out}");
        assert_eq!(json(&out)["pass"], Value::Bool(true));
    }
    let (code, _) = polytau(&["verify-nkdv", "--n", "2", "--chain", path]);
    assert_eq!(code, 0);
    let (code, _) = polytau(&["verify-mkp", "--chain", path]);
    assert_eq!(code, 0);
}

#[test]
fn exit_codes() {
    let (code, out) = polytau(&["tau-kp", "--partition", "1,2"]);
    assert_eq!(code, 2);
    assert!(json(&out)["error"].is_string());
    let (code, out) = polytau(&["tau-nkdv", "--n", "2", "--partition", "2"]);
    assert_eq!(code, 1);
    assert!(json(&out)["error"].as_str().unwrap().contains("periodic"));
    let sq = r#"[{"coeff":"1","exps":{"t1":2}}]"#;
    let (code, out) = polytau(&["verify-mkp", "--tau-k", sq, "--tau-l", sq]);
    assert_eq!(code, 1);
    assert!(json(&out)["witness"].is_object());
    let (code, _) = polytau(&["no-such-verb"]);
    assert_eq!(code, 2);
    let (code, _) = polytau(&["--floor", "2", "verify-lax", "--tau", sq]);
    assert_eq!(code, 2);
}

#[test]
fn emitted_polynomials_reparse_identically() {
    let runs: [&[&str]; 4] = [
        &["schur", "--partition", "3,1,1"],
        &["schur", "--elementary", "5", "--shifts", r#"{"2":"-3/4"}"#],
        &["tau-kp", "--partition", "2,2", "--shifts", r#"[{"1":"1/2"},{"2":"5"}]"#],
        &["tau-nkdv", "--n", "3", "--partition", "4,2", "--class-shifts", r#"{"1":{"1":"-2/7"}}"#],
    ];
    for args in runs {
        let (code, out) = polytau(args);
        assert_eq!(code, 0, "{args:?}: {out}");
        let p = Polynomial::from_json_str(out.trim()).unwrap();
        assert_eq!(p.to_json_string(), out.trim(), "{args:?}");
    }
}

#[test]
fn mkp_extension_feeds_verification() {
    let (code, out) = polytau(&[
        "tau-mkp-extend", "--partition", "2,1", "--shifts", r#"[{"1":"1/3"},{"1":"1/3"}]"#,
        "--case", "insert", "--position", "1", "--mu", "1", "--d", r#"{"2":"-1"}"#,
    ]);
    assert_eq!(code, 0, "{out}");
    let v = json(&out);
    assert_eq!(v["partition"], Value::String("1,1,1".into()));
    let next = v["tau"].to_string();
    let (_, prev) = polytau(&["tau-kp", "--partition", "2,1", "--shifts", r#"[{"1":"1/3"},{"1":"1/3"}]"#]);
    let (code, out) = polytau(&["verify-mkp", "--tau-k", &next, "--tau-l", prev.trim(), "--d", "1"]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = polytau(&["verify-mkp", "--tau-k", prev.trim(), "--tau-l", &next, "--first"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["verify-lax", "--floor", "-3", "--tau", r#"[{"coeff":"1/3","exps":{"t1":3}},{"coeff":"-1","exps":{"t3":1}}]"#];
    let a = polytau(&args);
    let b = polytau(&args);
    assert_eq!(a, b);
    assert_eq!(a.0, 0);
    let args = ["enumerate-n-periodic", "--n", "3", "--max-weight", "8"];
    assert_eq!(polytau(&args), polytau(&args));
}

#[test]
fn pretty_rendering() {
    let (code, out) = polytau(&["--pretty", "schur", "--partition", "2,1"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "1/3*t1^3 - t3");
}
