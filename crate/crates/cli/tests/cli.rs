use serde_json::{json, Value};
use std::process::{Command, Output};

fn iwasawa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iwasawa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

const EXAMPLE: &str = r#"[["1","0"],["1/5","1"]]"#;

#[test]
fn decompose_example_matrix_at_five() {
    let out = iwasawa(&["decompose", "--prime", "5", EXAMPLE]);
    let v = stdout_json(&out);
    assert_eq!(v["dilaton_valuations"], json!([1]));
    assert_eq!(v["prime"], json!(5));
    assert_eq!(v["N"]["entries"], json!([["1", "5"], ["0", "1"]]));
    assert_eq!(v["A"]["entries"], json!([["5", "0"], ["0", "1/5"]]));
    assert_eq!(v["K"]["entries"], json!([["0", "-1"], ["1", "5"]]));
}

#[test]
fn decompose_real_identity() {
    let out = iwasawa(&["decompose", "--real", r#"[[1,0,0],[0,1,0],[0,0,1]]"#]);
    let v = stdout_json(&out);
    assert_eq!(v["A_diag"], json!([1.0, 1.0, 1.0]));
    assert_eq!(v["dilatons_squared"], json!(["1", "1"]));
    assert_eq!(
        v["K"],
        json!([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    );
}

#[test]
fn dilaton_norms_identity_table() {
    let out = iwasawa(&["dilaton-norms", "--places", "2,3,inf", r#"[[1,0],[0,1]]"#]);
    let v = stdout_json(&out);
    assert_eq!(
        v,
        json!([{
            "k": 1,
            "norms": [
                {"place": "2", "valuation": 0},
                {"place": "3", "valuation": 0},
                {"place": "inf", "y_squared": "1"},
            ],
        }])
    );
}

#[test]
fn dilaton_norms_csv() {
    let out = iwasawa(&[
        "dilaton-norms",
        "--places",
        "5,inf",
        "--format",
        "csv",
        EXAMPLE,
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "k,5,inf\n1,1,25/26\n");
}

#[test]
fn decompose_then_verify_round_trip() {
    let dec = iwasawa(&["decompose", "--prime", "5", EXAMPLE]);
    let dec_text = String::from_utf8(dec.stdout).unwrap();
    let out = iwasawa(&["verify", "--matrix", EXAMPLE, dec_text.trim()]);
    let v = stdout_json(&out);
    assert_eq!(v["pass"], json!(true));
}

#[test]
fn family_subcommand_moves_decomposition() {
    let dec = iwasawa(&["decompose", "--prime", "5", EXAMPLE]);
    let dec_text = String::from_utf8(dec.stdout).unwrap();
    let out = iwasawa(&[
        "family",
        "--x",
        r#"[[1,1],[0,1]]"#,
        "--y",
        r#"[[1,0],[0,1]]"#,
        dec_text.trim(),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["dilaton_valuations"], json!([1]));
    // the moved decomposition still verifies
    let verify = iwasawa(&["verify", "--matrix", EXAMPLE, &v.to_string()]);
    assert_eq!(stdout_json(&verify)["pass"], json!(true));
}

#[test]
fn batch_preserves_order() {
    let out = iwasawa(&[
        "decompose",
        "--prime",
        "2",
        r#"[ [[1,0],[0,1]], [["1","0"],["1/2","1"]] ]"#,
    ]);
    let v = stdout_json(&out);
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    assert_eq!(arr[0]["dilaton_valuations"], json!([0]));
    assert_eq!(arr[1]["dilaton_valuations"], json!([1]));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let a = iwasawa(&["verify-identities", "--sizes", "2,3", "--trials", "2", "--seed", "9"]);
    let b = iwasawa(&["verify-identities", "--sizes", "2,3", "--trials", "2", "--seed", "9"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);

    let c = iwasawa(&["decompose", "--prime", "3", EXAMPLE]);
    let d = iwasawa(&["decompose", "--prime", "3", EXAMPLE]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn usage_errors_exit_two() {
    let out = iwasawa(&["decompose", "--prime", "4", EXAMPLE]);
    assert_eq!(out.status.code(), Some(2));
    let out = iwasawa(&["decompose", EXAMPLE]);
    assert_eq!(out.status.code(), Some(2));
    let out = iwasawa(&["decompose", "--prime", "5", "not json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_errors_exit_one() {
    let out = iwasawa(&["decompose", "--prime", "5", r#"[[2,0],[0,1]]"#]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("NotSpecialLinear"), "{msg}");

    let out = iwasawa(&["decompose", "--prime", "5", r#"[[1,1],[1,1]]"#]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("SingularMatrix"), "{msg}");
}

#[test]
fn size_cap_enforced() {
    let out = Command::new(env!("CARGO_BIN_EXE_iwasawa"))
        .env("IWASAWA_MAX_N", "2")
        .args(["decompose", "--prime", "5", r#"[[1,0,0],[0,1,0],[0,0,1]]"#])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("IWASAWA_MAX_N"), "{msg}");
}

#[test]
fn decimal_inputs_warn_and_convert_exactly() {
    let out = iwasawa(&["decompose", "--prime", "5", r#"[[0.5,0],[0,2]]"#]);
    assert!(out.status.success());
    let msg = String::from_utf8(out.stderr).unwrap();
    assert!(msg.contains("decimal"), "{msg}");
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["A"]["entries"][0][0], json!("1/2"));
}

#[test]
fn pluecker_emits_lexicographic_components() {
    let out = iwasawa(&["pluecker", "--k", "1", EXAMPLE]);
    let v = stdout_json(&out);
    assert_eq!(
        v,
        json!([{
            "k": 1,
            "components": [
                {"columns": [1], "value": "1/5"},
                {"columns": [2], "value": "1"},
            ],
        }])
    );
}
