use std::process::Command;

use eka::cli::run;
use eka::formats;
use eka_core::{Exponent, RestrictedSeries, RingContext, RingDescriptor};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("eka").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn half_powers() -> (String, String) {
    let ctx = RingContext::standard(RingDescriptor::char0(2, 2, 1, 6).unwrap(), &["X", "Y"]).unwrap();
    let h = Exponent::dyadic(1u32, 1, 2).unwrap();
    let x = RestrictedSeries::var_pow(ctx.clone(), 0, h.clone()).unwrap();
    let y = RestrictedSeries::var_pow(ctx, 1, h).unwrap();
    let a = formats::to_text(&formats::series_to_json(&x.add(&y).unwrap()));
    let b = formats::to_text(&formats::series_to_json(&x.sub(&y).unwrap()));
    (a, b)
}

#[test]
fn cohomology_example() {
    let (code, out, _) = call(&["cohomology", "--n", "1", "--m", "2", "--p", "2", "--level", "1", "--oracle"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["ranks"], serde_json::json!([5, 0]));
    assert_eq!(v["oracle_verified"], Value::Bool(true));
    let (code, out, _) = call(&["cohomology", "--n", "1", "--m", "2", "--p", "2", "--level", "1", "--format", "csv"]);
    assert_eq!(code, 0);
    let rows = formats::csv_records(&out).unwrap();
    assert_eq!(rows[1], ["1", "2", "dyadic", "1", "0", "5", ""]);
}

#[test]
fn difference_of_squares() {
    let (a, b) = half_powers();
    let (code, out, err) = call(&["mul", "--a", &a, "--b", &b]);
    assert_eq!(code, 0, "{err}");
    let f = formats::series_from_json(&json(&out)).unwrap();
    let ctx = f.ctx().clone();
    let one = Exponent::integer(ctx.mode(), 1u32);
    let expect = RestrictedSeries::var_pow(ctx.clone(), 0, one.clone())
        .unwrap()
        .sub(&RestrictedSeries::var_pow(ctx, 1, one).unwrap())
        .unwrap();
    assert!(f.sub(&expect).unwrap().is_zero());
    // the emitted document re-parses and prints to the same bytes
    assert_eq!(formats::to_text(&formats::series_to_json(&f)), out);
}

#[test]
fn blowup_plane_atlas() {
    let algebra = r#"{"type":"algebra","ctx":{"coeff":{"kind":"char0-eka","p":3,"d":2,"K":1,"M":4},"vars":["x","y"]},"relations":[]}"#;
    let x = r#"{"terms":[{"exp":["1/3^0","0/3^0"],"coeff":{"offset":"0","digits":[1]}}]}"#;
    let y = r#"{"terms":[{"exp":["0/3^0","1/3^0"],"coeff":{"offset":"0","digits":[1]}}]}"#;
    let (code, out, err) = call(&["blowup", "--algebra", algebra, "--gens", x, "--gens", y, "--saturate"]);
    assert_eq!(code, 0, "{err}");
    let v = json(&out);
    let charts = v["charts"].as_array().unwrap();
    assert_eq!(charts.len(), 2);
    assert_eq!(charts[0]["vars"], serde_json::json!(["x", "y", "xi0_1"]));
    assert_eq!(charts[0]["relations"].as_array().unwrap().len(), 1);
    assert_eq!(v["cover"]["chart_principal"], serde_json::json!([true, true]));
    assert_eq!(formats::atlas_from_json(&v).unwrap().len(), 2);
}

#[test]
fn other_subcommands() {
    let ring = call(&["ring", "--p", "3", "--d", "2", "--depth", "1", "--precision", "4"]).1;
    assert_eq!(json(&ring)["M"], 4);
    let (code, out, _) = call(&["rees", "--ring", &ring, "--mode", "eka", "--n-max", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["type"], "rees-report");
    let (code, out, _) = call(&["member", "--gens", r#"[["1/2^0"],["1/2^1"]]"#, "--target", r#"["1/2^2"]"#]);
    assert_eq!((code, json(&out)["member"].clone()), (0, Value::Bool(false)));
    let (code, out, _) = call(&["equivalence", "--p", "3", "--d", "2", "--depth", "1"]);
    assert_eq!((code, json(&out)["pass"].clone()), (0, Value::Bool(true)));
    let (code, out, _) = call(&["obstruction", "--p", "3", "--d", "3", "--depth", "1"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["solutions"].as_array().unwrap().len(), 1);
    let (code, out, _) = call(&["growth", "--n", "1", "--m", "2", "--p", "2", "--to", "3"]);
    assert_eq!(code, 0);
    let ranks: Vec<u64> = json(&out)["rows"].as_array().unwrap().iter().map(|r| r["rank"].as_u64().unwrap()).collect();
    assert_eq!(ranks, [3, 5, 9, 17]);

    let (a, _) = half_powers();
    let (code, out, _) = call(&["shift", "--series", &a, "--by", "1"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["level"], 2);
    let (code, out, _) = call(&["val", "--doc", &a]);
    assert_eq!((code, json(&out)["value"].clone()), (0, Value::String("0".into())));
    let (code, out, _) = call(&["modp", "--doc", &a]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["ctx"]["coeff"]["kind"], "charp-eka");
    let elem = r#"{"type":"element","ring":{"kind":"char0-eka","p":3,"d":2,"K":1,"M":4},"offset":"1","digits":[1]}"#;
    let (code, out, _) = call(&["add", "--a", elem, "--b", elem]);
    assert_eq!((code, json(&out)["digits"].clone()), (0, serde_json::json!([2, 0, 0])));
    let tower = r#"{"type":"tower","ring":{"kind":"char0-eka","p":3,"d":2,"K":2,"M":8},"d":2,"top":{"offset":"1","digits":[1]},"depth":1}"#;
    let x = r#"{"type":"series","ctx":{"coeff":{"kind":"char0-eka","p":3,"d":2,"K":1,"M":4},"vars":["X"],"mode":{"kind":"dyadic","base":2}},"terms":[{"exp":["1/2^1"],"coeff":{"offset":"0","digits":[1]}}]}"#;
    let (code, out, err) = call(&["eval", "--series", x, "--tower", tower]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(json(&out)["offset"], "1");
}

#[test]
fn exit_codes() {
    assert_eq!(call(&["val", "--doc", "{not json"]).0, 2);
    assert_eq!(call(&["val", "--doc", "/nonexistent/file.json"]).0, 2);
    assert_eq!(call(&["cohomology", "-n", "1"]).0, 2);
    assert_eq!(call(&["cohomology", "--n", "1", "--m", "1/3", "--p", "2", "--level", "1"]).0, 3);
    assert_eq!(call(&["obstruction", "--p", "3", "--d", "2", "--depth", "6", "--max-candidates", "10"]).0, 4);
    let tower = r#"{"type":"tower","ring":{"kind":"char0-eka","p":3,"d":2,"K":1,"M":4},"d":2,"entries":[{"offset":"0","digits":[2]},{"offset":"1","digits":[1]}]}"#;
    let x = r#"{"type":"series","ctx":{"coeff":{"kind":"char0-eka","p":3,"d":2,"K":1,"M":4},"vars":["X"],"mode":{"kind":"dyadic","base":2}},"terms":[]}"#;
    let (code, _, err) = call(&["eval", "--series", x, "--tower", tower]);
    assert_eq!(code, 3, "{err}");
    let (code, out, err) = call(&["selftest", "--config", r#"{"criteria":[]}"#]);
    assert_eq!((code, out.as_str()), (0, ""));
    assert!(err.contains("warning"));
}

#[test]
fn binary_is_deterministic() {
    let bin = env!("CARGO_BIN_EXE_eka");
    let args = ["cohomology", "--n", "2", "--m", "3/2", "--p", "2", "--level", "1", "--basis", "--oracle"];
    let first = Command::new(bin).args(args).output().unwrap();
    let second = Command::new(bin).args(args).output().unwrap();
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let reparsed = formats::to_text(&json(std::str::from_utf8(&first.stdout).unwrap()));
    assert_eq!(reparsed.as_bytes(), first.stdout.as_slice());
    let bad = Command::new(bin).args(["add", "--a", "{}", "--b", "{}"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let fail = Command::new(bin).args(["selftest", "--config", r#"{"criteria":[4],"ring_law_trials":5}"#]).output().unwrap();
    assert_eq!(fail.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&fail.stdout).starts_with("FAIL [ 4]"));
}
