use conic_spectra::cli::run;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = std::iter::once("conic-spectra").chain(args.iter().copied()).map(String::from).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = format!("{}/schemas/{name}", env!("CARGO_MANIFEST_DIR"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&v).unwrap()
}

fn assert_valid(validator: &jsonschema::Validator, out: &str) -> Value {
    let v: Value = serde_json::from_str(out).unwrap();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?} in {out}");
    v
}

#[test]
fn analyze_outputs_match_schema() {
    let validator = schema("analyze.schema.json");
    for form in ["0,0,-6,1,0,0", "0,0,-1,1,0,0", "1,1,1,0,0,-1", "0,0,1,-1,0,0", "-2,0,-9,3,0,0", "3,1,-2,1,0,-4", "0,0,-2,2,0,0"] {
        let (code, out, err) = call(&["analyze", "--form", form]);
        assert_eq!(code, 0, "{form}: {err}");
        let v = assert_valid(&validator, &out);
        let delta = v["discriminant"].as_i64().unwrap();
        let (m, n) = (v["m"].as_i64().unwrap(), v["n"].as_i64().unwrap());
        let content = v["content"].as_i64().unwrap();
        assert_eq!(delta % (n * (m / content).pow(2)), 0, "{form}");
    }
}

#[test]
fn value_outputs_match_schema() {
    let validator = schema("value.schema.json");
    let runs: &[&[&str]] = &[
        &["approx", "--form", "0,0,-1,1,0,0", "--xi", "(1+sqrt(5))/2"],
        &["approx", "--n", "4", "--xi", "(-1+sqrt(17))/8"],
        &["approx", "--n", "3", "--m", "2", "--cf", "[1;(1,2)]"],
        &["approx", "--form", "0,0,-2,1,0,0", "--xi", "sqrt(2)"],
        &["pair", "--form", "0,0,-1,1,0,0", "--qform", "1,1,-1"],
        &["pair", "--n", "3", "--qform", "1,0,-3"],
    ];
    for args in runs {
        let (code, out, err) = call(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        assert_valid(&validator, &out);
    }
    let (_, out, _) = call(&["search", "--n", "2", "--max-term", "3", "--max-period", "6", "--limit", "4", "--format", "json"]);
    let doc: Value = serde_json::from_str(&out).unwrap();
    for v in doc["values"].as_array().unwrap() {
        assert!(validator.is_valid(v));
    }
}

#[test]
fn documented_examples() {
    let (code, out, _) = call(&["analyze", "--form", "0,0,-6,1,0,0"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["m"].as_i64(), v["n"].as_i64()), (Some(1), Some(6)));
    assert_eq!(v["lattices"], serde_json::json!([[1, 0, 1], [2, 0, 1], [3, 0, 1], [6, 0, 1]]));

    let (code, out, _) = call(&["search", "--n", "1", "--max-term", "2", "--max-period", "6", "--limit", "3"]);
    assert_eq!(code, 0);
    let decimals: Vec<&str> = out.lines().skip(1).map(|l| &l[..6]).collect();
    assert_eq!(decimals, ["2.2360", "2.8284", "2.9732"]);

    assert_eq!(call(&["approx", "--form", "0,0,0,0,0,0", "--xi", "(0+1*sqrt(7))/1"]).0, 2);
}

#[test]
fn exit_codes() {
    let (code, _, err) = call(&["analyze", "--form", "1,0,1,0,0,-3"]);
    assert_eq!(code, 3);
    assert!(err.contains("mod 9"), "{err}");
    assert_eq!(call(&["analyze", "--form", "1,0,1,0,0,1"]).0, 3);
    assert_eq!(call(&["analyze", "--form", "1,0,x,0,0,1"]).0, 2);
    assert_eq!(call(&["pair", "--n", "2", "--qform", "1,0,1"]).0, 2);
    assert_eq!(call(&["pair", "--n", "2", "--qform", "1,0,-4"]).0, 2);
    assert_eq!(call(&["search", "--n", "0", "--max-term", "2", "--max-period", "4", "--limit", "2"]).0, 2);
    assert_eq!(call(&["local-table", "--p", "4"]).0, 2);
    assert_eq!(call(&["spectra-table", "--n", "14"]).0, 2);
}

#[test]
fn local_table_rows() {
    for p in ["3", "5", "7"] {
        let (code, out, _) = call(&["local-table", "--p", p]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 22);
        assert!(!out.contains("MISMATCH"), "{out}");
    }
}

#[test]
fn oracle_stream() {
    let (code, out, _) = call(&["oracle", "--form", "0,0,-1,1,0,0", "--xi", "sqrt(2)", "--height", "1000"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("height\tpoint\tquality"));
    let rows: Vec<Vec<&str>> = lines.filter(|l| !l.starts_with('#')).map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 10);
    let heights: Vec<i64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert!(heights.windows(2).all(|w| w[0] <= w[1]));
    assert!(out.contains("# exact\t2.8284"));
}

#[test]
fn byte_identical_reruns() {
    let args = ["search", "--n", "5", "--max-term", "4", "--max-period", "8", "--limit", "8"];
    assert_eq!(call(&args), call(&args));
    let args = ["analyze", "--form", "3,1,-2,1,0,-4"];
    assert_eq!(call(&args), call(&args));
}
