use std::process::Command;

use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = ordtopo::cli::run(std::iter::once("ordtopo").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let (code, out, err) = call(&full);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(serde_json::to_string(&v).unwrap(), out.trim_end(), "re-serialization differs");
    v
}

const WORKED: &str = "[0,1]&Q u [2,3] u (4,5) u (5,6] u [7,+inf)";

#[test]
fn classify_worked_example() {
    let (code, out, _) = call(&["classify", WORKED]);
    assert_eq!(code, 0);
    assert!(out.contains("summary: 2 essential, 1 pseudo, 1 explicit dedekind, 1 dedekind family"), "{out}");
    let v = json(&["classify", WORKED]);
    let report: ordtopo::gaps::GapReport = serde_json::from_value(v["report"].clone()).unwrap();
    assert_eq!(report, ordtopo::gaps::classify_gaps(&WORKED.parse().unwrap()));
}

#[test]
fn brouwer_endpoint_is_exact() {
    let v = json(&["map-brouwer", "--from", "C", "--to", "[0,1]&cantor(2/5)", "--query", "1/3", "--eps", "1/1000000"]);
    let r = &v["results"][0];
    assert_eq!(r["lo"], "2/5");
    assert_eq!(r["hi"], "2/5");
    assert_eq!(r["exact"], true);
}

#[test]
fn brouwer_requires_cantor_sets() {
    let (code, _, err) = call(&["map-brouwer", "--from", "[0,1]", "--to", "C", "--query", "1/2"]);
    assert_eq!(code, 1);
    assert!(err.contains("not order-homeomorphic"), "{err}");
    assert_eq!(call(&["map-brouwer", "--from", "C", "--to", "C", "--query", "0", "--eps", "0"]).0, 2);
}

#[test]
fn decode_outside_cantor_set() {
    let (code, _, err) = call(&["cantor-decode", "1/2"]);
    assert_eq!(code, 1);
    assert!(err.contains("not in Cantor set"));
}

#[test]
fn encode_decode_agree() {
    let v = json(&["cantor-decode", "3/4"]);
    assert_eq!(v["pattern"], "(10)");
    let w = json(&["cantor-encode", "(10)"]);
    assert_eq!(w["lo"], "3/4");
    assert_eq!(w["exact"], true);
}

#[test]
fn characterize_reports_witness() {
    let v = json(&["characterize", "{0} u {1}"]);
    assert_eq!(v["verdict"]["kind"], "None");
    assert!(!v["verdict"]["properties"]["has_isolated_points"]["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn translate_certifies_every_pair() {
    let v = json(&["cantor-translate", "--a", "(01)", "--a", "1(0)", "--b", "(1)", "--b", "0"]);
    assert_eq!(v["certificates"].as_array().unwrap().len(), 4);
}

#[test]
fn sierpinski_rejects_integers() {
    let (code, _, err) = call(&["map-sierpinski", "Z", "--points", "5"]);
    assert_eq!(code, 1);
    assert!(err.contains("isolated"), "{err}");
    assert_eq!(call(&["map-sierpinski", "nowhere"]).0, 2);
}

#[test]
fn sierpinski_file_space() {
    use ordtopo::exactnum::rat;
    let dir = std::env::temp_dir().join(format!("ordtopo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    // Dyadics of [0,1) in coarse-to-fine order with the usual distance.
    let xs = [rat(0, 1), rat(1, 2), rat(1, 4), rat(3, 4), rat(1, 8), rat(3, 8), rat(5, 8), rat(7, 8)];
    let labels: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    let metric: Vec<Vec<String>> = xs
        .iter()
        .map(|x| xs.iter().map(|y| num_traits::Signed::abs(&(x - y)).to_string()).collect())
        .collect();
    let path = dir.join("dyadic.json");
    std::fs::write(&path, serde_json::json!({"points": labels, "metric": metric}).to_string()).unwrap();
    let v = json(&["map-sierpinski", "--file", path.to_str().unwrap(), "--points", "4", "--depth", "2"]);
    assert_eq!(v["points"].as_array().unwrap().len(), 4);

    let discrete = dir.join("discrete.json");
    std::fs::write(
        &discrete,
        r#"{"points": ["a", "b", "c", "d"], "metric": [["0","1","1","1"],["1","0","1","1"],["1","1","0","1"],["1","1","1","0"]]}"#,
    )
    .unwrap();
    let (code, _, err) = call(&["map-sierpinski", "--file", discrete.to_str().unwrap(), "--points", "4", "--depth", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("isolated"), "{err}");
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "map-sierpinski", "QxQ", "--points", "10", "--depth", "6"];
    assert_eq!(call(&args), call(&args));
}

#[test]
fn approx_rendering() {
    let (code, out, _) = call(&["--approx", "4", "cantor-encode", "(01)"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "(01) -> 1/4 ≈ 0.2500");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_ordtopo");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["classify", "C"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("essential"));
    assert_eq!(status(&["cantor-decode", "1/2"]).status.code(), Some(1));
    assert_eq!(status(&["classify"]).status.code(), Some(2));
}
