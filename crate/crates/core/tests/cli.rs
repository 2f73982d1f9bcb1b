//! Golden tests for the command-line front end, driven in-process.

use std::fs;
use std::path::PathBuf;

use kmono::cli::{run, Outcome};
use kmono::json;
use serde_json::{json, Value};

const CARD_TABLE: &str = r#"{"d": 3, "values": ["1","1","1","2","1","2","2","3"]}"#;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kmono-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn file(name: &str, contents: &str) -> String {
    let path = scratch(name);
    fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}

fn kmono(args: &[&str]) -> Outcome {
    run(std::iter::once("kmono").chain(args.iter().copied()))
}

fn report(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", out.stdout))
}

#[test]
fn check_pb_passes_at_order_two() {
    let input = file("card.json", CARD_TABLE);
    let out = kmono(&["check-pb", &input, "--k", "2", "--mode", "inc", "--json"]);
    assert_eq!(out.code, 0);
    let doc = report(&out);
    assert_eq!(doc["verdict"], "pass");
    assert_eq!(doc["witnesses"], json!([]));
}

#[test]
fn check_pb_fails_at_order_three_with_witness() {
    let input = file("card.json", CARD_TABLE);
    let out = kmono(&["check-pb", &input, "--k", "3", "--mode", "inc", "--json"]);
    assert_eq!(out.code, 1);
    let doc = report(&out);
    assert_eq!(doc["verdict"], "fail");
    assert_eq!(
        doc["witnesses"],
        json!([{ "beta": [1, 2, 3], "gamma": [], "value": "-1" }])
    );
}

#[test]
fn check_pb_text_mode() {
    let input = file("card.json", CARD_TABLE);
    let out = kmono(&["check-pb", &input, "--k", "3"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("not fully 3-increasing"));
    assert!(out.stdout.contains(r#""value":"-1""#));
}

#[test]
fn check_pb_alternating_example() {
    let input = file(
        "alt.json",
        r#"{"d":3,"values":["0","2","2","4","2","4","4","5"]}"#,
    );
    assert_eq!(
        kmono(&["check-pb", &input, "--k", "2", "--mode", "alt"]).code,
        0
    );
    assert_eq!(
        kmono(&["check-pb", &input, "--k", "3", "--mode", "alt"]).code,
        1
    );
}

#[test]
fn order_out_of_range_is_a_usage_error() {
    let input = file("card.json", CARD_TABLE);
    assert_eq!(kmono(&["check-pb", &input, "--k", "4"]).code, 2);
    assert_eq!(kmono(&["check-pb", &input, "--k", "0"]).code, 2);
}

#[test]
fn partition_chain_golden() {
    let input = file(
        "chain.json",
        r#"{"k": 1, "vectors": [["1"], ["2"], ["3"]]}"#,
    );
    let out = kmono(&["partition", &input, "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc = report(&out);
    assert_eq!(
        doc["result"]["intervals"],
        json!([
            { "sigma": [3], "tau": [1, 2, 3] },
            { "sigma": [2], "tau": [1, 2] },
            { "sigma": [1], "tau": [1] },
        ])
    );
}

#[test]
fn partition_explicit_layout_verifies() {
    let input = file(
        "corner.json",
        r#"{"k": 2, "vectors": [["0","0"], ["1","0"], ["0","1"]]}"#,
    );
    let out = kmono(&["partition", &input, "--explicit", "--json"]);
    assert_eq!(out.code, 0);
    assert_eq!(
        report(&out)["result"]["intervals"]
            .as_array()
            .unwrap()
            .len(),
        3
    );
}

#[test]
fn malformed_json_reports_position() {
    let input = file("bad.json", "{\"d\": 3,\n \"values\": [\"1\",, ]}");
    let out = kmono(&["check-pb", &input, "--k", "1", "--json"]);
    assert_eq!(out.code, 2);
    let doc = report(&out);
    assert_eq!(doc["verdict"], "error");
    assert_eq!(doc["line"], 2);
    assert!(doc["column"].as_u64().unwrap() > 0);

    let text = kmono(&["check-pb", &input, "--k", "1"]);
    assert_eq!(text.code, 2);
    assert!(text.stderr.contains("line 2"), "{}", text.stderr);
}

#[test]
fn schema_errors_name_the_field() {
    let input = file("schema.json", r#"{"d": 2, "values": ["1", "x", "1", "1"]}"#);
    let out = kmono(&["check-pb", &input, "--k", "1", "--json"]);
    assert_eq!(out.code, 2);
    assert_eq!(report(&out)["field"], "values[1]");

    let input = file("missing.json", r#"{"d": 2}"#);
    let out = kmono(&["check-pb", &input, "--k", "1", "--json"]);
    assert_eq!(out.code, 2);
    assert_eq!(report(&out)["field"], "values");

    let input = file("short.json", r#"{"d": 2, "values": ["1"]}"#);
    assert_eq!(kmono(&["check-pb", &input, "--k", "1"]).code, 2);
}

#[test]
fn bare_numbers_need_float_mode() {
    let exact = file("bare.json", r#"{"d": 1, "values": [0, 1]}"#);
    assert_eq!(kmono(&["check-pb", &exact, "--k", "1"]).code, 2);
    let float = file(
        "float.json",
        r#"{"d": 1, "mode": "float", "values": [0, 1]}"#,
    );
    assert_eq!(kmono(&["check-pb", &float, "--k", "1"]).code, 0);
}

#[test]
fn oversized_ground_set_is_rejected() {
    let input = file("huge.json", r#"{"d": 25, "values": []}"#);
    let out = kmono(&["check-pb", &input, "--k", "1", "--json"]);
    assert_eq!(out.code, 2);
}

#[test]
fn usage_errors() {
    assert_eq!(kmono(&[]).code, 2);
    assert_eq!(
        kmono(&["check-pb", "x.json", "--mode", "sideways", "--k", "1"]).code,
        2
    );
    let both = kmono(&["check-grid", "x.json", "--k", "1", "--n", "1,1"]);
    assert_eq!(both.code, 2);
    let out = kmono(&["bogus", "--json"]);
    assert_eq!(out.code, 2);
    assert_eq!(report(&out)["verdict"], "error");
    assert_eq!(kmono(&["--version"]).code, 0);
}

#[test]
fn check_grid_counterexample_witness() {
    let input = file(
        "or.json",
        r#"{"axes": [["0","1/2","1"],["0","1/2","1"]],
            "values": ["0","1/2","1","1/2","3/4","1","1","1","1"]}"#,
    );
    assert_eq!(kmono(&["check-grid", &input, "--k", "1"]).code, 0);
    let out = kmono(&["check-grid", &input, "--k", "2", "--json"]);
    assert_eq!(out.code, 1);
    assert_eq!(
        report(&out)["witnesses"][0],
        json!({ "p": [1, 1], "s": ["0", "0"], "h": ["1", "1"], "value": "-1" })
    );
    let exhaustive = kmono(&["check-grid", &input, "--k", "2", "--exhaustive", "--json"]);
    assert_eq!(report(&exhaustive)["witnesses"], report(&out)["witnesses"]);
}

#[test]
fn check_grid_general_multi_index() {
    let input = file(
        "cube.json",
        r#"{"axes": [["-2","-1","0","1","2"]], "values": ["-8","-1","0","1","8"]}"#,
    );
    let out = kmono(&["check-grid", &input, "--n", "3", "--json"]);
    assert_eq!(out.code, 1);
    assert_eq!(
        report(&out)["witnesses"][0],
        json!({ "p": [2], "s": ["-2"], "h": ["1"], "value": "-6" })
    );
}

fn round_trip(args: &[&str], name: &str) -> (Value, String) {
    let path = scratch(name);
    let mut full = args.to_vec();
    let p = path.to_str().unwrap().to_owned();
    full.extend(["--output", &p, "--json"]);
    let out = kmono(&full);
    assert!(out.code <= 1, "{}{}", out.stdout, out.stderr);
    let written = fs::read_to_string(&path).unwrap();
    (report(&out)["result"].clone(), written)
}

#[test]
fn artifacts_round_trip() {
    let card = file("card.json", CARD_TABLE);

    let (result, text) = round_trip(&["extend", &card], "poly.json");
    let json::AnyPoly::Exact(p) = json::poly_from_json(&text).unwrap() else {
        panic!("exact polynomial expected")
    };
    assert_eq!(json::poly_to_json(&p), result);
    assert_eq!(
        result["coeffs"],
        json!(["1", "0", "0", "1", "0", "1", "1", "-1"])
    );

    let (result, text) = round_trip(&["gen", "--d", "4", "--k", "2", "--seed", "9"], "gen.json");
    let json::AnyTable::Exact(t) = json::table_from_json(&text).unwrap() else {
        panic!("exact table expected")
    };
    assert_eq!(json::table_to_json(&t), result);

    let family = file(
        "fam.json",
        r#"{"k": 2, "vectors": [["0","1"],["2","0"],["1","1"],["3","2"]]}"#,
    );
    let (result, text) = round_trip(&["partition", &family], "part.json");
    let r = json::partition_from_json(&text, None).unwrap();
    assert_eq!(json::partition_to_json(&r), result);

    let cert_in = file(
        "cert.json",
        &json!({
            "f": serde_json::from_str::<Value>(CARD_TABLE).unwrap(),
            "axes": [["0", "1"], ["0", "1"]],
            "points": [["0", "0"], ["1", "0"], ["0", "1"]],
        })
        .to_string(),
    );
    let (result, text) = round_trip(&["certify", &cert_in, "--k", "2"], "certificate.json");
    let c = json::certificate_from_json(&text).unwrap();
    assert_eq!(json::certificate_to_json(&c), result);
    assert_eq!(result["weight_sum"], "3");

    let df = file(
        "df.json",
        r#"{"axes": [["0","1/2","1"],["0","1/2","1"]],
            "values": ["0","0","0","0","1/4","1/2","0","1/2","1"]}"#,
    );
    let (result, text) = round_trip(&["measure", &df], "measure.json");
    let mu = json::measure_from_json(&text).unwrap();
    assert_eq!(json::measure_to_json(&mu), result);
    assert_eq!(mu.len(), 4);

    let mut with_axes: Value = serde_json::from_str(&text).unwrap();
    with_axes["axes"] = json!([["0", "1/2", "1"], ["0", "1/2", "1"]]);
    let back = file("mu.json", &with_axes.to_string());
    let (result, text) = round_trip(&["measure", &back], "df-back.json");
    let f = json::grid_function_from_json(&text).unwrap();
    assert_eq!(json::grid_function_to_json(&f), result);
    assert_eq!(
        result["values"],
        json!(["0", "0", "0", "0", "1/4", "1/2", "0", "1/2", "1"])
    );
}

#[test]
fn compound_and_check() {
    let input = file(
        "compound.json",
        &json!({
            "f": { "d": 2, "values": ["0", "1", "1", "1"] },
            "gs": [
                { "axes": [["0", "1"]], "values": ["0", "1"] },
                { "axes": [["0", "1"]], "values": ["1/2", "1"] },
            ],
        })
        .to_string(),
    );
    let out = kmono(&["compound", &input, "--k", "1", "--json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc = report(&out);
    assert_eq!(doc["result"]["values"], json!(["1/2", "1"]));
    let text = doc["result"].to_string();
    let h = json::grid_function_from_json(&text).unwrap();
    assert_eq!(json::grid_function_to_json(&h), doc["result"]);
}

#[test]
fn compound_rejects_values_outside_unit_interval() {
    let input = file(
        "bad-compound.json",
        &json!({
            "f": { "d": 1, "values": ["0", "1"] },
            "gs": [{ "axes": [["0", "1"]], "values": ["0", "2"] }],
        })
        .to_string(),
    );
    let out = kmono(&["compound", &input, "--json"]);
    assert_eq!(out.code, 2);
}

#[test]
fn certify_refuses_tables_of_lower_order() {
    let input = file(
        "refuse.json",
        &json!({
            "f": serde_json::from_str::<Value>(CARD_TABLE).unwrap(),
            "axes": [["0", "1"], ["0", "1"], ["0", "1"]],
            "points": [["0", "0", "1"], ["1", "0", "0"], ["0", "1", "0"]],
        })
        .to_string(),
    );
    let out = kmono(&["certify", &input, "--k", "3", "--json"]);
    assert_eq!(out.code, 1);
    assert_eq!(report(&out)["witnesses"][0]["value"], "-1");
}

#[test]
fn measure_rejects_non_distribution_functions() {
    let input = file(
        "notdf.json",
        r#"{"axes": [["0","1/2","1"],["0","1/2","1"]],
            "values": ["0","1/2","1","1/2","3/4","1","1","1","1"]}"#,
    );
    let out = kmono(&["measure", &input, "--json"]);
    assert_eq!(out.code, 1);
    assert_eq!(report(&out)["witnesses"][0]["value"], "-1");
}

#[test]
fn approx_normalizes_on_the_subgrid() {
    let input = file(
        "approx.json",
        &json!({
            "f": {
                "axes": [["0", "1/2", "1"], ["0", "1/2", "1"]],
                "values": ["0", "0", "0", "0", "1/4", "1/2", "0", "1/2", "1"],
            },
            "subgrid": [["0", "1/2"], ["0", "1/2"]],
        })
        .to_string(),
    );
    let out = kmono(&["approx", &input, "--json"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
    let values = &report(&out)["result"]["values"];
    assert_eq!(values[4], "1");
    assert_eq!(values[8], "1");
}

#[test]
fn extend_with_named_maps() {
    let input = file(
        "alt.json",
        r#"{"d":3,"values":["0","2","2","4","2","4","4","5"]}"#,
    );
    let out = kmono(&["extend", &input, "--map", "sqrt", "--json"]);
    assert_eq!(out.code, 0);
    let doc = report(&out);
    assert_eq!(doc["result"]["mode"], "float");
    let c1 = doc["result"]["coeffs"][1].as_f64().unwrap();
    assert!((c1 - 2f64.sqrt()).abs() < 1e-12);
    assert_eq!(kmono(&["extend", &input, "--map", "cube-root"]).code, 2);
}

#[test]
fn derive_gives_compacted_polynomial() {
    let input = file("card.json", CARD_TABLE);
    let out = kmono(&["derive", &input, "--beta", "1,2", "--json"]);
    assert_eq!(out.code, 0);
    let doc = report(&out);
    assert_eq!(doc["result"]["vars"], json!([3]));
    assert_eq!(doc["result"]["coeffs"], json!(["1", "-1"]));
}

#[test]
fn gen_respects_seed_and_environment() {
    let a = kmono(&[
        "gen", "--d", "3", "--k", "2", "--mode", "alt", "--seed", "4", "--json",
    ]);
    let b = kmono(&[
        "gen", "--d", "3", "--k", "2", "--mode", "alt", "--seed", "4", "--json",
    ]);
    assert_eq!(report(&a)["result"], report(&b)["result"]);
    assert_eq!(report(&a)["seed"], 4);
    assert_eq!(kmono(&["gen", "--d", "7", "--k", "2"]).code, 2);
}

fn structure(doc: &Value) -> Value {
    let mut doc = doc.clone();
    doc.as_object_mut().unwrap().remove("timing_ms");
    doc.as_object_mut().unwrap().remove("seed");
    doc
}

#[test]
fn selftest_is_deterministic_and_detects_mutation() {
    let one = kmono(&["selftest", "--seed", "1", "--json"]);
    assert_eq!(one.code, 0, "{}", one.stdout);
    let two = kmono(&["selftest", "--seed", "2", "--json"]);
    assert_eq!(two.code, 0, "{}", two.stdout);
    let (one, two) = (report(&one), report(&two));
    assert_eq!(one["seed"], 1);
    let names = |d: &Value| -> Vec<Value> {
        d["result"]["checks"]
            .as_array()
            .unwrap()
            .iter()
            .map(|c| json!([c["id"], c["name"], c["passed"]]))
            .collect()
    };
    assert_eq!(names(&one), names(&two));

    let again = kmono(&["selftest", "--seed", "1", "--json"]);
    assert_eq!(structure(&report(&again)), structure(&one));

    let mutated = kmono(&[
        "selftest", "--seed", "1", "--mutate", "--trials", "10", "--json",
    ]);
    assert_eq!(mutated.code, 1);
    let doc = report(&mutated);
    assert_eq!(doc["verdict"], "fail");
    let witness = &doc["witnesses"][0];
    assert_eq!(witness["check"], 1);
    assert!(witness["witness"].is_object(), "{witness}");
}
