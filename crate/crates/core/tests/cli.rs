use std::path::PathBuf;

use serde_json::Value;
use torcat::catalog::{catalog_entries, CatalogEntry, EntryData};
use torcat::cli::run;
use torcat::invariants::CatKind;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("torcat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn torcat(args: &[&str]) -> (i32, Value) {
    let out = run(std::iter::once("torcat").chain(args.iter().copied()));
    let value = serde_json::from_str(&out.stdout).unwrap_or(Value::Null);
    (out.code, value)
}

fn export(name: &str) -> PathBuf {
    let out = run(["torcat", "catalog", "export", name]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let file: String = name.chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect();
    let path = scratch(&format!("{file}.json"));
    std::fs::write(&path, out.stdout).unwrap();
    path
}

#[test]
fn validate_and_invariants_of_cp2() {
    let path = export("CP2");
    let (code, v) = torcat(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "valid");
    let (code, v) = torcat(&["invariants", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results[0]["kind"], "cat");
    assert_eq!(results[0]["value"]["value"], 3);
    assert_eq!(results[0]["citations"][0], "quasitoric-cat");
    assert_eq!(results[1]["kind"], "cat_g");
    assert_eq!(results[1]["value"]["value"], 3);
    assert_eq!(results[1]["citations"][0], "quasitoric-cat-g");
}

fn computed(v: &Value, entry: &CatalogEntry, kind: CatKind) -> Option<String> {
    let tag = match kind {
        CatKind::Cat => "cat",
        CatKind::CatG => "cat_g",
    };
    if let Some(results) = v["results"].as_array() {
        let r = results.iter().find(|r| r["kind"] == tag)?;
        return Some(match r["value"]["type"].as_str()? {
            "exact" => r["value"]["value"].to_string(),
            "interval" => format!("[{}, {}]", r["value"]["lo"], r["value"]["hi"]),
            _ => "unknown".into(),
        });
    }
    let subject = match &entry.data {
        EntryData::World { subject, .. } => subject.clone(),
        EntryData::Lens { descriptor, .. } => descriptor.name.clone(),
        _ => return None,
    };
    let key = if kind == CatKind::Cat { "cat" } else { "cat_G" };
    v["spaces"][subject][key].as_str().map(str::to_string)
}

#[test]
fn export_validate_invariants_round_trip() {
    for entry in catalog_entries() {
        let path = export(&entry.name);
        let p = path.to_str().unwrap();
        let (code, _) = torcat(&["validate", p]);
        assert_eq!(code, 0, "{}", entry.name);
        let (code, v) = torcat(&["invariants", p]);
        assert_eq!(code, 0, "{}", entry.name);
        let show = run(["torcat", "catalog", "show", entry.name.as_str()]);
        let show: Value = serde_json::from_str(&show.stdout).unwrap();
        for r in show["reproduction"].as_array().unwrap() {
            let kind = if r["known"]["kind"] == "cat" { CatKind::Cat } else { CatKind::CatG };
            let got = computed(&v, &entry, kind).unwrap_or_else(|| panic!("{} {kind:?}", entry.name));
            assert_eq!(got, r["computed"].as_str().unwrap(), "{}", entry.name);
        }
    }
}

#[test]
fn cover_subcommands() {
    let sum = export("triangle#square");
    let (code, v) = torcat(&["cover", "consum", sum.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["size"], 7);
    assert_eq!(v["verified"], true);

    let eye = export("S4");
    let (code, v) = torcat(&["cover", "catM3", eye.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["size"], 3);
    let (code, v) = torcat(&["cover", "qtm4", eye.to_str().unwrap(), "--orientation", "reversed"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["size"], 4);

    let annulus = export("S1xRP3");
    let (code, v) = torcat(&["cover", "catM3", annulus.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(v["message"].as_str().unwrap().contains("orbit-to-fixed-point"));

    let cp2 = export("CP2");
    let (code, _) = torcat(&["cover", "qtm4", cp2.to_str().unwrap()]);
    assert_eq!(code, 1, "no triangulation is a usage error");
}

#[test]
fn consum_builds_a_document() {
    let a = export("CP2");
    let b = export("CP1^2");
    let out = run(["torcat", "consum", a.to_str().unwrap(), b.to_str().unwrap(), "--k", "1", "--face1", "F0", "--face2", "F1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let path = scratch("sum.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let (code, v) = torcat(&["invariants", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["results"][1]["value"]["value"], 7);

    let out = run(["torcat", "consum", a.to_str().unwrap(), b.to_str().unwrap(), "--k", "2", "--face1", "F0", "--face2", "F1"]);
    assert_eq!(out.code, 2, "face dimension does not match k");
    let out = run(["torcat", "consum", a.to_str().unwrap(), b.to_str().unwrap(), "--k", "1", "--face1", "G", "--face2", "F1"]);
    assert_eq!(out.code, 1);
}

#[test]
fn bounds_on_the_counterexample_world() {
    let w = export("S3xS5");
    let (code, v) = torcat(&["bounds", w.to_str().unwrap()]);
    assert_eq!(code, 0);
    let blocked = v["state"]["blocked"].as_array().unwrap();
    assert!(blocked.iter().any(|b| b["rule"] == "R5" && b["reason"] == "hypothesis failed: (S3)^G = ∅"));
    assert_ne!(v["state"]["spaces"]["S3xS5"]["cat_g"]["upper"]["value"], 3);
}

#[test]
fn snf_handles_big_entries() {
    let path = scratch("m.json");
    std::fs::write(
        &path,
        r#"{"format": "torcat/1", "kind": "matrix", "rows": [[2, 0], [0, "123456789012345678901234567890"]]}"#,
    )
    .unwrap();
    let (code, v) = torcat(&["snf", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["diagonal"][0], 2);
    assert_eq!(v["diagonal"][1], "123456789012345678901234567890");
}

#[test]
fn cohomology_of_the_cube() {
    let path = export("CP1^3");
    let (code, v) = torcat(&["cohomology", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["h_vector"], serde_json::json!([1, 3, 3, 1]));
    assert_eq!(v["betti_numbers"], serde_json::json!([1, 0, 3, 0, 3, 0, 1]));
    assert_eq!(v["cup_length"]["value"], 3);

    let annulus = export("S1xRP3");
    let (code, v) = torcat(&["cohomology", annulus.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["unavailable"], true);
}

#[test]
fn lenient_mode_accepts_unknown_fields() {
    let path = scratch("extra.json");
    std::fs::write(&path, r#"{"format": "torcat/1", "kind": "matrix", "rows": [[1]], "comment": "x"}"#).unwrap();
    assert_eq!(torcat(&["snf", path.to_str().unwrap()]).0, 1);
    assert_eq!(torcat(&["--lenient", "snf", path.to_str().unwrap()]).0, 0);
}

#[test]
fn usage_errors() {
    assert_eq!(run(["torcat"]).code, 1);
    assert_eq!(run(["torcat", "frobnicate"]).code, 1);
    assert_eq!(run(["torcat", "validate", "/nonexistent/file.json"]).code, 1);
    assert_eq!(run(["torcat", "catalog", "show", "CP9"]).code, 1);
    assert_eq!(run(["torcat", "--help"]).code, 0);
    let tri = scratch("tri.json");
    std::fs::write(&tri, r#"{"format": "torcat/1", "kind": "triangulation", "vertex_count": 3, "triangles": [[0, 1, 2]], "corners": [[0, 1, 2]], "boundary": []}"#).unwrap();
    assert_eq!(run(["torcat", "validate", tri.to_str().unwrap()]).code, 1);
}

#[test]
fn human_rendering_is_plain_text() {
    let out = run(["torcat", "--human", "catalog", "show", "CP2"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("document:"));
    assert!(serde_json::from_str::<Value>(&out.stdout).is_err());
}
