use std::path::PathBuf;

use svlab_cli::{parse, print, run_script, Options, ScriptError, Status};

fn scripts() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts");
    let mut out: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "svl"))
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read_to_string(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn shipped_scripts_round_trip_through_fmt() {
    let all = scripts();
    assert!(all.len() >= 6);
    for (name, text) in all {
        let a = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let printed = print(&a);
        let b = parse(&printed).unwrap();
        assert_eq!(a.kinds(), b.kinds(), "{name}");
        assert_eq!(printed, text, "{name} is not in canonical form");
    }
}

#[test]
fn shipped_scripts_have_the_expected_outcome() {
    for (name, text) in scripts() {
        let run = run_script(&text, &Options::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
        let expected = if name.ends_with("_fails") {
            Status::AssertionFailed
        } else {
            Status::Ok
        };
        assert_eq!(run.report.status, expected, "{name}\n{}", run.report.render(true));
        assert!(run.report.ledger.iter().all(|c| c.verdict.is_pass()), "{name}");
    }
}

#[test]
fn reports_are_deterministic() {
    for (name, text) in scripts() {
        let a = run_script(&text, &Options::default()).unwrap().report.to_json();
        let b = run_script(&text, &Options::default()).unwrap().report.to_json();
        assert_eq!(a, b, "{name}");
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["version"], 1);
        assert!(v.get("timestamp").is_none());
    }
}

#[test]
fn every_table_entry_carries_provenance() {
    let text =
        std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scripts/triple_product.svl"))
            .unwrap();
    let report = run_script(&text, &Options::default()).unwrap().report;
    let p = report.table.iter().find(|t| t.row.name == "P").unwrap();
    assert_eq!(p.provenance["sv_rel"], vec!["R-triple-product"]);
    assert!(p.provenance["sisv_rel"].contains(&"R-chi-stable".to_string()));
    assert!(report
        .table
        .iter()
        .all(|t| t.row.chi.is_none() || t.provenance.contains_key("chi")));
}

fn eval_error(text: &str) -> String {
    match run_script(text, &Options::default()) {
        Err(e @ ScriptError::Eval { .. }) => e.to_string(),
        Err(e) => panic!("expected an evaluation error, got {e}"),
        Ok(r) => panic!("expected an evaluation error, got {:?}", r.report.status),
    }
}

#[test]
fn evaluation_errors_name_the_statement() {
    let e = eval_error("let X = NoSuchThing\n");
    assert!(e.starts_with("line 1:") && e.contains("unknown dataset"), "{e}");
    let e = eval_error("manifold A { dim: 2 }\nassert sv(B) == 0\n");
    assert!(e.starts_with("line 2:") && e.contains("unbound name `B`"), "{e}");
    let e = eval_error("let M = Mobius\ncertify M\n");
    assert!(e.contains("plain complex"), "{e}");
    let e = eval_error("manifold A { dim: 2, closed: true }\ncertify A\n");
    assert!(e.contains("no triangulation"), "{e}");
    let e = eval_error("manifold S { triangulation: RP2-6 }\n");
    assert!(e.contains("not an oriented manifold"), "{e}");
}

#[test]
fn non_orientable_results_are_plain_complexes() {
    let run = run_script("let M = Mobius\nlet K = product(M, Circle3)\n", &Options::default()).unwrap();
    let names: Vec<_> = run.report.complexes.iter().map(|c| (c.name.as_str(), c.chi)).collect();
    assert_eq!(names, vec![("M", 0), ("K", 0)]);
    let rows: Vec<_> = run.report.table.iter().map(|t| t.row.name.as_str()).collect();
    assert_eq!(rows, vec!["Circle3"]);
}

#[test]
fn whole_script_is_rejected_on_a_parse_error() {
    // The first statement would fail at evaluation; the parse error wins.
    let e = run_script("let X = NoSuchThing\nlet Y = connsum(X, )\n", &Options::default()).unwrap_err();
    assert!(e.is_parse(), "{e}");
    assert_eq!(e.pos().unwrap().line, 2);
}

#[test]
fn inconsistency_is_reported() {
    let text = "manifold F {\n  dim: 2\n  closed: true\n  oriented: true\n  connected: true\n  hyperbolic: true\n  amenable: true\n}\nassert sv(F) == 0\n";
    let run = run_script(text, &Options::default()).unwrap();
    assert_eq!(run.report.status, Status::Inconsistent);
    assert_eq!(run.report.exit_code(), 2);
    assert!(run.report.inconsistency.as_ref().unwrap().contains("R-positive"));
}

#[test]
fn datasets_directory_shadows_builtins() {
    let dir = tempfile::tempdir().unwrap();
    let k = svlab_core::datasets::builtin("Sphere[2]").unwrap().with_name("Ball");
    std::fs::write(dir.path().join("ball.json"), k.to_json()).unwrap();
    let options = Options {
        datasets: Some(dir.path().to_path_buf()),
    };
    let run = run_script("let B = Ball\nassert chi(B) == 2\n", &options).unwrap();
    assert_eq!(run.report.status, Status::Ok);
}

#[test]
fn aliases_and_nested_operands_share_registrations() {
    let text = "let T = Torus7\nlet U = T\nlet S = connsum(T, Torus7)\nlet D = double(PuncturedTorus)\nassert chi(U) == 0\nassert chi(S) == -2\nassert chi(D) == -2\n";
    let run = run_script(text, &Options::default()).unwrap();
    assert_eq!(run.report.status, Status::Ok);
    let names: Vec<_> = run.report.table.iter().map(|t| t.row.name.as_str()).collect();
    assert!(
        names.contains(&"PuncturedTorus") && names.contains(&"Torus7") && !names.contains(&"U"),
        "{names:?}"
    );
}

#[test]
fn attribute_keys_are_description_fields() {
    use svlab_core::inference::Description;
    for key in svlab_cli::ast::KEYS.iter().filter(|k| **k != "triangulation") {
        let value = match *key {
            "dim" => serde_json::json!(3),
            "boundary" => serde_json::json!([{ "manifold": "S" }]),
            "fibre" => serde_json::json!({ "fiber": "S", "base": "B" }),
            "amcat_upper" | "self_map_degree" | "signature" | "chi" | "chi_rel" => serde_json::json!(2),
            _ => serde_json::json!(true),
        };
        let mut doc = serde_json::json!({ "name": "X", "dim": 2 });
        doc[*key] = value.clone();
        let d: Description = serde_json::from_value(doc).unwrap_or_else(|e| panic!("{key}: {e}"));
        let back = serde_json::to_value(&d).unwrap();
        assert_eq!(back[*key], value, "{key}");
    }
}
