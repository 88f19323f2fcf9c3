use std::path::{Path, PathBuf};
use std::process::Command;

use jsonschema::JSONSchema;
use serde_json::Value;

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

const COMMANDS: &[&[&str]] = &[
    &["algebra", "info", "ut:3"],
    &["algebra", "info", "zero_mult:2"],
    &["algebra", "validate", "docs/examples/two-by-two.json"],
    &["multiplier", "compute", "zero_mult:2"],
    &["multiplier", "compute", "grassmann_unital:2"],
    &["structure", "radical", "ut:3"],
    &["structure", "wm", "block_ut:1,2"],
    &["structure", "exponent", "ut:3"],
    &["action", "validate", "grassmann_Ek(1,3)"],
    &["action", "semidirect", "ut2C"],
    &["action", "semidirect", "ordinary:grassmann:2"],
    &["action", "ss-part", "ut2full"],
    &["poly", "check", "ut2F", "[x1,x2][x3,x4]"],
    &["poly", "check", "ut2F", "[x1,x2]"],
    &["codim", "compute", "ut2D", "-n", "3"],
    &["codim", "kernel", "ut2C", "-n", "2"],
    &["codim", "verify-gens", "ut2F", "-n", "3", "--mode", "strict", "-g", "[x1,x2][x3,x4]"],
    &["codim", "verify-gens", "ut2F", "-n", "2", "-g", "[x1,x2]"],
    &["codim", "contains", "ut2F", "ut2D", "-n", "2"],
    &["codim", "contains", "ut2C", "ut2F", "-n", "2"],
    &["codim", "grassmann", "-k", "2", "-n", "1"],
    &["codim", "growth", "ut2D", "--max", "4"],
    &["--max-rows", "5", "codim", "growth", "ut2D", "--max", "4"],
    &["--max-rows", "5", "codim", "compute", "ut2D", "-n", "4"],
    &["poly", "check", "ut2F", "w9*x1"],
    &["--max-degree", "3", "codim", "compute", "ut2F", "-n", "4"],
];

#[test]
fn json_reports_match_schema() {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(workspace_root().join("docs/report-schema.json")).unwrap())
            .unwrap();
    let compiled = JSONSchema::compile(&schema).expect("schema compiles");
    for args in COMMANDS {
        let output = Command::new(env!("CARGO_BIN_EXE_genpi"))
            .arg("--json")
            .args(*args)
            .current_dir(workspace_root())
            .output()
            .unwrap();
        let text = String::from_utf8(output.stdout).unwrap();
        let report: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}\n{text}"));
        if let Err(errors) = compiled.validate(&report) {
            let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
            panic!("{args:?} does not match the schema:\n{}\n{text}", msgs.join("\n"));
        }
        // printing is stable: re-serializing the parsed report gives the same text
        assert_eq!(serde_json::to_string_pretty(&report).unwrap(), text.trim_end(), "{args:?}");
        let code = output.status.code().unwrap();
        let is_error = report.get("error").is_some();
        assert_eq!(is_error, code >= 2, "{args:?}: exit {code}");
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(workspace_root().join("docs/report-schema.json")).unwrap())
            .unwrap();
    let compiled = JSONSchema::compile(&schema).unwrap();
    let bad = [
        serde_json::json!({ "command": "codim compute", "action": "ut2F", "n": 0, "rows": 1, "columns": 1, "codimension": 1 }),
        serde_json::json!({ "command": "structure exponent", "algebra": "ut:2" }),
        serde_json::json!({ "command": "poly check", "error": { "kind": "Nope", "message": "" } }),
    ];
    for v in bad {
        assert!(!compiled.is_valid(&v), "{v}");
    }
}
