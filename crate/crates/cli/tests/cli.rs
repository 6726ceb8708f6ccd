use std::process::{Command, Output};

fn ncgroup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncgroup"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ncgroup(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn first_line(args: &[&str]) -> String {
    stdout(args).lines().next().unwrap_or_default().to_string()
}

#[test]
fn omega_examples() {
    assert_eq!(first_line(&["omega", "A5"]), "21");
    assert_eq!(first_line(&["omega", "C7"]), "1");
    assert_eq!(first_line(&["omega", "S3 x C2"]), "4");
}

#[test]
fn omega_json_lists_witness() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["--format", "json", "omega", "D8"])).unwrap();
    assert_eq!(v["omega"], 3);
    assert_eq!(v["exact"], true);
    assert_eq!(v["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn cent_examples() {
    assert_eq!(first_line(&["cent", "Q8"]), "4");
    assert_eq!(first_line(&["cent", "C12"]), "1");
    assert_eq!(first_line(&["cent", "F20"]), "7");
    assert!(stdout(&["cent", "Q8"]).contains("centralizer orders: 8 4 4 4"));
}

#[test]
fn isoclinic_examples() {
    assert_eq!(first_line(&["isoclinic", "D8", "Q8"]), "YES");
    assert_eq!(first_line(&["isoclinic", "S3", "S3 x C5"]), "YES");
    assert_eq!(first_line(&["isoclinic", "S3", "D8"]), "NO");
}

#[test]
fn isoclinic_witness_json() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["--format", "json", "isoclinic", "D8", "Q8", "--witness"])).unwrap();
    assert_eq!(v["verdict"], "YES");
    assert_eq!(v["witness"]["quotient_map"].as_array().unwrap().len(), 4);
    assert_eq!(v["witness"]["derived_source"].as_array().unwrap().len(), 2);
}

#[test]
fn identify_permutation_group() {
    assert_eq!(first_line(&["identify", "perm:(1 2 3 4);(1 3)"]), "D8");
    assert_eq!(first_line(&["identify", "C3 x C2"]), "C6");
}

#[test]
fn export_graph_header() {
    let text = stdout(&["export-graph", "Q8"]);
    assert!(text.lines().any(|l| l == "p edge 6 12"));
    assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 12);
}

#[test]
fn verify_examples() {
    let text = stdout(&["--max-order", "24", "verify", "--claims", "ineq-1+omega"]);
    assert!(text.contains("ineq-1+omega PASS"));

    let text = stdout(&["--max-order", "60", "verify", "--claims", "thm1.2"]);
    assert!(text.contains("thm1.2 PASS"));
    assert!(text.contains("boundary witness: A5 (omega=21, solvable=false)"));

    let text = stdout(&["--max-order", "16", "verify", "--claims", "thm3.5"]);
    assert!(text.contains("thm3.5 PASS"));
    assert!(text.contains("n=4: G/Z(G) = C2xC2"));
    assert!(text.contains("n=5: G/Z(G) = S3"));
}

#[test]
fn verify_json_report() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&[
        "--format",
        "json",
        "--max-order",
        "12",
        "verify",
        "--claims",
        "lemma2.1,lemma3.2",
    ]))
    .unwrap();
    let claims = v["claims"].as_array().unwrap();
    assert_eq!(claims.len(), 2);
    for c in claims {
        assert_eq!(c["status"], "PASS");
        assert_eq!(c["failed"], 0);
    }
}

#[test]
fn errors_exit_nonzero() {
    assert_eq!(ncgroup(&["omega", "Q9"]).status.code(), Some(2));
    assert_eq!(ncgroup(&["verify", "--claims", "nope"]).status.code(), Some(2));
    assert_eq!(ncgroup(&["--max-order", "5000", "atlas"]).status.code(), Some(2));
    let out = ncgroup(&["cent", "perm:(1 1)"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
}

#[test]
fn atlas_is_deterministic_and_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("atlas.csv");
    let path_str = path.to_str().unwrap();
    stdout(&["--max-order", "24", "--out", path_str, "atlas"]);
    let first = std::fs::read_to_string(&path).unwrap();
    let again = stdout(&["--max-order", "24", "atlas"]);
    assert_eq!(first, again);
    assert!(first.starts_with("name,order,center_order,derived_order,omega,omega_exact,"));
    assert!(first.contains("\nA4,12,1,4,"));

    let json = stdout(&["--format", "json", "--max-order", "24", "atlas"]);
    assert_eq!(json, stdout(&["--format", "json", "--max-order", "24", "atlas"]));
}
