use std::path::PathBuf;

use coupling_cli::run;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("coupling").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn check_flat_manifest() {
    let (code, out, _) = invoke(&["check", "--manifest", &fixture("flat.json")]);
    assert_eq!(code, 0);
    let pass_lines = out
        .lines()
        .filter(|l| l.ends_with(": PASS") && !l.starts_with("verdict"))
        .count();
    assert_eq!(pass_lines, 4, "{out}");
}

#[test]
fn verify_names_the_broken_closedness() {
    let (code, out, _) = invoke(&["verify", "--manifest", &fixture("mutation_closedness.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("horizontally_closed: FAIL"), "{out}");
    assert!(out.contains("[e_x1,e_x2,e_x3]"), "{out}");
}

#[test]
fn mutations_exit_one_naming_their_condition() {
    for (file, broken) in [
        ("mutation_jacobi.json", "jacobi"),
        ("mutation_closedness.json", "horizontally_closed"),
        ("mutation_curvature.json", "curvature_identity"),
        ("mutation_transport.json", "poisson_connection"),
    ] {
        for cmd in ["check", "verify"] {
            let (code, out, _) = invoke(&[cmd, "--manifest", &fixture(file), "--report", "json"]);
            assert_eq!(code, 1, "{cmd} {file}");
            let v: serde_json::Value = serde_json::from_str(&out).unwrap();
            let failing: Vec<&str> = v["conditions"]
                .as_array()
                .unwrap()
                .iter()
                .filter(|c| c["status"] == "fail")
                .map(|c| c["name"].as_str().unwrap())
                .collect();
            assert_eq!(failing, vec![broken], "{cmd} {file}");
        }
    }
}

#[test]
fn json_report_key_order() {
    let (_, out, _) = invoke(&["check", "--manifest", &fixture("flat.json"), "--report", "json"]);
    let verdict = out.find("\"verdict\"").unwrap();
    let conditions = out.find("\"conditions\"").unwrap();
    let pivots = out.find("\"pivot_denominators\"").unwrap();
    assert!(verdict < conditions && conditions < pivots);
    let name = out.find("\"name\"").unwrap();
    let status = out.find("\"status\"").unwrap();
    let witnesses = out.find("\"witnesses\"").unwrap();
    assert!(name < status && status < witnesses);
    assert!(out.contains("\"verdict\": \"pass\""));
}

fn construct_then_check(kind: &str, input: &str) -> String {
    let (code, manifest, err) = invoke(&["construct", "--construct-kind", kind, "--manifest", &fixture(input)]);
    assert_eq!(code, 0, "{err}");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("constructed.json");
    std::fs::write(&path, &manifest).unwrap();
    let (code, out, _) = invoke(&["check", "--manifest", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = invoke(&["verify", "--manifest", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    manifest
}

#[test]
fn yang_mills_construct_then_check() {
    let m = construct_then_check("yang-mills", "ymh.json");
    assert!(m.contains("\"coeff\": \"-x2\""), "{m}");
    assert!(m.contains("\"coeff\": \"-p\""), "{m}");
}

#[test]
fn cartan_and_chb_construct_then_check() {
    let m = construct_then_check("cartan", "cartan.json");
    assert!(m.contains("\"coeff\": \"-1\""), "{m}");
    let m = construct_then_check("chb", "chb.json");
    assert!(m.contains("\"coeff\": \"-1/2\""), "{m}");
}

#[test]
fn constructed_manifest_is_canonical() {
    let (_, m, _) = invoke(&["construct", "--construct-kind", "yang-mills", "--manifest", &fixture("ymh.json")]);
    let parsed = coupling_dirac::manifest::Manifest::from_json(&m).unwrap();
    assert_eq!(parsed.canonicalize().unwrap().to_json(), m);
}

#[test]
fn decompose_recovers_data() {
    let (code, out, err) = invoke(&["decompose", "--manifest", &fixture("decompose.json")]);
    assert_eq!(code, 0, "{err}");
    let m = coupling_dirac::manifest::Manifest::from_json(&out).unwrap();
    // 𝔽 = −W⁻¹ for the base block W, and W₁₂ = 1 inverts to 𝔽₁₂ = 1
    assert_eq!(m.horizontal_2form.len(), 1);
    assert_eq!(m.horizontal_2form[0].coeff, "1");
    assert_eq!(m.vertical_bivector[0].coeff, "1");
    assert!(!m.connection.is_empty());
}

#[test]
fn decompose_with_fraction_is_degenerate() {
    let (code, out, _) = invoke(&[
        "decompose",
        "--manifest",
        &fixture("decompose_fraction.json"),
        "--report",
        "json",
    ]);
    assert_eq!(code, 3);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "degenerate");
}

#[test]
fn non_casimir_is_degenerate() {
    let (code, _, err) = invoke(&["check", "--manifest", &fixture("casimir_bad.json")]);
    assert_eq!(code, 3);
    assert!(err.contains("error:"));
}

#[test]
fn manifest_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"coordinates\": [], \"unexpected\": 1}").unwrap();
    let (code, out, _) = invoke(&["check", "--manifest", path.to_str().unwrap(), "--report", "json"]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "manifest");

    let (code, _, _) = invoke(&["check", "--manifest", "/nonexistent/manifest.json"]);
    assert_eq!(code, 2);
    let (code, _, _) = invoke(&["construct", "--construct-kind", "cartan", "--manifest", &fixture("flat.json")]);
    assert_eq!(code, 2);
    let (code, _, _) = invoke(&["frobnicate"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_at_a_fiber_point() {
    let f = fixture("mutation_jacobi.json");
    let (code, out, _) = invoke(&["verify", "--manifest", &f, "--fiber-point", "x1=0, x2=1/2"]);
    assert_eq!(code, 1);
    assert!(out.contains("fiber_jacobi: FAIL"), "{out}");
    let (code, out, _) = invoke(&["verify", "--manifest", &fixture("flat.json"), "--fiber-point", "x1=0, x2=1"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("fiber_jacobi: PASS"));
    let (code, _, _) = invoke(&["verify", "--manifest", &fixture("flat.json"), "--fiber-point", "x1=0"]);
    assert_eq!(code, 2);
    let (code, _, _) = invoke(&["verify", "--manifest", &fixture("flat.json"), "--fiber-point", "q=0, x1=0, x2=0"]);
    assert_eq!(code, 2);
}

#[test]
fn build_lists_generators() {
    let (code, out, _) = invoke(&["build", "--manifest", &fixture("flat.json"), "--report", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let labels: Vec<&str> = v["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels, vec!["e_x1", "e_x2", "e_q", "e_p"]);
}
