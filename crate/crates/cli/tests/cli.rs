use std::path::Path;
use std::process::Command;

use bsok_cli::report::{EXIT_INVALID, EXIT_OK, EXIT_UNSTABLE, EXIT_VERIFICATION};
use bsok_cli::verify::{parse_fixtures, SHIPPED};
use bsok_cli::CliError;
use bsok_core::polyhedra::RationalPolytope;
use bsok_core::Error;
use serde_json::Value;

fn bsok(args: &[&str]) -> (u8, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_bsok")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code") as u8,
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).expect("valid json")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn a1_body_is_the_segment_0_3() {
    let (code, out, _) = bsok(&["body", "--type", "A1", "--word", "1", "--bundle", "can:3"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["vertices"], json(r#"[["0"], ["3"]]"#));
    assert!(v["report"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    let p = RationalPolytope::from_json(&v["polytope"]).unwrap();
    assert_eq!(p.dim(), 1);
}

#[test]
fn trivial_bundle_gives_a_point() {
    let (code, out, _) = bsok(&["body", "--type", "A2", "--word", "1,2", "--bundle", "can:0,0"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["vertices"], json(r#"[["0", "0"]]"#));
    assert_eq!(v["polytope"]["dim"], 0);
}

#[test]
fn emitted_polytopes_revalidate() {
    let (code, out, _) = bsok(&["body", "--type", "A2", "--word", "1,2,1", "--bundle", "can:1,1,1", "--max-level", "2"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    let p = RationalPolytope::from_json(&v["polytope"]).unwrap();
    assert_eq!(p.dim(), 3);
    assert_eq!(v["volume"], "5/2");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["body", "--type", "B2", "--word", "2,1", "--bundle", "can:1,1"],
        vec!["global", "--type", "A2", "--word", "1,2", "--max-level", "2", "--box", "1"],
        vec!["weights", "--type", "A2", "--word", "1,2,1", "--bundle", "can:0,1,1", "--mu", "0,0", "--max-level", "3"],
        vec!["verify", "--quick", "--seed", "7"],
    ] {
        let mut texts = Vec::new();
        for i in 0..2 {
            let out = dir.path().join(format!("{}-{i}.json", args[0]));
            let mut a = args.clone();
            a.extend(["--out", path(&out)]);
            let (code, stdout, _) = bsok(&a);
            assert_eq!(code, EXIT_OK, "{args:?}");
            assert!(stdout.is_empty());
            texts.push(std::fs::read(&out).unwrap());
        }
        assert_eq!(texts[0], texts[1], "{args:?}");
    }
}

#[test]
fn config_file_mirrors_flags_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.json");
    std::fs::write(&cfg, r#"{"type": "A1", "word": [1], "bundle": "can:1", "max_level": 2}"#).unwrap();
    let (code, out, _) = bsok(&["body", "--config", path(&cfg)]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["vertices"], json(r#"[["0"], ["1"]]"#));
    let (code, out, _) = bsok(&["body", "--config", path(&cfg), "--bundle", "can:3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["vertices"], json(r#"[["0"], ["3"]]"#));

    std::fs::write(&cfg, r#"{"type": "A1", "colour": "red"}"#).unwrap();
    assert_eq!(bsok(&["body", "--config", path(&cfg)]).0, EXIT_INVALID);
}

#[test]
fn matrix_file_matches_type_name() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("b2.json");
    std::fs::write(&m, r#"{"matrix": [[2, -1], [-2, 2]]}"#).unwrap();
    let by_matrix = bsok(&["body", "--matrix-file", path(&m), "--word", "1,2", "--bundle", "can:1,1"]);
    let by_name = bsok(&["body", "--type", "B2", "--word", "1,2", "--bundle", "can:1,1"]);
    assert_eq!(by_matrix.0, EXIT_OK);
    assert_eq!(by_matrix.1, by_name.1);

    std::fs::write(&m, "[[2, -1], [-1, 3]]").unwrap();
    assert_eq!(bsok(&["body", "--matrix-file", path(&m), "--word", "1", "--bundle", "can:1"]).0, EXIT_INVALID);
}

#[test]
fn torus_projection_sums_weight_spaces() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("proj.json");
    // mu -> mu_1 + mu_2 in fundamental-weight coordinates
    std::fs::write(&p, r#"{"projection": [[1, 1]]}"#).unwrap();
    let (code, out, err) = bsok(&[
        "weights", "--type", "A2", "--word", "1,2,1", "--bundle", "can:0,1,1", "--mu", "0", "--max-level", "2",
        "--torus-proj-file", path(&p),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let dims: Vec<u64> = json(&out)["multiplicities"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["dim"].as_u64().unwrap())
        .collect();
    // level 1: the two zero weights of the adjoint module; level 2: zero
    // weight multiplicity 3 of V(2 rho) plus the weights (3,-3) and (-3,3)
    assert_eq!(dims, vec![2, 5]);
}

#[test]
fn global_cone_of_p1() {
    let (code, out, _) = bsok(&["global", "--type", "A1", "--word", "1", "--max-level", "4", "--box", "3"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!(v["rays"], json(r#"[["0", "1"], ["1", "1"]]"#));
    assert_eq!(v["saturated"], true);
}

#[test]
fn box_zero_gives_the_zero_cone_without_a_saturation_witness() {
    let (code, out, err) = bsok(&["global", "--type", "A1", "--word", "1", "--box", "0"]);
    assert_eq!(code, EXIT_VERIFICATION);
    assert!(err.contains("saturation"));
    assert_eq!(json(&out)["rays"], json("[]"));
}

#[test]
fn invalid_input_exits_with_2() {
    for args in [
        vec!["body", "--type", "A2", "--word", "1,1", "--bundle", "can:1,1"],
        vec!["body", "--type", "Q7", "--word", "1", "--bundle", "can:1"],
        vec!["body", "--type", "A2", "--bundle", "can:1,1"],
        vec!["body", "--type", "A2", "--word", "1,2", "--bundle", "eff:-1,0"],
        vec!["body", "--type", "A2", "--word", "1,2", "--bundle", "can:1"],
        vec!["body", "--type", "A2", "--word", "1,2", "--bundle", "xyz:1,1"],
        vec!["body", "--type", "A2", "--word", "1,2", "--bundle", "can:1,1", "--max-level", "0"],
        vec!["weights", "--type", "A1", "--word", "1", "--bundle", "can:1", "--mu", "3"],
        vec!["weights", "--type", "A1", "--word", "1", "--bundle", "can:1", "--mu", "1/2", "--max-level", "1"],
        vec!["body", "--no-such-flag"],
    ] {
        assert_eq!(bsok(&args).0, EXIT_INVALID, "{args:?}");
    }
}

#[test]
fn error_classes_map_to_exit_codes() {
    assert_eq!(CliError::from(Error::Unstable("x".into())).code, EXIT_UNSTABLE);
    let deficiency = Error::SpanDeficiency { class: vec![1], rank: 1, expected: 2 };
    assert_eq!(CliError::from(deficiency).code, EXIT_UNSTABLE);
    assert_eq!(CliError::from(Error::VerificationFailure("x".into())).code, EXIT_VERIFICATION);
    assert_eq!(CliError::from(Error::NotReduced(vec![1, 1])).code, EXIT_INVALID);
}

#[test]
fn quick_verification_passes() {
    let (code, out, err) = bsok(&["verify", "--quick"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v = json(&out);
    assert_eq!(v["failed"], 0);
    let report = v["report"].as_array().unwrap();
    for inv in ["golden_vertices", "volume_identity", "equivariance", "oracle_independence", "golden_rays", "golden_dims"] {
        assert!(report.iter().any(|c| c["invariant"] == inv), "{inv} not exercised");
    }
}

#[test]
fn corrupted_fixture_fails_with_the_named_invariant() {
    let mut fixtures = parse_fixtures(SHIPPED, "shipped").unwrap();
    fixtures.retain(|f| f.case == "a1-can3");
    fixtures[0].expect.vertices = Some(vec![vec!["0".into()], vec!["4".into()]]);
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), serde_json::to_string(&fixtures).unwrap()).unwrap();
    let (code, out, err) = bsok(&["verify", "--fixtures", path(dir.path())]);
    assert_eq!(code, EXIT_VERIFICATION);
    assert!(err.contains("golden_vertices"));
    let v = json(&out);
    let failed: Vec<&Value> = v["report"].as_array().unwrap().iter().filter(|c| c["status"] != "pass").collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["case"], "a1-can3");
    assert_eq!(failed[0]["invariant"], "golden_vertices");
}

#[test]
fn unreadable_fixture_file_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("x.json"), r#"{"case": "x"}"#).unwrap();
    assert_eq!(bsok(&["verify", "--fixtures", path(dir.path())]).0, EXIT_INVALID);
}

#[test]
fn shipped_fixtures_all_pass() {
    let (code, out, err) = bsok(&["verify"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v = json(&out);
    assert_eq!(v["failed"], 0);
    assert_eq!(v["cases"], parse_fixtures(SHIPPED, "shipped").unwrap().len());
}
