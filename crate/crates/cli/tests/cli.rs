use std::path::Path;
use std::process::Command;

use mmsym_cli::{run, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK, EXIT_USAGE};
use mmsym_core::brent::{assignment_from_terms, assignment_to_json, trivial_decomposition};
use mmsym_core::group::{act_on_tensor, enumerate_group, Which};
use mmsym_core::tensor::{BasisIndex, Tensor};

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn mmsym(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mmsym").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn assert_one_error_line(r: &Run, kind: &str) {
    assert_eq!(r.err.lines().count(), 1, "{:?}", r.err);
    assert!(r.err.starts_with(&format!("error: {kind}: ")), "{:?}", r.err);
}

#[test]
fn orbit_sum_reproduces_the_worked_example() {
    let r = mmsym(&["orbit-sum", "--type", "27", "--params", "1,2,3,4,5", "--gamma"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(
        r.out,
        "318*g1 + 214*g2 + 32*g3 - 32*g4 + 32*g5 + 174*g6 - 40*g7 + 40*g8\n"
    );
}

#[test]
fn symbolic_orbit_sum_of_family_9() {
    let r = mmsym(&["orbit-sum", "--type", "9"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(
        r.out.ends_with("4*b^3*g9 + 4*b^3*g10 + 4*b^3*g11 + 4*b^3*g12\n"),
        "{}",
        r.out
    );
}

#[test]
fn degenerate_parameters_are_noted() {
    let r = mmsym(&["orbit-sum", "--type", "5", "--params", "0,0"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.out, "# orbit has 1 elements (family length 3)\n0\n");
}

#[test]
fn full_orbit_sum_is_a_tensor_file() {
    let r = mmsym(&["orbit-sum", "--type", "7", "--params", "1", "--full"]);
    assert_eq!(r.code, EXIT_OK);
    let t = Tensor::from_json(&r.out).unwrap();
    // delta⊗delta⊗delta has one entry per choice of diagonal position in each factor.
    assert_eq!(t.len(), 27);
}

#[test]
fn classes_lists_twelve_classes() {
    let r = mmsym(&["classes"]);
    assert_eq!(r.code, EXIT_OK);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines.len(), 14);
    assert!(lines[1].starts_with("Q1\t3\t11,11,11\t"));
    assert_eq!(lines[13], "total\t183");
}

#[test]
fn multisets_lists_in_order_with_a_count() {
    let r = mmsym(&["multisets", "--max-length", "2"]);
    assert_eq!(r.out, "1\t{7}\n2\t{6}\n2\t{7,7}\n# 3 multisets\n");
}

#[test]
fn verify_reports_zero_survivors() {
    let r = mmsym(&["verify"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(
        r.out.lines().last().unwrap(),
        "VERIFIED: 0 survivors of 14623 multisets at max length 23"
    );
    assert!(r.out.contains("  {5,16} -> REDUCIBLE_TYPES\n"));
}

#[test]
fn verify_json_report_is_well_formed() {
    let r = mmsym(&["verify", "--max-length", "9", "--report", "json"]);
    assert_eq!(r.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["max_length"], 9);
    let n = v["multiset_count"].as_u64().unwrap() as usize;
    assert_eq!(v["certificates"].as_array().unwrap().len(), n);
    assert!(v["survivors"].as_array().unwrap().is_empty());
    for c in v["certificates"].as_array().unwrap() {
        assert!(c["rule"].is_string() && c["multiset"].is_array());
    }
}

#[test]
fn verify_is_deterministic() {
    let a = mmsym(&["verify", "--max-length", "12", "--report", "json"]);
    let b = mmsym(&["verify", "--max-length", "12", "--report", "json"]);
    assert_eq!(a.out, b.out);
}

#[test]
fn verify_rejects_lengths_outside_the_catalog() {
    for bad in ["0", "24"] {
        let r = mmsym(&["verify", "--max-length", bad]);
        assert_eq!(r.code, EXIT_USAGE);
        assert_one_error_line(&r, "usage");
    }
}

#[test]
fn brent_generic_rank_23_to_stdout() {
    let r = mmsym(&["brent", "--mode", "generic", "--rank", "23"]);
    assert_eq!(r.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(v["equations"].as_array().unwrap().len(), 729);
    assert_eq!(v["variables"].as_array().unwrap().len(), 621);
}

#[test]
fn brent_invariant_text_has_twelve_lines() {
    let r = mmsym(&["brent", "--mode", "invariant", "--types", "24,9,7", "--format", "text"]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.out.lines().count(), 12);
}

#[test]
fn brent_mode_requirements_are_usage_errors() {
    for args in [
        &["brent", "--mode", "generic"][..],
        &["brent", "--mode", "invariant"],
        &["brent", "--mode", "sideways", "--rank", "3"],
        &["brent", "--mode", "generic", "--rank", "0"],
        &["brent", "--mode", "invariant", "--types", "45"],
    ] {
        let r = mmsym(args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}");
        assert_one_error_line(&r, "usage");
    }
}

#[test]
fn check_solution_accepts_the_trivial_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("sys.json");
    let sol = dir.path().join("sol.json");
    let r = mmsym(&["brent", "--mode", "generic", "--rank", "27", "--out", path(&sys)]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.is_empty());
    let assignment = assignment_from_terms(&trivial_decomposition()).unwrap();
    std::fs::write(&sol, assignment_to_json(&assignment)).unwrap();
    let r = mmsym(&["check-solution", "--system", path(&sys), "--assignment", path(&sol)]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.out, "OK: all 729 equations hold\n");
}

#[test]
fn check_solution_lists_violated_equations() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("sys.json");
    let sol = dir.path().join("sol.json");
    mmsym(&["brent", "--mode", "generic", "--rank", "27", "--out", path(&sys)]);
    let mut terms = trivial_decomposition();
    terms.pop();
    terms.push(trivial_decomposition()[0].clone());
    std::fs::write(&sol, assignment_to_json(&assignment_from_terms(&terms).unwrap())).unwrap();
    let r = mmsym(&["check-solution", "--system", path(&sys), "--assignment", path(&sol)]);
    assert_eq!(r.code, EXIT_CHECK_FAILED);
    // Term 27 is e33⊗e33⊗e33, replaced by a second copy of e11⊗e11⊗e11.
    assert_eq!(
        r.out,
        "FAILED: 2 of 729 equations violated\n0\t11,11,11\n728\t33,33,33\n"
    );
}

#[test]
fn check_solution_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("sys.json");
    let sol = dir.path().join("sol.json");
    mmsym(&["brent", "--mode", "generic", "--rank", "2", "--out", path(&sys)]);

    std::fs::write(&sol, "{\"x1_11\": \"1\"}").unwrap();
    let r = mmsym(&["check-solution", "--system", path(&sys), "--assignment", path(&sol)]);
    assert_eq!(r.code, EXIT_INPUT);
    assert_one_error_line(&r, "input");

    std::fs::write(&sol, "{not json").unwrap();
    let r = mmsym(&["check-solution", "--system", path(&sys), "--assignment", path(&sol)]);
    assert_eq!(r.code, EXIT_INPUT);
    assert_one_error_line(&r, "parse");

    let missing = dir.path().join("absent.json");
    let r = mmsym(&["check-solution", "--system", path(&missing), "--assignment", path(&sol)]);
    assert_eq!(r.code, EXIT_INPUT);
    assert_one_error_line(&r, "io");
}

#[test]
fn act_matches_the_library_action() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.json");
    let mut t = Tensor::basis(BasisIndex::parse_short("11,12,21").unwrap());
    t.add_assign(&Tensor::basis(BasisIndex::parse_short("12,23,31").unwrap()));
    std::fs::write(&file, t.to_json()).unwrap();
    for elem in enumerate_group(Which::G).into_iter().step_by(17) {
        let g = elem.to_string();
        let r = mmsym(&["act", "--g", &g, "--in", path(&file)]);
        assert_eq!(r.code, EXIT_OK, "{g}: {}", r.err);
        assert_eq!(Tensor::from_json(&r.out).unwrap(), act_on_tensor(&elem, &t), "{g}");
    }
    let r = mmsym(&["act", "--g", "(12)", "--in", path(&file)]);
    assert_eq!(r.code, EXIT_USAGE);
    assert_one_error_line(&r, "usage");
}

#[test]
fn unknown_subcommands_and_flags_are_usage_errors() {
    for args in [
        &["frobnicate"][..],
        &["classes", "--bogus"],
        &["orbit-sum", "--type", "45"],
    ] {
        let r = mmsym(args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}");
        assert_one_error_line(&r, "usage");
    }
}

#[test]
fn arity_mismatch_is_a_usage_error() {
    let r = mmsym(&["orbit-sum", "--type", "27", "--params", "1,2"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert_one_error_line(&r, "usage");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_mmsym");
    let ok = Command::new(bin)
        .args(["multisets", "--max-length", "3"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = Command::new(bin).args(["verify", "--report", "yaml"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    assert!(bad.stdout.is_empty());
}
