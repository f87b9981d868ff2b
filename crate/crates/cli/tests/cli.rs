use std::process::Command;

use milnor_cli::run;
use serde_json::Value;

fn milnor(args: &[&str]) -> milnor_cli::Output {
    run(std::iter::once("milnor").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let o = milnor(&a);
    let v: Value = serde_json::from_str(&o.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}{}", o.stdout, o.stderr));
    (o.code, v)
}

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(v: &Value) {
    let errors: Vec<String> = validator().iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{v:#}");
}

#[test]
fn magnus_commutator() {
    let o = milnor(&["magnus", "[m1,m2]", "--vars", "m1,m2"]);
    assert_eq!((o.code, o.stdout.as_str()), (0, "1 + x1x2 - x2x1\n"));
    let (code, v) = json(&["magnus", "[m1,m2]", "--vars", "m1,m2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["expansion"], "1 + x1x2 - x2x1");
    assert_valid(&v);
}

#[test]
fn reduce_default_alphabet() {
    let o = milnor(&["reduce", "a*b*b^-1*a^-1*[m1,c]"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.trim(), "m1^-1*c^-1*m1*c");
    let o = milnor(&["reduce", "x*x^-1", "--vars", "x,y"]);
    assert_eq!(o.stdout.trim(), "1");
}

#[test]
fn lie_to_basis() {
    let o = milnor(&["lie", "to-basis", "[m2,[[m3,m4],[m5,m6]]]"]);
    assert_eq!(o.code, 0);
    assert!(
        o.stdout
            .contains("[m2,[m3,[m4,[m5,m6]]]] - [m2,[m4,[m3,[m5,m6]]]]"),
        "{}",
        o.stdout
    );
    assert_eq!(milnor(&["lie", "to-basis", "[m2,m3]"]).code, 2);
}

#[test]
fn lemma_report_shape() {
    let (code, v) = json(&["verify", "lemma41"]);
    assert_valid(&v);
    assert_eq!(v["expected"]["rank"], 14);
    assert_eq!(v["expected"]["kernel"], "all-ones");
    let rank = v["result"]["rank"].as_u64().unwrap();
    let all_ones = v["result"]["kernel"] == "all-ones";
    // The verdict follows the computation, whatever it is.
    assert_eq!(
        code == 0,
        rank == 14 && all_ones && v["result"]["kernel_dim"] == 1
    );
    assert_eq!(v["result"]["rewritten_rhs"]["rank"], 14);
    assert_eq!(v["result"]["rewritten_rhs"]["kernel"], "all-ones");
}

#[test]
fn passing_suites() {
    for suite in ["spanning", "hopf", "transcription", "families", "search"] {
        let (code, v) = json(&["verify", suite]);
        assert_valid(&v);
        assert_eq!(
            (code, v["verdict"].as_str()),
            (0, Some("pass")),
            "{suite}: {v:#}"
        );
    }
}

#[test]
fn appendix_reports_failing_identities() {
    let (code, v) = json(&["verify", "appendix"]);
    assert_valid(&v);
    let failing = v["result"]["failing"].as_array().unwrap();
    assert_eq!(code == 0, failing.is_empty());
    assert_eq!(v["result"]["undetected_mutations"], serde_json::json!([]));
}

#[test]
fn verify_all_aggregates() {
    let (code, v) = json(&["verify", "all"]);
    assert_valid(&v);
    let parts = v["result"].as_object().unwrap();
    assert_eq!(parts.len(), 7);
    let all_pass = parts.values().all(|p| p["verdict"] == "pass");
    assert_eq!(code == 0, all_pass);
}

#[test]
fn small_family_grid_is_not_a_certificate() {
    let (code, v) = json(&["verify", "families", "--grid", "3"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["families"][0]["nonzero_residuals"], 0);
    assert_eq!(v["result"]["families"][0]["certificate_grid"], false);
}

#[test]
fn search_full_and_subsystem() {
    let o = milnor(&["system", "search", "--bound", "5"]);
    assert_eq!(o.code, 0);
    assert_eq!(
        o.stdout.lines().next(),
        Some("no integer solutions with |v| ≤ 5")
    );
    let (code, v) = json(&["system", "search", "--bound", "2", "--subsystem", "2,3"]);
    assert_eq!(code, 0);
    assert_valid(&v);
    let sols = v["result"]["solutions"].as_array().unwrap();
    assert!(sols.contains(&serde_json::json!({"b5": 0, "b6": 1, "c3": 1, "c4": 1})));
    assert_eq!(
        milnor(&["system", "search", "--bound", "2", "--subsystem", "2,99"]).code,
        2
    );
    assert_eq!(milnor(&["system", "search", "--bound", "0"]).code, 2);
}

#[test]
fn eval_assignment_files() {
    let dir = std::env::temp_dir().join(format!("milnor-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.txt");
    std::fs::write(
        &good,
        "a[3] -> -1\na[4] -> -1\na[5] -> -2\na[6] -> -2\nb[1] -> 1\nb[2] -> 2\n\
         b[5] -> 1\nb[6] -> -3\nc[1] -> 0\nc[2] -> -1/2\nc[3] -> -1/4\nc[4] -> -1/4\n",
    )
    .unwrap();
    let (code, v) = json(&["system", "eval", "--assign", good.to_str().unwrap()]);
    assert_eq!(code, 0, "{v:#}");
    assert_valid(&v);

    let bad = dir.join("bad.txt");
    let text = std::fs::read_to_string(&good)
        .unwrap()
        .replace("c[3] -> -1/4", "c[3] -> 1/4");
    std::fs::write(&bad, text).unwrap();
    let (code, v) = json(&["system", "eval", "--assign", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    // Exactly the rows that mention c3.
    let c3_rows: Vec<u8> = milnor_core::obstruction::paper_system()
        .rows
        .iter()
        .filter(|r| r.poly.variables().contains(&milnor_core::SysVariable::C3))
        .map(|r| r.label)
        .collect();
    assert!(c3_rows.contains(&2) && c3_rows.contains(&3));
    assert_eq!(v["result"]["nonzero_rows"], serde_json::json!(c3_rows));

    let partial = dir.join("partial.txt");
    std::fs::write(&partial, "a3 = 1\n").unwrap();
    let (code, v) = json(&["system", "eval", "--assign", partial.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_valid(&v);
    assert_eq!(
        milnor(&["system", "eval", "--assign", "/nonexistent/file"]).code,
        2
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn errors_are_reported() {
    let (code, v) = json(&["magnus", "[m1,", "--vars", "m1"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "error");
    assert_valid(&v);
    let o = milnor(&["verify", "nonsense"]);
    assert_eq!(o.code, 2);
    assert!(!o.stderr.is_empty());
}

#[test]
fn reports_are_deterministic() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timing_ms");
        serde_json::to_string(&v).unwrap()
    };
    for args in [
        &["verify", "hopf"][..],
        &["system", "search", "--bound", "2", "--subsystem", "4,7"],
        &["magnus", "[[m1,m2],m3]", "--vars", "m1,m2,m3"],
    ] {
        assert_eq!(strip(json(args).1), strip(json(args).1), "{args:?}");
    }
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_milnor");
    let out = Command::new(exe)
        .args(["magnus", "[m1,m2]", "--vars", "m1,m2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "1 + x1x2 - x2x1\n");
    let out = Command::new(exe).arg("bogus").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
