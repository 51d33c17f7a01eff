use std::path::PathBuf;
use std::process::{Command, Output, Stdio};
use std::io::Write;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixvol")).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mixvol"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn triple_check_fails_on_counterexample() {
    let o = run(&["triple-check", data("counterexample.json").to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    let text = stdout(&o);
    assert!(text.contains("verdict: fails"), "{text}");
    assert!(text.contains("64/729 < 75/729"), "{text}");
}

#[test]
fn permanent_of_identity() {
    let o = run(&["perm", data("identity3.json").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn mixed_volume_prints_exact_and_approximate() {
    let o = run(&["mixvol", data("counterexample.json").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "4/9 (≈ 0.444444444444)");

    let o = run(&["--format", "json", "mixvol", data("counterexample.json").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["mixed_volume"], "4/9");
    assert_eq!(v["approx"], "0.444444444444");
}

#[test]
fn reads_standard_input() {
    let o = run_stdin(&["mixvol"], r#"{"segments":[["1","0"],["1","2"]]}"#);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "1");
    let o = run_stdin(&["mixdisc", "-"], r#"[[["2","0"],["0","2"]],[["1","0"],["0","3"]]]"#);
    assert_eq!(stdout(&o).trim(), "4");
}

#[test]
fn exit_codes_do_not_depend_on_format() {
    let cx = data("counterexample.json");
    let cubes = data("unit_cubes.json");
    let uniform = data("uniform3.json");
    let cases: Vec<(Vec<&str>, i32)> = vec![
        (vec!["triple-check", cx.to_str().unwrap()], 3),
        (vec!["gromov-check", cx.to_str().unwrap()], 3),
        (vec!["segment-concavity", cx.to_str().unwrap()], 0),
        (vec!["af-check", cx.to_str().unwrap()], 0),
        (vec!["triple-check", cubes.to_str().unwrap()], 0),
        (vec!["gromov-check", cubes.to_str().unwrap()], 0),
        (vec!["vdw-check", uniform.to_str().unwrap()], 0),
        (vec!["volpoly", cx.to_str().unwrap()], 0),
    ];
    for (args, expected) in cases {
        for format in ["text", "json"] {
            let mut full = vec!["--format", format];
            full.extend(&args);
            assert_eq!(code(&run(&full)), expected, "{full:?}");
        }
    }
}

#[test]
fn report_json_carries_certificate() {
    let o = run(&["triple-check", "--format", "json", data("counterexample.json").to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "fails");
    let c = &v["certificates"][0];
    assert_eq!(c["center"], serde_json::json!([1, 1, 1]));
    assert_eq!(c["lhs"], "64/729");
    assert_eq!(c["rhs"], "25/243");
    assert_eq!(c["support"].as_array().unwrap().len(), 3);
    assert!(c["comparison"].as_str().unwrap().contains("64/729 < 75/729"));
}

#[test]
fn polynomial_output_feeds_concavity_checks() {
    let cx = data("counterexample.json");
    for route in ["polarization", "permanent", "interpolation"] {
        let o = run(&["volpoly", "--format", "json", "--route", route, cx.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{route}");
        let doc = stdout(&o);
        assert!(doc.contains(r#""value": "4/9""#));
        for (cmd, expected) in [("gromov-check", 3), ("segment-concavity", 0)] {
            let direct = run(&["--format", "json", cmd, cx.to_str().unwrap()]);
            let via = run_stdin(&["--format", "json", cmd], &doc);
            assert_eq!(code(&via), expected);
            assert_eq!(direct.stdout, via.stdout, "{cmd} via {route}");
        }
    }
}

#[test]
fn search_findings_verify() {
    let o = run(&["search", "--format", "json", "--mode", "random", "--max-evaluations", "3000", "--seed", "11"]);
    assert_eq!(code(&o), 3);
    let lines = stdout(&o);
    let last: serde_json::Value = serde_json::from_str(lines.lines().last().unwrap()).unwrap();
    let count = last["summary"]["findings"].as_u64().unwrap();
    assert!(count > 0);
    assert_eq!(last["summary"]["evaluations"], 3000);

    let v = run_stdin(&["verify"], &lines);
    assert_eq!(code(&v), 0, "{}", stdout(&v));
    assert!(stdout(&v).contains(&format!("verified {count} of {count}")));

    // change one side length in the first finding
    let first = lines.lines().next().unwrap();
    let mut f: serde_json::Value = serde_json::from_str(first).unwrap();
    let cell = &mut f["side_matrix"][0][0];
    *cell = serde_json::json!(if cell == "5" { "1" } else { "5" });
    let v = run_stdin(&["verify"], &f.to_string());
    assert_eq!(code(&v), 3);
}

#[test]
fn search_output_is_independent_of_jobs() {
    let args = ["search", "--format", "json", "--mode", "random", "--max-evaluations", "1500", "--seed", "42"];
    let one = run(&[&args[..], &["--jobs", "1"]].concat());
    let four = run(&[&args[..], &["--jobs", "4"]].concat());
    let again = run(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(four.stdout, again.stdout);
}

#[test]
fn search_over_unit_cubes_finds_nothing() {
    let o = run(&["search", "--grid", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("evaluations: 1, findings: 0, best ratio: none"));
}

#[test]
fn bm_check_reports_sequence_and_diagnostic() {
    let o = run_stdin(&["--format", "json", "bm-check", "--precision", "30"], r#"{"sides":[["1","1","1"],["2","2","2"]]}"#);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["sequence"], serde_json::json!(["8", "4", "2", "1"]));
    assert_eq!(v["diagnostic"]["authoritative"], false);
    assert_eq!(v["diagnostic"]["digits"], 30);
}

#[test]
fn input_errors_exit_one() {
    let cases: &[(&[&str], &str, &str)] = &[
        (&["mixvol"], r#"{"dimension":2,"bodies":[{"type":"ball"}]}"#, "unknown variant"),
        (&["mixvol"], r#"{"dimension":3,"bodies":[{"type":"box","intervals":[["0","1"]]}]}"#, "dimension"),
        (&["perm"], r#"[["1","x"]]"#, "not a rational"),
        (&["perm"], r#"[["1","2"]]"#, "square"),
        (&["vdw-check"], r#"[["1","1"],["0","1"]]"#, "row 1"),
        (&["af-check", "--discriminants"], r#"[[["1","0"],["0","-1"]],[["1","0"],["0","1"]]]"#, "positive definite"),
        (&["mixvol"], "not json", "parse"),
        (&["triple-check"], r#"{"sides":[["1","1"],["1","1"]]}"#, ""),
    ];
    for (args, input, needle) in cases {
        let o = run_stdin(args, input);
        let err = String::from_utf8_lossy(&o.stderr).to_lowercase();
        assert_eq!(code(&o), 1, "{args:?} {input}: {err}");
        assert!(err.contains(needle), "{args:?}: {err}");
    }
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["perm", "/nonexistent/file.json"])), 1);
    assert_eq!(code(&run(&["search", "--mode", "sideways"])), 1);
    assert_eq!(code(&run(&["search", "--n", "2"])), 1);
}
