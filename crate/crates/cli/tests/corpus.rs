//! Regression corpus: every case in tests/corpus/cases.txt is run through the
//! binary and compared byte for byte with tests/corpus/expected/<name>.json.
//! Set BRAIDEXT_BLESS=1 to rewrite the expected files.

mod common;

use braidext::cochain::is_cocycle;
use braidext::cohomology::{classes_equal, cohomology_group};
use braidext_cli::problem::{parse_str, read_cochain};
use braidext_cli::report::{
    ClassifyReport, CohomologyReport, ErrorReport, ExtensionReport, SearchReport, ValidateReport,
};
use common::{cases, corpus_dir, run};
use serde::de::DeserializeOwned;
use serde::Serialize;

fn reparse<T: DeserializeOwned + Serialize>(bytes: &[u8]) -> T {
    let text = std::str::from_utf8(bytes).unwrap();
    let report: T = serde_json::from_str(text).unwrap();
    let mut again = serde_json::to_string_pretty(&report).unwrap();
    again.push('\n');
    assert_eq!(again, text);
    report
}

#[test]
fn corpus_matches_expected_outputs() {
    let expected_dir = corpus_dir().join("expected");
    let bless = std::env::var_os("BRAIDEXT_BLESS").is_some();
    if bless {
        std::fs::create_dir_all(&expected_dir).unwrap();
    }
    let mut mismatched = Vec::new();
    for case in cases() {
        let r = run(&case.args, "json");
        assert_eq!(r.code, case.exit, "{}: stderr {}", case.name, r.stderr);
        let path = expected_dir.join(format!("{}.json", case.name));
        if bless {
            std::fs::write(&path, &r.stdout).unwrap();
        } else if std::fs::read(&path).unwrap_or_default() != r.stdout {
            mismatched.push(case.name);
        }
    }
    assert!(mismatched.is_empty(), "outputs differ from expected: {mismatched:?}");
}

#[test]
fn every_report_round_trips() {
    for case in cases() {
        let r = run(&case.args, "json");
        if r.code == 2 {
            let e: ErrorReport = reparse(&r.stdout);
            assert!(!e.error.message.is_empty());
            assert!(!r.stderr.is_empty());
            continue;
        }
        let command = case.args.iter().find(|a| !a.starts_with("--")).unwrap();
        match command.as_str() {
            "validate" => {
                let v: ValidateReport = reparse(&r.stdout);
                assert_eq!(v.ok, v.failures.is_empty());
            }
            "cohomology" => {
                let c: CohomologyReport = reparse(&r.stdout);
                assert_eq!(c.order, c.factors.iter().map(|&d| d as u128).product::<u128>());
            }
            "classify" => {
                let c: ClassifyReport = reparse(&r.stdout);
                assert_eq!(c.liftable, c.preimage.is_some());
            }
            "extension" => {
                let e: ExtensionReport = reparse(&r.stdout);
                assert_eq!(e.table.len(), e.order);
                assert_eq!(e.associative, e.witness.is_none());
            }
            "search-actions" => {
                let s: SearchReport = reparse(&r.stdout);
                if let Some(d) = &s.data {
                    assert_eq!(d.len() as u128, s.count);
                }
            }
            other => panic!("unknown command {other}"),
        }
    }
}

fn problem(name: &str) -> braidext_cli::problem::Problem {
    let text = std::fs::read_to_string(corpus_dir().join(name)).unwrap();
    parse_str(&text).unwrap().resolve().unwrap()
}

#[test]
fn emitted_cochains_read_back() {
    let args = |s: &str| s.split_whitespace().map(String::from).collect::<Vec<_>>();

    let p = problem("semion.json");
    let d = p.data.unwrap();
    let r: ClassifyReport = reparse(&run(&args("classify semion.json"), "json").stdout);
    let pi = read_cochain(&r.obstruction, 2, None, d.braided().pi1()).unwrap();
    assert_eq!(pi.get(&[1, 1, 1, 1]), 1);
    assert!(is_cocycle(&pi, d.psi()).unwrap());

    let p = problem("trivial.json");
    let d = p.data.unwrap();
    let r: ClassifyReport = reparse(&run(&args("classify trivial.json"), "json").stdout);
    let pre = read_cochain(r.preimage.as_ref().unwrap(), 2, None, d.braided().pi1()).unwrap();
    assert_eq!(pre.degree(), 3);

    for (file, degree) in [("z4_sign.json", 2), ("klein_z2.json", 2), ("z2_by_z4_trivial.json", 2)] {
        let p = problem(file);
        let action = p.coefficients.unwrap();
        let cmd = format!("cohomology --degree {degree} --representatives {file}");
        let r: CohomologyReport = reparse(&run(&args(&cmd), "json").stdout);
        let reps = r.representatives.unwrap();
        let engine = cohomology_group(&action, degree).unwrap();
        assert_eq!(reps.len(), engine.representatives.len());
        for (spec, want) in reps.iter().zip(&engine.representatives) {
            let f = read_cochain(spec, action.group().order(), None, action.module()).unwrap();
            assert!(is_cocycle(&f, &action).unwrap());
            assert!(classes_equal(&f, want, &action).unwrap());
        }
    }

    let p = problem("small_search.json");
    let b = p.braided.unwrap();
    let r: SearchReport = reparse(&run(&args("search-actions small_search.json"), "json").stdout);
    for datum in r.data.unwrap() {
        for spec in datum.k.values() {
            let k = read_cochain(spec, b.pi0().order(), Some(b.pi0()), b.pi1()).unwrap();
            assert_eq!(k.degree(), 2);
        }
        for spec in datum.theta.values() {
            let t = read_cochain(spec, b.pi0().order(), Some(b.pi0()), b.pi1()).unwrap();
            assert_eq!(t.degree(), 1);
        }
    }
}

#[test]
fn text_mode_agrees_on_exit_codes() {
    for case in cases() {
        let r = run(&case.args, "text");
        assert_eq!(r.code, case.exit, "{}", case.name);
        if r.code == 2 {
            assert!(r.stdout.is_empty() && r.stderr.starts_with("error: "), "{}", case.name);
        } else {
            assert!(!r.stdout.is_empty(), "{}", case.name);
        }
    }
}

#[test]
fn parse_errors_carry_positions() {
    let args = |f: &str| vec!["validate".to_string(), f.to_string()];
    for (file, line, column) in [("syntax_error.json", 3, 29), ("type_error.json", 2, 27), ("unknown_key.json", 3, 11)] {
        let e: ErrorReport = reparse(&run(&args(file), "json").stdout);
        assert_eq!(e.error.kind, "parse");
        assert_eq!((e.error.line, e.error.column), (Some(line), Some(column)), "{file}");
    }
    let e: ErrorReport = reparse(&run(&args("bad_element.json"), "json").stdout);
    assert_eq!(e.error.path.as_deref(), Some("$.omega.values[0][1]"));
}

#[test]
fn documented_examples() {
    let args = |s: &str| s.split_whitespace().map(String::from).collect::<Vec<_>>();
    let r = run(&args("validate trivial.json"), "text");
    assert_eq!(r.code, 0);
    assert!(String::from_utf8(r.stdout).unwrap().starts_with("all checks passed"));

    let r: ClassifyReport = reparse(&run(&args("classify semion.json"), "json").stdout);
    assert!(!r.liftable);
    assert_eq!(r.torsor_factors, vec![2]);

    let r: CohomologyReport = reparse(&run(&args("cohomology --degree 4 z2_by_z4_trivial.json"), "json").stdout);
    assert_eq!((r.factors, r.order), (vec![2], 2));
}

#[test]
fn missing_file_is_an_input_error() {
    let r = run(&["classify".to_string(), "no_such_file.json".to_string()], "json");
    assert_eq!(r.code, 2);
    let e: ErrorReport = reparse(&r.stdout);
    assert_eq!(e.error.kind, "io");
}
