use std::path::PathBuf;
use std::process::Command;

use dgtor::corpus::CORPUS;
use dgtor::session::{run_session, RunConfig, SessionFile};

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.expected.json"))
}

/// Set `DGTOR_BLESS=1` to rewrite the expected reports.
#[test]
fn corpus_reports_match_golden() {
    let bless = std::env::var_os("DGTOR_BLESS").is_some();
    for (name, text) in CORPUS {
        let report = run_session(text, &RunConfig::default()).unwrap();
        assert_eq!(report.exit_code(false), 0, "{name}");
        let json = report.to_json();
        let path = golden_path(name);
        if bless {
            std::fs::write(&path, &json).unwrap();
        } else {
            let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
            assert_eq!(json, expected, "{name} differs from golden");
        }
    }
}

#[test]
fn corpus_round_trips() {
    for (name, text) in CORPUS {
        let s = SessionFile::parse(text).unwrap();
        assert_eq!(SessionFile::parse(&s.to_json()).unwrap(), s, "{name}");
    }
}

fn dgtor(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dgtor")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn temp_session(name: &str, text: &str) -> String {
    let path = std::env::temp_dir().join(format!("dgtor-golden-{}-{name}.json", std::process::id()));
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn binary_matches_library() {
    let file = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus/square_zero.json");
    let (code, out, _) = dgtor(&["--output", "json", "run", file.to_str().unwrap()]);
    assert_eq!(code, 0);
    let expected = std::fs::read_to_string(golden_path("square_zero")).unwrap();
    assert_eq!(out.trim_end(), expected.trim_end());
}

#[test]
fn dangling_reference_exits_2() {
    let f = temp_session(
        "dangling",
        r#"{"field":"fp:101","definitions":[],"commands":[{"op":"homology","of":"nowhere"}]}"#,
    );
    let (code, out, err) = dgtor(&["run", &f]);
    assert_eq!(code, 2);
    assert!(
        out.contains("unknown reference `nowhere`") || err.contains("nowhere"),
        "{out}{err}"
    );
}

#[test]
fn empty_session_is_silent() {
    let f = temp_session("empty", r#"{"field":"fp:101","definitions":[],"commands":[]}"#);
    let (code, out, _) = dgtor(&["run", &f]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
}

#[test]
fn parse_error_exits_2() {
    let f = temp_session("broken", "{\"field\": \"fp:101\",\n \"definitions\": [");
    let (code, _, err) = dgtor(&["run", &f]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn explain_and_unknown_id() {
    let (code, out, _) = dgtor(&["explain", "star"]);
    assert_eq!(code, 0);
    assert!(out.contains("max(3, ⌊n/4⌋)"));
    let (code, _, _) = dgtor(&["explain", "no-such-theorem"]);
    assert_eq!(code, 2);
}

#[test]
fn ad_hoc_koszul() {
    let (code, out, _) = dgtor(&[
        "--output",
        "json",
        "koszul",
        "--vars",
        "x,y",
        "--relations",
        "x^2,x*y,y^2",
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("\"homology\""), "{out}");
}
