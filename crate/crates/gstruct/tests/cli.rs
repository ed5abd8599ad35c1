use std::path::Path;
use std::process::{Command, Output};

use gstruct::builtin::BUILTINS;
use gstruct::{parse_manifest, run, Backend, Report};
use proptest::prelude::*;

fn gstruct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gstruct")).args(args).output().unwrap()
}

fn manifest_file(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn builtin_path(name: &str) -> String {
    format!("{}/manifests/{name}.gman", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn examples_match_golden() {
    for format in ["text", "machine"] {
        let out = gstruct(&["run", "--examples", "--format", format]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert_eq!(stdout.lines().filter(|l| l.ends_with("matches golden")).count(), 4);
    }
}

#[test]
fn run_prints_the_report() {
    let out = gstruct(&["run", &builtin_path("heisenberg")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), BUILTINS[0].golden_text);
}

#[test]
fn out_writes_machine_report() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let out = gstruct(&["run", &builtin_path("mk"), "--format", "machine", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&target).unwrap();
    assert_eq!(written, BUILTINS[1].golden_machine);
    assert!(!written.contains('\r'));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_syntax = manifest_file(dir.path(), "bad.gman", "manifold a\ndim 8\n");
    let out = gstruct(&["run", &bad_syntax]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.gman:2:5"));

    let header = "manifold a\ndim 7\ncoframe e0 e1 e2 e3 e4 e5 e6\n";
    let not_closed = manifest_file(dir.path(), "dd.gman", &format!("{header}d e0 = 1 e1^e2\nd e1 = 1 e3^e4\n"));
    let out = gstruct(&["run", &not_closed]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("d(d e0)"));

    let not_integrable = manifest_file(
        dir.path(),
        "ni.gman",
        &format!("{header}d e1 = -1 e4^e5\nd e6 = -1 e0^e5\nhypersurface X normal +e1 theta 0\n"),
    );
    let out = gstruct(&["run", &not_integrable]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("a / X"));

    assert_eq!(gstruct(&["run"]).status.code(), Some(1));
    assert_eq!(gstruct(&["--version"]).status.code(), Some(0));
    assert_eq!(gstruct(&["run", "--help"]).status.code(), Some(0));
    assert_eq!(gstruct(&["run", &builtin_path("s6"), "--eps", "0"]).status.code(), Some(1));
}

#[test]
fn float_backend_and_env_tolerance() {
    let out = Command::new(env!("CARGO_BIN_EXE_gstruct"))
        .args(["run", &builtin_path("heisenberg"), "--backend", "float", "--format", "machine"])
        .env("GSTRUCT_EPS", "1e-12")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let float = Report::from_machine(&String::from_utf8(out.stdout).unwrap()).unwrap();
    let exact = Report::from_machine(BUILTINS[0].golden_machine).unwrap();
    assert_eq!(float.backend, "float");
    let classes = |r: &Report| r.manifolds[0].hypersurfaces.iter().map(|h| h.class.clone()).collect::<Vec<_>>();
    assert_eq!(classes(&float), classes(&exact));
    assert_eq!(gstruct(&["run", &builtin_path("s6"), "--eps", "abc"]).status.code(), Some(1));
}

#[test]
fn reports_are_deterministic() {
    for b in &BUILTINS {
        let m = b.manifest();
        let first = run(std::slice::from_ref(&m), Backend::Exact).unwrap();
        let second = run(&[m], Backend::Exact).unwrap();
        assert_eq!(first.to_machine(), second.to_machine());
        assert_eq!(first.to_text(), second.to_text());
    }
}

#[test]
fn multi_manifold_reports_roundtrip() {
    let manifests: Vec<_> = BUILTINS.iter().map(|b| b.manifest()).collect();
    let report = run(&manifests, Backend::Exact).unwrap();
    let parsed = Report::from_machine(&report.to_machine()).unwrap();
    assert_eq!(parsed, report);
    assert_eq!(parsed.to_text(), BUILTINS.iter().fold(String::from("gstruct report, backend exact\n"), |mut acc, b| {
        acc.push_str(b.golden_text.split_once('\n').unwrap().1);
        acc
    }));
}

const WORDS: &[&str] = &[
    "manifold", "dim", "coframe", "param", "d", "inject", "rbar", "dphi", "dstarphi", "hypersurface", "normal", "theta",
    "cs", "B", "=", "+", "-", "0", "1", "-1", "3/5", "4/5", "1/0", "pi/2", "k", "2*k", "e0", "e1", "e3", "+e3", "-e0",
    "e4^e5", "e0^e5", "e1^e1", "e0^e1^e2^e3", "#", "7", "x", "",
];

fn token_line() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(WORDS), 0..8).prop_map(|w| w.join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_token_streams_never_panic(lines in prop::collection::vec(token_line(), 0..12), prefix in any::<bool>()) {
        let mut text = String::new();
        if prefix {
            text.push_str("manifold f\ndim 7\ncoframe e0 e1 e2 e3 e4 e5 e6\nparam k = 1\n");
        }
        text.push_str(&lines.join("\n"));
        if let Ok(m) = parse_manifest(&text) {
            let _ = run(&[m], Backend::Exact);
        }
    }

    #[test]
    fn random_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let _ = parse_manifest(&String::from_utf8_lossy(&bytes));
    }

    #[test]
    fn structure_equations_run_or_fail_cleanly(
        entries in prop::collection::vec((0usize..7, 0usize..7, 0usize..7, -2i64..3), 0..4),
        normal in 0usize..7,
    ) {
        let mut text = String::from("manifold f\ndim 7\ncoframe e0 e1 e2 e3 e4 e5 e6\n");
        let mut seen = std::collections::BTreeSet::new();
        for (g, i, j, c) in entries {
            if i != j && seen.insert(g) {
                text.push_str(&format!("d e{g} = {c} e{i}^e{j}\n"));
            }
        }
        text.push_str(&format!("hypersurface h normal +e{normal} theta cs 3/5 4/5\n"));
        let m = parse_manifest(&text).unwrap();
        if let Ok(report) = run(&[m], Backend::Exact) {
            prop_assert!(gstruct::engine::all_rules_agree(&report));
            prop_assert_eq!(Report::from_machine(&report.to_machine()).unwrap(), report);
        }
    }
}
