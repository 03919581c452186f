use std::path::Path;
use std::process::{Command, Output};

fn gw(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gw"))
        .args(args)
        .arg("--cache")
        .arg(cache)
        .env_remove("GW_CACHE")
        .output()
        .expect("gw runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn plane_cubics_through_eight_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = gw(
        &dir.path().join("c.json"),
        &["invariant", "P2", "3l", "--points", "8"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "12\n");
}

#[test]
fn invariant_formats_and_zero_reasons() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let out = gw(&cache, &["invariant", "BlP2", "2e", "--insert", "p*pt"]);
    assert_eq!(stdout(&out), "0 (Lemma 1.1)\n");
    let out = gw(&cache, &["invariant", "BlP2", "3f-1e", "--points", "7", "--json"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["evaluation"]["status"], "exact");
    assert_eq!(v["evaluation"]["value"], "12/1");
    let out = gw(&cache, &["invariant", "P2", "2l", "--points", "5", "--csv"]);
    assert_eq!(
        stdout(&out),
        "query,status,value,reason\n\"Psi^P2_(2l,g=0)(pt,pt,pt,pt,pt)\",exact,1,\n"
    );
}

#[test]
fn verify_point_constraint_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = gw(
        &dir.path().join("c.json"),
        &["verify", "thm1-4", "--max-degree", "6", "--json"],
    );
    assert_eq!(out.status.code(), Some(0));
    let rows: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 6);
    for (d, row) in (1..).zip(&rows) {
        assert_eq!(row["params"], format!("d={d}"));
        assert!(row["verdict"].as_str().unwrap().starts_with("verified("));
        for key in ["rule", "gates", "source_value", "target_value"] {
            assert!(row.get(key).is_some(), "{key}");
        }
    }
}

#[test]
fn verify_vanishing_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = gw(&dir.path().join("c.json"), &["verify", "lemma1-1", "--r", "1..5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let zero_rows = text
        .lines()
        .filter(|l| l.starts_with("ok") && l.ends_with(" zero"))
        .count();
    assert_eq!(zero_rows, 5, "{text}");
}

#[test]
fn workers_do_not_change_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let one = gw(&dir.path().join("a.json"), &["verify", "all", "--json"]);
    let four = gw(
        &dir.path().join("b.json"),
        &["verify", "all", "--json", "--jobs", "4"],
    );
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_one_and_name_the_token() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let cases: [(&[&str], &str); 6] = [
        (&["invariant", "P2", "3q"], "`3q`"),
        (&["invariant", "X7", "l"], "`X7`"),
        (&["invariant", "BlP2", "f", "--insert", "zz"], "`zz`"),
        (&["verify", "thm9-9"], "`thm9-9`"),
        (&["verify", "lemma1-1", "--r", "4..2"], "`4..2`"),
        (
            &["transform", "thm1-5", "P3", "l", "--locus", "curve:genus=1"],
            "`genus=1`",
        ),
    ];
    for (args, token) in cases {
        let out = gw(&cache, args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(stderr(&out).contains(token), "{args:?}: {}", stderr(&out));
    }
    for args in [
        &["verify", "all", "--json", "--csv"][..],
        &["verify", "all", "--jobs", "0"],
        &["--max-degree", "0", "table", "kontsevich"],
    ] {
        assert_eq!(gw(&cache, args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(gw(&cache, &["--help"]).status.code(), Some(0));
}

#[test]
fn cache_export_import_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first.json");
    let table = gw(&first, &["table", "kontsevich", "--max-degree", "8"]);
    assert_eq!(table.status.code(), Some(0));
    let exported = dir.path().join("export.json");
    assert_eq!(
        gw(&first, &["cache", "export", exported.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );

    let fresh = dir.path().join("fresh.json");
    let out = gw(&fresh, &["cache", "import", exported.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let again = gw(&fresh, &["cache", "export"]);
    assert_eq!(again.stdout, std::fs::read(&exported).unwrap());
    // a warm table from the imported store matches the original run
    assert_eq!(
        gw(&fresh, &["table", "kontsevich", "--max-degree", "8"]).stdout,
        table.stdout
    );
}

#[test]
fn corrupt_cache_falls_back_to_cold_start() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    std::fs::write(&cache, "{ not json").unwrap();
    let out = gw(&cache, &["invariant", "P2", "4l", "--points", "11"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "620\n");
    assert!(stderr(&out).contains("warning"), "{}", stderr(&out));
}

#[test]
fn transform_reports() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.json");
    let out = gw(&cache, &["transform", "thm1-4", "P2", "3l", "--points", "8"]);
    let text = stdout(&out);
    assert!(text.contains("target:  Psi^BlP2_(3f-1e,g=0)"), "{text}");
    assert!(text.ends_with("verdict: verified(12)\n"), "{text}");
    let out = gw(
        &cache,
        &[
            "transform",
            "thm1-5",
            "M3",
            "a",
            "--ambient-c1",
            "2",
            "--insert",
            "a4",
            "--insert",
            "a4",
            "--locus",
            "curve:g0=0,c1=-1",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(
        stdout(&out).contains("verdict: gate-failed(g0 ≥ 1 or (g0 = 0 and C1(M)(C) ≥ 0))"),
        "{}",
        stdout(&out)
    );
}
