use std::path::Path;
use std::process::{Command, Output};

use bdspectra::zchain::export::import_complex;
use bdspectra::zchain::CohomologyGroup;
use serde_json::Value;

fn bdspectra(args: &[&str]) -> Output {
    bdspectra_in(args, None)
}

fn bdspectra_in(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bdspectra"));
    cmd.args(args).env_remove("BDSPECTRA_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("BDSPECTRA_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = bdspectra(&all);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn group(v: &Value) -> CohomologyGroup {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn cohomology_json_is_versioned_and_deterministic() {
    let args = ["cohomology", "--group", "A1xT1", "--field", "Fq:5"];
    let v = json(&args);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["spec"], "A1xT1");
    assert_eq!(
        group(&v["degrees"][1]["total"]),
        CohomologyGroup::new(1, &[4])
    );
    assert_eq!(v, json(&args));
    let a = bdspectra(&["cohomology", "--group", "G2", "--format", "json"]).stdout;
    let b = bdspectra(&["cohomology", "--group", "G2", "--format", "json"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn classifying_space_and_extensions() {
    let v = json(&["cohomology", "--group", "G2xG2", "--space", "BG"]);
    assert_eq!(v["space"], "BG");
    assert_eq!(
        group(&v["degrees"][4]["total"]),
        CohomologyGroup::new(0, &[2, 2])
    );
    let e = json(&[
        "extensions",
        "--group",
        "A1",
        "--by",
        "K3",
        "--kind",
        "central",
        "--field",
        "Fq:5",
    ]);
    assert_eq!(group(&e["group"]), CohomologyGroup::cyclic(4));
    let e = json(&[
        "extensions",
        "--group",
        "A2xT1",
        "--by",
        "K3",
        "--kind",
        "gerbal",
    ]);
    assert_eq!(e["generators"]["forms"].as_array().unwrap().len(), 3);
    let e = json(&[
        "extensions",
        "--group",
        "T1",
        "--by",
        "K2",
        "--field",
        "Fq:7",
    ]);
    assert_eq!(e["kind"], "central");
}

#[test]
fn forms_chow3_and_wsets() {
    let f = json(&["forms", "--group", "A3", "--degree", "3", "--on", "derived"]);
    assert_eq!(f["forms"].as_array().unwrap().len(), 1);
    assert_eq!(f["basis"].as_array().unwrap().len(), 3);
    let f = json(&["forms", "--group", "B2xT1", "--degree", "2"]);
    assert_eq!(f["forms"].as_array().unwrap().len(), 2);
    let c = json(&["chow3", "--group", "D4xB3"]);
    assert_eq!(c["count"], 2);
    assert_eq!(c["agree"], true);
    let w = json(&["wsets", "--group", "A2"]);
    let counts: Vec<u64> = w["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, [1, 2, 2, 1]);
    let table =
        String::from_utf8(bdspectra(&["wsets", "--group", "A2", "--level", "1"]).stdout).unwrap();
    assert!(table.contains("(1) (2)"), "{table}");
}

#[test]
fn usage_errors_exit_with_one() {
    for args in [
        &["cohomology", "--group", "Q3"][..],
        &["cohomology", "--group", "A2", "--field", "Fq:6"],
        &["cohomology", "--group", "A2", "--space", "XG"],
        &["frobnicate"],
        &["verify", "--battery", "tiny"],
        &["export-complex", "--group", "A2", "--column", "-1"],
        &[
            "export-complex",
            "--group",
            "A2",
            "--column",
            "-5",
            "--out",
            "/tmp/never-written",
        ],
    ] {
        let out = bdspectra(args);
        assert_eq!(
            out.status.code(),
            Some(1),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty(), "{args:?}");
    }
    assert_eq!(bdspectra(&["--help"]).status.code(), Some(0));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/b3.json");
    let args = ["cohomology", "--group", "B3", "--format", "json"];
    let stdout = bdspectra(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let out = bdspectra(&with_out);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    let names: Vec<_> = std::fs::read_dir(path.parent().unwrap()).unwrap().collect();
    assert_eq!(names.len(), 1, "no temporary files left behind");
}

#[test]
fn export_complex_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("g2-col");
    let args = [
        "export-complex",
        "--group",
        "G2",
        "--sheaf",
        "K3",
        "--column",
        "-2",
        "--out",
    ];
    let mut full = args.to_vec();
    full.push(target.to_str().unwrap());
    for _ in 0..2 {
        let out = bdspectra(&full);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let (c, manifest) = import_complex(&target).unwrap();
    assert_eq!(manifest.metadata["spec"], "G2");
    assert_eq!(manifest.metadata["p"], "-2");
    assert!(c.is_complex());
    assert_eq!(c.cohomology(3), CohomologyGroup::free(1));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn weyl_cache_is_written_and_reused() {
    let cache = tempfile::tempdir().unwrap();
    let args = ["cohomology", "--group", "F4xT2", "--format", "json"];
    let plain = bdspectra(&args).stdout;
    let first = bdspectra_in(&args, Some(cache.path()));
    assert_eq!(first.stdout, plain);
    let entry = cache.path().join("weyl-F4.json");
    let stored = std::fs::read_to_string(&entry).unwrap();
    assert!(stored.contains("\"longest_word\""));
    assert_eq!(bdspectra_in(&args, Some(cache.path())).stdout, plain);
    std::fs::write(&entry, "{ not json").unwrap();
    assert_eq!(bdspectra_in(&args, Some(cache.path())).stdout, plain);
    assert_eq!(std::fs::read_to_string(&entry).unwrap(), stored);
}

#[test]
fn verify_reports_each_criterion() {
    let out = bdspectra(&[
        "verify",
        "--battery",
        "standard",
        "--criterion",
        "1",
        "--criterion",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text.lines().filter(|l| l.starts_with("[PASS]")).count(),
        2,
        "{text}"
    );
    let v = json(&["verify", "--criterion", "5"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["results"][0]["id"], 5);
}

#[test]
fn guide_transcripts_match() {
    let guide = include_str!("../../../book/src/cli.md");
    let mut checked = 0;
    let mut lines = guide.lines().peekable();
    while let Some(line) = lines.next() {
        let Some(cmd) = line.strip_prefix("$ bdspectra ") else {
            continue;
        };
        let mut expected = String::new();
        while let Some(l) = lines.next_if(|l| !l.starts_with("```") && !l.starts_with('$')) {
            expected.push_str(l);
            expected.push('\n');
        }
        let args: Vec<&str> = cmd.split_whitespace().collect();
        let out = bdspectra(&args);
        assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "{cmd}");
        checked += 1;
    }
    assert!(checked >= 2);
}
