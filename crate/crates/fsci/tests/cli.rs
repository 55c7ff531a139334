//! End-to-end checks of the command line: exit codes, the error log, flag
//! precedence over the config file, task scoping, and the shape of emitted
//! bundles.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fsci(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsci"))
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .env("SOURCE_DATE_EPOCH", "0")
        .args(args)
        .output()
        .unwrap()
}

fn file_names(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

#[test]
fn missing_codebook_exits_2_with_error_log_and_no_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("reports");
    let output = fsci(&[
        "baseline",
        "--countries",
        "tests/fixtures/countries.csv",
        "--observations",
        "tests/fixtures/observations.csv",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("no codebook input"));
    let log = fs::read_to_string(out.join("errors.log")).unwrap();
    assert!(log.contains("no codebook input"));
    assert_eq!(file_names(&out), ["errors.log"]);
}

#[test]
fn empty_observations_emit_header_only_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let empty = tmp.path().join("observations.csv");
    fs::write(&empty, "iso3,indicator_id,year,value\n").unwrap();
    let out = tmp.path().join("reports");
    let output = fsci(&[
        "all",
        "--config",
        "tests/fixtures/fsci.conf",
        "--observations",
        empty.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&output.stderr).contains("no country qualifies"));

    let read = |name: &str| fs::read_to_string(out.join(name)).unwrap();
    assert_eq!(read("baseline.csv"), "iso3,indicator_id,year,value\n");
    assert_eq!(read("baseline_vintage.csv"), "band_start,band_end,count,fraction\n");
    assert_eq!(read("resilience.csv"), "iso3,field,indicator_id,value,size,color\n");
    assert_eq!(read("coverage.csv"), "iso3,indicator_id,count\n");
}

#[test]
fn group_flag_narrows_the_bundle_and_the_task_scopes_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("reports");
    let output = fsci(&[
        "means",
        "--config",
        "tests/fixtures/fsci.conf",
        "--group",
        "income",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));
    assert_eq!(
        file_names(&out),
        ["distances_income.csv", "manifest.json", "means_income.csv", "summary_global.csv"]
    );
}

#[test]
fn min_year_flag_overrides_the_config_cutoff() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |extra: &[&str]| -> String {
        let out = tmp.path().join(extra.join("_").replace("--", ""));
        let mut args = vec![
            "baseline",
            "--config",
            "tests/fixtures/fsci.conf",
            "--output",
            out.to_str().unwrap(),
        ];
        args.extend(extra);
        let output = fsci(&args);
        assert_eq!(output.status.code(), Some(0));
        fs::read_to_string(out.join("baseline_dropped.csv")).unwrap()
    };

    let default_dropped = run(&[]);
    let strict_dropped = run(&["--min-year", "2020"]);
    assert_eq!(default_dropped.lines().count(), 2, "header plus one drop by default");
    assert!(!default_dropped.contains("DEU,pou"));
    assert!(strict_dropped.contains("DEU,pou,2008"));
    assert!(strict_dropped.contains("VNM,fertilizer_use,2013"));
    assert!(strict_dropped.lines().count() > default_dropped.lines().count());
}

#[test]
fn emitted_json_is_a_parse_reserialize_fixed_point() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("reports");
    let output = fsci(&[
        "all",
        "--config",
        "tests/fixtures/fsci.conf",
        "--format",
        "json",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));

    let names = file_names(&out);
    assert!(names.iter().all(|n| n.ends_with(".json")));
    assert!(names.len() > 10);
    for name in names {
        let bytes = fs::read(out.join(&name)).unwrap();
        let value: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        let mut reserialized = serde_json::to_string_pretty(&value).unwrap();
        reserialized.push('\n');
        assert_eq!(reserialized.into_bytes(), bytes, "{name} is not byte-stable");
    }
}
