//! Behavior of the coconet binary: artifacts, exit codes, filters, and
//! reproducibility.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn coconet() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coconet"))
}

fn sample_listings(dir: &Path) -> PathBuf {
    let lines = [
        ("USA", "v1"),
        ("DEU", "v1"),
        ("USA", "v2"),
        ("DEU", "v2"),
        ("AUS", "v2"),
        ("USA", "v3"),
        ("DEU", "v3"),
        ("AUS", "v3"),
        ("BRA", "v3"),
        ("CAN", "v3"),
    ];
    let body: String = lines
        .iter()
        .map(|(c, v)| format!(r#"{{"date":"2014-11-15","country":"{c}","item_id":"{v}"}}"#) + "\n")
        .collect();
    let path = dir.join("listings.jsonl");
    fs::write(&path, body).unwrap();
    path
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

#[test]
fn pipeline_produces_all_artifacts_with_exact_weights() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_listings(dir.path());
    let out = dir.path().join("out");
    let result = run(coconet()
        .arg("pipeline")
        .arg("--input")
        .arg(&input)
        .arg("--out-dir")
        .arg(&out));
    assert!(result.status.success(), "{result:?}");

    let projection = fs::read_to_string(out.join("projection.tsv")).unwrap();
    assert!(projection.contains("DEU\tUSA\t7/4"), "{projection}");
    for artifact in [
        "backbone.tsv",
        "centrality.tsv",
        "openness.tsv",
        "netstats.tsv",
        "manifest.json",
    ] {
        assert!(out.join(artifact).exists(), "missing {artifact}");
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "pipeline");
    assert_eq!(manifest["parameters"]["significance"], 0.05);
    assert!(manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .any(|v| v == "projection.tsv"));
}

#[test]
fn missing_input_exits_2_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let result = run(coconet()
        .arg("pipeline")
        .arg("--input")
        .arg(dir.path().join("nope.jsonl"))
        .arg("--out-dir")
        .arg(&out));
    assert_eq!(result.status.code(), Some(2));
    assert!(!out.exists(), "no outputs may be written on failure");
}

#[test]
fn unknown_emit_format_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_listings(dir.path());
    let result = run(coconet()
        .arg("project")
        .arg("--input")
        .arg(&input)
        .arg("--out-dir")
        .arg(dir.path().join("out"))
        .arg("--emit")
        .arg("xml"));
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn analysis_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_listings(dir.path());
    // closeness on the (empty) strict backbone without component restrict
    let result = run(coconet()
        .arg("centrality")
        .arg("--input")
        .arg(&input)
        .arg("--out-dir")
        .arg(dir.path().join("out"))
        .arg("--significance")
        .arg("0.05"));
    assert_eq!(result.status.code(), Some(1), "{result:?}");
    let stderr = String::from_utf8_lossy(&result.stderr);
    assert!(stderr.contains("disconnected"), "{stderr}");
}

#[test]
fn category_filter_limits_the_build() {
    let dir = tempfile::tempdir().unwrap();
    let body = concat!(
        r#"{"date":"2015-01-01","country":"USA","item_id":"m1","category":"Music"}"#,
        "\n",
        r#"{"date":"2015-01-01","country":"DEU","item_id":"m1","category":"Music"}"#,
        "\n",
        r#"{"date":"2015-01-01","country":"USA","item_id":"n1","category":"News"}"#,
        "\n",
        r#"{"date":"2015-01-01","country":"FRA","item_id":"n1","category":"News"}"#,
        "\n",
    );
    let input = dir.path().join("mixed.jsonl");
    fs::write(&input, body).unwrap();
    let out = dir.path().join("music");
    let result = run(coconet()
        .arg("project")
        .arg("--input")
        .arg(&input)
        .arg("--category")
        .arg("Music")
        .arg("--out-dir")
        .arg(&out));
    assert!(result.status.success());
    let projection = fs::read_to_string(out.join("projection.tsv")).unwrap();
    assert!(projection.contains("DEU\tUSA\t1"));
    assert!(!projection.contains("FRA"));
}

#[test]
fn ingest_check_reports_rejects_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.jsonl");
    fs::write(
        &input,
        concat!(
            r#"{"date":"2015-01-01","country":"USA","item_id":"v1"}"#,
            "\n",
            r#"{"date":"2015-01-01","country":"usa","item_id":"v2"}"#,
            "\n",
        ),
    )
    .unwrap();
    let rejects = dir.path().join("rejects.tsv");
    let result = run(coconet()
        .arg("ingest-check")
        .arg("--input")
        .arg(&input)
        .arg("--rejects")
        .arg(&rejects));
    assert!(result.status.success());
    let stdout = String::from_utf8_lossy(&result.stdout);
    assert!(stdout.contains("records 1"), "{stdout}");
    assert!(stdout.contains("rejects 1"), "{stdout}");
    let tsv = fs::read_to_string(&rejects).unwrap();
    assert!(tsv.contains("2\t"), "{tsv}");

    // strict mode turns the reject fatal
    let result = run(coconet()
        .arg("ingest-check")
        .arg("--input")
        .arg(&input)
        .arg("--strict"));
    assert_eq!(result.status.code(), Some(1));
}

#[test]
fn synth_is_deterministic_and_feeds_the_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let result = run(coconet()
            .arg("synth")
            .arg("--blocks")
            .arg("left:4,right:4")
            .arg("--items-per-country")
            .arg("20")
            .arg("--intra")
            .arg("1.0")
            .arg("--inter")
            .arg("0.0")
            .arg("--bridge")
            .arg("0.5/0.5")
            .arg("--seed")
            .arg("9")
            .arg("--out-dir")
            .arg(out));
        assert!(result.status.success(), "{result:?}");
    }
    let la = fs::read(a.join("listings.jsonl")).unwrap();
    let lb = fs::read(b.join("listings.jsonl")).unwrap();
    assert_eq!(la, lb);
    assert_eq!(
        fs::read(a.join("truth.csv")).unwrap(),
        fs::read(b.join("truth.csv")).unwrap()
    );

    let out = dir.path().join("pipe");
    let result = run(coconet()
        .arg("pipeline")
        .arg("--input")
        .arg(a.join("listings.jsonl"))
        .arg("--significance")
        .arg("0.5")
        .arg("--out-dir")
        .arg(&out));
    assert!(result.status.success(), "{result:?}");
}

#[test]
fn synth_config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("synth.conf");
    fs::write(
        &config,
        "# planted demo\nblocks = left:4,right:4\nitems_per_country = 20\nintra_block_share = 1.0\ninter_block_share = 0.0\nbridge = 0.5/0.5\nseed = 9\n",
    )
    .unwrap();
    let from_file = dir.path().join("file");
    let result = run(coconet()
        .arg("synth")
        .arg("--config")
        .arg(&config)
        .arg("--out-dir")
        .arg(&from_file));
    assert!(result.status.success(), "{result:?}");

    let from_flags = dir.path().join("flags");
    run(coconet()
        .arg("synth")
        .arg("--blocks")
        .arg("left:4,right:4")
        .arg("--items-per-country")
        .arg("20")
        .arg("--intra")
        .arg("1.0")
        .arg("--inter")
        .arg("0.0")
        .arg("--bridge")
        .arg("0.5/0.5")
        .arg("--seed")
        .arg("9")
        .arg("--out-dir")
        .arg(&from_flags));
    assert_eq!(
        fs::read(from_file.join("listings.jsonl")).unwrap(),
        fs::read(from_flags.join("listings.jsonl")).unwrap()
    );
}

fn write_covariates(path: &Path, countries: &[String]) {
    let mut csv = String::from(
        "country,IDV,UAI,PDI,MAS,log10_gdp_pc,language_evc,internet_users,migration_degree\n",
    );
    for (i, c) in countries.iter().enumerate() {
        let x = i as f64;
        csv.push_str(&format!(
            "{c},{},{},{},{},{},{},{},{}\n",
            30.0 + 17.0 * (x * 0.7).sin().abs() + x * 0.01,
            40.0 + 20.0 * (x * 1.3).cos().abs() + x * 0.02,
            35.0 + 25.0 * (x * 2.1).sin().abs() + x * 0.03,
            45.0 + 15.0 * (x * 0.9).cos().abs() + x * 0.04,
            3.0 + (x * 0.37).sin().abs() + x * 0.001,
            (x * 1.7).sin().abs() * 0.8 + x * 0.002,
            20.0 + 70.0 * (x * 0.53).cos().abs() + x * 0.05,
            1.0 + (x * 0.11).sin().abs() * 40.0 + x * 0.06,
        ));
    }
    fs::write(path, csv).unwrap();
}

#[test]
fn regress_runs_from_pipeline_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let synth_dir = dir.path().join("synth");
    run(coconet()
        .arg("synth")
        .arg("--blocks")
        .arg("left:8,right:8")
        .arg("--items-per-country")
        .arg("40")
        .arg("--intra")
        .arg("0.9")
        .arg("--inter")
        .arg("0.1")
        .arg("--bridge")
        .arg("0.5/0.5")
        .arg("--heavy-tail")
        .arg("1.4")
        .arg("--seed")
        .arg("21")
        .arg("--out-dir")
        .arg(&synth_dir));
    let pipe = dir.path().join("pipe");
    let countries: Vec<String> = {
        let truth = fs::read_to_string(synth_dir.join("truth.csv")).unwrap();
        truth
            .lines()
            .skip(1)
            .map(|l| l.split(',').next().unwrap().to_owned())
            .collect()
    };
    let cov = dir.path().join("covariates.csv");
    write_covariates(&cov, &countries);

    let result = run(coconet()
        .arg("pipeline")
        .arg("--input")
        .arg(synth_dir.join("listings.jsonl"))
        .arg("--significance")
        .arg("0.5")
        .arg("--covariates")
        .arg(&cov)
        .arg("--extra-controls")
        .arg("migration_degree")
        .arg("--out-dir")
        .arg(&pipe));
    assert!(result.status.success(), "{result:?}");
    for outcome in ["betweenness", "closeness", "composite_openness"] {
        assert!(pipe.join(format!("regression_{outcome}.tsv")).exists());
        let table = fs::read_to_string(pipe.join(format!("regression_{outcome}.txt"))).unwrap();
        assert!(table.contains("Adjusted R^2"));
        assert!(table.contains("migration_degree"));
    }

    // the standalone regress subcommand consumes the written artifacts
    let reg = dir.path().join("reg");
    let result = run(coconet()
        .arg("regress")
        .arg("--scores")
        .arg(pipe.join("centrality.tsv"))
        .arg("--openness")
        .arg(pipe.join("openness.tsv"))
        .arg("--covariates")
        .arg(&cov)
        .arg("--outcome")
        .arg("closeness")
        .arg("--model")
        .arg("culture")
        .arg("--out-dir")
        .arg(&reg));
    assert!(result.status.success(), "{result:?}");
    let tsv = fs::read_to_string(reg.join("regression_closeness.tsv")).unwrap();
    assert!(tsv
        .lines()
        .skip(1)
        .all(|l| l.split('\t').nth(1) == Some("culture")));
}

#[test]
fn json_emission_is_valid_json() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_listings(dir.path());
    let out = dir.path().join("out");
    let result = run(coconet()
        .arg("pipeline")
        .arg("--input")
        .arg(&input)
        .arg("--emit")
        .arg("json")
        .arg("--out-dir")
        .arg(&out));
    assert!(result.status.success(), "{result:?}");
    for artifact in [
        "projection",
        "backbone",
        "centrality",
        "openness",
        "netstats",
    ] {
        let text = fs::read_to_string(out.join(format!("{artifact}.json"))).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert!(value.is_array(), "{artifact} should be a JSON array");
    }
}

#[test]
fn alpha_grid_writes_a_sweep_table() {
    let dir = tempfile::tempdir().unwrap();
    let input = sample_listings(dir.path());
    let out = dir.path().join("out");
    let result = run(coconet()
        .arg("pipeline")
        .arg("--input")
        .arg(&input)
        .arg("--alpha-grid")
        .arg("0,0.5,1")
        .arg("--significance")
        .arg("0.9")
        .arg("--out-dir")
        .arg(&out));
    assert!(result.status.success(), "{result:?}");
    let grid = fs::read_to_string(out.join("centrality_grid.tsv")).unwrap();
    for alpha in ["\t0\t", "\t0.5\t", "\t1\t"] {
        assert!(
            grid.contains(alpha),
            "missing alpha block {alpha:?}\n{grid}"
        );
    }
    // the primary table holds only the primary alpha
    let primary = fs::read_to_string(out.join("centrality.tsv")).unwrap();
    assert!(primary.contains("\t0.5\t"));
    assert!(!primary.contains("\t1\t"));
}
