use std::path::Path;
use std::process::{Command, Output};

use beamlab::cli::{
    ClassifyRow, ComparisonRow, Document, Family, PhysicalityRow, PropagateRow, PtRow, ScanConfig,
    WitnessDocument,
};
use beamlab::family::SeparabilityVerdict;
use beamlab::Extended;

fn beamlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beamlab"))
        .args(args)
        .env_remove("BEAMLAB_GRID_POINTS")
        .output()
        .unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = beamlab(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("no column {name} in {header:?}"))
}

const TGSM: &[&str] = &[
    "--family", "tgsm", "-p", "w=1", "-p", "delta=1", "-p", "lambda=1", "-p", "R=inf",
];

fn with<'a>(base: &[&'a str], extra: &[&'a str]) -> Vec<&'a str> {
    base.iter().chain(extra).copied().collect()
}

#[test]
fn propagate_coherent_widths() {
    let text = stdout_of(&[
        "propagate",
        "--family",
        "coherent1d",
        "-p",
        "w=1",
        "-p",
        "lambda=1",
        "--z-range",
        "0:0.5:2",
    ]);
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["z", "w", "R", "guoy", "delta"]);
    let w = column(&header, "w");
    let widths: Vec<f64> = rows.iter().map(|r| r[w].parse().unwrap()).collect();
    assert_eq!(widths[0], 1.0);
    assert!((widths[1] - 2f64.sqrt()).abs() < 1e-15);
    assert_eq!(rows[0][column(&header, "R")], "inf");
}

#[test]
fn propagate_gsm_with_verification() {
    let text = stdout_of(&[
        "propagate",
        "--family",
        "gsm",
        "-p",
        "w=1",
        "-p",
        "delta=1",
        "-p",
        "lambda=1",
        "--z-range",
        "0:0.5:3",
        "--verify",
    ]);
    let (header, rows) = csv_rows(&text);
    let e = column(&header, "abs_error");
    let worst = rows
        .iter()
        .map(|r| r[e].parse::<f64>().unwrap())
        .fold(0.0, f64::max);
    assert!(worst < 1e-4);
}

#[test]
fn propagate_json_round_trips() {
    let text = stdout_of(&[
        "propagate",
        "--family",
        "gsm",
        "-p",
        "w=1",
        "-p",
        "delta=inf",
        "-p",
        "lambda=1",
        "--z-range",
        "0:1:3",
        "--format",
        "json",
    ]);
    let doc: Document<PropagateRow> = serde_json::from_str(&text).unwrap();
    assert_eq!(doc.config.family, Family::Gsm);
    assert_eq!(doc.rows.len(), 3);
    assert_eq!(doc.rows[0].curvature_radius, Extended::Infinite);
    assert_eq!(doc.rows[2].coherence_length, Extended::Infinite);
    assert_eq!(serde_json::to_string_pretty(&doc).unwrap() + "\n", text);
}

#[test]
fn unknown_family_is_a_config_error() {
    let out = beamlab(&["propagate", "--family", "gsmx", "--z-range", "0:1:2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("family"));
    assert!(out.stdout.is_empty());
}

#[test]
fn config_errors_exit_with_two() {
    let cases: &[&[&str]] = &[
        &[
            "propagate",
            "--family",
            "coherent1d",
            "-p",
            "w=1",
            "-p",
            "lambda=1",
        ],
        &[
            "propagate",
            "--family",
            "coherent1d",
            "-p",
            "w=-1",
            "-p",
            "lambda=1",
            "--z-range",
            "0:1:2",
        ],
        &[
            "propagate",
            "--family",
            "coherent1d",
            "-p",
            "bogus=1",
            "--z-range",
            "0:1:2",
        ],
        &[
            "physicality",
            "--family",
            "gsm",
            "-p",
            "w=1",
            "-p",
            "delta=1",
            "-p",
            "lambda=1",
        ],
        &[
            "witness",
            "--family",
            "elliptic2d",
            "-p",
            "w1=2",
            "-p",
            "w2=1",
            "--z-range",
            "0:0:1",
        ],
        &["classify", "--config", "/nonexistent/config.json"],
        &["frobnicate"],
    ];
    for args in cases {
        assert_eq!(beamlab(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn aliasing_guard_exits_with_three() {
    let out = Command::new(env!("CARGO_BIN_EXE_beamlab"))
        .args([
            "propagate",
            "--family",
            "coherent1d",
            "-p",
            "w=1",
            "-p",
            "lambda=1",
            "--z-range",
            "0:5:3",
            "--verify",
        ])
        .env("BEAMLAB_GRID_POINTS", "16")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("numerical guard"));
}

#[test]
fn bad_grid_override_is_a_config_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_beamlab"))
        .args([
            "propagate",
            "--family",
            "coherent1d",
            "-p",
            "w=1",
            "-p",
            "lambda=1",
            "--z-range",
            "0:1:2",
            "--verify",
        ])
        .env("BEAMLAB_GRID_POINTS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn witness_reports() {
    let doc: WitnessDocument = serde_json::from_str(&stdout_of(&[
        "witness",
        "--family",
        "elliptic2d",
        "-p",
        "w1=2",
        "-p",
        "w2=1",
        "-p",
        "theta=0.7853981633974483",
    ]))
    .unwrap();
    let report = beamlab::witness::WitnessReport::from(doc.report);
    assert!((report.effective_coherence_ratio - 0.75).abs() < 1e-15);
    assert!(report.entangled);
    assert!(doc.scan.len() >= 3);

    let text = stdout_of(&[
        "witness",
        "--family",
        "elliptic2d",
        "-p",
        "w1=1.5",
        "-p",
        "w2=1.5",
        "-p",
        "theta=0.3",
    ]);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["report"]["effective_delta"], serde_json::Value::Null);
    assert_eq!(value["report"]["effective_delta_infinite"], true);
    assert_eq!(value["report"]["entangled"], false);
    let doc: WitnessDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(
        beamlab::witness::WitnessReport::from(doc.report).effective_delta,
        Extended::Infinite
    );

    let axis: WitnessDocument = serde_json::from_str(&stdout_of(&[
        "witness",
        "--family",
        "elliptic2d",
        "-p",
        "w1=2",
        "-p",
        "w2=1",
        "-p",
        "theta=0",
    ]))
    .unwrap();
    assert!(!axis.report.entangled);
}

#[test]
fn witness_numeric_rerun_agrees() {
    let doc: WitnessDocument = serde_json::from_str(&stdout_of(&[
        "witness",
        "--family",
        "elliptic2d",
        "-p",
        "w1=2",
        "-p",
        "w2=1",
        "-p",
        "theta=0.7853981633974483",
        "--numeric",
    ]))
    .unwrap();
    let numeric =
        beamlab::witness::WitnessReport::from(doc.numeric_report.expect("numeric report"));
    assert!((numeric.effective_coherence_ratio - 0.75).abs() < 1e-3 * 0.75);
}

#[test]
fn tgsm_physicality_scan_flips_after_the_bound() {
    let args = with(
        TGSM,
        &[
            "--scan-axis",
            "u",
            "--scan-range",
            "0:2:2001",
            "--format",
            "json",
        ],
    );
    let doc: Document<PhysicalityRow> =
        serde_json::from_str(&stdout_of(&with(&["physicality"], &args))).unwrap();
    assert_eq!(doc.rows.len(), 2001);
    for row in &doc.rows {
        let u = row.scan_value.unwrap();
        assert_eq!(row.physical, u <= 1.0, "u = {u}");
        assert_eq!(row.twist_bound, Some(1.0));
    }
    assert_eq!(doc.rows[1000].scan_value, Some(1.0));
    assert!(doc.rows[1000].physical);
}

#[test]
fn curv_physicality_scan_is_all_physical() {
    let args = [
        "--family", "curv", "-p", "w=1", "-p", "delta=1", "-p", "lambda=1", "-p", "R=inf",
    ];
    let text = stdout_of(&with(
        &["physicality"],
        &with(&args, &["--scan-axis", "u", "--scan-range", "0:2:201"]),
    ));
    let (header, rows) = csv_rows(&text);
    let p = column(&header, "physical");
    assert_eq!(rows.len(), 201);
    assert!(rows.iter().all(|r| r[p] == "true"));
}

#[test]
fn physicality_verify_adds_kernel_check() {
    let args = with(
        TGSM,
        &[
            "--scan-axis",
            "u",
            "--scan-range",
            "0.5:1.5:3",
            "--verify",
            "--format",
            "json",
        ],
    );
    let doc: Document<PhysicalityRow> =
        serde_json::from_str(&stdout_of(&with(&["physicality"], &args))).unwrap();
    let psd: Vec<bool> = doc.rows.iter().map(|r| r.kernel.unwrap().psd).collect();
    assert_eq!(psd, [true, true, false]);
}

#[test]
fn classify_examples() {
    let verdict = |family: &str, u: &str| {
        let u = format!("u={u}");
        let args = [
            "classify", "--family", family, "-p", "w=1", "-p", "delta=1", "-p", "lambda=1", "-p",
            "R=inf", "-p", &u,
        ];
        let doc: Document<ClassifyRow> = serde_json::from_str(&stdout_of(&args)).unwrap();
        doc.rows[0].report.verdict
    };
    assert_eq!(verdict("tgsm", "0.5"), SeparabilityVerdict::Separable);
    assert_eq!(verdict("curv", "2"), SeparabilityVerdict::Entangled);
    assert_eq!(verdict("tgsm", "2"), SeparabilityVerdict::Unphysical);
}

#[test]
fn pt_twin_matches_exactly() {
    let args = with(&["pt"], &with(TGSM, &["-p", "u=0.7", "-p", "R=2"]));
    let doc: Document<PtRow> = serde_json::from_str(&stdout_of(&args)).unwrap();
    assert_eq!(doc.rows[0].twin_max_abs_diff, Some(0.0));
}

#[test]
fn compare_oracle_rows_agree() {
    let args = with(
        &["compare-oracle", "--format", "json"],
        &with(TGSM, &["-p", "u=0.5"]),
    );
    let doc: Document<ComparisonRow> = serde_json::from_str(&stdout_of(&args)).unwrap();
    assert!(!doc.rows.is_empty());
    for row in &doc.rows {
        let scale = row.closed_form.abs().max(1.0);
        assert!(row.abs_error <= 1e-3 * scale, "{row:?}");
    }
    let seeded = [
        "compare-oracle",
        "--family",
        "gsm",
        "--seed",
        "7",
        "--draws",
        "2",
        "--z-range",
        "0:1:2",
        "--format",
        "json",
    ];
    let doc: Document<ComparisonRow> = serde_json::from_str(&stdout_of(&seeded)).unwrap();
    assert!(doc.rows.iter().all(|r| r.abs_error < 1e-4));
}

#[test]
fn identical_configs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    // The JSON document echoes the output path, so reruns target the same file.
    let run = |name: &str, seed: &str, extra: &[&str]| {
        let path = dir.path().join(name);
        let out = path.to_str().unwrap().to_string();
        let args = with(
            &[
                "compare-oracle",
                "--family",
                "tgsm",
                "--seed",
                seed,
                "--draws",
                "2",
                "--out",
                &out,
            ],
            extra,
        );
        assert_eq!(beamlab(&args).status.code(), Some(0));
        let bytes = std::fs::read(&path).unwrap();
        std::fs::remove_file(&path).unwrap();
        bytes
    };
    assert_eq!(run("a.csv", "11", &[]), run("a.csv", "11", &[]));
    let json = ["--format", "json"];
    assert_eq!(run("a.json", "11", &json), run("a.json", "11", &json));
    assert_ne!(run("a.csv", "11", &[]), run("a.csv", "12", &[]));
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("scan.json");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{
  "family": "tgsm",
  "parameters": {"w": 1, "delta": 1, "lambda": 1, "R": "inf", "u": 0.5},
  "output_format": "json"
}"#,
    );
    let doc: Document<ClassifyRow> =
        serde_json::from_str(&stdout_of(&["classify", "--config", &config])).unwrap();
    assert_eq!(doc.rows[0].report.verdict, SeparabilityVerdict::Separable);
    assert_eq!(doc.config.parameters["twist"], Extended::Finite(0.5));

    let doc: Document<ClassifyRow> = serde_json::from_str(&stdout_of(&[
        "classify", "--config", &config, "-p", "u=2", "--family", "curv",
    ]))
    .unwrap();
    assert_eq!(doc.rows[0].report.verdict, SeparabilityVerdict::Entangled);

    let out = dir.path().join("out.csv");
    let out = out.to_str().unwrap();
    assert!(
        stdout_of(&["classify", "--config", &config, "--format", "csv", "--out", out]).is_empty()
    );
    assert!(std::fs::read_to_string(out).unwrap().starts_with("verdict"));
}

#[test]
fn config_file_rejects_unknown_fields() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"family": "tgsm", "parameters": {}, "colour": "blue"}"#,
    );
    assert_eq!(
        beamlab(&["classify", "--config", &config]).status.code(),
        Some(2)
    );
}

#[test]
fn emitted_config_parses_back() {
    let text = stdout_of(&with(&["classify"], &with(TGSM, &["-p", "u=0.25"])));
    let doc: Document<ClassifyRow> = serde_json::from_str(&text).unwrap();
    let again = ScanConfig::from_json(&serde_json::to_string(&doc.config).unwrap()).unwrap();
    assert_eq!(again, doc.config);
}
