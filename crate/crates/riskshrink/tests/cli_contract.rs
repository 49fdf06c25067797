use std::path::Path;
use std::process::{Command, Output};

use riskshrink::audio_io::{synthesize_voiced, write_wav, AudioBuffer};

fn riskshrink(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riskshrink"))
        .args(args)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_fixture(dir: &Path) -> String {
    let path = dir.join("clean.wav");
    write_wav(&path, &synthesize_voiced(1.5, 0.2, 8000)).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&riskshrink(&["--help"])), 0);
    for sub in ["denoise", "evaluate", "curves", "verify"] {
        assert_eq!(code(&riskshrink(&[sub, "--help"])), 0, "{sub}");
    }
    assert_eq!(code(&riskshrink(&[])), 2);
    assert_eq!(code(&riskshrink(&["frobnicate"])), 2);
    assert_eq!(code(&riskshrink(&["denoise", "--out", "x.wav"])), 2);
    assert_eq!(code(&riskshrink(&["curves", "--bogus"])), 2);
    assert_eq!(code(&riskshrink(&["verify", "--samples", "0"])), 2);
    assert_eq!(code(&riskshrink(&["verify", "--grid-step", "0.5"])), 2);
    assert_eq!(code(&riskshrink(&["curves", "--xi-db-range", "5:1:1"])), 2);
    assert_eq!(
        code(&riskshrink(&["evaluate", "--clean", "x.wav", "--kinds", "nope"])),
        2
    );
}

#[test]
fn denoise_runs_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let src = write_fixture(dir.path());
    let dst = dir.path().join("out.wav");
    let out = riskshrink(&[
        "denoise",
        "--in",
        &src,
        "--out",
        dst.to_str().unwrap(),
        "--kind",
        "wcosh",
        "--alpha",
        "2",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["kind"], "wcosh");
    assert_eq!(v["alpha"], 2.0);
    assert!(dst.exists());

    let missing = dir.path().join("missing.wav");
    let out = riskshrink(&[
        "denoise",
        "--in",
        missing.to_str().unwrap(),
        "--out",
        dst.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let src = write_fixture(dir.path());
    let dst = dir.path().join("out.wav");
    let cfg = dir.path().join("riskshrink.cfg");
    std::fs::write(&cfg, "# test\nkind=is\nalpha=1.2\n").unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec![
            "denoise",
            "--in",
            &src,
            "--out",
            dst.to_str().unwrap(),
            "--config",
            cfg.to_str().unwrap(),
        ];
        args.extend_from_slice(extra);
        riskshrink(&args)
    };
    let v: serde_json::Value = serde_json::from_str(stdout(&run(&[])).trim()).unwrap();
    assert_eq!((v["kind"].as_str(), v["alpha"].as_f64()), (Some("is"), Some(1.2)));
    let v: serde_json::Value = serde_json::from_str(stdout(&run(&["--alpha", "3", "--kind", "cosh"])).trim()).unwrap();
    assert_eq!((v["kind"].as_str(), v["alpha"].as_f64()), (Some("cosh"), Some(3.0)));

    std::fs::write(&cfg, "unknown_key=1\n").unwrap();
    assert_eq!(code(&run(&[])), 2);
}

#[test]
fn curves_grid_and_values() {
    let out = riskshrink(&["curves", "--alpha", "1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 102);
    assert_eq!(lines[0], "xi_db,mse,we,log-mse,is,is-ii,cosh,wcosh");
    let row10: Vec<f64> = lines[41].split(',').map(|s| s.parse().unwrap()).collect();
    assert_eq!(row10[0], 10.0);
    let expected = [0.9, 0.851789, 1.0, 0.874126, 0.735215, 0.980581, 0.675737];
    for (g, e) in row10[1..].iter().zip(expected) {
        assert!((g - e).abs() < 1e-6, "{g} vs {e}");
    }
    let last: Vec<f64> = lines[101].split(',').map(|s| s.parse().unwrap()).collect();
    assert!(last[1..].iter().all(|g| (g - 1.0).abs() < 1e-3));
}

#[test]
fn curves_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let out = riskshrink(&["curves", "--xi-db-range", "-5:5:1", "--out-csv", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(csv).unwrap().lines().count(), 12);
}

#[test]
fn evaluate_cardinality_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let clean = write_fixture(dir.path());
    let csv = |name: &str| dir.path().join(name).to_str().unwrap().to_string();

    let out = riskshrink(&[
        "evaluate",
        "--clean",
        &clean,
        "--snr-list",
        "10",
        "--kinds",
        "mse",
        "--seeds",
        "1",
        "--out-csv",
        &csv("a.csv"),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(csv("a.csv")).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.starts_with("file,snr_db,kind,alpha,seeds,input_snr_db,output_snr_db,snr_gain_db,"));

    let args = |out: &str| {
        vec![
            "evaluate".to_string(),
            "--clean".into(),
            clean.clone(),
            "--snr-list".into(),
            "-5,10".into(),
            "--kinds".into(),
            "all".into(),
            "--seeds".into(),
            "2".into(),
            "--per-seed".into(),
            "--out-csv".into(),
            out.to_string(),
        ]
    };
    let run = |out: &str| {
        let a = args(out);
        riskshrink(&a.iter().map(String::as_str).collect::<Vec<_>>())
    };
    assert_eq!(code(&run(&csv("b.csv"))), 0);
    assert_eq!(code(&run(&csv("c.csv"))), 0);
    let b = std::fs::read(csv("b.csv")).unwrap();
    assert_eq!(b, std::fs::read(csv("c.csv")).unwrap());
    // 7 kinds per (snr, seed)
    assert_eq!(String::from_utf8(b).unwrap().lines().count(), 1 + 2 * 2 * 7);
}

#[test]
fn evaluate_with_noise_file() {
    let dir = tempfile::tempdir().unwrap();
    let clean = write_fixture(dir.path());
    let noise = dir.path().join("noise.wav");
    let samples: Vec<f64> = (0..20000)
        .map(|i| 0.1 * ((i * 7919 % 1000) as f64 / 500.0 - 1.0))
        .collect();
    write_wav(&noise, &AudioBuffer::new(samples, 8000).unwrap()).unwrap();
    let out = riskshrink(&[
        "evaluate",
        "--clean",
        &clean,
        "--noise",
        noise.to_str().unwrap(),
        "--kinds",
        "is,cosh",
        "--seeds",
        "3",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(4) == Some("3")));
}

#[test]
fn verify_default_run_passes() {
    let out = riskshrink(&["verify"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().starts_with("check"));
    assert!(text.trim_end().ends_with("0 failed"));
}
