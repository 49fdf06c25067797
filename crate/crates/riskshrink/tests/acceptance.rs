//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use riskshrink::audio_io::{synthesize_voiced, write_wav};
use riskshrink::dsp::{analyze, overlap_add, window_coefficients, Dct, FrameGrid};
use riskshrink::experiment::{evaluate, write_evaluation_csv, EvaluateOptions};
use riskshrink::risk_lab::suite::{
    high_snr_checks, oracle_checks, stein_checks, unbiasedness_checks, CheckOutcome, VerifyOptions,
};
use riskshrink::{gain, GainRequest, ShrinkageKind};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn budget(name: &str, elapsed: Duration, limit_s: u64) -> Result<(), String> {
    if elapsed > Duration::from_secs(limit_s) {
        Err(format!("{name} took {:.1} s, limit {limit_s} s", elapsed.as_secs_f64()))
    } else {
        Ok(())
    }
}

fn summarize(rows: &[CheckOutcome], started: Instant, limit_s: u64) -> Verdict {
    let elapsed = started.elapsed();
    let failed: Vec<&CheckOutcome> = rows.iter().filter(|r| !r.passed).collect();
    if let Some(r) = failed.first() {
        return Err(format!(
            "{} of {} checks failed, first: {} lhs={} rhs={} tol={}",
            failed.len(),
            rows.len(),
            r.name,
            r.lhs,
            r.rhs,
            r.tolerance
        ));
    }
    budget("suite", elapsed, limit_s)?;
    Ok(format!("{} checks in {:.1} s", rows.len(), elapsed.as_secs_f64()))
}

fn stein_identities() -> Verdict {
    let t = Instant::now();
    let rows = stein_checks(&VerifyOptions::default()).map_err(|e| e.to_string())?;
    summarize(&rows, t, 30)
}

fn oracle_equivalence() -> Verdict {
    let t = Instant::now();
    let rows = oracle_checks(&VerifyOptions::default()).map_err(|e| e.to_string())?;
    if rows.len() != ShrinkageKind::ALL.len() {
        return Err(format!("expected one row per kind, got {}", rows.len()));
    }
    summarize(&rows, t, 60)
}

fn unbiasedness() -> Verdict {
    let t = Instant::now();
    let rows = unbiasedness_checks(&VerifyOptions::default()).map_err(|e| e.to_string())?;
    summarize(&rows, t, 120)
}

fn point_values() -> Verdict {
    // hand-evaluated closed forms at ξ = 10, α = 1
    let expected = [
        (ShrinkageKind::Mse, 0.9),
        (ShrinkageKind::We, 0.851789),
        (ShrinkageKind::LogMse, 1.0),
        (ShrinkageKind::Is, 0.874126),
        (ShrinkageKind::IsII, 0.735215),
        (ShrinkageKind::Cosh, 0.980581),
        (ShrinkageKind::Wcosh, 0.675737),
    ];
    let mut worst = 0.0f64;
    for (kind, e) in expected {
        let g = gain(kind, GainRequest::new(10.0, 1.0).unwrap());
        let err = (g - e).abs();
        if err > 1e-6 {
            return Err(format!("{kind}: {g} vs {e}"));
        }
        worst = worst.max(err);
        let g = gain(kind, GainRequest::new(1e9, 1.0).unwrap());
        if (g - 1.0).abs() > 1e-6 {
            return Err(format!("{kind} at ξ = 1e9: {g}"));
        }
    }
    Ok(format!("7 kinds, max deviation {worst:.2e}"))
}

fn high_snr_event() -> Verdict {
    let t = Instant::now();
    let rows = high_snr_checks(&VerifyOptions::default()).map_err(|e| e.to_string())?;
    summarize(&rows, t, 30)
}

fn naive_dct(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    (0..x.len())
        .map(|k| {
            let scale = if k == 0 { (1.0 / n).sqrt() } else { (2.0 / n).sqrt() };
            scale
                * x.iter()
                    .enumerate()
                    .map(|(i, v)| v * (PI * (2.0 * i as f64 + 1.0) * k as f64 / (2.0 * n)).cos())
                    .sum::<f64>()
        })
        .collect()
}

fn dsp_round_trip() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst_dct = 0.0f64;
    for n in 1..=64 {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let fast = Dct::new(n).forward(&x);
        for (a, b) in fast.iter().zip(naive_dct(&x)) {
            worst_dct = worst_dct.max((a - b).abs());
        }
    }
    if worst_dct > 1e-9 {
        return Err(format!("DCT deviates from direct sum by {worst_dct:e}"));
    }

    let mut worst_parseval = 0.0f64;
    let mut worst_ola = 0.0f64;
    for (len, frame_len, hop) in [(24000usize, 320usize, 80usize), (9001, 256, 64), (5000, 320, 160)] {
        let x: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..1.0)).collect();
        let dct = Dct::new(frame_len);
        let c = dct.forward(&x[..frame_len]);
        let et: f64 = x[..frame_len].iter().map(|v| v * v).sum();
        let ef: f64 = c.iter().map(|v| v * v).sum();
        worst_parseval = worst_parseval.max((et - ef).abs() / et);

        let grid = FrameGrid::new(len, frame_len, hop).map_err(|e| e.to_string())?;
        let w = window_coefficients(frame_len);
        let frames = analyze(&x, &grid, &w, &dct).map_err(|e| e.to_string())?;
        let time: Vec<Vec<f64>> = frames.iter().map(|f| dct.inverse(&f.coeffs)).collect();
        let y = overlap_add(&time, &grid, &w).map_err(|e| e.to_string())?;
        for (a, b) in y[frame_len..len - frame_len].iter().zip(&x[frame_len..len - frame_len]) {
            worst_ola = worst_ola.max((a - b).abs() / b.abs().max(1e-3));
        }
    }
    if worst_parseval > 1e-9 {
        return Err(format!("Parseval error {worst_parseval:e}"));
    }
    if worst_ola > 1e-6 {
        return Err(format!("round-trip error {worst_ola:e}"));
    }
    Ok(format!(
        "DCT {worst_dct:.1e}, Parseval {worst_parseval:.1e}, interior round-trip {worst_ola:.1e}"
    ))
}

fn artifact_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance")
}

fn end_to_end() -> Verdict {
    let t = Instant::now();
    let clean = synthesize_voiced(3.0, 0.25, 8000);
    let mut opts = EvaluateOptions::new("synthetic-voiced");
    opts.snr_list = vec![5.0, 10.0, 15.0];
    opts.seeds = 1;
    let rows = evaluate(&clean, None, &opts).map_err(|e| e.to_string())?;
    budget("end-to-end", t.elapsed(), 60)?;

    let dir = artifact_dir();
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let csv = dir.join("end_to_end.csv");
    let file = std::fs::File::create(&csv).map_err(|e| e.to_string())?;
    write_evaluation_csv(file, &rows).map_err(|e| e.to_string())?;

    for r in &rows {
        if !(r.snr_gain_db > 0.0 && r.ssnr_gain_db > 0.0) {
            return Err(format!(
                "{} at {} dB: SNR gain {:.2} dB, SSNR gain {:.2} dB",
                r.kind, r.snr_db, r.snr_gain_db, r.ssnr_gain_db
            ));
        }
    }
    let ssnr: Vec<String> = rows
        .iter()
        .filter(|r| r.snr_db >= 10.0)
        .map(|r| format!("{}@{}={:.2}", r.kind, r.snr_db, r.ssnr_gain_db))
        .collect();
    let min_snr = rows.iter().map(|r| r.snr_gain_db).fold(f64::INFINITY, f64::min);
    let min_ssnr = rows.iter().map(|r| r.ssnr_gain_db).fold(f64::INFINITY, f64::min);
    Ok(format!(
        "{} rows, min SNR gain {min_snr:.2} dB, min SSNR gain {min_ssnr:.2} dB, {:.1} s, csv {}; SSNR gains {}",
        rows.len(),
        t.elapsed().as_secs_f64(),
        csv.display(),
        ssnr.join(" ")
    ))
}

fn determinism() -> Verdict {
    let dir = artifact_dir();
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let clean = dir.join("determinism_clean.wav");
    write_wav(&clean, &synthesize_voiced(2.0, 0.25, 8000)).map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let out = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_riskshrink"))
            .args(["evaluate", "--clean"])
            .arg(&clean)
            .args(["--snr-list", "0,10", "--kinds", "all", "--seeds", "3", "--out-csv"])
            .arg(&out)
            .status()
            .map_err(|e| e.to_string())?;
        if !status.success() {
            return Err(format!("evaluate exited with {status}"));
        }
        std::fs::read(&out).map_err(|e| e.to_string())
    };
    let a = run("determinism_a.csv")?;
    let b = run("determinism_b.csv")?;
    if a != b {
        return Err("CSV outputs differ".into());
    }
    Ok(format!("two evaluate runs, {} identical bytes", a.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("stein identities", stein_identities),
        ("oracle equivalence", oracle_equivalence),
        ("unbiasedness", unbiasedness),
        ("shrinkage point values", point_values),
        ("high-snr event", high_snr_event),
        ("dsp round-trip", dsp_round_trip),
        ("end-to-end enhancement", end_to_end),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match verdict {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
