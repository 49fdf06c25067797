//! Frame-by-frame denoiser: DCT analysis, VAD-gated noise tracking,
//! risk-optimal shrinkage and overlap-add resynthesis.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::audio_io::{read_wav, write_wav, AudioBuffer, DEFAULT_SAMPLE_RATE};
use crate::dsp::{analyze, overlap_add, window_coefficients, Dct, DctFrame, FrameGrid};
use crate::error::{config, Error, Result};
use crate::noise_tracking::{
    self, Hangover, Hypothesis, DEFAULT_BETA, DEFAULT_ETA, DEFAULT_INIT_FRAMES, DEFAULT_VAD_HANGOVER,
    DEFAULT_VAD_THRESHOLD,
};
use crate::shrinkage::{apply_shrinkage, ShrinkageKind, DEFAULT_ALPHA};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenoiserConfig {
    pub sample_rate: u32,
    pub frame_ms: f64,
    pub overlap_fraction: f64,
    pub kind: ShrinkageKind,
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
    pub init_noise_frames: usize,
    pub vad_threshold: f64,
    pub vad_hangover: usize,
}

impl Default for DenoiserConfig {
    fn default() -> Self {
        Self {
            sample_rate: DEFAULT_SAMPLE_RATE,
            frame_ms: 40.0,
            overlap_fraction: 0.75,
            kind: ShrinkageKind::Mse,
            alpha: DEFAULT_ALPHA,
            beta: DEFAULT_BETA,
            eta: DEFAULT_ETA,
            init_noise_frames: DEFAULT_INIT_FRAMES,
            vad_threshold: DEFAULT_VAD_THRESHOLD,
            vad_hangover: DEFAULT_VAD_HANGOVER,
        }
    }
}

fn integral(v: f64, what: &str) -> Result<usize> {
    let r = v.round();
    if !(r >= 1.0) || (v - r).abs() > 1e-9 * r.max(1.0) {
        return Err(config(format!(
            "{what} must be a positive whole number of samples, got {v}"
        )));
    }
    Ok(r as usize)
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| config(format!("invalid value '{value}' for '{key}'")))
}

impl DenoiserConfig {
    pub fn with_kind(kind: ShrinkageKind) -> Self {
        Self {
            kind,
            ..Self::default()
        }
    }

    pub fn frame_len(&self) -> Result<usize> {
        integral(f64::from(self.sample_rate) * self.frame_ms / 1000.0, "frame length")
    }

    pub fn hop(&self) -> Result<usize> {
        let frame_len = self.frame_len()?;
        integral(frame_len as f64 * (1.0 - self.overlap_fraction), "hop")
    }

    /// Fewest samples the denoiser accepts.
    pub fn min_signal_len(&self) -> Result<usize> {
        Ok(self.init_noise_frames * self.hop()? + self.frame_len()?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_rate == 0 {
            return Err(config("sample rate must be positive"));
        }
        if !(0.0..1.0).contains(&self.overlap_fraction) {
            return Err(config(format!(
                "overlap must lie in [0, 1), got {}",
                self.overlap_fraction
            )));
        }
        self.hop()?;
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(config(format!("alpha must be positive, got {}", self.alpha)));
        }
        for (name, v) in [("beta", self.beta), ("eta", self.eta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(config(format!("{name} must lie in [0, 1], got {v}")));
            }
        }
        if self.init_noise_frames == 0 {
            return Err(config("at least one noise initialisation frame is required"));
        }
        if !self.vad_threshold.is_finite() {
            return Err(config("VAD threshold must be finite"));
        }
        Ok(())
    }

    /// Sets one field from its `key=value` spelling. Dashes and underscores
    /// in keys are interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let k = key.trim().replace('-', "_");
        match k.as_str() {
            "sample_rate" => self.sample_rate = parse_value(key, value)?,
            "frame_ms" => self.frame_ms = parse_value(key, value)?,
            "overlap_fraction" | "overlap" => self.overlap_fraction = parse_value(key, value)?,
            "kind" => self.kind = value.parse()?,
            "alpha" => self.alpha = parse_value(key, value)?,
            "beta" => self.beta = parse_value(key, value)?,
            "eta" => self.eta = parse_value(key, value)?,
            "init_noise_frames" | "init_frames" => self.init_noise_frames = parse_value(key, value)?,
            "vad_threshold" => self.vad_threshold = parse_value(key, value)?,
            "vad_hangover" => self.vad_hangover = parse_value(key, value)?,
            _ => return Err(config(format!("unknown configuration key '{key}'"))),
        }
        Ok(())
    }

    /// Applies `key=value` lines on top of `self`. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn apply_kv(&mut self, text: &str) -> Result<()> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| config(format!("line {}: expected key=value", lineno + 1)))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "sample_rate={}", self.sample_rate);
        let _ = writeln!(s, "frame_ms={}", self.frame_ms);
        let _ = writeln!(s, "overlap_fraction={}", self.overlap_fraction);
        let _ = writeln!(s, "kind={}", self.kind);
        let _ = writeln!(s, "alpha={}", self.alpha);
        let _ = writeln!(s, "beta={}", self.beta);
        let _ = writeln!(s, "eta={}", self.eta);
        let _ = writeln!(s, "init_noise_frames={}", self.init_noise_frames);
        let _ = writeln!(s, "vad_threshold={}", self.vad_threshold);
        let _ = writeln!(s, "vad_hangover={}", self.vad_hangover);
        s
    }
}

/// Enhanced samples plus per-run counters.
#[derive(Debug, Clone, PartialEq)]
pub struct DenoiseOutput {
    pub samples: Vec<f64>,
    pub frames: usize,
    pub speech_frames: usize,
}

impl DenoiseOutput {
    pub fn speech_percent(&self) -> f64 {
        if self.frames == 0 {
            0.0
        } else {
            100.0 * self.speech_frames as f64 / self.frames as f64
        }
    }
}

/// A configured denoiser. Construction precomputes the window and the DCT
/// basis, so one instance can process many signals.
#[derive(Debug, Clone)]
pub struct Denoiser {
    config: DenoiserConfig,
    frame_len: usize,
    hop: usize,
    window: Vec<f64>,
    dct: Dct,
    unity_gain: bool,
}

impl Denoiser {
    pub fn new(config: DenoiserConfig) -> Result<Self> {
        config.validate()?;
        let frame_len = config.frame_len()?;
        let hop = config.hop()?;
        Ok(Self {
            window: window_coefficients(frame_len),
            dct: Dct::new(frame_len),
            frame_len,
            hop,
            config,
            unity_gain: false,
        })
    }

    pub fn config(&self) -> &DenoiserConfig {
        &self.config
    }

    /// Replaces every gain with 1 while keeping the tracking path intact.
    #[doc(hidden)]
    pub fn with_unity_gain(mut self) -> Self {
        self.unity_gain = true;
        self
    }

    pub fn process(&self, noisy: &[f64]) -> Result<DenoiseOutput> {
        if let Some(i) = noisy.iter().position(|s| !s.is_finite()) {
            return Err(Error::Input(format!("sample {i} is not finite")));
        }
        let cfg = &self.config;
        let min_len = cfg.min_signal_len()?;
        if noisy.len() < min_len {
            return Err(config(format!(
                "signal has {} samples, at least {min_len} are needed for noise initialisation",
                noisy.len()
            )));
        }

        let grid = FrameGrid::new(noisy.len(), self.frame_len, self.hop)?;
        let frames = analyze(noisy, &grid, &self.window, &self.dct)?;
        let mut state = noise_tracking::initialize(&frames, cfg.init_noise_frames)?;
        let mut hangover = Hangover::new(cfg.vad_hangover);
        let mut speech_frames = 0;
        let mut time_frames = Vec::with_capacity(frames.len());

        for (i, frame) in frames.iter().enumerate() {
            let (raw, next) = noise_tracking::vad_update(frame, state, cfg.vad_threshold);
            let decision = hangover.apply(raw);
            if decision.hypothesis == Hypothesis::H1 {
                speech_frames += 1;
            }
            state = noise_tracking::update_noise(frame, decision, next, cfg.eta);
            let beta = if i == 0 { 1.0 } else { cfg.beta };
            state = noise_tracking::update_inv_xi(frame, state, beta);

            let enhanced = if self.unity_gain {
                frame.clone()
            } else {
                apply_shrinkage(frame, &state.xi(), cfg.kind, cfg.alpha)?
            };
            time_frames.push(self.dct.inverse(&enhanced.coeffs));
            state = state.record(frame, &enhanced);
        }

        let mut samples = overlap_add(&time_frames, &grid, &self.window)?;
        samples.truncate(noisy.len());
        Ok(DenoiseOutput {
            samples,
            frames: frames.len(),
            speech_frames,
        })
    }

    /// Enhances a single frame of DCT coefficients given an external state.
    /// Mostly useful for inspecting the recursion frame by frame.
    pub fn shrink_frame(&self, frame: &DctFrame, xi: &[f64]) -> Result<DctFrame> {
        apply_shrinkage(frame, xi, self.config.kind, self.config.alpha)
    }
}

pub fn denoise(noisy: &[f64], config: &DenoiserConfig) -> Result<Vec<f64>> {
    Ok(Denoiser::new(config.clone())?.process(noisy)?.samples)
}

/// Outcome of [`denoise_file`], printed by the CLI as one JSON line.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenoiseSummary {
    pub input: String,
    pub output: String,
    pub kind: ShrinkageKind,
    pub alpha: f64,
    pub samples: usize,
    pub frames: usize,
    pub speech_frames: usize,
    pub speech_percent: f64,
}

impl DenoiseSummary {
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("summary serialises")
    }
}

pub fn denoise_file(
    in_path: impl AsRef<Path>,
    out_path: impl AsRef<Path>,
    config: &DenoiserConfig,
) -> Result<DenoiseSummary> {
    let (in_path, out_path) = (in_path.as_ref(), out_path.as_ref());
    let input = read_wav(in_path)?;
    if input.sample_rate != config.sample_rate {
        return Err(config_mismatch(input.sample_rate, config.sample_rate));
    }
    let out = Denoiser::new(config.clone())?.process(&input.samples)?;
    write_wav(out_path, &AudioBuffer::new(out.samples.clone(), input.sample_rate)?)?;
    Ok(DenoiseSummary {
        input: in_path.display().to_string(),
        output: out_path.display().to_string(),
        kind: config.kind,
        alpha: config.alpha,
        samples: out.samples.len(),
        frames: out.frames,
        speech_frames: out.speech_frames,
        speech_percent: out.speech_percent(),
    })
}

fn config_mismatch(file_rate: u32, cfg_rate: u32) -> Error {
    config(format!(
        "file is sampled at {file_rate} Hz but the configuration expects {cfg_rate} Hz"
    ))
}
