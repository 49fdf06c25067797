//! Mono 16-bit PCM WAV files and noisy-mixture synthesis.

use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::error::{domain, param, Result};

pub const DEFAULT_SAMPLE_RATE: u32 = 8000;

const PCM_SCALE: f64 = 32768.0;
const FORMAT_PCM: u16 = 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WavError {
    #[error("not a RIFF/WAVE file")]
    NotRiffWave,
    #[error("truncated RIFF data: {0}")]
    Truncated(&'static str),
    #[error("missing '{0}' chunk")]
    MissingChunk(&'static str),
    #[error("unsupported sample format tag {0:#06x}, only integer PCM is accepted")]
    NotPcm(u16),
    #[error("unsupported channel count {0}, only mono is accepted")]
    NotMono(u16),
    #[error("unsupported bit depth {0}, only 16-bit is accepted")]
    UnsupportedBitDepth(u16),
}

/// Mono samples nominally in `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

impl AudioBuffer {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(crate::Error::Input(format!("sample {i} is not finite")));
        }
        if sample_rate == 0 {
            return Err(param("sample rate must be positive"));
        }
        Ok(Self { samples, sample_rate })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|s| s * s).sum()
    }
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

/// Parses a RIFF/WAVE byte stream holding mono PCM-16.
pub fn decode_wav(bytes: &[u8]) -> Result<AudioBuffer, WavError> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        if bytes.len() < 12 && bytes.starts_with(b"RIFF") {
            return Err(WavError::Truncated("RIFF header"));
        }
        return Err(WavError::NotRiffWave);
    }
    let mut pos = 12;
    let mut format: Option<(u16, u16, u32, u16)> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let body = pos + 8;
        match id {
            b"fmt " => {
                if size < 16 || body + 16 > bytes.len() {
                    return Err(WavError::Truncated("fmt chunk"));
                }
                format = Some((
                    u16_at(bytes, body),
                    u16_at(bytes, body + 2),
                    u32_at(bytes, body + 4),
                    u16_at(bytes, body + 14),
                ));
            }
            b"data" => {
                let (tag, channels, rate, bits) = format.ok_or(WavError::MissingChunk("fmt "))?;
                if tag != FORMAT_PCM {
                    return Err(WavError::NotPcm(tag));
                }
                if channels != 1 {
                    return Err(WavError::NotMono(channels));
                }
                if bits != 16 {
                    return Err(WavError::UnsupportedBitDepth(bits));
                }
                if body + size > bytes.len() || !size.is_multiple_of(2) {
                    return Err(WavError::Truncated("data chunk"));
                }
                let samples = bytes[body..body + size]
                    .chunks_exact(2)
                    .map(|c| f64::from(i16::from_le_bytes([c[0], c[1]])) / PCM_SCALE)
                    .collect();
                return Ok(AudioBuffer {
                    samples,
                    sample_rate: rate,
                });
            }
            _ => {}
        }
        pos = body + size + (size & 1);
    }
    if pos < bytes.len() {
        return Err(WavError::Truncated("chunk header"));
    }
    Err(WavError::MissingChunk(if format.is_some() { "data" } else { "fmt " }))
}

pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioBuffer> {
    let bytes = fs::read(path)?;
    let buf = decode_wav(&bytes)?;
    AudioBuffer::new(buf.samples, buf.sample_rate)
}

/// Quantises to int16, rounding half away from zero and clipping.
pub fn quantize(sample: f64) -> i16 {
    (sample * PCM_SCALE).round().clamp(-32768.0, 32767.0) as i16
}

pub fn encode_wav(buffer: &AudioBuffer) -> Vec<u8> {
    let data_len = buffer.samples.len() * 2;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&FORMAT_PCM.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&buffer.sample_rate.to_le_bytes());
    out.extend_from_slice(&(buffer.sample_rate * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in &buffer.samples {
        out.extend_from_slice(&quantize(s).to_le_bytes());
    }
    out
}

pub fn write_wav(path: impl AsRef<Path>, buffer: &AudioBuffer) -> Result<()> {
    fs::write(path, encode_wav(buffer))?;
    Ok(())
}

/// Adds a segment of `noise`, scaled to reach `snr_db` against `clean`.
///
/// The segment start is drawn from a generator seeded with `seed_offset`.
/// Returns the mixture and the scaled noise segment.
pub fn mix_at_snr(
    clean: &AudioBuffer,
    noise: &AudioBuffer,
    snr_db: f64,
    seed_offset: u64,
) -> Result<(AudioBuffer, AudioBuffer)> {
    if clean.sample_rate != noise.sample_rate {
        return Err(param(format!(
            "sample rates differ: {} vs {}",
            clean.sample_rate, noise.sample_rate
        )));
    }
    if noise.len() < clean.len() {
        return Err(param(format!(
            "noise ({} samples) is shorter than the clean signal ({})",
            noise.len(),
            clean.len()
        )));
    }
    if !snr_db.is_finite() {
        return Err(param("SNR must be finite"));
    }
    let slack = noise.len() - clean.len();
    let start = if slack == 0 {
        0
    } else {
        ChaCha8Rng::seed_from_u64(seed_offset).random_range(0..=slack)
    };
    let segment = &noise.samples[start..start + clean.len()];
    let clean_power = clean.energy();
    let noise_power: f64 = segment.iter().map(|w| w * w).sum();
    if clean_power == 0.0 || noise_power == 0.0 {
        return Err(domain("mixing needs non-zero clean and noise power"));
    }
    let g = (clean_power / (noise_power * 10f64.powf(snr_db / 10.0))).sqrt();
    let scaled: Vec<f64> = segment.iter().map(|w| g * w).collect();
    let noisy = clean.samples.iter().zip(&scaled).map(|(s, w)| s + w).collect();
    Ok((
        AudioBuffer::new(noisy, clean.sample_rate)?,
        AudioBuffer::new(scaled, clean.sample_rate)?,
    ))
}

pub fn generate_white_noise(length: usize, sigma: f64, seed: u64, sample_rate: u32) -> Result<AudioBuffer> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(param(format!("noise level must be non-negative, got {sigma}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..length)
        .map(|_| sigma * rng.sample::<f64, _>(StandardNormal))
        .collect();
    AudioBuffer::new(samples, sample_rate)
}

/// Voiced-like test signal: a harmonic series on a gliding pitch with a
/// syllabic amplitude envelope, preceded by `lead_silence_s` of silence.
///
/// Peak amplitude stays below 0.5.
pub fn synthesize_voiced(duration_s: f64, lead_silence_s: f64, sample_rate: u32) -> AudioBuffer {
    use std::f64::consts::PI;
    let fs = f64::from(sample_rate);
    let len = (duration_s * fs).round() as usize;
    let lead = (lead_silence_s * fs).round() as usize;
    let harmonics = [1.0, 0.6, 0.45, 0.3, 0.2, 0.12, 0.08];
    let norm: f64 = harmonics.iter().sum();
    let mut phase = 0.0;
    let samples = (0..len)
        .map(|n| {
            if n < lead {
                return 0.0;
            }
            let t = (n - lead) as f64 / fs;
            let f0 = 140.0 + 25.0 * (2.0 * PI * 0.7 * t).sin();
            phase += 2.0 * PI * f0 / fs;
            // 3.5 Hz syllable rate, gated so that some frames fall silent
            let env = (2.0 * PI * 3.5 * t - PI / 2.0).sin().mul_add(0.5, 0.5).powi(2);
            let voiced: f64 = harmonics
                .iter()
                .enumerate()
                .map(|(h, a)| a * ((h + 1) as f64 * phase).sin())
                .sum();
            0.45 * env * voiced / norm
        })
        .collect();
    AudioBuffer { samples, sample_rate }
}
