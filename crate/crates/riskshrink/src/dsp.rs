//! Short-time analysis and synthesis: framing, periodic Hamming window,
//! orthonormal DCT-II and weighted overlap-add.
//!
//! The DCT is orthonormal so that white time-domain noise of variance `σ²`
//! maps to coefficients of the same variance (scaled only by the window
//! energy). Reconstruction divides by `Σ w²` over the overlapping frames,
//! which is exact wherever at least one window sample is non-zero.

use std::f64::consts::PI;

use crate::error::{param, Result};

/// Below this, the overlap-add normaliser is treated as zero.
pub const OLA_EPSILON: f64 = 1e-12;

/// Frame layout of a signal: where frames start and how far it is padded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameGrid {
    pub frame_len: usize,
    pub hop: usize,
    pub num_frames: usize,
    pub padded_len: usize,
}

impl FrameGrid {
    /// Smallest grid of `frame_len` frames spaced by `hop` covering `signal_len` samples.
    pub fn new(signal_len: usize, frame_len: usize, hop: usize) -> Result<Self> {
        if frame_len == 0 {
            return Err(param("frame length must be positive"));
        }
        if hop == 0 || hop > frame_len {
            return Err(param(format!("hop must lie in 1..={frame_len}, got {hop}")));
        }
        if signal_len == 0 {
            return Ok(Self {
                frame_len,
                hop,
                num_frames: 0,
                padded_len: 0,
            });
        }
        let extra = signal_len.saturating_sub(frame_len);
        let steps = extra.div_ceil(hop);
        Ok(Self {
            frame_len,
            hop,
            num_frames: steps + 1,
            padded_len: frame_len + steps * hop,
        })
    }

    pub fn frame_start(&self, index: usize) -> usize {
        index * self.hop
    }
}

pub fn make_frame_grid(signal_len: usize, frame_len: usize, hop: usize) -> Result<FrameGrid> {
    FrameGrid::new(signal_len, frame_len, hop)
}

/// Periodic Hamming window, `0.54 − 0.46·cos(2πn/N)`.
pub fn window_coefficients(frame_len: usize) -> Vec<f64> {
    let n = frame_len as f64;
    (0..frame_len)
        .map(|i| 0.54 - 0.46 * (2.0 * PI * i as f64 / n).cos())
        .collect()
}

/// One frame of DCT coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct DctFrame {
    pub coeffs: Vec<f64>,
    pub index: usize,
}

impl DctFrame {
    pub fn new(coeffs: Vec<f64>, index: usize) -> Self {
        Self { coeffs, index }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// Orthonormal DCT-II of a fixed length with a precomputed basis.
///
/// `X_k = s_k Σ_n x_n cos(π (n + ½) k / N)` with `s_0 = √(1/N)` and
/// `s_k = √(2/N)` otherwise. The inverse is the transpose.
#[derive(Debug, Clone)]
pub struct Dct {
    len: usize,
    // row k holds basis vector k
    basis: Vec<f64>,
}

impl Dct {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "DCT length must be positive");
        let n = len as f64;
        let dc = (1.0 / n).sqrt();
        let ac = (2.0 / n).sqrt();
        let mut basis = Vec::with_capacity(len * len);
        for k in 0..len {
            let scale = if k == 0 { dc } else { ac };
            for i in 0..len {
                // reduce the phase index mod 4N before scaling keeps cos() arguments small
                let phase = ((2 * i + 1) * k) % (4 * len);
                basis.push(scale * (PI * phase as f64 / (2.0 * n)).cos());
            }
        }
        Self { len, basis }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward_into(&self, input: &[f64], out: &mut [f64]) {
        assert_eq!(input.len(), self.len);
        assert_eq!(out.len(), self.len);
        for (k, o) in out.iter_mut().enumerate() {
            let row = &self.basis[k * self.len..(k + 1) * self.len];
            *o = row.iter().zip(input).map(|(b, x)| b * x).sum();
        }
    }

    pub fn inverse_into(&self, coeffs: &[f64], out: &mut [f64]) {
        assert_eq!(coeffs.len(), self.len);
        assert_eq!(out.len(), self.len);
        out.fill(0.0);
        for (k, &c) in coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let row = &self.basis[k * self.len..(k + 1) * self.len];
            for (o, b) in out.iter_mut().zip(row) {
                *o += c * b;
            }
        }
    }

    pub fn forward(&self, input: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len];
        self.forward_into(input, &mut out);
        out
    }

    pub fn inverse(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.len];
        self.inverse_into(coeffs, &mut out);
        out
    }
}

/// Orthonormal DCT-II of an already windowed frame.
pub fn dct_forward(windowed_frame: &[f64], index: usize) -> Result<DctFrame> {
    if windowed_frame.is_empty() {
        return Err(param("cannot transform an empty frame"));
    }
    let coeffs = Dct::new(windowed_frame.len()).forward(windowed_frame);
    Ok(DctFrame::new(coeffs, index))
}

pub fn dct_inverse(frame: &DctFrame) -> Result<Vec<f64>> {
    if frame.is_empty() {
        return Err(param("cannot invert an empty frame"));
    }
    Ok(Dct::new(frame.len()).inverse(&frame.coeffs))
}

/// Windows and transforms every frame of `signal` laid out on `grid`.
///
/// Samples past the end of `signal` are read as zeros.
pub fn analyze(signal: &[f64], grid: &FrameGrid, window: &[f64], dct: &Dct) -> Result<Vec<DctFrame>> {
    if window.len() != grid.frame_len || dct.len() != grid.frame_len {
        return Err(param(format!(
            "window ({}) and transform ({}) must match the frame length {}",
            window.len(),
            dct.len(),
            grid.frame_len
        )));
    }
    let mut buf = vec![0.0; grid.frame_len];
    let mut frames = Vec::with_capacity(grid.num_frames);
    for i in 0..grid.num_frames {
        let start = grid.frame_start(i);
        for (n, b) in buf.iter_mut().enumerate() {
            *b = signal.get(start + n).copied().unwrap_or(0.0) * window[n];
        }
        let mut coeffs = vec![0.0; grid.frame_len];
        dct.forward_into(&buf, &mut coeffs);
        frames.push(DctFrame::new(coeffs, i));
    }
    Ok(frames)
}

/// Weighted overlap-add of time-domain frames:
/// `y[n] = Σ_i f_i[n − i·hop]·w[n − i·hop] / Σ_i w²[n − i·hop]`.
///
/// Returns `grid.padded_len` samples; positions whose normaliser is below
/// [`OLA_EPSILON`] are zero.
pub fn overlap_add<F: AsRef<[f64]>>(frames: &[F], grid: &FrameGrid, window: &[f64]) -> Result<Vec<f64>> {
    if window.len() != grid.frame_len {
        return Err(param(format!(
            "window length {} does not match frame length {}",
            window.len(),
            grid.frame_len
        )));
    }
    if frames.len() != grid.num_frames {
        return Err(param(format!(
            "expected {} frames, got {}",
            grid.num_frames,
            frames.len()
        )));
    }
    let mut out = vec![0.0; grid.padded_len];
    let mut norm = vec![0.0; grid.padded_len];
    for (i, frame) in frames.iter().enumerate() {
        let frame = frame.as_ref();
        if frame.len() != grid.frame_len {
            return Err(param(format!(
                "frame {i} has length {}, expected {}",
                frame.len(),
                grid.frame_len
            )));
        }
        let start = grid.frame_start(i);
        for (n, (&x, &w)) in frame.iter().zip(window).enumerate() {
            out[start + n] += x * w;
            norm[start + n] += w * w;
        }
    }
    for (y, d) in out.iter_mut().zip(&norm) {
        *y = if *d < OLA_EPSILON { 0.0 } else { *y / d };
    }
    Ok(out)
}
