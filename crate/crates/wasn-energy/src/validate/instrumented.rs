//! Instrumented reference implementations.
//!
//! Each routine really computes its transform while routing every classified
//! arithmetic operation through an [`OpTally`]. Operation classification
//! follows the cost model's conventions: a multiply-accumulate is one MAC
//! (including the bias fold of a neuron and the squared-magnitude fold of the
//! Mel filterbank input), subtraction counts as addition, max/min selection
//! as comparison, and precomputed constants (twiddle factors, cosine bases,
//! filter weights) are free.

use crate::hwcost::{OpClass, OpCounts};
use crate::nn::{ActivationKind, ConvSpec, PoolMode, PoolSpec};

/// Arithmetic with a tap on every operation.
#[derive(Debug, Default, Clone)]
pub struct OpTally(OpCounts);

impl OpTally {
    pub fn counts(&self) -> &OpCounts {
        &self.0
    }

    pub fn mac(&mut self, acc: f64, a: f64, b: f64) -> f64 {
        self.0.add(OpClass::Mac, 1);
        acc + a * b
    }

    pub fn add(&mut self, a: f64, b: f64) -> f64 {
        self.0.add(OpClass::Add, 1);
        a + b
    }

    pub fn sub(&mut self, a: f64, b: f64) -> f64 {
        self.0.add(OpClass::Add, 1);
        a - b
    }

    pub fn mul(&mut self, a: f64, b: f64) -> f64 {
        self.0.add(OpClass::Mul, 1);
        a * b
    }

    pub fn div(&mut self, a: f64, b: f64) -> f64 {
        self.0.add(OpClass::Div, 1);
        a / b
    }

    pub fn max(&mut self, a: f64, b: f64) -> f64 {
        self.0.add(OpClass::Cmp, 1);
        a.max(b)
    }

    pub fn exp(&mut self, a: f64) -> f64 {
        self.0.add(OpClass::Exp, 1);
        a.exp()
    }

    pub fn log(&mut self, a: f64) -> f64 {
        self.0.add(OpClass::Log, 1);
        a.ln()
    }
}

/// Window multiply: `s[i] = h[i] * f[i]`, one MAC per sample.
pub fn framing_window(frame: &[f64], window: &[f64], tally: &mut OpTally) -> Vec<f64> {
    frame
        .iter()
        .zip(window.iter())
        .map(|(&f, &h)| tally.mac(0.0, h, f))
        .collect()
}

/// In-place iterative radix-2 decimation-in-time FFT. Each butterfly is one
/// complex multiply (4 mul + 2 add) and two complex additions (2 add each).
pub fn fft_radix2(re: &mut [f64], im: &mut [f64], tally: &mut OpTally) {
    let n = re.len();
    assert!(n.is_power_of_two() && n == im.len());
    // Bit-reversal permutation (index shuffling, no arithmetic).
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = (i as u32).reverse_bits() >> (32 - bits);
        let j = j as usize;
        if j > i {
            re.swap(i, j);
            im.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let angle_step = -2.0 * std::f64::consts::PI / len as f64;
        for start in (0..n).step_by(len) {
            for j in 0..half {
                // Twiddle factors are table constants in a real kernel.
                let (w_im, w_re) = (angle_step * j as f64).sin_cos();
                let (a, b) = (start + j, start + j + half);
                // t = w * x[b]: complex multiply.
                let prod_re = {
                    let rr = tally.mul(w_re, re[b]);
                    let ii = tally.mul(w_im, im[b]);
                    tally.sub(rr, ii)
                };
                let prod_im = {
                    let ri = tally.mul(w_re, im[b]);
                    let ir = tally.mul(w_im, re[b]);
                    tally.add(ri, ir)
                };
                // x[b] = x[a] - t, x[a] = x[a] + t: two complex additions.
                let (a_re, a_im) = (re[a], im[a]);
                re[b] = tally.sub(a_re, prod_re);
                im[b] = tally.sub(a_im, prod_im);
                re[a] = tally.add(a_re, prod_re);
                im[a] = tally.add(a_im, prod_im);
            }
        }
        len *= 2;
    }
}

/// Log-Mel filterbank over the retained half-spectrum. The power spectrum
/// `re^2 + im^2` is folded into the filter MACs (computed without separate
/// charge), then one logarithm per band.
pub fn log_mel(
    spectrum_re: &[f64],
    spectrum_im: &[f64],
    band_weights: &[Vec<f64>],
    tally: &mut OpTally,
) -> Vec<f64> {
    let power: Vec<f64> = spectrum_re
        .iter()
        .zip(spectrum_im.iter())
        .map(|(&r, &i)| r * r + i * i)
        .collect();
    band_weights
        .iter()
        .map(|weights| {
            let mut acc = 0.0;
            for (&w, &p) in weights.iter().zip(power.iter()) {
                acc = tally.mac(acc, w, p);
            }
            tally.log(acc.max(1e-30))
        })
        .collect()
}

/// DCT-II of the log-Mel features; the cosine basis is a precomputed table.
pub fn dct(mel: &[f64], n_coefficients: usize, tally: &mut OpTally) -> Vec<f64> {
    let n_bands = mel.len();
    (0..n_coefficients)
        .map(|d| {
            let mut acc = 0.0;
            for (b, &m) in mel.iter().enumerate() {
                let basis = (d as f64 * (b as f64 + 0.5) * std::f64::consts::PI
                    / n_bands as f64)
                    .cos();
                acc = tally.mac(acc, m, basis);
            }
            acc
        })
        .collect()
}

/// Fully-connected layer; `weights[neuron]` holds the input weights followed
/// by the bias (the augmented-input fold).
pub fn fully_connected(input: &[f64], weights: &[Vec<f64>], tally: &mut OpTally) -> Vec<f64> {
    weights
        .iter()
        .map(|row| {
            let mut acc = 0.0;
            for (&w, &x) in row.iter().zip(input.iter()) {
                acc = tally.mac(acc, w, x);
            }
            tally.mac(acc, row[input.len()], 1.0)
        })
        .collect()
}

/// Element-wise activations with the cost model's operation conventions.
pub fn activation(kind: ActivationKind, input: &[f64], tally: &mut OpTally) -> Vec<f64> {
    match kind {
        ActivationKind::Relu => input.iter().map(|&z| tally.max(0.0, z)).collect(),
        ActivationKind::Logistic => input
            .iter()
            .map(|&z| {
                let e = tally.exp(-z);
                let d = tally.add(1.0, e);
                tally.div(1.0, d)
            })
            .collect(),
        ActivationKind::Tanh => input
            .iter()
            .map(|&z| {
                let e = tally.exp(-2.0 * z);
                let d = tally.add(1.0, e);
                let q = tally.div(2.0, d);
                tally.add(q, -1.0)
            })
            .collect(),
        ActivationKind::Softmax => {
            let exps: Vec<f64> = input.iter().map(|&z| tally.exp(z)).collect();
            let mut denom = 0.0;
            for &e in &exps {
                denom = tally.add(denom, e);
            }
            exps.iter().map(|&e| tally.div(e, denom)).collect()
        }
    }
}

/// Odometer over a multi-dimensional index.
fn advance(index: &mut [u64], dims: &[u64]) -> bool {
    for axis in (0..index.len()).rev() {
        index[axis] += 1;
        if index[axis] < dims[axis] {
            return true;
        }
        index[axis] = 0;
    }
    false
}

fn flat_offset(index: &[u64], dims: &[u64]) -> usize {
    let mut offset = 0u64;
    for (i, &d) in index.iter().zip(dims.iter()) {
        offset = offset * d + i;
    }
    offset as usize
}

fn out_dims(input: &[u64], window: &[u64], strides: &[u64], padding: &[u64]) -> Vec<u64> {
    input
        .iter()
        .zip(window.iter())
        .zip(strides.iter().zip(padding.iter()))
        .map(|((&i, &w), (&s, &p))| (i + 2 * p - w) / s + 1)
        .collect()
}

/// Fetches an input value honoring zero padding.
fn padded_fetch(
    input: &[f64],
    input_dims: &[u64],
    out_index: &[u64],
    window_index: &[u64],
    strides: &[u64],
    padding: &[u64],
) -> f64 {
    let mut flat = Vec::with_capacity(input_dims.len());
    for axis in 0..input_dims.len() {
        let pos = out_index[axis] * strides[axis] + window_index[axis];
        let Some(orig) = pos.checked_sub(padding[axis]) else {
            return 0.0;
        };
        if orig >= input_dims[axis] {
            return 0.0;
        }
        flat.push(orig);
    }
    input[flat_offset(&flat, input_dims)]
}

/// N-dimensional convolution with zero padding; `weights[template]` holds the
/// kernel values followed by a bias. Every kernel tap is a MAC, padded taps
/// included (the kernel does not branch on position).
pub fn convolution(
    spec: &ConvSpec,
    input: &[f64],
    weights: &[Vec<f64>],
    tally: &mut OpTally,
) -> Vec<f64> {
    let out = out_dims(&spec.input_dims, &spec.template_dims, &spec.strides, &spec.padding);
    let mut outputs = Vec::new();
    for kernel in weights.iter().take(spec.n_templates as usize) {
        let mut out_index = vec![0u64; out.len()];
        loop {
            let mut acc = 0.0;
            let mut window_index = vec![0u64; out.len()];
            let mut tap = 0usize;
            loop {
                let x = padded_fetch(
                    input,
                    &spec.input_dims,
                    &out_index,
                    &window_index,
                    &spec.strides,
                    &spec.padding,
                );
                acc = tally.mac(acc, kernel[tap], x);
                tap += 1;
                if !advance(&mut window_index, &spec.template_dims) {
                    break;
                }
            }
            outputs.push(tally.mac(acc, kernel[tap], 1.0)); // bias
            if !advance(&mut out_index, &out) {
                break;
            }
        }
    }
    outputs
}

/// N-dimensional pooling: the window is combined with comparisons (max) or
/// additions (avg), starting from its first element, plus one division per
/// output in average mode.
pub fn pooling(spec: &PoolSpec, input: &[f64], tally: &mut OpTally) -> Vec<f64> {
    let out = out_dims(&spec.input_dims, &spec.window_dims, &spec.strides, &spec.padding);
    let window_len: u64 = spec.window_dims.iter().product();
    let mut outputs = Vec::new();
    let mut out_index = vec![0u64; out.len()];
    loop {
        let mut acc = f64::NAN;
        let mut window_index = vec![0u64; out.len()];
        let mut first = true;
        loop {
            let x = padded_fetch(
                input,
                &spec.input_dims,
                &out_index,
                &window_index,
                &spec.strides,
                &spec.padding,
            );
            if first {
                acc = x;
                first = false;
            } else {
                acc = match spec.mode {
                    PoolMode::Max => tally.max(acc, x),
                    PoolMode::Avg => tally.add(acc, x),
                };
            }
            if !advance(&mut window_index, &spec.window_dims) {
                break;
            }
        }
        if spec.mode == PoolMode::Avg && spec.charge_avg_pool_div {
            acc = tally.div(acc, window_len as f64);
        }
        outputs.push(acc);
        if !advance(&mut out_index, &out) {
            break;
        }
    }
    outputs
}

/// Inference-phase batch normalization: one scale and one shift per value.
pub fn batchnorm(input: &[f64], scale: &[f64], shift: &[f64], tally: &mut OpTally) -> Vec<f64> {
    input
        .iter()
        .zip(scale.iter().zip(shift.iter()))
        .map(|(&x, (&a, &b))| {
            let scaled = tally.mul(x, a);
            tally.add(scaled, b)
        })
        .collect()
}
