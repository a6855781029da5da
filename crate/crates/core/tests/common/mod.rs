//! Reference computations written independently of the library code.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Step response of a unit first-order lag at time `t`.
pub fn lag_step_response(t: f64, tau: f64) -> f64 {
    1.0 - (-t / tau).exp()
}

/// Monostable pulse width from its timing network.
pub fn monostable_width(c3: f64, r11: f64, r8: f64, r9: f64) -> f64 {
    c3 * r11 * (1.0 + r8 / r9).ln()
}

#[derive(Debug, Clone, Copy)]
pub struct DeviceParams {
    pub g_min: f64,
    pub g_max: f64,
    pub v_set: f64,
    pub v_reset: f64,
    pub mu: f64,
}

/// Forward Euler on the threshold/window device law with `sub` substeps per
/// sample. Returns the conductance at the start of every sample.
pub fn device_euler(p: DeviceParams, g0: f64, volts: &[f64], dt: f64, sub: usize) -> Vec<f64> {
    let h = dt / sub as f64;
    let half = (p.g_max - p.g_min) / 2.0;
    let mut g = g0;
    let mut out = Vec::with_capacity(volts.len());
    for &v in volts {
        out.push(g);
        let drive = if v > p.v_set {
            v - p.v_set
        } else if v < p.v_reset {
            v - p.v_reset
        } else {
            0.0
        };
        if drive == 0.0 {
            continue;
        }
        for _ in 0..sub {
            let w = (p.g_max - g) * (g - p.g_min) / (half * half);
            g += h * p.mu * drive * w;
            g = g.clamp(p.g_min, p.g_max);
        }
    }
    out
}

/// Spearman rank correlation, average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0 + 1.0;
            for &k in &idx[i..=j] {
                r[k] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

pub fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// Piecewise-constant voltage: random-length segments, half of them at zero.
pub fn random_pulse_train(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    let mut k = 0;
    while k < n {
        let len = rng.gen_range(1..n / 10);
        let level = if rng.gen_bool(0.5) {
            rng.gen_range(-4.0..4.0)
        } else {
            0.0
        };
        for x in v.iter_mut().skip(k).take(len) {
            *x = level;
        }
        k += len;
    }
    v
}
