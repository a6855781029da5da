//! Threshold memristive synapse with a quadratic window on its conductance.

use crate::error::{config_err, ensure_positive, Result};
use crate::signal::{Trace, Unit};

/// Conductance state of one memristive device plus its update law parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MemristorState {
    /// Conductance in siemens.
    pub g: f64,
    pub g_min: f64,
    pub g_max: f64,
    /// Potentiation threshold, volts (> 0).
    pub v_th_set: f64,
    /// Depression threshold, volts (< 0).
    pub v_th_reset: f64,
    /// Update rate, siemens per volt-second.
    pub mu: f64,
}

impl Default for MemristorState {
    fn default() -> Self {
        let g_min = 10e-6;
        let g_max = 1e-3;
        Self {
            g: 0.5 * (g_min + g_max),
            g_min,
            g_max,
            v_th_set: 0.5,
            v_th_reset: -0.5,
            mu: 1e-4,
        }
    }
}

impl MemristorState {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("g_min", self.g_min)?;
        ensure_positive("mu", self.mu)?;
        if !(self.g_max.is_finite() && self.g_max > self.g_min) {
            return Err(config_err("g_max must be finite and > g_min"));
        }
        if !(self.g >= self.g_min && self.g <= self.g_max) {
            return Err(config_err(format!(
                "initial conductance {} outside [{}, {}]",
                self.g, self.g_min, self.g_max
            )));
        }
        if !(self.v_th_set.is_finite() && self.v_th_set > 0.0) {
            return Err(config_err("v_th_set must be > 0"));
        }
        if !(self.v_th_reset.is_finite() && self.v_th_reset < 0.0) {
            return Err(config_err("v_th_reset must be < 0"));
        }
        Ok(())
    }

    pub fn with_g(&self, g: f64) -> Self {
        Self { g, ..*self }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.g_min + self.g_max)
    }

    /// Quadratic window, 1 at the midpoint and 0 at both bounds.
    #[inline]
    pub fn window(&self, g: f64) -> f64 {
        let half = 0.5 * (self.g_max - self.g_min);
        (self.g_max - g) * (g - self.g_min) / (half * half)
    }

    /// Conductance rate of change under a constant applied voltage.
    #[inline]
    pub fn rate(&self, g: f64, v: f64) -> f64 {
        let drive = if v > self.v_th_set {
            v - self.v_th_set
        } else if v < self.v_th_reset {
            v - self.v_th_reset
        } else {
            return 0.0;
        };
        self.mu * drive * self.window(g)
    }
}

/// One forward-Euler step of the device under voltage `v` held for `dt`.
///
/// Sub-threshold voltages leave the state untouched. If a single step would
/// cross a bound (only possible for very coarse steps) the state moves halfway
/// to that bound instead, so it never leaves the open interval.
pub fn memristor_step(state: MemristorState, v: f64, dt: f64) -> MemristorState {
    let dg = state.rate(state.g, v) * dt;
    if dg == 0.0 {
        return state;
    }
    let mut g = state.g + dg;
    if g >= state.g_max {
        g = state.g + 0.5 * (state.g_max - state.g);
        if g >= state.g_max {
            return state;
        }
    } else if g <= state.g_min {
        g = state.g - 0.5 * (state.g - state.g_min);
        if g <= state.g_min {
            return state;
        }
    }
    state.with_g(g)
}

/// Drive the device with a voltage trace.
///
/// Sample `k` of the returned conductance trace is the value at `t_k`, before
/// the pulse sample `k` acts over `[t_k, t_k + dt)`.
pub fn memristor_drive(
    state: MemristorState,
    pulse_trace: &Trace,
) -> Result<(MemristorState, Trace)> {
    if pulse_trace.unit() != Unit::Volt {
        return Err(config_err("memristor_drive expects a voltage trace"));
    }
    let dt = pulse_trace.grid().dt();
    let mut s = state;
    let mut g = Vec::with_capacity(pulse_trace.len());
    for &v in pulse_trace.values() {
        g.push(s.g);
        s = memristor_step(s, v, dt);
    }
    Ok((s, Trace::new(*pulse_trace.grid(), g, Unit::Siemens)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::TimeGrid;

    #[test]
    fn sub_threshold_is_inert() {
        let s = MemristorState::default();
        for v in [-0.5, -0.2, 0.0, 0.3, 0.5] {
            assert_eq!(memristor_step(s, v, 1e-3), s);
        }
    }

    #[test]
    fn midpoint_increment_matches_hand_value() {
        let s = MemristorState {
            mu: 1e-6,
            ..MemristorState::default()
        };
        assert_eq!(s.window(s.g), 1.0);
        let next = memristor_step(s, s.v_th_set + 1.0, 1e-3);
        assert!((next.g - s.g - 1e-9).abs() < 1e-17);
    }

    #[test]
    fn repeated_large_pulses_saturate_below_max() {
        let mut s = MemristorState::default();
        let mut last = s.g;
        for _ in 0..200_000 {
            s = memristor_step(s, 10.0, 1e-3);
            assert!(s.g >= last);
            assert!(s.g < s.g_max);
            last = s.g;
        }
        assert!(s.g_max - s.g < 1e-6 * (s.g_max - s.g_min));
    }

    #[test]
    fn coarse_steps_stay_inside_bounds() {
        let mut s = MemristorState::default();
        for _ in 0..100 {
            s = memristor_step(s, 1e6, 1.0);
            assert!(s.g < s.g_max && s.g > s.g_min);
        }
        for _ in 0..100 {
            s = memristor_step(s, -1e6, 1.0);
            assert!(s.g < s.g_max && s.g > s.g_min);
        }
    }

    #[test]
    fn drive_with_zero_trace_is_constant() {
        let g = TimeGrid::new(0.0, 1e-4, 100).unwrap();
        let zero = Trace::constant(g, 0.0, Unit::Volt).unwrap();
        let s = MemristorState::default();
        let (fin, tr) = memristor_drive(s, &zero).unwrap();
        assert_eq!(fin, s);
        assert!(tr.values().iter().all(|&x| x == s.g));
        assert_eq!(tr.unit(), Unit::Siemens);
    }
}
