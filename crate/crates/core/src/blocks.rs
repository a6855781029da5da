//! Behavioral op-amp stages of the wiring schematic.
//!
//! Every stage is either a memoryless transfer or a one-step state update on a
//! shared grid. Outputs are clamped to the symmetric supply rail.

use crate::error::{config_err, ensure_positive, Result};
use crate::signal::{Trace, Unit};

/// Default symmetric op-amp saturation level.
pub const DEFAULT_V_RAIL: f64 = 12.0;

#[inline]
pub fn clamp_rail(v: f64, v_rail: f64) -> f64 {
    v.clamp(-v_rail, v_rail)
}

/// First-order lag (RC integrator) with unity DC gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorState {
    pub y: f64,
    pub tau: f64,
}

impl IntegratorState {
    pub fn new(tau: f64) -> Result<Self> {
        ensure_positive("tau", tau)?;
        Ok(Self { y: 0.0, tau })
    }
}

/// Fraction of the gap to the input closed in one step: `1 - exp(-dt/tau)`.
#[inline]
pub fn lag_coefficient(dt: f64, tau: f64) -> f64 {
    -(-dt / tau).exp_m1()
}

/// Checks the resolution guard `dt <= tau / 10`.
pub fn check_integrator_resolution(dt: f64, tau: f64) -> Result<()> {
    ensure_positive("dt", dt)?;
    ensure_positive("tau", tau)?;
    if dt > tau / 10.0 {
        return Err(config_err(format!(
            "dt = {dt} s is too coarse for tau = {tau} s (need dt <= tau/10)"
        )));
    }
    Ok(())
}

/// Advance the integrator by one step holding `x` constant over the step.
///
/// The update is the exact solution of `tau * y' = x - y` for piecewise-constant
/// input, so refining the grid does not change values at shared time points.
pub fn integrator_step(
    state: IntegratorState,
    x: f64,
    dt: f64,
    v_rail: f64,
) -> Result<IntegratorState> {
    check_integrator_resolution(dt, state.tau)?;
    let k = lag_coefficient(dt, state.tau);
    Ok(IntegratorState {
        y: clamp_rail(state.y + (x - state.y) * k, v_rail),
        tau: state.tau,
    })
}

/// Monostable pulse width `C3 * R11 * ln(1 + R8/R9)`.
pub fn one_shot_duration(c3: f64, r11: f64, r8: f64, r9: f64) -> Result<f64> {
    ensure_positive("c3", c3)?;
    ensure_positive("r11", r11)?;
    ensure_positive("r8", r8)?;
    ensure_positive("r9", r9)?;
    Ok(c3 * r11 * (r8 / r9).ln_1p())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneShotPhase {
    Idle,
    Firing,
}

/// Non-retriggerable monostable multivibrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneShotState {
    pub phase: OneShotPhase,
    pub time_remaining: f64,
    pub pulse_width: f64,
    pub v_high: f64,
    pub v_threshold: f64,
}

impl OneShotState {
    pub fn new(pulse_width: f64, v_high: f64, v_threshold: f64) -> Result<Self> {
        ensure_positive("pulse_width", pulse_width)?;
        if !v_high.is_finite() || !v_threshold.is_finite() {
            return Err(config_err("one-shot levels must be finite"));
        }
        Ok(Self {
            phase: OneShotPhase::Idle,
            time_remaining: 0.0,
            pulse_width,
            v_high,
            v_threshold,
        })
    }
}

/// One step of the one-shot. A pulse lasts `ceil(pulse_width / dt)` steps and
/// cannot be extended by further threshold crossings while it is running.
pub fn one_shot_step(state: OneShotState, x: f64, dt: f64) -> (OneShotState, f64) {
    let mut next = state;
    if next.phase == OneShotPhase::Idle && x >= next.v_threshold {
        next.phase = OneShotPhase::Firing;
        next.time_remaining = next.pulse_width;
    }
    if next.phase == OneShotPhase::Idle {
        return (next, 0.0);
    }
    next.time_remaining -= dt;
    // absorbs rounding from repeated subtraction
    if next.time_remaining <= dt * 1e-6 {
        next.phase = OneShotPhase::Idle;
        next.time_remaining = 0.0;
    }
    (next, state.v_high)
}

/// Inverting summing amplifier: `clamp(-sum(g_i * x_i))`.
pub fn inverting_adder(inputs: &[f64], gains: &[f64], v_rail: f64) -> Result<f64> {
    if inputs.is_empty() {
        return Err(config_err("inverting adder needs at least one input"));
    }
    if inputs.len() != gains.len() {
        return Err(config_err(format!(
            "inverting adder has {} inputs but {} gains",
            inputs.len(),
            gains.len()
        )));
    }
    let sum: f64 = inputs.iter().zip(gains).map(|(x, g)| g * x).sum();
    Ok(clamp_rail(-sum, v_rail))
}

/// Op-amp whose non-inverting input is grounded (inverter) unless the key is closed
/// by `control >= control_threshold`, in which case it follows the input.
#[inline]
pub fn controlled_inverter(x: f64, control: f64, control_threshold: f64, v_rail: f64) -> f64 {
    if control >= control_threshold {
        clamp_rail(x, v_rail)
    } else {
        clamp_rail(-x, v_rail)
    }
}

/// Comparator key: `v_high` when `pos > neg`, else zero.
#[inline]
pub fn comparator(pos: f64, neg: f64, v_high: f64) -> f64 {
    if pos > neg {
        v_high
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModMode {
    Linear,
    Sombrero,
}

impl ModMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ModMode::Linear => "linear",
            ModMode::Sombrero => "sombrero",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(ModMode::Linear),
            "sombrero" => Ok(ModMode::Sombrero),
            other => Err(config_err(format!("unknown modulation mode '{other}'"))),
        }
    }
}

/// Dopamine modulation stage: maps the potentiometer wiper onto a learning-pulse gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModStageConfig {
    pub mode: ModMode,
    pub wiper: f64,
    pub gain_min: f64,
    pub gain_max: f64,
    pub sombrero_center: f64,
    pub sombrero_width: f64,
}

impl Default for ModStageConfig {
    fn default() -> Self {
        Self {
            mode: ModMode::Linear,
            wiper: 0.5,
            gain_min: 0.25,
            gain_max: 4.0,
            sombrero_center: 0.5,
            sombrero_width: 0.25,
        }
    }
}

impl ModStageConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.wiper) {
            return Err(config_err(format!(
                "wiper must lie in [0, 1], got {}",
                self.wiper
            )));
        }
        if !(self.gain_min.is_finite() && self.gain_min >= 0.0) {
            return Err(config_err("gain_min must be finite and >= 0"));
        }
        if !(self.gain_max.is_finite() && self.gain_max > self.gain_min) {
            return Err(config_err("gain_max must be finite and > gain_min"));
        }
        if !self.sombrero_center.is_finite() {
            return Err(config_err("sombrero_center must be finite"));
        }
        ensure_positive("sombrero_width", self.sombrero_width)
    }

    pub fn with_wiper(&self, wiper: f64) -> Self {
        Self { wiper, ..*self }
    }

    /// Gain at an arbitrary wiper position, other settings unchanged.
    pub fn gain_at(&self, wiper: f64) -> f64 {
        let span = self.gain_max - self.gain_min;
        match self.mode {
            ModMode::Linear => self.gain_min + wiper * span,
            ModMode::Sombrero => {
                let z = (wiper - self.sombrero_center) / self.sombrero_width;
                self.gain_min + span * (-z * z).exp()
            }
        }
    }
}

pub fn modulation_gain(cfg: &ModStageConfig) -> f64 {
    cfg.gain_at(cfg.wiper)
}

/// Scale a learning pulse by the modulation gain and clamp to the rail.
pub fn apply_modulation(
    learning_pulse: &Trace,
    cfg: &ModStageConfig,
    v_rail: f64,
) -> Result<Trace> {
    if learning_pulse.unit() != Unit::Volt {
        return Err(config_err("apply_modulation expects a voltage trace"));
    }
    let gain = modulation_gain(cfg);
    let values = learning_pulse
        .values()
        .iter()
        .map(|&v| clamp_rail(gain * v, v_rail))
        .collect();
    Trace::new(*learning_pulse.grid(), values, Unit::Volt)
}

/// Like [`apply_modulation`] but with a time-varying wiper, one sample per grid step.
pub fn apply_modulation_schedule(
    learning_pulse: &Trace,
    wiper: &Trace,
    cfg: &ModStageConfig,
    v_rail: f64,
) -> Result<Trace> {
    if learning_pulse.unit() != Unit::Volt {
        return Err(config_err(
            "apply_modulation_schedule expects a voltage trace",
        ));
    }
    if learning_pulse.grid() != wiper.grid() {
        return Err(config_err("modulation schedule must share the pulse grid"));
    }
    let values = learning_pulse
        .values()
        .iter()
        .zip(wiper.values())
        .map(|(&v, &w)| clamp_rail(cfg.gain_at(w) * v, v_rail))
        .collect();
    Trace::new(*learning_pulse.grid(), values, Unit::Volt)
}
