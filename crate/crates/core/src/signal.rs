//! Sampled signals, spike trains and component values shared by every other module.

use crate::error::{config_err, ensure_positive, Error, Result};

/// Tolerance, in units of one step, used when snapping a time onto the grid.
const SNAP_TOL: f64 = 1e-7;

/// Uniform sampling grid. Sample `k` sits at `t_start + k * dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    dt: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, dt: f64, n_steps: usize) -> Result<Self> {
        if !t_start.is_finite() {
            return Err(config_err("grid start time must be finite"));
        }
        ensure_positive("dt", dt)?;
        if n_steps == 0 {
            return Err(config_err("grid needs at least one step"));
        }
        Ok(Self {
            t_start,
            dt,
            n_steps,
        })
    }

    /// Grid starting at zero that covers `[0, duration)`.
    pub fn covering(duration: f64, dt: f64) -> Result<Self> {
        ensure_positive("duration", duration)?;
        ensure_positive("dt", dt)?;
        let n = (duration / dt - SNAP_TOL).ceil().max(1.0) as usize;
        Self::new(0.0, dt, n)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Time of sample `k`, computed directly so there is no accumulated drift.
    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        self.t_start + k as f64 * self.dt
    }

    /// One past the last sample time.
    pub fn t_end(&self) -> f64 {
        self.time(self.n_steps)
    }

    /// First sample index whose time is `>= t` (may be past the end or negative).
    pub fn first_index_at_or_after(&self, t: f64) -> i64 {
        ((t - self.t_start) / self.dt - SNAP_TOL).ceil() as i64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_steps).map(move |k| self.time(k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    Volt,
    Siemens,
    Dimensionless,
}

impl Unit {
    pub fn suffix(self) -> &'static str {
        match self {
            Unit::Volt => "V",
            Unit::Siemens => "S",
            Unit::Dimensionless => "",
        }
    }
}

/// A sampled signal on a [`TimeGrid`]. All samples are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    grid: TimeGrid,
    values: Vec<f64>,
    unit: Unit,
}

impl Trace {
    pub fn new(grid: TimeGrid, values: Vec<f64>, unit: Unit) -> Result<Self> {
        if values.len() != grid.n_steps() {
            return Err(config_err(format!(
                "trace has {} samples but grid has {} steps",
                values.len(),
                grid.n_steps()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(config_err(format!("trace sample {k} is not finite")));
        }
        Ok(Self { grid, values, unit })
    }

    pub fn constant(grid: TimeGrid, value: f64, unit: Unit) -> Result<Self> {
        Self::new(grid, vec![value; grid.n_steps()], unit)
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn unit(&self) -> Unit {
        self.unit
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Zero-order-hold read: the sample at the nearest grid point at or below `t`.
    pub fn at(&self, t: f64) -> Result<f64> {
        trace_at(self, t)
    }
}

/// Zero-order-hold lookup. Exact grid times return the stored sample bit-for-bit.
pub fn trace_at(trace: &Trace, t: f64) -> Result<f64> {
    let grid = trace.grid();
    if !t.is_finite() || t < grid.t_start() || t >= grid.t_end() {
        return Err(Error::Range(format!(
            "t = {t} outside [{}, {})",
            grid.t_start(),
            grid.t_end()
        )));
    }
    let pos = (t - grid.t_start()) / grid.dt();
    // Snap values within rounding of a grid point onto it before flooring.
    let mut k = (pos + SNAP_TOL).floor() as usize;
    if k >= grid.n_steps() {
        k = grid.n_steps() - 1;
    }
    Ok(trace.values()[k])
}

/// Rectangular spike train: each spike holds `amplitude` for `pulse_width` seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeTrain {
    spike_times: Vec<f64>,
    pulse_width: f64,
    amplitude: f64,
}

impl SpikeTrain {
    pub fn new(spike_times: Vec<f64>, pulse_width: f64, amplitude: f64) -> Result<Self> {
        ensure_positive("pulse_width", pulse_width)?;
        if !amplitude.is_finite() {
            return Err(config_err("spike amplitude must be finite"));
        }
        if spike_times.iter().any(|t| !t.is_finite()) {
            return Err(config_err("spike times must be finite"));
        }
        for pair in spike_times.windows(2) {
            if pair[1] <= pair[0] {
                return Err(config_err("spike times must be strictly increasing"));
            }
            if pair[1] - pair[0] < pulse_width * (1.0 - 1e-12) {
                return Err(config_err(format!(
                    "spikes at {} and {} are closer than the pulse width {pulse_width}",
                    pair[0], pair[1]
                )));
            }
        }
        Ok(Self {
            spike_times,
            pulse_width,
            amplitude,
        })
    }

    pub fn empty(pulse_width: f64, amplitude: f64) -> Result<Self> {
        Self::new(Vec::new(), pulse_width, amplitude)
    }

    /// `count` spikes at `first, first + period, ...`.
    pub fn periodic(
        first: f64,
        period: f64,
        count: usize,
        pulse_width: f64,
        amplitude: f64,
    ) -> Result<Self> {
        ensure_positive("period", period)?;
        let times = (0..count).map(|i| first + i as f64 * period).collect();
        Self::new(times, pulse_width, amplitude)
    }

    pub fn spike_times(&self) -> &[f64] {
        &self.spike_times
    }

    pub fn pulse_width(&self) -> f64 {
        self.pulse_width
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn with_amplitude(&self, amplitude: f64) -> Self {
        Self {
            amplitude,
            ..self.clone()
        }
    }

    /// Half-open sample ranges `[on, off)` during which each spike is high on `grid`.
    /// Spikes that fall (partly) outside the grid are clipped.
    pub fn step_intervals(&self, grid: &TimeGrid) -> Vec<(usize, usize)> {
        let n = grid.n_steps() as i64;
        self.spike_times
            .iter()
            .filter_map(|&s| {
                let on = grid.first_index_at_or_after(s).clamp(0, n);
                let off = grid
                    .first_index_at_or_after(s + self.pulse_width)
                    .clamp(0, n);
                (off > on).then_some((on as usize, off as usize))
            })
            .collect()
    }
}

/// Render a spike train as a voltage trace: `amplitude` on `[s, s + width)`, zero elsewhere.
pub fn spike_train_to_trace(train: &SpikeTrain, grid: &TimeGrid) -> Trace {
    let mut values = vec![0.0; grid.n_steps()];
    for (on, off) in train.step_intervals(grid) {
        values[on..off].fill(train.amplitude());
    }
    Trace {
        grid: *grid,
        values,
        unit: Unit::Volt,
    }
}

/// Signed pre/post lag. Positive means the presynaptic spike precedes the postsynaptic one.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct DeltaT(f64);

impl DeltaT {
    pub fn new(seconds: f64) -> Result<Self> {
        if seconds.is_finite() {
            Ok(Self(seconds))
        } else {
            Err(config_err("delta_t must be finite"))
        }
    }

    pub fn from_ms(ms: f64) -> Result<Self> {
        Self::new(ms * 1e-3)
    }

    pub fn seconds(self) -> f64 {
        self.0
    }

    pub fn magnitude(self) -> f64 {
        self.0.abs()
    }
}

/// Passive component values of the wiring schematic plus the op-amp supply.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentValues {
    /// Integrator input resistor (ohms).
    pub r4: f64,
    /// Integrator capacitor (farads).
    pub c1: f64,
    /// One-shot timing capacitor (farads).
    pub c3: f64,
    /// One-shot feedback divider, upper leg (ohms).
    pub r8: f64,
    /// One-shot feedback divider, lower leg (ohms).
    pub r9: f64,
    /// One-shot timing resistor (ohms).
    pub r11: f64,
    /// Total resistance of the DA potentiometer (ohms).
    pub mod_pot_total: f64,
    /// Potentiometer wiper position in `[0, 1]`.
    pub mod_wiper: f64,
    /// Symmetric op-amp saturation level (volts).
    pub v_rail: f64,
    /// Input level at which a one-shot fires (volts).
    pub v_threshold_oneshot: f64,
}

impl Default for ComponentValues {
    fn default() -> Self {
        Self {
            r4: 47e3,
            c1: 100e-9,
            c3: 1e-6,
            r8: 10e3,
            r9: 10e3,
            r11: 30e3,
            mod_pot_total: 50e3,
            mod_wiper: 0.5,
            v_rail: 12.0,
            v_threshold_oneshot: 0.05,
        }
    }
}

impl ComponentValues {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("r4", self.r4),
            ("c1", self.c1),
            ("c3", self.c3),
            ("r8", self.r8),
            ("r9", self.r9),
            ("r11", self.r11),
            ("mod_pot_total", self.mod_pot_total),
            ("v_rail", self.v_rail),
        ] {
            ensure_positive(name, v)?;
        }
        if !(0.0..=1.0).contains(&self.mod_wiper) {
            return Err(config_err(format!(
                "mod_wiper must lie in [0, 1], got {}",
                self.mod_wiper
            )));
        }
        if !self.v_threshold_oneshot.is_finite() || self.v_threshold_oneshot >= self.v_rail {
            return Err(config_err(
                "v_threshold_oneshot must be finite and below v_rail",
            ));
        }
        Ok(())
    }

    /// Integrator time constant R4 * C1.
    pub fn integrator_tau(&self) -> f64 {
        self.r4 * self.c1
    }

    /// One-shot pulse duration C3 * R11 * ln(1 + R8/R9).
    pub fn one_shot_duration(&self) -> Result<f64> {
        crate::blocks::one_shot_duration(self.c3, self.r11, self.r8, self.r9)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_at_constant() {
        let g = TimeGrid::new(0.0, 1e-3, 50).unwrap();
        let tr = Trace::constant(g, 1.0, Unit::Volt).unwrap();
        for t in [0.0, 0.0123, 0.049] {
            assert_eq!(trace_at(&tr, t).unwrap(), 1.0);
        }
    }

    #[test]
    fn trace_at_zero_order_hold() {
        let g = TimeGrid::new(0.0, 1.0, 3).unwrap();
        let tr = Trace::new(g, vec![0.0, 1.0, 2.0], Unit::Volt).unwrap();
        assert_eq!(trace_at(&tr, 1.5).unwrap(), 1.0);
        assert_eq!(trace_at(&tr, 2.0).unwrap(), 2.0);
    }

    #[test]
    fn trace_at_one_past_end_is_range_error() {
        let g = TimeGrid::new(0.5, 0.25, 4).unwrap();
        let tr = Trace::constant(g, 0.0, Unit::Volt).unwrap();
        let end = g.t_start() + g.n_steps() as f64 * g.dt();
        assert!(matches!(trace_at(&tr, end), Err(Error::Range(_))));
        assert!(matches!(trace_at(&tr, 0.4), Err(Error::Range(_))));
    }

    #[test]
    fn trace_at_grid_points_is_exact() {
        let g = TimeGrid::new(0.001, 1e-4, 1000).unwrap();
        let values: Vec<f64> = (0..1000).map(|k| (k as f64 * 0.37).sin()).collect();
        let tr = Trace::new(g, values.clone(), Unit::Volt).unwrap();
        for k in (0..1000).step_by(7) {
            assert_eq!(
                trace_at(&tr, g.time(k)).unwrap().to_bits(),
                values[k].to_bits()
            );
        }
    }

    #[test]
    fn grid_time_has_no_drift() {
        let g = TimeGrid::new(0.0, 0.1, 1_000_001).unwrap();
        assert_eq!(g.time(1_000_000), 1_000_000.0 * 0.1);
    }

    #[test]
    fn empty_train_gives_zero_trace() {
        let g = TimeGrid::new(0.0, 1e-4, 100).unwrap();
        let tr = spike_train_to_trace(&SpikeTrain::empty(1e-3, 1.0).unwrap(), &g);
        assert!(tr.values().iter().all(|&v| v == 0.0));
        assert_eq!(tr.unit(), Unit::Volt);
    }

    #[test]
    fn single_spike_covers_ten_samples() {
        let g = TimeGrid::new(0.0, 1e-4, 100).unwrap();
        let train = SpikeTrain::new(vec![0.0], 1e-3, 1.0).unwrap();
        let tr = spike_train_to_trace(&train, &g);
        assert!(tr.values()[..10].iter().all(|&v| v == 1.0));
        assert!(tr.values()[10..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn two_spikes_are_disjoint_rectangles() {
        let g = TimeGrid::new(0.0, 1e-4, 200).unwrap();
        let train = SpikeTrain::new(vec![0.002, 0.005], 1e-3, 2.0).unwrap();
        let tr = spike_train_to_trace(&train, &g);
        let on = tr.values().iter().filter(|&&v| v != 0.0).count();
        assert_eq!(on, 20);
        assert_eq!(tr.values()[29], 2.0);
        assert_eq!(tr.values()[30], 0.0);
        assert_eq!(tr.values()[20], 2.0);
        assert_eq!(tr.values()[50], 2.0);
        assert_eq!(tr.values()[60], 0.0);
    }

    #[test]
    fn spikes_outside_grid_are_clipped() {
        let g = TimeGrid::new(0.0, 1e-4, 10).unwrap();
        let train = SpikeTrain::new(vec![-0.0005, 0.00095, 0.5], 1e-3, 1.0).unwrap();
        let tr = spike_train_to_trace(&train, &g);
        // first spike contributes samples 0..5, second starts at sample 10 (off-grid)
        assert_eq!(tr.values().iter().filter(|&&v| v == 1.0).count(), 5);
    }

    #[test]
    fn spike_train_rejects_overlap() {
        assert!(SpikeTrain::new(vec![0.0, 0.0005], 1e-3, 1.0).is_err());
        assert!(SpikeTrain::new(vec![0.001, 0.0], 1e-4, 1.0).is_err());
        assert!(SpikeTrain::new(vec![0.0], 0.0, 1.0).is_err());
    }

    #[test]
    fn component_defaults_validate() {
        let cv = ComponentValues::default();
        cv.validate().unwrap();
        assert!((cv.integrator_tau() - 4.7e-3).abs() < 1e-15);
        let bad = ComponentValues { r8: 0.0, ..cv };
        assert!(bad.validate().is_err());
        let bad = ComponentValues {
            mod_wiper: 1.5,
            ..cv
        };
        assert!(bad.validate().is_err());
    }
}
