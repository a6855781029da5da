//! Learning-curve sweeps and the conductance-evolution run.
//!
//! Every sweep point is an independent open-loop simulation, so sweeps run in
//! parallel on the current rayon pool. Results come back sorted by their key.

use rayon::prelude::*;

use crate::blocks::apply_modulation_schedule;
use crate::engine::{run, SimConfig};
use crate::error::{config_err, ensure_positive, Error, Result};
use crate::memristor::{memristor_drive, MemristorState};
use crate::neuron::{build_standard_netlist, ids, LoopMode, NetlistParams};
use crate::signal::{DeltaT, SpikeTrain, TimeGrid, Trace, Unit};

/// Lags of the canonical learning-curve sweeps, in milliseconds.
pub const CANONICAL_DELTA_T_MS: [f64; 10] =
    [-16.0, -8.0, -4.0, -2.0, -1.0, 1.0, 2.0, 4.0, 8.0, 16.0];

/// Lag used for the dopamine sweeps.
pub const DA_SWEEP_DELTA_T_MS: f64 = 2.0;

/// Pot settings used for the excitatory dopamine sweep.
pub const STDP_DA_LABELS: [&str; 4] = ["0/50k", "25k/25k", "37.5k/12.5k", "50k/0"];

/// Pot settings used for the inhibitory dopamine sweep.
pub const ISTDP_DA_LABELS: [&str; 4] = ["0/1M", "250k/750k", "500k/500k", "750k/250k"];

/// Simulation setup shared by all experiments.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentParams {
    /// Netlist parameters. Spike times of the trains are replaced per run;
    /// width and amplitude are kept.
    pub netlist: NetlistParams,
    pub dt: f64,
    pub duration: f64,
    /// Presynaptic spike time of a single-pair run.
    pub t_pre: f64,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        Self {
            netlist: NetlistParams::default(),
            dt: 1e-6,
            duration: 0.1,
            t_pre: 0.05,
        }
    }
}

impl ExperimentParams {
    pub fn grid(&self) -> Result<TimeGrid> {
        TimeGrid::covering(self.duration, self.dt)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("dt", self.dt)?;
        ensure_positive("duration", self.duration)?;
        if !self.t_pre.is_finite() {
            return Err(config_err("t_pre must be finite"));
        }
        self.netlist.validate()
    }

    fn pair_netlist(
        &self,
        delta_t: DeltaT,
        wiper: Option<f64>,
    ) -> Result<(NetlistParams, TimeGrid)> {
        let grid = self.grid()?;
        let mut p = self.netlist.clone();
        let t_post = self.t_pre + delta_t.seconds();
        for (t, width) in [
            (self.t_pre, p.pre_train.pulse_width()),
            (t_post, p.post_train.pulse_width()),
        ] {
            if t < grid.t_start() || t + width > grid.t_end() {
                return Err(Error::Protocol(format!(
                    "spike at {t} s does not fit on the grid [{}, {}) s",
                    grid.t_start(),
                    grid.t_end()
                )));
            }
        }
        p.pre_train = SpikeTrain::new(
            vec![self.t_pre],
            p.pre_train.pulse_width(),
            p.pre_train.amplitude(),
        )?;
        p.post_train = SpikeTrain::new(
            vec![t_post],
            p.post_train.pulse_width(),
            p.post_train.amplitude(),
        )?;
        if let Some(w) = wiper {
            p.modulation = p.modulation.with_wiper(w);
        }
        Ok((p, grid))
    }

    /// Run one pre/post pair and return the probed output trace.
    pub fn run_pair(&self, delta_t: DeltaT, wiper: Option<f64>, probe: &str) -> Result<Trace> {
        let (p, grid) = self.pair_netlist(delta_t, wiper)?;
        let netlist = build_standard_netlist(&p, LoopMode::OpenLoop)?;
        let mut res = run(&netlist, &SimConfig::new(grid, [probe]))?;
        Ok(res.traces.remove(probe).expect("probe recorded"))
    }

    /// Sample range over which a pair's weight change is read.
    fn window(&self, delta_t: DeltaT, grid: &TimeGrid) -> (usize, usize) {
        let t_post = self.t_pre + delta_t.seconds();
        let first = self.t_pre.min(t_post);
        let last = self.t_pre.max(t_post);
        let tau = self.netlist.components.integrator_tau();
        let n = grid.n_steps() as i64;
        let a = grid.first_index_at_or_after(first - 5e-3).clamp(0, n) as usize;
        let b = grid.first_index_at_or_after(last + 5.0 * tau).clamp(0, n) as usize;
        (a, b.max(a))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LearningCurvePoint {
    pub delta_t: DeltaT,
    /// Signed extremum of the output in the measurement window, volts.
    pub dw: f64,
}

/// A dopamine pot setting: `a/b` resistances with the wiper at `a / (a + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DaSetting {
    pub label: String,
    pub wiper: f64,
}

impl DaSetting {
    pub fn new(label: impl Into<String>, wiper: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&wiper) {
            return Err(config_err(format!("wiper must lie in [0, 1], got {wiper}")));
        }
        Ok(Self {
            label: label.into(),
            wiper,
        })
    }

    /// Parse labels like `25k/25k`, `0/1M` or `37.5k/12.5k`.
    pub fn from_label(label: &str) -> Result<Self> {
        let (a, b) = label
            .split_once('/')
            .ok_or_else(|| config_err(format!("pot label '{label}' is not of the form a/b")))?;
        let a = parse_ohms(a)?;
        let b = parse_ohms(b)?;
        if a + b <= 0.0 {
            return Err(config_err(format!(
                "pot label '{label}' has zero total resistance"
            )));
        }
        Self::new(label, a / (a + b))
    }
}

fn parse_ohms(s: &str) -> Result<f64> {
    let s = s.trim();
    let (num, scale) = match s.chars().last() {
        Some('k') | Some('K') => (&s[..s.len() - 1], 1e3),
        Some('M') => (&s[..s.len() - 1], 1e6),
        _ => (s, 1.0),
    };
    let v: f64 = num
        .trim()
        .parse()
        .map_err(|_| config_err(format!("bad resistance '{s}'")))?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(config_err(format!("bad resistance '{s}'")));
    }
    Ok(v * scale)
}

pub fn stdp_da_settings() -> Vec<DaSetting> {
    STDP_DA_LABELS
        .iter()
        .map(|l| DaSetting::from_label(l).expect("valid label"))
        .collect()
}

pub fn istdp_da_settings() -> Vec<DaSetting> {
    ISTDP_DA_LABELS
        .iter()
        .map(|l| DaSetting::from_label(l).expect("valid label"))
        .collect()
}

pub fn canonical_delta_ts() -> Vec<DeltaT> {
    CANONICAL_DELTA_T_MS
        .iter()
        .map(|&ms| DeltaT::from_ms(ms).expect("nonzero"))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DaSweepPoint {
    pub label: String,
    pub wiper: f64,
    /// Largest |output| over the measurement window, volts.
    pub peak: f64,
}

/// Value with the largest magnitude, sign kept. The earliest sample wins a tie.
pub fn signed_extremum(values: &[f64]) -> f64 {
    values.iter().fold(
        0.0f64,
        |best, &v| if v.abs() > best.abs() { v } else { best },
    )
}

/// Inverse-lag reference curve `sgn(dt) * min(a / |dt|, dw_max)`; `dw_max` at zero lag.
pub fn reference_hebbian_dw(delta_t: DeltaT, a: f64, dw_max: f64) -> f64 {
    let m = delta_t.magnitude();
    if m == 0.0 {
        return dw_max;
    }
    delta_t.seconds().signum() * (a / m).min(dw_max)
}

fn sweep(
    params: &ExperimentParams,
    delta_ts: &[DeltaT],
    probe: &str,
) -> Result<Vec<LearningCurvePoint>> {
    params.validate()?;
    let grid = params.grid()?;
    let mut points = delta_ts
        .par_iter()
        .map(|&dt| {
            let trace = params.run_pair(dt, None, probe)?;
            let (a, b) = params.window(dt, &grid);
            Ok(LearningCurvePoint {
                delta_t: dt,
                dw: signed_extremum(&trace.values()[a..b]),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|x, y| x.delta_t.seconds().total_cmp(&y.delta_t.seconds()));
    Ok(points)
}

/// Excitatory learning curve: signed extremum of the Hebbian output per lag.
pub fn sweep_stdp(
    params: &ExperimentParams,
    delta_ts: &[DeltaT],
) -> Result<Vec<LearningCurvePoint>> {
    sweep(params, delta_ts, ids::HEBBIAN)
}

/// Inhibitory learning curve: signed extremum of the inhibitor output per lag.
pub fn sweep_istdp(
    params: &ExperimentParams,
    delta_ts: &[DeltaT],
) -> Result<Vec<LearningCurvePoint>> {
    sweep(params, delta_ts, ids::INHIBITOR)
}

fn sweep_da(
    params: &ExperimentParams,
    settings: &[DaSetting],
    delta_t: DeltaT,
    probe: &str,
) -> Result<Vec<DaSweepPoint>> {
    params.validate()?;
    let grid = params.grid()?;
    let (a, b) = params.window(delta_t, &grid);
    let mut points = settings
        .par_iter()
        .map(|s| {
            DaSetting::new(s.label.clone(), s.wiper)?;
            let trace = params.run_pair(delta_t, Some(s.wiper), probe)?;
            Ok(DaSweepPoint {
                label: s.label.clone(),
                wiper: s.wiper,
                peak: trace.values()[a..b]
                    .iter()
                    .fold(0.0f64, |m, v| m.max(v.abs())),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    points.sort_by(|x, y| x.wiper.total_cmp(&y.wiper));
    Ok(points)
}

pub fn sweep_da_stdp(
    params: &ExperimentParams,
    settings: &[DaSetting],
    delta_t: DeltaT,
) -> Result<Vec<DaSweepPoint>> {
    sweep_da(params, settings, delta_t, ids::HEBBIAN)
}

pub fn sweep_da_istdp(
    params: &ExperimentParams,
    settings: &[DaSetting],
    delta_t: DeltaT,
) -> Result<Vec<DaSweepPoint>> {
    sweep_da(params, settings, delta_t, ids::INHIBITOR)
}

/// Spike trains and dopamine schedule of the conductance run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConductanceParams {
    pub duration: f64,
    pub pre_start: f64,
    pub pre_period: f64,
    pub post_start: f64,
    pub post_period: f64,
    pub wiper_low: f64,
    pub wiper_high: f64,
    /// Time at which the wiper steps from low to high.
    pub switch_time: f64,
}

impl Default for ConductanceParams {
    fn default() -> Self {
        Self {
            duration: 1.0,
            pre_start: 5e-3,
            pre_period: 40e-3,
            post_start: 6e-3,
            post_period: 40.25e-3,
            wiper_low: 0.25,
            wiper_high: 1.0,
            switch_time: 0.5,
        }
    }
}

impl ConductanceParams {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("duration", self.duration)?;
        ensure_positive("pre_period", self.pre_period)?;
        ensure_positive("post_period", self.post_period)?;
        for (name, w) in [
            ("wiper_low", self.wiper_low),
            ("wiper_high", self.wiper_high),
        ] {
            if !(0.0..=1.0).contains(&w) {
                return Err(config_err(format!("{name} must lie in [0, 1]")));
            }
        }
        if !(self.pre_start >= 0.0 && self.post_start >= 0.0) {
            return Err(config_err("train start times must be >= 0"));
        }
        if !(self.switch_time > 0.0 && self.switch_time < self.duration) {
            return Err(config_err("switch_time must lie inside the run"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConductanceRun {
    /// Wiper position over time.
    pub dopamine: Trace,
    /// Modulated learning pulse applied to the device, volts.
    pub pulse: Trace,
    /// Device conductance, siemens.
    pub conductance: Trace,
    pub final_state: MemristorState,
}

impl ConductanceRun {
    /// Mean conductance slope over `[t_a, t_b)`, siemens per second.
    pub fn slope(&self, t_a: f64, t_b: f64) -> Result<f64> {
        let ga = self.conductance.at(t_a)?;
        let gb = self.conductance.at(t_b)?;
        Ok((gb - ga) / (t_b - t_a))
    }
}

fn periodic_until(start: f64, period: f64, end: f64, like: &SpikeTrain) -> Result<SpikeTrain> {
    let mut times = Vec::new();
    let mut i = 0usize;
    loop {
        let t = start + i as f64 * period;
        if t + like.pulse_width() > end {
            break;
        }
        times.push(t);
        i += 1;
    }
    SpikeTrain::new(times, like.pulse_width(), like.amplitude())
}

impl ConductanceParams {
    /// Dopamine schedule and pre/post trains on a grid of step `dt`. Pulse
    /// width and amplitude are taken from `like_pre` and `like_post`.
    pub fn inputs(
        &self,
        dt: f64,
        like_pre: &SpikeTrain,
        like_post: &SpikeTrain,
    ) -> Result<(Trace, SpikeTrain, SpikeTrain)> {
        self.validate()?;
        let grid = TimeGrid::covering(self.duration, dt)?;
        let wipers = grid
            .times()
            .map(|t| {
                if t < self.switch_time {
                    self.wiper_low
                } else {
                    self.wiper_high
                }
            })
            .collect();
        let da = Trace::new(grid, wipers, Unit::Dimensionless)?;
        let pre = periodic_until(self.pre_start, self.pre_period, grid.t_end(), like_pre)?;
        let post = periodic_until(self.post_start, self.post_period, grid.t_end(), like_post)?;
        Ok((da, pre, post))
    }
}

/// Drive a memristor with the Hebbian output of `pre`/`post`, scaled sample by
/// sample by the modulation gain of the wiper schedule `da_schedule`.
///
/// The run uses the grid of `da_schedule`; `params.dt` and `params.duration` are ignored.
pub fn run_conductance_experiment(
    params: &ExperimentParams,
    da_schedule: &Trace,
    pre: &SpikeTrain,
    post: &SpikeTrain,
) -> Result<ConductanceRun> {
    params.netlist.validate()?;
    let grid = *da_schedule.grid();
    if da_schedule
        .values()
        .iter()
        .any(|w| !(0.0..=1.0).contains(w))
    {
        return Err(config_err("dopamine schedule must stay within [0, 1]"));
    }
    for train in [pre, post] {
        if let Some(&t) = train
            .spike_times()
            .iter()
            .find(|&&t| t < grid.t_start() || t + train.pulse_width() > grid.t_end())
        {
            return Err(Error::Protocol(format!(
                "spike at {t} s does not fit on the run grid"
            )));
        }
    }
    let mut p = params.netlist.clone();
    p.pre_train = pre.clone();
    p.post_train = post.clone();
    let netlist = build_standard_netlist(&p, LoopMode::OpenLoop)?;
    let mut res = run(&netlist, &SimConfig::new(grid, [ids::U11]))?;
    let raw = res.traces.remove(ids::U11).expect("probe recorded");
    let pulse = apply_modulation_schedule(&raw, da_schedule, &p.modulation, p.components.v_rail)?;
    let (final_state, conductance) = memristor_drive(p.memristor, &pulse)?;
    Ok(ConductanceRun {
        dopamine: da_schedule.clone(),
        pulse,
        conductance,
        final_state,
    })
}

/// [`run_conductance_experiment`] with inputs built from `cp`.
pub fn run_stepped_conductance(
    params: &ExperimentParams,
    cp: &ConductanceParams,
) -> Result<ConductanceRun> {
    params.validate()?;
    let (da, pre, post) = cp.inputs(
        params.dt,
        &params.netlist.pre_train,
        &params.netlist.post_train,
    )?;
    if pre.spike_times().is_empty() || post.spike_times().is_empty() {
        return Err(Error::Protocol(
            "no spike pair fits in the conductance run".into(),
        ));
    }
    run_conductance_experiment(params, &da, &pre, &post)
}
