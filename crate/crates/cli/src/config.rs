//! TOML run configuration. Every key is optional; unknown keys are rejected.

use serde::Deserialize;

use memsim_core::blocks::{check_integrator_resolution, ModMode};
use memsim_core::experiments::{
    istdp_da_settings, stdp_da_settings, ConductanceParams, DaSetting, ExperimentParams,
    CANONICAL_DELTA_T_MS, DA_SWEEP_DELTA_T_MS,
};
use memsim_core::neuron::{LoopMode, NetlistParams, OneShotSense};
use memsim_core::signal::{DeltaT, SpikeTrain};

use crate::error::{CliError, Result};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    r4: Option<f64>,
    c1: Option<f64>,
    c3: Option<f64>,
    r8: Option<f64>,
    r9: Option<f64>,
    r11: Option<f64>,
    mod_pot_total_ohms: Option<f64>,
    mod_wiper: Option<f64>,
    mod_mode: Option<String>,
    v_rail: Option<f64>,
    v_threshold_oneshot: Option<f64>,
    mode: Option<String>,
    oneshot_sense: Option<String>,
    #[serde(default)]
    memristor: RawMemristor,
    #[serde(default)]
    sim: RawSim,
    #[serde(default)]
    experiment: RawExperiment,
    #[serde(default)]
    conductance: RawConductance,
    #[serde(default)]
    modulation: RawModulation,
    #[serde(default)]
    soma: RawSoma,
    #[serde(default)]
    tuning: RawTuning,
    #[serde(default)]
    spikes: RawSpikes,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMemristor {
    g_min: Option<f64>,
    g_max: Option<f64>,
    /// Initial conductance of the excitatory device; midpoint when omitted.
    g0: Option<f64>,
    /// Initial conductance of the inhibitory device.
    g0_inh: Option<f64>,
    v_th_set: Option<f64>,
    v_th_reset: Option<f64>,
    mu: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSim {
    dt: Option<f64>,
    duration: Option<f64>,
    csv_stride: Option<usize>,
    probes: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    t_pre: Option<f64>,
    delta_t: Option<Vec<f64>>,
    da_delta_t: Option<f64>,
    da_settings: Option<Vec<(String, f64)>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConductance {
    duration: Option<f64>,
    pre_start: Option<f64>,
    pre_period: Option<f64>,
    post_start: Option<f64>,
    post_period: Option<f64>,
    wiper_low: Option<f64>,
    wiper_high: Option<f64>,
    switch_time: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModulation {
    gain_min: Option<f64>,
    gain_max: Option<f64>,
    sombrero_center: Option<f64>,
    sombrero_width: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSoma {
    tau_mem: Option<f64>,
    v_threshold: Option<f64>,
    v_reset: Option<f64>,
    refractory: Option<f64>,
    spike_width: Option<f64>,
    spike_amplitude: Option<f64>,
    c_norm: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTuning {
    v_oneshot_high: Option<f64>,
    tau_coincidence: Option<f64>,
    tau_output: Option<f64>,
    hebbian_gain: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpikes {
    width: Option<f64>,
    amplitude: Option<f64>,
    /// Explicit trains for `simulate`; a single pair at `t_pre` is used otherwise.
    pre_times: Option<Vec<f64>>,
    post_times: Option<Vec<f64>>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: ExperimentParams,
    pub mode: LoopMode,
    pub csv_stride: usize,
    /// Probes for `simulate`; empty means every node.
    pub probes: Vec<String>,
    pub delta_ts: Vec<DeltaT>,
    pub da_delta_t: DeltaT,
    pub da_stdp: Vec<DaSetting>,
    pub da_istdp: Vec<DaSetting>,
    pub conductance: ConductanceParams,
    /// Trains used by `simulate`.
    pub pre_train: SpikeTrain,
    pub post_train: SpikeTrain,
}

impl Default for RunConfig {
    fn default() -> Self {
        parse_config("").expect("defaults are valid")
    }
}

fn cfg_err(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn set<T: Copy>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(cfg_err)?;
    let mut np = NetlistParams::default();

    let cv = &mut np.components;
    set(&mut cv.r4, raw.r4);
    set(&mut cv.c1, raw.c1);
    set(&mut cv.c3, raw.c3);
    set(&mut cv.r8, raw.r8);
    set(&mut cv.r9, raw.r9);
    set(&mut cv.r11, raw.r11);
    set(&mut cv.mod_pot_total, raw.mod_pot_total_ohms);
    set(&mut cv.mod_wiper, raw.mod_wiper);
    set(&mut cv.v_rail, raw.v_rail);
    set(&mut cv.v_threshold_oneshot, raw.v_threshold_oneshot);
    cv.validate().map_err(cfg_err)?;

    let m = &mut np.modulation;
    m.wiper = np.components.mod_wiper;
    if let Some(mode) = &raw.mod_mode {
        m.mode = ModMode::parse(mode).map_err(cfg_err)?;
    }
    set(&mut m.gain_min, raw.modulation.gain_min);
    set(&mut m.gain_max, raw.modulation.gain_max);
    set(&mut m.sombrero_center, raw.modulation.sombrero_center);
    set(&mut m.sombrero_width, raw.modulation.sombrero_width);

    let mode = match &raw.mode {
        Some(s) => LoopMode::parse(s).map_err(cfg_err)?,
        None => LoopMode::OpenLoop,
    };
    if let Some(s) = &raw.oneshot_sense {
        np.oneshot_sense = OneShotSense::parse(s).map_err(cfg_err)?;
    }

    let rm = &raw.memristor;
    let mut mem = np.memristor;
    set(&mut mem.g_min, rm.g_min);
    set(&mut mem.g_max, rm.g_max);
    set(&mut mem.v_th_set, rm.v_th_set);
    set(&mut mem.v_th_reset, rm.v_th_reset);
    set(&mut mem.mu, rm.mu);
    np.memristor = mem.with_g(rm.g0.unwrap_or_else(|| mem.midpoint()));
    np.memristor_inh = mem.with_g(
        rm.g0_inh
            .unwrap_or(mem.g_min + 0.1 * (mem.g_max - mem.g_min)),
    );

    let s = &mut np.soma;
    set(&mut s.tau_mem, raw.soma.tau_mem);
    set(&mut s.v_threshold, raw.soma.v_threshold);
    set(&mut s.v_reset, raw.soma.v_reset);
    set(&mut s.refractory, raw.soma.refractory);
    set(&mut s.spike_width, raw.soma.spike_width);
    set(&mut s.spike_amplitude, raw.soma.spike_amplitude);
    set(&mut s.c_norm, raw.soma.c_norm);

    let t = &mut np.tuning;
    set(&mut t.v_oneshot_high, raw.tuning.v_oneshot_high);
    set(&mut t.tau_coincidence, raw.tuning.tau_coincidence);
    set(&mut t.tau_output, raw.tuning.tau_output);
    set(&mut t.hebbian_gain, raw.tuning.hebbian_gain);

    let mut width = np.pre_train.pulse_width();
    let mut amplitude = np.pre_train.amplitude();
    set(&mut width, raw.spikes.width);
    set(&mut amplitude, raw.spikes.amplitude);

    let mut ex = ExperimentParams::default();
    set(&mut ex.dt, raw.sim.dt);
    set(&mut ex.duration, raw.sim.duration);
    set(&mut ex.t_pre, raw.experiment.t_pre);

    let da_delta_t = DeltaT::new(
        raw.experiment
            .da_delta_t
            .unwrap_or(DA_SWEEP_DELTA_T_MS * 1e-3),
    )
    .map_err(cfg_err)?;
    let delta_ts = match &raw.experiment.delta_t {
        Some(v) => v
            .iter()
            .map(|&d| DeltaT::new(d))
            .collect::<std::result::Result<Vec<_>, _>>(),
        None => CANONICAL_DELTA_T_MS
            .iter()
            .map(|&ms| DeltaT::from_ms(ms))
            .collect(),
    }
    .map_err(cfg_err)?;
    if delta_ts.is_empty() {
        return Err(CliError::Config(
            "experiment.delta_t must not be empty".into(),
        ));
    }

    let (da_stdp, da_istdp) = match &raw.experiment.da_settings {
        Some(list) => {
            let s = list
                .iter()
                .map(|(label, w)| DaSetting::new(label.clone(), *w))
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(cfg_err)?;
            if s.is_empty() {
                return Err(CliError::Config(
                    "experiment.da_settings must not be empty".into(),
                ));
            }
            (s.clone(), s)
        }
        None => (stdp_da_settings(), istdp_da_settings()),
    };

    let pre_train = SpikeTrain::new(
        raw.spikes.pre_times.clone().unwrap_or(vec![ex.t_pre]),
        width,
        amplitude,
    )
    .map_err(cfg_err)?;
    let post_train = SpikeTrain::new(
        raw.spikes
            .post_times
            .clone()
            .unwrap_or(vec![ex.t_pre + da_delta_t.seconds()]),
        width,
        amplitude,
    )
    .map_err(cfg_err)?;
    np.pre_train = pre_train.clone();
    np.post_train = post_train.clone();
    ex.netlist = np;
    ex.validate().map_err(cfg_err)?;

    let tune = &ex.netlist.tuning;
    for tau in [
        ex.netlist.components.integrator_tau(),
        tune.tau_coincidence,
        tune.tau_output,
    ] {
        check_integrator_resolution(ex.dt, tau).map_err(cfg_err)?;
    }
    if ex.netlist.soma.spike_width < ex.dt {
        return Err(CliError::Config(
            "soma.spike_width must be at least sim.dt".into(),
        ));
    }
    if ex.netlist.components.one_shot_duration().map_err(cfg_err)? < ex.dt {
        return Err(CliError::Config(
            "one-shot duration must be at least sim.dt".into(),
        ));
    }

    let rc = &raw.conductance;
    let mut conductance = ConductanceParams::default();
    set(&mut conductance.duration, rc.duration);
    set(&mut conductance.pre_start, rc.pre_start);
    set(&mut conductance.pre_period, rc.pre_period);
    set(&mut conductance.post_start, rc.post_start);
    set(&mut conductance.post_period, rc.post_period);
    set(&mut conductance.wiper_low, rc.wiper_low);
    set(&mut conductance.wiper_high, rc.wiper_high);
    set(&mut conductance.switch_time, rc.switch_time);
    conductance.validate().map_err(cfg_err)?;

    let csv_stride = raw.sim.csv_stride.unwrap_or(1);
    if csv_stride == 0 {
        return Err(CliError::Config("sim.csv_stride must be >= 1".into()));
    }

    Ok(RunConfig {
        experiment: ex,
        mode,
        csv_stride,
        probes: raw.sim.probes.unwrap_or_default(),
        delta_ts,
        da_delta_t,
        da_stdp,
        da_istdp,
        conductance,
        pre_train,
        post_train,
    })
}
