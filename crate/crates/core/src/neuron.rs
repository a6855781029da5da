//! Block graph of the modulated excitatory/inhibitory neuron and its soma.
//!
//! The canonical graph ([`build_standard_netlist`]) has these stages:
//!
//! ```text
//! tpre  -> u2 (integrator) -> u3 (one-shot) --------------+--> u1 (saturating inverting adder)
//! tpost -> u6 (integrator) -> u5 (one-shot) -> u8 (inv) --+        |
//!                                        u1, u3, u8 -> u7 (adder-integrator) -> u13 (mod) -> inhibitor
//! u2, u6 -> u9 (inverting adder) -> u10 (controlled inverter) -+
//! u6 vs u2 -> q1 (comparator key) -> u10.ctrl                  |
//!                          u10, u2, u6 -> u11 (output integrator) -> u12 (mod) -> hebbian
//! ```
//!
//! `q1` closes when the postsynaptic trace exceeds the presynaptic one, so the
//! Hebbian stage sees `+2 * min(pre, post)` once the post spike is the more
//! recent and `-2 * min(pre, post)` otherwise. The one-shot pulses of both paths
//! saturate `u1` only while they overlap, and `u7` integrates that excess as the
//! inhibitory coincidence signal. In closed-loop mode the soma replaces `tpost`
//! and reads two memristive synapses.

use std::collections::{BTreeMap, BTreeSet};

use crate::blocks::ModStageConfig;
use crate::error::{config_err, ensure_positive, Error, Result};
use crate::memristor::MemristorState;
use crate::signal::{ComponentValues, SpikeTrain, Unit};

pub mod ids {
    pub const TPRE: &str = "tpre";
    pub const TPOST: &str = "tpost";
    pub const U1: &str = "u1";
    pub const U2: &str = "u2";
    pub const U3: &str = "u3";
    pub const U5: &str = "u5";
    pub const U6: &str = "u6";
    pub const U7: &str = "u7";
    pub const U8: &str = "u8";
    pub const U9: &str = "u9";
    pub const U10: &str = "u10";
    pub const U11: &str = "u11";
    pub const U12: &str = "u12";
    pub const U13: &str = "u13";
    pub const Q1: &str = "q1";
    pub const HEBBIAN: &str = "hebbian";
    pub const INHIBITOR: &str = "inhibitor";
    pub const SOMA: &str = "soma";
    pub const AXON: &str = "axon";
    pub const MEM_EXC: &str = "mem_exc";
    pub const MEM_INH: &str = "mem_inh";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopMode {
    OpenLoop,
    ClosedLoop,
}

impl LoopMode {
    pub fn as_str(self) -> &'static str {
        match self {
            LoopMode::OpenLoop => "open_loop",
            LoopMode::ClosedLoop => "closed_loop",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "open_loop" => Ok(LoopMode::OpenLoop),
            "closed_loop" => Ok(LoopMode::ClosedLoop),
            other => Err(config_err(format!("unknown loop mode '{other}'"))),
        }
    }
}

/// Which node the one-shots compare against their threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OneShotSense {
    /// The output of the preceding integrator (U2 / U6).
    IntegratorOutput,
    /// The raw spike voltage presented at the synapse terminal.
    MemristorNode,
}

impl OneShotSense {
    pub fn as_str(self) -> &'static str {
        match self {
            OneShotSense::IntegratorOutput => "integrator_output",
            OneShotSense::MemristorNode => "memristor_node",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "integrator_output" => Ok(OneShotSense::IntegratorOutput),
            "memristor_node" => Ok(OneShotSense::MemristorNode),
            other => Err(config_err(format!("unknown one-shot sense '{other}'"))),
        }
    }
}

/// Leaky integrate-and-fire soma parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SomaConfig {
    pub tau_mem: f64,
    pub v_threshold: f64,
    pub v_reset: f64,
    pub refractory: f64,
    pub spike_width: f64,
    pub spike_amplitude: f64,
    /// Current-to-voltage normalization (farads).
    pub c_norm: f64,
}

impl Default for SomaConfig {
    fn default() -> Self {
        Self {
            tau_mem: 10e-3,
            v_threshold: 1.0,
            v_reset: 0.0,
            refractory: 2e-3,
            spike_width: 100e-6,
            spike_amplitude: 5.0,
            c_norm: 1e-9,
        }
    }
}

impl SomaConfig {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("tau_mem", self.tau_mem)?;
        ensure_positive("spike_width", self.spike_width)?;
        ensure_positive("c_norm", self.c_norm)?;
        if !(self.refractory.is_finite() && self.refractory >= self.spike_width) {
            return Err(config_err("refractory must be >= spike_width"));
        }
        if !(self.v_threshold.is_finite()
            && self.v_reset.is_finite()
            && self.v_reset < self.v_threshold)
        {
            return Err(config_err("soma needs v_reset < v_threshold"));
        }
        if !self.spike_amplitude.is_finite() {
            return Err(config_err("spike_amplitude must be finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SomaState {
    pub v: f64,
    pub refractory_remaining: f64,
}

/// One step of the leaky integrate-and-fire soma. Returns the new state and
/// whether the membrane crossed threshold during this step.
pub fn soma_step(
    state: SomaState,
    i_exc: f64,
    i_inh: f64,
    dt: f64,
    cfg: &SomaConfig,
) -> (SomaState, bool) {
    if state.refractory_remaining > dt * 1e-6 {
        let remaining = state.refractory_remaining - dt;
        return (
            SomaState {
                v: cfg.v_reset,
                refractory_remaining: if remaining <= dt * 1e-6 {
                    0.0
                } else {
                    remaining
                },
            },
            false,
        );
    }
    let v = state.v + dt * (-state.v / cfg.tau_mem + (i_exc - i_inh) / cfg.c_norm);
    if v >= cfg.v_threshold {
        (
            SomaState {
                v: cfg.v_reset,
                refractory_remaining: cfg.refractory,
            },
            true,
        )
    } else {
        (
            SomaState {
                v,
                refractory_remaining: 0.0,
            },
            false,
        )
    }
}

/// Behavioral block kinds and their parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockKind {
    Generator {
        train: SpikeTrain,
    },
    /// Lag of the weighted input sum, ports `in0..in{n-1}`.
    Integrator {
        tau: f64,
        gains: Vec<f64>,
    },
    OneShot {
        pulse_width: f64,
        v_high: f64,
        v_threshold: f64,
    },
    /// Inverting summing amplifier, ports `in0..in{n-1}`.
    Adder {
        gains: Vec<f64>,
    },
    /// Ports `in` and `ctrl`.
    ControlledInverter {
        threshold: f64,
    },
    /// Ports `pos` and `neg`.
    Comparator {
        v_high: f64,
    },
    ModStage {
        cfg: ModStageConfig,
    },
    Buffer,
    Memristor {
        state: MemristorState,
    },
    /// Ports `pre`, `g_exc`, `g_inh`.
    Soma {
        cfg: SomaConfig,
    },
}

impl BlockKind {
    pub fn name(&self) -> &'static str {
        match self {
            BlockKind::Generator { .. } => "generator",
            BlockKind::Integrator { .. } => "integrator",
            BlockKind::OneShot { .. } => "one_shot",
            BlockKind::Adder { .. } => "adder",
            BlockKind::ControlledInverter { .. } => "controlled_inverter",
            BlockKind::Comparator { .. } => "comparator",
            BlockKind::ModStage { .. } => "mod_stage",
            BlockKind::Buffer => "buffer",
            BlockKind::Memristor { .. } => "memristor",
            BlockKind::Soma { .. } => "soma",
        }
    }

    /// Input port names, in evaluation order.
    pub fn ports(&self) -> Vec<String> {
        let indexed = |n: usize| (0..n).map(|i| format!("in{i}")).collect();
        match self {
            BlockKind::Generator { .. } => Vec::new(),
            BlockKind::Integrator { gains, .. } | BlockKind::Adder { gains } => {
                indexed(gains.len())
            }
            BlockKind::ControlledInverter { .. } => vec!["in".into(), "ctrl".into()],
            BlockKind::Comparator { .. } => vec!["pos".into(), "neg".into()],
            BlockKind::Soma { .. } => vec!["pre".into(), "g_exc".into(), "g_inh".into()],
            BlockKind::OneShot { .. }
            | BlockKind::ModStage { .. }
            | BlockKind::Buffer
            | BlockKind::Memristor { .. } => {
                vec!["in".into()]
            }
        }
    }

    pub fn output_unit(&self) -> Unit {
        match self {
            BlockKind::Memristor { .. } => Unit::Siemens,
            _ => Unit::Volt,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            BlockKind::Generator { .. } | BlockKind::Buffer => Ok(()),
            BlockKind::Integrator { tau, gains } => {
                ensure_positive("tau", *tau)?;
                check_gains(gains)
            }
            BlockKind::Adder { gains } => check_gains(gains),
            BlockKind::OneShot {
                pulse_width,
                v_high,
                v_threshold,
            } => {
                ensure_positive("pulse_width", *pulse_width)?;
                if v_high.is_finite() && v_threshold.is_finite() {
                    Ok(())
                } else {
                    Err(config_err("one-shot levels must be finite"))
                }
            }
            BlockKind::ControlledInverter { threshold } => finite("threshold", *threshold),
            BlockKind::Comparator { v_high } => finite("v_high", *v_high),
            BlockKind::ModStage { cfg } => cfg.validate(),
            BlockKind::Memristor { state } => state.validate(),
            BlockKind::Soma { cfg } => cfg.validate(),
        }
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(config_err(format!("{name} must be finite")))
    }
}

fn check_gains(gains: &[f64]) -> Result<()> {
    if gains.is_empty() {
        return Err(config_err("summing block needs at least one input"));
    }
    if gains.iter().all(|g| g.is_finite()) {
        Ok(())
    } else {
        Err(config_err("gains must be finite"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockSpec {
    pub id: String,
    pub kind: BlockKind,
}

impl BlockSpec {
    pub fn new(id: impl Into<String>, kind: BlockKind) -> Self {
        Self {
            id: id.into(),
            kind,
        }
    }
}

/// Directed connection from a node output to a named input port of another node.
/// `delayed` edges carry the previous step's value and are the only way to close a loop.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Edge {
    pub source: String,
    pub sink: String,
    pub port: String,
    pub delayed: bool,
}

impl Edge {
    pub fn new(source: &str, sink: &str, port: &str) -> Self {
        Self {
            source: source.into(),
            sink: sink.into(),
            port: port.into(),
            delayed: false,
        }
    }

    pub fn delayed(source: &str, sink: &str, port: &str) -> Self {
        Self {
            delayed: true,
            ..Self::new(source, sink, port)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeuronNetlist {
    pub nodes: Vec<BlockSpec>,
    pub edges: Vec<Edge>,
    pub mode: LoopMode,
    pub oneshot_sense: OneShotSense,
    pub v_rail: f64,
}

impl NeuronNetlist {
    pub fn node(&self, id: &str) -> Option<&BlockSpec> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn node_mut(&mut self, id: &str) -> Option<&mut BlockSpec> {
        self.nodes.iter_mut().find(|n| n.id == id)
    }

    /// Edges feeding `sink`, keyed by port.
    pub fn drivers(&self, sink: &str) -> BTreeMap<&str, &Edge> {
        self.edges
            .iter()
            .filter(|e| e.sink == sink)
            .map(|e| (e.port.as_str(), e))
            .collect()
    }

    /// Replace the spike train of a generator node.
    pub fn set_train(&mut self, id: &str, train: SpikeTrain) -> Result<()> {
        match self.node_mut(id) {
            Some(BlockSpec {
                kind: BlockKind::Generator { train: t },
                ..
            }) => {
                *t = train;
                Ok(())
            }
            _ => Err(config_err(format!("'{id}' is not a generator node"))),
        }
    }

    /// Structural checks: unique ids, valid parameters, exactly one driver per
    /// input port, weak connectivity, delayed feedback only, and the mode's
    /// required source nodes.
    pub fn validate(&self) -> Result<()> {
        ensure_positive("v_rail", self.v_rail)?;
        let mut seen = BTreeSet::new();
        for n in &self.nodes {
            if n.id.is_empty() || n.id.chars().any(|c| c.is_whitespace()) {
                return Err(Error::Structural(format!("invalid node id '{}'", n.id)));
            }
            if !seen.insert(n.id.as_str()) {
                return Err(Error::Structural(format!("duplicate node id '{}'", n.id)));
            }
            n.kind
                .validate()
                .map_err(|e| config_err(format!("node '{}': {e}", n.id)))?;
        }
        if self.nodes.is_empty() {
            return Err(Error::Structural("netlist has no nodes".into()));
        }
        let mut driven: BTreeSet<(&str, &str)> = BTreeSet::new();
        for e in &self.edges {
            let src_ok = seen.contains(e.source.as_str());
            let sink = self.node(&e.sink);
            let Some(sink) = sink.filter(|_| src_ok) else {
                return Err(Error::Structural(format!(
                    "edge {} -> {} references an unknown node",
                    e.source, e.sink
                )));
            };
            if !sink.kind.ports().iter().any(|p| *p == e.port) {
                return Err(Error::Structural(format!(
                    "node '{}' ({}) has no port '{}'",
                    e.sink,
                    sink.kind.name(),
                    e.port
                )));
            }
            if !driven.insert((e.sink.as_str(), e.port.as_str())) {
                return Err(Error::Structural(format!(
                    "port {}.{} has more than one driver",
                    e.sink, e.port
                )));
            }
        }
        for n in &self.nodes {
            for p in n.kind.ports() {
                if !driven.contains(&(n.id.as_str(), p.as_str())) {
                    return Err(Error::Structural(format!(
                        "port {}.{} is not driven",
                        n.id, p
                    )));
                }
            }
        }
        self.check_connected()?;
        crate::engine::topo_order(self)?;
        match self.mode {
            LoopMode::OpenLoop => {
                for id in [ids::TPRE, ids::TPOST] {
                    if !matches!(
                        self.node(id).map(|n| &n.kind),
                        Some(BlockKind::Generator { .. })
                    ) {
                        return Err(Error::Structural(format!(
                            "open-loop netlist needs generator '{id}'"
                        )));
                    }
                }
            }
            LoopMode::ClosedLoop => {
                if !self
                    .nodes
                    .iter()
                    .any(|n| matches!(n.kind, BlockKind::Soma { .. }))
                {
                    return Err(Error::Structural(
                        "closed-loop netlist needs a soma node".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn check_connected(&self) -> Result<()> {
        let mut adj: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for e in &self.edges {
            adj.entry(&e.source).or_default().push(&e.sink);
            adj.entry(&e.sink).or_default().push(&e.source);
        }
        let mut seen = BTreeSet::new();
        let mut stack = vec![self.nodes[0].id.as_str()];
        while let Some(n) = stack.pop() {
            if seen.insert(n) {
                stack.extend(adj.get(n).into_iter().flatten().copied());
            }
        }
        if seen.len() == self.nodes.len() {
            Ok(())
        } else {
            let lonely = self
                .nodes
                .iter()
                .find(|n| !seen.contains(n.id.as_str()))
                .unwrap();
            Err(Error::Structural(format!(
                "node '{}' is not connected",
                lonely.id
            )))
        }
    }
}

/// Tuning of the behavioral stages that have no passive-component counterpart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageTuning {
    /// One-shot output level. Must satisfy `v_rail / 2 < v_oneshot_high < v_rail`
    /// so that two overlapping pulses, and only those, saturate U1.
    pub v_oneshot_high: f64,
    /// Time constant of the coincidence adder-integrator U7.
    pub tau_coincidence: f64,
    /// Time constant of the Hebbian output integrator U11.
    pub tau_output: f64,
    /// Input weight of U11.
    pub hebbian_gain: f64,
}

impl Default for StageTuning {
    fn default() -> Self {
        Self {
            v_oneshot_high: 7.0,
            tau_coincidence: 10e-3,
            tau_output: 0.5e-3,
            hebbian_gain: 5.0,
        }
    }
}

impl StageTuning {
    pub fn validate(&self, v_rail: f64) -> Result<()> {
        ensure_positive("tau_coincidence", self.tau_coincidence)?;
        ensure_positive("tau_output", self.tau_output)?;
        ensure_positive("hebbian_gain", self.hebbian_gain)?;
        if !(self.v_oneshot_high > 0.5 * v_rail && self.v_oneshot_high < v_rail) {
            return Err(config_err(format!(
                "v_oneshot_high = {} must lie in (v_rail/2, v_rail) = ({}, {})",
                self.v_oneshot_high,
                0.5 * v_rail,
                v_rail
            )));
        }
        Ok(())
    }
}

/// Default inhibitory device: a tenth of the way up from `g_min`.
pub fn default_inhibitory_memristor() -> MemristorState {
    let m = MemristorState::default();
    m.with_g(m.g_min + 0.1 * (m.g_max - m.g_min))
}

/// Everything needed to build the canonical netlist.
#[derive(Debug, Clone, PartialEq)]
pub struct NetlistParams {
    pub components: ComponentValues,
    pub modulation: ModStageConfig,
    pub tuning: StageTuning,
    pub soma: SomaConfig,
    /// Excitatory synapse.
    pub memristor: MemristorState,
    /// Inhibitory synapse. Starts weaker than the excitatory one so the closed loop can fire.
    pub memristor_inh: MemristorState,
    pub oneshot_sense: OneShotSense,
    pub pre_train: SpikeTrain,
    pub post_train: SpikeTrain,
}

impl Default for NetlistParams {
    fn default() -> Self {
        let components = ComponentValues::default();
        Self {
            modulation: ModStageConfig {
                wiper: components.mod_wiper,
                ..ModStageConfig::default()
            },
            components,
            tuning: StageTuning::default(),
            soma: SomaConfig::default(),
            memristor: MemristorState::default(),
            memristor_inh: default_inhibitory_memristor(),
            oneshot_sense: OneShotSense::IntegratorOutput,
            pre_train: SpikeTrain::new(vec![0.05], 100e-6, 5.0).expect("valid default"),
            post_train: SpikeTrain::new(vec![0.05 + 0.002], 100e-6, 5.0).expect("valid default"),
        }
    }
}

impl NetlistParams {
    pub fn validate(&self) -> Result<()> {
        self.components.validate()?;
        self.modulation.validate()?;
        self.tuning.validate(self.components.v_rail)?;
        self.soma.validate()?;
        self.memristor.validate()?;
        self.memristor_inh.validate()
    }
}

/// Assemble the canonical graph described in the module docs.
pub fn build_standard_netlist(params: &NetlistParams, mode: LoopMode) -> Result<NeuronNetlist> {
    params.validate()?;
    let cv = &params.components;
    let tune = &params.tuning;
    let v_rail = cv.v_rail;
    let tau = cv.integrator_tau();
    let t1 = cv.one_shot_duration()?;
    let one_shot = BlockKind::OneShot {
        pulse_width: t1,
        v_high: tune.v_oneshot_high,
        v_threshold: cv.v_threshold_oneshot,
    };
    let trace_integrator = BlockKind::Integrator {
        tau,
        gains: vec![1.0],
    };
    let w = tune.hebbian_gain;
    let post_src = match mode {
        LoopMode::OpenLoop => ids::TPOST,
        LoopMode::ClosedLoop => ids::AXON,
    };

    let mut nodes = vec![
        BlockSpec::new(
            ids::TPRE,
            BlockKind::Generator {
                train: params.pre_train.clone(),
            },
        ),
        BlockSpec::new(ids::U2, trace_integrator.clone()),
        BlockSpec::new(ids::U6, trace_integrator),
        BlockSpec::new(ids::U3, one_shot.clone()),
        BlockSpec::new(ids::U5, one_shot),
        BlockSpec::new(ids::U8, BlockKind::Adder { gains: vec![1.0] }),
        BlockSpec::new(
            ids::U1,
            BlockKind::Adder {
                gains: vec![1.0, -1.0],
            },
        ),
        BlockSpec::new(
            ids::U7,
            BlockKind::Integrator {
                tau: tune.tau_coincidence,
                gains: vec![1.0, 1.0, -1.0],
            },
        ),
        BlockSpec::new(
            ids::U9,
            BlockKind::Adder {
                gains: vec![1.0, 1.0],
            },
        ),
        BlockSpec::new(ids::Q1, BlockKind::Comparator { v_high: v_rail }),
        BlockSpec::new(
            ids::U10,
            BlockKind::ControlledInverter {
                threshold: 0.5 * v_rail,
            },
        ),
        BlockSpec::new(
            ids::U11,
            BlockKind::Integrator {
                tau: tune.tau_output,
                gains: vec![-w, w, -w],
            },
        ),
        BlockSpec::new(
            ids::U12,
            BlockKind::ModStage {
                cfg: params.modulation,
            },
        ),
        BlockSpec::new(
            ids::U13,
            BlockKind::ModStage {
                cfg: params.modulation,
            },
        ),
        BlockSpec::new(ids::HEBBIAN, BlockKind::Buffer),
        BlockSpec::new(ids::INHIBITOR, BlockKind::Buffer),
    ];

    let (pre_sense, post_sense) = match params.oneshot_sense {
        OneShotSense::IntegratorOutput => (ids::U2, ids::U6),
        OneShotSense::MemristorNode => (ids::TPRE, post_src),
    };
    let mut edges = vec![
        Edge::new(ids::TPRE, ids::U2, "in0"),
        Edge::new(post_src, ids::U6, "in0"),
        Edge::new(pre_sense, ids::U3, "in"),
        Edge::new(post_sense, ids::U5, "in"),
        Edge::new(ids::U5, ids::U8, "in0"),
        Edge::new(ids::U3, ids::U1, "in0"),
        Edge::new(ids::U8, ids::U1, "in1"),
        Edge::new(ids::U1, ids::U7, "in0"),
        Edge::new(ids::U3, ids::U7, "in1"),
        Edge::new(ids::U8, ids::U7, "in2"),
        Edge::new(ids::U2, ids::U9, "in0"),
        Edge::new(ids::U6, ids::U9, "in1"),
        Edge::new(ids::U6, ids::Q1, "pos"),
        Edge::new(ids::U2, ids::Q1, "neg"),
        Edge::new(ids::U9, ids::U10, "in"),
        Edge::new(ids::Q1, ids::U10, "ctrl"),
        Edge::new(ids::U10, ids::U11, "in0"),
        Edge::new(ids::U2, ids::U11, "in1"),
        Edge::new(ids::U6, ids::U11, "in2"),
        Edge::new(ids::U11, ids::U12, "in"),
        Edge::new(ids::U12, ids::HEBBIAN, "in"),
        Edge::new(ids::U7, ids::U13, "in"),
        Edge::new(ids::U13, ids::INHIBITOR, "in"),
    ];

    match mode {
        LoopMode::OpenLoop => {
            nodes.push(BlockSpec::new(
                ids::TPOST,
                BlockKind::Generator {
                    train: params.post_train.clone(),
                },
            ));
        }
        LoopMode::ClosedLoop => {
            nodes.push(BlockSpec::new(
                ids::SOMA,
                BlockKind::Soma { cfg: params.soma },
            ));
            nodes.push(BlockSpec::new(ids::AXON, BlockKind::Buffer));
            nodes.push(BlockSpec::new(
                ids::MEM_EXC,
                BlockKind::Memristor {
                    state: params.memristor,
                },
            ));
            nodes.push(BlockSpec::new(
                ids::MEM_INH,
                BlockKind::Memristor {
                    state: params.memristor_inh,
                },
            ));
            edges.extend([
                Edge::delayed(ids::SOMA, ids::AXON, "in"),
                Edge::new(ids::HEBBIAN, ids::MEM_EXC, "in"),
                Edge::new(ids::INHIBITOR, ids::MEM_INH, "in"),
                Edge::new(ids::TPRE, ids::SOMA, "pre"),
                Edge::new(ids::MEM_EXC, ids::SOMA, "g_exc"),
                Edge::new(ids::MEM_INH, ids::SOMA, "g_inh"),
            ]);
        }
    }

    nodes.sort_by(|a, b| a.id.cmp(&b.id));
    edges.sort();
    let netlist = NeuronNetlist {
        nodes,
        edges,
        mode,
        oneshot_sense: params.oneshot_sense,
        v_rail,
    };
    netlist.validate()?;
    Ok(netlist)
}
