//! Fixed-step synchronous executor for a [`NeuronNetlist`].
//!
//! Each step evaluates every node once in topological order. Forward edges carry
//! the value computed earlier in the same step; delayed edges carry the value
//! from the previous step (zero before the first step). Integrating blocks
//! (integrators, memristors) output their state at `t_k` and then absorb the
//! input held over `[t_k, t_k + dt)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::blocks::{
    check_integrator_resolution, clamp_rail, comparator, controlled_inverter, lag_coefficient,
    modulation_gain, one_shot_step, OneShotState,
};
use crate::error::{config_err, Error, Result};
use crate::memristor::{memristor_step, MemristorState};
use crate::neuron::{soma_step, BlockKind, NeuronNetlist, SomaConfig, SomaState};
use crate::signal::{TimeGrid, Trace};

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub grid: TimeGrid,
    pub probes: Vec<String>,
    /// Reserved; every current block is deterministic.
    pub seed: u64,
}

impl SimConfig {
    pub fn new(grid: TimeGrid, probes: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self {
            grid,
            probes: probes.into_iter().map(Into::into).collect(),
            seed: 0,
        }
    }
}

/// State of one block after the last step.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockSnapshot {
    Stateless,
    Generator {
        next_spike: usize,
    },
    Integrator {
        y: f64,
    },
    OneShot(OneShotState),
    Memristor(MemristorState),
    Soma {
        state: SomaState,
        pulse_steps_remaining: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub traces: BTreeMap<String, Trace>,
    pub final_states: BTreeMap<String, BlockSnapshot>,
}

impl SimResult {
    pub fn trace(&self, id: &str) -> Option<&Trace> {
        self.traces.get(id)
    }
}

/// Topological order over forward (non-delayed) edges, ties broken by the
/// lexicographically smallest id. A cycle of forward edges is a structural error.
pub fn topo_order(netlist: &NeuronNetlist) -> Result<Vec<String>> {
    let ids: BTreeSet<&str> = netlist.nodes.iter().map(|n| n.id.as_str()).collect();
    let mut indegree: BTreeMap<&str, usize> = ids.iter().map(|&id| (id, 0)).collect();
    let mut succ: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for e in netlist.edges.iter().filter(|e| !e.delayed) {
        if !ids.contains(e.source.as_str()) || !ids.contains(e.sink.as_str()) {
            return Err(Error::Structural(format!(
                "edge {} -> {} references an unknown node",
                e.source, e.sink
            )));
        }
        *indegree.get_mut(e.sink.as_str()).unwrap() += 1;
        succ.entry(e.source.as_str())
            .or_default()
            .push(e.sink.as_str());
    }
    let mut ready: BTreeSet<&str> = indegree
        .iter()
        .filter(|(_, &d)| d == 0)
        .map(|(&id, _)| id)
        .collect();
    let mut order = Vec::with_capacity(ids.len());
    while let Some(id) = ready.pop_first() {
        order.push(id.to_string());
        for &s in succ.get(id).into_iter().flatten() {
            let d = indegree.get_mut(s).unwrap();
            *d -= 1;
            if *d == 0 {
                ready.insert(s);
            }
        }
    }
    if order.len() != ids.len() {
        let stuck: Vec<&str> = indegree
            .iter()
            .filter(|(_, &d)| d > 0)
            .map(|(&id, _)| id)
            .collect();
        return Err(Error::Structural(format!(
            "cycle without a delayed edge through {}",
            stuck.join(", ")
        )));
    }
    Ok(order)
}

enum Block {
    Generator {
        intervals: Vec<(usize, usize)>,
        next: usize,
        amplitude: f64,
    },
    Integrator {
        y: f64,
        k: f64,
        gains: Vec<f64>,
    },
    OneShot(OneShotState),
    Adder {
        gains: Vec<f64>,
    },
    ControlledInverter {
        threshold: f64,
    },
    Comparator {
        v_high: f64,
    },
    Gain(f64),
    Buffer,
    Memristor(MemristorState),
    Soma {
        cfg: SomaConfig,
        state: SomaState,
        pulse_steps: usize,
        pulse_left: usize,
    },
}

struct Slot {
    block: Block,
    /// (source slot, delayed) per input port, in port order.
    inputs: Vec<(usize, bool)>,
}

fn compile(
    netlist: &NeuronNetlist,
    grid: &TimeGrid,
) -> Result<(Vec<Slot>, Vec<usize>, HashMap<String, usize>)> {
    let order = topo_order(netlist)?;
    let index: HashMap<String, usize> = netlist
        .nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.id.clone(), i))
        .collect();
    let dt = grid.dt();
    let mut slots = Vec::with_capacity(netlist.nodes.len());
    for node in &netlist.nodes {
        let drivers = netlist.drivers(&node.id);
        let inputs = node
            .kind
            .ports()
            .iter()
            .map(|p| {
                drivers
                    .get(p.as_str())
                    .map(|e| (index[&e.source], e.delayed))
                    .ok_or_else(|| {
                        Error::Structural(format!("port {}.{} is not driven", node.id, p))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        let block = match &node.kind {
            BlockKind::Generator { train } => Block::Generator {
                intervals: train.step_intervals(grid),
                next: 0,
                amplitude: train.amplitude(),
            },
            BlockKind::Integrator { tau, gains } => {
                check_integrator_resolution(dt, *tau)
                    .map_err(|e| config_err(format!("node '{}': {e}", node.id)))?;
                Block::Integrator {
                    y: 0.0,
                    k: lag_coefficient(dt, *tau),
                    gains: gains.clone(),
                }
            }
            BlockKind::OneShot {
                pulse_width,
                v_high,
                v_threshold,
            } => {
                if *pulse_width < dt {
                    return Err(config_err(format!(
                        "node '{}': one-shot pulse {pulse_width} s is shorter than dt",
                        node.id
                    )));
                }
                Block::OneShot(OneShotState::new(*pulse_width, *v_high, *v_threshold)?)
            }
            BlockKind::Adder { gains } => Block::Adder {
                gains: gains.clone(),
            },
            BlockKind::ControlledInverter { threshold } => Block::ControlledInverter {
                threshold: *threshold,
            },
            BlockKind::Comparator { v_high } => Block::Comparator { v_high: *v_high },
            BlockKind::ModStage { cfg } => Block::Gain(modulation_gain(cfg)),
            BlockKind::Buffer => Block::Buffer,
            BlockKind::Memristor { state } => Block::Memristor(*state),
            BlockKind::Soma { cfg } => Block::Soma {
                cfg: *cfg,
                state: SomaState {
                    v: cfg.v_reset,
                    refractory_remaining: 0.0,
                },
                pulse_steps: grid
                    .first_index_at_or_after(grid.t_start() + cfg.spike_width)
                    .max(1) as usize,
                pulse_left: 0,
            },
        };
        slots.push(Slot { block, inputs });
    }
    let order = order.iter().map(|id| index[id]).collect();
    Ok((slots, order, index))
}

/// Simulate `netlist` over `cfg.grid`, recording the probed node outputs.
pub fn run(netlist: &NeuronNetlist, cfg: &SimConfig) -> Result<SimResult> {
    netlist.validate()?;
    let grid = cfg.grid;
    let (mut slots, order, index) = compile(netlist, &grid)?;
    let probes: Vec<(String, usize)> = cfg
        .probes
        .iter()
        .map(|p| {
            index
                .get(p)
                .map(|&i| (p.clone(), i))
                .ok_or_else(|| config_err(format!("probe '{p}' is not a node")))
        })
        .collect::<Result<_>>()?;
    let unique_probes: BTreeSet<&str> = probes.iter().map(|(p, _)| p.as_str()).collect();
    if unique_probes.len() != probes.len() {
        return Err(config_err("duplicate probe ids"));
    }

    let n = slots.len();
    let v_rail = netlist.v_rail;
    let dt = grid.dt();
    let mut cur = vec![0.0; n];
    let mut prev = vec![0.0; n];
    let mut recorded: Vec<Vec<f64>> = probes
        .iter()
        .map(|_| Vec::with_capacity(grid.n_steps()))
        .collect();
    let mut scratch: Vec<f64> = Vec::with_capacity(8);

    for k in 0..grid.n_steps() {
        for &i in &order {
            let slot = &mut slots[i];
            scratch.clear();
            scratch.extend(
                slot.inputs
                    .iter()
                    .map(|&(s, d)| if d { prev[s] } else { cur[s] }),
            );
            let x = &scratch;
            cur[i] = match &mut slot.block {
                Block::Generator {
                    intervals,
                    next,
                    amplitude,
                } => {
                    while *next < intervals.len() && intervals[*next].1 <= k {
                        *next += 1;
                    }
                    match intervals.get(*next) {
                        Some(&(on, _)) if on <= k => *amplitude,
                        _ => 0.0,
                    }
                }
                Block::Integrator { y, k: coef, gains } => {
                    let out = *y;
                    let u: f64 = gains.iter().zip(x).map(|(g, v)| g * v).sum();
                    *y = clamp_rail(*y + (u - *y) * *coef, v_rail);
                    out
                }
                Block::OneShot(state) => {
                    let (next, y) = one_shot_step(*state, x[0], dt);
                    *state = next;
                    clamp_rail(y, v_rail)
                }
                Block::Adder { gains } => {
                    let s: f64 = gains.iter().zip(x).map(|(g, v)| g * v).sum();
                    clamp_rail(-s, v_rail)
                }
                Block::ControlledInverter { threshold } => {
                    controlled_inverter(x[0], x[1], *threshold, v_rail)
                }
                Block::Comparator { v_high } => clamp_rail(comparator(x[0], x[1], *v_high), v_rail),
                Block::Gain(g) => clamp_rail(*g * x[0], v_rail),
                Block::Buffer => clamp_rail(x[0], v_rail),
                Block::Memristor(state) => {
                    let out = state.g;
                    *state = memristor_step(*state, x[0], dt);
                    out
                }
                Block::Soma {
                    cfg,
                    state,
                    pulse_steps,
                    pulse_left,
                } => {
                    let v_pre = x[0];
                    let (next, spike) = soma_step(*state, x[1] * v_pre, x[2] * v_pre, dt, cfg);
                    *state = next;
                    if spike {
                        *pulse_left = *pulse_steps;
                    }
                    if *pulse_left > 0 {
                        *pulse_left -= 1;
                        clamp_rail(cfg.spike_amplitude, v_rail)
                    } else {
                        0.0
                    }
                }
            };
        }
        for (rec, &(_, i)) in recorded.iter_mut().zip(&probes) {
            rec.push(cur[i]);
        }
        std::mem::swap(&mut cur, &mut prev);
    }

    let mut traces = BTreeMap::new();
    for ((id, i), values) in probes.into_iter().zip(recorded) {
        let unit = netlist.nodes[i].kind.output_unit();
        traces.insert(id, Trace::new(grid, values, unit)?);
    }
    let final_states = netlist
        .nodes
        .iter()
        .zip(&slots)
        .map(|(node, slot)| {
            let snap = match &slot.block {
                Block::Generator { next, .. } => BlockSnapshot::Generator { next_spike: *next },
                Block::Integrator { y, .. } => BlockSnapshot::Integrator { y: *y },
                Block::OneShot(s) => BlockSnapshot::OneShot(*s),
                Block::Memristor(s) => BlockSnapshot::Memristor(*s),
                Block::Soma {
                    state, pulse_left, ..
                } => BlockSnapshot::Soma {
                    state: *state,
                    pulse_steps_remaining: *pulse_left,
                },
                _ => BlockSnapshot::Stateless,
            };
            (node.id.clone(), snap)
        })
        .collect();
    Ok(SimResult {
        traces,
        final_states,
    })
}
