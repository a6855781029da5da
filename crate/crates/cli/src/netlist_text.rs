//! Line-oriented text form of a netlist.
//!
//! ```text
//! netlist mode=open_loop oneshot_sense=integrator_output v_rail=12.0
//! node u2 integrator tau=0.0047 gains=1.0
//! edge tpre u2 in0
//! edge soma axon in delay=1
//! ```
//!
//! Nodes are listed by id, edges in sorted order. Lists are comma separated.

use std::collections::BTreeMap;
use std::path::Path;

use memsim_core::blocks::{ModMode, ModStageConfig};
use memsim_core::memristor::MemristorState;
use memsim_core::neuron::{
    BlockKind, BlockSpec, Edge, LoopMode, NeuronNetlist, OneShotSense, SomaConfig,
};
use memsim_core::signal::SpikeTrain;

use crate::csv::format_f64;
use crate::error::{CliError, Result};

fn list(v: &[f64]) -> String {
    v.iter()
        .map(|x| format_f64(*x))
        .collect::<Vec<_>>()
        .join(",")
}

fn params(kind: &BlockKind) -> Vec<(&'static str, String)> {
    let f = |x: f64| format_f64(x);
    match kind {
        BlockKind::Generator { train } => vec![
            ("times", list(train.spike_times())),
            ("width", f(train.pulse_width())),
            ("amplitude", f(train.amplitude())),
        ],
        BlockKind::Integrator { tau, gains } => vec![("tau", f(*tau)), ("gains", list(gains))],
        BlockKind::OneShot {
            pulse_width,
            v_high,
            v_threshold,
        } => vec![
            ("pulse_width", f(*pulse_width)),
            ("v_high", f(*v_high)),
            ("v_threshold", f(*v_threshold)),
        ],
        BlockKind::Adder { gains } => vec![("gains", list(gains))],
        BlockKind::ControlledInverter { threshold } => vec![("threshold", f(*threshold))],
        BlockKind::Comparator { v_high } => vec![("v_high", f(*v_high))],
        BlockKind::ModStage { cfg } => vec![
            ("mode", cfg.mode.as_str().to_string()),
            ("wiper", f(cfg.wiper)),
            ("gain_min", f(cfg.gain_min)),
            ("gain_max", f(cfg.gain_max)),
            ("sombrero_center", f(cfg.sombrero_center)),
            ("sombrero_width", f(cfg.sombrero_width)),
        ],
        BlockKind::Buffer => Vec::new(),
        BlockKind::Memristor { state } => vec![
            ("g", f(state.g)),
            ("g_min", f(state.g_min)),
            ("g_max", f(state.g_max)),
            ("v_th_set", f(state.v_th_set)),
            ("v_th_reset", f(state.v_th_reset)),
            ("mu", f(state.mu)),
        ],
        BlockKind::Soma { cfg } => vec![
            ("tau_mem", f(cfg.tau_mem)),
            ("v_threshold", f(cfg.v_threshold)),
            ("v_reset", f(cfg.v_reset)),
            ("refractory", f(cfg.refractory)),
            ("spike_width", f(cfg.spike_width)),
            ("spike_amplitude", f(cfg.spike_amplitude)),
            ("c_norm", f(cfg.c_norm)),
        ],
    }
}

pub fn netlist_to_string(n: &NeuronNetlist) -> String {
    let mut out = format!(
        "netlist mode={} oneshot_sense={} v_rail={}\n",
        n.mode.as_str(),
        n.oneshot_sense.as_str(),
        format_f64(n.v_rail)
    );
    let mut nodes: Vec<&BlockSpec> = n.nodes.iter().collect();
    nodes.sort_by(|a, b| a.id.cmp(&b.id));
    for b in nodes {
        out.push_str(&format!("node {} {}", b.id, b.kind.name()));
        for (k, v) in params(&b.kind) {
            out.push_str(&format!(" {k}={v}"));
        }
        out.push('\n');
    }
    let mut edges: Vec<&Edge> = n.edges.iter().collect();
    edges.sort();
    for e in edges {
        out.push_str(&format!("edge {} {} {}", e.source, e.sink, e.port));
        if e.delayed {
            out.push_str(" delay=1");
        }
        out.push('\n');
    }
    out
}

pub fn dump_netlist(n: &NeuronNetlist, path: &Path) -> Result<()> {
    std::fs::write(path, netlist_to_string(n)).map_err(|e| CliError::io(path, e))
}

struct Fields<'a> {
    line: usize,
    map: BTreeMap<&'a str, &'a str>,
}

impl<'a> Fields<'a> {
    fn parse(line: usize, tokens: &[&'a str]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for t in tokens {
            let (k, v) = t
                .split_once('=')
                .ok_or_else(|| err(line, format!("expected key=value, got '{t}'")))?;
            if map.insert(k, v).is_some() {
                return Err(err(line, format!("duplicate key '{k}'")));
            }
        }
        Ok(Self { line, map })
    }

    fn take(&mut self, key: &str) -> Result<&'a str> {
        self.map
            .remove(key)
            .ok_or_else(|| err(self.line, format!("missing key '{key}'")))
    }

    fn num(&mut self, key: &str) -> Result<f64> {
        let line = self.line;
        let v = self.take(key)?;
        v.parse()
            .map_err(|_| err(line, format!("bad number '{v}' for '{key}'")))
    }

    fn nums(&mut self, key: &str) -> Result<Vec<f64>> {
        let line = self.line;
        let v = self.take(key)?;
        if v.is_empty() {
            return Ok(Vec::new());
        }
        v.split(',')
            .map(|x| {
                x.parse()
                    .map_err(|_| err(line, format!("bad number '{x}' in '{key}'")))
            })
            .collect()
    }

    fn finish(self) -> Result<()> {
        match self.map.keys().next() {
            Some(k) => Err(err(self.line, format!("unknown key '{k}'"))),
            None => Ok(()),
        }
    }
}

fn err(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("netlist line {line}: {msg}"))
}

fn parse_kind(line: usize, name: &str, f: &mut Fields) -> Result<BlockKind> {
    let sim = |e: memsim_core::Error| err(line, e);
    Ok(match name {
        "generator" => BlockKind::Generator {
            train: SpikeTrain::new(f.nums("times")?, f.num("width")?, f.num("amplitude")?)
                .map_err(sim)?,
        },
        "integrator" => BlockKind::Integrator {
            tau: f.num("tau")?,
            gains: f.nums("gains")?,
        },
        "one_shot" => BlockKind::OneShot {
            pulse_width: f.num("pulse_width")?,
            v_high: f.num("v_high")?,
            v_threshold: f.num("v_threshold")?,
        },
        "adder" => BlockKind::Adder {
            gains: f.nums("gains")?,
        },
        "controlled_inverter" => BlockKind::ControlledInverter {
            threshold: f.num("threshold")?,
        },
        "comparator" => BlockKind::Comparator {
            v_high: f.num("v_high")?,
        },
        "mod_stage" => BlockKind::ModStage {
            cfg: ModStageConfig {
                mode: ModMode::parse(f.take("mode")?).map_err(sim)?,
                wiper: f.num("wiper")?,
                gain_min: f.num("gain_min")?,
                gain_max: f.num("gain_max")?,
                sombrero_center: f.num("sombrero_center")?,
                sombrero_width: f.num("sombrero_width")?,
            },
        },
        "buffer" => BlockKind::Buffer,
        "memristor" => BlockKind::Memristor {
            state: MemristorState {
                g: f.num("g")?,
                g_min: f.num("g_min")?,
                g_max: f.num("g_max")?,
                v_th_set: f.num("v_th_set")?,
                v_th_reset: f.num("v_th_reset")?,
                mu: f.num("mu")?,
            },
        },
        "soma" => BlockKind::Soma {
            cfg: SomaConfig {
                tau_mem: f.num("tau_mem")?,
                v_threshold: f.num("v_threshold")?,
                v_reset: f.num("v_reset")?,
                refractory: f.num("refractory")?,
                spike_width: f.num("spike_width")?,
                spike_amplitude: f.num("spike_amplitude")?,
                c_norm: f.num("c_norm")?,
            },
        },
        other => return Err(err(line, format!("unknown block kind '{other}'"))),
    })
}

/// Inverse of [`netlist_to_string`]. The result is validated.
pub fn parse_netlist(text: &str) -> Result<NeuronNetlist> {
    let mut header = None;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            ["netlist", rest @ ..] => {
                if header.is_some() {
                    return Err(err(line, "second netlist header"));
                }
                let mut f = Fields::parse(line, rest)?;
                let sim = |e: memsim_core::Error| err(line, e);
                let mode = LoopMode::parse(f.take("mode")?).map_err(sim)?;
                let sense = OneShotSense::parse(f.take("oneshot_sense")?).map_err(sim)?;
                let v_rail = f.num("v_rail")?;
                f.finish()?;
                header = Some((mode, sense, v_rail));
            }
            ["node", id, kind, rest @ ..] => {
                let mut f = Fields::parse(line, rest)?;
                let kind = parse_kind(line, kind, &mut f)?;
                f.finish()?;
                nodes.push(BlockSpec::new(*id, kind));
            }
            ["edge", src, sink, port] => edges.push(Edge::new(src, sink, port)),
            ["edge", src, sink, port, "delay=1"] => edges.push(Edge::delayed(src, sink, port)),
            _ => return Err(err(line, format!("cannot parse '{raw}'"))),
        }
    }
    let (mode, oneshot_sense, v_rail) =
        header.ok_or_else(|| CliError::Config("netlist header missing".into()))?;
    let n = NeuronNetlist {
        nodes,
        edges,
        mode,
        oneshot_sense,
        v_rail,
    };
    n.validate()?;
    Ok(n)
}
