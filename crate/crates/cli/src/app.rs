//! Command dispatch.

use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use memsim_core::engine::{run as simulate, SimConfig};
use memsim_core::experiments::{
    run_stepped_conductance, sweep_da_istdp, sweep_da_stdp, sweep_istdp, sweep_stdp, DaSweepPoint,
    LearningCurvePoint,
};
use memsim_core::neuron::{build_standard_netlist, NeuronNetlist};

use crate::config::{parse_config, RunConfig};
use crate::csv::{write_csv, Table};
use crate::error::{CliError, Result};
use crate::netlist_text::dump_netlist;
use crate::svg::{write_plot_svg, Panel, Series};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Simulate,
    SweepStdp,
    SweepIstdp,
    SweepDaStdp,
    SweepDaIstdp,
    Conductance,
    DumpNetlist,
}

#[derive(Debug, Parser)]
#[command(
    name = "memsim",
    version,
    about = "Dopamine-modulated memristive neuron simulator"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// TOML configuration file.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write SVG plots.
    #[arg(long)]
    pub svg: bool,
    /// Worker threads for sweeps.
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// Files written by one invocation, in write order.
pub type Written = Vec<PathBuf>;

pub fn run(cli: &Cli) -> Result<Written> {
    let text = std::fs::read_to_string(&cli.config).map_err(|e| CliError::io(&cli.config, e))?;
    let cfg = parse_config(&text)?;
    if cli.jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    std::fs::create_dir_all(&cli.out).map_err(|e| CliError::io(&cli.out, e))?;
    match cli.jobs {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            pool.install(|| dispatch(cli.command, &cfg, &cli.out, cli.svg))
        }
        None => dispatch(cli.command, &cfg, &cli.out, cli.svg),
    }
}

fn netlist(cfg: &RunConfig) -> Result<NeuronNetlist> {
    let mut p = cfg.experiment.netlist.clone();
    p.pre_train = cfg.pre_train.clone();
    p.post_train = cfg.post_train.clone();
    Ok(build_standard_netlist(&p, cfg.mode)?)
}

pub fn dispatch(cmd: Command, cfg: &RunConfig, out: &Path, svg: bool) -> Result<Written> {
    let mut written = Vec::new();
    let csv = |name: &str, table: &Table, written: &mut Written| -> Result<()> {
        let path = out.join(name);
        write_csv(table, &path)?;
        written.push(path);
        Ok(())
    };
    let plot = |name: &str, panels: &[Panel], written: &mut Written| -> Result<()> {
        if svg {
            let path = out.join(name);
            write_plot_svg(panels, &path)?;
            written.push(path);
        }
        Ok(())
    };
    let ex = &cfg.experiment;
    match cmd {
        Command::Simulate => {
            let n = netlist(cfg)?;
            let probes = if cfg.probes.is_empty() {
                n.nodes.iter().map(|b| b.id.clone()).collect()
            } else {
                cfg.probes.clone()
            };
            let res = simulate(&n, &SimConfig::new(ex.grid()?, probes.clone()))?;
            let traces: Vec<(&str, &_)> = probes
                .iter()
                .map(|p| (p.as_str(), &res.traces[p]))
                .collect();
            let table = Table::from_traces(&traces, cfg.csv_stride)?;
            csv("traces.csv", &table, &mut written)?;
            let panel = Panel {
                title: format!("{} simulation", n.mode.as_str()),
                x_label: "time (s)".into(),
                y_label: "output".into(),
                series: traces
                    .iter()
                    .map(|(id, t)| {
                        Series::new(
                            *id,
                            table.columns[0].clone(),
                            t.values().iter().step_by(cfg.csv_stride).copied().collect(),
                        )
                    })
                    .collect(),
                markers: false,
            };
            plot("traces.svg", &[panel], &mut written)?;
        }
        Command::SweepStdp | Command::SweepIstdp => {
            let (pts, stem, title) = if cmd == Command::SweepStdp {
                (
                    sweep_stdp(ex, &cfg.delta_ts)?,
                    "stdp",
                    "Hebbian learning curve",
                )
            } else {
                (
                    sweep_istdp(ex, &cfg.delta_ts)?,
                    "istdp",
                    "Inhibitory learning curve",
                )
            };
            csv(
                &format!("{stem}.csv"),
                &Table::from_curve(&pts),
                &mut written,
            )?;
            plot(
                &format!("{stem}.svg"),
                &[curve_panel(title, &pts)],
                &mut written,
            )?;
        }
        Command::SweepDaStdp | Command::SweepDaIstdp => {
            let (pts, stem, title) = if cmd == Command::SweepDaStdp {
                (
                    sweep_da_stdp(ex, &cfg.da_stdp, cfg.da_delta_t)?,
                    "da_stdp",
                    "Dopamine sweep, Hebbian",
                )
            } else {
                (
                    sweep_da_istdp(ex, &cfg.da_istdp, cfg.da_delta_t)?,
                    "da_istdp",
                    "Dopamine sweep, inhibitory",
                )
            };
            csv(
                &format!("{stem}.csv"),
                &Table::from_da_sweep(&pts),
                &mut written,
            )?;
            plot(
                &format!("{stem}.svg"),
                &[da_panel(title, &pts)],
                &mut written,
            )?;
        }
        Command::Conductance => {
            let run = run_stepped_conductance(ex, &cfg.conductance)?;
            let traces = [
                ("dopamine", &run.dopamine),
                ("conductance_s", &run.conductance),
                ("pulse_v", &run.pulse),
            ];
            let table = Table::from_traces(&traces, cfg.csv_stride)?;
            csv("conductance.csv", &table, &mut written)?;
            let t = &table.columns[0];
            let panel = |title: &str, y: &str, col: usize| Panel {
                title: title.into(),
                x_label: "time (s)".into(),
                y_label: y.into(),
                series: vec![Series::new(
                    table.header[col].clone(),
                    t.clone(),
                    table.columns[col].clone(),
                )],
                markers: false,
            };
            let panels = [
                panel("Dopamine level", "wiper", 1),
                panel("Device conductance", "G (S)", 2),
                panel("Learning impulses", "V", 3),
            ];
            plot("conductance.svg", &panels, &mut written)?;
        }
        Command::DumpNetlist => {
            let path = out.join("netlist.txt");
            dump_netlist(&netlist(cfg)?, &path)?;
            written.push(path);
        }
    }
    Ok(written)
}

fn curve_panel(title: &str, pts: &[LearningCurvePoint]) -> Panel {
    Panel {
        title: title.into(),
        x_label: "delta t (s)".into(),
        y_label: "dw (V)".into(),
        series: vec![Series::new(
            "dw",
            pts.iter().map(|p| p.delta_t.seconds()).collect(),
            pts.iter().map(|p| p.dw).collect(),
        )],
        markers: true,
    }
}

fn da_panel(title: &str, pts: &[DaSweepPoint]) -> Panel {
    Panel {
        title: title.into(),
        x_label: "wiper".into(),
        y_label: "peak (V)".into(),
        series: vec![Series::new(
            "peak",
            pts.iter().map(|p| p.wiper).collect(),
            pts.iter().map(|p| p.peak).collect(),
        )],
        markers: true,
    }
}
