use std::path::Path;
use std::process::{Command, Output};

fn memsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_memsim"))
        .args(args)
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn dump_netlist_succeeds_and_lists_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.toml", "");
    let out = dir.path().join("out");
    let o = memsim(&[
        "dump-netlist",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(String::from_utf8_lossy(&o.stdout).contains("netlist.txt"));
    let text = std::fs::read_to_string(out.join("netlist.txt")).unwrap();
    assert_eq!(text, include_str!("golden/open_loop.netlist"));
}

#[test]
fn usage_and_config_errors_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    let good = write(dir.path(), "good.toml", "");
    let unknown = write(dir.path(), "unknown.toml", "r99 = 1\n");
    let syntax = write(dir.path(), "syntax.toml", "r4 = \n");
    let coarse = write(dir.path(), "coarse.toml", "[sim]\ndt = 1e-3\n");
    for args in [
        vec!["explode", "--config", &good, "--out", out],
        vec!["simulate", "--out", out],
        vec!["simulate", "--config", &unknown, "--out", out],
        vec!["simulate", "--config", &syntax, "--out", out],
        vec!["simulate", "--config", &coarse, "--out", out],
        vec!["simulate", "--config", &good, "--out", out, "--jobs", "0"],
    ] {
        let o = memsim(&args);
        assert_eq!(
            o.status.code(),
            Some(1),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let o = memsim(&["simulate", "--config", &syntax, "--out", out]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn runtime_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let off_grid = write(dir.path(), "off.toml", "[experiment]\ndelta_t = [0.08]\n");
    let out = dir.path().join("out");
    let o = memsim(&[
        "sweep-stdp",
        "--config",
        &off_grid,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );

    let cfg = write(dir.path(), "ok.toml", "");
    let blocker = write(dir.path(), "file", "");
    let o = memsim(&[
        "dump-netlist",
        "--config",
        &cfg,
        "--out",
        &format!("{blocker}/sub"),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_writes_strided_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "[sim]\nduration = 0.06\ncsv_stride = 100\nprobes = [\"tpre\", \"u11\", \"hebbian\"]\n",
    );
    let out = dir.path().join("out");
    let o = memsim(&[
        "simulate",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--svg",
        "--jobs",
        "2",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let csv = std::fs::read_to_string(out.join("traces.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("time_s,tpre,u11,hebbian"));
    assert_eq!(lines.count(), 600);
    let svg = std::fs::read_to_string(out.join("traces.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 3);
}

#[test]
fn closed_loop_simulation_runs_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.toml",
        "mode = \"closed_loop\"\n[sim]\nduration = 0.05\ncsv_stride = 50\n[spikes]\npre_times = [0.005, 0.015, 0.025]\n",
    );
    let out = dir.path().join("out");
    let o = memsim(&["simulate", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let csv = std::fs::read_to_string(out.join("traces.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("time_s,"));
    for id in ["soma", "axon", "mem_exc", "mem_inh"] {
        assert!(header.split(',').any(|h| h == id), "{header}");
    }
}
