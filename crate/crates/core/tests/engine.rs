use memsim_core::engine::{run, BlockSnapshot, SimConfig};
use memsim_core::neuron::{build_standard_netlist, ids, LoopMode, NetlistParams, OneShotSense};
use memsim_core::signal::{spike_train_to_trace, SpikeTrain, TimeGrid};
use memsim_core::Error;
use proptest::prelude::*;

fn open_loop() -> memsim_core::neuron::NeuronNetlist {
    build_standard_netlist(&NetlistParams::default(), LoopMode::OpenLoop).unwrap()
}

fn all_ids(n: &memsim_core::neuron::NeuronNetlist) -> Vec<String> {
    n.nodes.iter().map(|b| b.id.clone()).collect()
}

#[test]
fn repeated_runs_are_bit_identical() {
    let n = open_loop();
    let cfg = SimConfig::new(TimeGrid::covering(0.1, 1e-6).unwrap(), all_ids(&n));
    let a = run(&n, &cfg).unwrap();
    let b = run(&n, &cfg).unwrap();
    assert_eq!(a, b);
    for (id, t) in &a.traces {
        let bits_a: Vec<u64> = t.values().iter().map(|v| v.to_bits()).collect();
        let bits_b: Vec<u64> = b.traces[id].values().iter().map(|v| v.to_bits()).collect();
        assert_eq!(bits_a, bits_b, "{id}");
    }
}

#[test]
fn generator_probe_is_its_spike_trace() {
    let n = open_loop();
    let grid = TimeGrid::covering(0.1, 1e-6).unwrap();
    let res = run(&n, &SimConfig::new(grid, [ids::TPRE, ids::TPOST])).unwrap();
    let p = NetlistParams::default();
    assert_eq!(
        res.traces[ids::TPRE],
        spike_train_to_trace(&p.pre_train, &grid)
    );
    assert_eq!(
        res.traces[ids::TPOST],
        spike_train_to_trace(&p.post_train, &grid)
    );
}

#[test]
fn every_output_is_finite_and_on_rails() {
    for mode in [LoopMode::OpenLoop, LoopMode::ClosedLoop] {
        let n = build_standard_netlist(&NetlistParams::default(), mode).unwrap();
        let grid = TimeGrid::covering(0.1, 1e-6).unwrap();
        let res = run(&n, &SimConfig::new(grid, all_ids(&n))).unwrap();
        for (id, t) in &res.traces {
            assert_eq!(t.len(), grid.n_steps());
            assert_eq!(*t.grid(), grid);
            assert!(
                t.values()
                    .iter()
                    .all(|v| v.is_finite() && v.abs() <= n.v_rail),
                "{id}"
            );
        }
    }
}

#[test]
fn halving_dt_keeps_hebbian_peak_within_one_percent() {
    let n = open_loop();
    let peak = |dt: f64| {
        let res = run(
            &n,
            &SimConfig::new(TimeGrid::covering(0.1, dt).unwrap(), [ids::HEBBIAN]),
        )
        .unwrap();
        res.traces[ids::HEBBIAN]
            .values()
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
    };
    let (a, b) = (peak(1e-6), peak(0.5e-6));
    assert!(a > 0.0);
    assert!((a - b).abs() < 0.01 * a, "{a} vs {b}");
}

#[test]
fn closed_loop_soma_fires_and_drives_the_axon() {
    let mut p = NetlistParams::default();
    p.pre_train = SpikeTrain::periodic(0.005, 0.01, 9, 1e-4, 5.0).unwrap();
    let n = build_standard_netlist(&p, LoopMode::ClosedLoop).unwrap();
    let grid = TimeGrid::covering(0.1, 1e-6).unwrap();
    let res = run(
        &n,
        &SimConfig::new(grid, [ids::SOMA, ids::AXON, ids::MEM_EXC]),
    )
    .unwrap();
    let soma = res.traces[ids::SOMA].values();
    let axon = res.traces[ids::AXON].values();
    assert!(soma.iter().any(|&v| v > 0.0));
    assert_eq!(axon[0], 0.0);
    assert_eq!(&axon[1..], &soma[..soma.len() - 1]);
    let g = res.traces[ids::MEM_EXC].values();
    assert!(g
        .iter()
        .all(|&x| x > p.memristor.g_min && x < p.memristor.g_max));
    assert!(matches!(
        res.final_states[ids::SOMA],
        BlockSnapshot::Soma { .. }
    ));
}

#[test]
fn sense_mode_changes_one_shot_source() {
    let grid = TimeGrid::covering(0.1, 1e-6).unwrap();
    let u3 = |sense| {
        let p = NetlistParams {
            oneshot_sense: sense,
            ..Default::default()
        };
        let n = build_standard_netlist(&p, LoopMode::OpenLoop).unwrap();
        let res = run(&n, &SimConfig::new(grid, [ids::U3])).unwrap();
        let first = res.traces[ids::U3]
            .values()
            .iter()
            .position(|&v| v > 0.0)
            .unwrap();
        grid.time(first)
    };
    let direct = u3(OneShotSense::MemristorNode);
    let lagged = u3(OneShotSense::IntegratorOutput);
    assert!((direct - 0.05).abs() < 2e-6);
    assert!(lagged > direct);
}

#[test]
fn bad_probe_and_coarse_grid_are_rejected() {
    let n = open_loop();
    let grid = TimeGrid::covering(0.01, 1e-6).unwrap();
    assert!(matches!(
        run(&n, &SimConfig::new(grid, ["u99"])),
        Err(Error::Config(_))
    ));
    let coarse = TimeGrid::covering(0.01, 1e-3).unwrap();
    assert!(matches!(
        run(&n, &SimConfig::new(coarse, [ids::U2])),
        Err(Error::Config(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn adding_probes_never_changes_other_traces(mask in prop::collection::vec(any::<bool>(), 21)) {
        let n = open_loop();
        let grid = TimeGrid::covering(0.08, 1e-6).unwrap();
        let ids = all_ids(&n);
        let subset: Vec<String> = ids.iter().zip(&mask).filter(|(_, &m)| m).map(|(id, _)| id.clone()).collect();
        let full = run(&n, &SimConfig::new(grid, ids.clone())).unwrap();
        let part = run(&n, &SimConfig::new(grid, subset.clone())).unwrap();
        prop_assert_eq!(part.traces.len(), subset.len());
        for id in &subset {
            prop_assert_eq!(&part.traces[id], &full.traces[id]);
        }
    }
}
