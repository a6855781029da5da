mod common;

use common::spearman;
use memsim_core::blocks::ModMode;
use memsim_core::experiments::*;
use memsim_core::neuron::ids;
use memsim_core::signal::{DeltaT, SpikeTrain, TimeGrid, Trace, Unit};
use memsim_core::Error;
use proptest::prelude::*;

fn ms(v: f64) -> DeltaT {
    DeltaT::from_ms(v).unwrap()
}

#[test]
fn stdp_signs_follow_spike_order() {
    let p = ExperimentParams::default();
    let pts = sweep_stdp(&p, &[ms(2.0), ms(-2.0), ms(8.0)]).unwrap();
    assert_eq!(
        pts.iter().map(|x| x.delta_t.seconds()).collect::<Vec<_>>(),
        [-0.002, 0.002, 0.008]
    );
    assert!(pts[1].dw > 0.0);
    assert!(pts[0].dw < 0.0);
    assert!(pts[1].dw.abs() > pts[2].dw.abs());
}

#[test]
fn stdp_curve_is_odd_and_follows_inverse_lag_ranking() {
    let p = ExperimentParams::default();
    let pts = sweep_stdp(&p, &canonical_delta_ts()).unwrap();
    let n = pts.len();
    for i in 0..n / 2 {
        let (neg, pos) = (pts[i], pts[n - 1 - i]);
        assert_eq!(neg.delta_t.seconds(), -pos.delta_t.seconds());
        assert_eq!(neg.dw.signum(), -pos.dw.signum());
    }
    let sim: Vec<f64> = pts.iter().map(|x| x.dw.abs()).collect();
    let reference: Vec<f64> = pts
        .iter()
        .map(|x| reference_hebbian_dw(x.delta_t, 1e-3, f64::INFINITY).abs())
        .collect();
    assert!(spearman(&sim, &reference) >= 0.95);
}

#[test]
fn lone_spike_gives_no_hebbian_change() {
    let p = ExperimentParams::default();
    let pts = sweep_stdp(&p, &[ms(45.0)]).unwrap();
    assert!(pts[0].dw.abs() < 1e-3, "{}", pts[0].dw);
}

#[test]
fn istdp_is_even_and_peaks_at_smallest_lag() {
    let p = ExperimentParams::default();
    let pts = sweep_istdp(&p, &canonical_delta_ts()).unwrap();
    let max = pts.iter().map(|x| x.dw.abs()).fold(0.0, f64::max);
    let n = pts.len();
    for i in 0..n / 2 {
        assert!((pts[i].dw - pts[n - 1 - i].dw).abs() <= 0.05 * max);
    }
    let best = pts
        .iter()
        .max_by(|a, b| a.dw.abs().total_cmp(&b.dw.abs()))
        .unwrap();
    assert_eq!(best.delta_t.magnitude(), 1e-3);
}

#[test]
fn istdp_vanishes_without_pulse_overlap() {
    let p = ExperimentParams::default();
    let t1 = p.netlist.components.one_shot_duration().unwrap();
    let peak = sweep_istdp(&p, &[ms(1.0)]).unwrap()[0].dw.abs();
    let far = sweep_istdp(
        &p,
        &[
            DeltaT::new(t1 + 1e-3).unwrap(),
            DeltaT::new(-(t1 + 1e-3)).unwrap(),
        ],
    )
    .unwrap();
    for x in far {
        assert!(x.dw.abs() < 0.01 * peak, "{:?}", x);
    }
}

#[test]
fn da_sweeps_increase_with_wiper() {
    let p = ExperimentParams::default();
    for pts in [
        sweep_da_stdp(&p, &stdp_da_settings(), ms(DA_SWEEP_DELTA_T_MS)).unwrap(),
        sweep_da_istdp(&p, &istdp_da_settings(), ms(DA_SWEEP_DELTA_T_MS)).unwrap(),
    ] {
        assert_eq!(pts.len(), 4);
        for w in pts.windows(2) {
            assert!(w[1].peak > w[0].peak, "{:?}", w);
        }
    }
}

#[test]
fn zero_gain_floor_silences_learning_at_zero_wiper() {
    let mut p = ExperimentParams::default();
    p.netlist.modulation.gain_min = 0.0;
    let pts = sweep_da_stdp(&p, &stdp_da_settings()[..1], ms(2.0)).unwrap();
    assert_eq!(pts[0].peak, 0.0);
}

#[test]
fn equal_wipers_give_equal_gain_on_both_paths() {
    let p = ExperimentParams::default();
    let s = [DaSetting::new("half", 0.5).unwrap()];
    let heb = sweep_da_stdp(&p, &s, ms(2.0)).unwrap()[0].peak;
    let inh = sweep_da_istdp(&p, &s, ms(2.0)).unwrap()[0].peak;
    let gain = p.netlist.modulation.gain_at(0.5);
    let raw_heb = p.run_pair(ms(2.0), Some(0.5), ids::U11).unwrap();
    let raw_inh = p.run_pair(ms(2.0), Some(0.5), ids::U7).unwrap();
    let peak = |t: &Trace| t.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!((heb - gain * peak(&raw_heb)).abs() < 1e-12);
    assert!((inh - gain * peak(&raw_inh)).abs() < 1e-12);
}

#[test]
fn sombrero_sweep_peaks_nearest_center() {
    let mut p = ExperimentParams::default();
    p.netlist.modulation.mode = ModMode::Sombrero;
    p.netlist.modulation.sombrero_center = 0.6;
    let settings: Vec<DaSetting> = (0..=10)
        .map(|i| DaSetting::new(format!("w{i}"), i as f64 / 10.0).unwrap())
        .collect();
    let pts = sweep_da_stdp(&p, &settings, ms(2.0)).unwrap();
    let best = (0..pts.len())
        .max_by(|&a, &b| pts[a].peak.total_cmp(&pts[b].peak))
        .unwrap();
    assert!((pts[best].wiper - 0.6).abs() < 1e-12);
    for i in 1..=best {
        assert!(pts[i].peak >= pts[i - 1].peak);
    }
    for i in best + 1..pts.len() {
        assert!(pts[i].peak <= pts[i - 1].peak);
    }
}

#[test]
fn spike_outside_grid_is_protocol_error() {
    let p = ExperimentParams::default();
    assert!(matches!(
        sweep_stdp(&p, &[ms(60.0)]),
        Err(Error::Protocol(_))
    ));
    assert!(matches!(
        sweep_istdp(&p, &[ms(-60.0)]),
        Err(Error::Protocol(_))
    ));
}

#[test]
fn conductance_grows_faster_under_high_dopamine() {
    let p = ExperimentParams::default();
    let run = run_stepped_conductance(&p, &ConductanceParams::default()).unwrap();
    assert_eq!(run.dopamine.grid(), run.conductance.grid());
    assert_eq!(run.pulse.grid(), run.conductance.grid());
    assert_eq!(run.conductance.unit(), Unit::Siemens);
    let low = run.slope(0.0, 0.5).unwrap();
    let high = run
        .slope(0.5, run.conductance.grid().t_end() - 1e-6)
        .unwrap();
    assert!(low > 0.0);
    assert!(high > low);
    let m = p.netlist.memristor;
    assert!(run
        .conductance
        .values()
        .iter()
        .all(|&g| g > m.g_min && g < m.g_max));
}

#[test]
fn zero_dopamine_with_zero_floor_keeps_conductance_constant() {
    let mut p = ExperimentParams::default();
    p.netlist.modulation.gain_min = 0.0;
    let grid = TimeGrid::covering(0.2, 1e-6).unwrap();
    let da = Trace::constant(grid, 0.0, Unit::Dimensionless).unwrap();
    let pre = SpikeTrain::periodic(0.005, 0.04, 4, 1e-4, 5.0).unwrap();
    let post = SpikeTrain::periodic(0.006, 0.0405, 4, 1e-4, 5.0).unwrap();
    let run = run_conductance_experiment(&p, &da, &pre, &post).unwrap();
    let g0 = p.netlist.memristor.g;
    assert!(run.conductance.values().iter().all(|&g| g == g0));
}

#[test]
fn conductance_rejects_spikes_off_grid() {
    let p = ExperimentParams::default();
    let grid = TimeGrid::covering(0.05, 1e-6).unwrap();
    let da = Trace::constant(grid, 0.5, Unit::Dimensionless).unwrap();
    let pre = SpikeTrain::new(vec![0.01], 1e-4, 5.0).unwrap();
    let post = SpikeTrain::new(vec![0.06], 1e-4, 5.0).unwrap();
    assert!(matches!(
        run_conductance_experiment(&p, &da, &pre, &post),
        Err(Error::Protocol(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn stdp_is_odd_at_any_lag(lag_ms in 0.5..20.0f64) {
        let p = ExperimentParams::default();
        let pts = sweep_stdp(&p, &[ms(lag_ms), ms(-lag_ms)]).unwrap();
        prop_assert!(pts[1].dw > 0.0 && pts[0].dw < 0.0);
        prop_assert!((pts[1].dw + pts[0].dw).abs() <= 1e-3 * pts[1].dw);
    }

    #[test]
    fn istdp_is_even_at_any_lag(lag_ms in 0.5..20.0f64) {
        let p = ExperimentParams::default();
        let pts = sweep_istdp(&p, &[ms(lag_ms), ms(-lag_ms)]).unwrap();
        prop_assert!((pts[1].dw - pts[0].dw).abs() <= 0.05 * pts[1].dw.abs().max(pts[0].dw.abs()));
    }

    #[test]
    fn linear_da_sweep_is_monotone(mut wipers in prop::collection::vec(0.0..=1.0f64, 2..5)) {
        wipers.sort_by(f64::total_cmp);
        wipers.dedup();
        let p = ExperimentParams::default();
        let s: Vec<DaSetting> = wipers.iter().map(|&w| DaSetting::new(format!("{w}"), w).unwrap()).collect();
        let pts = sweep_da_istdp(&p, &s, ms(2.0)).unwrap();
        for w in pts.windows(2) {
            prop_assert!(w[1].peak > w[0].peak);
        }
    }
}
