use landen_kdv::evolve::{self, EvolverConfig};
use landen_kdv::waves::SuperposedWave;
use landen_kdv::{DnWaveParams, Error, PeriodicGrid, WaveFamily};

fn cnoidal() -> SuperposedWave {
    SuperposedWave::new(DnWaveParams::new(1.0, 0.0, 0.5, 1).unwrap()).unwrap()
}

fn final_error(wave: &SuperposedWave, n: usize, dt: f64, t: f64) -> f64 {
    let grid = PeriodicGrid::new(wave.spatial_period().unwrap(), n).unwrap();
    let out = evolve::evolve(&wave.sample(&grid, 0.0), &EvolverConfig::new(grid, dt, t)).unwrap();
    out.iter().zip(wave.sample(&grid, t)).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()))
}

#[test]
fn fourth_order_in_time() {
    let w = cnoidal();
    let errors: Vec<f64> = [2e-3, 1e-3, 5e-4].iter().map(|&dt| final_error(&w, 64, dt, 0.4)).collect();
    for pair in errors.windows(2) {
        let ratio = pair[0] / pair[1];
        assert!((14.0..18.0).contains(&ratio), "ratio {ratio} from {errors:?}");
    }
}

#[test]
fn oversized_step_reports_instability() {
    let w = cnoidal();
    let grid = PeriodicGrid::new(w.spatial_period().unwrap(), 128).unwrap();
    let cfg = EvolverConfig::new(grid, 8e-3, 0.4);
    assert!(!cfg.within_stability_heuristic());
    match evolve::evolve(&w.sample(&grid, 0.0), &cfg) {
        Err(Error::Instability { time, .. }) => assert!(time > 0.0 && time <= 0.4),
        other => panic!("expected instability, got {other:?}"),
    }
}

#[test]
fn superposed_wave_translates_rigidly() {
    let w = SuperposedWave::new(DnWaveParams::new(1.0, 0.5, 0.8, 2).unwrap()).unwrap();
    let period = w.spatial_period().unwrap();
    let grid = PeriodicGrid::new(2.0 * period, 128).unwrap();
    let t = 0.05;
    let cfg = EvolverConfig::new(grid, 1e-4, t);
    let traj = evolve::evolve_trajectory(&w.sample(&grid, 0.0), &cfg).unwrap();
    let exact = w.sample(&grid, t);
    let dev = traj.final_state().samples.iter().zip(&exact).fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
    assert!(dev < 1e-8, "{dev}");
    let drift = evolve::conservation_report(&traj);
    assert!(drift.mass_drift < 1e-12 && drift.momentum_drift < 1e-10, "{drift:?}");
}
