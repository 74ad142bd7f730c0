use aniso_core::harness::campaign::linear_history;
use aniso_core::harness::decay::DEFAULT_TOLERANCE;
use aniso_core::harness::{
    make_initial_data, measure_decay, run_campaign, Channel, ExperimentConfig, FitWindow, InitialData, Mode, Verdict,
};
use aniso_core::linear::rates::{exponent, Component};
use aniso_core::nonlinear::Scheme;

fn small_config() -> ExperimentConfig {
    let mut c = ExperimentConfig::default();
    c.grid = [32, 32, 32];
    c.box_len = [32.0, 32.0, 32.0];
    c.solver.t_end = 12.0;
    c.solver.dt = 0.25;
    c.solver.snapshot_stride = 2;
    c.data.scale_v = 1.5;
    c.p_set = vec![2.0, f64::INFINITY];
    c.t0 = 2.0;
    c
}

#[test]
fn config_text_round_trips() {
    let mut c = small_config();
    c.mode = Mode::Nonlinear;
    c.solver.scheme = Scheme::IntegratingFactorRk4;
    c.data.seed = 42;
    c.eps = 0.1;
    let back = ExperimentConfig::parse(&c.to_text()).unwrap();
    assert_eq!(back.to_text(), c.to_text());
    assert_eq!(back.grid, c.grid);
    assert_eq!(back.data.seed, 42);
    assert_eq!(back.p_set, c.p_set);
}

#[test]
fn config_errors_are_reported() {
    assert!(ExperimentConfig::parse("grid = 32 32").is_err());
    assert!(ExperimentConfig::parse("colour = blue").is_err());
    assert!(ExperimentConfig::parse("dt = -1").is_err());
    assert!(ExperimentConfig::parse("eps = 0.3").is_err());
    assert!(ExperimentConfig::parse("# only a comment\n\n").is_ok());
}

#[test]
fn zero_amplitude_campaign_is_inconclusive_everywhere() {
    let mut c = small_config();
    c.data.amplitude = 0.0;
    let rep = run_campaign(&c, None).unwrap();
    assert_eq!(rep.runs.len(), 2);
    for run in &rep.runs {
        assert!(run.fits.iter().all(|f| f.verdict == Verdict::Inconclusive));
        assert!(run.norms.to_csv().lines().skip(1).all(|l| l.ends_with(",0e0")));
    }
    assert!(rep.passed());
}

#[test]
fn horizontal_heat_flow_decays_at_rate_one_half() {
    // P_h v_h only feels the horizontal heat kernel
    let mut c = small_config();
    c.grid = [64, 64, 32];
    c.box_len = [64.0, 64.0, 32.0];
    let b = c.box_spec().unwrap();
    let init = make_initial_data(&InitialData { scale_v: 1.5, ..c.data }, &b).unwrap();
    let times: Vec<f64> = (0..=32).map(|i| i as f64).collect();
    let table = linear_history(&init.state, &times, &[2.0]).unwrap();
    let ch = Channel::new(Component::PhVh, 0, 0, 2.0).unwrap();
    let window = FitWindow::for_box(c.box_len, 5.0, 32.0).unwrap();
    assert_eq!(window.t1, 16.0);
    let fit = measure_decay(&table, ch, window, -0.5, DEFAULT_TOLERANCE).unwrap();
    assert!((fit.slope + 0.5).abs() < 0.1, "slope {}", fit.slope);
    assert_eq!(fit.verdict, Verdict::Pass);
}

#[test]
fn short_windows_are_rejected() {
    let c = small_config();
    let b = c.box_spec().unwrap();
    let init = make_initial_data(&c.data, &b).unwrap();
    let table = linear_history(&init.state, &[0.0, 1.0, 2.0, 3.0], &[2.0]).unwrap();
    let ch = Channel::new(Component::Theta, 0, 0, 2.0).unwrap();
    let theory = exponent(Component::Theta, 0, 2.0, 0.05, false);
    assert!(measure_decay(&table, ch, FitWindow { t0: 0.0, t1: 3.0 }, theory, 0.15).is_err());
}
