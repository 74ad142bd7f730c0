use std::path::{Path, PathBuf};

use super::config::SolverConfig;
use super::duhamel::DuhamelLedger;
use super::flux::{FluxEvaluator, FluxPieces};
use super::stepper::Stepper;
use crate::error::Result;
use crate::grid::{for_each_mode, pairwise_sum, snapshot, BoussinesqState};
use crate::harness::channels::channel_records;
use crate::series::NormTable;

/// What a run keeps besides the final state.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    /// Directory for snapshot files and `norms.csv`.
    pub out_dir: Option<PathBuf>,
    /// Keep output states in memory.
    pub keep_snapshots: bool,
    /// Probe exponents for the norm channels; empty disables the norm table.
    pub p_set: Vec<f64>,
    /// Record the flux at every step for Duhamel checks.
    pub ledger: bool,
}

/// `E(t) = ||u||^2`, `D(t) = ||grad_h u||^2` and the running `int_0^t D`
/// after every step.
#[derive(Clone, Debug, Default)]
pub struct EnergyLog {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub dissipation: Vec<f64>,
    pub integral: Vec<f64>,
}

impl EnergyLog {
    fn start(&mut self, s: &BoussinesqState) {
        self.times.push(s.time);
        self.energy.push(s.energy());
        self.dissipation.push(horizontal_dissipation(s));
        self.integral.push(0.0);
    }

    fn push(&mut self, prev: &BoussinesqState, next: &BoussinesqState) {
        let last = *self.integral.last().unwrap_or(&0.0);
        self.times.push(next.time);
        self.energy.push(next.energy());
        self.dissipation.push(horizontal_dissipation(next));
        self.integral.push(last + step_dissipation(prev, next));
    }

    /// `int_0^t D` at the last logged time.
    pub fn dissipation_integral(&self) -> f64 {
        *self.integral.last().unwrap_or(&0.0)
    }

    /// `|E(t) + 2 int D - E(0)| / E(0)` at the last logged time.
    pub fn identity_defect(&self) -> f64 {
        let (Some(e0), Some(e1)) = (self.energy.first(), self.energy.last()) else {
            return 0.0;
        };
        if *e0 == 0.0 {
            return 0.0;
        }
        (e1 + 2.0 * self.dissipation_integral() - e0).abs() / e0
    }

    /// Largest step-to-step energy increase (zero when monotone).
    pub fn max_increase(&self) -> f64 {
        self.energy
            .windows(2)
            .map(|w| (w[1] - w[0]).max(0.0))
            .fold(0.0, f64::max)
    }
}

/// `int |xi_h|^2 |u(s)|^2 ds` over one step, per mode, with the heat decay
/// `e^{-2 |xi_h|^2 s}` integrated exactly and the remaining factor
/// interpolated linearly. Exact for the linear flow, whose skew part keeps
/// `|u(xi)|` fixed.
pub fn step_dissipation(prev: &BoussinesqState, next: &BoussinesqState) -> f64 {
    let b = *prev.box_spec();
    let w = b.wavenumbers();
    let dt = next.time - prev.time;
    let mut terms = vec![0.0; b.total()];
    for_each_mode(&b, |idx, i, j, k| {
        let x = w.xi(i, j, k);
        let s2 = x[0] * x[0] + x[1] * x[1];
        if s2 == 0.0 {
            return;
        }
        let a = 2.0 * s2;
        let y = a * dt;
        let amp = |s: &BoussinesqState| -> f64 { s.fields.iter().map(|f| f.coeffs()[idx].norm_sqr()).sum() };
        let g0 = amp(prev);
        let g1 = amp(next) * y.exp();
        // I0 = int_0^dt e^{-a s} ds, I1 = int_0^dt s e^{-a s} ds / dt
        let (i0, i1) = if y < 1e-4 {
            (dt * (1.0 - y / 2.0 + y * y / 6.0), dt * (0.5 - y / 3.0 + y * y / 8.0))
        } else {
            let e = (-y).exp();
            (-(-y).exp_m1() / a, (1.0 - e * (1.0 + y)) / (a * y))
        };
        terms[idx] = s2 * (g0 * i0 + (g1 - g0) * i1);
    });
    pairwise_sum(&terms) / b.volume()
}

/// `||grad_h u||^2_{L^2}` summed over the four components.
pub fn horizontal_dissipation(s: &BoussinesqState) -> f64 {
    let b = *s.box_spec();
    let w = b.wavenumbers();
    let mut terms = vec![0.0; b.total()];
    for_each_mode(&b, |idx, i, j, k| {
        let x = w.xi(i, j, k);
        let amp: f64 = s.fields.iter().map(|f| f.coeffs()[idx].norm_sqr()).sum();
        terms[idx] = (x[0] * x[0] + x[1] * x[1]) * amp;
    });
    pairwise_sum(&terms) / b.volume()
}

pub struct Trajectory {
    pub initial: BoussinesqState,
    pub last: BoussinesqState,
    /// Output states (every `snapshot_stride` steps and the final one) when kept.
    pub snapshots: Vec<BoussinesqState>,
    pub output_times: Vec<f64>,
    pub norms: NormTable,
    pub energy: EnergyLog,
    pub ledger: Option<DuhamelLedger>,
    pub steps: usize,
}

pub fn snapshot_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("snap_{n:06}.bin"))
}

/// Runs with snapshots kept in memory and the default norm channels.
pub fn run(state0: &BoussinesqState, cfg: &SolverConfig) -> Result<Trajectory> {
    let opts = RunOptions {
        keep_snapshots: true,
        p_set: vec![2.0, f64::INFINITY],
        ..Default::default()
    };
    run_with(state0, cfg, &opts)
}

pub fn run_with(state0: &BoussinesqState, cfg: &SolverConfig, opts: &RunOptions) -> Result<Trajectory> {
    cfg.validate()?;
    let b = *state0.box_spec();
    let mut stepper = Stepper::new(b, cfg)?;
    if let Some(dir) = &opts.out_dir {
        std::fs::create_dir_all(dir)?;
    }
    let mut ledger = opts.ledger.then(|| {
        (
            DuhamelLedger::new(b, stepper.dt()),
            FluxEvaluator::new(b, cfg.dealias),
        )
    });
    let mut traj = Trajectory {
        initial: state0.clone(),
        last: state0.clone(),
        snapshots: Vec::new(),
        output_times: Vec::new(),
        norms: NormTable::default(),
        energy: EnergyLog::default(),
        ledger: None,
        steps: cfg.steps(),
    };
    // the linear diagnostic mode has no flux to record
    let flux_at = |fe: &mut FluxEvaluator, s: &BoussinesqState| {
        if cfg.nonlinear {
            fe.pieces(s)
        } else {
            FluxPieces::zeros(b.total())
        }
    };
    let emit = |s: &BoussinesqState, n_out: usize, traj: &mut Trajectory| -> Result<()> {
        traj.output_times.push(s.time);
        if !opts.p_set.is_empty() {
            traj.norms.extend(channel_records(s, &opts.p_set)?);
        }
        if let Some(dir) = &opts.out_dir {
            snapshot::save(&snapshot_path(dir, n_out), s)?;
        }
        if opts.keep_snapshots {
            traj.snapshots.push(s.clone());
        }
        Ok(())
    };
    let mut state = state0.clone();
    let mut n_out = 0;
    emit(&state, n_out, &mut traj)?;
    traj.energy.start(&state);
    let steps = cfg.steps();
    for n in 1..=steps {
        if let Some((l, fe)) = ledger.as_mut() {
            l.record(state.time - state0.time, flux_at(fe, &state));
        }
        let next = stepper.step(&state)?;
        traj.energy.push(&state, &next);
        state = next;
        if n % cfg.snapshot_stride == 0 || n == steps {
            n_out += 1;
            emit(&state, n_out, &mut traj)?;
        }
    }
    if let Some((l, fe)) = ledger.as_mut() {
        if steps > 0 {
            l.record(state.time - state0.time, flux_at(fe, &state));
        }
    }
    if let Some(dir) = &opts.out_dir {
        traj.norms.write(&dir.join("norms.csv"))?;
    }
    traj.ledger = ledger.map(|(l, _)| l);
    traj.last = state;
    Ok(traj)
}
