use std::fmt::Write as _;
use std::path::Path;

use super::channels::{channel_records, Channel};
use super::config::{ExperimentConfig, Mode};
use super::decay::{measure_decay, DecayFit, FitWindow, Verdict, DEFAULT_TOLERANCE};
use super::initial::make_initial_data;
use crate::error::Result;
use crate::grid::BoussinesqState;
use crate::linear::propagate_linear;
use crate::linear::rates::{exponent, Component};
use crate::nonlinear::{run_with, RunOptions};
use crate::series::{format_p, NormTable};

pub const REPORT_HEADER: &str = "channel,alpha_h,alpha_3,p,t0,t1,slope,theory,verdict";

/// Channel norms of the exact linear solution at the given times.
pub fn linear_history(state0: &BoussinesqState, times: &[f64], p_set: &[f64]) -> Result<NormTable> {
    let mut out = NormTable::default();
    for &t in times {
        out.extend(channel_records(&propagate_linear(state0, t)?, p_set)?);
    }
    Ok(out)
}

/// Channels whose failure fails the campaign: undifferentiated `P_h v_h`,
/// `theta`, `v3` at `p = 2` and `inf`, and the curl-free part at `p = 2`.
pub fn is_mandatory(c: &Channel) -> bool {
    if c.alpha_h != 0 || c.alpha_3 != 0 {
        return false;
    }
    match c.component {
        Component::PhVh | Component::Theta | Component::V3 => c.p == 2.0 || c.p.is_infinite(),
        Component::CurlfreeVh => c.p == 2.0,
        _ => false,
    }
}

pub struct CampaignRun {
    /// `Linear` or `Nonlinear`.
    pub mode: Mode,
    pub fits: Vec<DecayFit>,
    pub norms: NormTable,
    pub window: FitWindow,
    /// `|E(t) + 2 int D - E(0)| / E(0)` for nonlinear runs.
    pub energy_defect: Option<f64>,
}

impl CampaignRun {
    pub fn fit(&self, c: &Channel) -> Option<&DecayFit> {
        self.fits.iter().find(|f| f.channel == *c)
    }

    pub fn mandatory_failures(&self) -> Vec<&DecayFit> {
        self.fits
            .iter()
            .filter(|f| is_mandatory(&f.channel) && f.verdict == Verdict::Fail)
            .collect()
    }

    pub fn report_csv(&self) -> String {
        let mut s = String::from(REPORT_HEADER);
        s.push('\n');
        for f in &self.fits {
            writeln!(
                s,
                "{},{},{},{},{},{},{:.6},{:.6},{}",
                f.channel.component.name(),
                f.channel.alpha_h,
                f.channel.alpha_3,
                format_p(f.channel.p),
                f.t0,
                f.t1,
                f.slope,
                f.theory,
                f.verdict
            )
            .unwrap();
        }
        s
    }
}

pub struct CampaignReport {
    pub x84: f64,
    pub runs: Vec<CampaignRun>,
}

impl CampaignReport {
    pub fn run(&self, mode: Mode) -> Option<&CampaignRun> {
        self.runs.iter().find(|r| r.mode == mode)
    }

    pub fn passed(&self) -> bool {
        self.runs.iter().all(|r| r.mandatory_failures().is_empty())
    }

    pub fn summary(&self) -> String {
        let mut s = format!("initial X^(8,4) surrogate norm: {:.6e}\n", self.x84);
        for r in &self.runs {
            let count = |v: Verdict| r.fits.iter().filter(|f| f.verdict == v).count();
            writeln!(
                s,
                "{}: window [{}, {}], {} PASS, {} FAIL, {} INCONCLUSIVE, {} mandatory failures",
                r.mode.name(),
                r.window.t0,
                r.window.t1,
                count(Verdict::Pass),
                count(Verdict::Fail),
                count(Verdict::Inconclusive),
                r.mandatory_failures().len()
            )
            .unwrap();
            if let Some(e) = r.energy_defect {
                writeln!(s, "  energy identity defect: {e:.3e}").unwrap();
            }
            for f in r.mandatory_failures() {
                writeln!(s, "  FAIL {}: slope {:.4} vs theory {:.4}", f.channel.label(), f.slope, f.theory).unwrap();
            }
        }
        s
    }
}

fn fits(cfg: &ExperimentConfig, norms: &NormTable, window: FitWindow, nonlinear: bool) -> Result<Vec<DecayFit>> {
    Channel::all(&cfg.p_set)
        .into_iter()
        .map(|c| {
            let theory = exponent(c.component, c.alpha_h, c.p, cfg.eps, nonlinear);
            measure_decay(norms, c, window, theory, DEFAULT_TOLERANCE)
        })
        .collect()
}

/// Runs the configured campaigns and, with an output directory, writes
/// `<out>/<mode>/{norms.csv,report.csv}` and `<out>/summary.txt`.
pub fn run_campaign(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<CampaignReport> {
    cfg.validate()?;
    let b = cfg.box_spec()?;
    let init = make_initial_data(&cfg.data, &b)?;
    let window = FitWindow::for_box(cfg.box_len, cfg.t0, cfg.solver.t_end)?;
    let modes: &[Mode] = match cfg.mode {
        Mode::Linear => &[Mode::Linear],
        Mode::Nonlinear => &[Mode::Nonlinear],
        Mode::Both => &[Mode::Linear, Mode::Nonlinear],
    };
    let mut report = CampaignReport {
        x84: init.x84,
        runs: Vec::new(),
    };
    for &mode in modes {
        let (norms, energy_defect) = match mode {
            Mode::Linear => {
                let steps = cfg.solver.steps();
                let mut times: Vec<f64> = (0..)
                    .map(|i| i * cfg.solver.snapshot_stride)
                    .take_while(|&n| n < steps)
                    .map(|n| n as f64 * cfg.solver.effective_dt())
                    .collect();
                times.push(cfg.solver.t_end);
                (linear_history(&init.state, &times, &cfg.p_set)?, None)
            }
            _ => {
                let opts = RunOptions {
                    p_set: cfg.p_set.clone(),
                    ..Default::default()
                };
                let traj = run_with(&init.state, &cfg.solver, &opts)?;
                (traj.norms, Some(traj.energy.identity_defect()))
            }
        };
        let run = CampaignRun {
            mode,
            fits: fits(cfg, &norms, window, mode == Mode::Nonlinear)?,
            norms,
            window,
            energy_defect,
        };
        if let Some(dir) = out {
            let sub = dir.join(mode.name());
            std::fs::create_dir_all(&sub)?;
            run.norms.write(&sub.join("norms.csv"))?;
            std::fs::write(sub.join("report.csv"), run.report_csv())?;
        }
        report.runs.push(run);
    }
    if let Some(dir) = out {
        std::fs::write(dir.join("summary.txt"), report.summary())?;
        std::fs::write(dir.join("config.txt"), cfg.to_text())?;
    }
    Ok(report)
}
