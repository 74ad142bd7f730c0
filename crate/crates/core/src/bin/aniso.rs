use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use aniso_core::grid::snapshot;
use aniso_core::harness::decay::DEFAULT_TOLERANCE;
use aniso_core::harness::{
    make_initial_data, measure_decay, run_campaign, run_suite, Channel, ExperimentConfig, FitWindow, Mode,
};
use aniso_core::kernel_lab::envelope::probe_set;
use aniso_core::kernel_lab::KernelEvaluator;
use aniso_core::linear::propagate_linear;
use aniso_core::linear::rates::exponent;
use aniso_core::lp_besov::{besov_norm, BesovSpec};
use aniso_core::nonlinear::{run_with, RunOptions};
use aniso_core::series::{parse_p, NormTable};
use aniso_core::{Error, Result};

#[derive(Parser)]
#[command(name = "aniso", about = "Stratified Boussinesq decay experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Field {
    V1,
    V2,
    V3,
    Theta,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Lp,
    Linear,
    Nonlinear,
    Kernel,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full time integration with snapshots and norms.csv.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact linear evolution of a snapshot.
    LinearPropagate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Anisotropic Besov norm of one component of a snapshot.
    Besov {
        #[arg(long)]
        field: PathBuf,
        #[arg(long, value_enum)]
        component: Field,
        #[arg(long, value_parser = parse_exponent)]
        p: f64,
        #[arg(long, value_parser = parse_exponent)]
        q: f64,
        #[arg(long, allow_hyphen_values = true)]
        s1: f64,
        #[arg(long, allow_hyphen_values = true)]
        s2: f64,
    },
    /// Decay fit of one channel from a norms.csv directory.
    Measure {
        /// Directory holding norms.csv (config.txt here or one level up).
        #[arg(long)]
        traj: PathBuf,
        /// e.g. `theta[ah=0,a3=0,p=inf]` or `theta:0:0:inf`.
        #[arg(long)]
        channel: Vec<String>,
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long)]
        t1: Option<f64>,
    },
    /// Linear and/or nonlinear decay campaign with report.csv.
    Campaign {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "campaign")]
        out: PathBuf,
    },
    /// Property suites.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Kernel values at stationary-phase probes, as CSV.
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        m: i32,
        #[arg(long)]
        tmax: f64,
        #[arg(long, default_value_t = 128)]
        res: usize,
        #[arg(long, default_value_t = 16)]
        steps: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_exponent(s: &str) -> std::result::Result<f64, String> {
    parse_p(s).map_err(|e| e.to_string())
}

fn simulate(config: PathBuf, out: PathBuf) -> Result<()> {
    let mut cfg = ExperimentConfig::load(&config)?;
    let b = cfg.box_spec()?;
    cfg.solver.nonlinear = match cfg.mode {
        Mode::Linear => false,
        Mode::Nonlinear => true,
        Mode::Both => return Err(Error::Config("simulate needs mode = linear or mode = nonlinear".into())),
    };
    let init = make_initial_data(&cfg.data, &b)?;
    let opts = RunOptions {
        out_dir: Some(out.clone()),
        p_set: cfg.p_set.clone(),
        ..Default::default()
    };
    let traj = run_with(&init.state, &cfg.solver, &opts)?;
    std::fs::write(out.join("config.txt"), cfg.to_text())?;
    println!(
        "{} steps to t = {}, {} snapshots, energy identity defect {:.3e}",
        traj.steps,
        traj.last.time,
        traj.output_times.len(),
        traj.energy.identity_defect()
    );
    Ok(())
}

fn linear_propagate(input: PathBuf, t: f64, out: PathBuf) -> Result<()> {
    let s = snapshot::load(&input)?;
    let u = propagate_linear(&s, t)?;
    snapshot::save(&out, &u)?;
    println!("t = {} -> {}", s.time, u.time);
    Ok(())
}

fn besov(field: PathBuf, component: Field, spec: BesovSpec) -> Result<()> {
    let s = snapshot::load(&field)?;
    let f = match component {
        Field::V1 => s.v(0),
        Field::V2 => s.v(1),
        Field::V3 => s.v(2),
        Field::Theta => s.theta(),
    };
    println!("{:.12e}", besov_norm(f, &spec)?);
    Ok(())
}

fn find_config(dir: &Path) -> Result<(ExperimentConfig, bool)> {
    for d in [Some(dir), dir.parent()].into_iter().flatten() {
        let path = d.join("config.txt");
        if path.exists() {
            let cfg = ExperimentConfig::load(&path)?;
            let nonlinear = match cfg.mode {
                Mode::Linear => false,
                Mode::Nonlinear => true,
                Mode::Both => dir.file_name().is_some_and(|n| n == "nonlinear"),
            };
            return Ok((cfg, nonlinear));
        }
    }
    Err(Error::Config(format!("no config.txt in {} or its parent", dir.display())))
}

fn measure(traj: PathBuf, channels: Vec<String>, t0: Option<f64>, t1: Option<f64>) -> Result<bool> {
    let (cfg, nonlinear) = find_config(&traj)?;
    let table = NormTable::read(&traj.join("norms.csv"))?;
    let mut window = FitWindow::for_box(cfg.box_len, t0.unwrap_or(cfg.t0), cfg.solver.t_end)?;
    if let Some(t1) = t1 {
        window.t1 = window.t1.min(t1);
    }
    let selected = if channels.is_empty() {
        Channel::all(&cfg.p_set)
    } else {
        channels.iter().map(|c| Channel::parse(c)).collect::<Result<_>>()?
    };
    let mut text = String::from("channel,alpha_h,alpha_3,p,t0,t1,slope,theory,verdict\n");
    let mut ok = true;
    for c in selected {
        let theory = exponent(c.component, c.alpha_h, c.p, cfg.eps, nonlinear);
        let fit = measure_decay(&table, c, window, theory, DEFAULT_TOLERANCE)?;
        ok &= fit.verdict != aniso_core::harness::Verdict::Fail;
        writeln!(
            text,
            "{},{},{},{},{},{},{:.6},{:.6},{}",
            c.component.name(),
            c.alpha_h,
            c.alpha_3,
            aniso_core::series::format_p(c.p),
            fit.t0,
            fit.t1,
            fit.slope,
            fit.theory,
            fit.verdict
        )
        .unwrap();
    }
    emit(&text)?;
    Ok(ok)
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn campaign(config: PathBuf, out: PathBuf) -> Result<bool> {
    let cfg = ExperimentConfig::load(&config)?;
    std::fs::create_dir_all(&out)?;
    let report = run_campaign(&cfg, Some(&out))?;
    print!("{}", report.summary());
    Ok(report.passed())
}

fn verify(suite: Suite, seed: u64) -> Result<bool> {
    let name = match suite {
        Suite::Lp => "lp",
        Suite::Linear => "linear",
        Suite::Nonlinear => "nonlinear",
        Suite::Kernel => "kernel",
    };
    let rep = run_suite(name, seed)?;
    println!("{rep}");
    Ok(rep.passed())
}

fn kernel(m: i32, tmax: f64, res: usize, steps: usize, out: PathBuf) -> Result<()> {
    if !(tmax >= 0.0) || steps == 0 {
        return Err(Error::RejectedInput("kernel needs tmax >= 0 and steps >= 1".into()));
    }
    let mut csv = String::from("m,t,x1,x2,x3,re,im,abs\n");
    for n in 0..=steps {
        let t = tmax * n as f64 / steps as f64;
        let ev = KernelEvaluator::new(m, t, res)?;
        for x in probe_set(m, t, 40) {
            let v = ev.eval(x)?.value;
            writeln!(csv, "{m},{t},{},{},{},{:e},{:e},{:e}", x[0], x[1], x[2], v.re, v.im, v.norm()).unwrap();
        }
    }
    std::fs::write(&out, csv)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Simulate { config, out } => simulate(config, out).map(|_| true),
        Cmd::LinearPropagate { input, t, out } => linear_propagate(input, t, out).map(|_| true),
        Cmd::Besov {
            field,
            component,
            p,
            q,
            s1,
            s2,
        } => BesovSpec::new(p, q, s1, s2)
            .and_then(|spec| besov(field, component, spec))
            .map(|_| true),
        Cmd::Measure { traj, channel, t0, t1 } => measure(traj, channel, t0, t1),
        Cmd::Campaign { config, out } => campaign(config, out),
        Cmd::Verify { suite, seed } => verify(suite, seed),
        Cmd::Kernel {
            m,
            tmax,
            res,
            steps,
            out,
        } => kernel(m, tmax, res, steps, out).map(|_| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
