//! Acceptance suite: one PASS/FAIL line per criterion, details indented below.
//! Run with `cargo test --release -p aniso-core --test acceptance`.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;

use aniso_core::grid::{for_each_mode, BoxSpec};
use aniso_core::harness::verify::{random_solenoidal, verify_kernel, verify_linear, verify_lp, verify_nonlinear};
use aniso_core::harness::{make_initial_data, run_campaign, CampaignReport, Channel, ExperimentConfig, Mode};
use aniso_core::linear::propagate_linear;
use aniso_core::linear::rates::{exponent, Component};
use aniso_core::linear::symbols::{apply_a, horizontal_norm};
use aniso_core::nonlinear::{run_with, RunOptions, SolverConfig};
use aniso_core::report::{Check, SuiteReport};

/// Criteria expected to stay red; see the decisions ledger.
const KNOWN_RED: [usize; 1] = [8];

struct Outcome {
    checks: Vec<Check>,
}

impl Outcome {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn runtime(&mut self, start: Instant, limit_s: f64) {
        self.push(Check::at_most("runtime [s]", start.elapsed().as_secs_f64(), limit_s));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn pick(rep: &SuiteReport, names: &[&str]) -> Vec<Check> {
    names
        .iter()
        .map(|n| {
            rep.checks
                .iter()
                .find(|c| c.name == *n)
                .cloned()
                .unwrap_or_else(|| Check::flag(n, false, "check missing from suite"))
        })
        .collect()
}

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(name)
}

fn algebra() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    let rep = verify_linear(11, 1000).expect("linear suite");
    for c in pick(
        &rep,
        &[
            "P~^2 = P~",
            "P_s P_t = delta P_s",
            "sum P_s = P~",
            "A^3 = -omega^2 A",
            "Rodrigues vs matrix exponential",
        ],
    ) {
        o.push(c);
    }
    o.runtime(start, 10.0);
    o
}

fn rk4_exactness() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    let b = BoxSpec::cube(64, 2.0 * std::f64::consts::PI).unwrap();
    let u0 = random_solenoidal(&b, 12, [6, 6, 6], 1.0);
    let (dt, steps) = (1e-3, 1000);
    let w = b.wavenumbers();
    let mut u = u0.clone();
    for_each_mode(&b, |idx, i, j, k| {
        let xi = w.xi(i, j, k);
        let h2 = horizontal_norm(xi).powi(2);
        let rhs = |v: [Complex64; 4]| {
            let av = apply_a(xi, v);
            std::array::from_fn(|c| -h2 * v[c] - av[c])
        };
        let axpy = |v: &[Complex64; 4], a: f64, d: &[Complex64; 4]| -> [Complex64; 4] {
            std::array::from_fn(|c| v[c] + a * d[c])
        };
        let mut v = u0.mode(idx);
        for _ in 0..steps {
            let k1 = rhs(v);
            let k2 = rhs(axpy(&v, dt / 2.0, &k1));
            let k3 = rhs(axpy(&v, dt / 2.0, &k2));
            let k4 = rhs(axpy(&v, dt, &k3));
            v = std::array::from_fn(|c| v[c] + dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]));
        }
        u.set_mode(idx, v);
    });
    u.time = dt * steps as f64;
    let exact = propagate_linear(&u0, 1.0).unwrap();
    o.push(
        Check::at_most("propagate_linear vs RK4, relative, t = 1", exact.relative_difference(&u), 1e-6)
            .with_note("64^3, dt = 1e-3"),
    );
    o.runtime(start, 120.0);
    o
}

fn energy_identity() -> Outcome {
    let start = Instant::now();
    let mut o = Outcome::new();
    let rep = verify_nonlinear(13).expect("nonlinear suite");
    for mut c in pick(&rep, &["energy identity (linear)", "energy identity (nonlinear)"]) {
        c.note = "16^3, random solenoidal data, t = 1".into();
        o.push(c);
    }
    // physical data on a larger box
    let mut cfg = ExperimentConfig::default();
    cfg.grid = [64, 64, 32];
    cfg.box_len = [64.0, 64.0, 32.0];
    cfg.data.scale_v = 1.5;
    let b = cfg.box_spec().unwrap();
    let init = make_initial_data(&cfg.data, &b).unwrap();
    for nonlinear in [false, true] {
        let solver = SolverConfig {
            t_end: 16.0,
            nonlinear,
            ..cfg.solver.clone()
        };
        let tr = run_with(&init.state, &solver, &RunOptions::default()).unwrap();
        let name = if nonlinear { "nonlinear" } else { "linear" };
        o.push(
            Check::at_most(&format!("energy identity ({name})"), tr.energy.identity_defect(), 1e-4)
                .with_note("64x64x32, default data, t = 16"),
        );
    }
    o.runtime(start, 300.0);
    o
}

/// L^2 channels two-sided, L^inf channels one-sided with their own slack.
fn rate_checks(o: &mut Outcome, rep: &CampaignReport, mode: Mode) {
    let run = rep.run(mode).expect("campaign run");
    let nonlinear = mode == Mode::Nonlinear;
    let eps = 0.05;
    let table: [(Component, f64, Option<f64>); 7] = [
        (Component::PhVh, 2.0, None),
        (Component::CurlfreeVh, 2.0, None),
        (Component::Theta, 2.0, None),
        (Component::V3, 2.0, None),
        (Component::PhVh, f64::INFINITY, Some(0.15)),
        (Component::Theta, f64::INFINITY, Some(0.2)),
        (Component::V3, f64::INFINITY, Some(0.25)),
    ];
    for (comp, p, slack) in table {
        let ch = Channel::new(comp, 0, 0, p).unwrap();
        let theory = exponent(comp, 0, p, eps, nonlinear);
        let name = format!("{} slope", ch.label());
        let Some(fit) = run.fit(&ch) else {
            o.push(Check::flag(&name, false, "channel missing"));
            continue;
        };
        let c = match slack {
            None => Check::within(&name, fit.slope, theory - 0.15, theory + 0.15),
            Some(s) => Check::at_most(&name, fit.slope, theory + s).with_note(format!("theory {theory}")),
        };
        o.push(c);
    }
}

fn campaign_criteria() -> (Outcome, Outcome) {
    let start = Instant::now();
    let cfg = ExperimentConfig::load(&config_path("default.conf")).unwrap();
    assert_eq!(cfg.mode, Mode::Both);
    let rep = run_campaign(&cfg, None).expect("default campaign");
    let elapsed = start.elapsed().as_secs_f64();

    let mut lin = Outcome::new();
    rate_checks(&mut lin, &rep, Mode::Linear);
    let mut non = Outcome::new();
    rate_checks(&mut non, &rep, Mode::Nonlinear);
    let run = rep.run(Mode::Nonlinear).unwrap();
    let finite = run.norms.records.iter().all(|r| r.value.is_finite());
    let reached = run.norms.records.iter().map(|r| r.t).fold(0.0, f64::max);
    non.push(Check::flag(
        "no blowup before t_end",
        finite && (reached - cfg.solver.t_end).abs() < 1e-9,
        format!("last output t = {reached}"),
    ));
    if let Some(d) = run.energy_defect {
        non.push(Check::at_most("energy identity", d, 1e-4));
    }
    // one campaign produces both runs; the time is charged to each
    lin.push(Check::at_most("runtime [s] (linear + nonlinear)", elapsed, 30.0 * 60.0));
    non.push(Check::at_most("runtime [s] (linear + nonlinear)", elapsed, 45.0 * 60.0));
    (lin, non)
}

fn duhamel() -> Outcome {
    let mut o = Outcome::new();
    let rep = verify_nonlinear(14).expect("nonlinear suite");
    for c in pick(&rep, &["mild residual / ||u(1)||", "mild residual ratio under dt_quad doubling"]) {
        o.push(c);
    }
    o
}

fn suite_outcome(rep: SuiteReport, start: Instant, limit_s: f64) -> Outcome {
    let mut o = Outcome::new();
    for c in rep.checks {
        o.push(c);
    }
    o.runtime(start, limit_s);
    o
}

fn determinism() -> Outcome {
    let mut o = Outcome::new();
    let mut cfg = ExperimentConfig::load(&config_path("smoke.conf")).unwrap();
    cfg.mode = Mode::Both;
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        run_campaign(&cfg, Some(d.path())).expect("smoke campaign");
    }
    for sub in ["linear", "nonlinear"] {
        for file in ["report.csv", "norms.csv"] {
            let read = |d: &tempfile::TempDir| std::fs::read(d.path().join(sub).join(file)).unwrap();
            let (a, b) = (read(&dirs[0]), read(&dirs[1]));
            o.push(Check::flag(
                &format!("{sub}/{file} bit-identical"),
                !a.is_empty() && a == b,
                format!("{} bytes", a.len()),
            ));
        }
    }
    o
}

fn main() -> ExitCode {
    // libtest flags such as --nocapture are accepted and ignored
    let names = [
        "projector/propagator algebra",
        "linear exactness vs RK4",
        "energy identity",
        "linear decay rates",
        "nonlinear small-data decay",
        "Duhamel identity",
        "Littlewood-Paley suite",
        "kernel envelopes",
        "determinism",
    ];
    let mut results: Vec<Outcome> = Vec::new();
    let report = |n: usize, o: &Outcome| {
        println!("criterion {n} {}: {}", if o.passed() { "PASS" } else { "FAIL" }, names[n - 1]);
        for c in &o.checks {
            println!("    {c}");
        }
    };

    let steps: [&dyn Fn() -> Vec<Outcome>; 7] = [
        &|| vec![algebra()],
        &|| vec![rk4_exactness()],
        &|| vec![energy_identity()],
        &|| {
            let (a, b) = campaign_criteria();
            vec![a, b]
        },
        &|| vec![duhamel()],
        &|| {
            let s = Instant::now();
            let lp = suite_outcome(verify_lp(15).expect("lp suite"), s, 300.0);
            let s = Instant::now();
            let kernel = suite_outcome(verify_kernel(16).expect("kernel suite"), s, 1200.0);
            vec![lp, kernel]
        },
        &|| vec![determinism()],
    ];
    for step in steps {
        for o in step() {
            results.push(o);
            report(results.len(), results.last().unwrap());
        }
    }

    let passed = results.iter().filter(|o| o.passed()).count();
    let unexpected: Vec<usize> = (1..=results.len())
        .filter(|n| !results[n - 1].passed() && !KNOWN_RED.contains(n))
        .collect();
    println!("{passed}/{} criteria pass", results.len());
    for n in KNOWN_RED {
        if !results[n - 1].passed() {
            println!("criterion {n} is a known failure (see the decisions ledger)");
        }
    }
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::from(1)
    }
}
