//! Property suites behind `verify {lp|linear|nonlinear|kernel}`.

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::norms::anisotropic_mixed_norm;
use crate::grid::{for_each_mode, random_band_field, BoussinesqState, BoxSpec, SpectralField};
use crate::kernel_lab::hessian::support_samples;
use crate::kernel_lab::{envelope, hessian, rank_check};
use crate::linear::eigen::{eigenprojection, Branch};
use crate::linear::symbols::{a_matrix, max_entry, omega, tilde_p, CMat4};
use crate::linear::{helmholtz3, helmholtz_h, propagate_linear, rodrigues};
use crate::lp_besov::blocks::{dyadic_range, ShellGeometry};
use crate::lp_besov::checks::{
    embedding_ratios, interpolation_ratio, max_bernstein_ratios, max_block_kernel_l1, paraproduct_ratio,
    riesz_multiplier_ratio, Ratio,
};
use crate::lp_besov::BesovSpec;
use crate::nonlinear::{mild_residual, run_with, step, RunOptions, Scheme, SolverConfig};
use crate::report::{Check, SuiteReport};

pub const SUITES: [&str; 4] = ["lp", "linear", "nonlinear", "kernel"];

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport> {
    match name {
        "lp" => verify_lp(seed),
        "linear" => verify_linear(seed, 1000),
        "nonlinear" => verify_nonlinear(seed),
        "kernel" => verify_kernel(seed),
        _ => Err(Error::RejectedInput(format!(
            "unknown suite '{name}' (expected one of {})",
            SUITES.join(", ")
        ))),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Divergence-free random state with `L^2` norm `size`.
pub fn random_solenoidal(b: &BoxSpec, seed: u64, band: [usize; 3], size: f64) -> BoussinesqState {
    let mut r = rng(seed);
    let fields = std::array::from_fn(|_| random_band_field(b, &mut r, band));
    let s = helmholtz3(&BoussinesqState::new(fields, 0.0).expect("fields share one box"));
    let e = s.energy().sqrt();
    s.scaled(size / e)
}

fn max_ratio(values: impl IntoIterator<Item = Ratio>) -> f64 {
    values
        .into_iter()
        .filter_map(Ratio::value)
        .fold(0.0, f64::max)
}

pub fn verify_lp(seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("lp");
    let two_pi = 2.0 * std::f64::consts::PI;

    // partition and orthogonality on an anisotropic box
    let pb = BoxSpec::new([32, 32, 16], [20.0, 20.0, 10.0])?;
    let geo = ShellGeometry::new(&pb);
    let range = dyadic_range(&pb);
    let mut sum = vec![0.0; pb.total()];
    let nxy = geo.h.len();
    for idx in range.indices() {
        let (wh, wv) = geo.weights(idx);
        for (n, s) in sum.iter_mut().enumerate() {
            *s += wh[n % nxy] * wv[n / nxy];
        }
    }
    let mut worst: f64 = 0.0;
    for_each_mode(&pb, |idx, i, j, k| {
        if !((i == 0 && j == 0) || k == 0) {
            worst = worst.max((sum[idx] - 1.0).abs());
        }
    });
    rep.push(Check::at_most("partition of unity", worst, 1e-12));

    let mut overlap: f64 = 0.0;
    for a in range.indices() {
        for b in range.indices() {
            if (a.j - b.j).abs() < 2 && (a.k - b.k).abs() < 2 {
                continue;
            }
            let (ha, va) = geo.weights(a);
            let (hb, vb) = geo.weights(b);
            let h = ha.iter().zip(&hb).map(|(x, y)| x * y).fold(0.0, f64::max);
            let v = va.iter().zip(&vb).map(|(x, y)| x * y).fold(0.0, f64::max);
            overlap = overlap.max(h * v);
        }
    }
    rep.push(Check::flag(
        "block almost-orthogonality",
        overlap == 0.0,
        format!("max product of separated block weights {overlap:e}"),
    ));

    // Bernstein ratios under refinement of band-limited fields
    let coarse = BoxSpec::cube(16, two_pi)?;
    let fine = coarse.refined(2)?;
    let mut r = rng(seed);
    let fields: Vec<SpectralField> = (0..10).map(|_| random_band_field(&coarse, &mut r, [3, 3, 3])).collect();
    let refined: Vec<SpectralField> = fields.iter().map(|f| f.embed(fine)).collect::<Result<_>>()?;
    let pairs = [(1.0, 2.0), (2.0, 4.0), (2.0, f64::INFINITY), (4.0, f64::INFINITY)];
    let rc = max_bernstein_ratios(&fields, &pairs)?;
    let rf = max_bernstein_ratios(&refined, &pairs)?;
    for (n, &(p1, p2)) in pairs.iter().enumerate() {
        rep.push(
            Check::at_most(
                &format!("Bernstein ({p1}, {p2}) refinement drift"),
                (rf[n] / rc[n] - 1.0).abs(),
                0.05,
            )
            .with_note(format!("max ratio {:.4} -> {:.4}", rc[n], rf[n])),
        );
    }

    // interpolation and embeddings over 50 fields
    let ib = BoxSpec::cube(32, two_pi)?;
    let test_fields: Vec<SpectralField> = (0..50).map(|_| random_band_field(&ib, &mut r, [6, 6, 6])).collect();
    let mut interp: f64 = 0.0;
    for f in &test_fields {
        for (p, q) in [(2.0, 1.0), (4.0, 2.0), (f64::INFINITY, f64::INFINITY)] {
            for theta in [0.25, 0.5, 0.75] {
                let ratio = interpolation_ratio(f, p, q, (0.0, 0.0), (1.0, 0.5), theta)?;
                interp = interp.max(ratio.value().unwrap_or(f64::INFINITY));
            }
        }
    }
    rep.push(Check::at_most("interpolation lhs/rhs", interp, 1.0 + 1e-10));

    let young = max_block_kernel_l1(&ib)?;
    for p in [2.0, 4.0, f64::INFINITY] {
        let mut lo: f64 = 0.0;
        let mut hi: f64 = 0.0;
        for f in &test_fields {
            let (a, b) = embedding_ratios(f, p)?;
            lo = lo.max(a.value().unwrap_or(f64::INFINITY));
            hi = hi.max(b.value().unwrap_or(f64::INFINITY));
        }
        rep.push(Check::at_most(&format!("B^0_{{{p},1}} -> L^{p}"), lo, 1.0 + 1e-12));
        rep.push(
            Check::at_most(&format!("L^{p} -> B^0_{{{p},inf}}"), hi, young * (1.0 + 1e-12))
                .with_note("bound: largest block kernel l^1 norm"),
        );
    }

    // horizontal Riesz projector
    for p in [2.0, 4.0, f64::INFINITY] {
        let spec = BesovSpec::new(p, 1.0, 0.5, 0.5)?;
        let mut ratios = Vec::new();
        for pair in test_fields.chunks(2).take(10) {
            ratios.push(riesz_multiplier_ratio(&pair[0], &pair[1], &spec)?);
        }
        let worst = max_ratio(ratios);
        if p == 2.0 {
            rep.push(Check::at_most("P_h bounded on B_2", worst, 1.0 + 1e-12));
        } else {
            rep.push(Check::flag(
                &format!("P_h bounded on B_{p}"),
                worst.is_finite() && worst > 0.0,
                format!("max ratio {worst:.4}"),
            ));
        }
    }

    // product estimate for a pair whose product the coarse grid resolves
    let f = random_band_field(&coarse, &mut r, [2, 2, 2]);
    let g = random_band_field(&coarse, &mut r, [2, 2, 2]);
    let a = paraproduct_ratio(&f, &g)?.value();
    let b = paraproduct_ratio(&f.embed(fine)?, &g.embed(fine)?)?.value();
    match (a, b) {
        (Some(a), Some(b)) => rep.push(
            Check::at_most("product ratio refinement drift", (b / a - 1.0).abs(), 0.10)
                .with_note(format!("ratio {a:.4} -> {b:.4}")),
        ),
        _ => rep.push(Check::flag("product ratio refinement drift", false, "undefined ratio")),
    }
    Ok(rep)
}

/// Projector onto the eigenspace of the Hermitian `iA` with eigenvalue `lam`.
fn hermitian_projector(xi: [f64; 3], lam: f64) -> CMat4 {
    let ia: Matrix4<Complex64> = a_matrix(xi).map(|x| Complex64::new(0.0, x));
    let eig = SymmetricEigen::new(ia);
    let mut p = CMat4::zeros();
    for (n, &ev) in eig.eigenvalues.iter().enumerate() {
        if (ev - lam).abs() < 1e-8 {
            let v = eig.eigenvectors.column(n);
            p += v * v.adjoint();
        }
    }
    p
}

pub fn verify_linear(seed: u64, samples: usize) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("linear");
    let mut r = rng(seed);
    let mut worst = [0.0f64; 6];
    for _ in 0..samples {
        let xi: [f64; 3] = std::array::from_fn(|_| r.gen_range(-5.0..5.0));
        let t = r.gen_range(0.0..20.0);
        let pt = tilde_p(xi);
        worst[0] = worst[0].max((pt * pt - pt).amax());
        let p: Vec<CMat4> = Branch::ALL.iter().map(|&b| eigenprojection(xi, b).0).collect();
        let mut sum = CMat4::zeros();
        for (a, pa) in p.iter().enumerate() {
            for (b, pb) in p.iter().enumerate() {
                let want = if a == b { *pa } else { CMat4::zeros() };
                worst[1] = worst[1].max(max_entry(&(pa * pb - want)));
            }
            sum += pa;
        }
        worst[2] = worst[2].max(max_entry(&(sum - pt.map(Complex64::from))));
        let a = a_matrix(xi);
        let w = omega(xi);
        worst[3] = worst[3].max((a * a * a + a * (w * w)).amax());
        worst[4] = worst[4].max(((a * -t).exp() - rodrigues(xi, t)).amax());
        // iA P_sigma = sigma omega P_sigma
        for (n, b) in Branch::ALL.iter().enumerate().skip(1) {
            let oracle = hermitian_projector(xi, b.sign() * w);
            worst[5] = worst[5].max(max_entry(&(p[n] - oracle)));
        }
    }
    let names = [
        "P~^2 = P~",
        "P_s P_t = delta P_s",
        "sum P_s = P~",
        "A^3 = -omega^2 A",
        "Rodrigues vs matrix exponential",
        "P_+- vs Hermitian eigendecomposition",
    ];
    for (name, w) in names.iter().zip(worst) {
        rep.push(Check::at_most(name, w, 1e-9).with_note(format!("{samples} random xi")));
    }

    let b = BoxSpec::cube(16, 16.0)?;
    let u0 = random_solenoidal(&b, seed, [3, 3, 3], 1.0);
    let mut div: f64 = 0.0;
    let mut semigroup: f64 = 0.0;
    let mut d3v3: f64 = 0.0;
    let mut energy: f64 = 0.0;
    let h = 1e-4;
    for t in [0.5, 2.0, 10.0] {
        let u = propagate_linear(&u0, t)?;
        div = div.max(u.divergence_defect());
        let split = propagate_linear(&propagate_linear(&u0, 0.4 * t)?, 0.6 * t)?;
        semigroup = semigroup.max(split.relative_difference(&u));

        let (p1, p2) = helmholtz_h(u.v(0), u.v(1));
        let c1 = u.v(0).sub(&p1);
        let c2 = u.v(1).sub(&p2);
        let mut div_h = c1.derivative([1, 0, 0]);
        div_h.add_assign(&c2.derivative([0, 1, 0]));
        let d3 = u.v(2).derivative([0, 0, 1]);
        let scale = d3.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        let gap = d3
            .coeffs()
            .iter()
            .zip(div_h.coeffs())
            .map(|(a, b)| (a + b).norm())
            .fold(0.0, f64::max);
        d3v3 = d3v3.max(gap / scale);

        let ep = propagate_linear(&u0, t + h)?.energy();
        let em = propagate_linear(&u0, t - h)?.energy();
        let rate = (ep - em) / (2.0 * h);
        let want = -2.0 * crate::nonlinear::horizontal_dissipation(&u);
        energy = energy.max((rate - want).abs() / want.abs());
    }
    rep.push(Check::at_most("divergence-free propagation", div, 1e-10));
    rep.push(Check::at_most("semigroup property", semigroup, 1e-10));
    rep.push(Check::at_most("d3 v3 = -div_h (v_h - P_h v_h)", d3v3, 1e-10));
    rep.push(Check::at_most("linear energy identity (finite differences)", energy, 1e-6));

    // horizontal heat kernel: t^{1/2} ||e^{t Delta_h} f||_2 <= (8 pi)^{-1/2} ||f||_{L^1_h L^2_v}
    let hb = BoxSpec::new([64, 64, 16], [64.0, 64.0, 16.0])?;
    let bump = gaussian_bump(&hb, [32.0, 32.0, 8.0], [1.5, 1.5, 1.5]);
    let mixed = anisotropic_mixed_norm(&bump, 1.0, 2.0, 0)?;
    let w = hb.wavenumbers();
    let mut ratio: f64 = 0.0;
    for t in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        let heat = bump.apply_symbol(|i, j, k| {
            let xi = w.xi(i, j, k);
            Complex64::from((-t * (xi[0] * xi[0] + xi[1] * xi[1])).exp())
        });
        let l2 = heat.plancherel_sq().sqrt();
        ratio = ratio.max(t.sqrt() * l2 * (8.0 * std::f64::consts::PI).sqrt() / mixed);
    }
    rep.push(Check::at_most("heat-kernel decay t^1/2 ||e^{t Lap_h} f||_2 / bound", ratio, 1.0));
    Ok(rep)
}

fn gaussian_bump(b: &BoxSpec, centre: [f64; 3], sigma: [f64; 3]) -> SpectralField {
    let [nx, ny, nz] = b.n();
    let mut values = vec![0.0; b.total()];
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                let x = [b.coordinate(0, i), b.coordinate(1, j), b.coordinate(2, k)];
                let r2: f64 = (0..3).map(|a| ((x[a] - centre[a]) / sigma[a]).powi(2)).sum();
                values[b.index(i, j, k)] = (-0.5 * r2).exp();
            }
        }
    }
    crate::grid::forward_transform(&values, *b).expect("finite samples")
}

pub fn verify_nonlinear(seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("nonlinear");
    let b = BoxSpec::cube(16, 2.0 * std::f64::consts::PI)?;
    let mut u0 = random_solenoidal(&b, seed, [3, 3, 3], 0.1);
    // nonzero means for the conservation check
    for c in 0..4 {
        u0.fields[c].coeffs_mut()[0] = Complex64::from(0.01 * (c + 1) as f64);
    }

    let cfg = SolverConfig {
        dt: 0.01,
        t_end: 1.0,
        snapshot_stride: 10,
        ..Default::default()
    };
    let opts = RunOptions {
        keep_snapshots: true,
        ledger: true,
        ..Default::default()
    };
    let tr = run_with(&u0, &cfg, &opts)?;
    rep.push(Check::at_most("energy identity (nonlinear)", tr.energy.identity_defect(), 1e-4));
    rep.push(Check::at_most(
        "energy non-increasing",
        tr.energy.max_increase() / tr.energy.energy[0],
        1e-14,
    ));
    let div = tr.snapshots.iter().map(|s| s.divergence_defect()).fold(0.0, f64::max);
    rep.push(Check::at_most("divergence-free snapshots", div, 1e-10));
    let drift = (0..4)
        .map(|c| (tr.last.fields[c].coeffs()[0] - u0.fields[c].coeffs()[0]).norm())
        .fold(0.0, f64::max);
    rep.push(Check::at_most("means conserved", drift, 1e-15));

    let ledger = tr.ledger.as_ref().expect("ledger requested");
    let fine = mild_residual(&u0, &tr.last, ledger)?;
    let coarse = mild_residual(&u0, &tr.last, &ledger.coarsened())?;
    rep.push(Check::at_most(
        "mild residual / ||u(1)||",
        fine.total / fine.solution_norm,
        1e-4,
    ));
    rep.push(Check::within("mild residual ratio under dt_quad doubling", coarse.total / fine.total, 3.0, 5.0));

    let lin = SolverConfig {
        nonlinear: false,
        ..cfg.clone()
    };
    let lin_run = run_with(&u0, &lin, &RunOptions::default())?;
    rep.push(Check::at_most("energy identity (linear)", lin_run.energy.identity_defect(), 1e-4));

    for scheme in [Scheme::IntegratingFactorRk4, Scheme::ExponentialRk4] {
        let one = SolverConfig {
            dt: 1e-3,
            t_end: 1e-3,
            scheme,
            nonlinear: false,
            ..Default::default()
        };
        let s = step(&u0, &one)?;
        let exact = propagate_linear(&u0, 1e-3)?;
        rep.push(Check::at_most(
            &format!("linear step vs propagator ({})", scheme.name()),
            s.relative_difference(&exact),
            1e-10,
        ));
    }

    // temporal order in the linear diagnostic mode
    let order_run = |dt: f64| -> Result<BoussinesqState> {
        let c = SolverConfig {
            dt,
            t_end: 2.0,
            snapshot_stride: 1000,
            scheme: Scheme::IntegratingFactorRk4,
            nonlinear: false,
            ..Default::default()
        };
        Ok(run_with(&u0, &c, &RunOptions::default())?.last)
    };
    let (a, bb, c) = (order_run(0.2)?, order_run(0.1)?, order_run(0.05)?);
    let d1 = a.relative_difference(&bb);
    let d2 = bb.relative_difference(&c);
    rep.push(Check::within("dt^4 convergence ratio", d1 / d2, 16.0 * 0.8, 16.0 * 1.2));
    Ok(rep)
}

pub fn verify_kernel(seed: u64) -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("kernel");
    for m in [-2, 0, 2] {
        let e = envelope::envelope_check(m, &envelope::default_time_grid(m, 8), None, 64)?;
        rep.push(
            Check::within(&format!("envelope slope m = {m}"), e.slope, envelope::SLOPE_BAND.0, envelope::SLOPE_BAND.1)
                .with_note(format!(
                    "scaled t in [{}, {}], fit residual {:.3}",
                    envelope::SCALED_RANGE.0,
                    envelope::SCALED_RANGE.1,
                    e.residual
                )),
        );
    }
    // C fitted on t in [5, 10], tested at t = 20
    let early = envelope::envelope_check(0, &[5.0, 6.25, 7.5, 8.75, 10.0, 20.0], None, 64)?;
    let (fit, last) = early.rows.split_at(5);
    let c = fit.iter().map(|r| r.max_abs * (1.0 + r.t).powf(1.5)).fold(0.0, f64::max);
    rep.push(
        Check::at_most("m = 0 envelope at t = 20", last[0].max_abs, c * 21f64.powf(-1.5))
            .with_note("bound C (1+t)^-3/2 with C fitted on t in [5, 10]"),
    );
    let mut dev: f64 = 0.0;
    let mut ranks = Vec::new();
    for m in -4..=4 {
        let samples = support_samples(500, seed.wrapping_add((m + 4) as u64));
        dev = dev.max(hessian::hessian_check(m, &samples)?);
        ranks.push(rank_check(m, &samples)?);
    }
    rep.push(Check::at_most("Hessian determinant vs finite differences", dev, 1e-5).with_note("m = -4..4"));
    for rk in ranks {
        rep.push(
            Check::at_least(&format!("Hessian smallest singular value m = {}", rk.m), rk.min_sigma, 1e-3)
                .with_note(format!("smallest sigma_min / sigma_max {:.3e}", rk.min_relative_sigma)),
        );
    }
    Ok(rep)
}
