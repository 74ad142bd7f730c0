use num_complex::Complex64;

use super::config::{Scheme, SolverConfig};
use super::flux::FluxEvaluator;
use crate::error::{Error, Result};
use crate::grid::{for_each_mode, BoussinesqState, BoxSpec, SpectralField};
use crate::linear::propagator::rodrigues_coefficients;
use crate::linear::symbols::{apply_a, omega};

type U = [Vec<Complex64>; 4];

fn zeros(n: usize) -> U {
    std::array::from_fn(|_| vec![Complex64::default(); n])
}

/// Exact linear factor over one time increment, per mode.
struct Factor {
    heat: Vec<f64>,
    /// Rodrigues coefficients; empty for the heat-only factor.
    rod: Vec<(f64, f64)>,
}

/// Fixed-step integrator for the full system on one box.
pub struct Stepper {
    cfg: SolverConfig,
    dt: f64,
    xi: Vec<[f64; 3]>,
    half: Factor,
    full: Factor,
    flux: Option<FluxEvaluator>,
}

impl Stepper {
    pub fn new(box_spec: BoxSpec, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let dt = cfg.effective_dt();
        let w = box_spec.wavenumbers();
        let mut xi = vec![[0.0; 3]; box_spec.total()];
        for_each_mode(&box_spec, |idx, i, j, k| xi[idx] = w.xi(i, j, k));
        let factor = |h: f64| {
            let heat = xi
                .iter()
                .map(|x| (-h * (x[0] * x[0] + x[1] * x[1])).exp())
                .collect();
            let rod = match cfg.scheme {
                Scheme::IntegratingFactorRk4 => Vec::new(),
                Scheme::ExponentialRk4 => xi.iter().map(|x| rodrigues_coefficients(omega(*x), h)).collect(),
            };
            Factor { heat, rod }
        };
        Ok(Self {
            cfg: cfg.clone(),
            dt,
            half: factor(0.5 * dt),
            full: factor(dt),
            flux: cfg
                .nonlinear
                .then(|| FluxEvaluator::new(box_spec, cfg.dealias)),
            xi,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    fn apply_factor(&self, f: &Factor, u: &U) -> U {
        let n = self.xi.len();
        let mut out = zeros(n);
        for idx in 0..n {
            let v = [u[0][idx], u[1][idx], u[2][idx], u[3][idx]];
            let mut r = v;
            if !f.rod.is_empty() {
                let (f1, f2) = f.rod[idx];
                let x = self.xi[idx];
                let av = apply_a(x, v);
                let aav = apply_a(x, av);
                for c in 0..4 {
                    r[c] = v[c] - av[c] * f1 + aav[c] * f2;
                }
            }
            for c in 0..4 {
                out[c][idx] = r[c] * f.heat[idx];
            }
        }
        out
    }

    /// `G(u)`: the part of the right-hand side not absorbed by the factor.
    fn rhs(&mut self, u: &U) -> U {
        let n = self.xi.len();
        let mut g = zeros(n);
        if let Some(fe) = self.flux.as_mut() {
            let nf = fe.total(std::array::from_fn(|c| u[c].as_slice()));
            for idx in 0..n {
                let x = self.xi[idx];
                let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
                let mut v = [nf[0][idx], nf[1][idx], nf[2][idx], nf[3][idx]];
                if r2 > 0.0 {
                    let d = (v[0] * x[0] + v[1] * x[1] + v[2] * x[2]) / r2;
                    for a in 0..3 {
                        v[a] -= d * x[a];
                    }
                }
                for c in 0..4 {
                    g[c][idx] = -v[c];
                }
            }
        }
        if self.cfg.scheme == Scheme::IntegratingFactorRk4 {
            for idx in 0..n {
                let v = [u[0][idx], u[1][idx], u[2][idx], u[3][idx]];
                let av = apply_a(self.xi[idx], v);
                for c in 0..4 {
                    g[c][idx] -= av[c];
                }
            }
        }
        g
    }

    /// Advances by one step of size [`Stepper::dt`].
    pub fn step(&mut self, state: &BoussinesqState) -> Result<BoussinesqState> {
        let b = *state.box_spec();
        if b.total() != self.xi.len() {
            return Err(Error::RejectedInput("state does not match the stepper box".into()));
        }
        let dt = self.dt;
        let u: U = std::array::from_fn(|c| state.fields[c].coeffs().to_vec());
        let comb = |a: &U, s: f64, b: &U| -> U {
            std::array::from_fn(|c| a[c].iter().zip(&b[c]).map(|(x, y)| x + y * s).collect())
        };
        let k1 = self.rhs(&u);
        let s2 = self.apply_factor(&self.half, &comb(&u, 0.5 * dt, &k1));
        let k2 = self.rhs(&s2);
        let eu_half = self.apply_factor(&self.half, &u);
        let s3 = comb(&eu_half, 0.5 * dt, &k2);
        let k3 = self.rhs(&s3);
        let eu = self.apply_factor(&self.full, &u);
        let ek3 = self.apply_factor(&self.half, &k3);
        let s4 = comb(&eu, dt, &ek3);
        let k4 = self.rhs(&s4);
        let ek1 = self.apply_factor(&self.full, &k1);
        let k23 = comb(&k2, 1.0, &k3);
        let ek23 = self.apply_factor(&self.half, &k23);
        let mut next = eu;
        for c in 0..4 {
            for idx in 0..next[c].len() {
                next[c][idx] += (ek1[c][idx] + ek23[c][idx] * 2.0 + k4[c][idx]) * (dt / 6.0);
            }
        }
        let fields: [SpectralField; 4] = std::array::from_fn(|c| {
            SpectralField::from_coeffs(b, std::mem::take(&mut next[c])).expect("shape fixed by box")
        });
        let mut out = BoussinesqState {
            fields,
            time: state.time + dt,
        };
        crate::linear::projectors::project_in_place(&mut out);
        if !out.is_finite() {
            return Err(Error::Blowup(format!(
                "non-finite coefficients after the step ending at t = {}",
                out.time
            )));
        }
        Ok(out)
    }
}

/// One step with a fresh stepper.
pub fn step(state: &BoussinesqState, cfg: &SolverConfig) -> Result<BoussinesqState> {
    Stepper::new(*state.box_spec(), cfg)?.step(state)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::grid::random_band_field;
    use crate::linear::{projectors::helmholtz3, propagate_linear};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Divergence-free random state with `L^2` norm `size`.
    pub(crate) fn random_state(b: BoxSpec, seed: u64, size: f64) -> BoussinesqState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fields = std::array::from_fn(|_| random_band_field(&b, &mut rng, [2, 2, 2]));
        let s = helmholtz3(&BoussinesqState::new(fields, 0.0).unwrap());
        let e = s.energy().sqrt();
        s.scaled(size / e)
    }

    fn cfg(dt: f64, nonlinear: bool, scheme: Scheme) -> SolverConfig {
        SolverConfig {
            dt,
            t_end: dt,
            scheme,
            nonlinear,
            ..Default::default()
        }
    }

    #[test]
    fn zero_state_stays_zero() {
        let b = BoxSpec::cube(8, 6.0).unwrap();
        let s = step(&BoussinesqState::zeros(b), &SolverConfig::default()).unwrap();
        assert_eq!(s.energy(), 0.0);
        assert!((s.time - 0.01).abs() < 1e-15);
    }

    #[test]
    fn linear_step_matches_propagator() {
        let b = BoxSpec::new([8, 8, 8], [6.0, 7.0, 5.0]).unwrap();
        let s0 = random_state(b, 3, 1.0);
        for scheme in [Scheme::IntegratingFactorRk4, Scheme::ExponentialRk4] {
            let s1 = step(&s0, &cfg(1e-3, false, scheme)).unwrap();
            let exact = propagate_linear(&s0, 1e-3).unwrap();
            assert!(s1.relative_difference(&exact) <= 1e-10, "{scheme:?}");
        }
    }

    #[test]
    fn small_data_energy_does_not_grow() {
        let b = BoxSpec::cube(16, 2.0 * std::f64::consts::PI).unwrap();
        let mut s = random_state(b, 5, 1e-3);
        let mut st = Stepper::new(b, &cfg(1e-2, true, Scheme::IntegratingFactorRk4)).unwrap();
        for _ in 0..20 {
            let e0 = s.energy();
            s = st.step(&s).unwrap();
            assert!(s.energy() <= e0 * (1.0 + 1e-12));
            assert!(s.divergence_defect() < 1e-10);
        }
    }

    #[test]
    fn means_are_conserved() {
        let b = BoxSpec::cube(8, 5.0).unwrap();
        let mut s = random_state(b, 9, 0.5);
        for c in 0..4 {
            s.fields[c].coeffs_mut()[0] = Complex64::new(0.1 * (c as f64 + 1.0), 0.0);
        }
        let out = step(&s, &cfg(0.05, true, Scheme::IntegratingFactorRk4)).unwrap();
        for c in 0..4 {
            assert_eq!(out.fields[c].coeffs()[0], s.fields[c].coeffs()[0]);
        }
    }

    #[test]
    fn non_finite_input_reports_blowup() {
        let b = BoxSpec::cube(8, 5.0).unwrap();
        let mut s = random_state(b, 1, 1.0);
        s.fields[0].coeffs_mut()[9] = Complex64::new(f64::INFINITY, 0.0);
        assert!(matches!(step(&s, &SolverConfig::default()), Err(Error::Blowup(_))));
    }
}
