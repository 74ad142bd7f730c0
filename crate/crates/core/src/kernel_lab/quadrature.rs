//! Direct quadrature of `J_m(t, x) = int e^{i x.xi} e^{i t p_m(xi)} psi(xi) dxi`.
//!
//! `psi` and `p_m` depend on `|xi_h|` and `|xi_3|` only, so the angular
//! integral gives `2 pi J_0(|x_h| rho)` and the even `xi_3` integral gives
//! `2 cos(x_3 zeta)`:
//! `J = 4 pi int int J_0(|x_h| rho) cos(x_3 zeta) e^{i t p_m} psi rho drho dzeta`
//! over `[1/4, 4]^2`. The integrand vanishes to all orders at the ends, so the
//! trapezoid rule is spectrally accurate, and its even nodes form the
//! half-resolution rule used for the refinement estimate.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lp_besov::profile::phi_tilde;

pub const SUPPORT: (f64, f64) = (0.25, 4.0);
pub const MIN_RESOLUTION: usize = 32;
/// Refinement estimate above this fraction of the value is unresolved.
pub const REFINEMENT_TOLERANCE: f64 = 0.05;
/// Values below this fraction of `int psi` are treated as zero by the
/// refinement check.
pub const ABSOLUTE_FLOOR: f64 = 1e-7;

/// `p_m(xi) = |xi_h| / sqrt(|xi_h|^2 + 2^{2m} xi_3^2)`.
pub fn phase(m: i32, rho: f64, zeta: f64) -> f64 {
    rho / (rho * rho + 4f64.powi(m) * zeta * zeta).sqrt()
}

/// `psi(xi) = phi~(|xi_h|) phi~(|xi_3|)`.
pub fn psi(rho: f64, zeta: f64) -> f64 {
    phi_tilde(rho) * phi_tilde(zeta.abs())
}

/// Largest `|t|` resolved at the given resolution.
pub fn t_max(resolution: usize) -> f64 {
    resolution as f64 / 8.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSpec {
    pub m: i32,
    pub t: f64,
    pub x: [f64; 3],
    /// Trapezoid intervals per axis.
    pub resolution: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    /// `|J_N - J_{N/2}|`.
    pub error: f64,
}

/// `e^{i t p_m} psi rho` on the trapezoid nodes for one `(m, t)`, reused
/// across many `x`.
pub struct KernelEvaluator {
    m: i32,
    t: f64,
    nodes: Vec<f64>,
    h: f64,
    /// Row-major `[rho][zeta]`.
    weights: Vec<Complex64>,
    mass: f64,
}

impl KernelEvaluator {
    pub fn new(m: i32, t: f64, resolution: usize) -> Result<Self> {
        if resolution < MIN_RESOLUTION || resolution % 2 != 0 {
            return Err(Error::RejectedInput(format!(
                "resolution {resolution} must be even and >= {MIN_RESOLUTION}"
            )));
        }
        if !(t.abs() <= t_max(resolution)) {
            return Err(Error::RejectedInput(format!(
                "|t| = {} exceeds the resolvable t_max = {} at resolution {resolution}",
                t.abs(),
                t_max(resolution)
            )));
        }
        let (a, b) = SUPPORT;
        let h = (b - a) / resolution as f64;
        let nodes: Vec<f64> = (1..resolution).map(|i| a + i as f64 * h).collect();
        let n = nodes.len();
        let mut weights = vec![Complex64::default(); n * n];
        let mut mass = 0.0;
        for (i, &rho) in nodes.iter().enumerate() {
            let pr = phi_tilde(rho) * rho;
            for (k, &zeta) in nodes.iter().enumerate() {
                let w = pr * phi_tilde(zeta);
                mass += w;
                weights[i * n + k] = Complex64::from_polar(w, t * phase(m, rho, zeta));
            }
        }
        Ok(Self {
            m,
            t,
            nodes,
            h,
            weights,
            mass: 4.0 * PI * mass * h * h,
        })
    }

    pub fn m(&self) -> i32 {
        self.m
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// `int psi`, by the same quadrature.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `J_m(t, x)` with the refinement estimate; no tolerance check.
    pub fn eval_raw(&self, x: [f64; 3]) -> KernelValue {
        let r = x[0].hypot(x[1]);
        let n = self.nodes.len();
        let cz: Vec<f64> = self.nodes.iter().map(|&z| (x[2] * z).cos()).collect();
        let mut fine = Complex64::default();
        let mut coarse = Complex64::default();
        for (i, &rho) in self.nodes.iter().enumerate() {
            let row = &self.weights[i * n..(i + 1) * n];
            let mut all = Complex64::default();
            let mut even = Complex64::default();
            // node index i corresponds to interval point i + 1
            for (k, (w, c)) in row.iter().zip(&cz).enumerate() {
                let v = w * c;
                all += v;
                if k % 2 == 1 {
                    even += v;
                }
            }
            let j0 = libm::j0(r * rho);
            fine += all * j0;
            if i % 2 == 1 {
                coarse += even * j0;
            }
        }
        let s = 4.0 * PI * self.h * self.h;
        let fine = fine * s;
        let coarse = coarse * 4.0 * s;
        KernelValue {
            value: fine,
            error: (fine - coarse).norm(),
        }
    }

    /// As [`KernelEvaluator::eval_raw`], failing when the refinement estimate
    /// exceeds 5% of the value.
    pub fn eval(&self, x: [f64; 3]) -> Result<KernelValue> {
        let v = self.eval_raw(x);
        let scale = v.value.norm().max(ABSOLUTE_FLOOR * self.mass);
        if v.error > REFINEMENT_TOLERANCE * scale {
            return Err(Error::Resolution(format!(
                "m = {}, t = {}, x = {:?}: refinement change {:.3e} vs value {:.3e}",
                self.m,
                self.t,
                x,
                v.error,
                v.value.norm()
            )));
        }
        Ok(v)
    }
}

pub fn eval_kernel(spec: &KernelSpec) -> Result<KernelValue> {
    KernelEvaluator::new(spec.m, spec.t, spec.resolution)?.eval(spec.x)
}
