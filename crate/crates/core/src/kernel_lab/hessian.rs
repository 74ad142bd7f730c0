//! Hessian of the phase `p_m` in Cartesian frequency coordinates.

use nalgebra::Matrix3;

use super::quadrature::{psi, SUPPORT};
use crate::error::{Error, Result};

pub const FD_STEP: f64 = 1e-4;

/// `det grad^2 p_m = -2^{6m} xi_3^4 / ((|xi_h|^2 + 2^{2m} xi_3^2)^{9/2} |xi_h|)`.
pub fn hessian_det_formula(m: i32, xi: [f64; 3]) -> f64 {
    let s2 = xi[0] * xi[0] + xi[1] * xi[1];
    let e = 4f64.powi(m);
    let d = s2 + e * xi[2] * xi[2];
    -e * e * e * xi[2].powi(4) / (d.powf(4.5) * s2.sqrt())
}

/// `p_m` and `delta = 1 - p_m` without cancellation.
fn phase_parts(m: i32, xi: [f64; 3]) -> (f64, f64) {
    let r = xi[0].hypot(xi[1]);
    let ez = 4f64.powi(m) * xi[2] * xi[2];
    let sd = (r * r + ez).sqrt();
    (r / sd, ez / ((sd + r) * sd))
}

/// Central-difference Hessian. The finite differences act on whichever of
/// `p_m` and `1 - p_m` is smaller at `xi`, so rounding in the differenced
/// function scales with the curvature being measured.
pub fn fd_hessian(m: i32, xi: [f64; 3], h: f64) -> Matrix3<f64> {
    let use_delta = phase_parts(m, xi).0 > 0.5;
    let f = |x: [f64; 3]| {
        let (p, d) = phase_parts(m, x);
        if use_delta {
            -d
        } else {
            p
        }
    };
    let shift = |a: usize, da: f64, b: usize, db: f64| {
        let mut y = xi;
        y[a] += da;
        y[b] += db;
        f(y)
    };
    let mut hm = Matrix3::zeros();
    let f0 = f(xi);
    for a in 0..3 {
        hm[(a, a)] = (shift(a, h, a, 0.0) - 2.0 * f0 + shift(a, -h, a, 0.0)) / (h * h);
        for b in a + 1..3 {
            let v = (shift(a, h, b, h) - shift(a, h, b, -h) - shift(a, -h, b, h) + shift(a, -h, b, -h))
                / (4.0 * h * h);
            hm[(a, b)] = v;
            hm[(b, a)] = v;
        }
    }
    hm
}

fn in_support(xi: [f64; 3]) -> bool {
    let r = xi[0].hypot(xi[1]);
    let z = xi[2].abs();
    let inside = |v: f64| v > SUPPORT.0 && v < SUPPORT.1;
    inside(r) && inside(z) && psi(r, z) > 0.0
}

/// Largest relative deviation of the finite-difference determinant from the
/// closed form over the sample points.
pub fn hessian_check(m: i32, samples: &[[f64; 3]]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &xi in samples {
        if !in_support(xi) {
            return Err(Error::RejectedInput(format!("sample {xi:?} lies outside supp psi")));
        }
        let fd = fd_hessian(m, xi, FD_STEP).determinant();
        let exact = hessian_det_formula(m, xi);
        worst = worst.max((fd - exact).abs() / exact.abs());
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankReport {
    pub m: i32,
    /// Smallest `sigma_min` over the samples.
    pub min_sigma: f64,
    /// Smallest `sigma_min / sigma_max` over the samples.
    pub min_relative_sigma: f64,
}

/// Singular values of the finite-difference Hessian at the samples.
pub fn rank_check(m: i32, samples: &[[f64; 3]]) -> Result<RankReport> {
    let mut min_sigma = f64::INFINITY;
    let mut min_rel = f64::INFINITY;
    for &xi in samples {
        if !in_support(xi) {
            return Err(Error::RejectedInput(format!("sample {xi:?} lies outside supp psi")));
        }
        let sv = fd_hessian(m, xi, FD_STEP).singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        min_sigma = min_sigma.min(lo);
        min_rel = min_rel.min(lo / hi);
    }
    Ok(RankReport {
        m,
        min_sigma,
        min_relative_sigma: min_rel,
    })
}

/// Uniform random points of `supp psi` (rejection sampling in the annular
/// cylinder), reproducible from the seed.
pub fn support_samples(count: usize, seed: u64) -> Vec<[f64; 3]> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let xi = [
            rng.gen_range(-SUPPORT.1..SUPPORT.1),
            rng.gen_range(-SUPPORT.1..SUPPORT.1),
            rng.gen_range(-SUPPORT.1..SUPPORT.1),
        ];
        if in_support(xi) {
            out.push(xi);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_example_value() {
        let d = hessian_det_formula(0, [1.0, 0.0, 1.0]);
        assert!((d + 2f64.powf(-4.5)).abs() < 1e-15);
        let fd = fd_hessian(0, [1.0, 0.0, 1.0], FD_STEP).determinant();
        assert!((fd - d).abs() < 1e-5 * d.abs());
    }

    #[test]
    fn determinant_is_even_and_vanishes_like_xi3_to_the_fourth() {
        for m in [-2, 0, 3] {
            let a = hessian_det_formula(m, [0.6, 0.8, 0.4]);
            assert_eq!(a, hessian_det_formula(m, [0.6, 0.8, -0.4]));
        }
        let r1 = hessian_det_formula(0, [1.0, 0.0, 1e-2]) / hessian_det_formula(0, [1.0, 0.0, 2e-2]);
        assert!((r1 - 1.0 / 16.0).abs() < 1e-3);
    }

    #[test]
    fn finite_differences_match_formula_on_support() {
        for m in -4..=4 {
            let dev = hessian_check(m, &support_samples(100, (m + 10) as u64)).unwrap();
            assert!(dev <= 1e-5, "m = {m}: {dev}");
        }
    }

    #[test]
    fn rejects_points_outside_support() {
        assert!(hessian_check(0, &[[0.1, 0.0, 1.0]]).is_err());
    }
}
