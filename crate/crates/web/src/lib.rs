//! wasm-bindgen exports for the static page in `www/`.

use num_complex::Complex64;
use wasm_bindgen::prelude::*;

use aniso_core::kernel_lab::hessian::hessian_det_formula;
use aniso_core::kernel_lab::quadrature::SUPPORT;
use aniso_core::linear::propagator::propagate_mode;
use aniso_core::linear::symbols::{horizontal_norm, omega, tilde_p};
use aniso_core::lp_besov::profile::phi;

/// `[omega, |xi_h|^2]` for one wavevector.
#[wasm_bindgen]
pub fn mode_info(xi1: f64, xi2: f64, xi3: f64) -> Vec<f64> {
    let xi = [xi1, xi2, xi3];
    vec![omega(xi), horizontal_norm(xi).powi(2)]
}

/// Linear evolution of one Fourier mode with fixed divergence-free data.
/// Rows of `[t, v1, v2, v3, theta, |u|]` (real parts), `n + 1` rows.
#[wasm_bindgen]
pub fn mode_history(xi1: f64, xi2: f64, xi3: f64, t_max: f64, n: usize) -> Vec<f64> {
    let xi = [xi1, xi2, xi3];
    let p = tilde_p(xi);
    let raw = [0.6, -0.3, 0.8, 1.0];
    let u0: [Complex64; 4] = std::array::from_fn(|a| Complex64::from((0..4).map(|b| p[(a, b)] * raw[b]).sum::<f64>()));
    let n = n.max(1);
    let mut out = Vec::with_capacity(6 * (n + 1));
    for s in 0..=n {
        let t = t_max * s as f64 / n as f64;
        let u = propagate_mode(xi, t, u0);
        out.push(t);
        out.extend(u.iter().map(|c| c.re));
        out.push(u.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt());
    }
    out
}

/// Dyadic profiles `phi(2^-j r)` for `j = j_lo..=j_hi` and their sum, on a
/// log grid in `r`. Rows of `[r, phi_jlo, ..., phi_jhi, sum]`.
#[wasm_bindgen]
pub fn lp_profile(j_lo: i32, j_hi: i32, n: usize) -> Vec<f64> {
    let (lo, hi) = (2f64.powi(j_lo - 1).ln(), 2f64.powi(j_hi + 1).ln());
    let n = n.max(2);
    let mut out = Vec::new();
    for s in 0..n {
        let r = (lo + (hi - lo) * s as f64 / (n - 1) as f64).exp();
        out.push(r);
        let mut sum = 0.0;
        for j in j_lo..=j_hi {
            let v = phi(r * 2f64.powi(-j));
            sum += v;
            out.push(v);
        }
        out.push(sum);
    }
    out
}

/// `log10 |det grad^2 p_m|` on an `n x n` log grid of `(|xi_h|, xi_3)` over
/// the kernel support, row-major with `xi_3` increasing down the rows.
#[wasm_bindgen]
pub fn hessian_slice(m: i32, n: usize) -> Vec<f64> {
    let (lo, hi) = (SUPPORT.0.ln(), SUPPORT.1.ln());
    let n = n.max(2);
    let at = |s: usize| (lo + (hi - lo) * s as f64 / (n - 1) as f64).exp();
    let mut out = Vec::with_capacity(n * n);
    for row in 0..n {
        for col in 0..n {
            out.push(hessian_det_formula(m, [at(col), 0.0, at(row)]).abs().log10());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_history_decays_and_starts_solenoidal() {
        let h = mode_history(1.0, 0.5, 2.0, 5.0, 10);
        assert_eq!(h.len(), 66);
        let div = h[1] + 0.5 * h[2] + 2.0 * h[3];
        assert!(div.abs() < 1e-14);
        assert!(h[65] < h[5] * (-5.0 * 1.25f64).exp() * 1.000_001);
    }

    #[test]
    fn profile_sums_to_one_inside_the_covered_range() {
        let rows = lp_profile(-2, 3, 200);
        for r in rows.chunks(8) {
            if r[0] >= 0.5 && r[0] <= 8.0 {
                assert!((r[7] - 1.0).abs() < 1e-12, "r = {}: {}", r[0], r[7]);
            }
        }
    }

    #[test]
    fn hessian_slice_is_finite() {
        let s = hessian_slice(0, 16);
        assert_eq!(s.len(), 256);
        assert!(s.iter().all(|v| v.is_finite()));
        assert_eq!(mode_info(3.0, 4.0, 0.0), vec![1.0, 25.0]);
    }
}
