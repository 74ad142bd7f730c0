use num_complex::Complex64;

use super::symbols::{apply_a, horizontal_norm, omega, Mat4};
use crate::error::{Error, Result};
use crate::grid::{for_each_mode, BoussinesqState};

/// Coefficients `(f1, f2)` of `R = I - f1 A + f2 A^2 = e^{-tA}`:
/// `f1 = sin(omega t) / omega`, `f2 = (1 - cos(omega t)) / omega^2`, written
/// without cancellation and with their `omega -> 0` limits.
#[inline]
pub fn rodrigues_coefficients(w: f64, t: f64) -> (f64, f64) {
    if w == 0.0 {
        (t, 0.5 * t * t)
    } else {
        let h = (0.5 * w * t).sin() / w;
        ((w * t).sin() / w, 2.0 * h * h)
    }
}

/// `R(t, xi)` as a matrix.
pub fn rodrigues(xi: [f64; 3], t: f64) -> Mat4 {
    let a = super::symbols::a_matrix(xi);
    let (f1, f2) = rodrigues_coefficients(omega(xi), t);
    Mat4::identity() - a * f1 + a * a * f2
}

/// `e^{-t|xi_h|^2} R(t, xi) u` for one mode.
#[inline]
pub fn propagate_mode(xi: [f64; 3], t: f64, u: [Complex64; 4]) -> [Complex64; 4] {
    let s = horizontal_norm(xi);
    let heat = (-t * s * s).exp();
    let (f1, f2) = rodrigues_coefficients(omega(xi), t);
    let au = apply_a(xi, u);
    let aau = apply_a(xi, au);
    let mut out = [Complex64::default(); 4];
    for c in 0..4 {
        out[c] = (u[c] - au[c] * f1 + aau[c] * f2) * heat;
    }
    out
}

/// Exact solution of the linearized system at time `state0.time + t`.
pub fn propagate_linear(state0: &BoussinesqState, t: f64) -> Result<BoussinesqState> {
    if !(t >= 0.0) {
        return Err(Error::RejectedInput(format!("negative propagation time {t}")));
    }
    let b = *state0.box_spec();
    let w = b.wavenumbers();
    let mut out = state0.clone();
    for_each_mode(&b, |idx, i, j, k| {
        let u = state0.mode(idx);
        out.set_mode(idx, propagate_mode(w.xi(i, j, k), t, u));
    });
    out.time = state0.time + t;
    Ok(out)
}
