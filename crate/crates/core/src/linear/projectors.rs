use num_complex::Complex64;

use crate::grid::{for_each_mode, BoussinesqState, SpectralField};

/// Leray projection of the velocity, `(I - xi xi^T / |xi|^2) v`; `theta` and
/// the `xi = 0` mode are left untouched.
pub fn helmholtz3(state: &BoussinesqState) -> BoussinesqState {
    let mut out = state.clone();
    project_in_place(&mut out);
    out
}

pub(crate) fn project_in_place(state: &mut BoussinesqState) {
    let b = *state.box_spec();
    let w = b.wavenumbers();
    for_each_mode(&b, |idx, i, j, k| {
        let xi = w.xi(i, j, k);
        let r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if r2 == 0.0 {
            return;
        }
        let u = state.mode(idx);
        let d = (u[0] * xi[0] + u[1] * xi[1] + u[2] * xi[2]) / r2;
        state.set_mode(idx, [u[0] - d * xi[0], u[1] - d * xi[1], u[2] - d * xi[2], u[3]]);
    });
}

/// Horizontal Helmholtz projection `I_2 - xi_h xi_h^T / |xi_h|^2`, zero on
/// the `xi_h = 0` line.
pub fn helmholtz_h(v1: &SpectralField, v2: &SpectralField) -> (SpectralField, SpectralField) {
    let b = *v1.box_spec();
    let w = b.wavenumbers();
    let mut o1 = v1.clone();
    let mut o2 = v2.clone();
    let (c1, c2) = (o1.coeffs_mut(), o2.coeffs_mut());
    for_each_mode(&b, |idx, i, j, k| {
        let xi = w.xi(i, j, k);
        let s2 = xi[0] * xi[0] + xi[1] * xi[1];
        if s2 == 0.0 {
            c1[idx] = Complex64::default();
            c2[idx] = Complex64::default();
            return;
        }
        let d = (c1[idx] * xi[0] + c2[idx] * xi[1]) / s2;
        c1[idx] -= d * xi[0];
        c2[idx] -= d * xi[1];
    });
    (o1, o2)
}
