//! Eigenprojections of `A(xi)`.
//!
//! `A` has eigenvalues `0` and `-+ i omega` on the divergence-free subspace.
//! `Plus` is the projection with `e^{-tA} P_+ = e^{+i omega t} P_+` and
//! `Minus` its conjugate; `Zero` is the horizontal Helmholtz projection in the
//! velocity block.
//!
//! With `w = (xi1 xi3, xi2 xi3, -|xi_h|^2)`, `|w| = |xi_h||xi|`:
//! `P_+- = 1/2 [[w w^T / |w|^2, +- i w / |w|], [-+ i w^T / |w|, 1]]`.

use num_complex::Complex64;

use super::symbols::{horizontal_norm, norm, CMat4};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Zero,
    Plus,
    Minus,
}

impl Branch {
    pub const ALL: [Branch; 3] = [Branch::Zero, Branch::Plus, Branch::Minus];

    /// `sigma` in the phase `e^{sigma i t omega}`.
    pub fn sign(self) -> f64 {
        match self {
            Branch::Zero => 0.0,
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

/// Returns the projection and `true` when `xi = 0` or `xi_h = 0`, where the
/// zero matrix is returned.
pub fn eigenprojection(xi: [f64; 3], branch: Branch) -> (CMat4, bool) {
    let s = horizontal_norm(xi);
    let r = norm(xi);
    if s == 0.0 || r == 0.0 {
        return (CMat4::zeros(), true);
    }
    let mut m = CMat4::zeros();
    match branch {
        Branch::Zero => {
            let e = [-xi[1] / s, xi[0] / s];
            for a in 0..2 {
                for b in 0..2 {
                    m[(a, b)] = Complex64::new(e[a] * e[b], 0.0);
                }
            }
        }
        Branch::Plus | Branch::Minus => {
            let sg = branch.sign();
            let wn = s * r;
            let e = [xi[0] * xi[2] / wn, xi[1] * xi[2] / wn, -s / r];
            for a in 0..3 {
                for b in 0..3 {
                    m[(a, b)] = Complex64::new(0.5 * e[a] * e[b], 0.0);
                }
                m[(a, 3)] = Complex64::new(0.0, 0.5 * sg * e[a]);
                m[(3, a)] = Complex64::new(0.0, -0.5 * sg * e[a]);
            }
            m[(3, 3)] = Complex64::new(0.5, 0.0);
        }
    }
    (m, false)
}
