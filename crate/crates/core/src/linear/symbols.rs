//! Per-wavenumber symbols of the linear operator `A = P~ J P~`.

use nalgebra::Matrix4;
use num_complex::Complex64;

pub type Mat4 = Matrix4<f64>;
pub type CMat4 = Matrix4<Complex64>;

#[inline]
pub fn horizontal_norm(xi: [f64; 3]) -> f64 {
    xi[0].hypot(xi[1])
}

#[inline]
pub fn norm(xi: [f64; 3]) -> f64 {
    (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]).sqrt()
}

/// Dispersion phase `|xi_h| / |xi|`, 0 at the origin.
#[inline]
pub fn omega(xi: [f64; 3]) -> f64 {
    let r = norm(xi);
    if r == 0.0 {
        0.0
    } else {
        horizontal_norm(xi) / r
    }
}

/// Block-diagonal Leray projector `diag(I - xi xi^T / |xi|^2, 1)`; the
/// identity at `xi = 0`.
pub fn tilde_p(xi: [f64; 3]) -> Mat4 {
    let mut m = Mat4::identity();
    let r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    if r2 > 0.0 {
        for a in 0..3 {
            for b in 0..3 {
                m[(a, b)] -= xi[a] * xi[b] / r2;
            }
        }
    }
    m
}

/// Stratification coupling: `(J u)_3 = -theta`, `(J u)_4 = v_3`.
pub fn j_matrix() -> Mat4 {
    let mut m = Mat4::zeros();
    m[(2, 3)] = -1.0;
    m[(3, 2)] = 1.0;
    m
}

/// `P~ J P~` assembled by matrix products; zero at `xi = 0`.
pub fn a_matrix(xi: [f64; 3]) -> Mat4 {
    if norm(xi) == 0.0 {
        return Mat4::zeros();
    }
    let p = tilde_p(xi);
    p * j_matrix() * p
}

/// `A u` in closed form: velocity part `theta w / |xi|^2` with
/// `w = (xi1 xi3, xi2 xi3, -|xi_h|^2)`, temperature part `(P v)_3`.
#[inline]
pub fn apply_a(xi: [f64; 3], u: [Complex64; 4]) -> [Complex64; 4] {
    let r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    if r2 == 0.0 {
        return [Complex64::default(); 4];
    }
    let th = u[3] / r2;
    let s2 = xi[0] * xi[0] + xi[1] * xi[1];
    let div = u[0] * xi[0] + u[1] * xi[1] + u[2] * xi[2];
    [
        th * (xi[0] * xi[2]),
        th * (xi[1] * xi[2]),
        th * (-s2),
        u[2] - div * (xi[2] / r2),
    ]
}

/// Identifies one of the 4x4 symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymbolKind {
    TildeP,
    J,
    A,
    Eigen(super::eigen::Branch),
}

#[derive(Clone, Copy, Debug)]
pub struct SymbolMatrix {
    pub kind: SymbolKind,
}

impl SymbolMatrix {
    pub fn new(kind: SymbolKind) -> Self {
        Self { kind }
    }

    pub fn eval(&self, xi: [f64; 3]) -> CMat4 {
        let real = |m: Mat4| m.map(|x| Complex64::new(x, 0.0));
        match self.kind {
            SymbolKind::TildeP => real(tilde_p(xi)),
            SymbolKind::J => real(j_matrix()),
            SymbolKind::A => real(a_matrix(xi)),
            SymbolKind::Eigen(b) => super::eigen::eigenprojection(xi, b).0,
        }
    }
}

/// Largest entry modulus.
pub fn max_entry(m: &CMat4) -> f64 {
    m.iter().fold(0.0, |a, c| a.max(c.norm()))
}


#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_xi() -> impl Strategy<Value = [f64; 3]> {
        prop::array::uniform3(-5.0f64..5.0).prop_filter("nonzero", |x| norm(*x) > 1e-3)
    }

    proptest! {
        #[test]
        fn tilde_p_is_orthogonal_projection(xi in arb_xi()) {
            let p = tilde_p(xi);
            prop_assert!((p * p - p).amax() < 1e-12);
            prop_assert!((p.transpose() - p).amax() < 1e-15);
            prop_assert!((p * vec4(xi)).amax() < 1e-12);
        }

        #[test]
        fn a_cubed_is_minus_omega_squared_a(xi in arb_xi()) {
            let a = a_matrix(xi);
            let w = omega(xi);
            prop_assert!((a * a * a + a * (w * w)).amax() < 1e-10);
            prop_assert!((a + a.transpose()).amax() < 1e-12);
        }

        #[test]
        fn closed_form_matches_matrix_product(xi in arb_xi(), u in prop::array::uniform4(-1.0f64..1.0)) {
            let a = a_matrix(xi);
            let cu = u.map(|x| Complex64::new(x, 0.0));
            let got = apply_a(xi, cu);
            let uv = nalgebra::Vector4::from(u);
            let want = a * uv;
            for i in 0..4 {
                prop_assert!((got[i].re - want[i]).abs() < 1e-12);
            }
        }
    }

    fn vec4(xi: [f64; 3]) -> nalgebra::Vector4<f64> {
        nalgebra::Vector4::new(xi[0], xi[1], xi[2], 0.0)
    }

    #[test]
    fn j_entries() {
        let j = j_matrix();
        assert_eq!(j[(2, 3)], -1.0);
        assert_eq!(j[(3, 2)], 1.0);
        assert_eq!(j.abs().sum(), 2.0);
    }
}
