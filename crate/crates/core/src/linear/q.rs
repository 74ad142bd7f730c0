//! Multipliers `Q_+-` splitting the linear solution into dispersive branches.
//!
//! Each `Q` is read off the rows of the eigenprojection of the same branch:
//! rows 1-2 give `Q^{vel,h}`, row 3 `Q^{vel,v}`, row 4 `Q^{temp}`. Because
//! `P_+- P~ = P_+-`, the rows may be applied to fields that are not
//! divergence-free.

use num_complex::Complex64;

use super::eigen::{eigenprojection, Branch};
use super::symbols::{horizontal_norm, norm};
use crate::grid::{for_each_mode, BoussinesqState, SpectralField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QFamily {
    VelH,
    VelV,
    Temp,
    VelVTilde,
}

impl QFamily {
    pub fn outputs(self) -> usize {
        match self {
            QFamily::VelH => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QTag {
    pub family: QFamily,
    pub branch: Branch,
}

impl QTag {
    pub fn new(family: QFamily, branch: Branch) -> Self {
        assert!(branch != Branch::Zero, "Q multipliers exist for the +- branches only");
        Self { family, branch }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let (name, sign) = s.split_at(s.len().checked_sub(1)?);
        let branch = match sign {
            "+" => Branch::Plus,
            "-" => Branch::Minus,
            _ => return None,
        };
        let family = match name {
            "vel_h" => QFamily::VelH,
            "vel_v" => QFamily::VelV,
            "temp" => QFamily::Temp,
            "vel_v_tilde" => QFamily::VelVTilde,
            _ => return None,
        };
        Some(Self { family, branch })
    }
}

/// Symbol rows of a tag at one wavenumber (one row per output component).
pub fn q_rows(tag: QTag, xi: [f64; 3]) -> Vec<[Complex64; 4]> {
    let (p, degenerate) = eigenprojection(xi, tag.branch);
    if degenerate {
        return vec![[Complex64::default(); 4]; tag.family.outputs()];
    }
    let row = |r: usize| [p[(r, 0)], p[(r, 1)], p[(r, 2)], p[(r, 3)]];
    match tag.family {
        QFamily::VelH => vec![row(0), row(1)],
        QFamily::VelV => vec![row(2)],
        QFamily::Temp => vec![row(3)],
        QFamily::VelVTilde => vec![vel_v_tilde_row(xi, tag.branch)],
    }
}

/// `Q~^{vel,v}` in closed form:
/// `[-i xi3^2 (xi_h . v_h) / |xi_h| + i xi3 |xi_h| v3 +- xi3 |xi| theta] / (2|xi|^2)`.
pub fn vel_v_tilde_row(xi: [f64; 3], branch: Branch) -> [Complex64; 4] {
    let s = horizontal_norm(xi);
    let r = norm(xi);
    if s == 0.0 || r == 0.0 {
        return [Complex64::default(); 4];
    }
    let d = 2.0 * r * r;
    let z = xi[2];
    let i = Complex64::i();
    [
        -i * (z * z * xi[0] / s / d),
        -i * (z * z * xi[1] / s / d),
        i * (z * s / d),
        Complex64::new(branch.sign() * z * r / d, 0.0),
    ]
}

#[inline]
pub(crate) fn dot_row(row: &[Complex64; 4], u: &[Complex64; 4]) -> Complex64 {
    row[0] * u[0] + row[1] * u[1] + row[2] * u[2] + row[3] * u[3]
}

/// Applies a tagged multiplier to a state.
pub fn q_multiplier(tag: QTag, state0: &BoussinesqState) -> Vec<SpectralField> {
    let b = *state0.box_spec();
    let w = b.wavenumbers();
    let mut out = vec![SpectralField::zeros(b); tag.family.outputs()];
    for_each_mode(&b, |idx, i, j, k| {
        let u = state0.mode(idx);
        for (o, row) in q_rows(tag, w.xi(i, j, k)).iter().enumerate() {
            out[o].coeffs_mut()[idx] = dot_row(row, &u);
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tilde_factorization_per_mode() {
        let u = [
            Complex64::new(0.3, -0.1),
            Complex64::new(-0.7, 0.2),
            Complex64::new(0.05, 0.4),
            Complex64::new(1.0, -0.5),
        ];
        for xi in [[1.0, 2.0, -0.5], [0.1, -0.2, 3.0], [-2.0, 0.5, 0.5]] {
            for br in [Branch::Plus, Branch::Minus] {
                let qv = dot_row(&q_rows(QTag::new(QFamily::VelV, br), xi)[0], &u);
                let qt = dot_row(&vel_v_tilde_row(xi, br), &u);
                let lhs = Complex64::i() * xi[2] * qv;
                let rhs = horizontal_norm(xi) * qt;
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn tag_parsing() {
        assert_eq!(
            QTag::parse("vel_v_tilde-"),
            Some(QTag::new(QFamily::VelVTilde, Branch::Minus))
        );
        assert_eq!(QTag::parse("temp+"), Some(QTag::new(QFamily::Temp, Branch::Plus)));
        assert_eq!(QTag::parse("temp"), None);
    }
}
