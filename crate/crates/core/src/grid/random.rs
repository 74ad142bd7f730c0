use num_complex::Complex64;
use rand::Rng;

use super::{for_each_mode, BoxSpec, SpectralField};
use crate::error::{Error, Result};

/// Real random field with uniform complex coefficients on integer wavenumber
/// indices `|m_a| <= band[a]`, excluding the `xi_h = 0` and `xi_3 = 0` planes.
pub fn random_band_field<R: Rng>(b: &BoxSpec, rng: &mut R, band: [usize; 3]) -> SpectralField {
    let n = b.n();
    let mut f = SpectralField::zeros(*b);
    for_each_mode(b, |idx, i, j, k| {
        let m = [
            BoxSpec::wrap(i, n[0]),
            BoxSpec::wrap(j, n[1]),
            BoxSpec::wrap(k, n[2]),
        ];
        let inside = (0..3).all(|a| m[a].unsigned_abs() as usize <= band[a] && !b.is_nyquist(a, [i, j, k][a]));
        if !inside || (m[0] == 0 && m[1] == 0) || m[2] == 0 {
            return;
        }
        let mirror = b.mirror_index(i, j, k);
        if idx < mirror {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            f.coeffs[idx] = c;
            f.coeffs[mirror] = c.conj();
        }
    });
    f
}

impl SpectralField {
    /// Same function on another lattice of the same box: coefficients are
    /// copied by signed wavenumber index, modes absent from the target are
    /// dropped.
    pub fn embed(&self, target: BoxSpec) -> Result<SpectralField> {
        if target.lengths() != self.box_spec.lengths() {
            return Err(Error::RejectedInput("embedding needs equal box lengths".into()));
        }
        let src = self.box_spec;
        let (ns, nt) = (src.n(), target.n());
        let map = |i: usize, a: usize| -> Option<usize> {
            let m = BoxSpec::wrap(i, ns[a]);
            let half = (nt[a] / 2) as i64;
            if src.is_nyquist(a, i) || m >= half || m < -half {
                None
            } else {
                Some(m.rem_euclid(nt[a] as i64) as usize)
            }
        };
        let mut out = SpectralField::zeros(target);
        for_each_mode(&src, |idx, i, j, k| {
            if let (Some(a), Some(b), Some(c)) = (map(i, 0), map(j, 1), map(k, 2)) {
                out.coeffs[target.index(a, b, c)] = self.coeffs[idx];
            }
        });
        Ok(out)
    }
}

/// `1` on modes kept by the dealiasing rule `|m_a| < fraction * n_a / 2` on
/// every axis, `0` elsewhere.
pub fn dealias_mask(b: &BoxSpec, fraction: f64) -> Vec<f64> {
    let n = b.n();
    let mut mask = vec![0.0; b.total()];
    for_each_mode(b, |idx, i, j, k| {
        let keep = [i, j, k].iter().enumerate().all(|(a, &x)| {
            (BoxSpec::wrap(x, n[a]).unsigned_abs() as f64) < fraction * n[a] as f64 / 2.0
        });
        if keep {
            mask[idx] = 1.0;
        }
    });
    mask
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_field_is_real_and_band_limited() {
        let b = BoxSpec::cube(16, 6.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_band_field(&b, &mut rng, [3, 2, 4]);
        assert!(f.hermitian_defect() < 1e-15);
        assert!(f.coeffs[b.index(0, 0, 1)].norm() == 0.0);
        assert!(f.coeffs[b.index(4, 0, 1)].norm() == 0.0);
    }

    #[test]
    fn embedding_preserves_samples() {
        let b = BoxSpec::new([8, 8, 8], [2.0, 3.0, 4.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_band_field(&b, &mut rng, [3, 3, 3]);
        let g = f.embed(b.refined(2).unwrap()).unwrap();
        let uf = crate::grid::inverse_transform(&f).unwrap();
        let ug = crate::grid::inverse_transform(&g).unwrap();
        let bg = *g.box_spec();
        for_each_mode(&b, |idx, i, j, k| {
            assert!((uf[idx] - ug[bg.index(2 * i, 2 * j, 2 * k)]).abs() < 1e-12);
        });
    }

    #[test]
    fn two_thirds_mask_on_twelve_points() {
        let b = BoxSpec::cube(12, 1.0).unwrap();
        let m = dealias_mask(&b, 2.0 / 3.0);
        assert_eq!(m[b.index(3, 0, 0)], 1.0);
        assert_eq!(m[b.index(4, 0, 0)], 0.0);
        assert_eq!(m[b.index(9, 0, 0)], 1.0);
    }
}
