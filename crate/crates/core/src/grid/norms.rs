//! Physical-space L^p quadrature and spectral Sobolev sums.
//!
//! All reductions go through [`pairwise_sum`] so that results do not depend on
//! how (or whether) the work is split.

use super::field::{inverse_transform, SpectralField};
use super::{for_each_mode, BoxSpec};
use crate::error::{Error, Result};

const PAIRWISE_BASE: usize = 128;

/// Deterministic pairwise (cascade) summation.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= PAIRWISE_BASE {
        let mut s = 0.0;
        for v in x {
            s += v;
        }
        return s;
    }
    let mid = x.len() / 2;
    pairwise_sum(&x[..mid]) + pairwise_sum(&x[mid..])
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 || p == f64::INFINITY {
        Ok(())
    } else {
        Err(Error::RejectedInput(format!("exponent p = {p} outside [1, inf]")))
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Blowup("non-finite grid value in norm evaluation".into()))
    }
}

/// `(dV sum |u|^p)^{1/p}`, or the grid maximum for `p = inf`, of nonnegative
/// pointwise magnitudes.
pub fn lp_of_magnitudes(mag: &[f64], cell_volume: f64, p: f64) -> Result<f64> {
    check_p(p)?;
    check_finite(mag)?;
    if p.is_infinite() {
        return Ok(mag.iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    let scale = mag.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    // scale out the maximum so that large p cannot overflow
    let terms: Vec<f64> = if p == 2.0 {
        mag.iter().map(|v| (v / scale) * (v / scale)).collect()
    } else {
        mag.iter().map(|v| (v.abs() / scale).powf(p)).collect()
    };
    Ok(scale * (cell_volume * pairwise_sum(&terms)).powf(1.0 / p))
}

/// L^p norm of samples on the box grid.
pub fn lp_norm_values(values: &[f64], b: &BoxSpec, p: f64) -> Result<f64> {
    lp_of_magnitudes(values, b.cell_volume(), p)
}

/// L^p norm of a vector field given component samples, using the pointwise
/// Euclidean magnitude.
pub fn lp_norm_vector(components: &[&[f64]], b: &BoxSpec, p: f64) -> Result<f64> {
    let mag = magnitudes(components);
    lp_of_magnitudes(&mag, b.cell_volume(), p)
}

pub fn magnitudes(components: &[&[f64]]) -> Vec<f64> {
    let n = components.first().map_or(0, |c| c.len());
    (0..n)
        .map(|i| components.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt())
        .collect()
}

/// L^p norm of a spectral field by physical-space Riemann quadrature.
pub fn lp_norm(field: &SpectralField, p: f64) -> Result<f64> {
    check_p(p)?;
    if field.coeffs().iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Blowup("non-finite spectral coefficient".into()));
    }
    let u = inverse_transform(field)?;
    lp_norm_values(&u, field.box_spec(), p)
}

/// `|| f ||_{L^{p_h}_{x_h} W^{s_v, p_v}_{x_3}}` with the inner norm
/// `(sum_{m <= s_v} || d_3^m f ||_{L^{p_v}_{x_3}}^{p_v})^{1/p_v}` (max over `m`
/// when `p_v = inf`).
pub fn anisotropic_mixed_norm(field: &SpectralField, p_h: f64, p_v: f64, s_v: u32) -> Result<f64> {
    check_p(p_h)?;
    check_p(p_v)?;
    if s_v > 4 {
        return Err(Error::RejectedInput(format!("vertical order {s_v} exceeds 4")));
    }
    let b = *field.box_spec();
    let mut derivs = Vec::with_capacity(s_v as usize + 1);
    for m in 0..=s_v {
        derivs.push(inverse_transform(&field.derivative([0, 0, m]))?);
    }
    let refs: Vec<&[f64]> = derivs.iter().map(|d| d.as_slice()).collect();
    Ok(mixed_from_samples(&refs, &b, p_h, p_v))
}

/// Mixed norm from physical samples of `d_3^m f`, `m = 0..`.
pub(crate) fn mixed_from_samples(derivs: &[&[f64]], b: &BoxSpec, p_h: f64, p_v: f64) -> f64 {
    let [nx, ny, nz] = b.n();
    let dz = b.spacing(2);
    let mut inner = vec![0.0; nx * ny];
    let mut line = vec![0.0; nz];
    for j in 0..ny {
        for i in 0..nx {
            let mut per_order = Vec::with_capacity(derivs.len());
            for d in derivs {
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = d[b.index(i, j, k)].abs();
                }
                per_order.push(lp_of_magnitudes(&line, dz, p_v).unwrap_or(f64::NAN));
            }
            inner[i + nx * j] = if p_v.is_infinite() {
                per_order.iter().fold(0.0, |m: f64, v| m.max(*v))
            } else {
                let terms: Vec<f64> = per_order.iter().map(|v| v.powf(p_v)).collect();
                pairwise_sum(&terms).powf(1.0 / p_v)
            };
        }
    }
    lp_of_magnitudes(&inner, b.spacing(0) * b.spacing(1), p_h).unwrap_or(f64::NAN)
}

/// Multi-indices of order `<= s` in three variables.
pub fn multi_indices(s: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for total in 0..=s {
        for a in 0..=total {
            for b in 0..=total - a {
                out.push([a, b, total - a - b]);
            }
        }
    }
    out
}

/// `sum_{|alpha| <= s} || d^alpha f ||_{L^2}` for a vector of fields, computed
/// spectrally (the vector L^2 norm is taken for each alpha).
pub fn sobolev_norm(fields: &[&SpectralField], s: u32) -> f64 {
    let Some(first) = fields.first() else {
        return 0.0;
    };
    let b = *first.box_spec();
    let w = b.wavenumbers();
    let mut amp = vec![0.0; b.total()];
    for f in fields {
        for (a, c) in amp.iter_mut().zip(f.coeffs()) {
            *a += c.norm_sqr();
        }
    }
    let v = b.volume();
    let mut buf = vec![0.0; b.total()];
    let mut terms = Vec::new();
    for a in multi_indices(s) {
        for_each_mode(&b, |idx, i, j, k| {
            let d = w.dxi(i, j, k);
            let sym = d[0].powi(a[0] as i32) * d[1].powi(a[1] as i32) * d[2].powi(a[2] as i32);
            buf[idx] = sym * sym * amp[idx];
        });
        terms.push((pairwise_sum(&buf) / v).sqrt());
    }
    pairwise_sum(&terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::field::forward_transform;
    use std::f64::consts::PI;

    fn sample(b: &BoxSpec, f: impl Fn([f64; 3]) -> f64) -> Vec<f64> {
        let mut out = vec![0.0; b.total()];
        for_each_mode(b, |idx, i, j, k| {
            out[idx] = f([b.coordinate(0, i), b.coordinate(1, j), b.coordinate(2, k)]);
        });
        out
    }

    #[test]
    fn constant_l2_norm_on_two_pi_box() {
        let b = BoxSpec::cube(8, 2.0 * PI).unwrap();
        let f = forward_transform(&vec![1.0; b.total()], b).unwrap();
        let n = lp_norm(&f, 2.0).unwrap();
        assert!((n - (2.0 * PI).powf(1.5)).abs() < 1e-12 * n);
    }

    #[test]
    fn sup_norm_is_grid_max() {
        let b = BoxSpec::cube(8, 1.0).unwrap();
        let u = sample(&b, |x| (2.0 * PI * x[0]).sin() * 3.0 - x[2]);
        let f = forward_transform(&u, b).unwrap();
        let m = u.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!((lp_norm(&f, f64::INFINITY).unwrap() - m).abs() < 1e-12);
    }

    #[test]
    fn bump_l2_matches_plancherel() {
        let b = BoxSpec::cube(32, 10.0).unwrap();
        let u = sample(&b, |x| {
            let r2 = (x[0] - 5.0).powi(2) + (x[1] - 5.0).powi(2) + (x[2] - 5.0).powi(2);
            (-r2).exp()
        });
        let f = forward_transform(&u, b).unwrap();
        let q = lp_norm(&f, 2.0).unwrap();
        let s = f.plancherel_sq().sqrt();
        assert!((q - s).abs() < 1e-8 * s);
    }

    #[test]
    fn rejects_bad_exponent_and_nan() {
        let b = BoxSpec::cube(4, 1.0).unwrap();
        let f = SpectralField::zeros(b);
        assert!(lp_norm(&f, 0.5).is_err());
        let mut g = f.clone();
        g.coeffs_mut()[0].re = f64::NAN;
        assert!(matches!(lp_norm(&g, 2.0), Err(Error::Blowup(_))));
    }

    #[test]
    fn mixed_norm_reduces_to_l2() {
        let b = BoxSpec::new([8, 8, 16], [1.0, 2.0, 3.0]).unwrap();
        let u = sample(&b, |x| (2.0 * PI * x[0]).cos() + (2.0 * PI * x[2] / 3.0).sin() * x[1]);
        let f = forward_transform(&u, b).unwrap();
        let a = anisotropic_mixed_norm(&f, 2.0, 2.0, 0).unwrap();
        let c = lp_norm(&f, 2.0).unwrap();
        assert!((a - c).abs() < 1e-10 * c);
    }

    #[test]
    fn mixed_norm_of_single_vertical_mode() {
        let lz = 4.0;
        let b = BoxSpec::new([4, 4, 16], [1.0, 1.0, lz]).unwrap();
        let kappa = 2.0 * PI * 2.0 / lz;
        let u = sample(&b, |x| (kappa * x[2]).cos());
        let f = forward_transform(&u, b).unwrap();
        // inner: ||cos||_{L2(0,lz)} = sqrt(lz/2), ||kappa sin|| = kappa sqrt(lz/2)
        let base = (lz / 2.0).sqrt();
        let expect = (1.0 + kappa * kappa).sqrt() * base;
        let got = anisotropic_mixed_norm(&f, 2.0, 2.0, 1).unwrap();
        assert!((got - expect).abs() < 1e-10 * expect);
    }

    #[test]
    fn sobolev_norm_of_single_mode() {
        let b = BoxSpec::cube(8, 2.0 * PI).unwrap();
        let u = sample(&b, |x| x[0].cos());
        let f = forward_transform(&u, b).unwrap();
        let l2 = lp_norm(&f, 2.0).unwrap();
        // alphas hitting only x1 survive: (0,0,0), (1,0,0) at s = 1
        assert!((sobolev_norm(&[&f], 1) - 2.0 * l2).abs() < 1e-12 * l2);
        assert_eq!(multi_indices(8).len(), 165);
    }

    #[test]
    fn pairwise_sum_is_exact_on_integers() {
        let x: Vec<f64> = (0..10_000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&x), 49_995_000.0);
    }
}
