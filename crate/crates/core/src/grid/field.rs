use num_complex::Complex64;

use super::fft::{Fft3, FftPair};
use super::{for_each_mode, BoxSpec};
use crate::error::{Error, Result};

/// Relative size of the imaginary residue tolerated by [`inverse_transform`].
pub const REALNESS_TOL: f64 = 1e-10;

/// One scalar unknown stored as Fourier coefficients on the box lattice.
///
/// The convention is `u_hat(xi) = \int u e^{-i x.xi} dx`, approximated by the
/// DFT scaled by the cell volume, so that
/// `u(x) = V^{-1} sum_xi u_hat(xi) e^{i x.xi}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    pub(crate) box_spec: BoxSpec,
    pub(crate) coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(box_spec: BoxSpec) -> Self {
        Self {
            box_spec,
            coeffs: vec![Complex64::default(); box_spec.total()],
        }
    }

    pub fn from_coeffs(box_spec: BoxSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != box_spec.total() {
            return Err(Error::RejectedInput(format!(
                "{} coefficients for a box of {} modes",
                coeffs.len(),
                box_spec.total()
            )));
        }
        Ok(Self { box_spec, coeffs })
    }

    pub fn box_spec(&self) -> &BoxSpec {
        &self.box_spec
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            box_spec: self.box_spec,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &SpectralField) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    pub fn sub(&self, other: &SpectralField) -> Self {
        Self {
            box_spec: self.box_spec,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Multiplies every coefficient by `symbol(xi)`; `symbol` sees the lattice
    /// indices `(i, j, k)`.
    pub fn apply_symbol(&self, mut symbol: impl FnMut(usize, usize, usize) -> Complex64) -> Self {
        let mut out = self.clone();
        for_each_mode(&self.box_spec, |idx, i, j, k| {
            out.coeffs[idx] *= symbol(i, j, k);
        });
        out
    }

    /// Multiplies the coefficient at each linear index by `symbol(idx)`.
    pub fn apply_symbol_indexed(&self, mut symbol: impl FnMut(usize) -> Complex64) -> Self {
        let mut out = self.clone();
        for (idx, c) in out.coeffs.iter_mut().enumerate() {
            *c *= symbol(idx);
        }
        out
    }

    /// Spectral derivative `d^{a0}_1 d^{a1}_2 d^{a2}_3`.
    pub fn derivative(&self, order: [u32; 3]) -> Self {
        let w = self.box_spec.wavenumbers();
        self.apply_symbol(|i, j, k| {
            let d = w.dxi(i, j, k);
            let mut s = Complex64::new(1.0, 0.0);
            for a in 0..3 {
                for _ in 0..order[a] {
                    s *= Complex64::new(0.0, d[a]);
                }
            }
            s
        })
    }

    /// Largest relative violation of `c(-xi) = conj(c(xi))`.
    pub fn hermitian_defect(&self) -> f64 {
        let b = &self.box_spec;
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst: f64 = 0.0;
        for_each_mode(b, |idx, i, j, k| {
            let m = b.mirror_index(i, j, k);
            worst = worst.max((self.coeffs[idx] - self.coeffs[m].conj()).norm());
        });
        worst / scale
    }

    /// `sum |c|^2 / V`, the physical-space squared L2 norm by Plancherel.
    pub fn plancherel_sq(&self) -> f64 {
        super::norms::pairwise_sum(&self.coeffs.iter().map(|c| c.norm_sqr()).collect::<Vec<_>>())
            / self.box_spec.volume()
    }
}

/// Physical samples to spectral coefficients.
pub fn forward_transform(values: &[f64], box_spec: BoxSpec) -> Result<SpectralField> {
    if values.len() != box_spec.total() {
        return Err(Error::RejectedInput(format!(
            "{} samples for a box of {} points",
            values.len(),
            box_spec.total()
        )));
    }
    let mut buf: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Fft3::new(&box_spec, true).process(&mut buf);
    Ok(SpectralField {
        box_spec,
        coeffs: hermitian_part(&buf, &box_spec, box_spec.cell_volume()),
    })
}

/// `s (c(xi) + conj c(-xi)) / 2`: the transform of real data is Hermitian, and
/// enforcing it exactly keeps rounding from the large modes out of the
/// realness check of small ones.
fn hermitian_part(buf: &[Complex64], b: &BoxSpec, s: f64) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); buf.len()];
    for_each_mode(b, |idx, i, j, k| {
        out[idx] = (buf[idx] + buf[b.mirror_index(i, j, k)].conj()) * (0.5 * s);
    });
    out
}

/// Spectral coefficients to physical samples; rejects fields that are not
/// Hermitian to [`REALNESS_TOL`].
pub fn inverse_transform(field: &SpectralField) -> Result<Vec<f64>> {
    let mut buf = field.coeffs.clone();
    Fft3::new(&field.box_spec, false).process(&mut buf);
    realify(buf, &field.box_spec)
}

fn realify(buf: Vec<Complex64>, b: &BoxSpec) -> Result<Vec<f64>> {
    let inv_v = 1.0 / b.volume();
    let mut max_re: f64 = 0.0;
    let mut max_im: f64 = 0.0;
    for c in &buf {
        if !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::Blowup("non-finite value in spectral field".into()));
        }
        max_re = max_re.max(c.re.abs());
        max_im = max_im.max(c.im.abs());
    }
    if max_im > REALNESS_TOL * max_re.max(f64::MIN_POSITIVE) && max_im > 0.0 {
        return Err(Error::CorruptField(format!(
            "imaginary residue {:.3e} against magnitude {:.3e}",
            max_im * inv_v,
            max_re * inv_v
        )));
    }
    Ok(buf.into_iter().map(|c| c.re * inv_v).collect())
}

/// Transform helper owning cached plans; pairs two real fields per complex FFT.
pub struct Transformer {
    box_spec: BoxSpec,
    ffts: FftPair,
    buf: Vec<Complex64>,
}

impl Transformer {
    pub fn new(box_spec: BoxSpec) -> Self {
        Self {
            box_spec,
            ffts: FftPair::new(&box_spec),
            buf: vec![Complex64::default(); box_spec.total()],
        }
    }

    pub fn box_spec(&self) -> &BoxSpec {
        &self.box_spec
    }

    pub fn to_physical(&mut self, f: &SpectralField) -> Result<Vec<f64>> {
        let mut buf = f.coeffs.clone();
        self.ffts.inverse.process(&mut buf);
        realify(buf, &self.box_spec)
    }

    /// Inverse transform of two Hermitian fields with a single complex FFT.
    /// Realness is not asserted here.
    pub fn to_physical_pair(&mut self, a: &[Complex64], b: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
        let inv_v = 1.0 / self.box_spec.volume();
        for ((z, x), y) in self.buf.iter_mut().zip(a).zip(b) {
            *z = x + Complex64::new(-y.im, y.re);
        }
        self.ffts.inverse.process(&mut self.buf);
        let re = self.buf.iter().map(|z| z.re * inv_v).collect();
        let im = self.buf.iter().map(|z| z.im * inv_v).collect();
        (re, im)
    }

    /// Physical samples of several Hermitian fields, two per complex FFT.
    pub fn to_physical_many(&mut self, fields: &[SpectralField]) -> Vec<Vec<f64>> {
        let mut out = Vec::with_capacity(fields.len());
        for chunk in fields.chunks(2) {
            if let [a, b] = chunk {
                let (x, y) = self.to_physical_pair(&a.coeffs, &b.coeffs);
                out.push(x);
                out.push(y);
            } else {
                let zero = vec![Complex64::default(); self.box_spec.total()];
                let (x, _) = self.to_physical_pair(&chunk[0].coeffs, &zero);
                out.push(x);
            }
        }
        out
    }

    pub fn to_spectral(&mut self, values: &[f64]) -> SpectralField {
        for (z, x) in self.buf.iter_mut().zip(values) {
            *z = Complex64::new(*x, 0.0);
        }
        self.ffts.forward.process(&mut self.buf);
        SpectralField {
            box_spec: self.box_spec,
            coeffs: hermitian_part(&self.buf, &self.box_spec, self.box_spec.cell_volume()),
        }
    }

    /// Forward transform of two real arrays with a single complex FFT.
    pub fn to_spectral_pair(&mut self, x: &[f64], y: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        for ((z, a), b) in self.buf.iter_mut().zip(x).zip(y) {
            *z = Complex64::new(*a, *b);
        }
        self.ffts.forward.process(&mut self.buf);
        let dv = self.box_spec.cell_volume();
        let b = self.box_spec;
        let mut fx = vec![Complex64::default(); b.total()];
        let mut fy = vec![Complex64::default(); b.total()];
        for_each_mode(&b, |idx, i, j, k| {
            let z = self.buf[idx];
            let zm = self.buf[b.mirror_index(i, j, k)].conj();
            fx[idx] = (z + zm) * (0.5 * dv);
            let d = (z - zm) * (0.5 * dv);
            fy[idx] = Complex64::new(d.im, -d.re);
        });
        (fx, fy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid_fn(b: &BoxSpec, f: impl Fn([f64; 3]) -> f64) -> Vec<f64> {
        let mut out = vec![0.0; b.total()];
        for_each_mode(b, |idx, i, j, k| {
            out[idx] = f([b.coordinate(0, i), b.coordinate(1, j), b.coordinate(2, k)]);
        });
        out
    }

    #[test]
    fn constant_maps_to_zero_mode() {
        let b = BoxSpec::new([8, 6, 4], [2.0, 3.0, 1.5]).unwrap();
        let f = forward_transform(&vec![1.0; b.total()], b).unwrap();
        assert!((f.coeffs[0].re - b.volume()).abs() < 1e-12);
        let rest: f64 = f.coeffs[1..].iter().map(|c| c.norm()).sum();
        assert!(rest < 1e-12);
    }

    #[test]
    fn cosine_maps_to_conjugate_pair() {
        let b = BoxSpec::new([8, 8, 8], [3.0, 1.0, 1.0]).unwrap();
        let u = grid_fn(&b, |x| (2.0 * PI * x[0] / 3.0).cos());
        let f = forward_transform(&u, b).unwrap();
        let half = b.volume() / 2.0;
        let plus = b.index(1, 0, 0);
        let minus = b.index(7, 0, 0);
        assert!((f.coeffs[plus] - Complex64::new(half, 0.0)).norm() < 1e-12);
        assert!((f.coeffs[minus] - Complex64::new(half, 0.0)).norm() < 1e-12);
        for (idx, c) in f.coeffs.iter().enumerate() {
            if idx != plus && idx != minus {
                assert!(c.norm() < 1e-12);
            }
        }
        assert!((b.wavenumber(0, 1) - 2.0 * PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn half_half_pair_gives_cosine_on_unit_box() {
        let b = BoxSpec::cube(8, 1.0).unwrap();
        let mut f = SpectralField::zeros(b);
        f.coeffs[b.index(0, 2, 0)] = Complex64::new(0.5, 0.0);
        f.coeffs[b.index(0, 6, 0)] = Complex64::new(0.5, 0.0);
        let u = inverse_transform(&f).unwrap();
        let expect = grid_fn(&b, |x| (2.0 * PI * 2.0 * x[1]).cos());
        for (a, e) in u.iter().zip(&expect) {
            assert!((a - e).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_field_inverts_to_zero() {
        let b = BoxSpec::cube(4, 1.0).unwrap();
        let u = inverse_transform(&SpectralField::zeros(b)).unwrap();
        assert!(u.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn non_hermitian_field_is_rejected() {
        let b = BoxSpec::cube(4, 1.0).unwrap();
        let mut f = SpectralField::zeros(b);
        f.coeffs[b.index(1, 0, 0)] = Complex64::new(1.0, 0.0);
        assert!(matches!(inverse_transform(&f), Err(Error::CorruptField(_))));
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let b = BoxSpec::cube(4, 1.0).unwrap();
        assert!(matches!(
            forward_transform(&[0.0; 10], b),
            Err(Error::RejectedInput(_))
        ));
    }

    #[test]
    fn paired_transforms_match_single_ones() {
        let b = BoxSpec::new([8, 4, 6], [1.0, 2.0, 3.0]).unwrap();
        let x = grid_fn(&b, |p| (p[0] * 6.0).sin() + p[2] * p[1]);
        let y = grid_fn(&b, |p| (p[1] * 3.0 + p[2]).cos());
        let mut t = Transformer::new(b);
        let (fx, fy) = t.to_spectral_pair(&x, &y);
        let gx = forward_transform(&x, b).unwrap();
        let gy = forward_transform(&y, b).unwrap();
        for n in 0..b.total() {
            assert!((fx[n] - gx.coeffs[n]).norm() < 1e-12);
            assert!((fy[n] - gy.coeffs[n]).norm() < 1e-12);
        }
        let (px, py) = t.to_physical_pair(&fx, &fy);
        for n in 0..b.total() {
            assert!((px[n] - x[n]).abs() < 1e-12);
            assert!((py[n] - y[n]).abs() < 1e-12);
        }
    }
}
