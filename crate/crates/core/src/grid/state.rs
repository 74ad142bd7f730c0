use num_complex::Complex64;

use super::field::SpectralField;
use super::{for_each_mode, BoxSpec};
use crate::error::{Error, Result};

/// Velocity `(v1, v2, v3)` and thermal disturbance `theta` at one time.
#[derive(Clone, Debug, PartialEq)]
pub struct BoussinesqState {
    pub fields: [SpectralField; 4],
    pub time: f64,
}

pub const COMPONENT_NAMES: [&str; 4] = ["v1", "v2", "v3", "theta"];

impl BoussinesqState {
    pub fn new(fields: [SpectralField; 4], time: f64) -> Result<Self> {
        let b = fields[0].box_spec;
        if fields.iter().any(|f| f.box_spec != b) {
            return Err(Error::RejectedInput("components live on different boxes".into()));
        }
        if !(time >= 0.0) {
            return Err(Error::RejectedInput(format!("negative time {time}")));
        }
        Ok(Self { fields, time })
    }

    pub fn zeros(b: BoxSpec) -> Self {
        let z = SpectralField::zeros(b);
        Self {
            fields: [z.clone(), z.clone(), z.clone(), z],
            time: 0.0,
        }
    }

    pub fn box_spec(&self) -> &BoxSpec {
        &self.fields[0].box_spec
    }

    pub fn v(&self, a: usize) -> &SpectralField {
        &self.fields[a]
    }

    pub fn theta(&self) -> &SpectralField {
        &self.fields[3]
    }

    pub fn component(&self, name: &str) -> Result<&SpectralField> {
        COMPONENT_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| &self.fields[i])
            .ok_or_else(|| Error::RejectedInput(format!("unknown component '{name}'")))
    }

    /// Coefficient 4-vector at a linear mode index.
    #[inline]
    pub fn mode(&self, idx: usize) -> [Complex64; 4] {
        [
            self.fields[0].coeffs[idx],
            self.fields[1].coeffs[idx],
            self.fields[2].coeffs[idx],
            self.fields[3].coeffs[idx],
        ]
    }

    #[inline]
    pub fn set_mode(&mut self, idx: usize, u: [Complex64; 4]) {
        for (f, c) in self.fields.iter_mut().zip(u) {
            f.coeffs[idx] = c;
        }
    }

    /// Largest `|xi . v_hat| / |v_hat|` over modes with nonzero velocity,
    /// using the derivative symbol (so Nyquist components count as unresolved).
    pub fn divergence_defect(&self) -> f64 {
        let b = *self.box_spec();
        let w = b.wavenumbers();
        let scale = (0..b.total())
            .map(|n| {
                let u = self.mode(n);
                (u[0].norm_sqr() + u[1].norm_sqr() + u[2].norm_sqr()).sqrt()
            })
            .fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        if scale == 0.0 {
            return 0.0;
        }
        for_each_mode(&b, |idx, i, j, k| {
            let x = w.xi(i, j, k);
            let n = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            if n == 0.0 {
                return;
            }
            let u = self.mode(idx);
            let mag = (u[0].norm_sqr() + u[1].norm_sqr() + u[2].norm_sqr()).sqrt();
            if mag <= 1e-300 * scale {
                return;
            }
            let d = u[0] * x[0] + u[1] * x[1] + u[2] * x[2];
            worst = worst.max(d.norm() / (n * mag));
        });
        worst
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            fields: self.fields.clone().map(|f| f.scaled(s)),
            time: self.time,
        }
    }

    /// `||v||^2 + ||theta||^2` by Plancherel.
    pub fn energy(&self) -> f64 {
        self.fields.iter().map(|f| f.plancherel_sq()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.fields
            .iter()
            .all(|f| f.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite()))
    }

    /// Largest coefficient difference relative to the larger state's scale.
    pub fn relative_difference(&self, other: &Self) -> f64 {
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for (a, b) in self.fields.iter().zip(&other.fields) {
            for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
                num += (x - y).norm_sqr();
                den += x.norm_sqr().max(y.norm_sqr());
            }
        }
        if den == 0.0 {
            0.0
        } else {
            (num / den).sqrt()
        }
    }
}
