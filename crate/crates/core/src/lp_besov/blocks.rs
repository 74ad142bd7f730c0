use super::profile::phi;
use crate::grid::{for_each_mode, BoxSpec, SpectralField};

/// Horizontal shell `j` and vertical shell `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicIndex {
    pub j: i32,
    pub k: i32,
}

impl DyadicIndex {
    pub fn new(j: i32, k: i32) -> Self {
        Self { j, k }
    }
}

/// Inclusive shell ranges that can be nonzero on a given box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DyadicRange {
    pub j: (i32, i32),
    pub k: (i32, i32),
}

impl DyadicRange {
    pub fn indices(&self) -> Vec<DyadicIndex> {
        let mut out = Vec::new();
        for j in self.j.0..=self.j.1 {
            for k in self.k.0..=self.k.1 {
                out.push(DyadicIndex { j, k });
            }
        }
        out
    }

    pub fn contains(&self, idx: DyadicIndex) -> bool {
        (self.j.0..=self.j.1).contains(&idx.j) && (self.k.0..=self.k.1).contains(&idx.k)
    }
}

/// Shells `j` whose open support `(2^{j-1}, 2^{j+1})` meets `[r_min, r_max]`.
fn shells(r_min: f64, r_max: f64) -> (i32, i32) {
    let lo = (r_min.log2() - 1.0).floor() as i32 + 1;
    let hi = (r_max.log2() + 1.0).ceil() as i32 - 1;
    (lo, hi)
}

pub fn dyadic_range(b: &BoxSpec) -> DyadicRange {
    let l = b.lengths();
    let kmax = [b.max_wavenumber(0), b.max_wavenumber(1), b.max_wavenumber(2)];
    let h_min = 2.0 * std::f64::consts::PI / l[0].max(l[1]);
    let h_max = (kmax[0] * kmax[0] + kmax[1] * kmax[1]).sqrt();
    let v_min = 2.0 * std::f64::consts::PI / l[2];
    DyadicRange {
        j: shells(h_min, h_max),
        k: shells(v_min, kmax[2]),
    }
}

/// Per-mode `|xi_h|` (horizontal plane, length `nx*ny`) and `|xi_3|` tables.
pub(crate) struct ShellGeometry {
    pub h: Vec<f64>,
    pub v: Vec<f64>,
}

impl ShellGeometry {
    pub fn new(b: &BoxSpec) -> Self {
        let w = b.wavenumbers();
        let [nx, ny, _] = b.n();
        let mut h = vec![0.0; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                h[i + nx * j] = w.k[0][i].hypot(w.k[1][j]);
            }
        }
        Self {
            h,
            v: w.k[2].iter().map(|x| x.abs()).collect(),
        }
    }

    pub fn weights(&self, idx: DyadicIndex) -> (Vec<f64>, Vec<f64>) {
        let sj = (-idx.j as f64).exp2();
        let sk = (-idx.k as f64).exp2();
        (
            self.h.iter().map(|r| phi(r * sj)).collect(),
            self.v.iter().map(|r| phi(r * sk)).collect(),
        )
    }
}

pub(crate) fn apply_weights(f: &SpectralField, wh: &[f64], wv: &[f64]) -> SpectralField {
    let b = *f.box_spec();
    let nxy = b.n()[0] * b.n()[1];
    let mut out = f.clone();
    let c = out.coeffs_mut();
    for (idx, z) in c.iter_mut().enumerate() {
        *z *= wh[idx % nxy] * wv[idx / nxy];
    }
    out
}

/// `Delta^h_j Delta^v_k f`.
pub fn lp_block(field: &SpectralField, idx: DyadicIndex) -> SpectralField {
    let geo = ShellGeometry::new(field.box_spec());
    let (wh, wv) = geo.weights(idx);
    apply_weights(field, &wh, &wv)
}

/// The field with its `xi_h = 0` and `xi_3 = 0` planes removed, which is what
/// the sum of all blocks reproduces.
pub fn without_axis_planes(field: &SpectralField) -> SpectralField {
    let b = *field.box_spec();
    let mut out = field.clone();
    let c = out.coeffs_mut();
    for_each_mode(&b, |idx, i, j, k| {
        if (i == 0 && j == 0) || k == 0 {
            c[idx] = Default::default();
        }
    });
    out
}
