use super::blocks::{apply_weights, dyadic_range, DyadicIndex, ShellGeometry};
use crate::error::{Error, Result};
use crate::grid::norms::{lp_norm_vector, pairwise_sum};
use crate::grid::{inverse_transform, SpectralField};

/// Exponents `(p, q, s1, s2)` of `B^{s1,s2}_{p,q}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovSpec {
    pub p: f64,
    pub q: f64,
    pub s1: f64,
    pub s2: f64,
}

impl BesovSpec {
    pub fn new(p: f64, q: f64, s1: f64, s2: f64) -> Result<Self> {
        for (name, v) in [("p", p), ("q", q)] {
            if !(v >= 1.0) {
                return Err(Error::RejectedInput(format!("{name} = {v} outside [1, inf]")));
            }
        }
        Ok(Self { p, q, s1, s2 })
    }
}

/// `L^p` norms of every potentially nonzero block of a (vector) field.
pub fn block_norms(fields: &[&SpectralField], p: f64) -> Result<Vec<(DyadicIndex, f64)>> {
    let Some(first) = fields.first() else {
        return Ok(Vec::new());
    };
    let b = *first.box_spec();
    let geo = ShellGeometry::new(&b);
    let range = dyadic_range(&b);
    let mut out = Vec::new();
    for idx in range.indices() {
        let (wh, wv) = geo.weights(idx);
        if wh.iter().all(|w| *w == 0.0) || wv.iter().all(|w| *w == 0.0) {
            out.push((idx, 0.0));
            continue;
        }
        let blocks: Vec<SpectralField> = fields.iter().map(|f| apply_weights(f, &wh, &wv)).collect();
        let norm = if p == 2.0 {
            // discrete Parseval is exact for the Riemann sum
            blocks.iter().map(|f| f.plancherel_sq()).sum::<f64>().sqrt()
        } else {
            let phys = blocks
                .iter()
                .map(inverse_transform)
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&[f64]> = phys.iter().map(|v| v.as_slice()).collect();
            lp_norm_vector(&refs, &b, p)?
        };
        out.push((idx, norm));
    }
    Ok(out)
}

/// `l^q` combination of weighted block norms.
pub fn besov_from_blocks(blocks: &[(DyadicIndex, f64)], spec: &BesovSpec) -> f64 {
    let weighted: Vec<f64> = blocks
        .iter()
        .map(|(idx, n)| {
            if *n == 0.0 {
                0.0
            } else {
                (spec.s1 * idx.j as f64 + spec.s2 * idx.k as f64).exp2() * n
            }
        })
        .collect();
    if spec.q.is_infinite() {
        weighted.iter().fold(0.0, |m, v| m.max(*v))
    } else if spec.q == 1.0 {
        pairwise_sum(&weighted)
    } else {
        let top = weighted.iter().fold(0.0, |m: f64, v| m.max(*v));
        if top == 0.0 {
            return 0.0;
        }
        let terms: Vec<f64> = weighted.iter().map(|v| (v / top).powf(spec.q)).collect();
        top * pairwise_sum(&terms).powf(1.0 / spec.q)
    }
}

pub fn besov_norm(field: &SpectralField, spec: &BesovSpec) -> Result<f64> {
    besov_norm_vector(&[field], spec)
}

/// Besov norm of a vector field, blocks measured with the pointwise Euclidean
/// magnitude.
pub fn besov_norm_vector(fields: &[&SpectralField], spec: &BesovSpec) -> Result<f64> {
    Ok(besov_from_blocks(&block_norms(fields, spec.p)?, spec))
}
