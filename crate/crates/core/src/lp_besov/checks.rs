//! Numerical checks of the block inequalities: Bernstein, derivative
//! equivalence, embeddings, interpolation, multiplier bounds and the product
//! estimate in `B^{1,1/2}_{2,1}`.

use super::besov::{besov_from_blocks, besov_norm, besov_norm_vector, block_norms, BesovSpec};
use super::blocks::{apply_weights, dyadic_range, DyadicIndex, ShellGeometry};
use crate::error::Result;
use crate::grid::norms::lp_norm_values;
use crate::grid::{dealias_mask, inverse_transform, lp_norm, SpectralField, Transformer};

/// Outcome of a ratio whose denominator may vanish.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ratio {
    Value(f64),
    Undefined,
}

impl Ratio {
    pub fn value(self) -> Option<f64> {
        match self {
            Ratio::Value(v) => Some(v),
            Ratio::Undefined => None,
        }
    }

    fn of(num: f64, den: f64) -> Self {
        if den > 0.0 && den.is_finite() && num.is_finite() {
            Ratio::Value(num / den)
        } else {
            Ratio::Undefined
        }
    }
}

/// `||block||_{p2} / (2^{2(1/p1-1/p2) j} 2^{(1/p1-1/p2) k} ||block||_{p1})`.
pub fn bernstein_check(field: &SpectralField, idx: DyadicIndex, p1: f64, p2: f64) -> Result<Ratio> {
    assert!(p1 <= p2, "Bernstein check needs p1 <= p2");
    let blk = super::blocks::lp_block(field, idx);
    let u = inverse_transform(&blk)?;
    let b = field.box_spec();
    Ok(bernstein_ratio(&u, b, idx, p1, p2))
}

fn bernstein_ratio(u: &[f64], b: &crate::grid::BoxSpec, idx: DyadicIndex, p1: f64, p2: f64) -> Ratio {
    let d = 1.0 / p1 - 1.0 / p2;
    let n1 = lp_norm_values(u, b, p1).unwrap_or(f64::NAN);
    let n2 = lp_norm_values(u, b, p2).unwrap_or(f64::NAN);
    let scale = (2.0 * d * idx.j as f64 + d * idx.k as f64).exp2();
    Ratio::of(n2, scale * n1)
}

/// Largest Bernstein ratio over all blocks of the given fields for each
/// exponent pair.
pub fn max_bernstein_ratios(fields: &[SpectralField], pairs: &[(f64, f64)]) -> Result<Vec<f64>> {
    let mut best = vec![0.0_f64; pairs.len()];
    let Some(first) = fields.first() else {
        return Ok(best);
    };
    let b = *first.box_spec();
    let geo = ShellGeometry::new(&b);
    let mut tr = Transformer::new(b);
    for idx in dyadic_range(&b).indices() {
        let (wh, wv) = geo.weights(idx);
        for f in fields {
            let blk = apply_weights(f, &wh, &wv);
            if blk.coeffs().iter().all(|c| c.norm() == 0.0) {
                continue;
            }
            let u = tr.to_physical(&blk)?;
            for (n, &(p1, p2)) in pairs.iter().enumerate() {
                if let Ratio::Value(r) = bernstein_ratio(&u, &b, idx, p1, p2) {
                    best[n] = best[n].max(r);
                }
            }
        }
    }
    Ok(best)
}

/// `||d_3 block||_2 / (2^k ||block||_2)`.
pub fn vertical_derivative_ratio(field: &SpectralField, idx: DyadicIndex) -> Ratio {
    let blk = super::blocks::lp_block(field, idx);
    let d = blk.derivative([0, 0, 1]);
    Ratio::of(
        d.plancherel_sq().sqrt(),
        (idx.k as f64).exp2() * blk.plancherel_sq().sqrt(),
    )
}

/// `max_{|alpha_h| = 1} ||d_h^alpha block||_2 / (2^j ||block||_2)`.
pub fn horizontal_derivative_ratio(field: &SpectralField, idx: DyadicIndex) -> Ratio {
    let blk = super::blocks::lp_block(field, idx);
    let n = blk
        .derivative([1, 0, 0])
        .plancherel_sq()
        .max(blk.derivative([0, 1, 0]).plancherel_sq())
        .sqrt();
    Ratio::of(n, (idx.j as f64).exp2() * blk.plancherel_sq().sqrt())
}

/// Pseudo-spectral product with inputs and output truncated by the 2/3 rule.
pub fn dealiased_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    let b = *f.box_spec();
    let mask = dealias_mask(&b, 2.0 / 3.0);
    let cut = |h: &SpectralField| h.apply_symbol_indexed(|idx| mask[idx].into());
    let mut tr = Transformer::new(b);
    let phys = tr.to_physical_many(&[cut(f), cut(g)]);
    let prod: Vec<f64> = phys[0].iter().zip(&phys[1]).map(|(a, b)| a * b).collect();
    let p = tr.to_spectral(&prod);
    Ok(p.apply_symbol_indexed(|idx| mask[idx].into()))
}

/// `||fg||_{B^{1,1/2}_{2,1}} / (||f|| ||g||)`.
pub fn paraproduct_ratio(f: &SpectralField, g: &SpectralField) -> Result<Ratio> {
    let spec = BesovSpec::new(2.0, 1.0, 1.0, 0.5)?;
    let nf = besov_norm(f, &spec)?;
    let ng = besov_norm(g, &spec)?;
    if nf == 0.0 || ng == 0.0 {
        return Ok(Ratio::Undefined);
    }
    let fg = dealiased_product(f, g)?;
    Ok(Ratio::of(besov_norm(&fg, &spec)?, nf * ng))
}

/// Largest `l^1` norm over blocks of the discrete convolution kernel of
/// `Delta^h_j Delta^v_k`; by Young's inequality it bounds
/// `||Delta_{jk} f||_p / ||f||_p` on the grid for every `p`.
pub fn max_block_kernel_l1(b: &crate::grid::BoxSpec) -> Result<f64> {
    let geo = ShellGeometry::new(b);
    let mut best: f64 = 0.0;
    let dv = b.cell_volume();
    let mut tr = Transformer::new(*b);
    for idx in dyadic_range(b).indices() {
        let (wh, wv) = geo.weights(idx);
        let nxy = wh.len();
        let mut k = SpectralField::zeros(*b);
        for (n, c) in k.coeffs_mut().iter_mut().enumerate() {
            *c = (wh[n % nxy] * wv[n / nxy] * dv).into();
        }
        let u = tr.to_physical(&k)?;
        best = best.max(u.iter().map(|x| x.abs()).sum::<f64>());
    }
    Ok(best)
}

/// `(||f||_p / ||f||_{B^{0,0}_{p,1}}, ||f||_{B^{0,0}_{p,inf}} / ||f||_p)`.
pub fn embedding_ratios(f: &SpectralField, p: f64) -> Result<(Ratio, Ratio)> {
    let blocks = block_norms(&[f], p)?;
    let b1 = besov_from_blocks(&blocks, &BesovSpec::new(p, 1.0, 0.0, 0.0)?);
    let binf = besov_from_blocks(&blocks, &BesovSpec::new(p, f64::INFINITY, 0.0, 0.0)?);
    let lp = lp_norm(f, p)?;
    Ok((Ratio::of(lp, b1), Ratio::of(binf, lp)))
}

/// `lhs / rhs` of the interpolation inequality
/// `||f||_{B^{s,sigma}} <= ||f||_{B^{s1,sigma1}}^theta ||f||_{B^{s2,sigma2}}^{1-theta}`.
pub fn interpolation_ratio(
    f: &SpectralField,
    p: f64,
    q: f64,
    end1: (f64, f64),
    end2: (f64, f64),
    theta: f64,
) -> Result<Ratio> {
    let blocks = block_norms(&[f], p)?;
    let mid = (
        theta * end1.0 + (1.0 - theta) * end2.0,
        theta * end1.1 + (1.0 - theta) * end2.1,
    );
    let n = |s: (f64, f64)| BesovSpec::new(p, q, s.0, s.1).map(|sp| besov_from_blocks(&blocks, &sp));
    let lhs = n(mid)?;
    let rhs = n(end1)?.powf(theta) * n(end2)?.powf(1.0 - theta);
    Ok(Ratio::of(lhs, rhs))
}

/// Ratio of the Besov norm of `P_h (f, g)` to that of `(f, g)`.
pub fn riesz_multiplier_ratio(f: &SpectralField, g: &SpectralField, spec: &BesovSpec) -> Result<Ratio> {
    let (pf, pg) = crate::linear::helmholtz_h(f, g);
    Ok(Ratio::of(
        besov_norm_vector(&[&pf, &pg], spec)?,
        besov_norm_vector(&[f, g], spec)?,
    ))
}
