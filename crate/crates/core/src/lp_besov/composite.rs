//! Composite norms: `X^{s1,s2} = H^{s1} + L^1_{x_h} W^{s2,1}_{x_3}` and the
//! time-weighted `Y_eps` norm over a stored history.

use super::besov::{besov_norm_vector, BesovSpec};
use crate::error::{Error, Result};
use crate::grid::norms::{lp_norm_vector, magnitudes, mixed_from_samples, sobolev_norm};
use crate::grid::{BoussinesqState, SpectralField, Transformer};
use crate::series::NormTable;

/// Exponent probe set standing in for `sup_{2 <= p <= inf}`.
pub const DEFAULT_P_SET: [f64; 6] = [2.0, 3.0, 4.0, 6.0, 10.0, f64::INFINITY];

/// `A_eps(p) = min{(3/4 - eps)(1 - 2/p), 1/4}`.
pub fn a_eps(eps: f64, p: f64) -> f64 {
    ((0.75 - eps) * (1.0 - 2.0 / p)).min(0.25)
}

fn one_minus_inv(p: f64) -> f64 {
    1.0 - 1.0 / p
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CompositeNormSpec {
    X { s1: u32, s2: u32 },
    Y { eps: f64 },
}

impl CompositeNormSpec {
    pub fn y(eps: f64) -> Result<Self> {
        if eps > 0.0 && eps < 0.25 {
            Ok(Self::Y { eps })
        } else {
            Err(Error::RejectedInput(format!("eps = {eps} outside (0, 1/4)")))
        }
    }
}

/// `||f||_{H^{s1}} + sum_{m <= s2} ||d_3^m f||_{L^1}` for a (vector) field.
pub fn x_norm(fields: &[&SpectralField], s1: u32, s2: u32) -> Result<f64> {
    let Some(first) = fields.first() else {
        return Ok(0.0);
    };
    let b = *first.box_spec();
    let mut t = Transformer::new(b);
    let mut orders = Vec::new();
    for m in 0..=s2 {
        let d: Vec<SpectralField> = fields.iter().map(|f| f.derivative([0, 0, m])).collect();
        let phys = t.to_physical_many(&d);
        let refs: Vec<&[f64]> = phys.iter().map(|v| v.as_slice()).collect();
        orders.push(magnitudes(&refs));
    }
    let refs: Vec<&[f64]> = orders.iter().map(|v| v.as_slice()).collect();
    Ok(sobolev_norm(fields, s1) + mixed_from_samples(&refs, &b, 1.0, 1.0))
}

pub const H_ALPHAS: [[u32; 3]; 3] = [[0, 0, 0], [1, 0, 0], [0, 1, 0]];
pub const ALPHAS_LE1: [[u32; 3]; 4] = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]];

fn h_order(a: [u32; 3]) -> f64 {
    (a[0] + a[1]) as f64
}

/// One `sup` group of the `Y_eps` norm: the supremum over time (and over the
/// listed entries) of `(1+t)^{exponent} * value`.
#[derive(Clone, Debug, PartialEq)]
pub struct YGroup {
    pub entries: Vec<(String, f64, [u32; 3], f64)>,
}

fn group(entries: Vec<(&str, f64, [u32; 3], f64)>) -> YGroup {
    YGroup {
        entries: entries
            .into_iter()
            .map(|(c, p, a, e)| (c.to_string(), p, a, e))
            .collect(),
    }
}

/// The summands of the `Y_eps` norm.
pub fn y_groups(eps: f64, p_set: &[f64]) -> Vec<YGroup> {
    let mut g = vec![
        group(vec![("H8", 2.0, [0, 0, 0], 0.0)]),
        group(vec![("B_vh_theta", 2.0, [0, 0, 0], 1.0)]),
        group(vec![("B_v3", 2.0, [0, 0, 0], 1.25)]),
    ];
    for k in 0..=4 {
        for a in H_ALPHAS {
            let alpha = [a[0], a[1], k];
            g.push(group(vec![("vh_theta", 2.0, alpha, 0.5 + h_order(a) / 2.0)]));
            g.push(group(vec![("v3", 2.0, alpha, 0.75 + h_order(a) / 2.0)]));
        }
    }
    for a in ALPHAS_LE1 {
        let base = |p: f64| one_minus_inv(p) + h_order(a) / 2.0;
        g.push(group(p_set.iter().map(|&p| ("vh", p, a, base(p))).collect()));
        g.push(group(
            p_set
                .iter()
                .map(|&p| ("theta", p, a, base(p) + a_eps(0.0, p)))
                .collect(),
        ));
    }
    for a in H_ALPHAS {
        let e = |p: f64| one_minus_inv(p) + h_order(a) / 2.0 + 0.25 + a_eps(eps, p);
        g.push(group(p_set.iter().map(|&p| ("v3", p, a, e(p))).collect()));
    }
    g
}

fn l2_spectral(fields: &[&SpectralField], alpha: [u32; 3]) -> f64 {
    fields
        .iter()
        .map(|f| f.derivative(alpha).plancherel_sq())
        .sum::<f64>()
        .sqrt()
}

/// Every quantity the `Y_eps` norm reads, for one state.
pub fn y_records(state: &BoussinesqState, p_set: &[f64]) -> Result<NormTable> {
    let t = state.time;
    let [v1, v2, v3, th] = &state.fields;
    let mut out = NormTable::default();
    out.push(t, "H8", 2.0, [0, 0, 0], sobolev_norm(&[v1, v2, v3, th], 8));
    let b12 = BesovSpec::new(2.0, 1.0, 1.0, 0.5)?;
    out.push(t, "B_vh_theta", 2.0, [0, 0, 0], besov_norm_vector(&[v1, v2, th], &b12)?);
    out.push(t, "B_v3", 2.0, [0, 0, 0], besov_norm_vector(&[v3], &b12)?);
    for k in 0..=4 {
        for a in H_ALPHAS {
            let alpha = [a[0], a[1], k];
            out.push(t, "vh_theta", 2.0, alpha, l2_spectral(&[v1, v2, th], alpha));
            out.push(t, "v3", 2.0, alpha, l2_spectral(&[v3], alpha));
        }
    }
    let b = *state.box_spec();
    let mut tr = Transformer::new(b);
    for a in ALPHAS_LE1 {
        let phys = tr.to_physical_many(&[v1.derivative(a), v2.derivative(a), th.derivative(a)]);
        let v3p = (a[2] == 0).then(|| tr.to_physical_many(&[v3.derivative(a)]));
        for &p in p_set {
            out.push(t, "vh", p, a, lp_norm_vector(&[&phys[0], &phys[1]], &b, p)?);
            out.push(t, "theta", p, a, lp_norm_vector(&[&phys[2]], &b, p)?);
            if let Some(v) = &v3p {
                if p != 2.0 {
                    out.push(t, "v3", p, a, lp_norm_vector(&[&v[0]], &b, p)?);
                }
            }
        }
    }
    Ok(out)
}

/// `Y_eps(T1, T2)` from stored records with `T1 <= t < T2`.
pub fn y_norm(table: &NormTable, eps: f64, p_set: &[f64], t1: f64, t2: f64) -> Result<f64> {
    CompositeNormSpec::y(eps)?;
    let times: Vec<f64> = table
        .times()
        .into_iter()
        .filter(|&t| t >= t1 && t < t2)
        .collect();
    if times.is_empty() {
        return Err(Error::IncompleteHistory(format!("no snapshots in [{t1}, {t2})")));
    }
    let mut total = 0.0;
    for g in y_groups(eps, p_set) {
        let mut sup: f64 = 0.0;
        for (channel, p, alpha, e) in &g.entries {
            for &t in &times {
                let v = table.value_at(t, channel, *p, *alpha).ok_or_else(|| {
                    Error::IncompleteHistory(format!(
                        "channel {channel} p={} alpha={:?} missing at t={t}",
                        crate::series::format_p(*p),
                        alpha
                    ))
                })?;
                sup = sup.max((1.0 + t).powf(*e) * v);
            }
        }
        total += sup;
    }
    Ok(total)
}

/// `composite_norm` over a list of states: X uses the last state, Y the whole
/// history.
pub fn composite_norm(history: &[BoussinesqState], spec: &CompositeNormSpec) -> Result<f64> {
    match *spec {
        CompositeNormSpec::X { s1, s2 } => {
            let s = history
                .last()
                .ok_or_else(|| Error::IncompleteHistory("empty history".into()))?;
            let f: Vec<&SpectralField> = s.fields.iter().collect();
            x_norm(&f, s1, s2)
        }
        CompositeNormSpec::Y { eps } => {
            let mut table = NormTable::default();
            for s in history {
                table.extend(y_records(s, &DEFAULT_P_SET)?);
            }
            let t2 = history.iter().map(|s| s.time).fold(f64::NEG_INFINITY, f64::max);
            y_norm(&table, eps, &DEFAULT_P_SET, 0.0, t2 + 1.0)
        }
    }
}
