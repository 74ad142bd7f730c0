//! Norm channels measured by the decay campaigns.
//!
//! A channel is a component, a derivative order `(alpha_h, alpha_3)` and an
//! exponent `p`. The horizontal derivative channel (`alpha_h = 1`) measures the
//! pointwise magnitude of the full horizontal gradient; in tables it is
//! stored under the multi-index `100`.

use crate::error::{Error, Result};
use crate::grid::norms::lp_norm_vector;
use crate::grid::{BoussinesqState, SpectralField, Transformer};
use crate::linear::projectors::helmholtz_h;
use crate::linear::rates::Component;
use crate::series::{format_p, parse_p, NormTable};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Channel {
    pub component: Component,
    pub alpha_h: u32,
    pub alpha_3: u32,
    pub p: f64,
}

impl Channel {
    pub fn new(component: Component, alpha_h: u32, alpha_3: u32, p: f64) -> Result<Self> {
        if !component.derivatives().contains(&(alpha_h, alpha_3)) {
            return Err(Error::RejectedInput(format!(
                "derivative ({alpha_h}, {alpha_3}) is not measured for {}",
                component.name()
            )));
        }
        if !(p >= 1.0) {
            return Err(Error::RejectedInput(format!("exponent p = {p} outside [1, inf]")));
        }
        Ok(Self {
            component,
            alpha_h,
            alpha_3,
            p,
        })
    }

    /// Multi-index under which the channel is stored in a [`NormTable`].
    pub fn table_alpha(&self) -> [u32; 3] {
        [self.alpha_h, 0, self.alpha_3]
    }

    pub fn label(&self) -> String {
        format!(
            "{}[ah={},a3={},p={}]",
            self.component.name(),
            self.alpha_h,
            self.alpha_3,
            format_p(self.p)
        )
    }

    /// Inverse of [`Channel::label`]; also accepts `name:ah:a3:p`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::RejectedInput(format!("bad channel '{s}' (e.g. v3[ah=0,a3=0,p=2] or v3:0:0:2)"));
        let s = s.trim();
        let (name, parts): (&str, Vec<&str>) = if let Some(open) = s.find('[') {
            let inner = s[open + 1..].strip_suffix(']').ok_or_else(bad)?;
            let mut vals = Vec::new();
            for (kv, key) in inner.split(',').zip(["ah", "a3", "p"]) {
                let (k, v) = kv.split_once('=').ok_or_else(bad)?;
                if k.trim() != key {
                    return Err(bad());
                }
                vals.push(v);
            }
            (&s[..open], vals)
        } else {
            let mut it = s.split(':');
            let name = it.next().ok_or_else(bad)?;
            (name, it.collect())
        };
        if parts.len() != 3 {
            return Err(bad());
        }
        let component = Component::parse(name).ok_or_else(bad)?;
        let ah = parts[0].trim().parse().map_err(|_| bad())?;
        let a3 = parts[1].trim().parse().map_err(|_| bad())?;
        let p = parse_p(parts[2])?;
        Self::new(component, ah, a3, p)
    }

    /// Every channel for the given probe set.
    pub fn all(p_set: &[f64]) -> Vec<Channel> {
        let mut out = Vec::new();
        for c in Component::ALL {
            for &(ah, a3) in c.derivatives() {
                for &p in p_set {
                    out.push(Channel {
                        component: c,
                        alpha_h: ah,
                        alpha_3: a3,
                        p,
                    });
                }
            }
        }
        out
    }
}

/// Vector-valued spectral fields of one component.
pub fn component_fields(state: &BoussinesqState, c: Component) -> Vec<SpectralField> {
    let [v1, v2, v3, th] = &state.fields;
    match c {
        Component::PhVh => {
            let (p1, p2) = helmholtz_h(v1, v2);
            vec![p1, p2]
        }
        Component::CurlfreeVh => {
            let (p1, p2) = helmholtz_h(v1, v2);
            vec![v1.sub(&p1), v2.sub(&p2)]
        }
        Component::V3 => vec![v3.clone()],
        Component::Theta => vec![th.clone()],
        Component::D3V3 => vec![v3.derivative([0, 0, 1])],
    }
}

/// Fields whose pointwise Euclidean magnitude defines the channel.
fn derivative_fields(fields: &[SpectralField], alpha_h: u32, alpha_3: u32) -> Vec<SpectralField> {
    let mut out = Vec::new();
    for f in fields {
        if alpha_h == 1 {
            out.push(f.derivative([1, 0, alpha_3]));
            out.push(f.derivative([0, 1, alpha_3]));
        } else {
            out.push(f.derivative([0, 0, alpha_3]));
        }
    }
    out
}

/// `||d^alpha channel(t)||_{L^p}` for all `p` in `p_set`.
pub fn channel_values(
    state: &BoussinesqState,
    component: Component,
    alpha_h: u32,
    alpha_3: u32,
    p_set: &[f64],
    tr: &mut Transformer,
) -> Result<Vec<f64>> {
    let fields = derivative_fields(&component_fields(state, component), alpha_h, alpha_3);
    let mut phys = Vec::with_capacity(fields.len());
    for f in &fields {
        phys.push(tr.to_physical(f)?);
    }
    let refs: Vec<&[f64]> = phys.iter().map(|v| v.as_slice()).collect();
    p_set
        .iter()
        .map(|&p| lp_norm_vector(&refs, state.box_spec(), p))
        .collect()
}

/// All channel norms of one state, tagged with its time.
pub fn channel_records(state: &BoussinesqState, p_set: &[f64]) -> Result<NormTable> {
    let mut tr = Transformer::new(*state.box_spec());
    let mut out = NormTable::default();
    for c in Component::ALL {
        for &(ah, a3) in c.derivatives() {
            let vals = channel_values(state, c, ah, a3, p_set, &mut tr)?;
            for (&p, v) in p_set.iter().zip(vals) {
                out.push(state.time, c.name(), p, [ah, 0, a3], v);
            }
        }
    }
    Ok(out)
}
