//! Theoretical decay exponents of the linear and small-data nonlinear
//! solutions, as functions of the channel, derivative and `p`.

use crate::error::{Error, Result};
use crate::lp_besov::composite::a_eps;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    PhVh,
    CurlfreeVh,
    V3,
    Theta,
    D3V3,
}

impl Component {
    pub const ALL: [Component; 5] = [
        Component::PhVh,
        Component::CurlfreeVh,
        Component::V3,
        Component::Theta,
        Component::D3V3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Component::PhVh => "Ph_vh",
            Component::CurlfreeVh => "curlfree_vh",
            Component::V3 => "v3",
            Component::Theta => "theta",
            Component::D3V3 => "d3_v3",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Derivatives `(alpha_h order, alpha_3)` covered by the estimates.
    pub fn derivatives(self) -> &'static [(u32, u32)] {
        match self {
            Component::PhVh | Component::CurlfreeVh | Component::Theta => &[(0, 0), (1, 0), (0, 1)],
            Component::V3 => &[(0, 0), (1, 0)],
            Component::D3V3 => &[(0, 0)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateEntry {
    pub component: Component,
    pub alpha_h: u32,
    pub alpha_3: u32,
    pub p: f64,
    pub linear: f64,
    pub nonlinear: f64,
}

/// Exponent `gamma` with `||channel(t)||_{L^p} = O(t^gamma)`.
pub fn exponent(component: Component, alpha_h: u32, p: f64, eps: f64, nonlinear: bool) -> f64 {
    let base = -(1.0 - 1.0 / p) - alpha_h as f64 / 2.0;
    let disp = 0.75 * (1.0 - 2.0 / p);
    match component {
        Component::PhVh => base,
        Component::CurlfreeVh | Component::Theta => {
            base - if nonlinear { a_eps(0.0, p) } else { disp }
        }
        Component::V3 => {
            base - 0.25
                - if nonlinear {
                    a_eps(eps, p)
                } else {
                    (0.75 - eps) * (1.0 - 2.0 / p)
                }
        }
        Component::D3V3 => {
            -(1.0 - 1.0 / p) - 0.5 - if nonlinear { a_eps(0.0, p) } else { disp }
        }
    }
}

pub fn decay_rate_table(eps: f64, p_set: &[f64]) -> Result<Vec<RateEntry>> {
    if !(eps > 0.0 && eps < 0.25) {
        return Err(Error::RejectedInput(format!("eps = {eps} outside (0, 1/4)")));
    }
    let mut out = Vec::new();
    for c in Component::ALL {
        for &(ah, a3) in c.derivatives() {
            for &p in p_set {
                out.push(RateEntry {
                    component: c,
                    alpha_h: ah,
                    alpha_3: a3,
                    p,
                    linear: exponent(c, ah, p, eps, false),
                    nonlinear: exponent(c, ah, p, eps, true),
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tabulated_examples() {
        assert_eq!(exponent(Component::PhVh, 0, 2.0, 0.05, false), -0.5);
        assert_eq!(exponent(Component::V3, 0, 2.0, 0.05, false), -0.75);
        assert_eq!(exponent(Component::Theta, 0, f64::INFINITY, 0.05, true), -1.25);
        assert_eq!(exponent(Component::Theta, 0, f64::INFINITY, 0.05, false), -1.75);
        assert!((exponent(Component::V3, 0, f64::INFINITY, 0.05, false) + 1.95).abs() < 1e-15);
        assert!(decay_rate_table(0.3, &[2.0]).is_err());
    }
}
