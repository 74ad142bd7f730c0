//! Smooth dyadic cut-off with support in `[1/2, 2]`.
//!
//! `phi(r) = chi(r/2) - chi(r)` where `chi` is a smooth step equal to 1 on
//! `[0, 1/2]` and 0 on `[1, inf)`. The dyadic sum telescopes, so the partition
//! identity holds up to rounding without any normalization.

fn h(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// Smooth transition from 0 (x <= 0) to 1 (x >= 1).
pub fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = h(x);
        a / (a + h(1.0 - x))
    }
}

/// Low-pass profile: 1 on `[0, 1/2]`, 0 on `[1, inf)`.
pub fn chi(r: f64) -> f64 {
    smooth_step(2.0 * (1.0 - r))
}

/// Dyadic shell profile `phi`.
pub fn phi(r: f64) -> f64 {
    let r = r.abs();
    if r <= 0.5 || r >= 2.0 {
        0.0
    } else if r <= 1.0 {
        // 1 - chi(r), written without cancellation
        smooth_step(2.0 * r - 1.0)
    } else {
        chi(r / 2.0)
    }
}

/// Fattened profile `phi(r/2) + phi(r) + phi(2r)`, equal to 1 on `[1/2, 2]`.
pub fn phi_tilde(r: f64) -> f64 {
    phi(r / 2.0) + phi(r) + phi(2.0 * r)
}

/// `sum_j phi(2^{-j} r)` over the (at most two) shells containing `r > 0`.
pub fn partition_sum(r: f64) -> f64 {
    let j0 = r.log2().floor() as i32;
    (j0 - 1..=j0 + 2).map(|j| phi(r * (-j as f64).exp2())).sum()
}

/// Evaluation handle for the fixed profile, exposing tabulated samples.
#[derive(Clone, Copy, Debug, Default)]
pub struct DyadicProfile;

impl DyadicProfile {
    pub fn phi(&self, r: f64) -> f64 {
        phi(r)
    }

    pub fn phi_tilde(&self, r: f64) -> f64 {
        phi_tilde(r)
    }

    /// `(r, phi(r), phi_tilde(r))` on `n` uniform points of `[0, r_max]`.
    pub fn samples(&self, n: usize, r_max: f64) -> Vec<(f64, f64, f64)> {
        (0..n)
            .map(|i| {
                let r = r_max * i as f64 / (n - 1).max(1) as f64;
                (r, phi(r), phi_tilde(r))
            })
            .collect()
    }
}
