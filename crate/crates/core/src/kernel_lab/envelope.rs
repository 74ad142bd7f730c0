use super::quadrature::{phase, psi, KernelEvaluator, SUPPORT};
use crate::error::{Error, Result};
use crate::harness::decay::fit_line;

/// Decay exponent of the envelope and the accepted slope band.
pub const ENVELOPE_EXPONENT: f64 = -1.5;
pub const SLOPE_BAND: (f64, f64) = (-1.7, -1.3);
/// Scaled-time range of the fit.
pub const SCALED_RANGE: (f64, f64) = (4.0, 40.0);

/// Time scaling of the envelope: `2^{2m} t` for `m <= 0`, `2^{-m} t` for `m >= 1`.
pub fn scaled_time(m: i32, t: f64) -> f64 {
    if m <= 0 {
        4f64.powi(m) * t
    } else {
        2f64.powi(-m) * t
    }
}

pub fn unscaled_time(m: i32, s: f64) -> f64 {
    s / scaled_time(m, 1.0)
}

/// `(d p_m / d rho, d p_m / d zeta)`.
pub fn phase_gradient(m: i32, rho: f64, zeta: f64) -> (f64, f64) {
    let e = 4f64.powi(m);
    let d = rho * rho + e * zeta * zeta;
    let d32 = d * d.sqrt();
    (e * zeta * zeta / d32, -rho * e * zeta / d32)
}

/// Quasi-random frequencies in the bulk of `supp psi` (golden-ratio
/// sequence), used to place stationary-phase probes.
pub fn probe_frequencies(count: usize) -> Vec<(f64, f64)> {
    let g = 1.324_717_957_244_746; // plastic number
    let (a1, a2) = (1.0 / g, 1.0 / (g * g));
    let (lo, hi) = (SUPPORT.0.ln(), SUPPORT.1.ln());
    let mut out = Vec::with_capacity(count);
    let mut n = 0u64;
    while out.len() < count {
        n += 1;
        let u = (0.5 + a1 * n as f64).fract();
        let v = (0.5 + a2 * n as f64).fract();
        let rho = (lo + u * (hi - lo)).exp();
        let zeta = (lo + v * (hi - lo)).exp();
        if psi(rho, zeta) > 0.5 {
            out.push((rho, zeta));
        }
    }
    out
}

/// `x = 0` and the stationary-phase images `x = -t grad p_m(xi_k)` of the
/// probe frequencies. By cylindrical symmetry the horizontal image is placed
/// on the `x_1` axis.
pub fn probe_set(m: i32, t: f64, count: usize) -> Vec<[f64; 3]> {
    let mut out = vec![[0.0; 3]];
    for (rho, zeta) in probe_frequencies(count) {
        let (gr, gz) = phase_gradient(m, rho, zeta);
        out.push([(t * gr).abs(), 0.0, -t * gz]);
    }
    out
}

/// Resolution that keeps `t` below `t_max`.
pub fn resolution_for(t: f64, minimum: usize) -> usize {
    let need = (8.0 * t.abs()).ceil() as usize;
    let n = need.max(minimum);
    n + n % 2
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeRow {
    pub t: f64,
    pub scaled_t: f64,
    /// `max_x |J_m(t, x)|` over the probe set.
    pub max_abs: f64,
    pub argmax: [f64; 3],
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnvelopeReport {
    pub m: i32,
    pub rows: Vec<EnvelopeRow>,
    /// Slope of `log max|J|` against `log(scaled t)` over rows with positive time.
    pub slope: f64,
    pub residual: f64,
    pub passed: bool,
}

/// Envelope of `max_x |J_m(t, x)|` over `t_grid`, fitted against scaled time.
/// `x_probes` may be given explicitly; `None` uses [`probe_set`] with 40
/// stationary-phase images per time.
pub fn envelope_check(
    m: i32,
    t_grid: &[f64],
    x_probes: Option<&[[f64; 3]]>,
    min_resolution: usize,
) -> Result<EnvelopeReport> {
    let mut rows = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let ev = KernelEvaluator::new(m, t, resolution_for(t, min_resolution))?;
        let probes = match x_probes {
            Some(p) => p.to_vec(),
            None => probe_set(m, t, 40),
        };
        let mut best = (0.0, [0.0; 3]);
        for x in probes {
            let v = ev.eval_raw(x);
            let a = v.value.norm();
            if a > best.0 {
                // the maximizer has to be resolved; small values need not be
                ev.eval(x)?;
                best = (a, x);
            }
        }
        rows.push(EnvelopeRow {
            t,
            scaled_t: scaled_time(m, t),
            max_abs: best.0,
            argmax: best.1,
        });
    }
    let fit_rows: Vec<&EnvelopeRow> = rows.iter().filter(|r| r.t > 0.0).collect();
    if fit_rows.len() < 2 {
        return Err(Error::Window("envelope fit needs two positive times".into()));
    }
    let x: Vec<f64> = fit_rows.iter().map(|r| r.scaled_t.ln()).collect();
    let y: Vec<f64> = fit_rows.iter().map(|r| r.max_abs.ln()).collect();
    let (slope, residual) = fit_line(&x, &y);
    Ok(EnvelopeReport {
        m,
        rows,
        slope,
        residual,
        passed: slope >= SLOPE_BAND.0 && slope <= SLOPE_BAND.1,
    })
}

/// Log-spaced times whose scaled values cover [`SCALED_RANGE`].
pub fn default_time_grid(m: i32, count: usize) -> Vec<f64> {
    let (a, b) = SCALED_RANGE;
    (0..count)
        .map(|i| {
            let s = a * (b / a).powf(i as f64 / (count - 1) as f64);
            unscaled_time(m, s)
        })
        .collect()
}

/// Phase sanity check used by the probes: `p_m` is even in `zeta`.
pub fn phase_is_even(m: i32, rho: f64, zeta: f64) -> bool {
    phase(m, rho, zeta) == phase(m, rho, -zeta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_round_trips() {
        for m in -3..=3 {
            assert!((scaled_time(m, unscaled_time(m, 7.0)) - 7.0).abs() < 1e-12);
            assert!(phase_is_even(m, 1.0, 0.7));
        }
        assert_eq!(scaled_time(-2, 16.0), 1.0);
        assert_eq!(scaled_time(2, 16.0), 4.0);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let h = 1e-6;
        for (m, r, z) in [(0, 1.0, 1.0), (-2, 0.5, 3.0), (3, 2.0, 0.3)] {
            let (gr, gz) = phase_gradient(m, r, z);
            let fr = (phase(m, r + h, z) - phase(m, r - h, z)) / (2.0 * h);
            let fz = (phase(m, r, z + h) - phase(m, r, z - h)) / (2.0 * h);
            assert!((gr - fr).abs() < 1e-8 && (gz - fz).abs() < 1e-8);
        }
    }

    #[test]
    fn zero_time_row_equals_direct_evaluation() {
        let probes = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.5]];
        let rep = envelope_check(0, &[0.0, 4.0, 8.0], Some(&probes), 64).unwrap();
        let ev = KernelEvaluator::new(0, 0.0, 64).unwrap();
        let direct = probes
            .iter()
            .map(|&x| ev.eval_raw(x).value.norm())
            .fold(0.0, f64::max);
        assert!(rep.rows[0].max_abs.is_finite());
        assert_eq!(rep.rows[0].max_abs, direct);
    }

    #[test]
    fn m_two_envelope_decays_at_the_stationary_phase_rate() {
        let rep = envelope_check(2, &default_time_grid(2, 6), None, 64).unwrap();
        assert!(rep.rows.windows(2).all(|w| w[1].max_abs < w[0].max_abs));
        assert!(rep.passed, "slope {}", rep.slope);
    }
}
