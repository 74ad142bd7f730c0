use std::fmt;

use super::channels::Channel;
use crate::error::{Error, Result};
use crate::series::NormTable;

/// Norms below this are treated as quadrature noise.
pub const NORM_FLOOR: f64 = 1e-13;
pub const MIN_SAMPLES: usize = 8;
pub const DEFAULT_TOLERANCE: f64 = 0.15;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitWindow {
    pub t0: f64,
    pub t1: f64,
}

impl FitWindow {
    /// `[t0, min(wrap, t_end)]` with the wrap-around time `min(L) / (2 c_max)`,
    /// `c_max = 1`.
    pub fn for_box(lengths: [f64; 3], t0: f64, t_end: f64) -> Result<Self> {
        let wrap = lengths.iter().cloned().fold(f64::INFINITY, f64::min) / 2.0;
        let t1 = wrap.min(t_end);
        if !(t1 > t0) {
            return Err(Error::Window(format!(
                "empty fit window [{t0}, {t1}] (wrap-around at {wrap}, t_end = {t_end})"
            )));
        }
        Ok(Self { t0, t1 })
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t0 - 1e-9 && t <= self.t1 + 1e-9
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayFit {
    pub channel: Channel,
    pub t0: f64,
    pub t1: f64,
    pub slope: f64,
    /// RMS deviation of the log-log regression.
    pub residual: f64,
    pub theory: f64,
    pub samples: usize,
    pub verdict: Verdict,
}

/// Least-squares slope and RMS residual of `y` against `x`.
pub fn fit_line(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let c = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - c - slope * a).powi(2)).sum();
    (slope, (rss / n).sqrt())
}

/// Slope of `log ||channel(t)||` against `log(1+t)` over the window; PASS when
/// the decay is at least `theory - tolerance` fast.
pub fn measure_decay(
    table: &NormTable,
    channel: Channel,
    window: FitWindow,
    theory: f64,
    tolerance: f64,
) -> Result<DecayFit> {
    let series: Vec<(f64, f64)> = table
        .series(channel.component.name(), channel.p, channel.table_alpha())
        .into_iter()
        .filter(|(t, _)| window.contains(*t))
        .collect();
    if series.len() < MIN_SAMPLES {
        return Err(Error::Window(format!(
            "{}: {} samples in [{}, {}], need {MIN_SAMPLES}",
            channel.label(),
            series.len(),
            window.t0,
            window.t1
        )));
    }
    let t0 = series.first().unwrap().0;
    let t1 = series.last().unwrap().0;
    if series.iter().any(|(_, v)| !(*v > NORM_FLOOR)) {
        return Ok(DecayFit {
            channel,
            t0,
            t1,
            slope: f64::NAN,
            residual: f64::NAN,
            theory,
            samples: series.len(),
            verdict: Verdict::Inconclusive,
        });
    }
    let x: Vec<f64> = series.iter().map(|(t, _)| (1.0 + t).ln()).collect();
    let y: Vec<f64> = series.iter().map(|(_, v)| v.ln()).collect();
    let (slope, residual) = fit_line(&x, &y);
    let verdict = if slope <= theory + tolerance {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(DecayFit {
        channel,
        t0,
        t1,
        slope,
        residual,
        theory,
        samples: series.len(),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::rates::Component;

    fn table(f: impl Fn(f64) -> f64) -> NormTable {
        let mut t = NormTable::default();
        for i in 0..40 {
            let s = i as f64 * 2.0;
            t.push(s, "v3", 2.0, [0, 0, 0], f(s));
        }
        t
    }

    fn ch() -> Channel {
        Channel::new(Component::V3, 0, 0, 2.0).unwrap()
    }

    #[test]
    fn exact_power_law_is_recovered() {
        let w = FitWindow { t0: 5.0, t1: 60.0 };
        let fit = measure_decay(&table(|t| 3.0 * (1.0 + t).powf(-0.75)), ch(), w, -0.75, 0.15).unwrap();
        assert!((fit.slope + 0.75).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert_eq!(fit.verdict, Verdict::Pass);
        let slow = measure_decay(&table(|t| (1.0 + t).powf(-0.3)), ch(), w, -0.75, 0.15).unwrap();
        assert_eq!(slow.verdict, Verdict::Fail);
    }

    #[test]
    fn floor_gives_inconclusive() {
        let w = FitWindow { t0: 5.0, t1: 60.0 };
        let fit = measure_decay(&table(|_| 0.0), ch(), w, -0.75, 0.15).unwrap();
        assert_eq!(fit.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn short_or_empty_windows_are_errors() {
        let w = FitWindow { t0: 5.0, t1: 10.0 };
        assert!(matches!(
            measure_decay(&table(|t| 1.0 / (1.0 + t)), ch(), w, -1.0, 0.15),
            Err(Error::Window(_))
        ));
        assert!(FitWindow::for_box([8.0, 8.0, 8.0], 5.0, 100.0).is_err());
        let w = FitWindow::for_box([128.0, 128.0, 100.0], 5.0, 80.0).unwrap();
        assert_eq!(w.t1, 50.0);
    }
}
