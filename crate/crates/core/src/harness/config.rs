//! Line-based `key = value` experiment configuration.
//!
//! Keys: `grid` (three point counts), `box` (three side lengths), `dt`,
//! `t_end`, `amplitude`, `seed`, `dealias`, `snapshot_stride`, `mode`
//! (`linear`, `nonlinear` or `both`), `scheme` (`if-rk4`, `etd-rk4`), `data`
//! (`modulated-bump`, `random-band`), `scale_h`, `scale_v`, `kappa_v`, `p_set`
//! (`inf` allowed), `eps`, `t0` (start of the fit window). `#` starts a
//! comment.

use std::path::Path;
use std::str::FromStr;

use super::initial::{Construction, InitialData};
use crate::error::{Error, Result};
use crate::grid::BoxSpec;
use crate::lp_besov::composite::DEFAULT_P_SET;
use crate::nonlinear::{Scheme, SolverConfig};
use crate::series::{format_p, parse_p};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Linear,
    Nonlinear,
    Both,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Self::Linear),
            "nonlinear" => Ok(Self::Nonlinear),
            "both" => Ok(Self::Both),
            _ => Err(Error::Config(format!("unknown mode '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Nonlinear => "nonlinear",
            Self::Both => "both",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub grid: [usize; 3],
    pub box_len: [f64; 3],
    pub solver: SolverConfig,
    pub data: InitialData,
    pub mode: Mode,
    pub p_set: Vec<f64>,
    pub eps: f64,
    pub t0: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            grid: [128, 128, 64],
            box_len: [128.0, 128.0, 64.0],
            solver: SolverConfig {
                dt: 0.25,
                t_end: 32.0,
                scheme: Scheme::ExponentialRk4,
                snapshot_stride: 8,
                ..Default::default()
            },
            data: InitialData::default(),
            mode: Mode::Both,
            p_set: DEFAULT_P_SET.to_vec(),
            eps: 0.05,
            t0: 5.0,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'")))
}

fn triple<T: FromStr + Copy>(key: &str, v: &str) -> Result<[T; 3]> {
    let parts: Vec<&str> = v.split(|c: char| c.is_whitespace() || c == ',' || c == 'x')
        .filter(|s| !s.is_empty())
        .collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!("{key}: expected three values, got '{v}'")));
    }
    Ok([
        parse_num(key, parts[0])?,
        parse_num(key, parts[1])?,
        parse_num(key, parts[2])?,
    ])
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
            let (key, v) = (key.trim(), value.trim());
            match key {
                "grid" => c.grid = triple(key, v)?,
                "box" => c.box_len = triple(key, v)?,
                "dt" => c.solver.dt = parse_num(key, v)?,
                "t_end" => c.solver.t_end = parse_num(key, v)?,
                "dealias" => c.solver.dealias = parse_num(key, v)?,
                "snapshot_stride" => c.solver.snapshot_stride = parse_num(key, v)?,
                "scheme" => c.solver.scheme = Scheme::parse(v)?,
                "amplitude" => c.data.amplitude = parse_num(key, v)?,
                "seed" => c.data.seed = parse_num(key, v)?,
                "data" => c.data.construction = Construction::parse(v)?,
                "scale_h" => c.data.scale_h = parse_num(key, v)?,
                "scale_v" => c.data.scale_v = parse_num(key, v)?,
                "kappa_v" => c.data.kappa_v = parse_num(key, v)?,
                "mode" => c.mode = Mode::parse(v)?,
                "p_set" => {
                    c.p_set = v
                        .split(|ch: char| ch.is_whitespace() || ch == ',')
                        .filter(|s| !s.is_empty())
                        .map(parse_p)
                        .collect::<Result<_>>()
                        .map_err(|e| Error::Config(format!("p_set: {e}")))?
                }
                "eps" => c.eps = parse_num(key, v)?,
                "t0" => c.t0 = parse_num(key, v)?,
                _ => return Err(Error::Config(format!("line {}: unknown key '{key}'", lineno + 1))),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.box_spec()?;
        self.solver.validate()?;
        if self.p_set.is_empty() || self.p_set.iter().any(|&p| !(p >= 1.0)) {
            return Err(Error::Config("p_set must list exponents in [1, inf]".into()));
        }
        if !(self.eps > 0.0 && self.eps < 0.25) {
            return Err(Error::Config(format!("eps = {} outside (0, 1/4)", self.eps)));
        }
        if !(self.t0 >= 0.0) {
            return Err(Error::Config(format!("t0 = {} must be nonnegative", self.t0)));
        }
        Ok(())
    }

    pub fn box_spec(&self) -> Result<BoxSpec> {
        BoxSpec::new(self.grid, self.box_len).map_err(|e| Error::Config(e.to_string()))
    }

    /// Canonical text form; parsing it gives back the same configuration.
    pub fn to_text(&self) -> String {
        let s = &self.solver;
        let d = &self.data;
        let ps: Vec<String> = self.p_set.iter().map(|&p| format_p(p)).collect();
        format!(
            "grid = {} {} {}\nbox = {} {} {}\ndt = {}\nt_end = {}\ndealias = {}\nsnapshot_stride = {}\nscheme = {}\n\
             amplitude = {}\nseed = {}\ndata = {}\nscale_h = {}\nscale_v = {}\nkappa_v = {}\nmode = {}\np_set = {}\neps = {}\nt0 = {}\n",
            self.grid[0], self.grid[1], self.grid[2],
            self.box_len[0], self.box_len[1], self.box_len[2],
            s.dt, s.t_end, s.dealias, s.snapshot_stride, s.scheme.name(),
            d.amplitude, d.seed, d.construction.name(), d.scale_h, d.scale_v, d.kappa_v,
            self.mode.name(), ps.join(" "), self.eps, self.t0
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_keys() {
        let text = "# small run\ngrid = 32 32 16\nbox = 64, 64, 64\ndt = 0.1\nt_end = 2\n\
                    amplitude = 0.5\nseed = 7\nmode = linear\np_set = 2 inf\nscheme = if-rk4\n";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.grid, [32, 32, 16]);
        assert_eq!(c.box_len, [64.0; 3]);
        assert_eq!(c.mode, Mode::Linear);
        assert_eq!(c.p_set, vec![2.0, f64::INFINITY]);
        assert_eq!(c.data.seed, 7);
        assert_eq!(c.solver.scheme, Scheme::IntegratingFactorRk4);
    }

    #[test]
    fn round_trips_through_text() {
        let c = ExperimentConfig::default();
        assert_eq!(ExperimentConfig::parse(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(ExperimentConfig::parse("colour = red").is_err());
        assert!(ExperimentConfig::parse("grid = 7 8 8").is_err());
        assert!(ExperimentConfig::parse("dt = -1").is_err());
        assert!(ExperimentConfig::parse("dt 0.1").is_err());
    }
}
