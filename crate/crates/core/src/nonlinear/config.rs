use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// RK4 on the skew and nonlinear terms, exact horizontal heat factor.
    IntegratingFactorRk4,
    /// RK4 on the nonlinear term only, exact linear propagator as the factor.
    ExponentialRk4,
}

impl Scheme {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "if-rk4" | "rk4-if" | "integrating-factor" => Ok(Self::IntegratingFactorRk4),
            "etd-rk4" | "exponential" => Ok(Self::ExponentialRk4),
            _ => Err(Error::Config(format!("unknown scheme '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::IntegratingFactorRk4 => "if-rk4",
            Self::ExponentialRk4 => "etd-rk4",
        }
    }
}

/// RK4 stability limit on the imaginary axis.
pub const RK4_IMAG_LIMIT: f64 = 2.8;

#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    pub dt: f64,
    pub t_end: f64,
    pub dealias: f64,
    pub scheme: Scheme,
    pub snapshot_stride: usize,
    /// When false the advective flux is switched off (linear diagnostic mode).
    pub nonlinear: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            dt: 0.01,
            t_end: 1.0,
            dealias: 2.0 / 3.0,
            scheme: Scheme::IntegratingFactorRk4,
            snapshot_stride: 10,
            nonlinear: true,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("t_end = {} must be nonnegative", self.t_end)));
        }
        if !(self.dealias > 0.0 && self.dealias <= 1.0) {
            return Err(Error::Config(format!("dealias = {} outside (0, 1]", self.dealias)));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::Config("snapshot_stride must be positive".into()));
        }
        // the skew part has purely imaginary eigenvalues of modulus <= 1
        if self.scheme == Scheme::IntegratingFactorRk4 && self.dt > RK4_IMAG_LIMIT {
            return Err(Error::Config(format!(
                "dt = {} exceeds the RK4 limit {RK4_IMAG_LIMIT} for the stratification term",
                self.dt
            )));
        }
        Ok(())
    }

    /// Number of steps; the last output lands exactly on `t_end`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize
    }

    /// Step actually taken: `t_end / steps`, never larger than `dt`.
    pub fn effective_dt(&self) -> f64 {
        match self.steps() {
            0 => self.dt,
            n => self.t_end / n as f64,
        }
    }
}
