use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic box `[0, L1) x [0, L2) x [0, L3)` with `n_a` points per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxSpec {
    n: [usize; 3],
    len: [f64; 3],
}

impl BoxSpec {
    pub fn new(n: [usize; 3], len: [f64; 3]) -> Result<Self> {
        for a in 0..3 {
            if n[a] < 4 || n[a] % 2 != 0 {
                return Err(Error::RejectedInput(format!(
                    "axis {a}: point count {} must be even and >= 4",
                    n[a]
                )));
            }
            if !(len[a] > 0.0 && len[a].is_finite()) {
                return Err(Error::RejectedInput(format!(
                    "axis {a}: side length {} must be positive",
                    len[a]
                )));
            }
        }
        Ok(Self { n, len })
    }

    /// Cube of side `l` with `n` points per axis.
    pub fn cube(n: usize, l: f64) -> Result<Self> {
        Self::new([n; 3], [l; 3])
    }

    pub fn n(&self) -> [usize; 3] {
        self.n
    }

    pub fn lengths(&self) -> [f64; 3] {
        self.len
    }

    pub fn total(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.len[axis] / self.n[axis] as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing(0) * self.spacing(1) * self.spacing(2)
    }

    pub fn volume(&self) -> f64 {
        self.len[0] * self.len[1] * self.len[2]
    }

    /// Linear index with the first axis fastest.
    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.n[0] * (j + self.n[1] * k)
    }

    /// Index of the mode `-xi` for the mode stored at `idx`.
    #[inline]
    pub fn mirror_index(&self, i: usize, j: usize, k: usize) -> usize {
        let m = |x: usize, n: usize| (n - x) % n;
        self.index(m(i, self.n[0]), m(j, self.n[1]), m(k, self.n[2]))
    }

    /// Signed integer wavenumber in `[-n/2, n/2)`.
    #[inline]
    pub fn wrap(i: usize, n: usize) -> i64 {
        if i < n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    pub fn wavenumber(&self, axis: usize, i: usize) -> f64 {
        2.0 * PI * Self::wrap(i, self.n[axis]) as f64 / self.len[axis]
    }

    pub fn is_nyquist(&self, axis: usize, i: usize) -> bool {
        i == self.n[axis] / 2
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        i as f64 * self.spacing(axis)
    }

    /// Largest wavenumber magnitude resolved on each axis.
    pub fn max_wavenumber(&self, axis: usize) -> f64 {
        PI * self.n[axis] as f64 / self.len[axis]
    }

    pub fn wavenumbers(&self) -> Wavenumbers {
        Wavenumbers::new(self)
    }

    /// Same box with every point count multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(
            [self.n[0] * factor, self.n[1] * factor, self.n[2] * factor],
            self.len,
        )
    }
}

/// Per-axis wavenumber tables.
///
/// `k` holds the true lattice wavenumbers; `dk` is the symbol used for odd
/// derivatives, which vanishes on the Nyquist index so that derivatives of
/// real fields stay real.
#[derive(Clone, Debug)]
pub struct Wavenumbers {
    pub k: [Vec<f64>; 3],
    pub dk: [Vec<f64>; 3],
}

impl Wavenumbers {
    fn new(b: &BoxSpec) -> Self {
        let table = |a: usize, deriv: bool| -> Vec<f64> {
            (0..b.n[a])
                .map(|i| {
                    if deriv && b.is_nyquist(a, i) {
                        0.0
                    } else {
                        b.wavenumber(a, i)
                    }
                })
                .collect()
        };
        Self {
            k: [table(0, false), table(1, false), table(2, false)],
            dk: [table(0, true), table(1, true), table(2, true)],
        }
    }

    #[inline]
    pub fn xi(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [self.k[0][i], self.k[1][j], self.k[2][k]]
    }

    #[inline]
    pub fn dxi(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [self.dk[0][i], self.dk[1][j], self.dk[2][k]]
    }
}

/// Visits every lattice mode in storage order as `(linear index, i, j, k)`.
pub fn for_each_mode(b: &BoxSpec, mut f: impl FnMut(usize, usize, usize, usize)) {
    let [nx, ny, nz] = b.n();
    let mut idx = 0;
    for k in 0..nz {
        for j in 0..ny {
            for i in 0..nx {
                f(idx, i, j, k);
                idx += 1;
            }
        }
    }
}
