//! Duhamel decomposition of the nonlinear solution.
//!
//! The mild form is
//! `u(t) = e^{t Delta_h} e^{-tA} u0 - int_0^t e^{(t-tau) Delta_h} e^{-(t-tau) A} P~ N(tau) dtau`
//! and `e^{-sA} P~ = P_0 + e^{is omega} P_+ + e^{-is omega} P_-` off the
//! `xi_h = 0` line. Splitting `N` into its six flux pieces and the projections
//! into their rows gives the tagged terms; on the `xi_h = 0` line (where all
//! the 0-homogeneous symbols vanish) `A = 0` and the heat factor is 1, which
//! leaves the separate plane term `-int P~ N`.

use num_complex::Complex64;

use super::flux::FluxPieces;
use crate::error::{Error, Result};
use crate::grid::{for_each_mode, BoussinesqState, BoxSpec, SpectralField};
use crate::linear::eigen::{eigenprojection, Branch};
use crate::linear::projectors::helmholtz_h;
use crate::linear::propagate_linear;
use crate::linear::symbols::{horizontal_norm, omega};

/// Stored flux snapshots `N(tau_i)` at quadrature times.
#[derive(Clone, Debug)]
pub struct DuhamelLedger {
    pub box_spec: BoxSpec,
    pub dt_quad: f64,
    pub times: Vec<f64>,
    pub pieces: Vec<FluxPieces>,
}

impl DuhamelLedger {
    pub fn new(box_spec: BoxSpec, dt_quad: f64) -> Self {
        Self {
            box_spec,
            dt_quad,
            times: Vec::new(),
            pieces: Vec::new(),
        }
    }

    pub fn record(&mut self, t: f64, pieces: FluxPieces) {
        self.times.push(t);
        self.pieces.push(pieces);
    }

    /// Ledger entries with `tau <= t`, after checking coverage of `[0, t]`.
    fn window(&self, t: f64) -> Result<usize> {
        let tol = 1e-9 * self.dt_quad.max(t.abs());
        if self.times.first().map_or(true, |&t0| t0.abs() > tol) {
            return Err(Error::IncompleteLedger("no flux record at t = 0".into()));
        }
        let count = self.times.iter().take_while(|&&s| s <= t + tol).count();
        let last = self.times[count - 1];
        if (last - t).abs() > tol {
            return Err(Error::IncompleteLedger(format!(
                "no flux record at t = {t} (last covered time {last})"
            )));
        }
        for w in self.times[..count].windows(2) {
            if w[1] - w[0] > self.dt_quad * (1.0 + 1e-9) {
                return Err(Error::IncompleteLedger(format!(
                    "gap [{}, {}] exceeds dt_quad = {}",
                    w[0], w[1], self.dt_quad
                )));
            }
        }
        Ok(count)
    }

    /// Every other record, for quadrature-refinement studies.
    pub fn coarsened(&self) -> Self {
        let keep: Vec<usize> = (0..self.times.len()).step_by(2).collect();
        Self {
            box_spec: self.box_spec,
            dt_quad: 2.0 * self.dt_quad,
            times: keep.iter().map(|&i| self.times[i]).collect(),
            pieces: keep.iter().map(|&i| self.pieces[i].clone()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DuhamelFamily {
    VelH,
    VelV,
    Temp,
}

/// Term tags: `D1`, `D2` for `P_h v_h`, `D^{family}_{sigma, j}` for the
/// dispersive channels, and the `xi_h = 0` plane remainder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DuhamelTag {
    D1,
    D2,
    Branch { family: DuhamelFamily, branch: Branch, piece: usize },
    Plane,
}

impl DuhamelTag {
    /// All tags whose sum is the full nonlinear contribution.
    pub fn all() -> Vec<DuhamelTag> {
        let mut v = vec![DuhamelTag::D1, DuhamelTag::D2];
        for family in [DuhamelFamily::VelH, DuhamelFamily::VelV, DuhamelFamily::Temp] {
            for branch in [Branch::Plus, Branch::Minus] {
                for piece in 1..=6 {
                    v.push(DuhamelTag::Branch { family, branch, piece });
                }
            }
        }
        v.push(DuhamelTag::Plane);
        v
    }

    pub fn name(&self) -> String {
        match self {
            DuhamelTag::D1 => "D1".into(),
            DuhamelTag::D2 => "D2".into(),
            DuhamelTag::Plane => "plane".into(),
            DuhamelTag::Branch { family, branch, piece } => format!(
                "D_{}{}_{}",
                match family {
                    DuhamelFamily::VelH => "vel_h",
                    DuhamelFamily::VelV => "vel_v",
                    DuhamelFamily::Temp => "temp",
                },
                if *branch == Branch::Plus { "+" } else { "-" },
                piece
            ),
        }
    }

    /// Output rows of the 4-vector `(v1, v2, v3, theta)` the term lives in.
    fn rows(&self) -> std::ops::Range<usize> {
        match self {
            DuhamelTag::D1 | DuhamelTag::D2 => 0..2,
            DuhamelTag::Plane => 0..4,
            DuhamelTag::Branch { family, .. } => match family {
                DuhamelFamily::VelH => 0..2,
                DuhamelFamily::VelV => 2..3,
                DuhamelFamily::Temp => 3..4,
            },
        }
    }
}

fn trapezoid_weights(times: &[f64]) -> Vec<f64> {
    let n = times.len();
    let mut w = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let h = times[i + 1] - times[i];
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    w
}

/// Full 4-component Duhamel term for a tag at time `t`; rows outside the
/// tag's channel are zero.
fn term_full(ledger: &DuhamelLedger, tag: DuhamelTag, t: f64) -> Result<[SpectralField; 4]> {
    let b = ledger.box_spec;
    let mut out: [SpectralField; 4] = std::array::from_fn(|_| SpectralField::zeros(b));
    if t == 0.0 {
        return Ok(out);
    }
    let count = ledger.window(t)?;
    let times = &ledger.times[..count];
    let weights = trapezoid_weights(times);
    let w = b.wavenumbers();
    let rows = tag.rows();
    let mut acc = vec![[Complex64::default(); 4]; b.total()];
    for_each_mode(&b, |idx, i, j, k| {
        let xi = w.xi(i, j, k);
        let s = horizontal_norm(xi);
        let r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        let on_plane = s == 0.0;
        match tag {
            DuhamelTag::Plane => {
                if !on_plane || r2 == 0.0 {
                    return;
                }
                for (n, piece) in ledger.pieces[..count].iter().enumerate() {
                    let mut v = piece.total(idx);
                    let d = (v[0] * xi[0] + v[1] * xi[1] + v[2] * xi[2]) / r2;
                    for a in 0..3 {
                        v[a] -= d * xi[a];
                    }
                    for c in 0..4 {
                        acc[idx][c] -= v[c] * weights[n];
                    }
                }
            }
            DuhamelTag::D1 | DuhamelTag::D2 => {
                if on_plane {
                    return;
                }
                let piece_no = if tag == DuhamelTag::D1 { 1 } else { 2 };
                for (n, piece) in ledger.pieces[..count].iter().enumerate() {
                    let f = piece.slot(piece_no, idx);
                    let heat = (-(t - times[n]) * s * s).exp();
                    // P_h of the horizontal flux
                    let d = (f[0] * xi[0] + f[1] * xi[1]) / (s * s);
                    let ph = [f[0] - d * xi[0], f[1] - d * xi[1]];
                    for c in 0..2 {
                        acc[idx][c] -= ph[c] * (heat * weights[n]);
                    }
                }
            }
            DuhamelTag::Branch { branch, piece, .. } => {
                let (p, degenerate) = eigenprojection(xi, branch);
                if degenerate {
                    return;
                }
                let om = omega(xi);
                for (n, rec) in ledger.pieces[..count].iter().enumerate() {
                    let f = rec.slot(piece, idx);
                    let lag = t - times[n];
                    let factor = Complex64::from_polar((-lag * s * s).exp(), branch.sign() * lag * om)
                        * weights[n];
                    for c in rows.clone() {
                        let pf = p[(c, 0)] * f[0] + p[(c, 1)] * f[1] + p[(c, 2)] * f[2] + p[(c, 3)] * f[3];
                        acc[idx][c] -= pf * factor;
                    }
                }
            }
        }
    });
    for (idx, a) in acc.iter().enumerate() {
        for c in 0..4 {
            out[c].coeffs_mut()[idx] = a[c];
        }
    }
    Ok(out)
}

/// The components of a tagged Duhamel term: two for the horizontal-velocity
/// tags (`D1`, `D2`, `D^{vel,h}`), one for `D^{vel,v}` and `D^{temp}`, four
/// for the plane term.
pub fn duhamel_term(ledger: &DuhamelLedger, tag: DuhamelTag, t: f64) -> Result<Vec<SpectralField>> {
    let full = term_full(ledger, tag, t)?;
    Ok(tag.rows().map(|c| full[c].clone()).collect())
}

/// `P_h`-projected Duhamel integral of the whole horizontal flux, computed
/// without splitting; equals `D1 + D2`.
pub fn unsplit_ph_integral(ledger: &DuhamelLedger, t: f64) -> Result<[SpectralField; 2]> {
    let b = ledger.box_spec;
    let mut o = [SpectralField::zeros(b), SpectralField::zeros(b)];
    if t == 0.0 {
        return Ok(o);
    }
    let count = ledger.window(t)?;
    let weights = trapezoid_weights(&ledger.times[..count]);
    let w = b.wavenumbers();
    for (n, rec) in ledger.pieces[..count].iter().enumerate() {
        let lag = t - ledger.times[n];
        let mut f1 = SpectralField::zeros(b);
        let mut f2 = SpectralField::zeros(b);
        for idx in 0..b.total() {
            let tot = rec.total(idx);
            f1.coeffs_mut()[idx] = tot[0];
            f2.coeffs_mut()[idx] = tot[1];
        }
        let (p1, p2) = helmholtz_h(&f1, &f2);
        for (dst, src) in o.iter_mut().zip([p1, p2]) {
            let heated = src.apply_symbol(|i, j, k| {
                let x = w.xi(i, j, k);
                ((-lag * (x[0] * x[0] + x[1] * x[1])).exp() * weights[n]).into()
            });
            for (d, s) in dst.coeffs_mut().iter_mut().zip(heated.coeffs()) {
                *d -= s;
            }
        }
    }
    Ok(o)
}

/// L2 mismatch of the mild formula, per channel.
#[derive(Clone, Debug, PartialEq)]
pub struct MildResidual {
    pub ph_vh: f64,
    pub curlfree_vh: f64,
    pub v3: f64,
    pub theta: f64,
    pub total: f64,
    /// `||u(t)||_{L^2}` for normalization.
    pub solution_norm: f64,
}

/// Compares `state_t` with the linear part plus the sum of all Duhamel terms.
pub fn mild_residual(
    state0: &BoussinesqState,
    state_t: &BoussinesqState,
    ledger: &DuhamelLedger,
) -> Result<MildResidual> {
    let t = state_t.time - state0.time;
    let lin = propagate_linear(state0, t)?;
    let mut rebuilt: [SpectralField; 4] = lin.fields.clone();
    for tag in DuhamelTag::all() {
        let term = term_full(ledger, tag, t)?;
        for c in 0..4 {
            rebuilt[c].add_assign(&term[c]);
        }
    }
    let diff: [SpectralField; 4] = std::array::from_fn(|c| state_t.fields[c].sub(&rebuilt[c]));
    let (p1, p2) = helmholtz_h(&diff[0], &diff[1]);
    let ph = (p1.plancherel_sq() + p2.plancherel_sq()).sqrt();
    let cf = (diff[0].sub(&p1).plancherel_sq() + diff[1].sub(&p2).plancherel_sq()).sqrt();
    Ok(MildResidual {
        ph_vh: ph,
        curlfree_vh: cf,
        v3: diff[2].plancherel_sq().sqrt(),
        theta: diff[3].plancherel_sq().sqrt(),
        total: diff.iter().map(|f| f.plancherel_sq()).sum::<f64>().sqrt(),
        solution_norm: state_t.energy().sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinear::run::{run_with, RunOptions};
    use crate::nonlinear::stepper::tests::random_state;
    use crate::nonlinear::SolverConfig;

    fn ledger_run(nonlinear: bool) -> (BoussinesqState, crate::nonlinear::Trajectory) {
        let b = BoxSpec::cube(12, 2.0 * std::f64::consts::PI).unwrap();
        let s0 = random_state(b, 11, 0.3);
        let cfg = SolverConfig {
            dt: 0.02,
            t_end: 0.2,
            nonlinear,
            ..Default::default()
        };
        let opts = RunOptions {
            ledger: true,
            ..Default::default()
        };
        let tr = run_with(&s0, &cfg, &opts).unwrap();
        (s0, tr)
    }

    #[test]
    fn empty_and_zero_ledgers_give_zero_terms() {
        let b = BoxSpec::cube(8, 4.0).unwrap();
        let mut l = DuhamelLedger::new(b, 0.1);
        let zero = FluxPieces::zeros(b.total());
        l.record(0.0, zero.clone());
        l.record(0.1, zero);
        for tag in DuhamelTag::all() {
            for t in [0.0, 0.1] {
                for f in duhamel_term(&l, tag, t).unwrap() {
                    assert_eq!(f.plancherel_sq(), 0.0);
                }
            }
        }
        assert!(matches!(duhamel_term(&l, DuhamelTag::D1, 0.2), Err(Error::IncompleteLedger(_))));
        assert!(matches!(duhamel_term(&l, DuhamelTag::D1, 0.05), Err(Error::IncompleteLedger(_))));
    }

    #[test]
    fn gaps_are_rejected() {
        let (_, tr) = ledger_run(true);
        let mut l = tr.ledger.unwrap();
        l.times.remove(3);
        l.pieces.remove(3);
        assert!(matches!(duhamel_term(&l, DuhamelTag::D2, 0.2), Err(Error::IncompleteLedger(_))));
    }

    #[test]
    fn tags_are_twenty_plus_plane() {
        let tags = DuhamelTag::all();
        assert_eq!(tags.len(), 39);
        assert_eq!(tags[2].name(), "D_vel_h+_1");
    }

    #[test]
    fn d1_plus_d2_is_the_unsplit_integral() {
        let (_, tr) = ledger_run(true);
        let l = tr.ledger.unwrap();
        let t = 0.2;
        let d1 = duhamel_term(&l, DuhamelTag::D1, t).unwrap();
        let d2 = duhamel_term(&l, DuhamelTag::D2, t).unwrap();
        let un = unsplit_ph_integral(&l, t).unwrap();
        let scale = un.iter().map(|f| f.plancherel_sq()).sum::<f64>().sqrt();
        assert!(scale > 0.0);
        let mut err = 0.0;
        for c in 0..2 {
            let mut s = d1[c].clone();
            s.add_assign(&d2[c]);
            err += s.sub(&un[c]).plancherel_sq();
        }
        assert!(err.sqrt() <= 1e-8 * scale);
    }

    #[test]
    fn linear_run_has_no_residual() {
        let (s0, tr) = ledger_run(false);
        let r = mild_residual(&s0, &tr.last, tr.ledger.as_ref().unwrap()).unwrap();
        assert!(r.total <= 1e-8 * r.solution_norm, "{r:?}");
    }

    #[test]
    fn nonlinear_residual_is_second_order_in_the_quadrature() {
        let (s0, tr) = ledger_run(true);
        let l = tr.ledger.unwrap();
        let fine = mild_residual(&s0, &tr.last, &l).unwrap();
        let coarse = mild_residual(&s0, &tr.last, &l.coarsened()).unwrap();
        assert!(fine.total < 1e-3 * fine.solution_norm, "{fine:?}");
        let ratio = coarse.total / fine.total;
        assert!(ratio > 3.0 && ratio < 5.0, "ratio {ratio}");
    }
}
