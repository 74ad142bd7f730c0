use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{for_each_mode, random_band_field, BoussinesqState, BoxSpec, SpectralField, Transformer};
use crate::linear::projectors::helmholtz3;
use crate::lp_besov::composite::x_norm;

/// Envelope value at the box boundary must stay below this, relative to the peak.
pub const TAIL_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    /// Gaussian bumps times random plane-wave modulations.
    ModulatedBump,
    /// Random band-limited field under a Gaussian envelope.
    RandomBand,
}

impl Construction {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "modulated-bump" | "bump" => Ok(Self::ModulatedBump),
            "random-band" | "band" => Ok(Self::RandomBand),
            _ => Err(Error::Config(format!("unknown initial-data construction '{s}'"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::ModulatedBump => "modulated-bump",
            Self::RandomBand => "random-band",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialData {
    pub construction: Construction,
    /// Target value of the `X^{8,4}` surrogate norm.
    pub amplitude: f64,
    /// Gaussian widths `sigma_h`, `sigma_v`.
    pub scale_h: f64,
    pub scale_v: f64,
    /// Vertical modulation wavenumber of the bumps; zero draws it at random
    /// from `[-1/scale_v, 1/scale_v]`.
    pub kappa_v: f64,
    pub seed: u64,
}

impl Default for InitialData {
    fn default() -> Self {
        Self {
            construction: Construction::ModulatedBump,
            amplitude: 1e-2,
            scale_h: std::f64::consts::SQRT_2,
            scale_v: 3.0,
            kappa_v: 0.45,
            seed: 1,
        }
    }
}

pub struct InitialField {
    pub state: BoussinesqState,
    /// `||u0||_{X^{8,4}}` of the returned state.
    pub x84: f64,
}

const BUMPS: usize = 3;

/// Envelope widths of the four components: centered Gaussians shifted by up
/// to half a width.
fn envelope(b: &BoxSpec, rng: &mut ChaCha8Rng, sh: f64, sv: f64) -> impl Fn([f64; 3]) -> f64 {
    let l = b.lengths();
    let c = [
        0.5 * l[0] + rng.gen_range(-0.5..0.5) * sh,
        0.5 * l[1] + rng.gen_range(-0.5..0.5) * sh,
        0.5 * l[2] + rng.gen_range(-0.5..0.5) * sv,
    ];
    move |x: [f64; 3]| {
        let r2 = ((x[0] - c[0]).powi(2) + (x[1] - c[1]).powi(2)) / (sh * sh) + (x[2] - c[2]).powi(2) / (sv * sv);
        (-0.5 * r2).exp()
    }
}

fn sample(b: &BoxSpec, f: impl Fn([f64; 3]) -> f64) -> Vec<f64> {
    let mut out = vec![0.0; b.total()];
    for_each_mode(b, |idx, i, j, k| {
        out[idx] = f([b.coordinate(0, i), b.coordinate(1, j), b.coordinate(2, k)]);
    });
    out
}

/// Zeroes the mean and the Nyquist planes. The `xi_h = 0` and `xi_3 = 0`
/// modes stay: they are nodes of the lattice sum that approximates the
/// whole-space frequency integral.
fn strip_planes(f: &mut SpectralField) {
    let b = *f.box_spec();
    let coeffs = f.coeffs_mut();
    for_each_mode(&b, |idx, i, j, k| {
        let nyq = b.is_nyquist(0, i) || b.is_nyquist(1, j) || b.is_nyquist(2, k);
        if nyq || (i == 0 && j == 0 && k == 0) {
            coeffs[idx] = Default::default();
        }
    });
}

fn unit_shape(spec: &InitialData, b: &BoxSpec) -> Result<[SpectralField; 4]> {
    let l = b.lengths();
    let (sh, sv) = (spec.scale_h, spec.scale_v);
    if !(sh > 0.0 && sv > 0.0) {
        return Err(Error::Config("support scales must be positive".into()));
    }
    if sh > l[0].min(l[1]) / 8.0 || sv > l[2] / 8.0 {
        return Err(Error::Config(format!(
            "support scales ({sh}, {sv}) exceed one eighth of the box {l:?}"
        )));
    }
    // the shifted envelope at the nearest face
    let tail = |s: f64, len: f64| (-0.5 * ((0.5 * len - 0.5 * s) / s).powi(2)).exp();
    let worst = tail(sh, l[0].min(l[1])).max(tail(sv, l[2]));
    if worst > TAIL_TOLERANCE {
        return Err(Error::Config(format!(
            "envelope tail {worst:.2e} at the box boundary exceeds {TAIL_TOLERANCE:.0e}; enlarge the box"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut tr = Transformer::new(*b);
    let mut fields: Vec<SpectralField> = Vec::with_capacity(4);
    for _ in 0..4 {
        let values = match spec.construction {
            Construction::ModulatedBump => {
                let mut acc = vec![0.0; b.total()];
                for _ in 0..BUMPS {
                    let env = envelope(b, &mut rng, sh, sv);
                    let kappa = [
                        rng.gen_range(-1.0..1.0) / sh,
                        rng.gen_range(-1.0..1.0) / sh,
                        if spec.kappa_v == 0.0 {
                            rng.gen_range(-1.0..1.0) / sv
                        } else {
                            spec.kappa_v * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
                        },
                    ];
                    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
                    let weight = rng.gen_range(0.5..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    let s = sample(b, |x| {
                        weight * env(x) * (kappa[0] * x[0] + kappa[1] * x[1] + kappa[2] * x[2] + phase).cos()
                    });
                    for (a, v) in acc.iter_mut().zip(s) {
                        *a += v;
                    }
                }
                acc
            }
            Construction::RandomBand => {
                // wavenumbers up to about one inverse width
                let band = [0, 1, 2].map(|a| {
                    let s = if a == 2 { sv } else { sh };
                    ((l[a] / (std::f64::consts::TAU * s)).floor() as usize).clamp(1, b.n()[a] / 2 - 1)
                });
                let carrier = tr.to_physical(&random_band_field(b, &mut rng, band))?;
                let env = envelope(b, &mut rng, sh, sv);
                let e = sample(b, env);
                carrier.iter().zip(e).map(|(c, e)| c * e).collect()
            }
        };
        let mut f = tr.to_spectral(&values);
        strip_planes(&mut f);
        fields.push(f);
    }
    let fields: [SpectralField; 4] = fields.try_into().expect("four components");
    let st = helmholtz3(&BoussinesqState::new(fields, 0.0)?);
    Ok(st.fields)
}

/// Builds smooth, mean-zero, divergence-free data whose `X^{8,4}` surrogate
/// norm equals the requested amplitude.
pub fn make_initial_data(spec: &InitialData, b: &BoxSpec) -> Result<InitialField> {
    if !(spec.amplitude >= 0.0 && spec.amplitude.is_finite()) {
        return Err(Error::Config(format!("amplitude {} must be nonnegative", spec.amplitude)));
    }
    let shape = unit_shape(spec, b)?;
    let refs: Vec<&SpectralField> = shape.iter().collect();
    let norm = x_norm(&refs, 8, 4)?;
    if norm == 0.0 {
        return Err(Error::Config("initial data vanish on this grid".into()));
    }
    let scale = spec.amplitude / norm;
    let state = BoussinesqState::new(shape, 0.0)?.scaled(scale);
    let refs: Vec<&SpectralField> = state.fields.iter().collect();
    let x84 = x_norm(&refs, 8, 4)?;
    Ok(InitialField { state, x84 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_box() -> BoxSpec {
        BoxSpec::new([32, 32, 32], [32.0, 32.0, 64.0]).unwrap()
    }

    fn spec() -> InitialData {
        InitialData {
            scale_h: 1.5,
            scale_v: 3.0,
            ..Default::default()
        }
    }

    #[test]
    fn zero_amplitude_gives_zero_state() {
        let f = make_initial_data(&InitialData { amplitude: 0.0, ..spec() }, &small_box()).unwrap();
        assert_eq!(f.state.energy(), 0.0);
        assert_eq!(f.x84, 0.0);
    }

    #[test]
    fn seeded_data_are_bit_identical() {
        for c in [Construction::ModulatedBump, Construction::RandomBand] {
            let s = InitialData { construction: c, ..spec() };
            let a = make_initial_data(&s, &small_box()).unwrap();
            let b = make_initial_data(&s, &small_box()).unwrap();
            for (x, y) in a.state.fields.iter().zip(&b.state.fields) {
                assert!(x.coeffs().iter().zip(y.coeffs()).all(|(p, q)| p == q));
            }
        }
    }

    #[test]
    fn surrogate_norm_is_linear_in_amplitude() {
        let a = make_initial_data(&InitialData { amplitude: 1e-2, ..spec() }, &small_box()).unwrap();
        let b = make_initial_data(&InitialData { amplitude: 3e-2, ..spec() }, &small_box()).unwrap();
        assert!((a.x84 - 1e-2).abs() < 1e-10 * 1e-2);
        assert!((b.x84 / a.x84 - 3.0).abs() < 1e-10);
    }

    #[test]
    fn data_are_divergence_free_and_mean_zero() {
        let f = make_initial_data(&InitialData { amplitude: 1.0, ..spec() }, &small_box()).unwrap();
        assert!(f.state.divergence_defect() < 1e-12);
        for c in &f.state.fields {
            assert_eq!(c.coeffs()[0].norm(), 0.0);
            assert!(c.hermitian_defect() < 1e-14 * c.plancherel_sq().sqrt().max(1.0));
        }
    }

    #[test]
    fn oversized_support_is_rejected() {
        let s = InitialData { scale_h: 5.0, ..spec() };
        assert!(matches!(make_initial_data(&s, &small_box()), Err(Error::Config(_))));
        // fits the one-eighth rule but not the tail tolerance
        let b = BoxSpec::new([32, 32, 32], [32.0, 32.0, 24.0]).unwrap();
        assert!(matches!(make_initial_data(&spec(), &b), Err(Error::Config(_))));
    }
}
