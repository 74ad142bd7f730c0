use std::f64::consts::PI;

use aniso_core::grid::norms::sobolev_norm;
use aniso_core::grid::{lp_norm, random_band_field, BoussinesqState, BoxSpec, SpectralField};
use aniso_core::lp_besov::blocks::without_axis_planes;
use aniso_core::lp_besov::composite::{a_eps, x_norm, y_groups, y_norm, y_records, DEFAULT_P_SET};
use aniso_core::lp_besov::profile::phi;
use aniso_core::lp_besov::{besov_norm, composite_norm, dyadic_range, lp_block, BesovSpec, CompositeNormSpec, DyadicIndex};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mode_pair(b: BoxSpec, i: usize, j: usize, k: usize) -> SpectralField {
    let mut f = SpectralField::zeros(b);
    let n = b.n();
    f.coeffs_mut()[b.index(i, j, k)] = Complex64::new(0.5, 0.25);
    f.coeffs_mut()[b.index((n[0] - i) % n[0], (n[1] - j) % n[1], (n[2] - k) % n[2])] = Complex64::new(0.5, -0.25);
    f
}

#[test]
fn centred_mode_passes_its_block_unchanged() {
    // |xi_h| = 4 = 2^2, |xi_3| = 2 = 2^1 on a 2 pi box
    let b = BoxSpec::cube(32, 2.0 * PI).unwrap();
    let f = mode_pair(b, 4, 0, 2);
    assert_eq!(phi(1.0), 1.0);
    assert_eq!(lp_block(&f, DyadicIndex::new(2, 1)), f);
    // outside the support
    let far = lp_block(&f, DyadicIndex::new(-1, 1));
    assert!(far.coeffs().iter().all(|c| c.norm() == 0.0));
}

#[test]
fn blocks_sum_to_field_without_axis_planes() {
    let b = BoxSpec::new([16, 16, 16], [9.0, 9.0, 6.0]).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(2);
    let mut f = random_band_field(&b, &mut r, [6, 6, 6]);
    // put something on the planes that the blocks must drop
    f.coeffs_mut()[b.index(0, 0, 1)] = Complex64::new(1.0, 0.0);
    f.coeffs_mut()[b.index(0, 0, 15)] = Complex64::new(1.0, 0.0);
    f.coeffs_mut()[b.index(2, 0, 0)] = Complex64::new(0.0, 1.0);
    f.coeffs_mut()[b.index(14, 0, 0)] = Complex64::new(0.0, -1.0);
    let mut sum = SpectralField::zeros(b);
    for idx in dyadic_range(&b).indices() {
        sum.add_assign(&lp_block(&f, idx));
    }
    let want = without_axis_planes(&f);
    let d = sum.coeffs().iter().zip(want.coeffs()).fold(0.0f64, |m, (a, c)| m.max((a - c).norm()));
    assert!(d < 1e-12);
}

#[test]
fn sobolev_embedding_ratio_is_bounded() {
    // ||f||_{B^{s1,s2}_{2,1}} <= C ||f||_{H^s}, s = s1 + s2 + 1/2
    let b = BoxSpec::cube(32, 2.0 * PI).unwrap();
    let spec = BesovSpec::new(2.0, 1.0, 1.0, 0.5).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let f = random_band_field(&b, &mut r, [8, 8, 8]);
        worst = worst.max(besov_norm(&f, &spec).unwrap() / sobolev_norm(&[&f], 2));
    }
    assert!(worst.is_finite() && worst < 10.0, "{worst}");
}

#[test]
fn x00_is_l2_plus_l1() {
    let b = BoxSpec::new([16, 16, 8], [8.0, 8.0, 4.0]).unwrap();
    let f = random_band_field(&b, &mut ChaCha8Rng::seed_from_u64(3), [3, 3, 2]);
    let x = x_norm(&[&f], 0, 0).unwrap();
    let want = lp_norm(&f, 2.0).unwrap() + lp_norm(&f, 1.0).unwrap();
    assert!((x - want).abs() < 1e-10 * want);
}

#[test]
fn y_of_zero_history_is_zero() {
    let b = BoxSpec::cube(8, 4.0).unwrap();
    let hist: Vec<BoussinesqState> = (0..3)
        .map(|i| {
            let mut s = BoussinesqState::zeros(b);
            s.time = i as f64;
            s
        })
        .collect();
    assert_eq!(composite_norm(&hist, &CompositeNormSpec::y(0.05).unwrap()).unwrap(), 0.0);
}

#[test]
fn y_of_frozen_state_follows_the_weight_table() {
    let b = BoxSpec::cube(8, 2.0 * PI).unwrap();
    let mut r = ChaCha8Rng::seed_from_u64(8);
    let fields = std::array::from_fn(|_| random_band_field(&b, &mut r, [2, 2, 2]));
    let s0 = BoussinesqState::new(fields, 0.0).unwrap();
    let p_set = [2.0, f64::INFINITY];
    let eps = 0.05;
    let mut table = aniso_core::series::NormTable::default();
    let big_t = 9.0;
    for t in [0.0, 3.0, 6.0, big_t] {
        let mut s = s0.clone();
        s.time = t;
        table.extend(y_records(&s, &p_set).unwrap());
    }
    let y = y_norm(&table, eps, &p_set, 0.0, 10.0).unwrap();

    // hand table of exponents at p = inf, alpha = 0
    let groups = y_groups(eps, &p_set);
    let exp_of = |c: &str, p: f64| {
        groups
            .iter()
            .flat_map(|g| g.entries.iter())
            .find(|e| e.0 == c && e.1 == p && e.2 == [0, 0, 0])
            .map(|e| e.3)
            .unwrap()
    };
    assert_eq!(exp_of("B_vh_theta", 2.0), 1.0);
    assert_eq!(exp_of("B_v3", 2.0), 1.25);
    assert_eq!(exp_of("vh", f64::INFINITY), 1.0);
    assert_eq!(exp_of("theta", f64::INFINITY), 1.25);
    assert!((exp_of("v3", f64::INFINITY) - 1.5).abs() < 1e-15);
    assert_eq!(a_eps(eps, 2.0), 0.0);

    // frozen values: every sup sits at the last time
    let mut want = 0.0;
    for g in &groups {
        want += g
            .entries
            .iter()
            .map(|(c, p, a, e)| (1.0 + big_t).powf(*e) * table.value_at(0.0, c, *p, *a).unwrap())
            .fold(0.0, f64::max);
    }
    assert!((y - want).abs() < 1e-12 * want);
    // the H^8 group has weight 1
    assert_eq!(exp_of("H8", 2.0), 0.0);
    assert!(DEFAULT_P_SET.contains(&f64::INFINITY));
}

#[test]
fn y_rejects_bad_eps_and_empty_window() {
    assert!(CompositeNormSpec::y(0.25).is_err());
    assert!(CompositeNormSpec::y(0.0).is_err());
    let table = aniso_core::series::NormTable::default();
    assert!(y_norm(&table, 0.1, &[2.0], 0.0, 1.0).is_err());
}
