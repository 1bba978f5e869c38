use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use su11osc::physapp::constants::*;
use su11osc::physapp::*;
use su11osc::repcore::BargmannIndex;

fn bk(k: f64) -> BargmannIndex {
    BargmannIndex::new(k).unwrap()
}

fn beta_grid() -> Vec<f64> {
    let n = 40;
    (0..=n).map(|i| 0.05 * (400.0f64).powf(i as f64 / n as f64)).collect()
}

const KS: [f64; 3] = [0.1, 0.5, 2.0];

#[test]
fn partition_function_matches_direct_sum() {
    for &x in &[0.3, 1.0, 4.0] {
        for &k in &KS {
            let direct: f64 = (0..2000).map(|n| (-x * (n as f64 + k)).exp()).sum();
            let r = thermo(x, bk(k)).unwrap();
            assert!((r.Z - direct).abs() < 1e-12 * direct);
        }
    }
}

#[test]
fn entropy_identity_analytic() {
    for x in beta_grid() {
        for &k in &KS {
            let r = thermo(x, bk(k)).unwrap();
            assert!(r.entropy_identity_residual().abs() < 1e-12, "x={x} k={k}");
            assert!(r.Z > 0.0 && r.dE2 >= 0.0 && r.S_over_kB >= 0.0);
        }
    }
}

#[test]
fn fluctuation_matches_finite_difference() {
    for x in beta_grid() {
        for &k in &KS {
            let h = 1e-3 * x.max(0.2);
            let f = |b: f64| ln_partition(b, k);
            let fd = (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
                / (12.0 * h * h);
            let r = thermo(x, bk(k)).unwrap();
            assert!((r.dE2 - fd).abs() < 1e-6 * r.dE2.max(1.0), "x={x} k={k} {} {}", r.dE2, fd);
        }
    }
}

#[test]
fn internal_energy_is_minus_derivative_of_ln_z() {
    for &x in &[0.1, 1.0, 5.0] {
        let h = 1e-5;
        let fd = -(ln_partition(x + h, 0.5) - ln_partition(x - h, 0.5)) / (2.0 * h);
        assert!((thermo(x, bk(0.5)).unwrap().U - fd).abs() < 1e-7);
    }
}

#[test]
fn k_enters_f_and_u_additively() {
    for x in beta_grid() {
        let reps: Vec<_> = KS.iter().map(|&k| thermo(x, bk(k)).unwrap()).collect();
        for (r, &k) in reps.iter().zip(KS.iter()) {
            assert!(((r.U - k) - (reps[0].U - KS[0])).abs() < 1e-12);
            assert!(((r.F - k) - (reps[0].F - KS[0])).abs() < 1e-12);
            assert_eq!(r.dE2, reps[0].dE2);
            assert_eq!(r.S_over_kB, reps[0].S_over_kB);
        }
    }
}

#[test]
fn probabilities_are_k_independent_and_normalized() {
    let x = 0.7;
    let total: f64 = (0..200).map(|n| p_n(x, n).unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    for &k in &KS {
        let z = thermo(x, bk(k)).unwrap().Z;
        for n in 0..10 {
            let p = (-x * (n as f64 + k)).exp() / z;
            assert!((p - p_n(x, n).unwrap()).abs() < 1e-14);
        }
    }
}

#[test]
fn low_temperature_limit_is_ground_state() {
    let r = thermo(60.0, bk(0.3)).unwrap();
    assert!((r.U - 0.3).abs() < 1e-20);
    assert!(r.S_over_kB < 1e-20);
}

#[test]
fn thermo_rejects_nonpositive_beta() {
    assert!(thermo(0.0, bk(0.5)).is_err());
    assert!(thermo(-1.0, bk(0.5)).is_err());
    assert!(p_n(0.0, 1).is_err());
}

#[test]
fn report_serializes() {
    let r = thermo(1.0, bk(0.5)).unwrap();
    let v = serde_json::to_value(r).unwrap();
    assert!(v.get("S_over_kB").is_some());
    let back: ThermoReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, r);
}

#[test]
fn vacuum_density_laws() {
    let w = 1e15;
    assert_eq!(vacuum_energy_density(w, 0.0), 0.0);
    let u1 = vacuum_energy_density(w, 0.5);
    assert!((vacuum_energy_density(2.0 * w, 0.5) / u1 - 16.0).abs() < 1e-12);
    assert!((vacuum_energy_density(w, 1.0) / u1 - 2.0).abs() < 1e-12);
    let ell = cutoff_length(w);
    assert!((vacuum_energy_density_ell(ell, 0.5) / u1 - 1.0).abs() < 1e-12);
}

#[test]
fn solve_k_reaches_dark_energy_density() {
    for &ell in &[1e-5, 1e-4, 1e-3] {
        let k = solve_k_for_density(DARK_ENERGY_DENSITY, ell);
        assert!((k - DARK_ENERGY_DENSITY * ell.powi(4) / (4.0 * PI * PI * HBAR * C)).abs() <= 1e-15 * k);
        let u = vacuum_energy_density_ell(ell, k);
        assert!((u / DARK_ENERGY_DENSITY - 1.0).abs() < 1e-12);
    }
    assert!((DARK_ENERGY_DENSITY - 6.408_706_536e-10).abs() < 1e-18);
}

#[test]
fn stark_zero_field() {
    let s = stark_effective_k(0.5, 1, 0.0, 1e8, 1e-8);
    assert_eq!(s.delta, 0.0);
    assert_eq!(s.k_eff, 0.5);
    assert!(!s.nonpositive);
}

#[test]
fn stark_ion_scenario() {
    let s = stark_effective_k(0.5, 1, 1e3, 2.0 * PI * 1e8, 1e-8);
    assert!(s.delta > 10.0 / 3.0 && s.delta < 30.0, "delta={}", s.delta);
    assert!(s.nonpositive);
}

#[test]
fn stark_scales_with_field_squared_and_charge_squared() {
    let a = stark_effective_k(0.5, 1, 10.0, 1e9, 1e-8).delta;
    let b = stark_effective_k(0.5, 1, 20.0, 1e9, 1e-8).delta;
    let c = stark_effective_k(0.5, -2, 10.0, 1e9, 1e-8).delta;
    assert!((b / a - 4.0).abs() < 1e-12);
    assert!((c / a - 4.0).abs() < 1e-12);
}

#[test]
fn stark_delta_is_energy_shift_over_hbar_omega() {
    let omega = 3e8;
    let s = stark_effective_k(0.5, 1, 50.0, omega, 2e-9);
    let v0 = stark_energy_shift(1, 50.0, omega, 2e-9);
    assert!((v0 / (HBAR * omega) / s.delta - 1.0).abs() < 1e-8);
}

#[test]
fn landau_ladder() {
    let std = landau_levels(2.0, 3.0, 1.5, bk(0.5), 5, 1.0).unwrap();
    assert_eq!(std.omega, 4.0);
    for (n, e) in std.levels.iter().enumerate() {
        assert!((e - 4.0 * (n as f64 + 0.5)).abs() < 1e-14);
    }
    let flipped = landau_levels(2.0, -3.0, 1.5, bk(0.5), 5, 1.0).unwrap();
    assert_eq!(flipped, std);
    let small = landau_levels(1.0, 1.0, 1.0, bk(0.01), 0, 1.0).unwrap();
    assert!((small.levels[0] - 0.01).abs() < 1e-15);
    assert!(landau_levels(1.0, 0.0, 1.0, bk(0.5), 3, 1.0).is_err());
    assert!(landau_levels(1.0, 1.0, 0.0, bk(0.5), 3, 1.0).is_err());
}

#[test]
fn mulliken_examples() {
    for &k in &[0.5, 0.25] {
        let (wa, wb) = mulliken_forward(10.0, 9.0, 1.0, 1.1, k, 1.0);
        let got = mulliken_extract_k(10.0, 9.0, 1.0, 1.1, wa, wb, 1.0).unwrap();
        assert!((got - k).abs() < 1e-13);
    }
    assert!(mulliken_extract_k(10.0, 9.0, 1.0, 1.0, 9.5, 8.5, 1.0).is_err());
}

#[test]
fn mulliken_random_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let k = rng.gen_range(0.01..3.0);
        let w1 = rng.gen_range(0.5..2.0);
        let w2 = w1 * rng.gen_range(1.05..1.5);
        let ea = rng.gen_range(5.0..20.0);
        let eb = rng.gen_range(5.0..20.0);
        let (wa, wb) = mulliken_forward(ea, eb, w1, w2, k, 1.0);
        let got = mulliken_extract_k(ea, eb, w1, w2, wa, wb, 1.0).unwrap();
        assert!((got - k).abs() < 1e-12, "k={k} got={got}");
    }
}

#[test]
fn cavity_dispersion() {
    let l = 0.01;
    let m = CavitySpec::vacuum(l, [1, 0, 0]);
    assert!((cavity_mode(&m) - 2.0 * PI * C / l).abs() < 1e-6);
    let dense = CavitySpec::new(l, 4.0, 1.0, [1, 0, 0]).unwrap();
    assert!((cavity_mode(&dense) / cavity_mode(&m) - 0.5).abs() < 1e-15);
    let diag = CavitySpec::vacuum(l, [1, 1, 1]);
    assert!((cavity_mode(&diag) / cavity_mode(&m) - 3f64.sqrt()).abs() < 1e-14);
    assert_eq!(cavity_mode(&CavitySpec::vacuum(l, [0, 0, 0])), 0.0);
    assert!(CavitySpec::new(-1.0, 1.0, 1.0, [1, 0, 0]).is_err());
}

#[test]
fn cavity_ground_sum() {
    let l = 0.02;
    let modes = [CavitySpec::vacuum(l, [1, 0, 0]), CavitySpec::vacuum(l, [0, 1, 0])];
    let w = 2.0 * PI * C / l;
    let expect = HBAR * w * 2.0 * 0.5 * 2.0;
    assert!((ground_sum(0.5, &modes) / expect - 1.0).abs() < 1e-14);
    assert!((ground_sum(0.25, &modes) / expect - 0.5).abs() < 1e-14);
}

proptest! {
    #[test]
    fn prop_thermo_identity(x in 0.05f64..20.0, k in 0.01f64..5.0) {
        let r = thermo(x, bk(k)).unwrap();
        prop_assert!(r.entropy_identity_residual().abs() < 1e-12);
        prop_assert!((r.F - (r.U - r.S_over_kB / x)).abs() < 1e-10 * (1.0 + r.U.abs()));
    }

    #[test]
    fn prop_vacuum_linear_quartic(w in 1e10f64..1e18, k in 0.0f64..3.0, s in 0.5f64..4.0) {
        let u = vacuum_energy_density(w, k);
        let us = vacuum_energy_density(s * w, 2.0 * k);
        prop_assert!((us - 2.0 * s.powi(4) * u).abs() <= 1e-12 * us.abs().max(1e-300));
    }

    #[test]
    fn prop_mulliken_round_trip(k in 0.01f64..3.0, w1 in 0.5f64..2.0, r in 1.05f64..2.0, ea in 1.0f64..50.0, eb in 1.0f64..50.0) {
        let w2 = w1 * r;
        let (wa, wb) = mulliken_forward(ea, eb, w1, w2, k, 1.0);
        let got = mulliken_extract_k(ea, eb, w1, w2, wa, wb, 1.0).unwrap();
        prop_assert!((got - k).abs() < 1e-12);
    }
}
