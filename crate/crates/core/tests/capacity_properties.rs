use bosonic_capacity::analytic::{self, FixedRegime, PowerSplit, Regime};
use bosonic_capacity::gaussian::{random, SymplecticMap};
use bosonic_capacity::mi::{self, MiInstance};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn capacity_sits_between_fixed_receivers_and_holevo(nbar in 0.0f64..20.0, nth in 0.0f64..6.0) {
        let c = analytic::gaussian_capacity(nbar, nth).unwrap().capacity;
        let (fixed, _) = analytic::fixed_measurement_capacity(nbar, nth).unwrap();
        prop_assert!(c >= fixed - 1e-12);
        prop_assert!(c <= analytic::holevo_received(nbar, nth).unwrap() + 1e-12);
    }

    #[test]
    fn capacity_monotone(nbar in 0.0f64..10.0, dn in 0.0f64..1.0, nth in 0.0f64..5.0, dt in 0.0f64..1.0) {
        let c = |n, t| analytic::gaussian_capacity(n, t).unwrap().capacity;
        prop_assert!(c(nbar + dn, nth) >= c(nbar, nth) - 1e-12);
        prop_assert!(c(nbar, nth + dt) <= c(nbar, nth) + 1e-12);
    }

    #[test]
    fn fixed_regime_follows_crossover(nbar in 0.0f64..10.0, nth in 0.0f64..5.0) {
        let x = analytic::fixed_crossover(nth);
        prop_assume!((nbar - x).abs() > 1e-9);
        let (_, regime) = analytic::fixed_measurement_capacity(nbar, nth).unwrap();
        prop_assert_eq!(regime == FixedRegime::Homodyne, nbar < x);
    }

    #[test]
    fn single_mode_never_beats_fixed_optimum(nbar in 0.01f64..8.0, frac in 0.0f64..=1.0, r in -20.0f64..20.0, nth in 0.0f64..3.0) {
        let split = PowerSplit::from_first(nbar, 2.0 * nbar * frac).unwrap();
        let (best, _) = analytic::fixed_measurement_capacity(nbar, nth).unwrap();
        prop_assert!(analytic::single_mode_mi(split, r, nth).unwrap() <= best + 1e-12);
    }

    #[test]
    fn mutual_info_is_permutation_invariant(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = mi::random_instance(n, 1.3, 0.4, 1.5, &mut rng).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.rotate_left(1);
        // Q maps new mode k to old mode perm[k] in both quadratures.
        let q = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
            let (bi, mi) = (i / n, i % n);
            let (bj, mj) = (j / n, j % n);
            if bi == bj && mj == perm[mi] { 1.0 } else { 0.0 }
        });
        let power: Vec<f64> = (0..2 * n).map(|i| inst.power()[(i / n) * n + perm[i % n]]).collect();
        let sq: Vec<f64> = perm.iter().map(|&k| inst.squeezing()[k]).collect();
        let s = SymplecticMap::new(&q * inst.unitary().matrix() * q.transpose()).unwrap();
        let permuted = MiInstance::new(inst.nbar(), power, inst.nth(), sq, s).unwrap();
        let (a, b) = (mi::mutual_info(&inst).unwrap(), mi::mutual_info(&permuted).unwrap());
        prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn separable_mutual_info_is_additive(seed in any::<u64>(), n in 1usize..=4, nth in 0.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let power: Vec<f64> = (0..2 * n).map(|_| rng.random_range(0.0..2.0)).collect();
        let nbar = power.iter().sum::<f64>() / (2 * n) as f64;
        let sq: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let total = mi::mutual_info(&MiInstance::separable(nbar, power.clone(), nth, sq.clone()).unwrap()).unwrap();
        let parts: f64 = (0..n)
            .map(|k| analytic::single_mode_mi(PowerSplit::new(power[k], power[n + k]).unwrap(), sq[k], nth).unwrap())
            .sum();
        prop_assert!((total - parts).abs() < 1e-12);
    }

    #[test]
    fn hadamard_bound(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let x = &a * a.transpose() + DMatrix::identity(n, n) * 0.1;
        let diag: f64 = x.diagonal().iter().product();
        prop_assert!(x.determinant() <= diag * (1.0 + 1e-12));
        let d = DMatrix::from_diagonal(&x.diagonal());
        prop_assert!((d.determinant() - diag).abs() <= 1e-12 * diag);
    }

    #[test]
    fn rotations_never_beat_reoptimized_identity(seed in any::<u64>(), n in 2usize..=3, nbar in 0.1f64..4.0, nth in 0.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = mi::random_instance(n, nbar, nth, 2.0, &mut rng).unwrap();
        prop_assert!(mi::mutual_info(&inst).unwrap() <= mi::identity_optimum(&inst).unwrap() + 1e-9);
    }
}

#[test]
fn regime_labels_follow_breakpoints() {
    let lo = analytic::lower_breakpoint();
    let hi = analytic::upper_breakpoint();
    assert_eq!(analytic::gaussian_capacity(lo - 0.01, 0.0).unwrap().regime, Regime::Homodyne);
    assert_eq!(analytic::gaussian_capacity(0.5 * (lo + hi), 0.0).unwrap().regime, Regime::TimeShare);
    assert_eq!(analytic::gaussian_capacity(hi + 0.01, 0.0).unwrap().regime, Regime::Heterodyne);
}

#[test]
fn finite_time_sharing_converges_to_the_limit() {
    let nbar = 2.0;
    let limit = analytic::gaussian_capacity(nbar, 0.0).unwrap().capacity;
    let (_, best10) = mi::best_finite_time_share(10, nbar).unwrap();
    let (_, best1000) = mi::best_finite_time_share(1000, nbar).unwrap();
    assert!(best10.rate <= limit + 1e-12 && best1000.rate <= limit + 1e-12);
    assert!(limit - best1000.rate < limit - best10.rate + 1e-15);
    assert!(limit - best1000.rate < 1e-5, "{}", limit - best1000.rate);
    let exhaustive = (0..=10).filter_map(|t| mi::lagrange_allocation(10, t, nbar).ok()).map(|a| a.rate).fold(0.0, f64::max);
    assert_eq!(best10.rate, exhaustive);
}

#[test]
fn monte_carlo_zero_power_and_homodyne() {
    let zero = MiInstance::separable(1.0, vec![0.0, 0.0], 0.0, vec![0.0]).unwrap();
    let est = mi::monte_carlo_mi(&zero, 5_000, 4).unwrap();
    assert!(est.bits.abs() <= 3.0 * est.std_error + 1e-15, "{est:?}");

    let hom = MiInstance::separable(1.0, vec![2.0, 0.0], 0.0, vec![bosonic_capacity::gaussian::R_CAP]).unwrap();
    let est = mi::monte_carlo_mi(&hom, 50_000, 5).unwrap();
    assert!((est.bits - 0.5 * 5f64.log2()).abs() <= 3.0 * est.std_error, "{est:?}");
}

#[test]
fn random_orthogonal_symplectics_cover_rotations() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let o = random::orthogonal_symplectic(2, &mut rng);
    assert!(o.is_orthogonal(1e-12) && o.symplectic_deviation() < 1e-12);
}
