use approx::assert_relative_eq;
use proptest::prelude::*;
use su_interferometry::analysis::*;
use su_interferometry::interferometer::MixerParam;
use su_interferometry::HalfInt;

fn h(d: i64) -> HalfInt {
    HalfInt::from_doubled(d)
}

fn su2_params() -> impl Strategy<Value = (HalfInt, HalfInt)> {
    (1i64..=80).prop_flat_map(|dj| (Just(h(dj)), (0..=dj).prop_map(move |i| h(-dj + 2 * i))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn su2_g_lies_in_unit_interval((j, m0) in su2_params(), eta in 1e-3f64..0.999) {
        let g = g_factor_su2(j, m0, eta).unwrap().value;
        prop_assert!(g > 0.0 && g <= 1.0 + 1e-12, "G = {g}");
    }

    #[test]
    fn su2_g_is_even_in_m0_and_eta((j, m0) in su2_params(), eta in 1e-3f64..0.999) {
        let g = g_factor_su2(j, m0, eta).unwrap().value;
        for (m, e) in [(-m0, eta), (m0, -eta), (-m0, -eta)] {
            let other = g_factor_su2(j, m, e).unwrap().value;
            prop_assert!((g - other).abs() <= 1e-12 * g);
        }
    }

    #[test]
    fn su2_g_is_one_at_extreme_weights(dj in 1i64..=80, eta in 1e-3f64..0.999) {
        let g = g_factor_su2(h(dj), h(dj), eta).unwrap().value;
        prop_assert!((g - 1.0).abs() < 1e-12);
    }

    #[test]
    fn su11_g_lies_in_unit_interval(dk in 1i64..=6, l in 0usize..60, log_eta in -3f64..3.0) {
        let eta = 10f64.powf(log_eta);
        let g = g_factor_su11(h(dk), l, eta).unwrap().value;
        prop_assert!(g > 0.0 && g <= 1.0 + 1e-12, "G = {g}");
        if l == 0 {
            prop_assert!((g - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn su11_g_sits_between_its_limits(dk in 1i64..=6, l in 1usize..40, log_eta in -2f64..2.0) {
        let eta = 10f64.powf(log_eta);
        let g = g_factor_su11(h(dk), l, eta).unwrap().value;
        let lim = g_limits(IntelligentParams::Su11 { k: h(dk), l }).unwrap();
        let hi = lim.eta_to_infinity.unwrap();
        prop_assert!(g >= lim.eta_to_zero * (1.0 - 1e-12) && g <= hi * (1.0 + 1e-12));
    }

    #[test]
    fn exact_power_law_exponent(e in 0.1f64..2.0, c in 0.01f64..100.0, n in 8usize..200) {
        let pts: Vec<(f64, f64)> = (1..=n).map(|i| {
            let x = 10.0 * i as f64;
            (x, c * x.powf(-e))
        }).collect();
        let est = exponent_estimate(&pts).unwrap();
        prop_assert!((est.e - e).abs() < 1e-10, "{} vs {e}", est.e);
        prop_assert!(est.residual < 1e-10);
    }

    #[test]
    fn ratio_identity_su11(dk in 1i64..=4, l in 0usize..30, eta in 0.01f64..10.0, s2 in 0.1f64..10.0) {
        let mixer = MixerParam::from_sinh_sq(s2).unwrap();
        let r = intelligent_sensitivity(IntelligentParams::Su11 { k: h(dk), l }, eta, Some(mixer)).unwrap();
        let g = g_factor_su11(h(dk), l, eta).unwrap().value;
        prop_assert!((2.0 * h(dk).value() * s2 * r.delta_phi_sq.value() - g).abs() < 1e-12 * g);
    }
}

#[test]
fn su11_g_at_l_one_is_rational() {
    for eta in [0.1, 0.5, 1.0, 3.0, 20.0] {
        let want = (2.0 * eta * eta + 1.0) / (6.0 * eta * eta + 5.0);
        assert_relative_eq!(g_factor_su11(HalfInt::HALF, 1, eta).unwrap().value, want, max_relative = 1e-12);
    }
    let lim = g_limits(IntelligentParams::Su11 { k: HalfInt::HALF, l: 1 }).unwrap();
    assert_relative_eq!(lim.eta_to_zero, 0.2, max_relative = 1e-15);
    assert_relative_eq!(lim.eta_to_infinity.unwrap(), 1.0 / 3.0, max_relative = 1e-15);
}

#[test]
fn su2_examples() {
    let j = HalfInt::from_int(15);
    let lim = g_limits(IntelligentParams::Su2 { j, m0: HalfInt::from_int(14) }).unwrap();
    assert_relative_eq!(lim.eta_to_zero, 1.0 / (1.0 + 29.0 / 15.0), max_relative = 1e-15);
    let lim0 = g_limits(IntelligentParams::Su2 { j, m0: HalfInt::ZERO }).unwrap();
    assert_relative_eq!(lim0.eta_to_zero, 1.0 / 16.0, max_relative = 1e-15);
    for eta in [0.2, 0.5, 0.8] {
        let r = intelligent_sensitivity(IntelligentParams::Su2 { j: HalfInt::ONE, m0: HalfInt::ZERO }, eta, None).unwrap();
        assert_relative_eq!(r.delta_phi_sq.value(), (1.0 + eta * eta) / 4.0, max_relative = 1e-13);
        assert_eq!(r.n_bar, 2.0);
    }
    for dj in [20, 100, 400] {
        let r = intelligent_sensitivity(IntelligentParams::Su2 { j: h(dj), m0: HalfInt::ZERO }, 1e-6, None).unwrap();
        let jv = h(dj).value();
        assert_relative_eq!(r.delta_phi_sq.value().sqrt(), 1.0 / (2.0 * jv * (jv + 1.0)).sqrt(), max_relative = 1e-6);
    }
}

#[test]
fn su2_eta_bounds() {
    let j = HalfInt::from_int(3);
    let b = g_factor_su2(j, HalfInt::ONE, 1.0).unwrap();
    assert!(b.boundary && b.value == 1.0);
    assert!(g_factor_su2(j, HalfInt::ONE, 0.0).is_err());
    assert!(g_factor_su2(j, HalfInt::from_int(4), 0.5).is_err());
}

#[test]
fn su11_intelligent_example() {
    let mixer = MixerParam::from_sinh_sq(1.0).unwrap();
    let r = intelligent_sensitivity(IntelligentParams::Su11 { k: HalfInt::HALF, l: 1 }, 1.0, Some(mixer)).unwrap();
    assert_relative_eq!(r.delta_phi_sq.value(), 3.0 / 11.0, max_relative = 1e-13);
    assert_relative_eq!(r.n_bar, 5.0, max_relative = 1e-13);
    assert!(intelligent_sensitivity(IntelligentParams::Su11 { k: HalfInt::HALF, l: 1 }, 1.0, None).is_err());
}

#[test]
fn small_eta_sensitivity_limit() {
    let mixer = MixerParam::from_sinh_sq(1.0).unwrap();
    let lim = g_limits(IntelligentParams::Su11 { k: HalfInt::HALF, l: 1 }).unwrap();
    assert_relative_eq!(lim.delta_phi_sq_eta_to_zero(mixer).unwrap(), 1.0 / 5.0, max_relative = 1e-14);
}

#[test]
fn fixed_input_curve_special_cases() {
    for n in [3.0, 10.0, 50.0] {
        // l = 0, k = 1/2 reduces to the vacuum curve
        let v = su11_fixed_input_curve(HalfInt::HALF, 0, 1e-9, n).unwrap().value();
        assert_relative_eq!(v, 1.0 / (n * (n + 2.0)), max_relative = 1e-9);
        for l in [0usize, 2, 5] {
            let lp = (l + 1) as f64;
            if (n + 1.0) * (n + 1.0) <= 4.0 * lp * lp {
                continue;
            }
            let got = su11_fixed_input_curve(HalfInt::ONE, l, 1e-6, n).unwrap().value();
            assert_relative_eq!(got, 2.0 / ((n + 1.0).powi(2) - 4.0 * lp * lp), max_relative = 1e-9);
        }
    }
}

#[test]
fn fixed_beta_curve_is_the_small_eta_limit() {
    let mixer = MixerParam::new(0.9).unwrap();
    for l in [1usize, 5, 40, 150] {
        let r = intelligent_sensitivity(IntelligentParams::Su11 { k: HalfInt::HALF, l }, 1e-7, Some(mixer)).unwrap();
        let approx = su11_fixed_beta_small_eta(HalfInt::HALF, mixer, r.n_bar).value();
        assert_relative_eq!(r.delta_phi_sq.value(), approx, max_relative = 1e-9);
    }
}

#[test]
fn fixed_beta_sweep_decreases() {
    let mixer = MixerParam::from_sinh_sq(1.0).unwrap();
    for eta in [0.05, 0.5, 2.0] {
        let pts = su11_scaling_points(HalfInt::HALF, eta, mixer, 150).unwrap();
        assert_eq!(pts.len(), 150);
        assert!(pts.windows(2).all(|w| w[1].0 > w[0].0 && w[1].1 < w[0].1), "eta = {eta}");
    }
}

#[test]
fn regime_table_columns() {
    let mixer = MixerParam::new(1.0).unwrap();
    let t = regime_curves_su11(HalfInt::HALF, &[1, 2, 3], 0.3, mixer, &[5.0, 10.0]).unwrap();
    for c in ["regime", "k", "l", "eta", "beta", "n_bar", "delta_phi_sq"] {
        assert!(t.column(c).is_some(), "{c}");
    }
    assert!(!t.rows.is_empty());
}

#[test]
fn quasi_intelligent_values() {
    for j in [1i64, 10, 100] {
        let r = quasi_intelligent_stats(HalfInt::from_int(j)).unwrap();
        let jj = (j * (j + 1)) as f64;
        assert_relative_eq!(r.var_j3, 0.25, max_relative = 1e-14);
        assert_relative_eq!(r.var_j2, jj / 2.0 - 0.25, max_relative = 1e-14);
        assert_relative_eq!(r.mean_j1, jj.sqrt() / 2.0, max_relative = 1e-14);
        assert_relative_eq!(r.delta_phi_sq, 1.0 / jj, max_relative = 1e-13);
    }
    let big = quasi_intelligent_stats(HalfInt::from_int(1000)).unwrap();
    assert!((big.uncertainty_excess - 2.0).abs() < 1e-3);
    assert!(quasi_intelligent_stats(HalfInt::HALF).is_err());
}

#[test]
fn exponent_input_checks() {
    let few: Vec<(f64, f64)> = (1..5).map(|i| (i as f64, 1.0 / i as f64)).collect();
    assert!(exponent_estimate(&few).is_err());
    let flat: Vec<(f64, f64)> = (1..10).map(|_| (3.0, 1.0)).collect();
    assert!(exponent_estimate(&flat).is_err());
}
