use approx::assert_relative_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use su_interferometry::interferometer::*;
use su_interferometry::state::{Group, RepState};
use su_interferometry::su11::{su11_state_moments, Su11Irrep};
use su_interferometry::su2::{su2_state_moments, Su2Irrep};
use su_interferometry::HalfInt;

proptest! {
    #[test]
    fn element_chain_equals_closed_observable(phi in -3.1f64..3.1, beta in 0.0f64..2.5) {
        for (group, b) in [(Group::Su2, None), (Group::Su11, Some(beta))] {
            let a = output_observable(group, phi, b).unwrap();
            let e = output_observable_from_elements(group, phi, b).unwrap();
            let scale = 1.0 + a.c.norm();
            prop_assert!((a.c - e.c).norm() < 1e-12 * scale);
            prop_assert!((a.dc - e.dc).norm() < 1e-12 * scale);
        }
    }

    #[test]
    fn boost_preserves_the_lorentz_form(beta in -3.0f64..3.0, x in -5.0f64..5.0, y in -5.0f64..5.0, z in -5.0f64..5.0) {
        let m = element_matrix(ElementKind::Boost2, beta).matrix;
        let v = nalgebra::Vector3::new(x, y, z);
        let w = m * v;
        let form = |u: nalgebra::Vector3<f64>| u.z * u.z - u.x * u.x - u.y * u.y;
        prop_assert!((form(w) - form(v)).abs() < 1e-9 * (1.0 + v.norm_squared() * beta.cosh().powi(2)));
    }
}

#[test]
fn observables_reject_mismatched_mixers() {
    assert!(output_observable(Group::Su2, 0.1, Some(1.0)).is_err());
    assert!(output_observable(Group::Su11, 0.1, None).is_err());
    assert!(output_observable(Group::Su11, 0.1, Some(f64::NAN)).is_err());
}

#[test]
fn number_states_follow_the_catalog() {
    for (dj, dm) in [(2, 0), (6, 2), (9, -3)] {
        let (j, m) = (HalfInt::from_doubled(dj), HalfInt::from_doubled(dm));
        let irrep = Su2Irrep::new(j).unwrap();
        let s = RepState::basis(irrep.label(), irrep.index(m).unwrap()).unwrap();
        let mom = su2_state_moments(&s).unwrap();
        for phi in [0.4, 1.3, 2.5] {
            let got = phase_uncertainty(&mom, &output_observable(Group::Su2, phi, None).unwrap()).value();
            let want = su2_fock_sensitivity(j, m, phi).unwrap().delta_phi_sq.value();
            assert_relative_eq!(got, want, max_relative = 1e-10);
        }
    }
    let mixer = MixerParam::from_sinh_sq(1.0).unwrap();
    for (k, n) in [(HalfInt::HALF, 0usize), (HalfInt::ONE, 3)] {
        let s = RepState::basis(Su11Irrep::new(k, n + 4).unwrap().label(), n).unwrap();
        let mom = su11_state_moments(&s).unwrap();
        for phi in [0.3, 1.7] {
            let got = phase_uncertainty(&mom, &output_observable(Group::Su11, phi, Some(mixer.beta())).unwrap()).value();
            let want = su11_kn_sensitivity(k, n, mixer, phi).unwrap().delta_phi_sq.value();
            assert_relative_eq!(got, want, max_relative = 1e-10);
        }
    }
}

#[test]
fn glauber_examples() {
    let g = GlauberAmp::from_polar(1.0, 0.0, 1.0, 0.0).unwrap();
    let r = su2_glauber_sensitivity(&g);
    assert_relative_eq!(r.delta_phi_sq.value(), 0.5, max_relative = 1e-14);
    assert_relative_eq!(r.n_bar, 2.0, max_relative = 1e-14);

    let mixer = MixerParam::from_sinh_sq(1.0).unwrap();
    let r = su11_glauber_sensitivity(&g, mixer);
    assert_relative_eq!(r.delta_phi_sq.value(), 0.5, max_relative = 1e-14);
    assert_relative_eq!(r.n_bar, 3.0 * 2f64.sqrt() - 1.0, max_relative = 1e-14);

    let quarter = GlauberAmp::from_polar(1.0, std::f64::consts::FRAC_PI_4, 1.0, std::f64::consts::FRAC_PI_4).unwrap();
    assert!(su11_glauber_sensitivity(&quarter, mixer).delta_phi_sq.is_infinite());
}

#[test]
fn squeezed_input_consistency() {
    let mixer = MixerParam::new(1f64.asinh()).unwrap();
    let r = su2_squeezed_sensitivity(Complex64::new(1.0, 0.0), mixer);
    assert_relative_eq!((r.n_bar + 1.0).powi(2), 8.0, max_relative = 1e-14);
    let curves = r.curves.expect("squeezed input reports both regimes");
    assert_relative_eq!(curves.fixed_input(r.n_bar).value(), 1.0, max_relative = 1e-13);
    assert_relative_eq!(curves.fixed_interferometer(r.n_bar).value(), r.delta_phi_sq.value(), max_relative = 1e-13);
}

#[test]
fn coherent_su11_regimes_meet_at_the_operating_point() {
    let mixer = MixerParam::new(0.7).unwrap();
    let r = su11_coherent_sensitivity(HalfInt::HALF, Complex64::default(), mixer).unwrap();
    let curves = r.curves.unwrap();
    assert_relative_eq!(curves.fixed_input(r.n_bar).value(), r.delta_phi_sq.value(), max_relative = 1e-12);
    assert_relative_eq!(curves.fixed_interferometer(r.n_bar).value(), r.delta_phi_sq.value(), max_relative = 1e-12);
}
