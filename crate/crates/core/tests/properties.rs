//! Cross-module invariants over random inputs.

use evenspin::bell::{bell_correlation, two_particle_spectrum, BellSetting, ChshPlane, TwoParticleSystem};
use evenspin::dirac::build_dirac_set;
use evenspin::even_spin::{build_even_spin, even_spin_spectrum, spin_projection_magnitude};
use evenspin::extended::{build_even_velocity_set, robinson_circle_samples};
use evenspin::little_algebra::FrameTriad;
use evenspin::{FourMomentum, Tolerance, Vec3};
use proptest::prelude::*;

fn momentum() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-5.0..5.0f64).prop_filter("non-zero", |p| p.iter().map(|x| x * x).sum::<f64>() > 1e-4)
}

fn unit() -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-1.0..1.0f64)
        .prop_filter("away from zero", |v| Vec3(*v).norm() > 0.1)
        .prop_map(|v| Vec3(v).normalized().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn correlation_closed_form_matches_contraction(m in 0.05..3.0f64, p in momentum(), a in unit(), b in unit()) {
        let sys = TwoParticleSystem::new(FourMomentum::new(m, Vec3(p)).unwrap()).unwrap();
        let c = bell_correlation(&sys, &BellSetting::new(a, b).unwrap()).unwrap();
        prop_assert!(c.abs_diff() < 1e-10);
        prop_assert!(c.e_numeric.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn perpendicular_correlation_depends_only_on_angle(m in 0.05..3.0f64, p in momentum(), theta in 0.0..360.0f64) {
        let sys = TwoParticleSystem::new(FourMomentum::new(m, Vec3(p)).unwrap()).unwrap();
        let a = ChshPlane::Perp.direction(&sys.triad, 17.0);
        let b = ChshPlane::Perp.direction(&sys.triad, 17.0 + theta);
        let c = bell_correlation(&sys, &BellSetting::new(a, b).unwrap()).unwrap();
        prop_assert!((c.e_numeric + a.dot(b)).abs() < 1e-10);
    }

    #[test]
    fn chsh_never_exceeds_tsirelson(m in 0.05..3.0f64, p in momentum(), phi in 0.0..180.0f64) {
        let sys = TwoParticleSystem::new(FourMomentum::new(m, Vec3(p)).unwrap()).unwrap();
        for plane in [ChshPlane::Perp, ChshPlane::Mixed] {
            let s = evenspin::bell::chsh_value(&sys, &plane.setting(&sys.triad, phi)).unwrap();
            prop_assert!(s <= 2.0 * 2f64.sqrt() + 1e-9);
        }
    }

    #[test]
    fn two_particle_spectrum_follows_contraction_param(m in 0.05..3.0f64, p in momentum()) {
        let fm = FourMomentum::new(m, Vec3(p)).unwrap();
        let spec = two_particle_spectrum(&TwoParticleSystem::new(fm).unwrap()).unwrap();
        let expected = evenspin::bell::expected_total_spectrum(fm.contraction_param());
        for (v, e) in spec.values.iter().zip(expected) {
            prop_assert!((v - e).abs() < 1e-11);
        }
    }

    #[test]
    fn even_spin_spectrum_law(m in 0.0..3.0f64, p in momentum(), a in unit()) {
        let fm = FourMomentum::new(m, Vec3(p)).unwrap();
        let es = build_even_spin(&build_dirac_set(fm), &FrameTriad::for_momentum(fm.momentum())).unwrap();
        let spec = even_spin_spectrum(&es, a).unwrap();
        let s = spin_projection_magnitude(&fm, a);
        prop_assert!((spec.values[3] - s).abs() < 1e-10);
    }

    #[test]
    fn even_hamiltonian_forms(m in 0.01..3.0f64, p in momentum()) {
        let d = build_dirac_set(FourMomentum::new(m, Vec3(p)).unwrap());
        let (_, r) = build_even_velocity_set(&d, Tolerance::uniform(1e-11)).unwrap();
        prop_assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }

    #[test]
    fn ring_points_sit_at_radius_from_axis(p in momentum(), s in prop::sample::select(vec![-2.0, -0.5, 0.5, 1.0, 1.5]), frames in 1usize..5) {
        let fm = FourMomentum::new(0.0, Vec3(p)).unwrap();
        let n = fm.momentum().normalized().unwrap();
        let r = (s / fm.p_mag()).abs();
        for q in robinson_circle_samples(&fm, s, 7, frames, None).unwrap() {
            let rel = Vec3::new(q.x, q.y, q.z) - n * q.t;
            prop_assert!((rel.norm() - r).abs() < 1e-12 * r.max(1.0));
            prop_assert!(rel.dot(n).abs() < 1e-12 * r.max(1.0));
        }
    }
}
