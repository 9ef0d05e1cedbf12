//! Property tests for the structural invariants: coordinate round trips,
//! affinity of the soliton function in c, scaling covariance of the end
//! analysis, and exactness of the discrete potential shift.

use proptest::prelude::*;
use warpsol::ambient::{AmbientSpace, SchwarzschildParams};
use warpsol::oscillation::{critical_curve, EndProfile, ProfileSpec};
use warpsol::soliton::SolitonProblem;
use warpsol::spectral::{lambda1, Boundary, SLProblem};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn schwarzschild_round_trip(mass in 0.2f64..1.5, frac in 0.01f64..0.98) {
        let space = AmbientSpace::schwarzschild(SchwarzschildParams::plain(3, mass)).unwrap();
        let r0 = space.horizon_radius().unwrap();
        let r = r0 * (1.0 + 1e-3) + (100.0 - r0 * (1.0 + 1e-3)) * frac;
        let t = space.t_of_r(r).unwrap();
        let back = space.r_of_t(t).unwrap();
        prop_assert!((back - r).abs() < 1e-6 * r.max(1.0), "r = {r}, back = {back}");
    }

    #[test]
    fn t_of_r_is_monotone(mass in 0.2f64..1.5, a in 0.02f64..0.5, d in 0.05f64..0.5) {
        let space = AmbientSpace::schwarzschild(SchwarzschildParams::ads(3, mass, 1)).unwrap();
        let r0 = space.horizon_radius().unwrap();
        let r1 = r0 * (1.0 + a);
        let r2 = r1 + d;
        prop_assert!(space.t_of_r(r2).unwrap() > space.t_of_r(r1).unwrap());
    }

    #[test]
    fn zeta_is_affine_in_c(c1 in -3.0f64..3.0, c2 in -3.0f64..3.0, t in -2.0f64..2.0) {
        let space = AmbientSpace::hyperbolic_hyperspheres();
        let z1 = SolitonProblem::new(space.clone(), c1, 2).unwrap().zeta(t).unwrap();
        let z2 = SolitonProblem::new(space.clone(), c2, 2).unwrap().zeta(t).unwrap();
        let mid = SolitonProblem::new(space.clone(), 0.5 * (c1 + c2), 2)
            .unwrap()
            .zeta(t)
            .unwrap();
        prop_assert!((0.5 * (z1 + z2) - mid).abs() < 1e-10 * (1.0 + z1.abs() + z2.abs()));
    }

    #[test]
    fn critical_curve_scaling_covariance(
        lambda in 0.1f64..50.0,
        exponent in 1.5f64..4.0,
        r in 3.0f64..80.0,
    ) {
        let base = EndProfile::new(
            ProfileSpec::power(exponent),
            ProfileSpec::constant(0.0),
            1.0,
        ).unwrap();
        let scaled = EndProfile::new(
            ProfileSpec::scaled_power(lambda, exponent),
            ProfileSpec::constant(0.0),
            1.0,
        ).unwrap();
        let c1 = critical_curve(&base, r).unwrap();
        let c2 = critical_curve(&scaled, r).unwrap();
        prop_assert!((c1 / c2 - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lambda1_potential_shift(shift in -4.0f64..4.0) {
        let base = SLProblem::new(|_| 1.0, |x: f64| x.sin(), 0.0, 1.5, Boundary::Dirichlet).unwrap();
        let shifted = SLProblem::new(
            |_| 1.0,
            move |x: f64| x.sin() + shift,
            0.0,
            1.5,
            Boundary::Dirichlet,
        ).unwrap();
        let l0 = lambda1(&base, 64).unwrap().lambda1;
        let ls = lambda1(&shifted, 64).unwrap().lambda1;
        prop_assert!((ls - (l0 - shift)).abs() < 1e-10, "l0 = {l0}, ls = {ls}");
    }

    #[test]
    fn flow_param_monotone_on_samples(t1 in -3.0f64..3.0, gap in 0.01f64..2.0) {
        let space = AmbientSpace::hyperbolic_horospheres();
        let s1 = space.flow_param(t1).unwrap();
        let s2 = space.flow_param(t1 + gap).unwrap();
        prop_assert!(s2 > s1);
    }
}
