use nckit_core::planewave::{
    compare_action, effective_action, harmonic_spectrum, is_polarised, planewave_field_strength,
    printed_action, tau, PlaneWaveSpec, Profile, ACTION_FORMULA,
};
use nckit_core::poly::{c_real, q};
use nckit_core::sample;
use nckit_core::StarContext;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn r(rng: &mut ChaCha8Rng) -> BigRational {
    q(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

fn random_spec(rng: &mut ChaCha8Rng, profile: Profile) -> PlaneWaveSpec {
    loop {
        let k = [r(rng), r(rng), r(rng)];
        if let Ok(s) = PlaneWaveSpec::new(r(rng), k, [r(rng), r(rng), r(rng), r(rng)], profile.clone()) {
            return s;
        }
    }
}

/// Signed first-principles value of the quadratic coefficient.
fn derived_quad(s: &PlaneWaveSpec) -> BigRational {
    let (k2, p2, kp) = (s.k_sq(), s.p_sq(), s.k_dot_p());
    let (om, p0) = (&s.omega, &s.p[0]);
    let two = q(2, 1);
    &k2 * &p2 + &two * om * p0 * &kp - &kp * &kp - om * om * &p2 - p0 * p0 * &k2
}

#[test]
fn action_coefficients_on_random_specs() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..8 {
        let ctx = StarContext::new(sample::dynamic_theta(&mut rng, 2));
        let s = random_spec(&mut rng, Profile::Cos);
        let cmp = compare_action(&s, &ctx).unwrap();
        assert_eq!(cmp.report.quad_coeff, c_real(derived_quad(&s)));
        assert!(cmp.cubic_matches);
        let (_, pc) = printed_action(&s);
        let expect = tau(&s, ctx.theta()).scale(&pc);
        assert_eq!(cmp.report.cubic_density, expect);
        assert!(cmp.report.boundary.is_zero());
        if !cmp.quad_matches {
            assert_eq!(cmp.diagnostics[0].formula, ACTION_FORMULA);
        }
    }
}

#[test]
fn quadratic_coefficient_symmetries() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let ctx = StarContext::new(sample::dynamic_theta(&mut rng, 1));
    for _ in 0..5 {
        let s = random_spec(&mut rng, Profile::Cos);
        let mut flipped = s.clone();
        flipped.omega = -s.omega.clone();
        flipped.k = s.k.clone().map(|x| -x);
        flipped.p = s.p.clone().map(|x| -x);
        let a = effective_action(&s, &ctx).unwrap();
        let b = effective_action(&flipped, &ctx).unwrap();
        assert_eq!(a.quad_coeff, b.quad_coeff);
    }
}

#[test]
fn polarised_and_generic_cubic_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let theta = sample::dynamic_theta(&mut rng, 2);
        let ctx = StarContext::new(theta.clone());
        let mut s = random_spec(&mut rng, Profile::Cos);
        // p parallel to k is always polarised
        let lam = r(&mut rng);
        for i in 0..3 {
            s.p[i + 1] = &lam * &s.k[i];
        }
        assert!(is_polarised(&s, &theta));
        assert!(effective_action(&s, &ctx).unwrap().cubic_density.is_zero());
        assert!(harmonic_spectrum(&s, &theta).unwrap().is_empty());
    }
}

#[test]
fn polynomial_profiles_are_consistent() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let theta = sample::dynamic_theta(&mut rng, 1);
    let ctx = StarContext::new(theta);
    for deg in 1..=4 {
        let coeffs = (0..=deg).map(|_| r(&mut rng)).chain([q(1, 1)]).collect();
        let s = random_spec(&mut rng, Profile::Poly(coeffs));
        let pw = planewave_field_strength(&s, &ctx).unwrap();
        assert!(pw.consistent);
        assert!(pw.pointwise);
    }
}
