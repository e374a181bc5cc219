use nckit_core::gauge::{
    complete_time_component, covariance_defect, field_strength, form_route_defect,
    gauge_transform_potential, invariance_witness, GaugePotential,
};
use nckit_core::sample::{self, PolyShape};
use nckit_core::{Poly, StarContext, ThetaProfile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_case(rng: &mut ChaCha8Rng, deg: u16) -> (StarContext, GaugePotential, Poly) {
    let theta = sample::dynamic_theta(rng, 2);
    let shape = PolyShape::new(2, deg, 1).total(deg);
    let spatial = [
        sample::imaginary_poly(rng, &shape),
        sample::imaginary_poly(rng, &shape),
        sample::imaginary_poly(rng, &shape),
    ];
    let a0 = sample::imaginary_poly(rng, &shape);
    let pot = complete_time_component(spatial, a0, &theta).unwrap();
    let lam = sample::imaginary_poly(rng, &PolyShape::new(2, 2, 1).total(deg));
    (StarContext::new(theta), pot, lam)
}

#[test]
fn covariance_on_random_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for order in 1..=2 {
        for _ in 0..6 {
            let (ctx, pot, lam) = random_case(&mut rng, 3);
            let d = covariance_defect(&pot, &lam, order, &ctx).unwrap();
            assert!(d.is_zero(), "{pot:?} {lam}: {d:?}");
        }
    }
}

#[test]
fn invariance_remainder_vanishes() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..6 {
        let (ctx, pot, lam) = random_case(&mut rng, 2);
        let w = invariance_witness(&pot, &lam, 2, &ctx).unwrap();
        assert!(w.remainder.is_zero(), "{}", w.remainder);
    }
}

#[test]
fn full_transformation_matches_rules() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..4 {
        let (ctx, pot, lam) = random_case(&mut rng, 2);
        for row in form_route_defect(&pot, &lam, 2, &ctx).unwrap() {
            assert!(row.iter().all(Poly::is_zero));
        }
    }
}

#[test]
fn spatial_square_is_covariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..4 {
        let (ctx, pot, lam) = random_case(&mut rng, 2);
        let c = ctx.with_cutoff(2);
        let tr = gauge_transform_potential(&pot, &lam, 2, &ctx).unwrap();
        let new = GaugePotential {
            components: [
                Poly::zero(),
                tr.spatial[0].clone(),
                tr.spatial[1].clone(),
                tr.spatial[2].clone(),
            ],
        };
        let f = field_strength(&pot, &c);
        let g = field_strength(&new, &c);
        let u = &tr.unitary;
        for k in 0..3 {
            let sq = c.star(&f.spatial[k], &f.spatial[k].conj());
            let sq_new = c.star(&g.spatial[k], &g.spatial[k].conj());
            assert_eq!(c.star3(&u.conj(), &sq, u), sq_new);
        }
    }
}

#[test]
fn static_theta_reduces_to_moyal_gauge_theory() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let theta = sample::theta(&mut rng, 0);
    let ctx = StarContext::new(theta.clone());
    let shape = PolyShape::new(2, 2, 1);
    let pot = complete_time_component(
        [
            sample::imaginary_poly(&mut rng, &shape),
            sample::imaginary_poly(&mut rng, &shape),
            sample::imaginary_poly(&mut rng, &shape),
        ],
        sample::imaginary_poly(&mut rng, &shape),
        &theta,
    )
    .unwrap();
    let fs = field_strength(&pot, &ctx);
    assert_eq!(fs.mixed, fs.covariant);
    let lam = sample::imaginary_poly(&mut rng, &shape);
    assert!(covariance_defect(&pot, &lam, 2, &ctx).unwrap().is_zero());
}

#[test]
fn commutative_limit_is_abelian() {
    let ctx = StarContext::new(ThetaProfile::zero());
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let shape = PolyShape::new(3, 2, 1);
    let pot = complete_time_component(
        [
            sample::imaginary_poly(&mut rng, &shape),
            sample::imaginary_poly(&mut rng, &shape),
            sample::imaginary_poly(&mut rng, &shape),
        ],
        Poly::zero(),
        ctx.theta(),
    )
    .unwrap();
    let lam = sample::imaginary_poly(&mut rng, &shape);
    let tr = gauge_transform_potential(&pot, &lam, 2, &ctx).unwrap();
    for k in 1..=3 {
        let expect = pot.a(k) + &(&Poly::eps() * &lam.partial(k));
        assert_eq!(tr.spatial[k - 1], expect);
    }
}
